"""
switchstab CLI interface.
"""

import platform
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import typer

from switchstab.exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    DomainError,
    EigenSolverError,
    EmptyHorizonError,
    GeneratorError,
    InvalidSystemError,
    InvalidWeightsError,
    MissingConfigurationParameter,
    NoWindow,
    NonFiniteMatrixError,
    OverflowRiskError,
    QuadratureError,
    ScaleTooSmall,
    ScaleUnderflow,
    SpecOutputError,
    SpecParsingError,
    SpecValidationError,
    WindowSearchError,
)

EXIT_INPUT = 2
EXIT_SEARCH = 3
EXIT_INFEASIBLE = 4

CONSTRUCTION_ERRORS = (NoWindow, ScaleTooSmall, ScaleUnderflow)
SEARCH_ERRORS = (WindowSearchError, QuadratureError, EigenSolverError)
INPUT_ERRORS = (
    SpecParsingError,
    SpecValidationError,
    SpecOutputError,
    ConfigurationError,
    MissingConfigurationParameter,
    DomainError,
    InvalidSystemError,
    GeneratorError,
    DimensionMismatchError,
    NonFiniteMatrixError,
    InvalidWeightsError,
    EmptyHorizonError,
    OverflowRiskError,
    ValueError,
)


def exit_code(error: Exception) -> int:
    """Exit code for an exception raised while running a command."""
    if isinstance(error, CONSTRUCTION_ERRORS):
        return EXIT_INFEASIBLE
    if isinstance(error, SEARCH_ERRORS):
        return EXIT_SEARCH
    if isinstance(error, INPUT_ERRORS):
        return EXIT_INPUT
    return 1


@contextmanager
def reported(action: str):
    """Turn exceptions into a message on stderr and the matching exit code."""
    try:
        yield
    except typer.Exit:
        raise
    except Exception as e:
        from switchstab.logger import get_logger, log_exception, log_run_state

        code = exit_code(e)
        if code == 1:
            log_exception(get_logger(), e, context=action)
        log_run_state(
            get_logger(),
            {'status': 'run_failed', 'error_type': type(e).__name__, 'error_message': str(e), 'exit_code': code},
        )
        typer.echo(f'Error {action}: {e}', err=True)
        raise typer.Exit(code=code) from e


def version_callback(value: bool):
    """Callback for version option."""
    from switchstab.__version__ import __version__

    if value:
        typer.echo(f'switchstab {__version__}')
        raise typer.Exit()


app = typer.Typer(
    help='switchstab: stability of linear systems switched by a Markov chain.',
    add_completion=False,
    context_settings={'help_option_names': ['-h', '--help']},
)

SEED_OPTION = typer.Option(0, '--seed', envvar='SWITCHSTAB_SEED', help='Master seed (env: SWITCHSTAB_SEED).')
WORKERS_OPTION = typer.Option(1, '--workers', '-w', help='Replica threads; 0 uses every CPU. Results do not depend on it.')
TOL_OPTION = typer.Option(1e-10, '--tol', help='Absolute quadrature tolerance.')


@app.callback()
def main(
    version: bool = typer.Option(
        False, '--version', '-v', callback=version_callback, is_eager=True, help='Show version and exit.'
    ),
    log_level: str = typer.Option('WARNING', '--log-level', help='Logging level for messages on stderr.'),
    log_dir: Optional[Path] = typer.Option(None, '--log-dir', help='Also write log.txt into this directory.'),
):
    """
    switchstab: stability of linear systems switched by a Markov chain.
    """
    from switchstab.logger import setup_logging

    setup_logging(str(log_dir) if log_dir is not None else None, level=log_level.upper())


def _started(command: str, spec_file: Optional[Path] = None) -> None:
    from switchstab.logger import get_logger, log_run_state

    log_run_state(
        get_logger(),
        {'status': 'run_started', 'command': command, 'spec_file': str(spec_file) if spec_file else 'none',
         'python_version': platform.python_version()},
    )


def _emit_csv(frame, out: Optional[Path], footer=None) -> None:
    from switchstab.data_manager import ResultWriter, frame_to_csv

    if out is None:
        typer.echo(frame_to_csv(frame, footer), nl=False)
    else:
        path = ResultWriter().write_csv(frame, out, footer)
        typer.echo(f"Results written to '{path}'.")


def _format_check(report: dict) -> str:
    yes_no = {True: 'yes', False: 'no'}
    lines = [f'family: {report["family"]}']
    for i, (verdict, normal) in enumerate(zip(report['hurwitz'], report['normal'])):
        lines.append(f'A[{i}]: {verdict}, {"normal" if normal else "not normal"}')
    for pair, commuting in report['commute'].items():
        lines.append(f'commute A[{pair.replace(",", "], A[")}]: {yes_no[commuting]}')
    lines.append(f'stationary distribution: {report["stationary"]}')
    lines.append(f'average matrix: {report["average"]}')
    lines.append(f'average matrix: {report["average_verdict"]}')
    if 'convex_combinations_hurwitz' in report:
        lines.append(f'all convex combinations Hurwitz: {yes_no[report["convex_combinations_hurwitz"]]}')
    lines.append('sufficient conditions:')
    lines.append(f'  every A_i normal and Hurwitz (stable, monotone norm): {yes_no[report["normal_hurwitz"]]}')
    lines.append(f'  commuting with Hurwitz average (stable for every rate): {yes_no[report["commuting_stable"]]}')
    lines.append(f'  every A_i Hurwitz (stable for slow switching): {yes_no[report["all_hurwitz"]]}')
    lines.append(f'  average Hurwitz (stable for fast switching): {yes_no[report["average_hurwitz"]]}')
    return '\n'.join(lines)


@app.command('check')
def check_cmd(
    spec_file: Path = typer.Argument(..., help='System spec file (JSON or YAML).'),
    as_json: bool = typer.Option(False, '--json', help='Print the report as JSON.'),
):
    """
    Report the Hurwitz and normality verdicts, commutation, stationary
    distribution and averaged matrix of a system.

    Example: switchstab check planar.json
    """
    from switchstab.application_interfaces.api import check_system, load_system
    from switchstab.data_manager import to_json

    _started('check', spec_file)
    with reported('checking system'):
        report = check_system(load_system(spec_file))
        typer.echo(to_json(report) if as_json else _format_check(report), nl=not as_json)


@app.command('lyapunov')
def lyapunov_cmd(
    spec_file: Path = typer.Argument(..., help='System spec file (JSON or YAML).'),
    T: float = typer.Option(1000.0, '--T', help='Averaging horizon.'),
    burn_in: Optional[float] = typer.Option(None, '--burn-in', help='Discarded initial time (default T/10).'),
    reps: int = typer.Option(64, '--reps', help='Number of replicas.'),
    seed: int = SEED_OPTION,
    workers: int = WORKERS_OPTION,
    out: Optional[Path] = typer.Option(None, '--out', '-o', help='Optional CSV file for the estimate.'),
    path_out: Optional[Path] = typer.Option(
        None, '--path-out', help='CSV file for the jump path of replica 0: k, state, holding_time.'
    ),
    trajectory_out: Optional[Path] = typer.Option(
        None, '--trajectory-out', help='CSV file for the trajectory of replica 0: t, state, log_radius, theta.'
    ),
    progress: bool = typer.Option(False, '--progress', help='Show a progress bar.'),
):
    """
    Estimate the top Lyapunov exponent by Monte Carlo. The jump path and
    trajectory of replica 0 can be saved alongside.

    Example: switchstab lyapunov planar.json --T 2000 --reps 200 --seed 7
    """
    import pandas as pd

    from switchstab.application_interfaces.api import estimate_lyapunov, load_system, sample_trajectory
    from switchstab.data_manager import ResultWriter

    _started('lyapunov', spec_file)
    with reported('estimating the Lyapunov exponent'):
        loaded = load_system(spec_file)
        estimate = estimate_lyapunov(loaded, T, burn_in, reps, seed, workers, progress)
        verdict = estimate.verdict(3.0)
        typer.echo(f'mean={estimate.mean!r} stderr={estimate.stderr!r} verdict={verdict}')
        if out is not None:
            frame = pd.DataFrame(
                [{'mean': estimate.mean, 'stderr': estimate.stderr, 'replicas': estimate.replicas,
                  'horizon': estimate.horizon, 'burn_in': estimate.burn_in, 'verdict': verdict}]
            )
            _emit_csv(frame, out)
        if path_out is not None or trajectory_out is not None:
            path_frame, trajectory = sample_trajectory(loaded, T, burn_in, seed)
            writer = ResultWriter()
            for frame, target, label in ((path_frame, path_out, 'Path'), (trajectory, trajectory_out, 'Trajectory')):
                if target is not None:
                    typer.echo(f"{label} written to '{writer.write_csv(frame, target)}'.")


@app.command('scan')
def scan_cmd(
    spec_file: Path = typer.Argument(..., help='System spec file (JSON or YAML).'),
    r_grid: str = typer.Option('0.01:100:21', '--r-grid', help='Logarithmic rate grid min:max:points.'),
    analytic: bool = typer.Option(True, '--analytic/--no-analytic', help='Closed-form exponent column.'),
    mc: bool = typer.Option(True, '--mc/--no-mc', help='Monte Carlo exponent columns.'),
    T: float = typer.Option(500.0, '--T', help='Averaging horizon per rate.'),
    reps: int = typer.Option(32, '--reps', help='Replicas per rate.'),
    seed: int = SEED_OPTION,
    workers: int = WORKERS_OPTION,
    tol: float = TOL_OPTION,
    out: Optional[Path] = typer.Option(None, '--out', '-o', help='CSV file; stdout when omitted.'),
):
    """
    Exponents across switching rates: CSV columns r, lambda_analytic, lambda_mc, mc_stderr.

    Example: switchstab scan planar.json --r-grid 0.01:100:41 --no-mc --out scan.csv
    """
    from switchstab.application_interfaces.api import load_system, parse_rate_grid, scan_rates

    _started('scan', spec_file)
    with reported('scanning rates'):
        rates = parse_rate_grid(r_grid)
        loaded = load_system(spec_file, tol)
        frame = scan_rates(loaded, rates, analytic, mc, T, None, reps, seed, workers, tol)
        _emit_csv(frame, out)


@app.command('window')
def window_cmd(
    alpha: float = typer.Option(..., '--alpha', help='Decay rate alpha > 0.'),
    c: float = typer.Option(..., '--c', help='Coupling c > 0.'),
    tol: float = TOL_OPTION,
    out: Optional[Path] = typer.Option(None, '--out', '-o', help='Optional JSON file for the report.'),
):
    """
    Locate the instability window of the planar pair with parameters alpha and c.

    Example: switchstab window --alpha 0.05 --c 1
    """
    from switchstab.application_interfaces.api import locate_window
    from switchstab.data_manager import ResultWriter, to_json

    _started('window')
    with reported('locating the instability window'):
        report = locate_window(alpha, c, tol)
        typer.echo(to_json(report), nl=False)
        if out is not None:
            ResultWriter().write_json(report, out)


@app.command('construct')
def construct_cmd(
    k: int = typer.Option(..., '--k', help='Number of windows (blocks).'),
    alpha1: float = typer.Option(..., '--alpha1', help='Decay rate of the first block.'),
    c1: float = typer.Option(..., '--c1', help='Coupling of the first block.'),
    N: Optional[float] = typer.Option(None, '--N', help='Scale factor between blocks (default 2 b1/a1).'),
    rate: float = typer.Option(1.0, '--r', help='Switching rate stored in the spec.'),
    tol: float = TOL_OPTION,
    out: Path = typer.Option(Path('system.json'), '--out', '-o', help='Spec file to write.'),
):
    """
    Build the 2k x 2k block system with k instability windows. The windows
    report is written next to the spec as <out>.windows.json.

    Example: switchstab construct --k 3 --alpha1 0.05 --c1 1 --out sys.json
    """
    from switchstab.application_interfaces.api import construct_multi
    from switchstab.data_manager import ResultWriter, to_json

    _started('construct')
    with reported('constructing the system'):
        document, report = construct_multi(k, alpha1, c1, N, tol, rate)
        writer = ResultWriter()
        spec_path = writer.write_json(document, out)
        writer.write_json(report, out.with_suffix('.windows.json'))
        typer.echo(to_json(report), nl=False)
        typer.echo(f"System written to '{spec_path}'.")


@app.command('density')
def density_cmd(
    lam: float = typer.Option(..., '--lambda', help='Ratio r/c > 0.'),
    points: int = typer.Option(4096, '--points', help='Number of grid points on [0, 2 pi).'),
    tol: float = TOL_OPTION,
    out: Optional[Path] = typer.Option(None, '--out', '-o', help='CSV file; stdout when omitted.'),
):
    """
    Angular invariant densities on an offset grid: CSV columns theta, p0, p1
    with footer lines holding G and C.

    Example: switchstab density --lambda 1 --points 4096 --out density.csv
    """
    from switchstab.application_interfaces.api import density_table

    _started('density')
    with reported('computing densities'):
        frame, G, C = density_table(lam, points, tol)
        _emit_csv(frame, out, footer=[f'G={G!r}', f'C={C!r}'])


@app.command('gscan')
def gscan_cmd(
    lambda_grid: str = typer.Option('0.001:1000:61', '--lambda-grid', help='Logarithmic lambda grid min:max:points.'),
    tol: float = TOL_OPTION,
    out: Optional[Path] = typer.Option(None, '--out', '-o', help='CSV file; stdout when omitted.'),
):
    """
    The function G over a grid of lambda = r/c: CSV columns lambda, G.

    Example: switchstab gscan --lambda-grid 0.001:1000:61 --out g.csv
    """
    from switchstab.application_interfaces.api import g_table, parse_rate_grid

    _started('gscan')
    with reported('scanning G'):
        lambdas = parse_rate_grid(lambda_grid, name='lambda grid')
        _emit_csv(g_table(lambdas, tol), out)


@app.command('kurtz')
def kurtz_cmd(
    spec_file: Path = typer.Argument(..., help='System spec file (JSON or YAML).'),
    T: float = typer.Option(10.0, '--T', help='Horizon.'),
    r_list: str = typer.Option('1,10,100,1000', '--r-list', help='Comma-separated switching rates.'),
    reps: int = typer.Option(64, '--reps', help='Replicas per rate.'),
    seed: int = SEED_OPTION,
    workers: int = WORKERS_OPTION,
    out: Optional[Path] = typer.Option(None, '--out', '-o', help='CSV file; stdout when omitted.'),
):
    """
    Expected propagator norm against the averaged-flow limit: CSV columns
    r, mean_norm, stderr, limit.

    Example: switchstab kurtz fast_only.json --T 10 --r-list 1,10,100,1000
    """
    from switchstab.application_interfaces.api import kurtz_table, load_system, parse_rate_list

    _started('kurtz', spec_file)
    with reported('estimating propagator norms'):
        rates = parse_rate_list(r_list)
        frame = kurtz_table(load_system(spec_file), T, rates, reps, seed, workers)
        _emit_csv(frame, out)


if __name__ == '__main__':
    app()
