"""Configuration, Python API and command-line interface."""
