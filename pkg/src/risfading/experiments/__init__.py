"""Experiment runners and command line interface."""

from .config import ConfigError, ExperimentConfig, load_config
from .montecarlo import empirical_crossover, simulate_snr
from .runners import (
    run_eigenspectrum,
    run_hardening,
    run_kronecker_distance,
    run_validate,
)
from .table import ResultTable
