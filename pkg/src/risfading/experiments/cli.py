"""Command line entry point: ``risfading <subcommand> [options]``.

Exit status is 0 on success, 1 when ``validate`` finds a failing invariant
and 2 for configuration errors.
"""

from __future__ import annotations

import functools
import sys

import click

from .config import ConfigError, load_config, split_assignment
from .runners import (
    run_eigenspectrum,
    run_hardening,
    run_kronecker_distance,
    run_validate,
)

EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2


def common_options(func):
    @click.option("--config", "config_path", type=click.Path(dir_okay=False), help="key=value config file.")
    @click.option("--seed", type=int, help="Master seed (unsigned 64-bit).")
    @click.option("--trials", type=int, help="Monte Carlo trials per size.")
    @click.option("--out", type=click.Path(dir_okay=False), help="CSV output path; stdout if omitted.")
    @click.option("--workers", type=int, default=1, show_default=True, help="Parallel workers.")
    @click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE", help="Override a config key (repeatable).")
    @functools.wraps(func)
    def wrapper(config_path, seed, trials, out, workers, overrides, **kwargs):
        items = {}
        try:
            for text in overrides:
                key, value = split_assignment(text, "--set: ")
                items[key] = value
            for key, value in (("seed", seed), ("trials", trials), ("out", out)):
                if value is not None:
                    items[key] = str(value)
            cfg = load_config(config_path, items)
            if workers < 1:
                raise ConfigError("--workers must be >= 1")
        except ConfigError as exc:
            click.echo(f"configuration error: {exc}", err=True)
            sys.exit(EXIT_CONFIG_ERROR)
        return func(cfg, workers, **kwargs)

    return wrapper


def _emit(table, cfg):
    if cfg.out:
        meta = table.write(cfg.out)
        click.echo(f"wrote {cfg.out} and {meta}", err=True)
    else:
        click.echo(table.to_csv(), nl=False)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Correlated Rayleigh fading and channel hardening for planar RIS."""


@main.command()
@common_options
def eigenspectrum(cfg, workers):
    """Eigenvalues of the correlation matrix for each element spacing."""
    _emit(run_eigenspectrum(cfg), cfg)


@main.command("kronecker-distance")
@common_options
def kronecker_distance(cfg, workers):
    """Correlation matrix distance between exact and Kronecker models."""
    _emit(run_kronecker_distance(cfg), cfg)


@main.command()
@common_options
def hardening(cfg, workers):
    """Monte Carlo SNR with optimized and random phases."""
    _emit(run_hardening(cfg, workers), cfg)


@main.command()
@common_options
def validate(cfg, workers):
    """Check the model invariants and report measured values."""
    table, ok = run_validate(cfg, workers)
    _emit(table, cfg)
    if not ok:
        sys.exit(EXIT_VALIDATION_FAILED)
