"""Figure reproductions and the invariant suite, each returning a ResultTable."""

from __future__ import annotations

import numpy as np

from .. import __version__
from ..channels import (
    PropagationScenario,
    correlation_factor,
    empirical_covariance,
    sample_channel,
    standard_complex_normal,
    substream,
)
from ..correlation import (
    approx_rank,
    build_correlation,
    build_kronecker_approx,
    correlation_entry_quadrature,
    correlation_matrix_distance,
    eigen_spectrum,
)
from ..geometry import RisGeometry
from ..link import (
    PhaseConfig,
    deterministic_snr_approx,
    hardening_statistic,
    linear_to_db,
    optimal_phases,
    optimal_snr,
    snr_with_phases,
)
from .config import ExperimentConfig
from .montecarlo import simulate_snr
from .table import ResultTable


def _table(cfg: ExperimentConfig, command: str) -> ResultTable:
    provenance = [("tool", f"risfading {__version__}"), ("command", command)]
    return ResultTable(provenance=provenance + cfg.echo())


def _spacing_label(d: float) -> str:
    return f"d{d:g}"


def run_eigenspectrum(cfg: ExperimentConfig) -> ResultTable:
    """Descending eigenvalues of R for every spacing at fixed ``n_h x n_v``."""
    n_h, n_v = cfg.n_h, cfg.n_v_eff
    n = n_h * n_v
    table = _table(cfg, "eigenspectrum")
    table.add_column("index", range(1, n + 1))
    table.add_column("iid", [1.0] * n)
    for d in cfg.spacings:
        geom = RisGeometry(n_h, n_v, d, d)
        spec = eigen_spectrum(build_correlation(geom))
        label = _spacing_label(d)
        table.add_column(f"eig_{label}", spec.values)
        table.add_column(f"rank_marker_{label}", [approx_rank(geom)] * n)
        table.provenance.append((f"fraction_above_one_{label}", "%.17g" % spec.fraction_above(1.0)))
    return table


def _eigen_diagonal_distance(a, b) -> float:
    ea = eigen_spectrum(a).values
    eb = eigen_spectrum(b).values
    return correlation_matrix_distance(np.diag(ea), np.diag(eb))


def run_kronecker_distance(cfg: ExperimentConfig) -> ResultTable:
    """Distance between exact and Kronecker correlation over square sizes."""
    sizes = cfg.sweep_for("kronecker-distance")
    table = _table(cfg, "kronecker-distance")
    table.add_column("n_h", sizes)
    for d in cfg.spacings:
        full, eig = [], []
        for n_side in sizes:
            geom = RisGeometry.square(n_side, d)
            exact = build_correlation(geom)
            approx = build_kronecker_approx(geom)
            full.append(correlation_matrix_distance(exact, approx))
            eig.append(_eigen_diagonal_distance(exact, approx))
        label = _spacing_label(d)
        table.add_column(f"cmd_full_{label}", full)
        table.add_column(f"cmd_eig_{label}", eig)
    return table


def run_hardening(cfg: ExperimentConfig, workers: int = 1) -> ResultTable:
    """SNR statistics (dB) with optimal and random phases over square sizes."""
    sizes = cfg.sweep_for("hardening")
    scenario = cfg.scenario()
    table = _table(cfg, "hardening")
    rows: dict[str, list] = {
        k: []
        for k in (
            "n", "opt_median_db", "opt_q05_db", "opt_q95_db", "opt_spread",
            "rand_median_db", "rand_q05_db", "rand_q95_db", "rand_spread",
            "deterministic_db",
        )
    }
    if scenario.beta_d > 0:
        rows["direct_db"] = []
    for n_side in sizes:
        geom = RisGeometry(n_side, n_side, cfg.d_h, cfg.d_v)
        sim = simulate_snr(geom, scenario, cfg.trials, cfg.seed, workers)
        rows["n"].append(geom.n)
        for prefix, samples in (("opt", sim.optimal), ("rand", sim.random_phase)):
            rows[f"{prefix}_median_db"].append(float(linear_to_db(samples.median)))
            rows[f"{prefix}_q05_db"].append(float(linear_to_db(samples.q05)))
            rows[f"{prefix}_q95_db"].append(float(linear_to_db(samples.q95)))
            rows[f"{prefix}_spread"].append((samples.q95 - samples.q05) / samples.median)
        rows["deterministic_db"].append(float(linear_to_db(deterministic_snr_approx(geom, scenario))))
        if "direct_db" in rows:
            rows["direct_db"].append(float(linear_to_db(scenario.direct_snr)))
    table.add_column("n_h", sizes)
    for name, values in rows.items():
        table.add_column(name, values)
    return table


def _validation_checks(cfg: ExperimentConfig, workers: int):
    """Yield ``(name, measured, bound, passed)`` for every invariant."""
    # closed form against quadrature
    geom = RisGeometry(4, 4, 0.125, 0.25)
    r = build_correlation(geom).matrix
    err = max(
        abs(r[n - 1, m - 1] - correlation_entry_quadrature(geom, n, m, 512))
        for n in range(1, geom.n + 1)
        for m in range(n, geom.n + 1)
    )
    yield "quadrature_vs_sinc_max_error", err, 1e-6, err <= 1e-6

    big = RisGeometry(40, 40, 0.25, 0.25)
    corr = build_correlation(big)
    rel = abs(corr.trace() - big.n) / big.n
    yield "trace_equals_n_rel_error", rel, 1e-9, rel <= 1e-9

    kron = build_kronecker_approx(big)
    rel = abs(kron.trace() - big.n) / big.n
    yield "kronecker_trace_rel_error", rel, 1e-9, rel <= 1e-9

    lowest = float(np.linalg.eigvalsh(corr.matrix)[0])
    bound = -1e-10 * big.n
    yield "min_eigenvalue", lowest, bound, lowest >= bound

    ula = RisGeometry(12, 1, 0.2, 0.3)
    diff = float(np.max(np.abs(build_correlation(ula).matrix - build_kronecker_approx(ula).matrix)))
    yield "kronecker_exact_for_ula", diff, 0.0, diff == 0.0

    half = RisGeometry.square(6, 0.5)
    diff = float(np.max(np.abs(build_kronecker_approx(half).matrix - np.eye(half.n))))
    yield "kronecker_identity_half_wavelength", diff, 0.0, diff == 0.0

    d5 = correlation_matrix_distance(
        build_correlation(RisGeometry.square(5, 0.25)),
        build_kronecker_approx(RisGeometry.square(5, 0.25)),
    )
    d20 = correlation_matrix_distance(
        build_correlation(RisGeometry.square(20, 0.25)),
        build_kronecker_approx(RisGeometry.square(20, 0.25)),
    )
    yield "cmd_grows_with_size", d20 - d5, 0.0, d20 > d5 and 0 <= d5 <= 1 and 0 <= d20 <= 1

    # covariance convergence of the sampler
    geom = RisGeometry.square(8, 0.25)
    corr = build_correlation(geom)
    factor = correlation_factor(corr)
    recon = np.linalg.norm(factor.factor @ factor.factor.T - corr.matrix) / geom.n
    yield "factor_reconstruction", recon, 1e-8, recon <= 1e-8
    samples = 20000
    z = standard_complex_normal(substream(cfg.seed, "validate/covariance"), (samples, geom.n))
    h = z @ factor.factor
    cov = empirical_covariance(h)
    rel = np.linalg.norm(cov - corr.matrix) / np.linalg.norm(corr.matrix)
    yield "covariance_convergence", rel, 0.05, rel <= 0.05

    # phase alignment and dominance on random realizations
    scenario = PropagationScenario(1.0, 1.0, beta_d=0.5, snr_budget=1.0)
    worst_align, dominance_ok = 0.0, True
    for trial in range(100):
        rng = substream(cfg.seed, "validate/alignment", trial)
        real = sample_channel(factor, scenario, rng)
        best = optimal_snr(real, scenario)
        aligned = snr_with_phases(real, optimal_phases(real), scenario)
        worst_align = max(worst_align, abs(aligned - best) / best)
        other = snr_with_phases(real, PhaseConfig(rng.uniform(0, 2 * np.pi, geom.n)), scenario)
        dominance_ok &= bool(other <= best * (1 + 1e-12))
    yield "optimal_phase_alignment", worst_align, 1e-9, worst_align <= 1e-9
    yield "optimal_snr_dominance", float(dominance_ok), 1.0, dominance_ok

    # square law: median SNR / N^2 at two sizes
    link = cfg.scenario()
    link = PropagationScenario(link.gain1, link.gain2, 0.0, link.snr_budget)
    trials = min(cfg.trials, 1000)
    stats = []
    ordered = True
    for n_side in (24, 40):
        sim = simulate_snr(RisGeometry.square(n_side, cfg.d_h), link, trials, cfg.seed, workers)
        stats.append(hardening_statistic(sim.optimal).normalized_median)
        for s in (sim.optimal, sim.random_phase):
            ordered &= s.q05 <= s.median <= s.q95
    variation = abs(stats[1] - stats[0]) / stats[1]
    yield "square_law_variation_24_vs_40", variation, 0.1, variation < 0.1
    yield "quantile_ordering", float(ordered), 1.0, bool(ordered)


def run_validate(cfg: ExperimentConfig, workers: int = 1) -> tuple[ResultTable, bool]:
    """Run every invariant check; returns the table and whether all passed."""
    table = _table(cfg, "validate")
    names, measured, bounds, flags = [], [], [], []
    for name, value, bound, passed in _validation_checks(cfg, workers):
        names.append(name)
        measured.append(float(value))
        bounds.append(float(bound))
        flags.append(bool(passed))
    table.add_column("name", names)
    table.add_column("measured", measured)
    table.add_column("bound", bounds)
    table.add_column("pass", flags)
    return table, all(flags)
