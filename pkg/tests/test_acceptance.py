"""Exit criteria of the package, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get one PASS/FAIL line per
criterion in the terminal summary.
"""

import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

from risfading.channels import (
    PropagationScenario,
    correlation_factor,
    empirical_covariance,
    plane_wave_channel,
    standard_complex_normal,
    substream,
)
from risfading.correlation import (
    approx_rank,
    build_correlation,
    build_kronecker_approx,
    correlation_entry_quadrature,
    correlation_matrix_distance,
    eigen_spectrum,
)
from risfading.experiments.cli import main
from risfading.experiments.montecarlo import empirical_crossover, simulate_snr
from risfading.geometry import RisGeometry
from risfading.link import deterministic_snr_approx, hardening_statistic, linear_to_db

GAIN = 10 ** (-75 / 10)
BUDGET = 10 ** (124 / 10)
BETA_D = 10 ** (-130 / 10)
TRIALS = 5000
SEED = 2020


def rel_fro(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


@pytest.fixture(scope="module")
def fig4a():
    scenario = PropagationScenario(GAIN, GAIN, 0.0, BUDGET)
    start = time.perf_counter()
    sims = {n: simulate_snr(RisGeometry.square(n, 0.25), scenario, TRIALS, SEED) for n in (8, 16, 32, 40)}
    return sims, scenario, time.perf_counter() - start


def test_c1_closed_form_matches_quadrature(criterion):
    start = time.perf_counter()
    geom = RisGeometry(4, 4, 1 / 8, 1 / 4)
    r = build_correlation(geom).matrix
    err = max(
        abs(r[n - 1, m - 1] - correlation_entry_quadrature(geom, n, m, 512))
        for n in range(1, 17)
        for m in range(1, 17)
    )
    elapsed = time.perf_counter() - start
    ok = err <= 1e-6 and elapsed < 30
    criterion("C1 sinc vs quadrature", ok, f"max error {err:.2e} (<= 1e-6), {elapsed:.1f}s (< 30s)")
    assert ok


def test_c2_trace_law(criterion):
    worst = 0.0
    for geom in (
        RisGeometry(1, 1, 0.5, 0.5),
        RisGeometry(7, 3, 0.1, 0.4),
        RisGeometry.square(40, 1 / 8),
        RisGeometry.square(40, 1 / 4),
        RisGeometry.square(40, 1 / 2),
        RisGeometry(80, 20, 0.2, 0.3),
    ):
        worst = max(worst, abs(build_correlation(geom).trace() - geom.n) / geom.n)
    ok = worst <= 1e-9
    criterion("C2 trace(R) = N", ok, f"worst relative error {worst:.1e} (<= 1e-9)")
    assert ok


def test_c3a_half_wavelength_fraction_above_one(criterion):
    start = time.perf_counter()
    spec = eigen_spectrum(build_correlation(RisGeometry.square(40, 1 / 2)))
    fraction = spec.fraction_above(1.0)
    elapsed = time.perf_counter() - start
    ok = 0.22 <= fraction <= 0.28 and elapsed < 120
    criterion(
        "C3a eigenvalues > 1 at d=lambda/2",
        ok,
        f"fraction {fraction:.4f} (want [0.22, 0.28]), {elapsed:.1f}s",
    )
    assert ok


def test_c3b_top_eigenvalues_capture_trace(criterion):
    start = time.perf_counter()
    geom = RisGeometry.square(40, 1 / 8)
    spec = eigen_spectrum(build_correlation(geom))
    k = math.ceil(approx_rank(geom))
    share = spec.values[:k].sum() / spec.trace
    elapsed = time.perf_counter() - start
    # 0.87 frozen from this eigendecomposition (measured 0.878)
    ok = k == 79 and share >= 0.87 and elapsed < 120
    criterion("C3b top-79 energy at d=lambda/8", ok, f"k={k}, share {share:.4f} (>= 0.87), {elapsed:.1f}s")
    assert ok


def test_c4_kronecker_degeneracy(criterion):
    geom = RisGeometry(6, 5, 0.5, 0.5)
    kron_is_identity = np.array_equal(build_kronecker_approx(geom).matrix, np.eye(geom.n))
    exact = build_correlation(geom).matrix
    off = np.abs(exact - np.diag(np.diag(exact))).max()
    ok = kron_is_identity and off >= 0.05 and not np.array_equal(exact, np.eye(geom.n))
    criterion(
        "C4 Kronecker identity vs exact",
        ok,
        f"Kronecker == I: {kron_is_identity}, exact max |off-diagonal| {off:.4f} (>= 0.05)",
    )
    assert ok


def test_c5_kronecker_distance_trend(criterion):
    start = time.perf_counter()

    def distances(n_side):
        geom = RisGeometry.square(n_side, 1 / 4)
        exact, approx = build_correlation(geom), build_kronecker_approx(geom)
        full = correlation_matrix_distance(exact, approx)
        eig = correlation_matrix_distance(
            np.diag(eigen_spectrum(exact).values), np.diag(eigen_spectrum(approx).values)
        )
        return full, eig

    full5, _ = distances(5)
    full20, eig20 = distances(20)
    elapsed = time.perf_counter() - start
    ok = full20 > full5 and full20 > eig20 and elapsed < 60
    criterion(
        "C5 CMD grows and exceeds eigen CMD",
        ok,
        f"full(5)={full5:.4f} < full(20)={full20:.4f} > eig(20)={eig20:.4f}, {elapsed:.1f}s",
    )
    assert ok


def test_c6_sampling_covariance(criterion):
    start = time.perf_counter()
    geom = RisGeometry.square(8, 1 / 4)
    corr = build_correlation(geom)
    factor = correlation_factor(corr)
    samples = 20_000
    gain = 2.0
    z = standard_complex_normal(substream(SEED, "acceptance/sinc"), (samples, geom.n))
    sinc_draws = np.sqrt(gain) * (z @ factor.factor)
    cov_sinc = empirical_covariance(sinc_draws)
    err_model = rel_fro(cov_sinc, gain * corr.matrix)

    gen = substream(SEED, "acceptance/plane-wave")
    plane = np.array([plane_wave_channel(geom, gain, 10_000, gen) for _ in range(samples)])
    err_oracle = rel_fro(empirical_covariance(plane), cov_sinc)
    elapsed = time.perf_counter() - start
    ok = err_model <= 0.05 and err_oracle <= 0.07 and elapsed < 120
    criterion(
        "C6 sampled covariance",
        ok,
        f"vs gain*R {err_model:.4f} (<= 0.05), plane-wave vs sinc {err_oracle:.4f} (<= 0.07), {elapsed:.1f}s",
    )
    assert ok


def test_c7_square_law_and_hardening(fig4a, criterion):
    sims, scenario, elapsed = fig4a
    med = {n: float(linear_to_db(s.optimal.median)) for n, s in sims.items()}
    slope = med[32] - med[16]
    det40 = float(linear_to_db(deterministic_snr_approx(RisGeometry.square(40, 0.25), scenario)))
    spread8 = hardening_statistic(sims[8].optimal).relative_spread
    spread32 = hardening_statistic(sims[32].optimal).relative_spread
    ok = abs(slope - 12.0) <= 0.5 and abs(med[40] - det40) <= 0.5 and spread32 < spread8 and elapsed < 300
    criterion(
        "C7 square law and hardening",
        ok,
        f"slope {slope:.2f} dB (12 +/- 0.5), median(40) {med[40]:.2f} vs {det40:.2f} dB (+/- 0.5), "
        f"spread {spread32:.3f} < {spread8:.3f}, {elapsed:.1f}s",
    )
    assert ok


def test_c8_random_phases_do_not_harden(fig4a, criterion):
    sims, _, elapsed = fig4a
    spreads = {n: hardening_statistic(sims[n].random_phase).relative_spread for n in (8, 32)}
    per_doubling = (
        float(linear_to_db(sims[32].random_phase.median)) - float(linear_to_db(sims[8].random_phase.median))
    ) / 2
    ok = min(spreads.values()) > 0.5 and abs(per_doubling - 6.0) <= 1.5 and elapsed < 300
    criterion(
        "C8 no hardening with random phases",
        ok,
        f"spread {spreads[8]:.2f}, {spreads[32]:.2f} (> 0.5), {per_doubling:.2f} dB per doubling (6 +/- 1.5)",
    )
    assert ok


def test_c9a_direct_path_dominates_small_surface(criterion):
    scenario = PropagationScenario(GAIN, GAIN, BETA_D, BUDGET)
    sim = simulate_snr(RisGeometry.square(4, 0.25), scenario, TRIALS, SEED)
    median_db = float(linear_to_db(sim.optimal.median))
    direct_db = float(linear_to_db(scenario.direct_snr))
    ok = abs(median_db - direct_db) <= 1.0
    criterion(
        "C9a optimized median ~ direct-only at N_H=4",
        ok,
        f"median {median_db:.2f} dB vs direct-only {direct_db:.2f} dB (within 1 dB)",
    )
    assert ok


def test_c9b_empirical_crossover(criterion):
    start = time.perf_counter()
    scenario = PropagationScenario(GAIN, GAIN, BETA_D, BUDGET)
    n_cross = empirical_crossover(range(1, 41), 0.25, scenario, TRIALS, SEED)
    elapsed = time.perf_counter() - start
    ok = n_cross is not None and 3 <= n_cross <= 25 and elapsed < 300
    criterion("C9b empirical crossover", ok, f"N_H = {n_cross} (in [3, 25]), {elapsed:.1f}s")
    assert ok


def test_c10_cli_determinism_across_workers(tmp_path, criterion):
    start = time.perf_counter()
    outputs = []
    for workers in (1, 4):
        out = tmp_path / f"hardening_w{workers}.csv"
        result = CliRunner().invoke(
            main, ["hardening", "--seed", "7", "--workers", str(workers), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        outputs.append(out.read_bytes())
    elapsed = time.perf_counter() - start
    ok = outputs[0] == outputs[1] and elapsed < 300
    criterion("C10 byte-identical CSV across workers", ok, f"identical={outputs[0] == outputs[1]}, {elapsed:.1f}s")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
