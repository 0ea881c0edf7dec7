"""Seeded Monte Carlo over channel realizations.

Trials are grouped in blocks of fixed size.  Each trial owns a generator
derived from ``(seed, tag, trial)``, and blocks are reassembled in trial
order, so the output is identical for any number of workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..channels import (
    ChannelRealization,
    PropagationScenario,
    correlation_factor,
    standard_complex_normal,
    substream,
)
from ..correlation import build_correlation
from ..geometry import RisGeometry
from ..link import PhaseConfig, SnrSampleSet, optimal_snr, snr_with_phases

BLOCK_SIZE = 256


@dataclass(frozen=True)
class SnrSimulation:
    optimal: SnrSampleSet
    random_phase: SnrSampleSet
    direct_only: SnrSampleSet | None


def _run_block(trials, factor, scenario, seed, tag):
    n = factor.shape[0]
    count = len(trials)
    # real and imaginary parts in contiguous buffers so the products hit BLAS
    parts = np.empty((4, count, n))
    zd = np.zeros(count, dtype=complex)
    phases = np.empty((count, n))
    with_direct = scenario.beta_d > 0
    for row, trial in enumerate(trials):
        rng = substream(seed, tag, trial)
        z1 = standard_complex_normal(rng, n)
        z2 = standard_complex_normal(rng, n)
        parts[0, row], parts[1, row] = z1.real, z1.imag
        parts[2, row], parts[3, row] = z2.real, z2.imag
        if with_direct:
            zd[row] = standard_complex_normal(rng, 1)[0]
        phases[row] = rng.uniform(0.0, 2 * np.pi, n)

    # factor is symmetric, so z @ F is the row form of F @ z
    mixed = parts @ factor
    h1 = np.sqrt(scenario.gain1) * (mixed[0] + 1j * mixed[1])
    h2 = np.sqrt(scenario.gain2) * (mixed[2] + 1j * mixed[3])
    h_d = np.sqrt(scenario.beta_d) * zd
    real = ChannelRealization(h1, h2, h_d)
    return (
        optimal_snr(real, scenario),
        snr_with_phases(real, PhaseConfig(phases), scenario),
        scenario.snr_budget * np.abs(h_d) ** 2,
    )


def simulate_snr(
    geom: RisGeometry,
    scenario: PropagationScenario,
    trials: int,
    seed: int,
    workers: int = 1,
    tag: str | None = None,
) -> SnrSimulation:
    """Optimal-phase, random-phase and direct-only SNR samples for ``geom``.

    ``tag`` names the random streams; by default it encodes the geometry so
    different sizes in a sweep use unrelated streams.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if tag is None:
        tag = f"snr/{geom.n_h}x{geom.n_v}/{geom.d_h!r}x{geom.d_v!r}"
    factor = correlation_factor(build_correlation(geom)).factor
    blocks = [range(s, min(s + BLOCK_SIZE, trials)) for s in range(0, trials, BLOCK_SIZE)]

    def work(block):
        return _run_block(block, factor, scenario, seed, tag)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]

    opt, rnd, direct = (np.concatenate(p) for p in zip(*parts))
    return SnrSimulation(
        SnrSampleSet(opt, geom.n),
        SnrSampleSet(rnd, geom.n),
        SnrSampleSet(direct, geom.n) if scenario.beta_d > 0 else None,
    )


def empirical_crossover(
    sizes,
    spacing: float,
    scenario: PropagationScenario,
    trials: int,
    seed: int,
    workers: int = 1,
    ratio: float = 2.0,
):
    """Smallest square side length whose median optimal SNR reaches ``ratio`` times the direct-path SNR.

    Returns ``None`` if no size in ``sizes`` gets there.
    """
    if scenario.beta_d <= 0:
        raise ValueError("crossover needs a direct path (beta_d > 0)")
    target = ratio * scenario.direct_snr
    for n_side in sizes:
        sim = simulate_snr(RisGeometry.square(n_side, spacing), scenario, trials, seed, workers)
        if sim.optimal.median >= target:
            return n_side
    return None
