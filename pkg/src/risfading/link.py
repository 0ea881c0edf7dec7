"""RIS phase configuration, SNR and the channel hardening statistics.

Functions taking a :class:`~risfading.channels.ChannelRealization` accept
batched realizations as well: the element axis is always the last one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelRealization, PropagationScenario
from .geometry import RisGeometry

__all__ = [
    "PhaseConfig",
    "SnrSampleSet",
    "HardeningStatistic",
    "db_to_linear",
    "linear_to_db",
    "optimal_phases",
    "snr_with_phases",
    "optimal_snr",
    "random_phase_snr",
    "deterministic_snr_approx",
    "hardening_statistic",
    "ergodic_rate_estimate",
    "outage_probability_estimate",
    "crossover_size",
]


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(value, dtype=float))


@dataclass(frozen=True)
class PhaseConfig:
    """Per-element phase shifts; element ``n`` applies ``exp(-1j * phases[n])``."""

    phases: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=float)
        if not np.all(np.isfinite(phases)):
            raise ValueError("phase shifts must be finite")
        object.__setattr__(self, "phases", phases)


@dataclass(frozen=True)
class SnrSampleSet:
    """Immutable set of linear SNR samples obtained with ``n_elements`` elements.

    Quantiles use linear interpolation between order statistics.
    """

    samples: np.ndarray
    n_elements: int

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float).ravel()
        if samples.size == 0:
            raise ValueError("empty SNR sample set")
        if not np.all(np.isfinite(samples)) or np.any(samples < 0):
            raise ValueError("SNR samples must be finite and non-negative")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def quantile(self, q: float) -> float:
        return float(np.quantile(self.samples, q, method="linear"))

    @property
    def median(self) -> float:
        return self.quantile(0.5)

    @property
    def q05(self) -> float:
        return self.quantile(0.05)

    @property
    def q95(self) -> float:
        return self.quantile(0.95)

    @property
    def mean(self) -> float:
        return float(np.mean(self.samples))

    def summary(self) -> dict:
        return {"median": self.median, "q05": self.q05, "q95": self.q95, "mean": self.mean}


@dataclass(frozen=True)
class HardeningStatistic:
    normalized_median: float
    relative_spread: float


def optimal_phases(real: ChannelRealization) -> PhaseConfig:
    """Phases that align every cascaded term with the direct path.

    The direct-path phase of ``h_d = 0`` is taken as 0; a common phase
    offset leaves the SNR unchanged in that case.
    """
    ref = np.angle(np.asarray(real.h_d))
    return PhaseConfig(np.angle(real.h1 * real.h2) - np.asarray(ref)[..., None])


def _combined_gain(real: ChannelRealization, phases: np.ndarray):
    cascade = np.sum(real.h1 * real.h2 * np.exp(-1j * phases), axis=-1)
    return cascade + real.h_d


def snr_with_phases(
    real: ChannelRealization, cfg: PhaseConfig, scenario: PropagationScenario
):
    """Received SNR ``P/sigma^2 |h2^T Phi h1 + h_d|^2`` for a given configuration."""
    return scenario.snr_budget * np.abs(_combined_gain(real, cfg.phases)) ** 2


def optimal_snr(real: ChannelRealization, scenario: PropagationScenario):
    """SNR with coherently combined paths, ``P/sigma^2 (sum|h1 h2| + |h_d|)^2``."""
    amplitude = np.sum(np.abs(real.h1 * real.h2), axis=-1) + np.abs(real.h_d)
    return scenario.snr_budget * amplitude**2


def random_phase_snr(
    real: ChannelRealization, scenario: PropagationScenario, rng: np.random.Generator
):
    """SNR with i.i.d. phase shifts uniform on [0, 2 pi)."""
    if real.n < 1:
        raise ValueError("the RIS needs at least one element")
    phases = rng.uniform(0.0, 2 * np.pi, real.h1.shape)
    return snr_with_phases(real, PhaseConfig(phases), scenario)


def deterministic_snr_approx(geom: RisGeometry, scenario: PropagationScenario) -> float:
    """Large-surface SNR ``P/sigma^2 * gain1 * gain2 * (pi N / 4)^2``."""
    return scenario.snr_budget * scenario.gain1 * scenario.gain2 * (math.pi * geom.n / 4) ** 2


def hardening_statistic(sample_set: SnrSampleSet) -> HardeningStatistic:
    """Location ``median / N^2`` and dispersion ``(q95 - q05) / median``."""
    if sample_set.samples.size < 100:
        raise ValueError("hardening statistics need at least 100 samples")
    median = sample_set.median
    spread = (sample_set.q95 - sample_set.q05) / median if median > 0 else math.inf
    return HardeningStatistic(median / sample_set.n_elements**2, spread)


def ergodic_rate_estimate(sample_set: SnrSampleSet) -> float:
    """Sample mean of ``log2(1 + SNR)`` in bit/symbol."""
    return float(np.mean(np.log2(1.0 + sample_set.samples)))


def outage_probability_estimate(sample_set: SnrSampleSet, rate: float) -> float:
    """Fraction of samples whose rate ``log2(1 + SNR)`` falls below ``rate``."""
    return float(np.mean(np.log2(1.0 + sample_set.samples) < rate))


def crossover_size(scenario: PropagationScenario) -> float:
    """Side length ``(beta_d / (gain1 gain2))^(1/4)`` of a square RIS.

    Above this size the RIS path starts to dominate the direct path.
    """
    if scenario.beta_d <= 0:
        raise ValueError("crossover size needs a direct path (beta_d > 0)")
    return (scenario.beta_d / (scenario.gain1 * scenario.gain2)) ** 0.25
