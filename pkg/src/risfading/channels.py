"""Correlated Rayleigh channel sampling for the two RIS hops and the direct path.

Every random quantity is drawn from a caller-supplied
:class:`numpy.random.Generator`.  :func:`substream` derives independent
generators from ``(seed, purpose tag, trial index)`` so that Monte Carlo
results do not depend on how trials are distributed over workers.
"""

from __future__ import annotations

import csv
import zlib
from dataclasses import dataclass, field

import numpy as np

from .correlation import NEGATIVE_EIGENVALUE_TOL, NumericalError, SpatialCorrelation
from .geometry import RisGeometry, sample_isotropic_direction

__all__ = [
    "PropagationScenario",
    "ChannelRealization",
    "CorrelationFactor",
    "substream",
    "standard_complex_normal",
    "correlation_factor",
    "sample_channel",
    "plane_wave_channel",
    "empirical_covariance",
    "write_realizations_csv",
]


@dataclass(frozen=True)
class PropagationScenario:
    """Linear-scale link budget.

    ``gain1`` and ``gain2`` are the per-element gains (element area times
    intensity attenuation) of the transmitter-RIS and RIS-receiver hops,
    ``beta_d`` the direct-path variance (0 disables it) and ``snr_budget``
    the ratio of transmit power to noise power.
    """

    gain1: float
    gain2: float
    beta_d: float = 0.0
    snr_budget: float = 1.0

    def __post_init__(self):
        if not (self.gain1 > 0 and self.gain2 > 0):
            raise ValueError("per-element gains must be positive")
        if not self.beta_d >= 0:
            raise ValueError("direct-path variance must be non-negative")
        if not self.snr_budget > 0:
            raise ValueError("SNR budget must be positive")

    @property
    def direct_snr(self) -> float:
        """Mean SNR of the direct path alone."""
        return self.snr_budget * self.beta_d


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of ``(h1, h2, h_d)``.

    The arrays may carry leading batch dimensions, in which case ``h_d`` has
    the batch shape and ``h1``/``h2`` the batch shape plus ``(N,)``.
    """

    h1: np.ndarray
    h2: np.ndarray
    h_d: complex | np.ndarray = 0j

    def __post_init__(self):
        h1 = np.asarray(self.h1, dtype=complex)
        h2 = np.asarray(self.h2, dtype=complex)
        if h1.shape != h2.shape:
            raise ValueError(f"h1 {h1.shape} and h2 {h2.shape} differ in shape")
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)

    @property
    def n(self) -> int:
        return self.h1.shape[-1]


@dataclass(frozen=True)
class CorrelationFactor:
    """Symmetric square root ``F`` with ``F @ F.T ~= R``."""

    factor: np.ndarray = field(repr=False)
    n_clamped: int = 0

    @property
    def n(self) -> int:
        return self.factor.shape[0]


def substream(seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """Independent generator keyed by ``(seed, tag, index)``.

    The tag is folded to a 32-bit CRC and, together with ``index``, used as
    the spawn key of a :class:`numpy.random.SeedSequence` rooted at ``seed``.
    """
    key = (zlib.crc32(tag.encode("utf-8")), int(index))
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=key))
    )


def standard_complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with unit variance."""
    size = (size,) if np.isscalar(size) else tuple(size)
    parts = rng.standard_normal((2,) + size)
    return (parts[0] + 1j * parts[1]) / np.sqrt(2.0)


def correlation_factor(corr: SpatialCorrelation | np.ndarray) -> CorrelationFactor:
    """Symmetric square root of ``R`` through its eigendecomposition.

    ``R`` is rank deficient for dense surfaces, which rules out a Cholesky
    factor.  Negative eigenvalues down to ``-1e-10 N`` are zeroed; anything
    lower raises :class:`NumericalError`.
    """
    matrix = corr.matrix if isinstance(corr, SpatialCorrelation) else np.asarray(corr)
    n = matrix.shape[0]
    try:
        values, vectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed for N={n}: {exc}") from exc
    if values[0] < -NEGATIVE_EIGENVALUE_TOL * n:
        raise NumericalError(
            f"correlation matrix has eigenvalue {values[0]:.3e} < "
            f"{-NEGATIVE_EIGENVALUE_TOL * n:.3e}"
        )
    n_clamped = int(np.count_nonzero(values < 0))
    root = np.sqrt(np.maximum(values, 0.0))
    factor = (vectors * root) @ vectors.T
    return CorrelationFactor(factor, n_clamped)


def sample_channel(
    factor: CorrelationFactor,
    scenario: PropagationScenario,
    rng: np.random.Generator,
) -> ChannelRealization:
    """Draw ``h_i ~ CN(0, gain_i R)`` for both hops and ``h_d ~ CN(0, beta_d)``."""
    n = factor.n
    z1 = standard_complex_normal(rng, n)
    z2 = standard_complex_normal(rng, n)
    h1 = np.sqrt(scenario.gain1) * (factor.factor @ z1)
    h2 = np.sqrt(scenario.gain2) * (factor.factor @ z2)
    if scenario.beta_d > 0:
        h_d = complex(np.sqrt(scenario.beta_d) * standard_complex_normal(rng, 1)[0])
    else:
        h_d = 0j
    return ChannelRealization(h1, h2, h_d)


def plane_wave_channel(
    geom: RisGeometry,
    gain: float,
    L: int,
    rng: np.random.Generator,
    uniform_phase: bool = False,
) -> np.ndarray:
    """Superpose ``L`` plane waves from isotropic directions.

    Each wave carries an attenuation ``c_l / sqrt(L)`` with ``c_l`` zero mean
    and variance ``gain``: complex Gaussian by default, or fixed magnitude
    ``sqrt(gain)`` with uniform phase when ``uniform_phase`` is set.
    """
    if L < 1:
        raise ValueError(f"need at least one path, got L={L}")
    az, el = sample_isotropic_direction(rng, L)
    if uniform_phase:
        coeff = np.sqrt(gain) * np.exp(1j * rng.uniform(0, 2 * np.pi, L))
    else:
        coeff = np.sqrt(gain) * standard_complex_normal(rng, L)
    coeff /= np.sqrt(L)

    # k^T u_n splits into a horizontal and a vertical phase step, so each
    # path needs only two complex exponentials.
    step_h = np.exp(2j * np.pi * geom.d_h * np.cos(el) * np.sin(az))
    step_v = np.exp(2j * np.pi * geom.d_v * np.sin(el))
    pow_h = _powers(step_h, geom.n_h)
    pow_v = _powers(step_v, geom.n_v) * coeff
    # row j, column i -> element j * n_h + i
    return (pow_v @ pow_h.T).ravel()


def _powers(base: np.ndarray, count: int) -> np.ndarray:
    """Rows ``base**0, ..., base**(count - 1)`` by repeated multiplication."""
    out = np.empty((count, base.size), dtype=complex)
    out[0] = 1.0
    for k in range(1, count):
        np.multiply(out[k - 1], base, out=out[k])
    return out


def empirical_covariance(samples) -> np.ndarray:
    """Sample second moment ``(1/T) sum_t h_t h_t^H`` of zero-mean vectors."""
    s = np.asarray(samples, dtype=complex)
    if s.ndim != 2 or s.shape[0] == 0:
        raise ValueError("need a non-empty (T, N) array of samples")
    return (s.T @ s.conj()) / s.shape[0]


def write_realizations_csv(path, realizations) -> None:
    """Export realizations one row per (trial, element)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["trial", "element", "re_h1", "im_h1", "re_h2", "im_h2", "re_hd", "im_hd"]
        )
        for trial, real in enumerate(realizations):
            h_d = complex(real.h_d)
            for n, (a, b) in enumerate(zip(real.h1, real.h2), start=1):
                writer.writerow(
                    [trial, n]
                    + [f"{v:.17g}" for v in (a.real, a.imag, b.real, b.imag, h_d.real, h_d.imag)]
                )
