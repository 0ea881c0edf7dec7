"""Spatial correlation matrices of a planar RIS under isotropic scattering.

The exact model has entries ``sinc(2 * |u_n - u_m|)`` (distances in
wavelengths).  The Kronecker model multiplies the correlation of a
vertical and a horizontal uniform linear array.  A tensor Gauss-Legendre
integral over the arrival-angle density serves as an independent check of
the closed form.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import RisGeometry, element_indices

__all__ = [
    "NumericalError",
    "SpatialCorrelation",
    "EigenSpectrum",
    "build_correlation",
    "correlation_entry_quadrature",
    "ula_correlation",
    "build_kronecker_approx",
    "eigen_spectrum",
    "approx_rank",
    "effective_rank_energy",
    "effective_rank_threshold",
    "correlation_matrix_distance",
    "save_matrix_csv",
]

# Relative (per element) tolerance separating rounding noise from a
# matrix that is genuinely not positive semidefinite.
NEGATIVE_EIGENVALUE_TOL = 1e-10


class NumericalError(ArithmeticError):
    """Raised when a decomposition fails or yields an inadmissible result."""


@dataclass(frozen=True)
class SpatialCorrelation:
    """Normalized real symmetric correlation matrix attached to a geometry."""

    geom: RisGeometry
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = self.matrix
        if m.shape != (self.geom.n, self.geom.n):
            raise ValueError(
                f"matrix shape {m.shape} does not match N={self.geom.n}"
            )

    @property
    def n(self) -> int:
        return self.geom.n

    def trace(self) -> float:
        return float(np.trace(self.matrix))


@dataclass(frozen=True)
class EigenSpectrum:
    """Eigenvalues sorted in decreasing order together with the source trace."""

    values: np.ndarray
    trace: float

    def __len__(self):
        return len(self.values)

    def fraction_above(self, level: float) -> float:
        return float(np.mean(self.values > level))


def _sinc_of_distance(distance):
    x = 2.0 * np.asarray(distance, dtype=float)
    out = np.sinc(x)
    # sin(pi k) rounds to ~1e-16 instead of 0 at nonzero integers k
    out[(x != 0) & (x == np.round(x))] = 0.0
    return out


def build_correlation(geom: RisGeometry) -> SpatialCorrelation:
    """Exact correlation matrix of ``geom`` under isotropic scattering."""
    i, j = geom.grid_indices()
    dy = (i[:, None] - i[None, :]) * geom.d_h
    dz = (j[:, None] - j[None, :]) * geom.d_v
    matrix = _sinc_of_distance(np.hypot(dy, dz))
    return SpatialCorrelation(geom, matrix)


@functools.lru_cache(maxsize=8)
def _gauss_legendre_half_range(nodes: int):
    x, w = np.polynomial.legendre.leggauss(nodes)
    half = np.pi / 2
    return half * x, half * w


def correlation_entry_quadrature(
    geom: RisGeometry, n: int, m: int, nodes: int = 512
) -> float:
    """Integrate the expected phase coupling of elements ``n`` and ``m``.

    Evaluates ``E{exp(1j k^T (u_n - u_m))}`` directly as a double integral
    over azimuth and elevation, weighted by the density ``cos(theta)/(2 pi)``,
    with a ``nodes x nodes`` Gauss-Legendre product rule.  Only the real part
    survives since the density is even in both angles.
    """
    if nodes < 64:
        raise ValueError(f"need at least 64 quadrature nodes, got {nodes}")
    i_n, j_n = element_indices(n, geom)
    i_m, j_m = element_indices(m, geom)
    dy = (i_n - i_m) * geom.d_h
    dz = (j_n - j_m) * geom.d_v

    az, w_az = _gauss_legendre_half_range(nodes)
    el, w_el = _gauss_legendre_half_range(nodes)
    cos_el = np.cos(el)
    phase = 2 * np.pi * (
        dy * np.outer(cos_el, np.sin(az)) + dz * np.sin(el)[:, None]
    )
    integrand = np.cos(phase) * (cos_el / (2 * np.pi))[:, None]
    return float(w_el @ integrand @ w_az)


def ula_correlation(length: int, spacing: float) -> np.ndarray:
    """Correlation matrix of a uniform linear array with ``spacing`` wavelengths."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    k = np.arange(length)
    return _sinc_of_distance(np.abs(k[:, None] - k[None, :]) * spacing)


def build_kronecker_approx(geom: RisGeometry) -> SpatialCorrelation:
    """Kronecker model: vertical ULA correlation (x) horizontal ULA correlation.

    With row-by-row indexing ``n - 1 = j * n_h + i`` the vertical factor must
    be the outer operand of the Kronecker product.
    """
    vertical = ula_correlation(geom.n_v, geom.d_v)
    horizontal = ula_correlation(geom.n_h, geom.d_h)
    return SpatialCorrelation(geom, np.kron(vertical, horizontal))


def _sorted_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    n = matrix.shape[0]
    try:
        values = np.linalg.eigvalsh(matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"symmetric eigensolver failed on a {n}x{n} matrix: {exc}"
        ) from exc
    values = values[::-1]
    floor = -NEGATIVE_EIGENVALUE_TOL * n
    if values[-1] < floor:
        raise NumericalError(
            f"smallest eigenvalue {values[-1]:.3e} below tolerance {floor:.3e}; "
            "matrix is not positive semidefinite"
        )
    return np.maximum(values, 0.0)


def eigen_spectrum(corr) -> EigenSpectrum:
    """Full eigenvalue spectrum of a correlation matrix, largest first.

    Accepts a :class:`SpatialCorrelation` or a plain symmetric array.
    Eigenvalues in ``[-1e-10 N, 0)`` are rounding noise and are set to zero.
    """
    matrix = corr.matrix if isinstance(corr, SpatialCorrelation) else np.asarray(corr)
    values = _sorted_eigenvalues(matrix)
    return EigenSpectrum(values, float(np.trace(matrix)))


def approx_rank(geom: RisGeometry) -> float:
    """Asymptotic rank ``pi * N * A`` (area in squared wavelengths)."""
    return math.pi * geom.n * geom.area


def effective_rank_energy(spec: EigenSpectrum, epsilon: float = 0.05) -> int:
    """Smallest ``k`` whose top-``k`` eigenvalues hold ``1 - epsilon`` of the trace."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    cumulative = np.cumsum(spec.values)
    target = (1 - epsilon) * spec.trace
    k = int(np.searchsorted(cumulative, target * (1 - 1e-12), side="left")) + 1
    return min(k, len(spec.values))


def effective_rank_threshold(spec: EigenSpectrum, delta: float = 1e-3) -> int:
    """Number of eigenvalues larger than ``delta`` times the largest one."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return int(np.count_nonzero(spec.values > delta * spec.values[0]))


def correlation_matrix_distance(a, b) -> float:
    """Correlation matrix distance ``1 - tr(AB) / (|A|_F |B|_F)``, in [0, 1]."""
    a = a.matrix if isinstance(a, SpatialCorrelation) else np.asarray(a)
    b = b.matrix if isinstance(b, SpatialCorrelation) else np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0 or norm_b == 0:
        raise ValueError("correlation matrix distance undefined for a zero matrix")
    # tr(AB) without forming the product
    inner = np.real(np.sum(a * b.T))
    return float(np.clip(1.0 - inner / (norm_a * norm_b), 0.0, 1.0))


def save_matrix_csv(path, matrix) -> None:
    """Write a real matrix row-major with 17 significant digits."""
    np.savetxt(path, np.asarray(matrix), delimiter=",", fmt="%.17g")
