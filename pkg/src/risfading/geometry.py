"""Element grid of a rectangular RIS and plane-wave responses.

All lengths are in wavelengths, i.e. the wavelength is fixed to 1.
Elements are numbered row by row with a 1-based index ``n`` at the API
boundary; the grid coordinates ``(i, j)`` are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RisGeometry",
    "Direction",
    "element_indices",
    "element_position",
    "wave_vector",
    "array_response",
    "sample_isotropic_direction",
]


@dataclass(frozen=True)
class RisGeometry:
    """Rectangular grid with ``n_h`` elements per row and ``n_v`` per column.

    ``d_h`` and ``d_v`` are the element width and height in wavelengths.
    """

    n_h: int
    n_v: int
    d_h: float
    d_v: float

    def __post_init__(self):
        if int(self.n_h) != self.n_h or int(self.n_v) != self.n_v:
            raise ValueError("element counts must be integers")
        if self.n_h < 1 or self.n_v < 1:
            raise ValueError(f"need n_h >= 1 and n_v >= 1, got {self.n_h}x{self.n_v}")
        if not (self.d_h > 0 and self.d_v > 0):
            raise ValueError(f"element size must be positive, got {self.d_h}x{self.d_v}")
        object.__setattr__(self, "n_h", int(self.n_h))
        object.__setattr__(self, "n_v", int(self.n_v))

    @classmethod
    def square(cls, n_side: int, spacing: float) -> "RisGeometry":
        return cls(n_side, n_side, spacing, spacing)

    @property
    def n(self) -> int:
        return self.n_h * self.n_v

    @property
    def area(self) -> float:
        """Element area in squared wavelengths."""
        return self.d_h * self.d_v

    def grid_indices(self) -> tuple[np.ndarray, np.ndarray]:
        """Return the 0-based ``(i, j)`` arrays for all elements in index order."""
        k = np.arange(self.n)
        return k % self.n_h, k // self.n_h

    def positions(self) -> np.ndarray:
        """All element positions as an ``(N, 3)`` array."""
        i, j = self.grid_indices()
        pos = np.zeros((self.n, 3))
        pos[:, 1] = i * self.d_h
        pos[:, 2] = j * self.d_v
        return pos


@dataclass(frozen=True)
class Direction:
    """Azimuth and elevation in radians, both within [-pi/2, pi/2]."""

    azimuth: float
    elevation: float

    def __post_init__(self):
        half = np.pi / 2
        for name in ("azimuth", "elevation"):
            value = getattr(self, name)
            if not -half <= value <= half:
                raise ValueError(f"{name}={value} outside [-pi/2, pi/2]")


def element_indices(n: int, geom: RisGeometry) -> tuple[int, int]:
    """Map the 1-based element index ``n`` to its grid position ``(i, j)``.

    >>> element_indices(5, RisGeometry(4, 2, 0.25, 0.25))
    (0, 1)
    """
    if not 1 <= n <= geom.n:
        raise IndexError(f"element index {n} outside [1, {geom.n}]")
    return (n - 1) % geom.n_h, (n - 1) // geom.n_h


def element_position(n: int, geom: RisGeometry) -> np.ndarray:
    i, j = element_indices(n, geom)
    return np.array([0.0, i * geom.d_h, j * geom.d_v])


def wave_vector(direction: Direction) -> np.ndarray:
    """Wave vector of a plane wave arriving from ``direction``.

    Its norm is 2*pi since the wavelength is normalized to one.
    """
    az, el = direction.azimuth, direction.elevation
    return 2 * np.pi * np.array(
        [np.cos(el) * np.cos(az), np.cos(el) * np.sin(az), np.sin(el)]
    )


def array_response(geom: RisGeometry, direction: Direction) -> np.ndarray:
    """Unit-modulus phase signature ``exp(1j * k @ u_n)`` over all elements."""
    return np.exp(1j * (geom.positions() @ wave_vector(direction)))


def sample_isotropic_direction(rng: np.random.Generator, size=None):
    """Draw arrival directions from the isotropic half-space density.

    The azimuth is uniform on [-pi/2, pi/2] and the elevation has density
    ``cos(theta) / 2``, obtained exactly as ``arcsin(U)`` with ``U`` uniform
    on [-1, 1].

    With ``size=None`` a single :class:`Direction` is returned; otherwise the
    function returns two arrays ``(azimuth, elevation)`` of that shape.
    """
    az = rng.uniform(-np.pi / 2, np.pi / 2, size)
    el = np.arcsin(rng.uniform(-1.0, 1.0, size))
    if size is None:
        return Direction(float(az), float(el))
    return az, el
