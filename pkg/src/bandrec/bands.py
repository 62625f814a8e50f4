"""Band representations: cosine series and closed-form dispersions.

A band is any object with ``evaluate(k)`` (vectorized, 2pi-periodic, even
about k=0) and ``mean()``.  `FourierBand` stores the mean value explicitly;
closed forms compute it analytically or by quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .core import ValidationError

#: number of uniform grid points used for positivity checks and projections
GRID_SIZE = 4096

_grid_cache: dict[int, np.ndarray] = {}


def uniform_grid(n: int = GRID_SIZE) -> np.ndarray:
    """Uniform momentum grid on [0, 2pi), cached and read-only."""
    grid = _grid_cache.get(n)
    if grid is None:
        grid = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        grid.setflags(write=False)
        _grid_cache[n] = grid
    return grid


def cosine_series(c0: float, coeffs: np.ndarray, k) -> np.ndarray | float:
    """Evaluate c0 + sum_n coeffs[n-1] * cos(n*k)."""
    k_arr = np.asarray(k, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size == 0:
        out = np.full_like(k_arr, float(c0), dtype=float)
    else:
        n = np.arange(1, coeffs.size + 1)
        out = c0 + np.cos(np.multiply.outer(k_arr, n)) @ coeffs
    return float(out) if np.isscalar(k) or k_arr.ndim == 0 else out


class FourierBand:
    """A real even 2pi-periodic function: mean value plus cosine coefficients.

    When `undetermined_a1` is set, the stored first coefficient is zero and
    the band is only known modulo an additive cos(k) term.
    """

    __slots__ = ("c0", "coeffs", "undetermined_a1")

    def __init__(self, c0: float, coeffs=(), undetermined_a1: bool = False):
        arr = np.array(coeffs, dtype=float).reshape(-1)
        if undetermined_a1:
            if arr.size == 0:
                arr = np.zeros(1)
            arr[0] = 0.0
        arr.setflags(write=False)
        self.c0 = float(c0)
        self.coeffs = arr
        self.undetermined_a1 = bool(undetermined_a1)

    @property
    def degree(self) -> int:
        return self.coeffs.size

    def coefficient(self, n: int) -> float:
        """Cosine coefficient a_n (n >= 1); zero above the stored degree."""
        if n < 1:
            raise ValidationError("coefficient index must be >= 1")
        return float(self.coeffs[n - 1]) if n <= self.coeffs.size else 0.0

    def evaluate(self, k):
        return cosine_series(self.c0, self.coeffs, k)

    __call__ = evaluate

    def mean(self) -> float:
        return self.c0

    def with_mean(self, c0: float) -> "FourierBand":
        """Copy of this band with the mean value replaced."""
        return FourierBand(c0, self.coeffs, self.undetermined_a1)

    def __repr__(self) -> str:
        return (
            f"FourierBand(c0={self.c0!r}, degree={self.degree}, "
            f"undetermined_a1={self.undetermined_a1})"
        )


@dataclass(frozen=True)
class MassiveSineBand:
    """J * sqrt(sin^2(k/2) + m^2): a periodic massive dispersion, gapless at m=0."""

    J: float = 1.0
    m: float = 0.0

    def evaluate(self, k):
        k = np.asarray(k, dtype=float)
        return self.J * np.sqrt(np.sin(k / 2.0) ** 2 + self.m**2)

    def mean(self) -> float:
        if self.m == 0.0:
            return 2.0 * self.J / math.pi
        value, _ = integrate.quad(
            lambda x: math.sqrt(math.sin(x / 2.0) ** 2 + self.m**2),
            0.0,
            2.0 * math.pi,
            epsabs=1e-14,
            epsrel=1e-13,
            limit=200,
        )
        return self.J * value / (2.0 * math.pi)


@dataclass(frozen=True)
class AbsSineBand:
    """amplitude * |sin k|; pi-periodic, so only even cosine coefficients."""

    amplitude: float = 1.0

    def evaluate(self, k):
        return self.amplitude * np.abs(np.sin(np.asarray(k, dtype=float)))

    def mean(self) -> float:
        return 2.0 * self.amplitude / math.pi


@dataclass(frozen=True)
class SampledBand:
    """Band given by >= 4096 uniform samples on [0, 2pi), linearly interpolated."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float).reshape(-1)
        if arr.size < GRID_SIZE:
            raise ValidationError(
                f"SampledBand needs at least {GRID_SIZE} samples, got {arr.size}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def evaluate(self, k):
        n = self.values.size
        x = np.mod(np.asarray(k, dtype=float), 2.0 * np.pi) * (n / (2.0 * np.pi))
        xp = np.arange(n + 1, dtype=float)
        fp = np.concatenate([self.values, self.values[:1]])  # periodic wrap
        return np.interp(x, xp, fp)

    def mean(self) -> float:
        return float(self.values.mean())


Band = FourierBand | MassiveSineBand | AbsSineBand | SampledBand


def band_fourier_coefficients(band, n_max: int, grid_size: int = GRID_SIZE) -> FourierBand:
    """Project a band onto a cosine series by uniform-grid quadrature.

    Exact (to rounding) for trigonometric polynomials of degree below
    grid_size/2; for smooth closed forms the error is below 1e-6 at the
    default grid.
    """
    k = uniform_grid(grid_size)
    f = np.asarray(band.evaluate(k), dtype=float)
    c0 = f.mean()
    n = np.arange(1, n_max + 1)
    coeffs = 2.0 / grid_size * (np.cos(np.multiply.outer(n, k)) @ f)
    return FourierBand(c0, coeffs)
