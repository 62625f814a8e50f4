"""Recover cosine coefficients of a band from its Riemann-sum residuals.

The residual of the L-point sum aliases the coefficients as
R_L = sum_l q^l a_{lL}; on a triangular index set this relation inverts
exactly through the integer weights of `numtheory.b_coefficients`:

    a_k = sum_{n=1..floor(M/k)} b(n) R_{n*k}.

Three size layouts are supported.  `AllFrom1` uses sizes 1..M directly.
`EvenOnly` handles pi-periodic bands from even sizes: relabeling m = L/2
maps the problem onto the same inversion for the half-period coefficients.
`From2` omits size 1, which only ever enters a_1, so everything except the
cos(k) coefficient is still determined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bands import FourierBand, GRID_SIZE, uniform_grid
from .core import Twist, ValidationError
from .numtheory import b_coefficients
from .riemann import residual_series


@dataclass(frozen=True)
class AllFrom1:
    """Sizes 1..M, recovering coefficients a_1..a_M."""

    M: int

    def sizes(self) -> tuple[int, ...]:
        return tuple(range(1, self.M + 1))


@dataclass(frozen=True)
class EvenOnly:
    """Even sizes 2, 4, .., 2*M_even, recovering a_2, a_4, .., a_{2*M_even}."""

    M_even: int

    def sizes(self) -> tuple[int, ...]:
        return tuple(range(2, 2 * self.M_even + 1, 2))


@dataclass(frozen=True)
class From2:
    """Sizes 2..M; a_1 is undetermined and reported as zero with a flag."""

    M: int

    def sizes(self) -> tuple[int, ...]:
        return tuple(range(2, self.M + 1))


SizeSet = AllFrom1 | EvenOnly | From2


def size_set_for(sizes, kind: str | None = None) -> SizeSet:
    """Build a size set from observed sizes, optionally forcing a kind.

    `kind` is one of 'all-from-1', 'even-only', 'from-2' or None (infer).
    Arbitrary non-contiguous size sets are rejected.
    """
    sizes = tuple(sorted(set(int(s) for s in sizes)))
    if not sizes:
        raise ValidationError("empty size set")
    if kind in (None, "auto"):
        if sizes[0] == 1:
            kind = "all-from-1"
        elif all(s % 2 == 0 for s in sizes):
            kind = "even-only"
        else:
            kind = "from-2"
    if kind == "all-from-1":
        candidate: SizeSet = AllFrom1(sizes[-1])
    elif kind == "even-only":
        if sizes[-1] % 2:
            raise ValidationError("even-only size set requires even sizes")
        candidate = EvenOnly(sizes[-1] // 2)
    elif kind == "from-2":
        candidate = From2(sizes[-1])
    else:
        raise ValidationError(f"unknown size-set kind {kind!r}")
    if candidate.sizes() != sizes:
        raise ValidationError(
            f"unsupported size set {sizes}: expected {candidate.sizes()} for "
            f"kind {kind!r}; arbitrary size sets are not invertible"
        )
    return candidate


def _checked_residual_vector(
    residuals: Mapping[int, float], sizes: tuple[int, ...]
) -> np.ndarray:
    missing = [L for L in sizes if L not in residuals]
    if missing:
        raise ValidationError(f"residuals missing required sizes {missing}")
    vec = np.array([residuals[L] for L in sizes], dtype=float)
    if not np.all(np.isfinite(vec)):
        bad = [L for L, v in zip(sizes, vec) if not np.isfinite(v)]
        raise ValidationError(f"non-finite residuals at sizes {bad}")
    return vec


def _triangular_invert(R: np.ndarray, twist: Twist) -> np.ndarray:
    """Apply a_k = sum_n b(n) R_{nk} on sizes 1..M (R is 0-indexed by size-1)."""
    M = R.size
    b = b_coefficients(twist, M).values
    a = np.zeros(M)
    for k in range(1, M + 1):
        acc = 0.0
        for n in range(1, M // k + 1):
            acc += b[n - 1] * R[n * k - 1]
        a[k - 1] = acc
    return a


def invert_coefficients(
    residuals: Mapping[int, float], twist: Twist, size_set: SizeSet
) -> FourierBand:
    """Cosine coefficients consistent with the given residuals.

    Returns a FourierBand with zero mean (the mean is not recoverable from
    residuals); for `From2` the cos(k) coefficient is stored as zero and
    flagged undetermined.
    """
    if isinstance(size_set, AllFrom1):
        R = _checked_residual_vector(residuals, size_set.sizes())
        return FourierBand(0.0, _triangular_invert(R, twist))
    if isinstance(size_set, EvenOnly):
        R_half = _checked_residual_vector(residuals, size_set.sizes())
        a_half = _triangular_invert(R_half, twist)
        coeffs = np.zeros(2 * size_set.M_even)
        coeffs[1::2] = a_half
        return FourierBand(0.0, coeffs)
    if isinstance(size_set, From2):
        sizes = size_set.sizes()
        R = np.zeros(size_set.M)
        R[1:] = _checked_residual_vector(residuals, sizes)
        M = size_set.M
        b = b_coefficients(twist, M).values
        coeffs = np.zeros(M)
        for k in range(2, M + 1):
            acc = 0.0
            for n in range(1, M // k + 1):
                acc += b[n - 1] * R[n * k - 1]
            coeffs[k - 1] = acc
        return FourierBand(0.0, coeffs, undetermined_a1=True)
    raise ValidationError(f"unsupported size set {size_set!r}")


def reconstruct_function(
    residuals: Mapping[int, float], c0: float, twist: Twist, size_set: SizeSet
) -> FourierBand:
    """Full reconstructed function: known mean plus inverted coefficients."""
    if not np.isfinite(c0):
        raise ValidationError("mean value must be finite")
    band = invert_coefficients(residuals, twist, size_set)
    return band.with_mean(float(c0))


def convergence_curve(
    band,
    cutoffs,
    twist: Twist = Twist.PBC,
    grid_size: int = GRID_SIZE,
) -> list[tuple[int, float]]:
    """Squared L2([0,2pi]) reconstruction error versus inversion cutoff.

    For each cutoff L the residuals of sizes 1..L are inverted and the
    reconstructed function compared to the band on a uniform grid.
    """
    cutoffs = sorted(set(int(L) for L in cutoffs))
    if not cutoffs or cutoffs[0] < 1:
        raise ValidationError("cutoffs must be positive sizes")
    max_L = cutoffs[-1]
    residuals = residual_series(band, range(1, max_L + 1), twist)
    c0 = band.mean()
    k = uniform_grid(grid_size)
    f_exact = np.asarray(band.evaluate(k), dtype=float)
    cos_table = np.cos(np.multiply.outer(np.arange(1, max_L + 1), k))
    dk = 2.0 * np.pi / grid_size
    out = []
    for L in cutoffs:
        approx = reconstruct_function(residuals, c0, twist, AllFrom1(L))
        f_approx = c0 + approx.coeffs @ cos_table[:L]
        err_sq = float(np.sum((f_approx - f_exact) ** 2) * dk)
        out.append((L, err_sq))
    return out
