"""Lanczos iteration for the lowest eigenvalue of a symmetric operator.

Full reorthogonalization is on by default: desk-scale Krylov bases are
small enough that keeping them exactly orthogonal is cheap, and ghost
copies of converged eigenvalues would corrupt the degeneracy warning.
The start vector is drawn from a seeded generator so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from .core import NumericalError, ValidationError


@dataclass(frozen=True)
class LanczosConfig:
    tol_energy: float = 1e-12
    max_iter: int = 500
    reorthogonalize: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.tol_energy <= 0:
            raise ValidationError("tol_energy must be positive")
        if self.max_iter < 1:
            raise ValidationError("max_iter must be >= 1")


@dataclass
class LanczosResult:
    energy: float
    residual_norm: float
    degeneracy_warning: bool
    iterations: int


def lowest_eigenpair(
    matvec: Callable[[np.ndarray], np.ndarray],
    dim: int,
    config: LanczosConfig | None = None,
) -> tuple[LanczosResult, np.ndarray]:
    """Ground eigenvalue and eigenvector of a real symmetric operator.

    Raises NumericalError (with `best_estimate` attached) if the Ritz value
    has not settled within `max_iter` iterations.
    """
    config = config or LanczosConfig()
    if dim < 1:
        raise ValidationError("operator dimension must be >= 1")
    if dim == 1:
        v = np.ones(1)
        energy = float(matvec(v)[0])
        return LanczosResult(energy, 0.0, False, 1), v

    rng = np.random.default_rng(config.seed)
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)

    max_steps = min(config.max_iter, dim)
    Q = np.empty((max_steps, dim))
    alphas: list[float] = []
    betas: list[float] = []
    Q[0] = v
    prev_theta = np.inf
    stable = 0
    converged = False
    steps = 0
    exhausted = False

    for j in range(max_steps):
        w = matvec(Q[j])
        alpha = float(Q[j] @ w)
        alphas.append(alpha)
        w -= alpha * Q[j]
        if j > 0:
            w -= betas[-1] * Q[j - 1]
        if config.reorthogonalize:
            basis = Q[: j + 1]
            w -= basis.T @ (basis @ w)
            w -= basis.T @ (basis @ w)
        beta = float(np.linalg.norm(w))
        steps = j + 1

        ritz_vals = eigvalsh_tridiagonal(np.array(alphas), np.array(betas[:j]))
        theta = float(ritz_vals[0])
        norm_est = max(1.0, abs(ritz_vals[0]), abs(ritz_vals[-1]))
        if abs(theta - prev_theta) <= config.tol_energy * max(1.0, abs(theta)):
            stable += 1
        else:
            stable = 0
        prev_theta = theta

        if beta <= 1e-14 * norm_est:
            converged = True  # Krylov space is exhausted: T is exact
            exhausted = True
            break
        if stable >= 2 and steps >= 3:
            # the Ritz value has settled; accept once the residual bound
            # |beta * y_last| guarantees the eigenpair itself is converged
            _, y = _ground_ritz_pair(alphas, betas[:j])
            if beta * abs(y[-1]) <= 0.5e-8 * norm_est:
                converged = True
                break
        if j + 1 < max_steps:
            Q[j + 1] = w / beta
            betas.append(beta)

    if steps == dim and not exhausted:
        converged = True  # full Krylov basis reached

    theta, y = _ground_ritz_pair(alphas, betas[: steps - 1])
    vector = y @ Q[:steps]
    vector /= np.linalg.norm(vector)
    residual = float(np.linalg.norm(matvec(vector) - theta * vector))

    if not converged:
        err = NumericalError(
            f"Lanczos did not converge in {steps} iterations "
            f"(best estimate {theta:.15g}, residual {residual:.3g})"
        )
        err.best_estimate = theta
        raise err

    ritz = eigvalsh_tridiagonal(np.array(alphas), np.array(betas[: steps - 1]))
    degenerate = bool(len(ritz) >= 2 and ritz[1] - ritz[0] <= 1e-10)
    return LanczosResult(float(theta), residual, degenerate, steps), vector


def _ground_ritz_pair(alphas: list[float], betas: list[float]) -> tuple[float, np.ndarray]:
    vals, vecs = eigh_tridiagonal(np.array(alphas), np.array(betas))
    return float(vals[0]), vecs[:, 0]
