"""Exact integer arithmetic behind the coefficient inversion.

Moebius function, Mertens function, divisor enumeration, and the
twist-dependent inversion weights b(n) that solve the divisor-sum identity

    sum_{m | j} q^(j/m) b(m) = delta_{1,j},    q = +1 (pbc) or -1 (abc).

For pbc the weights coincide with the Moebius function.  All values are
exact Python integers; the smallest-prime-factor sieve is built once and
shared read-only, so every function here is safe to call concurrently.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .core import Twist, ValidationError

DEFAULT_SIEVE_BOUND = 10**6

_lock = threading.RLock()
_spf: list[int] = []  # _spf[n] = smallest prime factor of n, for n < len(_spf)
_mu_prefix: list[int] = [0]  # _mu_prefix[x] = sum of mu(1..x)
_b_cache: dict[Twist, list[int]] = {Twist.PBC: [0], Twist.ABC: [0]}


def configure_sieve(bound: int) -> None:
    """Pre-build the smallest-prime-factor sieve up to `bound`."""
    _ensure_sieve(bound)


def _ensure_sieve(bound: int) -> None:
    global _spf
    if len(_spf) > bound:
        return
    with _lock:
        if len(_spf) > bound:
            return
        n = max(bound, 1)
        spf = list(range(n + 1))
        for p in range(2, math.isqrt(n) + 1):
            if spf[p] == p:  # p prime
                for multiple in range(p * p, n + 1, p):
                    if spf[multiple] == multiple:
                        spf[multiple] = p
        _spf = spf


def _factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as (prime, exponent) pairs, ascending."""
    if n <= DEFAULT_SIEVE_BOUND:
        _ensure_sieve(min(max(n, 1024), DEFAULT_SIEVE_BOUND))
    factors: list[tuple[int, int]] = []
    if n < len(_spf):
        while n > 1:
            p = _spf[n]
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            factors.append((p, k))
        return factors
    # above the sieve: trial division
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            factors.append((p, k))
    if n > 1:
        factors.append((n, 1))
    return factors


def moebius(n: int) -> int:
    """Moebius function: (-1)^r for squarefree n with r prime factors, else 0."""
    if n < 1:
        raise ValidationError(f"moebius requires n >= 1, got {n}")
    if n == 1:
        return 1
    result = 1
    for _, k in _factorize(n):
        if k > 1:
            return 0
        result = -result
    return result


def mertens(x: int) -> int:
    """Partial sum of the Moebius function over 1..x."""
    if x < 1:
        raise ValidationError(f"mertens requires x >= 1, got {x}")
    _ensure_mu_prefix(x)
    return _mu_prefix[x]


def _ensure_mu_prefix(x: int) -> None:
    global _mu_prefix
    if len(_mu_prefix) > x:
        return
    with _lock:
        if len(_mu_prefix) > x:
            return
        n = max(x, 2 * len(_mu_prefix), 1024)
        # linear sieve for mu(1..n)
        mu = [0] * (n + 1)
        mu[1] = 1
        primes: list[int] = []
        is_comp = [False] * (n + 1)
        for i in range(2, n + 1):
            if not is_comp[i]:
                primes.append(i)
                mu[i] = -1
            for p in primes:
                ip = i * p
                if ip > n:
                    break
                is_comp[ip] = True
                if i % p == 0:
                    mu[ip] = 0
                    break
                mu[ip] = -mu[i]
        prefix = [0] * (n + 1)
        acc = 0
        for i in range(1, n + 1):
            acc += mu[i]
            prefix[i] = acc
        _mu_prefix = prefix


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    if n < 1:
        raise ValidationError(f"divisors requires n >= 1, got {n}")
    divs = [1]
    for p, k in _factorize(n):
        powers = [p**e for e in range(1, k + 1)]
        divs += [d * q for d in divs for q in powers]
    divs.sort()
    return divs


@dataclass(frozen=True)
class BCoefficients:
    """Inversion weights b(1..M) for one twist; values are exact integers."""

    twist: Twist
    values: tuple[int, ...]

    def value(self, n: int) -> int:
        """b(n), 1-indexed."""
        return self.values[n - 1]

    def __len__(self) -> int:
        return len(self.values)


def b_coefficients(twist: Twist, M: int) -> BCoefficients:
    """First M inversion weights for the given twist.

    Defined recursively by b(1) = q and, for j >= 2,
    b(j) = -q * sum over proper divisors m of j of q^(j/m) b(m),
    which for q = +1 reduces to the Moebius function.
    """
    if M < 1:
        raise ValidationError(f"b_coefficients requires M >= 1, got {M}")
    cache = _b_cache[twist]
    if len(cache) <= M:
        with _lock:
            q = twist.q
            while len(cache) <= M:
                j = len(cache)
                if j == 0:
                    cache.append(0)  # placeholder so cache[n] = b(n)
                    continue
                if j == 1:
                    cache.append(q)
                    continue
                acc = 0
                for m in divisors(j):
                    if m == j:
                        continue
                    acc += (q ** ((j // m) & 1)) * cache[m]
                cache.append(-q * acc)
    return BCoefficients(twist, tuple(cache[1 : M + 1]))
