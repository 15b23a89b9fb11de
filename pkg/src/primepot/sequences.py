"""Integer sequences and counting functions: sieves, Moebius weights, gaps.

Primes come from the classic Eratosthenes sieve; lucky numbers from the
position-based survivor sieve. The counting estimates bundle the exact
staircase count with its three smooth approximations (x/ln x, the
logarithmic integral from 2, and the Moebius-weighted refinement).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

__all__ = [
    "sieve_primes",
    "first_primes",
    "sieve_lucky",
    "first_lucky",
    "moebius",
    "log_integral",
    "riemann_r",
    "CountingEstimates",
    "counting_estimates",
    "prime_gaps",
    "check_growth_bound",
    "validate_sequence",
]


def validate_sequence(values) -> np.ndarray:
    """Check strictly increasing positive integers; return as int64 array."""
    seq = np.asarray(values, dtype=np.int64)
    if seq.ndim != 1:
        raise ValueError("sequence must be one-dimensional")
    if seq.size and seq.min() < 1:
        raise ValueError("sequence values must be >= 1")
    if seq.size >= 2 and not np.all(np.diff(seq) > 0):
        raise ValueError("sequence must be strictly increasing")
    return seq


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, ascending. limit < 2 gives an empty array."""
    if limit < 0:
        raise ValueError("limit must be non-negative")
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.nonzero(is_prime)[0].astype(np.int64)


def first_primes(n: int) -> np.ndarray:
    """The first n primes."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return np.empty(0, dtype=np.int64)
    # p_n < n(ln n + ln ln n) for n >= 6; pad and retry on the rare miss
    limit = 15 if n < 6 else int(n * (math.log(n) + math.log(math.log(n))) + 10)
    primes = sieve_primes(limit)
    while primes.size < n:
        limit *= 2
        primes = sieve_primes(limit)
    return primes[:n]


def sieve_lucky(limit: int) -> np.ndarray:
    """All lucky numbers <= limit via the survivor-position sieve.

    Stage one removes every second integer; each later stage takes the next
    surviving value s and removes every s-th element of the current list,
    counting positions in the list rather than values.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    survivors = np.arange(1, limit + 1, 2, dtype=np.int64)
    stage = 1
    while stage < survivors.size:
        step = int(survivors[stage])
        if step > survivors.size:
            break
        survivors = np.delete(survivors, np.s_[step - 1 :: step])
        stage += 1
    return survivors


def first_lucky(n: int) -> np.ndarray:
    """The first n lucky numbers."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return np.empty(0, dtype=np.int64)
    limit = max(10, 4 * n)
    lucky = sieve_lucky(limit)
    while lucky.size < n:
        limit *= 2
        lucky = sieve_lucky(limit)
    return lucky[:n]


def moebius(n: int) -> int:
    """Moebius function: 1 at n=1, 0 on squareful n, else (-1)^#prime factors."""
    if n < 1:
        raise ValueError("moebius is defined for n >= 1")
    if n == 1:
        return 1
    k = 0
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            k += 1
        d += 1 if d == 2 else 2
    if n > 1:
        k += 1
    return -1 if k % 2 else 1


def log_integral(x: float) -> float:
    """li(x) = integral of dt/ln t from 2 to x (no principal value needed)."""
    if x <= 2.0:
        return 0.0
    value, _ = quad(lambda t: 1.0 / math.log(t), 2.0, x, limit=200)
    return value


def riemann_r(x: float, terms: int = 25) -> float:
    """Moebius-weighted series of logarithmic integrals truncated at `terms`.

    Terms with x**(1/n) < 2 contribute nothing (li vanishes there) and stop
    the summation early.
    """
    if x <= 2.0:
        raise ValueError("x must exceed 2")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    total = 0.0
    for n in range(1, terms + 1):
        root = x ** (1.0 / n)
        if root < 2.0:
            break
        mu = moebius(n)
        if mu:
            total += mu / n * log_integral(root)
    return total


@dataclass(frozen=True)
class CountingEstimates:
    """Exact prime count at x alongside its smooth approximations."""

    x: float
    exact: int
    gauss: float
    li: float
    riemann_r: float
    terms_used: int

    def as_dict(self) -> dict:
        return {
            "x": self.x,
            "exact": self.exact,
            "gauss": self.gauss,
            "li": self.li,
            "riemann_r": self.riemann_r,
        }


def counting_estimates(x: float, terms: int = 25) -> CountingEstimates:
    """Exact sieve count of primes <= x plus the three smooth estimates."""
    if x <= 2.0:
        raise ValueError("x must exceed 2")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    exact = int(sieve_primes(int(math.floor(x))).size)
    gauss = x / math.log(x)
    li = log_integral(x)
    used = 0
    for n in range(1, terms + 1):
        if x ** (1.0 / n) < 2.0:
            break
        used = n
    return CountingEstimates(
        x=float(x),
        exact=exact,
        gauss=gauss,
        li=li,
        riemann_r=riemann_r(x, terms),
        terms_used=used,
    )


def prime_gaps(seq) -> np.ndarray:
    """Composite-count gaps g with seq[i+1] = seq[i] + g[i] + 1."""
    values = validate_sequence(seq)
    if values.size < 2:
        raise ValueError("need at least two elements to form gaps")
    return np.diff(values) - 1


def check_growth_bound(seq, bound: float) -> bool:
    """True iff every element satisfies e_n <= bound * n**2, n counted from 1."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    values = validate_sequence(seq)
    if values.size == 0:
        return True
    n = np.arange(1, values.size + 1, dtype=np.float64)
    return bool(np.all(values <= bound * n * n))
