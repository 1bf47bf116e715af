"""Divisor-function machinery behind the perfect-tiling filter and the censuses.

The load-bearing objects are a smallest-prime-factor sieve (``FactorTable``),
the witness filter over proper divisors of n² (``witness_report``), and exact
counting primitives for z-rough integers and the divisor summatory function.
All arithmetic is exact integer arithmetic; the only floats are the analytic
reference quantities (thresholds, Mertens-type densities).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "FactorTable",
    "WitnessReport",
    "build_factor_table",
    "tau",
    "tau_of_square",
    "divisors",
    "witness_report",
    "is_rough",
    "rough_count",
    "mertens_product",
    "compute_z",
    "tau_summatory",
    "census_excess_tau",
]

# d*tau(d) stays below 2**64 for n up to this bound (d < 1e12, tau(d) < 1e5),
# so results remain portable to fixed-width implementations of this interface.
WITNESS_SAFE_LIMIT = 10**6

_E_TO_E = math.exp(math.e)


@dataclass(frozen=True)
class FactorTable:
    """Smallest-prime-factor table for every integer in [2, limit].

    ``spf[m]`` is the smallest prime dividing m (and ``spf[p] == p`` exactly
    for primes).  Entries 0 and 1 are zero sentinels.  The array is marked
    read-only, so a table can be shared freely across threads and workers.
    """

    limit: int
    spf: np.ndarray


def build_factor_table(limit: int) -> FactorTable:
    """Sieve smallest prime factors up to ``limit`` (inclusive)."""
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            window = spf[p * p :: p]
            window[window == 0] = p
    # whatever is still unmarked is prime
    primes = np.flatnonzero(spf[2:] == 0) + 2
    spf[primes] = primes
    spf.setflags(write=False)
    return FactorTable(limit=limit, spf=spf)


def _check_range(n: int, t: FactorTable, minimum: int = 1) -> None:
    if n < minimum:
        raise ValueError(f"n must be >= {minimum}, got {n}")
    if n > t.limit:
        raise ValueError(f"n={n} exceeds table limit {t.limit}")


def _factorize(n: int, spf) -> list[tuple[int, int]]:
    """(prime, exponent) pairs of n in ascending prime order; n >= 1."""
    out = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def tau(n: int, t: FactorTable) -> int:
    """Number of positive divisors of n."""
    _check_range(n, t)
    result = 1
    for _, e in _factorize(n, t.spf):
        result *= e + 1
    return result


def tau_of_square(n: int, t: FactorTable) -> int:
    """tau(n²) computed from n's own exponents, so only n must be in range."""
    _check_range(n, t)
    result = 1
    for _, e in _factorize(n, t.spf):
        result *= 2 * e + 1
    return result


def _divisor_tau_pairs(factors: list[tuple[int, int]], square: bool) -> list[tuple[int, int]]:
    """All (d, tau(d)) for d dividing n (or n² when ``square``), unsorted."""
    pairs = [(1, 1)]
    for p, e in factors:
        if square:
            e *= 2
        powers = [(p**k, k + 1) for k in range(e + 1)]
        pairs = [(d * q, td * tq) for d, td in pairs for q, tq in powers]
    return pairs


def divisors(n: int, t: FactorTable) -> list[int]:
    """Ascending list of all positive divisors of n."""
    _check_range(n, t)
    return sorted(d for d, _ in _divisor_tau_pairs(_factorize(n, t.spf), square=False))


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of the proper-divisor filter for a single n.

    ``witness`` is the smallest proper divisor d of n² with d·tau(d) >= n²,
    or None when no such divisor exists (then ``p1`` is True).  ``p2`` and
    ``p3`` are the successively stronger reduction predicates
    d·tau(n²) < n² and d·tau(n)² < n², quantified over all proper divisors;
    p3 implies p2 implies p1.
    """

    n: int
    witness: int | None
    p1: bool
    p2: bool
    p3: bool


def witness_report(n: int, t: FactorTable) -> WitnessReport:
    """Search the proper divisors of n² for the smallest filter witness."""
    _check_range(n, t, minimum=3)
    if n > WITNESS_SAFE_LIMIT:
        raise ValueError(
            f"n={n} exceeds the 64-bit overflow guard ({WITNESS_SAFE_LIMIT}) for d*tau(d)"
        )
    factors = _factorize(n, t.spf)
    n2 = n * n
    p_min = factors[0][0]
    tau_n = math.prod(e + 1 for _, e in factors)
    tau_n2 = math.prod(2 * e + 1 for _, e in factors)
    # both predicates are monotone in d, so only the largest proper divisor matters
    d_max = n2 // p_min
    p2 = d_max * tau_n2 < n2
    p3 = d_max * tau_n * tau_n < n2

    witness = None
    for d, tau_d in sorted(_divisor_tau_pairs(factors, square=True)):
        if d == n2:
            continue
        if d * tau_d >= n2:
            witness = d
            break
    return WitnessReport(n=n, witness=witness, p1=witness is None, p2=p2, p3=p3)


def is_rough(n: int, z: int, t: FactorTable) -> bool:
    """True iff every divisor of n greater than 1 exceeds z (n=1 vacuously)."""
    _check_range(n, t)
    if n == 1:
        return True
    return int(t.spf[n]) > z


def _primes_upto(m: int) -> list[int]:
    if m < 2:
        return []
    sieve = np.ones(m + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(m) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


def _rough_segment(lo: int, hi: int, primes: list[int]) -> int:
    """Survivors of crossing off all multiples of ``primes`` within [lo, hi]."""
    alive = np.ones(hi - lo + 1, dtype=bool)
    for p in primes:
        start = ((lo + p - 1) // p) * p
        if start <= hi:
            alive[start - lo :: p] = False
    return int(alive.sum())


def rough_count(x: int, z: int, *, workers: int = 1, segment_size: int = 1 << 20) -> int:
    """Exact |{n <= x : n is z-rough}| by segmented sieving, with 1 included."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if z < 0:
        raise ValueError(f"z must be >= 0, got {z}")
    primes = _primes_upto(min(z, x))
    segments = [(lo, min(lo + segment_size - 1, x)) for lo in range(1, x + 1, segment_size)]
    if workers > 1 and len(segments) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda seg: _rough_segment(*seg, primes), segments))
    else:
        counts = [_rough_segment(lo, hi, primes) for lo, hi in segments]
    return sum(counts)


def mertens_product(z: int) -> Fraction:
    """Exact prod_{p <= z} (1 - 1/p), the z-rough density in the x >> z regime."""
    if z < 0:
        raise ValueError(f"z must be >= 0, got {z}")
    num = den = 1
    for p in _primes_upto(z):
        num *= p - 1
        den *= p
    return Fraction(num, den)


def _g(x: float) -> float:
    """Slowly growing threshold factor, clamped to stay >= 1 at desk scale."""
    return max(1.0, math.log(math.log(math.log(x))))


def _tau_threshold(x: float) -> float:
    """g(x) * ln(x) * ln(ln(x)), the cutoff separating excess-tau integers."""
    if x <= math.e:
        raise ValueError(f"x must exceed e, got {x}")
    return _g(x) * math.log(x) * math.log(math.log(x))


def compute_z(x: float) -> int:
    """Roughness bound z = floor((g(x) ln x ln ln x)²); requires x > e^e."""
    if x <= _E_TO_E:
        raise ValueError(f"x must exceed e^e ~ {_E_TO_E:.6f}, got {x}")
    return math.floor(_tau_threshold(x) ** 2)


def tau_summatory(x: int) -> int:
    """Exact sum of tau(n) for n <= x via the hyperbola identity, O(sqrt x)."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    r = math.isqrt(x)
    return 2 * sum(x // a for a in range(1, r + 1)) - r * r


def _tau_sieve(x: int) -> np.ndarray:
    """tau(n) for every n in [0, x] (index 0 unused), via divisor pairs."""
    counts = np.zeros(x + 1, dtype=np.uint32)
    for d in range(1, math.isqrt(x) + 1):
        counts[d * d] += 1
        counts[d * d + d :: d] += 2
    return counts


def census_excess_tau(x: int, t: FactorTable) -> int:
    """#{3 <= n <= x : tau(n) > g(x) ln(ln x) ln(x)}."""
    if x < 3:
        raise ValueError(f"x must be >= 3, got {x}")
    if x > t.limit:
        raise ValueError(f"x={x} exceeds table limit {t.limit}")
    threshold = _tau_threshold(x)
    counts = _tau_sieve(x)
    return int((counts[3 : x + 1] > threshold).sum())
