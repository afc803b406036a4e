"""Elementary multiplicative number theory on Python integers.

Factorization, divisors, Moebius, totient, multiplicative order, p-adic
valuation and the lifting-the-exponent closed form.  Everything here is a
pure function of its arguments.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

#: Trial division runs up to this bound before Pollard-Brent takes over.
TRIAL_DIVISION_BOUND = 10_000

# Deterministic Miller-Rabin witnesses for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES: list[int] = []


def primes_below(n: int) -> list[int]:
    """All primes p < n (simple sieve)."""
    if n <= 2:
        return []
    sieve = bytearray(b"\x01") * n
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n - 1) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n, p)))
    return [i for i, v in enumerate(sieve) if v]


def _small_primes() -> list[int]:
    if not _SMALL_PRIMES:
        _SMALL_PRIMES.extend(primes_below(TRIAL_DIVISION_BOUND + 1))
    return _SMALL_PRIMES


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, 20 extra random bases above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases: Iterable[int] = _MR_BASES
    if n >= _MR_DETERMINISTIC_LIMIT:
        rng = random.Random(n)
        bases = list(_MR_BASES) + [rng.randrange(2, n - 1) for _ in range(20)]
    for b in bases:
        x = pow(b, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int) -> int:
    # Pollard-Brent; returns a nontrivial factor of the odd composite n.
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ``((p1, e1), (p2, e2), ...)`` with p1 < p2 < ..."""

    factors: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        n = 1
        for p, e in self.factors:
            n *= p**e
        return n

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)


def factorize(n: int, trial_bound: int | None = None) -> Factorization:
    """Factor a positive integer.

    Trial division up to ``trial_bound`` (default :data:`TRIAL_DIVISION_BOUND`),
    then Pollard-Brent splitting of whatever cofactor remains.
    """
    if n <= 0:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    bound = TRIAL_DIVISION_BOUND if trial_bound is None else trial_bound
    counts: dict[int, int] = {}
    for p in _small_primes():
        if p > bound or p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            counts[p] = e
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        if m % 2 == 0:
            f = 2
        else:
            r = math.isqrt(m)
            f = r if r * r == m else _brent(m)
        stack.extend((f, m // f))
    return Factorization(tuple(sorted(counts.items())))


def divisors(f: Factorization) -> list[int]:
    divs = [1]
    for p, e in f:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def moebius(n: int) -> int:
    if n <= 0:
        raise ValueError(f"moebius needs n >= 1, got {n}")
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    if n <= 0:
        raise ValueError(f"euler_phi needs n >= 1, got {n}")
    return _phi_from(factorize(n))


def _phi_from(f: Factorization) -> int:
    result = 1
    for p, e in f:
        result *= (p - 1) * p ** (e - 1)
    return result


@lru_cache(maxsize=65536)
def _order_data(k: int) -> tuple[int, tuple[int, ...]]:
    phi = _phi_from(factorize(k))
    return phi, factorize(phi).primes


def mult_order(a: int, k: int) -> int:
    """Multiplicative order of ``a`` modulo ``k`` (``ord_1(a) = 1``).

    Starts from phi(k) and strips prime factors while ``a`` still hits 1.
    """
    if k <= 0:
        raise ValueError(f"modulus must be positive, got {k}")
    if math.gcd(a, k) != 1:
        raise ValueError(f"gcd({a}, {k}) != 1, order undefined")
    if k == 1:
        return 1
    a %= k
    n, primes = _order_data(k)
    for q in primes:
        while n % q == 0 and pow(a, n // q, k) == 1:
            n //= q
    return n


def nu_p(p: int, n: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    if p < 2:
        raise ValueError(f"not a prime: {p}")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@dataclass(frozen=True)
class PAdicData:
    """LTE constants of ``m`` at ``p``: ``ord = ord_p(m)`` and the base ``m_p``."""

    p: int
    m: int
    ord: int
    m_p: int


def padic_data(p: int, m: int) -> PAdicData:
    if m % p == 0:
        raise ValueError(f"{m} is not coprime to {p}")
    if abs(m) < 2:
        raise ValueError(f"|m| must be at least 2, got {m}")
    order = mult_order(m, p)
    if p == 2:
        if m % 4 == 1:
            m_p = nu_p(2, m - 1)
        else:
            m_p = nu_p(2, m * m - 1) - 1
    else:
        m_p = nu_p(p, m**order - 1)
    return PAdicData(p, m, order, m_p)


def lte_valuation(p: int, m: int, d: int) -> int:
    """nu_p(m**d - 1) from the lifting-the-exponent closed form.

    Valid for odd ``p`` when ``ord_p(m) | d`` and for ``p = 2`` when ``d`` is
    even.  Outside that regime a :class:`ValueError` is raised and the caller
    is expected to take the valuation directly.
    """
    if d <= 0:
        raise ValueError(f"d must be positive, got {d}")
    data = padic_data(p, m)
    if p == 2:
        if d % 2:
            raise ValueError("p = 2 closed form needs even d")
    elif d % data.ord:
        raise ValueError(f"ord_{p}({m}) = {data.ord} does not divide {d}")
    return data.m_p + nu_p(p, d)
