"""Evaluating cyclotomic polynomials at integers.

Exact values go through the Moebius product over the odd square-free core of
``k``; modular values use the same product with modular exponentiation.
:func:`solve_phi_eq` finds every integer ``x`` with ``Phi_k(x) = Y`` using the
fact that any root of ``Phi_k(x) - Y`` divides its constant term ``1 - Y``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import gmpy2

from .config import SolverConfig
from .intfun import divisors, euler_phi, factorize, moebius, primes_below


class ResourceLimitError(RuntimeError):
    """An exact computation would exceed the configured bit ceiling."""


@dataclass(frozen=True)
class PhiEvalPlan:
    """``Phi_k(x) = Phi_{k_reduced}(sign * x**lift_exponent)``.

    ``k_reduced`` is the odd square-free core of ``k``; powers of two keep
    ``k_reduced = 2`` and evaluate as the binomial ``y + 1``.
    """

    k: int
    k_reduced: int
    sign: int
    lift_exponent: int
    degree: int
    reduced_degree: int
    # (d, mu(k_reduced / d)) for the divisors d of k_reduced with mu != 0
    terms: tuple[tuple[int, int], ...]

    def inner(self, x: int) -> int:
        return self.sign * x**self.lift_exponent


@lru_cache(maxsize=4096)
def phi_plan(k: int) -> PhiEvalPlan:
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    f = factorize(k)
    rad = 1
    for p in f.primes:
        rad *= p
    e = k // rad
    if rad == 2:
        core, sign, e = 2, 1, k // 2
    elif rad % 2 == 0:
        core, sign = rad // 2, -1
    else:
        core, sign = rad, 1
    terms = tuple((d, moebius(core // d)) for d in divisors(factorize(core)))
    return PhiEvalPlan(
        k=k,
        k_reduced=core,
        sign=sign,
        lift_exponent=e,
        degree=euler_phi(k),
        reduced_degree=euler_phi(core),
        terms=terms,
    )


def _prime_power_base(k: int) -> Optional[int]:
    f = factorize(k)
    return f.primes[0] if len(f) == 1 else None


def phi_special(k: int, x: int) -> int:
    """``Phi_k(x)`` for ``x`` in {-1, 0, 1} and ``k`` odd or divisible by 4."""
    if k < 3 or k % 4 == 2:
        raise ValueError(f"phi_special needs k >= 3 with k != 2 mod 4, got {k}")
    if x == 0:
        return 1
    if x == 1:
        return _prime_power_base(k) or 1
    if x == -1:
        return 2 if _prime_power_base(k) == 2 else 1
    raise ValueError(f"x must be -1, 0 or 1, got {x}")


def _check_bits(plan: PhiEvalPlan, x: int, ceiling: Optional[int]) -> None:
    if ceiling is None:
        return
    bits = abs(x).bit_length() * plan.lift_exponent
    top = sum(d for d, mu in plan.terms if mu == 1) if plan.k_reduced != 2 else 1
    if bits * top > ceiling:
        raise ResourceLimitError(
            f"Phi_{plan.k}({x}) needs ~{bits * top} bits, ceiling is {ceiling}"
        )


def phi_eval_exact(k: int, x: int, bit_ceiling: Optional[int] = None) -> int:
    """Exact ``Phi_k(x)`` for ``k >= 3``.

    Raises :class:`ResourceLimitError` when the numerator of the Moebius
    product would exceed ``bit_ceiling`` bits.
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    if -1 <= x <= 1:
        if k % 4 == 2:
            return phi_special(k // 2, -x)
        return phi_special(k, x)
    plan = phi_plan(k)
    _check_bits(plan, x, bit_ceiling)
    y = gmpy2.mpz(x) ** plan.lift_exponent * plan.sign
    if plan.k_reduced == 2:
        return int(y + 1)
    num = gmpy2.mpz(1)
    den = gmpy2.mpz(1)
    for d, mu in plan.terms:
        if mu == 1:
            num *= y**d - 1
        elif mu == -1:
            den *= y**d - 1
    return int(num // den)


def phi_eval_mod(k: int, x: int, P: int) -> Optional[int]:
    """``Phi_k(x) mod P``, or ``None`` when the prime is degenerate.

    Degenerate means some denominator factor ``y**d - 1`` of the Moebius
    product vanishes mod ``P``; no residue is reported in that case.
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    if P < 2:
        raise ValueError(f"P must be prime, got {P}")
    plan = phi_plan(k)
    y = plan.sign * pow(x, plan.lift_exponent, P) % P
    if plan.k_reduced == 2:
        return (y + 1) % P
    num = den = 1
    for d, mu in plan.terms:
        if mu == 1:
            num = num * (pow(y, d, P) - 1) % P
        elif mu == -1:
            t = (pow(y, d, P) - 1) % P
            if t == 0:
                return None
            den = den * t % P
    return num * pow(den, -1, P) % P


def cyclotomic_coeffs(k: int) -> list[int]:
    """Coefficients of ``Phi_k`` in ascending degree, for moderate ``k``."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    poly = [1]
    lowers = []
    for d in divisors(factorize(k)):
        mu = moebius(k // d)
        if mu == 1:
            nxt = [0] * (len(poly) + d)
            for i, c in enumerate(poly):
                nxt[i + d] += c
                nxt[i] -= c
            poly = nxt
        elif mu == -1:
            lowers.append(d)
    for d in lowers:
        # exact division by x**d - 1
        n = len(poly) - 1
        q = [0] * (n - d + 1)
        for j in range(n, d - 1, -1):
            q[j - d] = poly[j] + (q[j] if j <= n - d else 0)
        poly = q
    return poly


class Status(enum.Enum):
    EXCLUDED_BY_MAGNITUDE = "excluded_by_magnitude"
    EXCLUDED_AT_PRIME = "excluded_at_prime"
    REJECTED_EXACT = "rejected_exact"
    CONFIRMED_EXACT = "confirmed_exact"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SieveVerdict:
    x: int
    status: Status
    prime: Optional[int] = None
    detail: str = ""


@lru_cache(maxsize=64)
def _sieve_primes(bound: int) -> tuple[int, ...]:
    return tuple(primes_below(bound))


def _too_big(degree: int, x: int, Y: int) -> bool:
    # |Phi_k(x)| >= (|x| - 1)**phi(k), strictly for k >= 3
    base = abs(x) - 1
    if base < 2:
        return False
    if degree * (base.bit_length() - 1) > Y.bit_length():
        return True
    return base**degree > Y


def screen_candidate(k: int, x: int, Y: int, cfg: SolverConfig) -> SieveVerdict:
    """Decide whether ``Phi_k(x) == Y`` for one candidate ``x``."""
    plan = phi_plan(k)
    if cfg.magnitude_prescreen and _too_big(plan.degree, x, Y):
        return SieveVerdict(x, Status.EXCLUDED_BY_MAGNITUDE)
    if plan.reduced_degree > cfg.exact_degree_threshold and not -1 <= x <= 1:
        for P in _sieve_primes(cfg.sieve_prime_bound):
            r = phi_eval_mod(k, x, P)
            if r is not None and r != Y % P:
                return SieveVerdict(x, Status.EXCLUDED_AT_PRIME, prime=P)
    try:
        value = phi_eval_exact(k, x, cfg.bit_ceiling)
    except ResourceLimitError as exc:
        return SieveVerdict(x, Status.INCONCLUSIVE, detail=str(exc))
    if value == Y:
        return SieveVerdict(x, Status.CONFIRMED_EXACT)
    return SieveVerdict(x, Status.REJECTED_EXACT)


def phi_eq_candidates(Y: int) -> list[int]:
    """``+-d`` for every ``d | Y - 1``, ascending."""
    ds = divisors(factorize(Y - 1))
    return sorted([-d for d in ds] + ds)


def screen_phi_eq(k: int, Y: int, cfg: Optional[SolverConfig] = None) -> list[SieveVerdict]:
    if k < 3 or k % 4 == 2:
        raise ValueError(f"k must be >= 3 and not 2 mod 4, got {k}")
    if Y < 2:
        raise ValueError(f"Y must be at least 2, got {Y}")
    cfg = cfg or SolverConfig()
    return [screen_candidate(k, x, Y, cfg) for x in phi_eq_candidates(Y)]


def solve_phi_eq(k: int, Y: int, cfg: Optional[SolverConfig] = None) -> list[int]:
    """All integers ``x`` with ``Phi_k(x) == Y``, ascending.

    Raises :class:`ResourceLimitError` if some candidate could be neither
    excluded nor confirmed within the bit ceiling.
    """
    verdicts = screen_phi_eq(k, Y, cfg)
    stuck = [v for v in verdicts if v.status is Status.INCONCLUSIVE]
    if stuck:
        raise ResourceLimitError(
            f"Phi_{k}(x) = {Y}: undecided candidates {[v.x for v in stuck]}"
        )
    return [v.x for v in verdicts if v.status is Status.CONFIRMED_EXACT]
