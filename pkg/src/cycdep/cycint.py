"""Exact arithmetic in Z[zeta_k] and the dependence decision for base pairs.

Elements are integer coefficient vectors on the power basis
``1, zeta, ..., zeta**(phi(k)-1)``, reduced modulo ``Phi_k``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import gmpy2
import mpmath

from .cyclotomic import ResourceLimitError, cyclotomic_coeffs, phi_eval_exact

DEFAULT_BIT_CEILING = 1 << 27

#: Largest phi(k) for which ring elements are built.
MAX_RING_DEGREE = 4096


class WitnessError(AssertionError):
    """A witness failed exact re-verification."""


@lru_cache(maxsize=256)
def _modulus(k: int) -> tuple[int, ...]:
    coeffs = cyclotomic_coeffs(k)
    if len(coeffs) - 1 > MAX_RING_DEGREE:
        raise ResourceLimitError(f"phi({k}) = {len(coeffs) - 1} exceeds ring degree limit")
    return tuple(coeffs)


def _reduce(k: int, poly: list[int]) -> tuple[int, ...]:
    mod = _modulus(k)
    n = len(mod) - 1
    poly = list(poly)
    for i in range(len(poly) - 1, n - 1, -1):
        c = poly[i]
        if c:
            base = i - n
            for j in range(n):
                if mod[j]:
                    poly[base + j] -= c * mod[j]
    out = poly[:n]
    out += [0] * (n - len(out))
    return tuple(out)


@dataclass(frozen=True)
class CycElement:
    k: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_poly(cls, k: int, poly) -> "CycElement":
        return cls(k, _reduce(k, list(poly)))

    @classmethod
    def one(cls, k: int) -> "CycElement":
        return cls.from_poly(k, [1])

    @classmethod
    def zeta(cls, k: int, j: int = 1) -> "CycElement":
        return _zeta_powers(k)[j % k]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "CycElement") -> None:
        if self.k != other.k:
            raise ValueError(f"mismatched rings: k={self.k} vs k={other.k}")

    def __add__(self, other: "CycElement") -> "CycElement":
        self._check(other)
        return CycElement(self.k, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycElement":
        return CycElement(self.k, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "CycElement") -> "CycElement":
        return self + (-other)

    def __mul__(self, other: "CycElement") -> "CycElement":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycElement.from_poly(self.k, prod)

    def __pow__(self, e: int) -> "CycElement":
        if e < 0:
            raise ValueError("negative exponents are not supported")
        result = CycElement.one(self.k)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def times_zeta(self) -> "CycElement":
        """Multiply by zeta (shift, then one reduction step)."""
        return CycElement.from_poly(self.k, (0,) + self.coeffs)

    def max_bits(self) -> int:
        return max((abs(c).bit_length() for c in self.coeffs), default=0)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return " + ".join(terms) or "0"


def mul(u: CycElement, v: CycElement) -> CycElement:
    return u * v


def power(u: CycElement, e: int) -> CycElement:
    return u**e


def element_from_base(m: int, k: int) -> CycElement:
    """The element ``-m + zeta_k``."""
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    return CycElement.from_poly(k, [-m, 1])


def norm_of_base(m: int, k: int, bit_ceiling: Optional[int] = None) -> int:
    return phi_eval_exact(k, m, bit_ceiling)


@lru_cache(maxsize=64)
def _zeta_powers(k: int) -> tuple[CycElement, ...]:
    cur = CycElement.one(k)
    out = []
    for _ in range(k):
        out.append(cur)
        cur = cur.times_zeta()
    return tuple(out)


@lru_cache(maxsize=64)
def _torsion_table(k: int) -> dict[tuple[int, ...], tuple[int, int]]:
    table: dict[tuple[int, ...], tuple[int, int]] = {}
    powers = _zeta_powers(k)
    for j, z in enumerate(powers):
        table.setdefault(z.coeffs, (1, j))
    for j, z in enumerate(powers):
        table.setdefault((-z).coeffs, (-1, j))
    return table


def is_root_of_unity(u: CycElement) -> Optional[tuple[int, int]]:
    """``(sign, j)`` with ``u == sign * zeta**j``, or None.

    The torsion of Q(zeta_k) is {+-zeta_k**j}; for even k the sign is
    redundant and ``sign = 1`` is preferred.
    """
    if u.is_zero():
        raise ValueError("zero is not a unit")
    return _torsion_table(u.k).get(u.coeffs)


def torsion_order(k: int, sign: int, j: int) -> int:
    """Order of ``sign * zeta_k**j``, computed inside the 2k-th roots of unity."""
    exp = 2 * j + (k if sign < 0 else 0)
    return 2 * k // math.gcd(exp, 2 * k)


@dataclass(frozen=True)
class IntDependence:
    """Verdict for rational integers: ``A**r0 == B**s0`` or independent."""

    A: int
    B: int
    dependent: bool
    r0: int = 0
    s0: int = 0


def _common_root_exponents(A: int, B: int) -> Optional[tuple[int, int]]:
    # (u, v) with A = c**u, B = c**v and gcd(u, v) = 1; Euclid on exponents.
    if A == B:
        return 1, 1
    if A > B:
        vu = _common_root_exponents(B, A)
        return None if vu is None else (vu[1], vu[0])
    rest, e = gmpy2.remove(B, A)
    if e == 0:
        return None
    if rest == 1:
        return 1, e
    uw = _common_root_exponents(A, int(rest))
    if uw is None:
        return None
    u, w = uw
    return u, e * u + w


def int_mult_dependent(A: int, B: int) -> IntDependence:
    """Multiplicative dependence of two positive integers.

    Works without factoring: if ``A = c**u`` and ``B = c**v`` the larger is
    divisible by the smaller and the quotient is again a power of ``c``.
    """
    if A < 1 or B < 1:
        raise ValueError(f"need positive integers, got {A}, {B}")
    if A == 1 and B == 1:
        return IntDependence(A, B, True, 1, 1)
    if A == 1:
        return IntDependence(A, B, True, 1, 0)
    if B == 1:
        return IntDependence(A, B, True, 0, 1)
    uv = _common_root_exponents(A, B)
    if uv is None:
        return IntDependence(A, B, False)
    u, v = uv
    return IntDependence(A, B, True, r0=v, s0=u)


@dataclass(frozen=True)
class DependenceWitness:
    """``alpha**r0 == sign * zeta**j * beta**s0`` for alpha = -m+zeta, beta = -n+zeta.

    ``s0`` is negative only for a pair of units, where the relation reads
    ``alpha**r0 * beta**(-s0) == sign * zeta**j``.
    """

    m: int
    n: int
    k: int
    r0: int
    s0: int
    sign: int
    j: int

    @property
    def twist_order(self) -> int:
        return torsion_order(self.k, self.sign, self.j)

    @property
    def full_exponents(self) -> tuple[int, int]:
        t = self.twist_order
        return self.r0 * t, self.s0 * t

    def verify(self) -> bool:
        alpha = element_from_base(self.m, self.k)
        beta = element_from_base(self.n, self.k)
        twist = CycElement.zeta(self.k, self.j)
        if self.sign < 0:
            twist = -twist
        r0, s0 = self.r0, self.s0
        if s0 >= 0 and alpha**r0 != twist * beta**s0:
            return False
        if s0 < 0 and alpha**r0 * beta**(-s0) != twist:
            return False
        r, s = self.full_exponents
        if (r, s) == (0, 0):
            return False
        if s >= 0:
            return alpha**r == beta**s
        return alpha**r * beta**(-s) == CycElement.one(self.k)


INDEPENDENT = "independent"
DEPENDENT = "dependent"
TORSION = "torsion"


@dataclass(frozen=True)
class Dependence:
    """Outcome of :func:`decide_pair`.

    ``torsion_base`` names which base is a root of unity ("alpha", "beta" or
    "both"); ``audit`` is set when both bases are units and neither is torsion,
    the one case the norms cannot settle.
    """

    kind: str
    m: int
    n: int
    k: int
    witness: Optional[DependenceWitness] = None
    torsion_base: Optional[str] = None
    norms: tuple[int, int] = field(default=(0, 0), compare=False, repr=False)
    audit: bool = False


def _twist_search(x: CycElement, z: CycElement) -> Optional[tuple[int, int]]:
    # smallest j, then sign +1 before -1, with x == sign * zeta**j * z
    cur = z
    for j in range(x.k):
        if cur == x:
            return 1, j
        if (-cur) == x:
            return -1, j
        cur = cur.times_zeta()
    return None


def _log_embedding(u: CycElement) -> list:
    # log|sigma_j(u)| for one embedding out of each conjugate pair
    k = u.k
    out = []
    for j in range(1, k // 2 + 1):
        if math.gcd(j, k) != 1:
            continue
        z = mpmath.expjpi(mpmath.mpf(2 * j) / k)
        out.append(mpmath.log(abs(mpmath.polyval(list(reversed(u.coeffs)), z))))
    return out


def _unit_relation(m: int, n: int, k: int, max_exponent: int = 10**6) -> Optional[DependenceWitness]:
    """Relation between two non-torsion units, or None.

    A relation ``alpha**r == beta**s`` makes the log embeddings proportional
    with ratio s/r, and conversely a rational ratio leaves a root of unity,
    which the exact check then finds. The numerics only propose (r, s).
    """
    alpha, beta = element_from_base(m, k), element_from_base(n, k)
    with mpmath.workdps(60):
        la, lb = _log_embedding(alpha), _log_embedding(beta)
        i = max(range(len(lb)), key=lambda t: abs(lb[t]))
        q = la[i] / lb[i]
        if any(abs(x - q * y) > mpmath.mpf(10) ** -40 for x, y in zip(la, lb)):
            return None
        ratio = Fraction(mpmath.nstr(q, 50)).limit_denominator(max_exponent)
        if abs(q - mpmath.mpf(ratio.numerator) / ratio.denominator) > mpmath.mpf(10) ** -40:
            return None
    r0, s0 = ratio.denominator, ratio.numerator
    if s0 == 0:
        return None
    if s0 > 0:
        found = _twist_search(alpha**r0, beta**s0)
    else:
        found = is_root_of_unity(alpha**r0 * beta**(-s0))
    if found is None:
        return None
    sign, j = found
    return DependenceWitness(m, n, k, r0, s0, sign, j)


def decide_pair(m: int, n: int, k: int, bit_ceiling: int = DEFAULT_BIT_CEILING) -> Dependence:
    """Decide multiplicative dependence of ``-m + zeta_k`` and ``-n + zeta_k``.

    Norms first: dependence of the elements forces ``A**r0 == B**s0`` for the
    norms A, B; the element relation is then ``alpha**r0 == w * beta**s0`` for a
    root of unity ``w``, found by scanning the 2k candidates.
    """
    if k < 3 or k % 4 == 2:
        raise ValueError(f"k must be >= 3 and not 2 mod 4, got {k}")
    if m == n:
        raise ValueError("the two bases coincide")
    A = phi_eval_exact(k, m, bit_ceiling)
    B = phi_eval_exact(k, n, bit_ceiling)
    norms = (A, B)

    torsion = []
    if A == 1 and is_root_of_unity(element_from_base(m, k)) is not None:
        torsion.append("alpha")
    if B == 1 and is_root_of_unity(element_from_base(n, k)) is not None:
        torsion.append("beta")
    if torsion:
        which = "both" if len(torsion) == 2 else torsion[0]
        return Dependence(TORSION, m, n, k, torsion_base=which, norms=norms)

    if A == 1 and B == 1:
        witness = _unit_relation(m, n, k)
        kind = INDEPENDENT if witness is None else DEPENDENT
        return Dependence(kind, m, n, k, witness=witness, norms=norms, audit=True)
    if A == 1 or B == 1:
        return Dependence(INDEPENDENT, m, n, k, norms=norms)

    dep = int_mult_dependent(A, B)
    if not dep.dependent:
        return Dependence(INDEPENDENT, m, n, k, norms=norms)

    alpha, beta = element_from_base(m, k), element_from_base(n, k)
    bits = max(dep.r0 * abs(m).bit_length(), dep.s0 * abs(n).bit_length()) * (k.bit_length())
    if bits > bit_ceiling:
        raise ResourceLimitError(f"powers of degree {dep.r0}/{dep.s0} exceed bit ceiling")
    x = alpha**dep.r0
    z = beta**dep.s0
    found = _twist_search(x, z)
    if found is None:
        return Dependence(INDEPENDENT, m, n, k, norms=norms)
    sign, j = found
    witness = DependenceWitness(m, n, k, dep.r0, dep.s0, sign, j)
    return Dependence(DEPENDENT, m, n, k, witness=witness, norms=norms)


def decide_dependence(m: int, a: int, k: int, bit_ceiling: int = DEFAULT_BIT_CEILING) -> Dependence:
    """Pair ``-m + zeta_k`` and ``-(m + a) + zeta_k``."""
    if a == 0:
        raise ValueError("gap a must be nonzero")
    return decide_pair(m, m + a, k, bit_ceiling)
