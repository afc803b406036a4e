import cmath

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cycdep.cyclotomic import phi_eval_exact
from cycdep.cycint import (
    DEPENDENT,
    INDEPENDENT,
    TORSION,
    CycElement,
    DependenceWitness,
    decide_dependence,
    decide_pair,
    element_from_base,
    int_mult_dependent,
    is_root_of_unity,
    norm_of_base,
    torsion_order,
)
from cycdep.intfun import factorize
from oracles import PolyRing, brute_dependent

RING_KS = [3, 4, 5, 8, 12, 15]


def test_element_from_base():
    assert element_from_base(1, 4).coeffs == (-1, 1)
    assert element_from_base(0, 5) == CycElement.zeta(5)
    assert element_from_base(-1, 3).coeffs == (1, 1)
    with pytest.raises(ValueError):
        element_from_base(1, 2)


def test_mul_pow_examples():
    u = element_from_base(1, 4)
    assert (u**2).coeffs == (0, -2)
    assert u**0 == CycElement.one(4)
    one_plus = element_from_base(-1, 3)
    one_plus_sq = CycElement.from_poly(3, [1, 0, 1])
    assert one_plus * one_plus_sq == CycElement.one(3)


def test_mismatched_rings_rejected():
    with pytest.raises(ValueError):
        element_from_base(1, 3) * element_from_base(1, 5)


def test_mul_matches_poly_oracle():
    for k in range(3, 61):
        ring = PolyRing(k)
        a = [(i * 7 + k) % 11 - 5 for i in range(ring.n)]
        b = [(i * 3 + 2 * k) % 9 - 4 for i in range(ring.n)]
        got = CycElement(k, tuple(a)) * CycElement(k, tuple(b))
        assert got.coeffs == ring.mul(a, b)


def _elements(k):
    from cycdep.intfun import euler_phi

    n = euler_phi(k)
    return st.lists(st.integers(-9, 9), min_size=n, max_size=n).map(lambda c: CycElement(k, tuple(c)))


@st.composite
def triples(draw):
    k = draw(st.sampled_from(RING_KS))
    el = _elements(k)
    return draw(el), draw(el), draw(el)


@settings(max_examples=150, deadline=None)
@given(triples())
def test_ring_axioms(t):
    u, v, w = t
    assert (u * v) * w == u * (v * w)
    assert u * v == v * u
    assert u * (v + w) == u * v + u * w


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RING_KS).flatmap(_elements), st.integers(0, 8))
def test_pow_is_repeated_mul(u, e):
    expected = CycElement.one(u.k)
    for _ in range(e):
        expected = expected * u
    assert u**e == expected


@pytest.mark.parametrize("m, k, expected", [(-1, 4, 2), (1, 4, 2), (2, 3, 7)])
def test_norm_examples(m, k, expected):
    assert norm_of_base(m, k) == expected


def test_norm_matches_complex_product():
    mpmath.mp.dps = 60
    from math import gcd

    for k in range(3, 31):
        roots = [mpmath.exp(2j * mpmath.pi * j / k) for j in range(1, k + 1) if gcd(j, k) == 1]
        for m in range(-10, 11):
            prod = mpmath.mpc(1)
            for z in roots:
                prod *= m - z
            assert abs(prod.imag) < 1e-30
            assert int(mpmath.nint(prod.real)) == norm_of_base(m, k)


def test_root_of_unity_examples():
    # -1 + zeta_6 = zeta_6**2 and 1 + zeta_3 = -zeta_3**2
    assert is_root_of_unity(element_from_base(1, 6)) == (1, 2)
    assert is_root_of_unity(element_from_base(-1, 3)) == (-1, 2)
    assert is_root_of_unity(element_from_base(2, 5)) is None
    assert is_root_of_unity(-CycElement.one(8)) == (1, 4)


def test_root_of_unity_table_is_complete():
    for k in (3, 4, 5, 7, 8, 9, 12, 15):
        z = cmath.exp(2j * cmath.pi / k)
        for j in range(k):
            for sign in (1, -1):
                u = CycElement.zeta(k, j)
                u = u if sign > 0 else -u
                sg, jj = is_root_of_unity(u)
                assert abs(sg * z**jj - sign * z**j) < 1e-9


def test_torsion_order():
    assert torsion_order(4, -1, 1) == 4
    assert torsion_order(3, 1, 0) == 1
    assert torsion_order(3, -1, 0) == 2
    assert torsion_order(3, 1, 2) == 3
    assert torsion_order(3, -1, 2) == 6
    assert torsion_order(12, 1, 6) == 2


@pytest.mark.parametrize(
    "A, B, dependent, r0, s0",
    [(4, 8, True, 3, 2), (2, 3, False, 0, 0), (6, 12, False, 0, 0), (1, 5, True, 1, 0),
     (5, 1, True, 0, 1), (1, 1, True, 1, 1), (7, 343, True, 3, 1), (36, 216, True, 3, 2)],
)
def test_int_mult_dependent_examples(A, B, dependent, r0, s0):
    d = int_mult_dependent(A, B)
    assert (d.dependent, d.r0, d.s0) == (dependent, r0, s0)
    if dependent:
        assert A**d.r0 == B**d.s0


def _proportional(A, B):
    fa, fb = dict(factorize(A).factors), dict(factorize(B).factors)
    if set(fa) != set(fb):
        return False
    ratios = {(fa[p] * 1.0) / fb[p] for p in fa}
    return len({round(r, 12) for r in ratios}) == 1


def test_int_mult_dependent_matches_factorization():
    for A in range(2, 200):
        for B in range(2, 200):
            d = int_mult_dependent(A, B)
            assert d.dependent == _proportional(A, B), (A, B)
            if d.dependent:
                from math import gcd

                assert gcd(d.r0, d.s0) == 1 and A**d.r0 == B**d.s0


def test_int_mult_dependent_huge():
    c = 3**5 * 7
    d = int_mult_dependent(c**40, c**1000003)
    assert (d.r0, d.s0) == (1000003, 40)


def test_decide_examples():
    d = decide_dependence(-1, 2, 4)
    assert d.kind == DEPENDENT
    w = d.witness
    assert (w.r0, w.s0, w.sign, w.j) == (1, 1, -1, 1)
    assert w.full_exponents == (4, 4)
    assert w.verify()
    # (-1 + i)**4 == (1 + i)**4 == -4 in the witness ring
    assert (element_from_base(-1, 4) ** 4).coeffs == (-4, 0)

    d = decide_dependence(2, 1, 5)
    assert d.kind == INDEPENDENT and d.norms == (31, 121)

    d = decide_dependence(0, 1, 7)
    assert d.kind == TORSION and d.torsion_base == "alpha"


def test_decide_rejects_k_2_mod_4():
    with pytest.raises(ValueError):
        decide_dependence(1, 1, 6)


def test_both_units_flagged_for_audit():
    # Phi_15(1) = Phi_15(-1) = 1 and neither base is a root of unity
    d = decide_pair(1, -1, 15)
    assert d.kind == INDEPENDENT and d.audit


def test_unit_pair_dependent_at_k12():
    # (1 + z)(-1 + z) = z**2 - 1 = zeta_6 - 1 = zeta_3, so both bases are
    # units whose product is torsion
    d = decide_dependence(-1, 2, 12)
    assert d.kind == DEPENDENT and d.audit
    w = d.witness
    assert (w.r0, w.s0, w.sign, w.j) == (1, -1, 1, 4)
    assert w.full_exponents == (3, -3)
    assert w.verify()
    z = cmath.exp(2j * cmath.pi / 12)
    assert abs((1 + z) ** 3 * (-1 + z) ** 3 - 1) < 1e-12
    assert abs(abs(1 + z) - 1) > 0.5 and abs(abs(-1 + z) - 1) > 0.4


def test_unit_pairs_match_exhaustive_search():
    for k in range(5, 61):
        if k % 4 == 2 or len(factorize(k)) == 1:
            continue
        d = decide_pair(-1, 1, k)
        assert d.audit
        bound = 6 if k <= 24 else 3
        assert (d.kind == DEPENDENT) == brute_dependent(-1, 1, k, bound=bound), k
        assert (d.kind == DEPENDENT) == (k == 12)


def test_a21_dependent_pair():
    # (3 + zeta_3)**3 == zeta_3**2 * (-18 + zeta_3)
    d = decide_dependence(-3, 21, 3)
    assert d.kind == DEPENDENT
    assert (d.witness.r0, d.witness.s0) == (3, 1)
    assert d.witness.verify()
    z = cmath.exp(2j * cmath.pi / 3)
    assert abs((3 + z) ** 9 - (-18 + z) ** 3) < 1e-6


def test_witness_verify_rejects_bad_relation():
    assert not DependenceWitness(-1, 1, 4, 1, 1, 1, 0).verify()
    assert not DependenceWitness(-1, 1, 12, 1, -1, 1, 2).verify()


def test_symmetry():
    for k in (3, 4, 5, 7, 8, 9, 12):
        for m in range(-8, 9):
            for a in range(1, 7):
                d1 = decide_pair(m, m + a, k)
                d2 = decide_pair(m + a, m, k)
                assert d1.kind == d2.kind, (m, a, k)
                if d1.kind == TORSION:
                    swap = {"alpha": "beta", "beta": "alpha", "both": "both"}
                    assert d2.torsion_base == swap[d1.torsion_base]


def test_matches_exhaustive_search_extended():
    # wider than the acceptance grid; k = 5, 8 rings
    for k in (5, 8):
        for m in range(-4, 5):
            for a in range(1, 4):
                d = decide_dependence(m, a, k)
                assert (d.kind != INDEPENDENT) == brute_dependent(m, m + a, k, bound=8), (m, a, k)
                if d.kind == DEPENDENT:
                    assert d.witness.verify()


def test_norms_are_positive():
    for k in (3, 4, 5, 12, 20):
        for m in range(-20, 21):
            assert phi_eval_exact(k, m) >= 1
