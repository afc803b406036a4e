"""Multiplicative dependence of cyclotomic bases -m + zeta_k and -(m+a) + zeta_k."""

from .config import SolverConfig
from .cyclotomic import (
    ResourceLimitError,
    phi_eval_exact,
    phi_eval_mod,
    phi_special,
    solve_phi_eq,
)
from .cycint import (
    CycElement,
    decide_dependence,
    decide_pair,
    element_from_base,
    int_mult_dependent,
    is_root_of_unity,
)
from .intfun import divisors, euler_phi, factorize, lte_valuation, moebius, mult_order, nu_p
from .search import Certificate, subset_plans, verify_a, verify_range, y_candidates

__version__ = "0.1.0"
