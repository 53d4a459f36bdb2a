"""Certified verification of the golden-ratio infinite product for e."""

from .arithfn import (
    ArithFnTable,
    dirichlet_one_convolve,
    sieve_mobius,
    sieve_totient,
    totient_from_mobius,
    verify_divisor_sums,
)
from .bigreal import BigReal, PrecisionCtx, real_exp, real_ln, real_pow_rational
from .exactnum import GoldenNumber, golden_tau, golden_to_real, tau_power
from .identities import (
    EvalPoint,
    formal_coefficients,
    general_identity_check,
    lemma1_sum,
    lemma2_pair,
    special_exp_products,
    theorem_log_sum,
    theorem_product,
)

__version__ = "0.1.0"
