"""Certified evaluation of the golden-ratio product for e and its lemmas.

Every evaluation returns the truncated value, the exact target, and a proven
bound on the truncation tail.  A report passes when

    |partial - target| <= tail_bound + rounding_budget

where the rounding budget is ``2**-target_bits`` times the scale of the
computation (see :meth:`PrecisionCtx.rounding_budget`).

Evaluation points are exact (rationals or 1/tau), so ``1 - x**k`` is formed
in Q(sqrt 5) and rounded once before the logarithm.  Sums run in ascending
k, which keeps every output bit-reproducible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from mpmath import libmp

from .arithfn import ArithFnTable, dirichlet_one_convolve, sieve_mobius, sieve_totient
from .bigreal import (
    BigReal,
    PrecisionCtx,
    format_decimal,
    real_add,
    real_exp,
    real_ln,
    real_mul,
    real_pow_rational,
    real_sub,
)
from .exactnum import GoldenNumber, golden_to_real, tau_power

__all__ = [
    "Identity",
    "EvalPoint",
    "TruncationReport",
    "IdentityCheck",
    "Lemma2Pair",
    "PreconditionError",
    "lemma1_sum",
    "lemma1_tail_bound",
    "series_tail_bound",
    "lemma2_pair",
    "theorem_log_sum",
    "theorem_tail_bound",
    "theorem_product",
    "theorem_product_trace",
    "lemma2_trace",
    "general_identity_check",
    "special_exp_products",
    "formal_coefficients",
    "phi_minus_mu",
    "SPECIAL_VARIANTS",
]


class PreconditionError(ValueError):
    pass


class Identity(str, enum.Enum):
    LEMMA1_PHI = "lemma1_phi"
    LEMMA1_MU = "lemma1_mu"
    LEMMA1_CUSTOM = "lemma1_custom"
    LEMMA2_PHI = "lemma2_phi"
    LEMMA2_MU = "lemma2_mu"
    THEOREM_LOG_SUM = "theorem_log_sum"
    THEOREM_PRODUCT = "theorem_product"


@dataclass(frozen=True)
class EvalPoint:
    """A point x in (0, 1): an exact rational, or exactly 1/tau."""

    form: str
    value: Fraction | None = None

    def __post_init__(self) -> None:
        if self.form == "rational":
            if self.value is None or not 0 < self.value < 1:
                raise PreconditionError(f"x must satisfy 0 < x < 1, got {self.value}")
            object.__setattr__(self, "value", Fraction(self.value))
        elif self.form != "inverse_tau":
            raise ValueError(f"unknown point form {self.form!r}")

    @classmethod
    def rational(cls, q: Fraction | int | str) -> EvalPoint:
        return cls("rational", Fraction(q))

    @classmethod
    def inverse_tau(cls) -> EvalPoint:
        return cls("inverse_tau")

    @classmethod
    def coerce(cls, x) -> EvalPoint:
        return x if isinstance(x, EvalPoint) else cls.rational(x)

    def power(self, k: int) -> GoldenNumber:
        if self.form == "inverse_tau":
            return tau_power(-k)
        return GoldenNumber(self.value**k)

    @property
    def exact(self) -> GoldenNumber:
        return self.power(1)

    def __str__(self) -> str:
        return "1/tau" if self.form == "inverse_tau" else str(self.value)


@dataclass(frozen=True)
class TruncationReport:
    identity: Identity
    terms_used: int
    precision: PrecisionCtx
    partial: BigReal
    target: BigReal
    abs_diff: BigReal
    tail_bound: BigReal
    rounding_budget: BigReal
    passed: bool

    def as_dict(self, digits: int = 30) -> dict:
        fmt = lambda v: format_decimal(v, digits)  # noqa: E731
        return {
            "identity": self.identity.value,
            "terms": self.terms_used,
            "target_bits": self.precision.target_bits,
            "guard_bits": self.precision.guard_bits,
            "partial": fmt(self.partial),
            "target": fmt(self.target),
            "abs_diff": fmt(self.abs_diff),
            "tail_bound": fmt(self.tail_bound),
            "rounding_budget": fmt(self.rounding_budget),
            "pass": self.passed,
        }


@dataclass(frozen=True)
class IdentityCheck:
    lhs: BigReal
    rhs: BigReal
    abs_diff: BigReal
    bound: BigReal
    passed: bool

    def as_dict(self, digits: int = 30) -> dict:
        fmt = lambda v: format_decimal(v, digits)  # noqa: E731
        return {
            "lhs": fmt(self.lhs),
            "rhs": fmt(self.rhs),
            "abs_diff": fmt(self.abs_diff),
            "bound": fmt(self.bound),
            "pass": self.passed,
        }


class Lemma2Pair(NamedTuple):
    phi: TruncationReport
    mu: TruncationReport
    product: IdentityCheck


# -- bounds ------------------------------------------------------------------


def _up(x: Fraction | GoldenNumber, prec: int) -> BigReal:
    return golden_to_real(x, prec, rounding="c")


def _add_up(x: BigReal, y: BigReal, prec: int) -> BigReal:
    return BigReal(libmp.mpf_add(x.mpf, y.mpf, prec, "c"), prec)


def _mul_up(x: BigReal, y: BigReal, prec: int) -> BigReal:
    return BigReal(libmp.mpf_mul(x.mpf, y.mpf, prec, "c"), prec)


def _expm1_bound(t: BigReal, prec: int) -> BigReal:
    """Upper bound on exp(t) - 1 for t >= 0, via exp(t) - 1 <= t*exp(t)."""
    et = libmp.mpf_exp(t.mpf, prec, "c")
    return BigReal(libmp.mpf_mul(t.mpf, et, prec, "c"), prec)


def lemma1_tail_bound(x, K: int, C: Fraction | int, precision_bits: int = 128) -> BigReal:
    """Upper bound C * x**(K+1) / (1-x)**2 on the terms k > K of a Lemma-1 sum.

    Proof: if |f(k)|/k <= C then each omitted term is at most
    C * (-log(1 - x**k)) <= C * x**k / (1 - x**k) <= C * x**k / (1 - x);
    summing the geometric series over k > K gives the bound.
    """
    x = EvalPoint.coerce(x)
    C = Fraction(C)
    if C <= 0:
        raise PreconditionError("growth constant must be positive")
    one_minus = 1 - x.exact
    return _up(C * x.power(K + 1) / (one_minus * one_minus), precision_bits)


def series_tail_bound(x, N: int, C: Fraction | int, precision_bits: int = 128) -> BigReal:
    """Upper bound on sum_{m>N} |(1*f)(m)|/m * x**m when |f(n)| <= C*n.

    Then |(1*f)(m)| <= C*sigma(m) <= C*m**2, so the tail is at most
    C * sum_{m>N} m x**m = C * x**(N+1) * ((N+1) - N*x) / (1-x)**2.
    """
    x = EvalPoint.coerce(x)
    C = Fraction(C)
    xe = x.exact
    one_minus = 1 - xe
    return _up(C * x.power(N + 1) * ((N + 1) - N * xe) / (one_minus * one_minus), precision_bits)


def theorem_tail_bound(N: int, precision_bits: int = 128) -> BigReal:
    """Upper bound 2*tau**3 * tau**-N on the terms k > N of the theorem's log sum.

    Proof: |mu(k) - phi(k)|/k <= (k+1)/k <= 2 and
    -log(1 - tau**-k) <= tau**-k / (1 - 1/tau) = tau**2 * tau**-k, so the tail
    is at most 2 tau**2 * tau**-(N+1) / (1 - 1/tau) = 2 tau**3 * tau**-N.
    """
    return _up(2 * tau_power(3 - N), precision_bits)


# -- sums --------------------------------------------------------------------


def _check_growth(f: ArithFnTable, C: Fraction) -> None:
    if C <= 0:
        raise PreconditionError("growth constant must be positive")
    for n, v in enumerate(f.values, 1):
        if abs(v) > C * n:
            raise PreconditionError(f"|f({n})| = {abs(v)} exceeds C*n = {C * n}")


def _growth_for(f: ArithFnTable, C) -> Fraction:
    if f.kind in ("phi", "mu", "one"):
        return Fraction(1) if C is None else Fraction(C)
    if C is None:
        raise PreconditionError("a custom table needs a growth constant C with |f(n)| <= C*n")
    C = Fraction(C)
    _check_growth(f, C)
    return C


def _log_terms(f: ArithFnTable, x: EvalPoint, K: int, ctx: PrecisionCtx) -> Iterator[tuple[int, BigReal]]:
    """Yield (k, f(k)/k * log(1 - x**k)) for k = 1..K with f(k) != 0."""
    p = ctx.working_bits
    for k in range(1, K + 1):
        fk = f[k]
        if fk == 0:
            continue
        base = golden_to_real(1 - x.power(k), p)
        yield k, real_mul(BigReal.from_rational(Fraction(fk, k), p), real_ln(base, ctx), ctx)


def _finish(identity, K, ctx, partial, target, tail, scale) -> TruncationReport:
    p = ctx.working_bits
    diff = abs(real_sub(partial, target, ctx))
    budget = ctx.rounding_budget(scale)
    passed = diff <= _add_up(tail, budget, p)
    return TruncationReport(identity, K, ctx, partial, target, diff, tail, budget, passed)


def lemma1_sum(
    f: ArithFnTable,
    x,
    K: int,
    ctx: PrecisionCtx,
    C: Fraction | int | None = None,
) -> TruncationReport:
    """Evaluate -sum_{k<=K} f(k)/k * log(1 - x**k).

    Targets: x/(1-x) for phi, x for mu.  For a custom table the target is the
    truncated series sum_{n<=K} (1*f)(n)/n * x**n and the tail bound adds the
    series tail from :func:`series_tail_bound`.
    """
    x = EvalPoint.coerce(x)
    if K < 1:
        raise PreconditionError("K must be positive")
    if K > f.limit:
        raise PreconditionError(f"K = {K} exceeds the table limit {f.limit}")
    C = _growth_for(f, C)
    p = ctx.working_bits
    total = BigReal.from_int(0, p)
    mass = BigReal.from_int(0, p)
    for _, term in _log_terms(f, x, K, ctx):
        total = real_sub(total, term, ctx)
        mass = real_add(mass, abs(term), ctx)
    tail = lemma1_tail_bound(x, K, C, p)
    if f.kind == "phi":
        identity = Identity.LEMMA1_PHI
        target = golden_to_real(x.exact / (1 - x.exact), p)
    elif f.kind == "mu":
        identity = Identity.LEMMA1_MU
        target = golden_to_real(x.exact, p)
    else:
        identity = Identity.LEMMA1_CUSTOM
        target, tmass = _coefficient_series(f.truncate(K), x, K, ctx)
        mass = real_add(mass, tmass, ctx)
        tail = _add_up(tail, series_tail_bound(x, K, C, p), p)
    return _finish(identity, K, ctx, total, target, tail, mass)


def _coefficient_series(f: ArithFnTable, x: EvalPoint, N: int, ctx: PrecisionCtx) -> tuple[BigReal, BigReal]:
    """sum_{n<=N} (1*f)(n)/n * x**n, and the sum of absolute terms."""
    p = ctx.working_bits
    g = dirichlet_one_convolve(f.truncate(N))
    total = BigReal.from_int(0, p)
    mass = BigReal.from_int(0, p)
    for n in range(1, N + 1):
        if g[n] == 0:
            continue
        term = golden_to_real(Fraction(g[n], n) * x.power(n), p)
        total = real_add(total, term, ctx)
        mass = real_add(mass, abs(term), ctx)
    return total, mass


def lemma2_pair(K: int, ctx: PrecisionCtx) -> Lemma2Pair:
    """Both Lemma-1 sums at x = 1/tau (targets tau and 1/tau) and their product."""
    if K < 1:
        raise PreconditionError("K must be positive")
    x = EvalPoint.inverse_tau()
    p = ctx.working_bits
    phi_rep = lemma1_sum(sieve_totient(K), x, K, ctx)
    mu_rep = lemma1_sum(sieve_mobius(K), x, K, ctx)
    phi_rep = _retag(phi_rep, Identity.LEMMA2_PHI)
    mu_rep = _retag(mu_rep, Identity.LEMMA2_MU)

    prod = real_mul(phi_rep.partial, mu_rep.partial, ctx)
    one = BigReal.from_int(1, p)
    diff = abs(real_sub(prod, one, ctx))
    # partials are tau + e1 and 1/tau + e2 with |e_i| <= b_i, so
    # |prod - 1| <= |e1|/tau + tau*|e2| + |e1*e2| <= b1 + 2*b2 + b1*b2
    b1 = _add_up(phi_rep.tail_bound, phi_rep.rounding_budget, p)
    b2 = _add_up(mu_rep.tail_bound, mu_rep.rounding_budget, p)
    bound = _add_up(_add_up(b1, _mul_up(BigReal.from_int(2), b2, p), p), _mul_up(b1, b2, p), p)
    bound = _add_up(bound, ctx.rounding_budget(prod), p)
    check = IdentityCheck(prod, one, diff, bound, diff <= bound)
    return Lemma2Pair(phi_rep, mu_rep, check)


def _retag(rep: TruncationReport, identity: Identity) -> TruncationReport:
    return TruncationReport(identity, *(getattr(rep, f) for f in TruncationReport.__dataclass_fields__ if f != "identity"))


def _theorem_terms(N: int, ctx: PrecisionCtx) -> Iterator[tuple[int, Fraction, BigReal, BigReal]]:
    """Yield (k, exponent, base, exponent*log(base)) with exponent = (mu-phi)/k != 0."""
    mu, phi = sieve_mobius(N), sieve_totient(N)
    p = ctx.working_bits
    x = EvalPoint.inverse_tau()
    for k in range(1, N + 1):
        e = Fraction(mu[k] - phi[k], k)
        if e == 0:
            continue
        base = golden_to_real(1 - x.power(k), p)
        yield k, e, base, real_mul(BigReal.from_rational(e, p), real_ln(base, ctx), ctx)


def theorem_log_sum(N: int, ctx: PrecisionCtx) -> TruncationReport:
    """sum_{k<=N} (mu(k)-phi(k))/k * log(1 - tau**-k), which tends to 1."""
    if N < 1:
        raise PreconditionError("N must be positive")
    p = ctx.working_bits
    total = BigReal.from_int(0, p)
    mass = BigReal.from_int(0, p)
    for *_, term in _theorem_terms(N, ctx):
        total = real_add(total, term, ctx)
        mass = real_add(mass, abs(term), ctx)
    return _finish(
        Identity.THEOREM_LOG_SUM, N, ctx, total, BigReal.from_int(1, p), theorem_tail_bound(N, p), mass
    )


def _product_tail(N: int, e_up: BigReal, p: int) -> BigReal:
    # log P_N is within B of 1, so |P_N - e| <= e*(exp(B) - 1)
    return _mul_up(e_up, _expm1_bound(theorem_tail_bound(N, p), p), p)


def theorem_product(N: int, ctx: PrecisionCtx, method: str = "log") -> TruncationReport:
    """Partial product prod_{n<=N} (1 - tau**-n) ** ((mu(n)-phi(n))/n), target e.

    ``method="log"`` sums exponent*log(base) and exponentiates once;
    ``method="direct"`` multiplies :func:`real_pow_rational` factors and is
    kept as a cross-check.
    """
    if N < 1:
        raise PreconditionError("N must be positive")
    p = ctx.working_bits
    e = real_exp(1, ctx)
    e_up = e.round_to(p, "c")
    mass = BigReal.from_int(0, p)
    if method == "log":
        total = BigReal.from_int(0, p)
        for *_, term in _theorem_terms(N, ctx):
            total = real_add(total, term, ctx)
            mass = real_add(mass, abs(term), ctx)
        partial = real_exp(total, ctx) if not total.is_zero() else BigReal.from_int(1, p)
    elif method == "direct":
        partial = BigReal.from_int(1, p)
        for _, ex, base, term in _theorem_terms(N, ctx):
            partial = real_mul(partial, real_pow_rational(base, ex, ctx), ctx)
            mass = real_add(mass, abs(term), ctx)
    else:
        raise ValueError(f"unknown method {method!r}")
    scale = real_mul(partial, real_add(mass, 1, ctx), ctx)
    return _finish(Identity.THEOREM_PRODUCT, N, ctx, partial, e, _product_tail(N, e_up, p), scale)


def theorem_product_trace(max_terms: int, stride: int, ctx: PrecisionCtx) -> Iterator[TruncationReport]:
    """Reports for N = stride, 2*stride, ..., max_terms in one ascending pass.

    Each row equals ``theorem_product(N, ctx)`` bit for bit: the running sum
    sees the same additions in the same order.
    """
    if stride < 1 or max_terms < 1:
        raise PreconditionError("stride and max_terms must be positive")
    p = ctx.working_bits
    e = real_exp(1, ctx)
    e_up = e.round_to(p, "c")
    total = BigReal.from_int(0, p)
    mass = BigReal.from_int(0, p)
    terms = _theorem_terms(max_terms, ctx)
    pending = next(terms, None)
    for N in range(stride, max_terms + 1, stride):
        while pending is not None and pending[0] <= N:
            total = real_add(total, pending[3], ctx)
            mass = real_add(mass, abs(pending[3]), ctx)
            pending = next(terms, None)
        partial = real_exp(total, ctx) if not total.is_zero() else BigReal.from_int(1, p)
        scale = real_mul(partial, real_add(mass, 1, ctx), ctx)
        yield _finish(Identity.THEOREM_PRODUCT, N, ctx, partial, e, _product_tail(N, e_up, p), scale)


def lemma2_trace(max_terms: int, stride: int, ctx: PrecisionCtx) -> Iterator[TruncationReport]:
    """Convergence of the phi-sum at 1/tau towards tau, one report per stride."""
    if stride < 1 or max_terms < 1:
        raise PreconditionError("stride and max_terms must be positive")
    p = ctx.working_bits
    x = EvalPoint.inverse_tau()
    phi = sieve_totient(max_terms)
    target = golden_to_real(x.exact / (1 - x.exact), p)
    total = BigReal.from_int(0, p)
    mass = BigReal.from_int(0, p)
    terms = _log_terms(phi, x, max_terms, ctx)
    pending = next(terms, None)
    for N in range(stride, max_terms + 1, stride):
        while pending is not None and pending[0] <= N:
            total = real_sub(total, pending[1], ctx)
            mass = real_add(mass, abs(pending[1]), ctx)
            pending = next(terms, None)
        yield _finish(Identity.LEMMA2_PHI, N, ctx, total, target, lemma1_tail_bound(x, N, 1, p), mass)


# -- the general identity ----------------------------------------------------


def general_identity_check(
    f: ArithFnTable, x, N: int, C: Fraction | int, ctx: PrecisionCtx
) -> IdentityCheck:
    """Compare prod_{n<=N} (1-x**n)**(-f(n)/n) with exp(sum_{n<=N} (1*f)(n)/n x**n).

    Both logs are within T = T_lhs + T_rhs of the common limit L, with T_lhs
    from :func:`lemma1_tail_bound` and T_rhs from :func:`series_tail_bound`.
    Hence |LHS - RHS| <= RHS * (exp(T) - 1) <= RHS * T * exp(T).
    """
    x = EvalPoint.coerce(x)
    C = Fraction(C)
    _check_growth(f, C)
    if N < 1 or N > f.limit:
        raise PreconditionError(f"N must lie in 1..{f.limit}")
    p = ctx.working_bits
    log_lhs = BigReal.from_int(0, p)
    mass = BigReal.from_int(0, p)
    for _, term in _log_terms(f, x, N, ctx):
        log_lhs = real_sub(log_lhs, term, ctx)
        mass = real_add(mass, abs(term), ctx)
    log_rhs, rmass = _coefficient_series(f, x, N, ctx)
    mass = real_add(mass, rmass, ctx)
    lhs = real_exp(log_lhs, ctx)
    rhs = real_exp(log_rhs, ctx)
    diff = abs(real_sub(lhs, rhs, ctx))
    T = _add_up(lemma1_tail_bound(x, N, C, p), series_tail_bound(x, N, C, p), p)
    bound = _mul_up(rhs.round_to(p, "c"), _expm1_bound(T, p), p)
    big = lhs if lhs > rhs else rhs
    bound = _add_up(bound, ctx.rounding_budget(real_mul(big, real_add(mass, 1, ctx), ctx)), p)
    return IdentityCheck(lhs, rhs, diff, bound, diff <= bound)


def phi_minus_mu(limit: int) -> ArithFnTable:
    phi, mu = sieve_totient(limit), sieve_mobius(limit)
    return ArithFnTable.custom(a - b for a, b in zip(phi.values, mu.values))


SPECIAL_VARIANTS = ("exp_x", "exp_x_over_1mx", "exp_x2_over_1mx")


def special_exp_products(variant: str, x, N: int, ctx: PrecisionCtx) -> IdentityCheck:
    """Products whose log sums to x, x/(1-x) or x**2/(1-x), checked two ways.

    The returned check compares the truncated product with the closed form;
    it passes only if that agreement holds within the product's truncation
    bound and :func:`general_identity_check` passes for the same table.
    """
    x = EvalPoint.coerce(x)
    xe = x.exact
    if variant == "exp_x":
        f, C, exponent = sieve_mobius(N), Fraction(1), xe
    elif variant == "exp_x_over_1mx":
        f, C, exponent = sieve_totient(N), Fraction(1), xe / (1 - xe)
    elif variant == "exp_x2_over_1mx":
        # |phi(n) - mu(n)| <= n + 1 <= 2n
        f, C, exponent = phi_minus_mu(N), Fraction(2), xe * xe / (1 - xe)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    general = general_identity_check(f, x, N, C, ctx)
    p = ctx.working_bits
    target = real_exp(golden_to_real(exponent, p), ctx)
    diff = abs(real_sub(general.lhs, target, ctx))
    t_lhs = lemma1_tail_bound(x, N, C, p)
    bound = _mul_up(target.round_to(p, "c"), _expm1_bound(t_lhs, p), p)
    big = general.lhs if general.lhs > target else target
    bound = _add_up(bound, ctx.rounding_budget(real_mul(big, 4, ctx)), p)
    return IdentityCheck(general.lhs, target, diff, bound, diff <= bound and general.passed)


# -- exact coefficients ------------------------------------------------------


def formal_coefficients(f: ArithFnTable, degree: int) -> list[Fraction]:
    """Coefficients of x**1..x**degree in sum_k f(k)/k * sum_j x**(k*j)/j.

    Expanded term by term in exact rationals; the coefficient of x**n must
    equal (1*f)(n)/n, and a mismatch raises ArithmeticError.
    """
    if degree < 1 or degree > f.limit:
        raise PreconditionError(f"degree must lie in 1..{f.limit}")
    coeffs = [Fraction(0)] * (degree + 1)
    for k in range(1, degree + 1):
        fk = f[k]
        if fk == 0:
            continue
        w = Fraction(fk, k)
        for j in range(1, degree // k + 1):
            coeffs[k * j] += w / j
    g = dirichlet_one_convolve(f.truncate(degree))
    for n in range(1, degree + 1):
        if coeffs[n] != Fraction(g[n], n):
            raise ArithmeticError(f"coefficient of x**{n} is {coeffs[n]}, expected {Fraction(g[n], n)}")
    return coeffs[1:]
