"""Acceptance suite: one group of checks per criterion.

Each test carries ``@pytest.mark.criterion(n, title)``; the conftest rolls
them up into a PASS/FAIL line per criterion at the end of the run.
"""

import random
import time
from decimal import Decimal
from fractions import Fraction as F

import pytest

from goldprod.arithfn import ArithFnTable, sieve_mobius, sieve_totient, totient_from_mobius, verify_divisor_sums
from goldprod.bigreal import BigReal, PrecisionCtx, real_exp, real_sub
from goldprod.exactnum import golden_arith, golden_tau, golden_to_real, tau_power
from goldprod.identities import (
    EvalPoint,
    formal_coefficients,
    general_identity_check,
    lemma1_sum,
    lemma2_pair,
    special_exp_products,
    theorem_log_sum,
    theorem_product,
    theorem_product_trace,
)

import oracles

criterion = pytest.mark.criterion


def dec(x: BigReal) -> Decimal:
    return oracles.dec(x.to_fraction())


def report(n: int, **values) -> None:
    shown = ", ".join(f"{k}={v}" for k, v in values.items())
    print(f"[criterion {n}] {shown}")


@criterion(1, "divisor-sum identities to 10^5 in under 5 s")
def test_divisor_sums():
    t0 = time.perf_counter()
    rep = verify_divisor_sums(10**5)
    elapsed = time.perf_counter() - t0
    report(1, passed=rep.passed, seconds=round(elapsed, 2))
    assert rep.phi_passed and rep.mu_passed
    assert elapsed < 5


@criterion(2, "totient from Mobius equals the sieve to 10^4 in under 5 s")
def test_totient_from_mobius():
    t0 = time.perf_counter()
    mu, phi = sieve_mobius(10**4), sieve_totient(10**4)
    bad = [n for n in range(1, 10**4 + 1) if totient_from_mobius(n, mu) != phi[n]]
    elapsed = time.perf_counter() - t0
    report(2, mismatches=len(bad), seconds=round(elapsed, 2))
    assert bad == []
    assert elapsed < 5


@criterion(3, "log sums at x=1/2, K=128, 192 bits within 4*2^-129")
@pytest.mark.parametrize("fn, target", [(sieve_totient, F(1)), (sieve_mobius, F(1, 2))])
def test_lemma1_half(fn, target):
    ctx = PrecisionCtx(192 - 64)
    rep = lemma1_sum(fn(128), F(1, 2), 128, ctx)
    diff = abs(rep.partial.to_fraction() - target)
    report(3, fn=rep.identity.value, diff=f"{float(diff):.3e}")
    assert rep.partial.prec == 192
    assert diff <= 4 * F(1, 2**129)
    assert rep.passed


@criterion(4, "reciprocal pair at K=200, 256 bits")
def test_lemma2_reciprocal_pair():
    pair = lemma2_pair(200, PrecisionCtx(256))
    tau = oracles.tau()
    d_phi = oracles.abs_diff(pair.phi.partial, tau)
    d_mu = oracles.abs_diff(pair.mu.partial, oracles.run(lambda: 1 / tau))
    d_prod = oracles.abs_diff(pair.product.lhs, Decimal(1))
    report(4, phi=f"{d_phi:.3e}", mu=f"{d_mu:.3e}", product=f"{d_prod:.3e}")
    assert d_phi < Decimal("1e-40")
    assert d_mu < Decimal("1e-40")
    assert d_prod < Decimal("1e-39")
    assert pair.phi.passed and pair.mu.passed and pair.product.passed


@criterion(5, "partial products converge to e with sound tail bounds, under 10 s")
def test_theorem_product():
    t0 = time.perf_counter()
    ctx = PrecisionCtx(256)
    e = real_exp(1, ctx)
    p100 = theorem_product(100, PrecisionCtx(128))
    p200 = theorem_product(200, ctx)
    d100 = abs(dec(p100.partial) - dec(e))
    d200 = abs(dec(p200.partial) - dec(e))
    trace = list(theorem_product_trace(200, 10, ctx))
    elapsed = time.perf_counter() - t0
    report(5, p100=f"{d100:.3e}", p200=f"{d200:.3e}", seconds=round(elapsed, 2))
    assert d100 < Decimal("1e-18")
    assert d200 < Decimal("1e-40")
    assert [r.terms_used for r in trace] == list(range(10, 201, 10))
    for r in trace:
        actual = oracles.abs_diff(r.partial, oracles.exp(1))
        assert dec(r.tail_bound) >= actual, r.terms_used
        assert r.passed
    assert elapsed < 10


@criterion(6, "exp of the log sum equals the product within rounding budget")
@pytest.mark.parametrize("N", [10, 50, 100])
def test_exp_log_duality(N):
    # compare against the factor-by-factor product, not the one that is
    # computed as exp(log sum) internally
    ctx = PrecisionCtx(128)
    lhs = real_exp(theorem_log_sum(N, ctx).partial, ctx)
    direct = theorem_product(N, ctx, method="direct")
    gap = abs(real_sub(lhs, direct.partial, ctx))
    report(6, N=N, gap=f"{float(gap):.3e}", budget=f"{float(direct.rounding_budget):.3e}")
    assert gap <= direct.rounding_budget


@criterion(7, "exact coefficients: ones for phi, [1,0,0,...] for mu, to degree 50")
def test_formal_coefficients():
    phi = formal_coefficients(sieve_totient(50), 50)
    mu = formal_coefficients(sieve_mobius(50), 50)
    assert all(type(c) is F or type(c) is int for c in phi + mu)
    assert phi == [1] * 50
    assert mu == [1] + [0] * 49


@criterion(8, "general identity on 100 random tables, x=1/3, N=64")
def test_general_identity_fuzz():
    rng = random.Random(20240601)
    ctx = PrecisionCtx(128)
    failures = []
    for trial in range(100):
        f = ArithFnTable.custom(rng.randint(-n, n) for n in range(1, 65))
        chk = general_identity_check(f, F(1, 3), 64, 1, ctx)
        if not chk.passed:
            failures.append(trial)
    report(8, trials=100, failures=len(failures))
    assert failures == []


@criterion(9, "special products at x in {1/2, 1/3}, N=64")
@pytest.mark.parametrize("x", [F(1, 2), F(1, 3)])
@pytest.mark.parametrize("variant, closed", [
    ("exp_x", lambda x: x),
    ("exp_x_over_1mx", lambda x: x / (1 - x)),
    ("exp_x2_over_1mx", lambda x: x * x / (1 - x)),
])
def test_special_products(variant, closed, x):
    chk = special_exp_products(variant, x, 64, PrecisionCtx(128))
    target = oracles.exp(closed(x))
    report(9, variant=variant, x=x, lhs_gap=f"{oracles.abs_diff(chk.lhs, target):.3e}")
    assert chk.passed
    assert oracles.abs_diff(chk.rhs, target) <= 2 * oracles.ulps(chk.rhs)
    assert oracles.abs_diff(chk.lhs, target) <= dec(chk.bound)


@criterion(10, "exact algebra: P1 = 1, P2 near tau, tau power additivity")
def test_exact_algebra_spot_checks():
    ctx = PrecisionCtx(128)
    p1 = theorem_product(1, ctx)
    assert p1.partial == 1 and p1.partial.to_fraction() == 1

    p2 = theorem_product(2, ctx)
    tau = golden_to_real(golden_tau(), 512)
    gap = abs(p2.partial.to_fraction() - tau.to_fraction())
    assert gap <= p2.rounding_budget.to_fraction() + tau.ulp().to_fraction()

    rng = random.Random(7)
    for _ in range(1000):
        j, k = rng.randint(-1000, 1000), rng.randint(-1000, 1000)
        assert tau_power(j + k) == golden_arith("mul", tau_power(j), tau_power(k))
    assert EvalPoint.inverse_tau().power(1) * golden_tau() == 1
    report(10, p2_gap=f"{float(gap):.3e}")
