"""Independent reference implementations used only by the tests.

Nothing here imports goldprod's numeric code: the arithmetic functions are
brute force and the real-number oracles run on the stdlib ``decimal`` module.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction

ORACLE_DIGITS = 200


def mobius_naive(n: int) -> int:
    """mu(n) by trial factorization."""
    count = 0
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            count += 1
        p += 1
    if n > 1:
        count += 1
    return -1 if count % 2 else 1


def totient_naive(n: int) -> int:
    """phi(n) by counting k in [1, n] with gcd(k, n) = 1."""
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def divisor_count_naive(n: int) -> int:
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def dec(q: Fraction | int) -> Decimal:
    q = Fraction(q)
    with localcontext() as c:
        c.prec = ORACLE_DIGITS
        return Decimal(q.numerator) / Decimal(q.denominator)


def run(fn, *args) -> Decimal:
    with localcontext() as c:
        c.prec = ORACLE_DIGITS
        return +fn(*args)


def sqrt5() -> Decimal:
    return run(lambda: Decimal(5).sqrt())


def tau() -> Decimal:
    return run(lambda: (1 + Decimal(5).sqrt()) / 2)


def golden(a: Fraction, b: Fraction) -> Decimal:
    return run(lambda: dec(a) + dec(b) * Decimal(5).sqrt())


def ln(q) -> Decimal:
    return run(lambda: (q if isinstance(q, Decimal) else dec(q)).ln())


def exp(q) -> Decimal:
    return run(lambda: (q if isinstance(q, Decimal) else dec(q)).exp())


def theorem_partial_product(N: int) -> Decimal:
    """prod_{n<=N} (1 - tau**-n)**((mu(n)-phi(n))/n), by direct powering."""
    def go():
        t = (1 + Decimal(5).sqrt()) / 2
        total = Decimal(0)
        for n in range(1, N + 1):
            e = mobius_naive(n) - totient_naive(n)
            if e:
                total += Decimal(e) / n * (1 - t ** (-n)).ln()
        return total.exp()
    return run(go)


def abs_diff(x, y: Decimal) -> Decimal:
    """|x - y| with x a BigReal or Fraction, in oracle precision."""
    xf = x.to_fraction() if hasattr(x, "to_fraction") else Fraction(x)
    return run(lambda: abs(dec(xf) - y))


def ulps(x) -> Decimal:
    return dec(x.ulp().to_fraction())
