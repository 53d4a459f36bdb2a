"""Exact arithmetic in Q and Q(sqrt 5).

Rationals are plain :class:`fractions.Fraction` values (always canonical).
:class:`GoldenNumber` holds ``a + b*sqrt(5)`` with rational ``a`` and ``b``,
which is enough to carry the golden ratio, its powers, and every point
``1 - tau**-k`` with zero error until the final conversion to a real.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

from mpmath import libmp

from .bigreal import BigReal

__all__ = [
    "GoldenNumber",
    "golden_tau",
    "golden_arith",
    "golden_inverse",
    "tau_power",
    "tau_power_binary",
    "fibonacci",
    "golden_to_real",
    "MAX_TAU_EXPONENT",
]

#: Largest |k| accepted by :func:`tau_power`. Components grow like tau**k.
MAX_TAU_EXPONENT = 10**6

Number = Union[int, Fraction, "GoldenNumber"]


class GoldenNumber:
    """Immutable element ``a + b*sqrt(5)`` of Q(sqrt 5)."""

    __slots__ = ("_a", "_b")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0) -> None:
        if not isinstance(a, _RationalABC) or not isinstance(b, _RationalABC):
            raise TypeError("GoldenNumber components must be rational")
        self._a = Fraction(a)
        self._b = Fraction(b)

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @classmethod
    def coerce(cls, value: Number) -> GoldenNumber:
        if isinstance(value, GoldenNumber):
            return value
        return cls(value, 0)

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_rational(self) -> bool:
        return self._b == 0

    def conjugate(self) -> GoldenNumber:
        return GoldenNumber(self._a, -self._b)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - 5*b**2``; zero only for the zero element."""
        return self._a * self._a - 5 * self._b * self._b

    def sign(self) -> int:
        """Exact sign of the real number ``a + b*sqrt(5)``."""
        sa = (self._a > 0) - (self._a < 0)
        sb = (self._b > 0) - (self._b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: the larger square wins
        n = self.norm()
        return sa if n > 0 else sb

    def __add__(self, other: Number) -> GoldenNumber:
        o = GoldenNumber.coerce(other)
        return GoldenNumber(self._a + o._a, self._b + o._b)

    __radd__ = __add__

    def __neg__(self) -> GoldenNumber:
        return GoldenNumber(-self._a, -self._b)

    def __sub__(self, other: Number) -> GoldenNumber:
        o = GoldenNumber.coerce(other)
        return GoldenNumber(self._a - o._a, self._b - o._b)

    def __rsub__(self, other: Number) -> GoldenNumber:
        return GoldenNumber.coerce(other) - self

    def __mul__(self, other: Number) -> GoldenNumber:
        o = GoldenNumber.coerce(other)
        a, b, c, d = self._a, self._b, o._a, o._b
        return GoldenNumber(a * c + 5 * b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> GoldenNumber:
        return self * golden_inverse(GoldenNumber.coerce(other))

    def __rtruediv__(self, other: Number) -> GoldenNumber:
        return GoldenNumber.coerce(other) * golden_inverse(self)

    def __pow__(self, k: int) -> GoldenNumber:
        if k < 0:
            return golden_inverse(self) ** (-k)
        result = GoldenNumber(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GoldenNumber):
            return self._a == other._a and self._b == other._b
        if isinstance(other, _RationalABC):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __lt__(self, other: Number) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: Number) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: Number) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: Number) -> bool:
        return (self - other).sign() >= 0

    def __hash__(self) -> int:
        return hash((self._a, self._b))

    def __repr__(self) -> str:
        return f"GoldenNumber({self._a}, {self._b})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        sign = "-" if self._b < 0 else "+"
        return f"{self._a} {sign} {abs(self._b)}*sqrt(5)"


def golden_tau() -> GoldenNumber:
    """The golden ratio (1 + sqrt 5)/2."""
    return GoldenNumber(Fraction(1, 2), Fraction(1, 2))


def golden_arith(op: str, g1: Number, g2: Number) -> GoldenNumber:
    """Exact ``add``, ``sub`` or ``mul`` in Q(sqrt 5)."""
    x, y = GoldenNumber.coerce(g1), GoldenNumber.coerce(g2)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown golden operation {op!r}")


def golden_inverse(g: Number) -> GoldenNumber:
    """Reciprocal through the conjugate: 1/(a+b√5) = (a-b√5)/(a²-5b²)."""
    g = GoldenNumber.coerce(g)
    if g.is_zero():
        raise ZeroDivisionError("inverse of zero in Q(sqrt 5)")
    n = g.norm()
    assert n != 0, "sqrt(5) is irrational, so a nonzero element has nonzero norm"
    return GoldenNumber(g.a / n, -g.b / n)


def fibonacci(n: int) -> int:
    """F_n for any integer n, with F_{-n} = (-1)**(n+1) * F_n."""
    if n < 0:
        f = fibonacci(-n)
        return f if n % 2 else -f

    # fast doubling on (F_k, F_{k+1})
    def pair(k: int) -> tuple[int, int]:
        if k == 0:
            return 0, 1
        f, g = pair(k >> 1)
        c = f * (2 * g - f)
        d = f * f + g * g
        if k & 1:
            return d, c + d
        return c, d

    return pair(n)[0]


def tau_power(k: int) -> GoldenNumber:
    """tau**k for any integer k, from tau**k = F_k*tau + F_{k-1}.

    The identity follows from tau**2 = tau + 1 and holds for negative k
    with the extended Fibonacci numbers.
    """
    if abs(k) > MAX_TAU_EXPONENT:
        raise ValueError(f"|k| = {abs(k)} exceeds MAX_TAU_EXPONENT = {MAX_TAU_EXPONENT}")
    fk = fibonacci(k)
    fk1 = fibonacci(k - 1)
    half = Fraction(fk, 2)
    return GoldenNumber(half + fk1, half)


def tau_power_binary(k: int) -> GoldenNumber:
    """tau**k by binary powering; cross-check path for :func:`tau_power`."""
    return golden_tau() ** k


def golden_to_real(g: Number, precision_bits: int, rounding: str = "n") -> BigReal:
    """Round ``a + b*sqrt(5)`` to a :class:`BigReal` of ``precision_bits`` bits.

    With ``rounding="n"`` the result is within 1 ulp of the exact value.
    ``"c"`` (ceiling) and ``"f"`` (floor) give an upper / lower bound.

    When ``a`` and ``b*sqrt(5)`` have opposite signs the direct sum cancels,
    so the value is rewritten as ``norm / (a - b*sqrt(5))`` whose denominator
    is a same-sign sum.
    """
    if precision_bits < 16:
        raise ValueError("precision_bits must be at least 16")
    g = GoldenNumber.coerce(g)
    if g.b == 0:
        return BigReal.from_rational(g.a, precision_bits, rounding)
    wp = precision_bits + 32
    rnd = "n"
    sqrt5 = libmp.mpf_sqrt(libmp.from_int(5), wp, rnd)

    def same_sign_sum(a: Fraction, b: Fraction):
        bs = libmp.mpf_mul(libmp.from_rational(b.numerator, b.denominator, wp, rnd), sqrt5, wp, rnd)
        if a == 0:
            return bs
        return libmp.mpf_add(libmp.from_rational(a.numerator, a.denominator, wp, rnd), bs, wp, rnd)

    if g.a == 0 or (g.a > 0) == (g.b > 0):
        raw = same_sign_sum(g.a, g.b)
    else:
        n = g.norm()
        den = same_sign_sum(g.a, -g.b)
        raw = libmp.mpf_div(libmp.from_rational(n.numerator, n.denominator, wp, rnd), den, wp, rnd)
    # relative error of raw is below 2**(3 - wp); widen before a directed round
    if rounding == "c":
        raw = libmp.mpf_add(raw, _abs_slack(raw, wp), wp, "c")
    elif rounding == "f":
        raw = libmp.mpf_sub(raw, _abs_slack(raw, wp), wp, "f")
    elif rounding != "n":
        raise ValueError(f"rounding must be 'n', 'c' or 'f', got {rounding!r}")
    return BigReal(libmp.mpf_pos(raw, precision_bits, rounding), precision_bits)


def _abs_slack(raw, wp: int):
    _, _, exp, bc = raw
    # |raw| < 2**(exp+bc); slack 2**(exp+bc+4-wp) covers 8 relative ulps
    return libmp.from_man_exp(1, exp + bc + 4 - wp)
