"""Arbitrary-precision reals with explicit precision.

Values wrap mpmath's raw binary float tuples and every operation takes its
precision from a :class:`PrecisionCtx` argument, never from global state, so
evaluations at different precisions can run side by side.

Rounding contracts at the context's working precision:

* add, sub, mul, div, sqrt: correctly rounded to nearest (<= 1/2 ulp)
* :func:`real_ln`, :func:`real_exp`: <= 2 ulp
* :func:`real_pow_rational`: <= 4 ulp

Computing at ``target_bits + guard_bits`` and reporting results as accurate
to ``target_bits`` leaves room for the error of up to ``2**(guard_bits-2)``
accumulated operations.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import NamedTuple

from mpmath import libmp

__all__ = [
    "BigReal",
    "PrecisionCtx",
    "DomainError",
    "real_eval",
    "real_add",
    "real_sub",
    "real_mul",
    "real_div",
    "real_sqrt",
    "real_ln",
    "real_exp",
    "real_pow_rational",
    "neg_log1m_series",
    "SeriesResult",
    "format_decimal",
    "parse_rational",
    "EXP_BOUND",
]

#: Largest |x| accepted by :func:`real_exp`.
EXP_BOUND = 10**6

_MIN_GUARD = 32


class DomainError(ValueError):
    """Argument outside the domain of a real function."""


@dataclass(frozen=True)
class PrecisionCtx:
    target_bits: int
    guard_bits: int = 64

    def __post_init__(self) -> None:
        if self.target_bits < 1:
            raise ValueError("target_bits must be positive")
        if self.guard_bits < _MIN_GUARD:
            raise ValueError(f"guard_bits must be at least {_MIN_GUARD}")

    @classmethod
    def for_ops(cls, target_bits: int, ops: int) -> PrecisionCtx:
        """Guard budget 64 + ceil(log2(ops)) for ``ops`` accumulated operations."""
        return cls(target_bits, 64 + max(0, math.ceil(math.log2(max(ops, 1)))))

    @property
    def working_bits(self) -> int:
        return self.target_bits + self.guard_bits

    def rounding_budget(self, scale: BigReal | int | Fraction = 1) -> BigReal:
        """``max(1, |scale|) * 2**-target_bits``, an upper bound on rounding error."""
        s = abs(BigReal.coerce(scale, self.working_bits))
        if s < 1:
            s = BigReal.from_int(1)
        raw = libmp.mpf_shift(s.mpf, -self.target_bits)
        return BigReal(libmp.mpf_pos(raw, self.working_bits, "c"), self.working_bits)


@total_ordering
class BigReal:
    """A finite binary floating-point value tagged with its precision."""

    __slots__ = ("_mpf", "_prec")

    def __init__(self, mpf: tuple, prec: int) -> None:
        if mpf in (libmp.finf, libmp.fninf, libmp.fnan):
            raise ArithmeticError("non-finite value")
        self._mpf = mpf
        self._prec = prec

    @property
    def mpf(self) -> tuple:
        return self._mpf

    @property
    def prec(self) -> int:
        return self._prec

    @classmethod
    def from_int(cls, n: int, prec: int | None = None) -> BigReal:
        m = libmp.from_int(n)
        if prec is None:
            return cls(m, max(m[3], 1))
        return cls(libmp.mpf_pos(m, prec, "n"), prec)

    @classmethod
    def from_rational(cls, q: Fraction | int, prec: int, rounding: str = "n") -> BigReal:
        q = Fraction(q)
        return cls(libmp.from_rational(q.numerator, q.denominator, prec, rounding), prec)

    @classmethod
    def coerce(cls, value: BigReal | int | Fraction, prec: int) -> BigReal:
        if isinstance(value, BigReal):
            return value
        if isinstance(value, int):
            return cls.from_int(value)
        return cls.from_rational(value, prec)

    def to_fraction(self) -> Fraction:
        """Exact rational value (binary floats are dyadic rationals)."""
        p, q = libmp.to_rational(self._mpf)
        return Fraction(int(p), int(q))

    def is_zero(self) -> bool:
        return self._mpf == libmp.fzero

    def sign(self) -> int:
        return libmp.mpf_sign(self._mpf)

    def ulp(self) -> BigReal:
        """Spacing of ``prec``-bit floats at this magnitude."""
        if self.is_zero():
            return BigReal(libmp.from_man_exp(1, -self._prec), self._prec)
        _, man, exp, bc = self._mpf
        return BigReal(libmp.from_man_exp(1, exp + bc - self._prec), self._prec)

    def round_to(self, prec: int, rounding: str = "n") -> BigReal:
        return BigReal(libmp.mpf_pos(self._mpf, prec, rounding), prec)

    def __neg__(self) -> BigReal:
        return BigReal(libmp.mpf_neg(self._mpf), self._prec)

    def __abs__(self) -> BigReal:
        return BigReal(libmp.mpf_abs(self._mpf), self._prec)

    def _other(self, other) -> tuple:
        if isinstance(other, BigReal):
            return other._mpf
        if isinstance(other, int):
            return libmp.from_int(other)
        if isinstance(other, Fraction):
            # exact comparison needs the exact value, not a rounding of it
            return None
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return self.to_fraction() == other
        return libmp.mpf_eq(self._mpf, o)

    def __lt__(self, other) -> bool:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return self.to_fraction() < other
        return libmp.mpf_lt(self._mpf, o)

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __float__(self) -> float:
        return libmp.to_float(self._mpf)

    def __repr__(self) -> str:
        return f"BigReal({format_decimal(self, 20)}, prec={self._prec})"

    def __str__(self) -> str:
        return format_decimal(self, max(1, int(self._prec * 0.30103)))


def _mpf(x: BigReal | int | Fraction, prec: int) -> tuple:
    return BigReal.coerce(x, prec + 8).mpf


def real_add(x, y, ctx: PrecisionCtx) -> BigReal:
    p = ctx.working_bits
    return BigReal(libmp.mpf_add(_mpf(x, p), _mpf(y, p), p, "n"), p)


def real_sub(x, y, ctx: PrecisionCtx) -> BigReal:
    p = ctx.working_bits
    return BigReal(libmp.mpf_sub(_mpf(x, p), _mpf(y, p), p, "n"), p)


def real_mul(x, y, ctx: PrecisionCtx) -> BigReal:
    p = ctx.working_bits
    return BigReal(libmp.mpf_mul(_mpf(x, p), _mpf(y, p), p, "n"), p)


def real_div(x, y, ctx: PrecisionCtx) -> BigReal:
    p = ctx.working_bits
    d = _mpf(y, p)
    if d == libmp.fzero:
        raise ZeroDivisionError("BigReal division by zero")
    return BigReal(libmp.mpf_div(_mpf(x, p), d, p, "n"), p)


def real_sqrt(x, ctx: PrecisionCtx) -> BigReal:
    p = ctx.working_bits
    m = _mpf(x, p)
    if libmp.mpf_sign(m) < 0:
        raise DomainError("sqrt of a negative number")
    return BigReal(libmp.mpf_sqrt(m, p, "n"), p)


_BINARY = {"add": real_add, "sub": real_sub, "mul": real_mul, "div": real_div}


def real_eval(op: str, *operands, ctx: PrecisionCtx) -> BigReal:
    """Dispatch ``add``/``sub``/``mul``/``div``/``sqrt`` by name."""
    if op == "sqrt":
        (x,) = operands
        return real_sqrt(x, ctx)
    try:
        fn = _BINARY[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    x, y = operands
    return fn(x, y, ctx)


def real_ln(x, ctx: PrecisionCtx) -> BigReal:
    p = ctx.working_bits
    m = _mpf(x, p)
    if libmp.mpf_sign(m) <= 0:
        raise DomainError("logarithm of a non-positive number")
    return BigReal(libmp.mpf_pos(libmp.mpf_log(m, p + 16, "n"), p, "n"), p)


def real_exp(x, ctx: PrecisionCtx) -> BigReal:
    p = ctx.working_bits
    m = _mpf(x, p)
    if libmp.mpf_cmp(libmp.mpf_abs(m), libmp.from_int(EXP_BOUND)) > 0:
        raise OverflowError(f"|x| exceeds EXP_BOUND = {EXP_BOUND}")
    # relative error of exp(x) is |x| times the relative error of x: widen
    extra = 16 + max(0, _magnitude_bits(m))
    return BigReal(libmp.mpf_pos(libmp.mpf_exp(m, p + extra, "n"), p, "n"), p)


def _magnitude_bits(m: tuple) -> int:
    """Upper bound on log2|m| (0 for zero)."""
    if m == libmp.fzero:
        return 0
    return m[2] + m[3]


def real_pow_rational(base, exponent: Fraction | int, ctx: PrecisionCtx) -> BigReal:
    """``base**exponent`` as ``exp(exponent * ln(base))``."""
    exponent = Fraction(exponent)
    p = ctx.working_bits
    b = BigReal.coerce(base, p + 8)
    if exponent == 0:
        if b.is_zero():
            raise DomainError("0**0 is undefined")
        return BigReal.from_int(1, p)
    if exponent == 1:
        return b
    if b.sign() <= 0:
        raise DomainError("non-positive base with nonzero exponent")
    wp = p + 24
    lb = libmp.mpf_log(b.mpf, wp, "n")
    ex = libmp.from_rational(exponent.numerator, exponent.denominator, wp, "n")
    y_est = libmp.mpf_mul(lb, ex, 53, "n")
    wp += max(0, _magnitude_bits(y_est))
    if wp > p + 24:
        lb = libmp.mpf_log(b.mpf, wp, "n")
        ex = libmp.from_rational(exponent.numerator, exponent.denominator, wp, "n")
    y = libmp.mpf_mul(lb, ex, wp, "n")
    if libmp.mpf_cmp(libmp.mpf_abs(y), libmp.from_int(EXP_BOUND)) > 0:
        raise OverflowError("power overflows EXP_BOUND")
    return BigReal(libmp.mpf_pos(libmp.mpf_exp(y, wp, "n"), p, "n"), p)


class SeriesResult(NamedTuple):
    value: BigReal
    tail_bound: BigReal


def neg_log1m_series(y, terms: int, ctx: PrecisionCtx) -> SeriesResult:
    """Truncated Maclaurin series of -log(1 - y) with a rigorous tail bound.

    Returns ``sum(y**j / j for j in 1..terms)`` and the bound
    ``y**(terms+1) / ((terms+1) * (1-y))`` on the omitted terms, which holds
    because each omitted term is at most ``y**j / (terms+1)``.
    """
    if terms < 1:
        raise ValueError("terms must be positive")
    p = ctx.working_bits
    ym = _mpf(y, p)
    if not (libmp.mpf_sign(ym) > 0 and libmp.mpf_lt(ym, libmp.fone)):
        raise DomainError("series needs 0 < y < 1")
    total = libmp.fzero
    power = libmp.fone
    for j in range(1, terms + 1):
        power = libmp.mpf_mul(power, ym, p, "n")
        total = libmp.mpf_add(total, libmp.mpf_div(power, libmp.from_int(j), p, "n"), p, "n")
    num = libmp.mpf_pow_int(ym, terms + 1, p, "c")
    one_minus = libmp.mpf_sub(libmp.fone, ym, p, "f")
    den = libmp.mpf_mul(libmp.from_int(terms + 1), one_minus, p, "f")
    tail = libmp.mpf_div(num, den, p, "c")
    return SeriesResult(BigReal(total, p), BigReal(tail, p))


# -- decimal text ------------------------------------------------------------

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` (or a bare integer) exactly; decimals are rejected."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not an exact rational 'p/q': {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def _floor_log10(q: Fraction) -> int:
    """floor(log10(q)) for q > 0, exactly."""
    e = len(str(q.numerator)) - len(str(q.denominator))
    # now 10**(e-1) < q < 10**(e+1)
    if q < Fraction(10) ** e:
        e -= 1
    return e


def format_decimal(x: BigReal | Fraction | int, digits: int) -> str:
    """Round-to-nearest decimal with ``digits`` significant digits.

    Plain notation for 1e-3 <= |x| < 1e9, scientific otherwise.
    """
    if digits < 1:
        raise ValueError("digits must be positive")
    q = x.to_fraction() if isinstance(x, BigReal) else Fraction(x)
    if q == 0:
        return "0." + "0" * max(1, digits - 1)
    sign = "-" if q < 0 else ""
    q = abs(q)
    e = _floor_log10(q)
    scaled = round(q * Fraction(10) ** (digits - 1 - e))
    if scaled >= 10**digits:
        e += 1
        scaled = round(q * Fraction(10) ** (digits - 1 - e))
    s = str(scaled)
    if Fraction(1, 1000) <= q < 10**9 and not (q >= 1 and e >= 9):
        if e >= 0:
            int_part = s[: e + 1].ljust(e + 1, "0")
            frac = s[e + 1 :] or "0"
        else:
            int_part = "0"
            frac = "0" * (-e - 1) + s
        return f"{sign}{int_part}.{frac}"
    mant = s[0] + "." + (s[1:] or "0")
    return f"{sign}{mant}e{e:+d}"
