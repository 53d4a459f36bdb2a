"""Tables of arithmetic functions: Möbius and totient sieves, divisor sums.

Sieves run in numpy (Eratosthenes with a smallest-prime-factor array) and
hand back plain Python ints, so tables never carry fixed-width values.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ArithFnTable",
    "CheckReport",
    "SieveSizeError",
    "InconsistencyError",
    "MAX_SIEVE_LIMIT",
    "smallest_prime_factors",
    "sieve_mobius",
    "sieve_totient",
    "dirichlet_one_convolve",
    "totient_from_mobius",
    "verify_divisor_sums",
    "divisors",
    "load_table",
]

#: Largest limit accepted by the sieves (about 0.5 GB peak for a totient table).
MAX_SIEVE_LIMIT = 10**7

KINDS = ("mu", "phi", "one", "custom")


class SieveSizeError(ValueError):
    pass


class InconsistencyError(ArithmeticError):
    """A computed quantity contradicts an identity that must hold."""


@dataclass(frozen=True)
class ArithFnTable:
    """Values f(1..limit), addressed 1-based: ``table[n] == f(n)``."""

    kind: str
    values: tuple[int, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(self.values))
        vals = self.values
        if not vals:
            raise ValueError("table must hold at least f(1)")
        if not all(isinstance(v, (int, np.integer)) for v in vals):
            raise TypeError("table values must be integers")
        if self.kind == "mu":
            if not set(vals) <= {-1, 0, 1} or vals[0] != 1:
                raise ValueError("mu table needs values in {-1,0,1} and mu(1) = 1")
        elif self.kind == "phi":
            if vals[0] != 1 or not all(1 <= v <= n for n, v in enumerate(vals, 1)):
                raise ValueError("phi table needs 1 <= phi(n) <= n and phi(1) = 1")
        elif self.kind == "one":
            if set(vals) != {1}:
                raise ValueError("'one' table must be all ones")

    @property
    def limit(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= len(self.values):
            raise IndexError(f"n = {n} outside 1..{len(self.values)}")
        return self.values[n - 1]

    def __iter__(self):
        return iter(self.values)

    def truncate(self, limit: int) -> ArithFnTable:
        if limit > self.limit:
            raise ValueError(f"cannot extend a table of limit {self.limit} to {limit}")
        return ArithFnTable(self.kind, self.values[:limit])

    def with_value(self, n: int, value: int) -> ArithFnTable:
        """Copy with f(n) replaced; the kind is kept when still valid."""
        vals = list(self.values)
        vals[n - 1] = value
        return ArithFnTable(self.kind, tuple(vals))

    def max_growth(self) -> Fraction:
        """max |f(n)|/n over the table: the smallest valid growth constant."""
        return max(Fraction(abs(v), n) for n, v in enumerate(self.values, 1))

    @classmethod
    def ones(cls, limit: int) -> ArithFnTable:
        return cls("one", (1,) * limit)

    @classmethod
    def custom(cls, values: Iterable[int]) -> ArithFnTable:
        return cls("custom", tuple(int(v) for v in values))


def _check_limit(limit: int) -> None:
    if not isinstance(limit, (int, np.integer)) or limit < 1:
        raise SieveSizeError(f"limit must be a positive integer, got {limit!r}")
    if limit > MAX_SIEVE_LIMIT:
        raise SieveSizeError(f"limit {limit} exceeds MAX_SIEVE_LIMIT = {MAX_SIEVE_LIMIT}")


def smallest_prime_factors(limit: int) -> np.ndarray:
    """spf[n] for 0 <= n <= limit (spf[0] = spf[1] = 0)."""
    _check_limit(limit)
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    return spf


def _small_primes(spf: np.ndarray) -> list[int]:
    """Primes p with p*p <= limit, read off the spf array."""
    root = math.isqrt(spf.size - 1)
    idx = np.arange(2, root + 1)
    return idx[spf[2 : root + 1] == idx].tolist()


def _split_small(limit: int) -> tuple[np.ndarray, list[int], np.ndarray]:
    """Sieve by the primes up to sqrt(limit).

    Returns the spf array, the small primes, and ``part[n]``, the largest
    divisor of n built from small primes.  The cofactor ``n // part[n]`` is
    then 1 or a single prime above sqrt(limit).
    """
    spf = smallest_prime_factors(limit)
    small = _small_primes(spf)
    part = np.ones(limit + 1, dtype=np.int64)
    for p in small:
        q = p
        while q <= limit:
            part[q::q] *= p
            q *= p
    return spf, small, part


def sieve_mobius(limit: int) -> ArithFnTable:
    _, small, part = _split_small(limit)
    mu = np.ones(limit + 1, dtype=np.int64)
    for p in small:
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    n = np.arange(limit + 1, dtype=np.int64)
    n[0] = 1
    mu[(n // part) > 1] *= -1
    return ArithFnTable("mu", tuple(mu[1:].tolist()))


def sieve_totient(limit: int) -> ArithFnTable:
    """phi(n) for n <= limit, with phi(1) = 1."""
    _, small, part = _split_small(limit)
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in small:
        phi[p::p] -= phi[p::p] // p
    n = np.arange(limit + 1, dtype=np.int64)
    n[0] = 1
    big = n // part
    has_big = big > 1
    phi[has_big] -= phi[has_big] // big[has_big]
    return ArithFnTable("phi", tuple(phi[1:].tolist()))


def dirichlet_one_convolve(f: ArithFnTable) -> ArithFnTable:
    """(1*f)(n) = sum of f(d) over d | n, by looping d over its multiples."""
    n = f.limit
    bound = max(abs(v) for v in f.values) * n
    if bound < 2**62:
        src = np.asarray(f.values, dtype=np.int64)
        g = np.zeros(n + 1, dtype=np.int64)
        for d in range(1, n + 1):
            v = src[d - 1]
            if v:
                g[d::d] += v
        return ArithFnTable("custom", tuple(g[1:].tolist()))
    # values too large for int64: exact Python ints
    out = [0] * (n + 1)
    for d, v in enumerate(f.values, 1):
        if v:
            for m in range(d, n + 1, d):
                out[m] += v
    return ArithFnTable("custom", tuple(out[1:]))


def divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def totient_from_mobius(n: int, mu: ArithFnTable) -> int:
    """phi(n) as n * sum(mu(d)/d for d | n), evaluated in exact rationals."""
    if mu.kind != "mu":
        raise ValueError("expected a mu table")
    if not 1 <= n <= mu.limit:
        raise ValueError(f"n = {n} outside the table (limit {mu.limit})")
    s = sum((Fraction(mu[d], d) for d in divisors(n) if mu[d]), Fraction(0))
    value = n * s
    if value.denominator != 1:
        raise InconsistencyError(f"n * sum mu(d)/d = {value} is not an integer at n = {n}")
    return value.numerator


@dataclass
class CheckReport:
    limit: int
    phi_passed: bool
    mu_passed: bool
    phi_counterexample: int | None = None
    mu_counterexample: int | None = None

    @property
    def passed(self) -> bool:
        return self.phi_passed and self.mu_passed

    @property
    def counterexamples(self) -> list[int]:
        return [n for n in (self.phi_counterexample, self.mu_counterexample) if n is not None]


def _first_mismatch(got: Sequence[int], want) -> int | None:
    for n, v in enumerate(got, 1):
        if v != want(n):
            return n
    return None


def verify_divisor_sums(
    limit: int, phi: ArithFnTable | None = None, mu: ArithFnTable | None = None
) -> CheckReport:
    """Check sum_{d|n} phi(d) = n and sum_{d|n} mu(d) = [n = 1] for n <= limit.

    Tables may be supplied (e.g. deliberately corrupted ones); otherwise they
    are sieved.
    """
    phi = sieve_totient(limit) if phi is None else phi.truncate(limit)
    mu = sieve_mobius(limit) if mu is None else mu.truncate(limit)
    bad_phi = _first_mismatch(dirichlet_one_convolve(phi).values, lambda n: n)
    bad_mu = _first_mismatch(dirichlet_one_convolve(mu).values, lambda n: int(n == 1))
    return CheckReport(limit, bad_phi is None, bad_mu is None, bad_phi, bad_mu)


def load_table(path: str | Path) -> ArithFnTable:
    """Read a custom table from CSV lines ``n,f(n)`` or a ``.json`` array.

    CSV rows must run n = 1, 2, ... without gaps; a header line is allowed.
    """
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in data):
            raise ValueError(f"{path}: expected a JSON array of integers")
        return ArithFnTable.custom(data)
    values = []
    for lineno, row in enumerate(csv.reader(text.splitlines()), 1):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'n,f(n)'")
        a, b = (c.strip() for c in row)
        if lineno == 1 and not a.lstrip("+-").isdigit():
            continue  # header
        try:
            n, v = int(a), int(b)
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-integer entry") from None
        if n != len(values) + 1:
            raise ValueError(f"{path}:{lineno}: expected n = {len(values) + 1}, got {n}")
        values.append(v)
    if not values:
        raise ValueError(f"{path}: no rows")
    return ArithFnTable.custom(values)
