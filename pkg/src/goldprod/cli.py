"""``goldprod`` command line: tabulate, verify, converge.

Exit codes: 0 when every check passes, 1 on a failed check or a runtime
error (unreadable input, unwritable output), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import arithfn, identities
from .bigreal import PrecisionCtx, format_decimal, parse_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_PREC_BITS = 128
DEFAULT_DIGITS = 30


@dataclass(frozen=True)
class CliConfig:
    command: str
    target: str | None = None
    limit: int | None = None
    terms: int | None = None
    precision_bits: int = DEFAULT_PREC_BITS
    digits: int = DEFAULT_DIGITS
    x: Fraction | str | None = None
    fn: str | None = None
    variant: str | None = None
    f_file: Path | None = None
    growth_c: Fraction | None = None
    stride: int | None = None
    format: str = "text"
    out: Path | None = None

    def ctx(self) -> PrecisionCtx:
        return PrecisionCtx.for_ops(self.precision_bits, max(self.terms or self.limit or 1, 1))


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _unit_point(text: str, allow_tau: bool) -> Fraction | str:
    if allow_tau and text.strip() == "1/tau":
        return "1/tau"
    q = _rational(text)
    if not 0 < q < 1:
        raise argparse.ArgumentTypeError(f"x must satisfy 0 < x < 1, got {text}")
    return q


def _point_or_tau(text: str) -> Fraction | str:
    return _unit_point(text, allow_tau=True)


def _point(text: str) -> Fraction:
    return _unit_point(text, allow_tau=False)


def _positive_rational(text: str) -> Fraction:
    q = _rational(text)
    if q <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive rational, got {text}")
    return q


def _add_precision(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prec-bits", type=_positive_int, default=DEFAULT_PREC_BITS,
                   help=f"target precision in bits (default {DEFAULT_PREC_BITS})")
    p.add_argument("--digits", type=_positive_int, default=DEFAULT_DIGITS,
                   help=f"significant digits printed (default {DEFAULT_DIGITS})")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goldprod",
        description="Certified checks of the golden-ratio infinite product for e.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tab = sub.add_parser("tabulate", help="print a mu or phi table")
    tab.add_argument("--fn", choices=("mu", "phi"), required=True)
    tab.add_argument("--limit", type=_positive_int, required=True)
    tab.add_argument("--format", choices=("text", "csv", "json"), default="text")
    tab.add_argument("--out", type=Path)

    ver = sub.add_parser("verify", help="verify an identity with certified bounds")
    vsub = ver.add_subparsers(dest="target", required=True)

    p = vsub.add_parser("lemma1", help="log sums against x/(1-x) (phi) or x (mu)")
    p.add_argument("--fn", choices=("phi", "mu"), required=True)
    p.add_argument("--x", type=_point_or_tau, required=True, help="P/Q in (0,1) or 1/tau")
    p.add_argument("--terms", type=_positive_int, required=True)
    _add_precision(p)

    p = vsub.add_parser("lemma2", help="the reciprocal pair at x = 1/tau")
    p.add_argument("--terms", type=_positive_int, required=True)
    _add_precision(p)

    p = vsub.add_parser("theorem", help="partial product against e")
    p.add_argument("--terms", type=_positive_int, required=True)
    _add_precision(p)

    p = vsub.add_parser("special", help="products for exp(x), exp(x/(1-x)), exp(x^2/(1-x))")
    p.add_argument("--variant", choices=identities.SPECIAL_VARIANTS, required=True)
    p.add_argument("--x", type=_point, required=True, help="P/Q in (0,1)")
    p.add_argument("--terms", type=_positive_int, required=True)
    _add_precision(p)

    p = vsub.add_parser("general", help="product/exponential identity for a custom f")
    p.add_argument("--f-file", type=Path, required=True, help="CSV 'n,f(n)' or JSON array")
    p.add_argument("--growth-c", type=_positive_rational, required=True,
                   help="C with |f(n)| <= C*n, as P/Q")
    p.add_argument("--x", type=_point, required=True, help="P/Q in (0,1)")
    p.add_argument("--terms", type=_positive_int, required=True)
    _add_precision(p)

    conv = sub.add_parser("converge", help="write a convergence trace as CSV")
    conv.add_argument("--identity", choices=("theorem", "lemma2"), required=True)
    conv.add_argument("--max-terms", type=_positive_int, required=True)
    conv.add_argument("--stride", type=_positive_int, default=1)
    conv.add_argument("--out", type=Path)
    conv.add_argument("--prec-bits", type=_positive_int, default=DEFAULT_PREC_BITS)
    conv.add_argument("--digits", type=_positive_int, default=DEFAULT_DIGITS)
    return parser


def parse_args(argv: Sequence[str]) -> CliConfig:
    """Validated configuration; usage errors exit with status 2."""
    ns = build_parser().parse_args(list(argv))
    common = dict(
        command=ns.command,
        precision_bits=getattr(ns, "prec_bits", DEFAULT_PREC_BITS),
        digits=getattr(ns, "digits", DEFAULT_DIGITS),
        out=ns.out,
    )
    if ns.command == "tabulate":
        return CliConfig(target=ns.fn, fn=ns.fn, limit=ns.limit, format=ns.format, **common)
    if ns.command == "converge":
        return CliConfig(target=ns.identity, terms=ns.max_terms, stride=ns.stride, format="csv", **common)
    return CliConfig(
        target=ns.target,
        terms=ns.terms,
        x=getattr(ns, "x", None),
        fn=getattr(ns, "fn", None),
        variant=getattr(ns, "variant", None),
        f_file=getattr(ns, "f_file", None),
        growth_c=getattr(ns, "growth_c", None),
        format=ns.format,
        **common,
    )


# -- rendering -----------------------------------------------------------------


def _render(title: str, fields: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"check": title, **fields}, indent=2) + "\n"
    width = max(map(len, fields))
    lines = [f"== {title}"]
    for key, value in fields.items():
        if isinstance(value, bool):
            value = "PASS" if value else "FAIL"
        lines.append(f"{key.ljust(width)}  {value}")
    return "\n".join(lines) + "\n"


def _tabulate(cfg: CliConfig) -> tuple[str, bool]:
    table = arithfn.sieve_mobius(cfg.limit) if cfg.fn == "mu" else arithfn.sieve_totient(cfg.limit)
    if cfg.format == "json":
        return json.dumps({"kind": table.kind, "limit": table.limit, "values": list(table.values)}) + "\n", True
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", cfg.fn])
        w.writerows(enumerate(table.values, 1))
        return buf.getvalue(), True
    return "".join(f"{n}\t{v}\n" for n, v in enumerate(table.values, 1)), True


def _verify(cfg: CliConfig) -> tuple[str, bool]:
    ctx = cfg.ctx()
    d = cfg.digits
    if cfg.target == "lemma1":
        x = identities.EvalPoint.inverse_tau() if cfg.x == "1/tau" else identities.EvalPoint.rational(cfg.x)
        table = arithfn.sieve_totient(cfg.terms) if cfg.fn == "phi" else arithfn.sieve_mobius(cfg.terms)
        rep = identities.lemma1_sum(table, x, cfg.terms, ctx)
        return _render(f"{rep.identity.value} x={x}", rep.as_dict(d), cfg.format), rep.passed
    if cfg.target == "lemma2":
        pair = identities.lemma2_pair(cfg.terms, ctx)
        parts = [
            _render(pair.phi.identity.value, pair.phi.as_dict(d), cfg.format),
            _render(pair.mu.identity.value, pair.mu.as_dict(d), cfg.format),
            _render("lemma2_product", pair.product.as_dict(d), cfg.format),
        ]
        ok = pair.phi.passed and pair.mu.passed and pair.product.passed
        return _join(parts, cfg.format), ok
    if cfg.target == "theorem":
        rep = identities.theorem_product(cfg.terms, ctx)
        return _render(rep.identity.value, rep.as_dict(d), cfg.format), rep.passed
    if cfg.target == "special":
        chk = identities.special_exp_products(cfg.variant, cfg.x, cfg.terms, ctx)
        fields = {"variant": cfg.variant, "x": str(cfg.x), "terms": cfg.terms, **chk.as_dict(d)}
        return _render("special", fields, cfg.format), chk.passed
    if cfg.target == "general":
        table = arithfn.load_table(cfg.f_file)
        chk = identities.general_identity_check(table, cfg.x, cfg.terms, cfg.growth_c, ctx)
        fields = {"x": str(cfg.x), "terms": cfg.terms, "growth_c": str(cfg.growth_c), **chk.as_dict(d)}
        return _render("general", fields, cfg.format), chk.passed
    raise ValueError(f"unknown verify target {cfg.target!r}")


def _join(parts: list[str], fmt: str) -> str:
    if fmt == "json":
        return "[\n" + ",\n".join(p.rstrip("\n") for p in parts) + "\n]\n"
    return "\n".join(parts)


def emit_trace(identity: str, max_terms: int, stride: int, cfg: CliConfig) -> tuple[str, bool]:
    """CSV ``N,partial,abs_error,tail_bound`` for N = stride, 2*stride, ..."""
    ctx = PrecisionCtx.for_ops(cfg.precision_bits, max_terms)
    if identity == "theorem":
        reports = identities.theorem_product_trace(max_terms, stride, ctx)
    elif identity == "lemma2":
        reports = identities.lemma2_trace(max_terms, stride, ctx)
    else:
        raise ValueError(f"unknown trace identity {identity!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "partial", "abs_error", "tail_bound"])
    ok = True
    for rep in reports:
        ok &= rep.passed
        w.writerow([
            rep.terms_used,
            format_decimal(rep.partial, cfg.digits),
            format_decimal(rep.abs_diff, cfg.digits),
            format_decimal(rep.tail_bound, cfg.digits),
        ])
    return buf.getvalue(), ok


def run_command(cfg: CliConfig) -> int:
    try:
        if cfg.command == "tabulate":
            text, ok = _tabulate(cfg)
        elif cfg.command == "verify":
            text, ok = _verify(cfg)
        elif cfg.command == "converge":
            text, ok = emit_trace(cfg.target, cfg.terms, cfg.stride, cfg)
        else:
            raise ValueError(f"unknown command {cfg.command!r}")
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"goldprod: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        if cfg.out is not None:
            cfg.out.write_text(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"goldprod: error: cannot write {cfg.out}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK if ok else EXIT_FAIL


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run_command(cfg)


if __name__ == "__main__":
    sys.exit(main())
