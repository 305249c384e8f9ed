"""Command-line verification runner, S^6 field scanner, and expression evaluator.

Exit codes: 0 all checks pass, 1 check failure, 2 bad configuration or
expression, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .multivector import EXACT, AlgebraError, Multivector, format_multivector
from .spinor import rep
from .suites import SUITES, ConfigError, SuiteConfig, report_json, report_text, run, scan_s6_csv

_TOKEN_RE = re.compile(r"\s*(rep|\d+\.\d+|\d+|e\d+|[()+\-*/^~!])")


class ExprError(ValueError):
    pass


class _Parser:
    """Recursive-descent parser for multivector expressions.

    Grammar: + and - bind loosest, then ^ (wedge), then * (geometric
    product) and / (scalar division); ~ (reversion), ! (grade involution)
    and unary - bind tightest.  rep(...) turns an expression into its
    16x16 spinor matrix and is only allowed as the whole expression.
    """

    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m:
                if text[pos:].strip():
                    raise ExprError(f"bad token at {text[pos:]!r}")
                break
            self.tokens.append(m.group(1))
            pos = m.end()
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ExprError("unexpected end of expression")
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise ExprError(f"expected {tok!r}, got {got!r}")

    def parse(self):
        if self.peek() == "rep":
            self.next()
            self.expect("(")
            inner = self.parse_sum()
            self.expect(")")
            if self.peek() is not None:
                raise ExprError("rep(...) cannot be combined with operators")
            return rep(inner)
        out = self.parse_sum()
        if self.peek() is not None:
            raise ExprError(f"trailing input at {self.peek()!r}")
        return out

    def parse_sum(self):
        out = self.parse_wedge()
        while self.peek() in ("+", "-"):
            op = self.next()
            rhs = self.parse_wedge()
            out = out + rhs if op == "+" else out - rhs
        return out

    def parse_wedge(self):
        out = self.parse_product()
        while self.peek() == "^":
            self.next()
            out = out.wedge(self.parse_product())
        return out

    def parse_product(self):
        out = self.parse_unary()
        while self.peek() in ("*", "/"):
            op = self.next()
            rhs = self.parse_unary()
            if op == "*":
                out = out * rhs
            else:
                if rhs.grades() not in ([], [0]):
                    raise ExprError("division only by scalars")
                value = rhs.scalar_part()
                if value == 0:
                    raise ExprError("division by zero")
                out = out / value
        return out

    def parse_unary(self):
        tok = self.peek()
        if tok == "-":
            self.next()
            return -self.parse_unary()
        if tok == "~":
            self.next()
            return self.parse_unary().reverse()
        if tok == "!":
            self.next()
            return self.parse_unary().involute()
        return self.parse_atom()

    def parse_atom(self):
        tok = self.next()
        if tok == "(":
            out = self.parse_sum()
            self.expect(")")
            return out
        if re.fullmatch(r"\d+(\.\d+)?", tok):
            return Multivector.scalar(Fraction(tok))
        if re.fullmatch(r"e\d+", tok):
            indices = []
            prev = 0
            for ch in tok[1:]:
                i = int(ch)
                if i == 0 or i <= prev or i > 8:
                    raise ExprError(f"bad blade {tok!r}")
                indices.append(i)
                prev = i
            return Multivector.blade(indices)
        raise ExprError(f"unexpected token {tok!r}")


def eval_expr(text: str) -> str:
    """Evaluate a multivector expression to canonical text (exact arithmetic)."""
    result = _Parser(text).parse()
    if isinstance(result, Multivector):
        return format_multivector(result)
    return "\n".join(" ".join(str(x) for x in row) for row in result)


def _parse_tolerances(pairs):
    out = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ConfigError(f"--tol expects name=value, got {pair!r}")
        name, _, value = pair.partition("=")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value in {pair!r}") from exc
    return out


def _build_argparser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="g28twistor",
        description="verify the Cl(8)/G(2,8) twistor construction")
    sub = top.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=SUITES)
    pv.add_argument("--seed", type=int, default=42)
    pv.add_argument("--samples", type=int, default=100)
    pv.add_argument("--fd-step", type=float, default=1e-5)
    pv.add_argument("--tol", action="append", metavar="NAME=X",
                    help="override a named tolerance (repeatable)")
    pv.add_argument("--format", choices=("text", "json"), default="text")
    pv.add_argument("--section", default=None,
                    help="restrict s6-sections to one registered section")

    ps = sub.add_parser("scan-s6", help="CSV field scan of a section over S^6")
    ps.add_argument("--section", required=True)
    ps.add_argument("--samples", type=int, default=100)
    ps.add_argument("--seed", type=int, default=42)
    ps.add_argument("--fd-step", type=float, default=1e-5)
    ps.add_argument("--out", default=None, help="output file (default stdout)")

    pe = sub.add_parser("eval", help="evaluate a multivector expression")
    pe.add_argument("expr")
    return top


def main(argv=None) -> int:
    parser = _build_argparser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        if args.command == "eval":
            try:
                print(eval_expr(args.expr))
                return 0
            except (ExprError, AlgebraError) as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2

        if args.command == "verify":
            cfg = SuiteConfig(suite=args.suite, seed=args.seed,
                              samples=args.samples, fd_step=args.fd_step,
                              tolerances=_parse_tolerances(args.tol),
                              fmt=args.format, section=args.section)
            records, code = run(cfg)
            if cfg.fmt == "json":
                print(json.dumps(report_json(cfg, records), indent=2))
            else:
                print(report_text(cfg, records))
            return code

        if args.command == "scan-s6":
            cfg = SuiteConfig(suite="s6-sections", seed=args.seed,
                              samples=args.samples, fd_step=args.fd_step,
                              section=args.section)
            lines = scan_s6_csv(cfg)
            if args.out:
                with open(args.out, "w") as fh:
                    for line in lines:
                        fh.write(line + "\n")
            else:
                for line in lines:
                    print(line)
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:   # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
