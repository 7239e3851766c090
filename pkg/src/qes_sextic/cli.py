"""Command-line front end: spectra, boundary tables, extrapolation, WKB constants, checks.

Every number is written as a fixed-point decimal with exactly ``--digits``
places after the point, rounded half-even from the exact binary value, so
identical options give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__
from .boundary import DISCRIMINANT_J_CAP, Method, find_critical_a_squared
from .errors import CapExceeded, NonConvergence, NoTransition, QesError, StiffnessFailure, TooShort
from .polynomial import mp_context
from .qes import QesProblem, Variant, qes_spectrum
from .richardson import SCHEMES, differences_sequence, estimate_limit, repeated_richardson
from .wkb import (
    asymptotic_energy,
    asymptotic_prefactor,
    beta_integral,
    factorization_from_b,
    quantization_integral,
    wkb_boundary_constant,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_NONCONVERGENCE = 3

STURM_J_CAP = 40
CACHE_VERSION = f"boundary-v1/{__version__}"
SCHEMA = "qes-sextic/{}/1"
# a_crit(J)^2 to 10 decimals is computed with this many extra digits so the
# rounding of the last printed place is decided correctly
GUARD_DIGITS = 6


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------- formatting

def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (float, str)):
        return Fraction(x)
    # read the raw binary value; mpmath.mpf(x) would round to the global context
    raw = x._mpf_ if hasattr(x, "_mpf_") else mpmath.mpf(x)._mpf_
    sign, man, exp, _ = raw
    if not man and exp:
        raise ValueError(f"cannot format non-finite value {x}")
    value = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -value if sign else value


def fixed(x, digits: int) -> str:
    """Half-even fixed-point rendering with exactly ``digits`` decimals."""
    q = _exact(x)
    with localcontext() as dctx:
        dctx.prec = 400
        d = Decimal(q.numerator) / Decimal(q.denominator)
        out = d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    text = f"{out:f}"
    if text.startswith("-") and Decimal(text) == 0:
        text = text[1:]
    return text


# ---------------------------------------------------------------- output

class Table:
    def __init__(self, command: str, columns: list, rows: list, config: dict, meta: dict | None = None):
        self.command = command
        self.columns = columns
        self.rows = rows
        self.config = config
        self.meta = meta or {}

    def csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buf.getvalue()

    def json(self) -> str:
        doc = {
            "schema": SCHEMA.format(self.command),
            "config": self.config,
            "rows": [dict(zip(self.columns, row)) for row in self.rows],
        }
        if self.meta:
            doc["meta"] = self.meta
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc}") from exc


def _render(table: Table, fmt: str) -> str:
    if fmt == "json":
        return table.json()
    if fmt == "csv":
        return table.csv()
    raise ConfigError(f"format {fmt!r} is not available for {table.command}")


# ---------------------------------------------------------------- cache

class BoundaryCache:
    """Plain JSON file mapping (J, digits, method, version) to a bracket."""

    def __init__(self, path: str | None):
        self.path = Path(path) if path else None
        self.data = {}
        if self.path and self.path.exists():
            try:
                self.data = json.loads(self.path.read_text(encoding="utf-8"))
            except (OSError, ValueError):
                self.data = {}

    @staticmethod
    def key(J: int, digits: int, method: Method) -> str:
        return f"{J}|{digits}|{method.value}|{CACHE_VERSION}"

    def get(self, J: int, digits: int, method: Method):
        hit = self.data.get(self.key(J, digits, method))
        if hit is None:
            return None
        ctx = mp_context(digits + 10)
        return ctx.mpf(hit["a_crit_sq"]), (ctx.mpf(hit["lo"]), ctx.mpf(hit["hi"]))

    def put(self, J: int, digits: int, method: Method, value, bracket) -> None:
        if self.path is None:
            return
        n = digits + 10
        self.data[self.key(J, digits, method)] = {
            "a_crit_sq": mpmath.nstr(value, n, strip_zeros=False),
            "lo": mpmath.nstr(bracket[0], n, strip_zeros=False),
            "hi": mpmath.nstr(bracket[1], n, strip_zeros=False),
        }
        self.path.write_text(json.dumps(self.data, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def boundary_values(J_values, digits: int, method: Method, cache: BoundaryCache) -> list:
    """a_crit(J)^2 for each J, accurate enough to print ``digits`` decimals."""
    target = digits + GUARD_DIGITS + 3  # relative width; values reach ~10^3
    out = []
    for J in J_values:
        hit = cache.get(J, target, method)
        if hit is None:
            b = find_critical_a_squared(J, target, method)
            value, bracket = b.a_crit_sq, b.bracket
            cache.put(J, target, method, value, bracket)
        else:
            value, bracket = hit
        out.append((J, value, bracket))
    return out


# ---------------------------------------------------------------- commands

def _check_digits(d: int) -> int:
    if not 1 <= d <= 60:
        raise ConfigError("--digits must be between 1 and 60")
    return d


def _check_J_max(J_max: int, method: Method) -> None:
    if J_max < 2:
        raise NoTransition(f"J={J_max}: no PT transition for J=1 (its only level E=-a is always real)")
    cap = DISCRIMINANT_J_CAP if method is Method.DISCRIMINANT_ROOT else STURM_J_CAP
    if J_max > cap:
        raise CapExceeded(f"--J-max {J_max} exceeds the cap {cap} for method {method.value}")


def cmd_spectrum(args) -> Table:
    digits = _check_digits(args.digits)
    variant = Variant(args.variant)
    if args.J is None or args.J < 1:
        raise ConfigError("--J must be a positive integer")
    if variant is Variant.HERMITIAN:
        if args.a not in (None, "0") or args.a2 not in (None, "0"):
            raise ConfigError("the Hermitian family has no parameter a")
        problem = QesProblem.hermitian(args.J)
    else:
        precision = max(30, digits + 15)
        ctx = mp_context(precision)
        if args.a is not None and args.a2 is not None:
            raise ConfigError("give --a or --a2, not both")
        if args.a2 is not None:
            t = ctx.mpf(args.a2)
            if t < 0:
                raise ConfigError("--a2 must be nonnegative")
            a = ctx.sqrt(t)
        else:
            a = ctx.mpf(args.a or 0)
        problem = QesProblem.pt(args.J, a)
    spec = qes_spectrum(problem, max(30, digits + 15), validate=False)
    rows = []
    for i, value in enumerate(spec.values()):
        rows.append([str(i), fixed(value.real, digits), fixed(value.imag, digits)])
    config = {"command": "spectrum", "J": args.J, "variant": variant.value, "a": args.a, "a2": args.a2, "digits": digits}
    return Table("spectrum", ["index", "re", "im"], rows, config)


def _table1_rows(args):
    digits = _check_digits(args.digits)
    method = Method(args.method)
    _check_J_max(args.J_max, method)
    cache = BoundaryCache(args.cache)
    return digits, method, boundary_values(range(2, args.J_max + 1), digits, method, cache)


def cmd_table1(args) -> Table:
    digits, method, values = _table1_rows(args)
    config = {"command": "table1", "J_max": args.J_max, "digits": digits, "method": method.value}
    if args.format == "plot-data":
        return _fig1(values, digits, config)
    rows, prev = [], None
    for J, value, _ in values:
        diff = "" if prev is None else fixed(value - prev, digits)
        rows.append([str(J), fixed(value, digits), diff])
        prev = value
    return Table("table1", ["J", "a_crit_sq", "difference"], rows, config)


class PlotData(Table):
    def text(self) -> str:
        lines = [
            "# differences a_crit(J+1)^2 - a_crit(J)^2 against 1/J",
            f"# reference_line y = {self.meta['reference_line']}",
            "# columns: inv_J difference",
        ]
        lines += [" ".join(row) for row in self.rows]
        return "\n".join(lines) + "\n"


def _fig1(values, digits: int, config: dict) -> PlotData:
    rows = []
    for (J, v, _), (_, w, _) in zip(values, values[1:]):
        rows.append([fixed(Fraction(1, J), digits), fixed(w - v, digits)])
    return PlotData("fig1", ["inv_J", "difference"], rows, config, {"reference_line": "12"})


def cmd_richardson(args) -> Table:
    digits, method, values = _table1_rows(args)
    if args.levels < 0:
        raise ConfigError("--levels must be >= 0")
    base = differences_sequence([w - v for (_, v, _), (_, w, _) in zip(values, values[1:])])
    config = {
        "command": "richardson", "J_max": args.J_max, "levels": args.levels, "digits": digits,
        "method": method.value, "scheme": args.scheme,
    }
    if args.levels == 0:
        rows = [[str(n), fixed(v, digits)] for n, v in base]
        return Table("richardson", ["n", "S"], rows, config)
    table = repeated_richardson(base, args.levels, "S", scheme=args.scheme)
    columns = ["n", "S"] + [f"R{r}" for r in range(1, args.levels + 1)]
    rows = []
    for n, s in base:
        row = [str(n), fixed(s, digits)]
        for r in range(1, args.levels + 1):
            try:
                row.append(fixed(table.value(r, n), digits))
            except KeyError:
                row.append("")
        rows.append(row)
    estimate, spread = estimate_limit(table)
    meta = {"limit": fixed(estimate, digits), "uncertainty": fixed(spread, digits)}
    rows.append(["limit", meta["limit"], meta["uncertainty"]] + [""] * (args.levels - 1))
    return Table("richardson", columns, rows, config, meta)


def cmd_wkb(args) -> Table:
    digits = _check_digits(args.digits)
    dps = max(40, digits + 20)
    ctx = mp_context(dps)
    b = wkb_boundary_constant(search_tolerance=min(1e-8, 10.0 ** -digits), dps=dps)
    fac = factorization_from_b(b, dps)
    F0 = asymptotic_prefactor(dps)
    rows = [
        ["b_sq", fixed(b * b, digits)],
        ["alpha", fixed(fac.alpha, digits)],
        ["beta", fixed(fac.beta, digits)],
        ["F", fixed(fac.F, digits)],
        ["F_closed_form", fixed(F0, digits)],
        ["quantization_integral", fixed(quantization_integral(-2 * ctx.sqrt(3), F0, dps=dps), digits)],
        ["two_pi", fixed(2 * ctx.pi, digits)],
        ["beta_integral", fixed(beta_integral(dps), digits)],
        ["three_pi_over_8", fixed(3 * ctx.pi / 8, digits)],
    ]
    if args.J is not None:
        rows.append([f"asymptotic_energy_J{args.J}", fixed(asymptotic_energy(args.J, dps), digits)])
    config = {"command": "wkb", "digits": digits, "J": args.J}
    return Table("wkb", ["quantity", "value"], rows, config)


def cmd_boundary(args) -> Table:
    digits = _check_digits(args.digits)
    method = Method(args.method)
    if args.J is None:
        raise ConfigError("--J is required")
    _check_J_max(args.J, method)
    [(J, value, (lo, hi))] = boundary_values([args.J], digits, method, BoundaryCache(args.cache))
    config = {"command": "boundary", "J": J, "digits": digits, "method": method.value}
    row = [str(J), fixed(value, digits), fixed(lo, digits + GUARD_DIGITS), fixed(hi, digits + GUARD_DIGITS)]
    return Table("boundary", ["J", "a_crit_sq", "lo", "hi"], [row], config)


def cmd_verify(args) -> Table:
    from .verify import run_checks

    checks = run_checks(args.scope, seed=args.seed)
    rows = [[c.name, "PASS" if c.passed else "FAIL", c.achieved, c.required] for c in checks]
    config = {"command": "verify", "scope": args.scope, "seed": args.seed}
    table = Table("verify", ["check", "status", "achieved", "required"], rows, config)
    table.failed = sum(1 for c in checks if not c.passed)
    return table


COMMANDS = {
    "spectrum": cmd_spectrum,
    "boundary": cmd_boundary,
    "table1": cmd_table1,
    "richardson": cmd_richardson,
    "wkb": cmd_wkb,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json", "plot-data"], default="csv")
    common.add_argument("--out", metavar="PATH", help="write here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--cache", metavar="PATH", help="JSON cache file for boundary values")

    parser = argparse.ArgumentParser(prog="qes-sextic", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="QES eigenvalues of one Hamiltonian")
    p.add_argument("--J", type=int, required=True)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="pt")
    p.add_argument("--a", help="potential parameter a (PT only)")
    p.add_argument("--a2", help="a^2, taking a = +sqrt(a2) (PT only)")
    p.add_argument("--digits", type=int, default=15)

    p = sub.add_parser("boundary", parents=[common], help="a_crit(J)^2 for one J")
    p.add_argument("--J", type=int, required=True)
    p.add_argument("--digits", type=int, default=10)
    p.add_argument("--method", choices=[m.value for m in Method], default="sturm")

    for name, text in (("table1", "critical values a_crit(J)^2 and differences"),
                       ("richardson", "Richardson extrapolants of the differences")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--J-max", dest="J_max", type=int, default=20)
        p.add_argument("--digits", type=int, default=10)
        p.add_argument("--method", choices=[m.value for m in Method], default="sturm")
        if name == "richardson":
            p.add_argument("--levels", type=int, default=1)
            p.add_argument("--scheme", choices=list(SCHEMES), default="repeated")

    p = sub.add_parser("wkb", parents=[common], help="WKB boundary constants")
    p.add_argument("--digits", type=int, default=12)
    p.add_argument("--J", type=int, help="also print the predicted extreme eigenvalue at this J")

    p = sub.add_parser("verify", parents=[common], help="golden and property checks")
    p.add_argument("--scope", choices=["all", "spectra", "boundary", "richardson", "wkb", "oracle"], default="all")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.format == "plot-data" and args.command != "table1":
            raise ConfigError("--format plot-data is only available for table1")
        table = COMMANDS[args.command](args)
        text = table.text() if isinstance(table, PlotData) else _render(table, args.format)
        _emit(text, args.out)
    except (ConfigError, NoTransition, CapExceeded, TooShort, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except (NonConvergence, StiffnessFailure) as exc:
        print(f"error: numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except QesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    if getattr(table, "failed", 0):
        return EXIT_VERIFY_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
