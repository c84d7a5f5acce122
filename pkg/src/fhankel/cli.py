"""Command-line front end.

    fhankel duality --weight hermite --N 100 --q 1 --mu 0
    fhankel converge --weight hermite --q 1 --mu 0 --N-list 50,100,200,400 --out conv.csv

Exit status: 0 on success, 1 on a numerical failure (or a failed check),
2 on bad arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction

import mpmath
from mpmath import mpf

from . import checks
from .asymptotics import boson_rho1_leading, ff_log
from .contour import I_quadrature, contour_pi_check, prop1_assemble
from .duality import calH_duality, lim_F_log
from .ensembles import SymbolSpec, WeightSpec
from .hankel_oracle import calH_oracle
from .mc import mc_expectation
from .numerics import DomainError, FHankelError, LogSigned, PrecisionContext, format_sci

PRECISION_ENV = "FHANKEL_PRECISION_BITS"
DEFAULT_BITS = 256


class ArgumentError(Exception):
    pass


# -- records --------------------------------------------------------------------

@dataclass
class ConvergenceRecord:
    weight_kind: str
    alpha: str
    m: int
    q: str
    mu: str
    N: int
    precision_bits: int
    log_calH_exact: object
    log_calH_ff: object
    rel_error: object

    @classmethod
    def from_spec(cls, spec: SymbolSpec, bits: int, exact, ff) -> "ConvergenceRecord":
        if exact is not None and ff is not None:
            with mpmath.mp.workprec(bits):
                rel = abs(mpmath.expm1(mpf(exact) - mpf(ff)))
        else:
            rel = mpf("nan")
        w = spec.weight
        return cls(
            w.kind,
            str(w.alpha) if not w.is_hermite else "0",
            spec.m,
            ";".join(str(x) for x in spec.q),
            ";".join(str(x) for x in spec.mu),
            w.N,
            bits,
            mpf("nan") if exact is None else exact,
            mpf("nan") if ff is None else ff,
            rel,
        )

    def spec(self) -> SymbolSpec:
        q = _parse_vector(self.q.replace(";", ","), "q", numeric_q=True) if self.q else ()
        mu = _parse_vector(self.mu.replace(";", ","), "mu") if self.mu else ()
        return SymbolSpec(WeightSpec(self.weight_kind, self.N, _alpha_value(self.alpha)), q, mu)

    def to_row(self) -> list:
        digits = max(int(self.precision_bits / 3.3), 17)
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            out.append(format_sci(v, digits) if f.name in ("log_calH_exact", "log_calH_ff", "rel_error") else str(v))
        return out

    @classmethod
    def from_row(cls, row: dict) -> "ConvergenceRecord":
        bits = int(row["precision_bits"])
        with mpmath.mp.workprec(bits + 16):
            nums = {k: mpf(row[k]) for k in ("log_calH_exact", "log_calH_ff", "rel_error")}
        return cls(
            row["weight_kind"], row["alpha"], int(row["m"]), row["q"], row["mu"], int(row["N"]), bits, **nums
        )


FIELDNAMES = [f.name for f in fields(ConvergenceRecord)]


def write_csv(records, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(FIELDNAMES)
    for r in sorted(records, key=lambda r: r.N):
        w.writerow(r.to_row())


def read_csv(stream) -> list:
    reader = csv.DictReader(stream)
    if reader.fieldnames != FIELDNAMES:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [ConvergenceRecord.from_row(row) for row in reader]


# -- argument parsing ---------------------------------------------------------------

def _number_token(tok: str, name: str):
    tok = tok.strip()
    try:
        if "/" in tok:
            return Fraction(tok)
        mpf(tok)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ArgumentError(f"--{name}: cannot parse {tok!r} as a number")
    return tok


def _parse_vector(text, name: str, numeric_q: bool = False) -> tuple:
    if text is None:
        raise ArgumentError(f"--{name} is required")
    out = []
    for tok in str(text).split(","):
        if not tok.strip():
            raise ArgumentError(f"--{name}: empty entry in {text!r}")
        v = _number_token(tok, name)
        if numeric_q and isinstance(v, str):
            try:
                v = int(v)
            except ValueError:
                pass
        out.append(v)
    return tuple(out)


def _alpha_value(text):
    v = _number_token(str(text), "alpha")
    if isinstance(v, str):
        try:
            return int(v)
        except ValueError:
            return v
    return v


def _default_bits() -> int:
    env = os.environ.get(PRECISION_ENV)
    if env is None:
        return DEFAULT_BITS
    try:
        return int(env)
    except ValueError:
        raise ArgumentError(f"{PRECISION_ENV}={env!r} is not an integer")


def _Ns(args) -> list:
    if args.N is not None and args.N_list is not None:
        raise ArgumentError("give either --N or --N-list, not both")
    if args.N_list is not None:
        try:
            Ns = [int(x) for x in args.N_list.split(",")]
        except ValueError:
            raise ArgumentError(f"--N-list: cannot parse {args.N_list!r}")
    elif args.N is not None:
        Ns = [args.N]
    else:
        raise ArgumentError("--N or --N-list is required")
    if any(N < 1 for N in Ns):
        raise ArgumentError("N must be positive")
    return sorted(Ns)


def _specs(args) -> list:
    q = _parse_vector(args.q, "q", numeric_q=True)
    mu = _parse_vector(args.mu, "mu")
    if len(q) != len(mu):
        raise ArgumentError("--q and --mu must have the same number of entries")
    alpha = _alpha_value(args.alpha)
    return [SymbolSpec(WeightSpec(args.weight, N, alpha), q, mu) for N in _Ns(args)]


def _ctx(args) -> PrecisionContext:
    bits = args.precision_bits if args.precision_bits is not None else _default_bits()
    if bits < 64:
        raise ArgumentError("--precision-bits must be at least 64")
    return PrecisionContext(bits)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--weight", choices=["hermite", "laguerre"], default="hermite")
    p.add_argument("--alpha", default="0", help="Laguerre exponent (> -1)")
    p.add_argument("--N", type=int)
    p.add_argument("--N-list", dest="N_list", help="comma-separated N values")
    p.add_argument("--q", help="comma-separated exponents")
    p.add_argument("--mu", help="comma-separated singularity locations")
    p.add_argument("--precision-bits", dest="precision_bits", type=int, help=f"default {DEFAULT_BITS} or ${PRECISION_ENV}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--out", help="write CSV to this path instead of stdout")
    p.add_argument("--format", choices=["csv", "text"], default="text")
    p.add_argument("--log10", action="store_true", help="report logarithms in base 10")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for converge")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fhankel", description="Hankel determinants with Fisher-Hartwig symbols")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "exact": "ratio from moment determinants",
        "duality": "ratio from the confluent duality determinant",
        "ff": "leading large-N formula",
        "converge": "exact vs asymptotic over an N grid",
        "contour-check": "dual contour integral vs the duality determinant",
        "mc": "GUE Monte Carlo vs the exact expectation",
        "density-matrix": "leading one-body density matrix of trapped impenetrable bosons",
        "selfcheck": "run the acceptance checks",
    }
    for name, h in helps.items():
        _common(sub.add_parser(name, help=h))
    return parser


# -- output ---------------------------------------------------------------------------

class _Out:
    def __init__(self, args, bits):
        self.args = args
        self.digits = max(int(bits / 3.3), 17)

    def log(self, x) -> str:
        with mpmath.mp.workprec(int(self.digits * 3.4) + 16):
            x = mpf(x)
            if self.args.log10:
                x = x / mpmath.log(10)
            return format_sci(x, self.digits)

    def log_name(self, name: str) -> str:
        return f"log10_{name}" if self.args.log10 else f"log_{name}"

    def value(self, ls: LogSigned) -> str:
        if ls.sign == 0:
            return "0"
        with mpmath.mp.workprec(int(self.digits * 3.4) + 16):
            m = ls.log_mag / mpmath.log(10)
            e = int(mpmath.floor(m))
            mant = ls.sign * mpmath.power(10, m - e)
            return f"{mpmath.nstr(mant, self.digits, strip_zeros=False)}e{e:+d}"


def _emit_records(args, records):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(records, fh)
    elif args.format == "csv":
        write_csv(records, sys.stdout)


def _describe(spec: SymbolSpec) -> str:
    w = spec.weight
    a = f" alpha={w.alpha}" if not w.is_hermite else ""
    return f"{w.kind}{a} N={w.N} q=({','.join(map(str, spec.q))}) mu=({','.join(map(str, spec.mu))})"


def _ff_or_none(spec, ctx):
    try:
        return ff_log(spec, ctx).log_value.log_mag
    except DomainError:
        return None


def _cmd_exact_like(args, route):
    ctx = _ctx(args)
    out = _Out(args, ctx.bits)
    records = []
    for spec in _specs(args):
        val = route(spec, ctx)
        ff = _ff_or_none(spec, ctx)
        records.append(ConvergenceRecord.from_spec(spec, ctx.bits, val.log_mag, ff))
        if args.format == "text":
            print(_describe(spec))
            print(f"  {out.log_name('calH')} = {out.log(val.log_mag)}")
            print(f"  calH = {out.value(val)}")
    _emit_records(args, records)
    return 0


def _cmd_ff(args):
    ctx = _ctx(args)
    out = _Out(args, ctx.bits)
    records = []
    for spec in _specs(args):
        res = ff_log(spec, ctx)
        records.append(ConvergenceRecord.from_spec(spec, ctx.bits, None, res.log_value.log_mag))
        if args.format == "text":
            print(_describe(spec))
            print(f"  {out.log_name('calH_ff')} = {out.log(res.log_value.log_mag)}")
            print(f"  calH_ff = {out.value(res.log_value)}")
            print(f"  N exponent = {mpmath.nstr(res.n_exponent, 17)}")
            for k, v in res.per_factor_logs.items():
                print(f"  {k} factor: {out.log(v)}")
    _emit_records(args, records)
    return 0


def _converge_point(payload):
    spec, bits = payload
    ctx = PrecisionContext(bits)
    exact = calH_duality(spec, ctx).log_mag
    ff = ff_log(spec, ctx).log_value.log_mag
    return ConvergenceRecord.from_spec(spec, bits, exact, ff)


def _cmd_converge(args):
    ctx = _ctx(args)
    out = _Out(args, ctx.bits)
    specs = _specs(args)
    payloads = [(s, ctx.bits) for s in specs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_converge_point, payloads))
    else:
        records = [_converge_point(p) for p in payloads]
    records.sort(key=lambda r: r.N)
    if args.format == "text" and not args.out:
        print(f"{'N':>6}  {out.log_name('calH_exact'):>28}  {out.log_name('calH_ff'):>28}  rel_error")
        prev = None
        for r in records:
            ratio = "" if prev is None or prev == 0 else f"  (ratio {mpmath.nstr(r.rel_error / prev, 4)})"
            print(f"{r.N:>6}  {mpmath.nstr(out_log(out, r.log_calH_exact), 20):>28}  "
                  f"{mpmath.nstr(out_log(out, r.log_calH_ff), 20):>28}  {mpmath.nstr(r.rel_error, 6)}{ratio}")
            prev = r.rel_error
    _emit_records(args, records)
    return 0


def out_log(out: _Out, x):
    with mpmath.mp.workprec(96):
        return mpf(x) / mpmath.log(10) if out.args.log10 else +mpf(x)


def _cmd_contour(args):
    ctx = _ctx(args)
    failed = False
    for spec in _specs(args):
        res = I_quadrature(spec, ctx=ctx)
        a = prop1_assemble(spec, res, ctx)
        b = calH_duality(spec, ctx)
        with ctx.workprec():
            rel = abs(mpmath.expm1(a.log_mag - b.log_mag)) if a.sign == b.sign else mpf("inf")
        pis = [contour_pi_check(spec.weight, j, x, ctx=ctx) for x in spec.mu for j in (1, 2)]
        ok = rel < 1e-8 and max(pis) < 1e-10 and res.imag_residue < 1e-8
        failed |= not ok
        print(_describe(spec))
        print(f"  I = {mpmath.nstr(res.value, 15)}  ({res.nodes} nodes, {res.doublings} doublings, {res.bits_used} bits)")
        print(f"  imaginary residue = {mpmath.nstr(res.imag_residue, 3)}")
        print(f"  contour vs duality: rel {mpmath.nstr(rel, 3)}")
        print(f"  polynomial contour check: max rel {mpmath.nstr(max(pis), 3)}")
        print(f"  {'ok' if ok else 'MISMATCH'}")
    return 1 if failed else 0


def _cmd_mc(args):
    ctx = _ctx(args)
    if args.samples < 1:
        raise ArgumentError("--samples must be positive")
    rows = []
    for spec in _specs(args):
        mean, se = mc_expectation(spec, args.samples, args.seed)
        ref = float(lim_F_log(spec, ctx).value()) if spec.is_integer_q() else math.nan
        z = (mean - ref) / se if se > 0 else (0.0 if mean == ref else math.inf)
        rows.append((spec, mean, se, ref, z))
    header = ["N", "q", "mu", "samples", "seed", "mean", "stderr", "reference", "z_score"]
    table = [
        [s.weight.N, ";".join(map(str, s.q)), ";".join(map(str, s.mu)), args.samples, args.seed,
         f"{m:.17e}", f"{e:.17e}", f"{r:.17e}", f"{z:.6f}"]
        for s, m, e, r, z in rows
    ]
    if args.out or args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(table)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
        else:
            sys.stdout.write(buf.getvalue())
    if args.format == "text":
        for s, m, e, r, z in rows:
            print(_describe(s))
            print(f"  mean = {m:.8e} +- {e:.2e}  reference = {r:.8e}  z = {z:+.2f}  (seed {args.seed})")
    return 0


def _cmd_density(args):
    ctx = _ctx(args)
    out = _Out(args, ctx.bits)
    mu = _parse_vector(args.mu, "mu")
    if len(mu) != 2:
        raise ArgumentError("density-matrix needs --mu x,y")
    for N in _Ns(args):
        val = boson_rho1_leading(N, mu[0], mu[1], ctx)
        print(f"N={N} x={mu[0]} y={mu[1]}")
        print(f"  {out.log_name('rho1')} = {out.log(val.log_mag)}")
        print(f"  rho1 = {out.value(val)}")
    return 0


def _cmd_selfcheck(args):
    results = checks.run_all(print)
    failed = [r.key for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    return 1 if failed else 0


COMMANDS = {
    "exact": lambda a: _cmd_exact_like(a, calH_oracle),
    "duality": lambda a: _cmd_exact_like(a, calH_duality),
    "ff": _cmd_ff,
    "converge": _cmd_converge,
    "contour-check": _cmd_contour,
    "mc": _cmd_mc,
    "density-matrix": _cmd_density,
    "selfcheck": _cmd_selfcheck,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return COMMANDS[args.command](args)
    except (ArgumentError, DomainError) as exc:
        print(f"fhankel: error: {exc}", file=sys.stderr)
        return 2
    except FHankelError as exc:
        print(f"fhankel: numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"fhankel: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
