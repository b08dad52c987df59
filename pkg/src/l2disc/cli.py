"""Command-line interface.

Exit codes: 0 success, 1 domain or size error, 2 parse/IO/usage error,
3 internal consistency error (a claimed inequality or identity failed).

CSV outputs (all with a header row):
  haar --dump      j1,j2,m1,m2,mu,derivation
  census --csv     level,r,a_r   followed by a blank line and level,b0,b1,b2
  bounds --table   kappa,h,gamma,gamma_branch,delta
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from fractions import Fraction

from . import bounds, census, discrepancy, haar, pointset, verify
from .errors import ConsistencyError, DomainError, PointParseError, SizeLimitError


def fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return str(v)
    return f"{float(v):.12g}"


def _cmd_generate(args, out):
    if args.family == "hammersley":
        ps = pointset.hammersley(args.n if args.n is not None else 4)
    elif args.family == "fibonacci":
        ps = pointset.fibonacci_lattice(args.k if args.k is not None else 10, symmetrize=args.symmetrize)
    else:
        ps = pointset.random_uniform(args.n if args.n is not None else 16, args.seed)
    pointset.save(ps, args.out)
    print(f"wrote {ps.N} points to {args.out}", file=out)


def _cmd_l2(args, out):
    ps = pointset.load(args.inp)
    l2 = discrepancy.l2_squared(ps, exact=args.exact)
    print(f"N                {ps.N}", file=out)
    print(f"l2_squared       {fmt(l2)}", file=out)
    if args.exact:
        print(f"l2_squared_float {fmt(float(l2))}", file=out)
    print(f"l2               {fmt(math.sqrt(float(l2)))}", file=out)
    if ps.N >= 2:
        print(f"normalized_ratio {fmt(discrepancy.normalized_ratio(ps))}", file=out)
    if args.oracle_samples:
        est, se = discrepancy.l2_oracle(ps, args.oracle_samples, args.seed)
        print(f"oracle           {fmt(est)} +- {fmt(se)}", file=out)


def _cmd_haar(args, out):
    ps = pointset.load(args.inp)
    sums = haar.parseval_levels(ps, args.level)
    target = discrepancy.l2_squared(ps)
    print("level,parseval_partial,l2_squared,relative_gap", file=out)
    for lv, s in enumerate(sums):
        print(f"{lv},{fmt(s)},{fmt(target)},{fmt((target - s) / target)}", file=out)
    if args.dump:
        with open(args.dump, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["j1", "j2", "m1", "m2", "mu", "derivation"])
            for c in haar.coefficients(ps, args.level):
                w.writerow([c.box.shape.j1, c.box.shape.j2, c.box.m1, c.box.m2, fmt(c.value), c.derivation])


def _cmd_census(args, out):
    ps = pointset.load(args.inp)
    cells = census.CellIndex(ps)
    levels = [census.level_census(ps, lv, cells) for lv in range(args.level + 1)]
    rows = ["level,r,a_r"] + [f"{c.level},{r},{a}" for c in levels for r, a in c.counts.items()]
    rows += ["", "level,b0,b1,b2"] + [f"{c.level},{c.types[0]},{c.types[1]},{c.types[2]}" for c in levels if c.types]
    print("\n".join(rows), file=out)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("\n".join(rows) + "\n")
    checks = census.check_identities(ps, args.level)
    failed = [c for c in checks if not c.ok]
    print("", file=out)
    for name in sorted({c.name.split("(")[0] for c in checks}):
        group = [c for c in checks if c.name.split("(")[0] == name]
        status = "PASS" if all(c.ok for c in group) else "FAIL"
        print(f"{status} {name} ({len(group)} instances)", file=out)
    if failed:
        raise ConsistencyError(f"{len(failed)} census identities failed, first: {failed[0]}")


def _cmd_master(args, out):
    ps = pointset.load(args.inp)
    l2 = discrepancy.l2_squared(ps)
    t = census.master_terms(ps)
    hm = census.hm_rhs(ps)
    print(f"N                {ps.N}", file=out)
    print(f"M                {t.M}", file=out)
    print(f"kappa            {fmt(t.kappa)}", file=out)
    print(f"l2_squared       {fmt(l2)}", file=out)
    print(f"master_rhs       {fmt(t.total)}", file=out)
    print(f"  empty_boxes    {fmt(t.empty)}", file=out)
    print(f"  empty_tail     {fmt(t.tail)}", file=out)
    print(f"  bundles_M      {fmt(t.bundles_M)}", file=out)
    print(f"  bundles_M+1    {fmt(t.bundles_M1)}", file=out)
    print(f"theorem_floor    {fmt(t.theorem_floor)}", file=out)
    print(f"hm_rhs           {fmt(hm)}", file=out)
    ok = l2 >= t.total >= hm - 1e-12
    print(f"chain            {'PASS' if ok else 'FAIL'} l2 >= master >= hm (slack {fmt(l2 - t.total)}, {fmt(t.total - hm)})", file=out)
    if not ok:
        raise ConsistencyError("master inequality chain violated")


def _cmd_bounds(args, out):
    r = bounds.theorem_constants(grid=args.grid)
    print("\n".join(r.lines()), file=out)
    if args.table:
        with open(args.table, "w", newline="") as fh:
            bounds.write_kappa_table(bounds.kappa_table(args.table_grid), fh)


def _cmd_verify(args, out):
    failed = []
    for name, ok, detail in verify.run_all():
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=out)
        if not ok:
            failed.append(name)
    if failed:
        raise ConsistencyError(f"failed checks: {', '.join(failed)}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="l2disc", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a point-set file")
    g.add_argument("--family", choices=["hammersley", "fibonacci", "random"], required=True)
    g.add_argument("--n", type=int, help="hammersley exponent or random point count")
    g.add_argument("--k", type=int, help="Fibonacci index")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--symmetrize", action="store_true")
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_generate)

    l2 = sub.add_parser("l2", help="squared L2-discrepancy")
    l2.add_argument("--in", dest="inp", required=True)
    l2.add_argument("--exact", action="store_true")
    l2.add_argument("--oracle-samples", type=int, default=0)
    l2.add_argument("--seed", type=int, default=0)
    l2.set_defaults(func=_cmd_l2)

    h = sub.add_parser("haar", help="truncated Parseval sums and coefficient dump")
    h.add_argument("--in", dest="inp", required=True)
    h.add_argument("--level", type=int, required=True)
    h.add_argument("--dump", help="CSV: j1,j2,m1,m2,mu,derivation")
    h.set_defaults(func=_cmd_haar)

    c = sub.add_parser("census", help="occupancy and type counts with identity checks")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--level", type=int, required=True)
    c.add_argument("--csv", help="also write the two tables to this file")
    c.set_defaults(func=_cmd_census)

    m = sub.add_parser("master", help="bundled lower bound chain")
    m.add_argument("--in", dest="inp", required=True)
    m.set_defaults(func=_cmd_master)

    b = sub.add_parser("bounds", help="extremal constants of the lower bound")
    b.add_argument("--grid", type=int, default=4097)
    b.add_argument("--table", help="CSV: kappa,h,gamma,gamma_branch,delta")
    b.add_argument("--table-grid", type=int, default=401)
    b.set_defaults(func=_cmd_bounds)

    v = sub.add_parser("verify", help="run the property battery")
    v.set_defaults(func=_cmd_verify)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except ConsistencyError as exc:
        print(f"consistency error: {exc}", file=err)
        return 3
    except (PointParseError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except (DomainError, SizeLimitError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    return 0


def main():
    sys.exit(run())
