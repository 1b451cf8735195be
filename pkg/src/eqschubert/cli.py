"""``schubert`` command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 failed
internal exact-arithmetic assertion.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import permutation as perm
from . import polyring
from .permutation import InvalidPermutation
from .polyring import NotDivisible

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _perm_arg(args, name: str):
    text = getattr(args, name)
    try:
        return perm.parse(text, args.n)
    except InvalidPermutation as exc:
        raise UsageError(f"--{name}: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _engine(args):
    from .dense import DenseEngine
    from .schubert import get_table

    table = get_table(args.n)
    if args.engine == "dense":
        return lambda u, v: DenseEngine(args.n, table=table).structure_constants(u, v)
    from .expand import structure_constants

    return lambda u, v: structure_constants(table, u, v)


def cmd_poly(args, out) -> int:
    from .schubert import get_table

    w = _perm_arg(args, "w")
    p = get_table(args.n)[w]
    if args.format == "pretty":
        out.write(f"{p}\n")
    else:
        out.write(_dump({"n": args.n, "w": list(w), "poly": polyring.to_json(p)}) + "\n")
    return EXIT_OK


def cmd_restrict(args, out) -> int:
    from .schubert import get_table, localize, opposite_restriction_vector

    v, w = _perm_arg(args, "v"), _perm_arg(args, "w")
    table = get_table(args.n)
    if args.opposite:
        value = opposite_restriction_vector(table, v)[w]
    else:
        value = localize(table, v, w)
    if args.format == "pretty":
        out.write(f"{value}\n")
    else:
        out.write(_dump({
            "n": args.n, "v": list(v), "w": list(w), "opposite": args.opposite,
            "value": polyring.to_json(value),
        }) + "\n")
    return EXIT_OK


def _expansion_data(args, u, v) -> dict:
    from .expand import expansion_to_json
    from .store import ExpansionStore, resolve_dir

    store = None if args.no_cache else ExpansionStore(resolve_dir(args.cache_dir))
    if store is not None:
        cached = store.get(args.n, u, v)
        if cached is not None:
            return cached
    data = expansion_to_json(_engine(args)(u, v))
    if store is not None:
        store.put(data)
    return data


def cmd_expand(args, out) -> int:
    from .positivity import to_alpha

    u, v = _perm_arg(args, "u"), _perm_arg(args, "v")
    data = _expansion_data(args, u, v)
    if args.format == "json":
        out.write(_dump(data) + "\n")
        return EXIT_OK
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["n", "u", "v", "w", "alpha_exponents", "coefficient"])
        for term in data["terms"]:
            alpha = to_alpha(polyring.from_json(term["coeff_t"]), args.n).poly
            for m, c in alpha.sorted_terms():
                exps = dict((var.index, e) for var, e in m)
                vec = ";".join(str(exps.get(i, 0)) for i in range(1, args.n))
                writer.writerow([args.n, _dump(list(u)), _dump(list(v)), _dump(term["w"]), vec, c])
        return EXIT_OK
    for term in data["terms"]:
        coeff = polyring.from_json(term["coeff_t"])
        alpha = to_alpha(coeff, args.n).poly
        out.write(f"{_dump(term['w'])}: {coeff}   [alpha: {alpha}]\n")
    return EXIT_OK


def cmd_dualcheck(args, out) -> int:
    from .expand import duality_constant, structure_constants
    from .schubert import get_table

    u, v = _perm_arg(args, "u"), _perm_arg(args, "v")
    table = get_table(args.n)
    targets = [_perm_arg(args, "w")] if args.w else list(perm.all_permutations(args.n))
    exp = structure_constants(table, u, v)
    rows, mismatches = [], 0
    for w in targets:
        solved = exp.coefficient(w)
        dual = duality_constant(table, u, v, w)
        agree = solved == dual
        mismatches += not agree
        rows.append({"w": list(w), "solve": polyring.to_json(solved),
                     "duality": polyring.to_json(dual), "agree": agree})
    if args.format == "pretty":
        for row in rows:
            mark = "ok" if row["agree"] else "MISMATCH"
            out.write(f"{_dump(row['w'])}: {polyring.from_json(row['solve'])}  {mark}\n")
        out.write(f"{len(rows) - mismatches}/{len(rows)} agree\n")
    else:
        out.write(_dump({"n": args.n, "u": list(u), "v": list(v), "checked": len(rows),
                         "mismatches": mismatches, "rows": rows}) + "\n")
    return EXIT_OK if mismatches == 0 else EXIT_FAIL


def cmd_verify(args, out) -> int:
    from .positivity import verify_all

    if args.n < 1:
        raise UsageError("--n must be >= 1")
    progress = None
    if args.progress:
        def progress(done, total):
            if done == total or done % 500 == 0:
                print(f"{done}/{total} pairs", file=sys.stderr)
    report = verify_all(
        args.n, jobs=args.jobs, engine=args.engine, sample_audit=args.sample_audit,
        progress=progress,
    )
    data = report.to_json()
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
    out.write(_dump(data) + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_selftest(args, out) -> int:
    from . import selftest

    return selftest.run(inject_fault=args.inject_fault, out=out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schubert", description=(
        "Equivariant Schubert structure constants in type A and their "
        "positivity in simple-root coordinates."))
    sub = parser.add_subparsers(dest="command", required=True)

    def rank(p):
        p.add_argument("--n", type=int, required=True, help="rank (permutations of 1..n)")

    def fmt(p, choices=("json", "pretty")):
        p.add_argument("--format", choices=choices, default="json")

    def engine(p):
        p.add_argument("--engine", choices=("dense", "reference"), default="dense",
                       help="dense kernels (default) or the pure-Python reference solve")

    p = sub.add_parser("poly", help="double Schubert polynomial of w")
    rank(p)
    p.add_argument("--w", required=True, help='permutation, e.g. "[2,1,3]"')
    fmt(p)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("restrict", help="restriction of the class of v to the fixed point w")
    rank(p)
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--opposite", action="store_true", help="use the opposite class of v")
    fmt(p)
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("expand", help="structure constants c_uv^w for all w")
    rank(p)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    fmt(p, ("json", "csv", "pretty"))
    p.add_argument("--cache-dir", default=None,
                   help="expansion cache (default $SCHUBERT_CACHE_DIR or .schubert-cache)")
    p.add_argument("--no-cache", action="store_true")
    engine(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("dualcheck", help="compare the duality pushforward with the triangular solve")
    rank(p)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--w", default=None, help="single target (default: every w)")
    fmt(p)
    p.set_defaults(func=cmd_dualcheck)

    p = sub.add_parser("verify", help="exhaustive positivity check for S_n")
    rank(p)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--sample-audit", action=argparse.BooleanOptionalAction, default=True,
                   help="recompute a 1%% sample of swapped pairs")
    p.add_argument("--report", default=None, help="also write the report JSON here")
    p.add_argument("--progress", action="store_true")
    engine(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="run the golden corpus")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv=None, out=None) -> int:
    from .positivity import NotTranslationInvariant, SweepAbort

    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "n", 1) < 1:
        print("schubert: error: --n must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"schubert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotDivisible, NotTranslationInvariant, SweepAbort) as exc:
        print(f"schubert: internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
