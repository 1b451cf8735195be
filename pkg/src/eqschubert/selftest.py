"""Golden-corpus self test.

The corpus (``data/golden.json``) holds hand-derived values for small ranks.
Every case is recomputed and compared in canonical form; the n = 3 duality
oracle is then checked against the triangular solve on all 216 triples.
Output contains no timing, so repeated runs are byte-identical.
"""

from __future__ import annotations

import json
from importlib import resources

from . import permutation as perm
from . import polyring
from .expand import duality_constant, pushforward, structure_constants
from .polyring import NotDivisible, Polynomial, VariableRef, parse
from .positivity import is_graham_positive, to_alpha, verify_all
from .schubert import (
    RestrictionVector,
    divided_difference,
    get_table,
    localize,
    opposite_restriction_vector,
    restriction_vector,
)


def load_corpus() -> list[dict]:
    text = resources.files("eqschubert").joinpath("data/golden.json").read_text()
    return json.loads(text)


def _canon(p: Polynomial) -> str:
    return json.dumps(polyring.to_json(p))


def _canon_expect(value):
    if isinstance(value, str):
        return _canon(parse(value))
    return value


def _var(text: str) -> VariableRef:
    (m, _), = parse(text).terms.items()
    return m[0][0]


def _vector_canon(vec: RestrictionVector) -> dict:
    return {json.dumps(list(w), separators=(",", ":")): _canon(p) for w, p in vec.values.items()}


def _map_canon(mapping: dict, perms=None) -> dict:
    return {k.replace(" ", ""): _canon(parse(v)) for k, v in mapping.items()}


def _run_case(case: dict):
    """Return (computed, expected) in comparable canonical form."""
    op, args, expect = case["op"], case["args"], case["expect"]
    if op == "compose":
        return list(perm.compose(tuple(args["u"]), tuple(args["v"]))), expect
    if op == "inverse":
        return list(perm.inverse(tuple(args["w"]))), expect
    if op == "descents":
        return sorted(perm.descents(tuple(args["w"]))), expect
    if op == "rank_function":
        return perm.rank_function(tuple(args["w"]), args["p"], args["q"]), expect
    if op == "bruhat_leq":
        return perm.bruhat_leq(tuple(args["u"]), tuple(args["w"])), expect
    if op == "mul":
        return _canon(parse(args["p"]) * parse(args["q"])), _canon_expect(expect)
    if op == "substitute":
        assign = {_var(k): parse(v) for k, v in args["assign"].items()}
        return _canon(parse(args["p"]).substitute(assign)), _canon_expect(expect)
    if op == "divide_linear":
        try:
            got = _canon(polyring.exact_divide_linear(parse(args["p"]), _var(args["a"]), _var(args["b"])))
        except NotDivisible:
            got = {"error": "NotDivisible"}
        return got, _canon_expect(expect)
    if op == "is_homogeneous":
        return parse(args["p"]).is_homogeneous(args["d"]), expect
    if op == "divided_difference":
        return _canon(divided_difference(args["i"], parse(args["p"]))), _canon_expect(expect)

    table = get_table(args["n"]) if "n" in args else None
    if op == "schubert_poly":
        return _canon(table[tuple(args["w"])]), _canon_expect(expect)
    if op == "localize":
        return _canon(localize(table, tuple(args["v"]), tuple(args["w"]))), _canon_expect(expect)
    if op == "restriction_vector":
        return _vector_canon(restriction_vector(table, tuple(args["v"]))), _map_canon(expect)
    if op == "opposite_restriction_vector":
        return _vector_canon(opposite_restriction_vector(table, tuple(args["v"]))), _map_canon(expect)
    if op == "opposite_value":
        vec = opposite_restriction_vector(table, tuple(args["v"]))
        return _canon(vec[tuple(args["w"])]), _canon_expect(expect)
    if op == "structure_constants":
        from .dense import DenseEngine

        u, v = tuple(args["u"]), tuple(args["v"])
        ref = structure_constants(table, u, v)
        fast = DenseEngine(table.n, table=table).structure_constants(u, v)
        got = {json.dumps(list(w), separators=(",", ":")): _canon(c) for w, c in ref.sorted_items()}
        if fast.coefficients != ref.coefficients:
            got = {"error": "dense and reference engines disagree"}
        return got, _map_canon(expect)
    if op == "pushforward":
        kind = args["vector"]
        if kind == "ones":
            vec = RestrictionVector.constant(table.n)
        elif kind == "schubert":
            vec = restriction_vector(table, tuple(args["v"]))
        else:
            vec = opposite_restriction_vector(table, tuple(args["v"]))
        return _canon(pushforward(vec)), _canon_expect(expect)
    if op == "duality_constant":
        c = duality_constant(table, tuple(args["u"]), tuple(args["v"]), tuple(args["w"]))
        return _canon(c), _canon_expect(expect)
    if op == "to_alpha":
        return _canon(to_alpha(parse(args["p"]), args["n"]).poly), _canon_expect(expect)
    if op == "graham_positive":
        ok, cert = is_graham_positive(parse(args["p"]))
        got = {"positive": ok}
        want = {"positive": expect["positive"]}
        if not ok:
            got["negative"] = _canon(Polynomial(dict(cert.terms)))
            want["negative"] = _canon_expect(expect["negative"])
        return got, want
    if op == "verify":
        n = args["n"]
        report = verify_all(n, jobs=1, sample_audit=False)
        data = report.to_json(timing=False)
        got = {k: data[k] for k in expect if k != "constant"}
        want = {k: v for k, v in expect.items() if k != "constant"}
        if "constant" in expect:
            spec = expect["constant"]
            exp = structure_constants(get_table(n), tuple(spec["u"]), tuple(spec["v"]))
            got["constant"] = _canon(to_alpha(exp.coefficient(tuple(spec["w"])), n).poly)
            want["constant"] = _canon_expect(spec["alpha"])
        return got, want
    raise ValueError(f"unknown golden op {op!r}")


def _flip_alpha1(value):
    """Corrupt a corpus value by alpha_1 -> -alpha_1 (negative control)."""
    if isinstance(value, str) and "a_" in value:
        return str(parse(value).substitute({VariableRef("A", 1): -polyring.alpha(1)}))
    if isinstance(value, dict):
        return {k: _flip_alpha1(v) for k, v in value.items()}
    return value


def oracle_agreement(n: int = 3) -> tuple[int, list]:
    """Compare duality_constant with the triangular solve on all triples."""
    table = get_table(n)
    perms = perm.all_permutations(n)
    mismatches = []
    checked = 0
    for u in perms:
        for v in perms:
            exp = structure_constants(table, u, v)
            for w in perms:
                checked += 1
                if duality_constant(table, u, v, w) != exp.coefficient(w):
                    mismatches.append([list(u), list(v), list(w)])
    return checked, mismatches


def run(inject_fault: bool = False, out=None) -> int:
    """Run the corpus, writing one line per check to ``out``; return the
    exit code (0 when everything passes)."""
    import sys

    out = out or sys.stdout
    corpus = load_corpus()
    if inject_fault:
        corpus = [dict(case, expect=_flip_alpha1(case["expect"])) for case in corpus]
    failures = 0
    for case in corpus:
        try:
            got, want = _run_case(case)
            ok = got == want
            detail = "" if ok else f" got={json.dumps(got)} expected={json.dumps(want)}"
        except Exception as exc:  # reported, never raised
            ok, detail = False, f" error={type(exc).__name__}: {exc}"
        failures += not ok
        out.write(f"{'PASS' if ok else 'FAIL'} {case['id']}{detail}\n")
    checked, mismatches = oracle_agreement(3)
    ok = not mismatches
    failures += not ok
    out.write(f"{'PASS' if ok else 'FAIL'} oracle.duality-n3 triples={checked} mismatches={len(mismatches)}\n")
    total = len(corpus) + 1
    out.write(f"selftest: {total - failures}/{total} passed\n")
    return 0 if failures == 0 else 1
