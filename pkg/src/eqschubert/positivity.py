"""Simple-root coordinates and positivity sweeps.

The identification is alpha_i = t_{i+1} - t_i, so t_i - t_1 becomes
alpha_1 + ... + alpha_{i-1}.  A structure constant is positive when all of its
coefficients in these coordinates are nonnegative.
"""

from __future__ import annotations

import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import permutation as perm
from .permutation import Permutation
from .polyring import A, NotDivisible, Polynomial, T, alpha, const, substitute, t
from . import polyring


class NotTranslationInvariant(ValueError):
    """The polynomial is not a polynomial in the differences t_j - t_i."""


class SweepAbort(RuntimeError):
    """An exact-division or invariance check failed during a sweep."""

    def __init__(self, u, v, cause: Exception):
        self.u, self.v, self.cause = u, v, cause
        super().__init__(f"u={list(u)}, v={list(v)}: {type(cause).__name__}: {cause}")


@dataclass(frozen=True)
class AlphaPolynomial:
    poly: Polynomial
    n: int

    def __post_init__(self):
        for var in self.poly.variables():
            if var.alphabet != "A" or not 1 <= var.index < self.n:
                raise ValueError(f"{var} is not one of alpha_1..alpha_{self.n - 1}")


def _check_t_only(p: Polynomial, n: int) -> None:
    for var in p.variables():
        if var.alphabet != "T" or not 1 <= var.index <= n:
            raise NotTranslationInvariant(f"{var} is not one of t_1..t_{n}")


def is_translation_invariant(p: Polynomial, n: int) -> bool:
    """Compare p(t) with p(t + s), s being the spare variable t_{n+1}."""
    _check_t_only(p, n)
    shifted = substitute(p, {T(i): t(i) + t(n + 1) for i in range(1, n + 1)})
    return shifted == p


def alpha_substitution(n: int) -> dict:
    out = {T(1): const(0)}
    acc = Polynomial()
    for i in range(2, n + 1):
        acc = acc + alpha(i - 1)
        out[T(i)] = acc
    return out


def from_alpha(a: AlphaPolynomial | Polynomial, n: int | None = None) -> Polynomial:
    """alpha_i -> t_{i+1} - t_i."""
    if isinstance(a, AlphaPolynomial):
        p, n = a.poly, a.n
    else:
        p = a
    return substitute(p, {A(i): t(i + 1) - t(i) for i in range(1, n)})


def to_alpha(p: Polynomial, n: int) -> AlphaPolynomial:
    if not is_translation_invariant(p, n):
        raise NotTranslationInvariant(f"{p} is not a polynomial in the differences t_j - t_i")
    return AlphaPolynomial(substitute(p, alpha_substitution(n)), n)


@dataclass
class Certificate:
    positive: bool
    # every term when positive, only the negative terms otherwise
    terms: list[tuple[tuple, int]]

    def to_json(self) -> dict:
        return {
            "positive": self.positive,
            "terms": polyring.to_json(Polynomial(dict(self.terms))),
        }


def is_graham_positive(a: AlphaPolynomial | Polynomial) -> tuple[bool, Certificate]:
    poly = a.poly if isinstance(a, AlphaPolynomial) else a
    terms = poly.sorted_terms()
    negative = [(m, c) for m, c in terms if c < 0]
    if negative:
        return False, Certificate(False, negative)
    return True, Certificate(True, terms)


# sweeps


@dataclass
class Violation:
    u: Permutation
    v: Permutation
    w: Permutation
    monomial: list
    coefficient: int
    constant: Polynomial  # the full coefficient in alpha coordinates

    def to_json(self) -> dict:
        _, cert = is_graham_positive(self.constant)
        return {
            "u": list(self.u),
            "v": list(self.v),
            "w": list(self.w),
            "monomial": self.monomial,
            "coefficient": str(self.coefficient),
            "alpha_polynomial": polyring.to_json(self.constant),
            "certificate": cert.to_json(),
        }


@dataclass
class PositivityReport:
    n: int
    pairs_checked: int = 0
    nonzero_constants: int = 0
    all_positive: bool = True
    violations: list[Violation] = field(default_factory=list)
    max_coefficient: int = 0
    elapsed: float = 0.0
    engine: str = "dense"
    audit_pairs: int = 0
    audit_mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.all_positive and not self.audit_mismatches

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "n": self.n,
            "pairs_checked": self.pairs_checked,
            "nonzero_constants": self.nonzero_constants,
            "all_positive": self.all_positive,
            "violations": [v.to_json() for v in self.violations],
            "max_coefficient": str(self.max_coefficient),
            "engine": self.engine,
            "audit_pairs": self.audit_pairs,
            "audit_mismatches": self.audit_mismatches,
        }
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def _mono_json(m) -> list:
    return [[var.alphabet, var.index, e] for var, e in m]


@dataclass
class PairResult:
    index: int
    nonzero: int
    max_coefficient: int
    violations: list


class _Worker:
    """Per-process state: the table and, for the dense engine, its kernels."""

    def __init__(self, n: int, engine: str, backend: str | None):
        from .schubert import get_table

        self.n = n
        self.engine = engine
        self.table = get_table(n)
        self.dense = None
        if engine == "dense":
            from .dense import DenseEngine

            self.dense = DenseEngine(n, backend, self.table)

    def coefficients_alpha(self, u, v) -> dict[Permutation, Polynomial]:
        """Structure constants of (u, v) in alpha coordinates, exact."""
        if self.dense is not None:
            from .dense import KernelOverflow

            try:
                return self._dense_alpha(u, v)
            except KernelOverflow:
                pass
        from .expand import structure_constants

        exp = structure_constants(self.table, u, v)
        return {w: to_alpha(c, self.n).poly for w, c in exp.coefficients.items()}

    def _dense_alpha(self, u, v):
        eng = self.dense
        total = perm.length(u) + perm.length(v)
        raw = eng.expand_indices(eng.index[u], eng.index[v])
        out = {}
        for wi, c in raw.items():
            d = total - int(eng.lengths[wi])
            out[eng.perms[wi]] = (eng.space.to_alpha(c, d), d)
        return {w: eng.space.alpha_to_poly(vec, d) for w, (vec, d) in out.items()}

    def check_pair(self, index: int, u, v) -> PairResult:
        try:
            coeffs = self.coefficients_alpha(u, v)
        except (NotDivisible, NotTranslationInvariant) as exc:
            raise SweepAbort(u, v, exc) from exc
        nonzero, biggest, violations = 0, 0, []
        for w in sorted(coeffs, key=perm.sort_key):
            a = coeffs[w]
            if not a:
                continue
            nonzero += 1
            for m, c in a.sorted_terms():
                biggest = max(biggest, abs(c))
                if c < 0:
                    violations.append(Violation(u, v, w, _mono_json(m), c, a))
        return PairResult(index, nonzero, biggest, violations)


_WORKER: _Worker | None = None


def _init_worker(n, engine, backend):
    global _WORKER
    _WORKER = _Worker(n, engine, backend)


def _run_chunk(chunk):
    return [_WORKER.check_pair(i, u, v) for i, u, v in chunk]


def unordered_pairs(n: int) -> list[tuple[Permutation, Permutation]]:
    ps = perm.all_permutations(n)
    return [(ps[i], ps[j]) for i in range(len(ps)) for j in range(i, len(ps))]


def verify_all(
    n: int,
    jobs: int | None = 1,
    engine: str = "dense",
    backend: str | None = None,
    sample_audit: bool = True,
    audit_fraction: float = 0.01,
    seed: int = 0,
    progress=None,
) -> PositivityReport:
    """Check positivity of c_uv^w for every unordered pair {u, v} in S_n.

    ``jobs=None`` uses every available core.  Results are merged in pair
    order, so the report does not depend on ``jobs``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if engine not in ("dense", "reference"):
        raise ValueError(f"unknown engine {engine!r}")
    start = time.perf_counter()
    jobs = jobs or os.cpu_count() or 1
    pairs = unordered_pairs(n)
    tasks = [(i, u, v) for i, (u, v) in enumerate(pairs)]
    results: list[PairResult] = []
    if jobs <= 1:
        _init_worker(n, engine, backend)
        for i, u, v in tasks:
            results.append(_WORKER.check_pair(i, u, v))
            if progress:
                progress(len(results), len(tasks))
    else:
        size = max(1, math.ceil(len(tasks) / (jobs * 8)))
        chunks = [tasks[k:k + size] for k in range(0, len(tasks), size)]
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(n, engine, backend)) as pool:
            for batch in pool.map(_run_chunk, chunks):
                results.extend(batch)
                if progress:
                    progress(len(results), len(tasks))
        _init_worker(n, engine, backend)
    results.sort(key=lambda r: r.index)

    report = PositivityReport(n=n, engine=engine)
    report.pairs_checked = len(results)
    for r in results:
        report.nonzero_constants += r.nonzero
        report.max_coefficient = max(report.max_coefficient, r.max_coefficient)
        report.violations.extend(r.violations)
    report.all_positive = not report.violations

    if sample_audit:
        off_diagonal = [(u, v) for u, v in pairs if u != v]
        if off_diagonal:
            k = max(1, round(audit_fraction * len(pairs)))
            sample = random.Random(seed).sample(off_diagonal, min(k, len(off_diagonal)))
            report.audit_pairs = len(sample)
            for u, v in sample:
                if _WORKER.coefficients_alpha(u, v) != _WORKER.coefficients_alpha(v, u):
                    report.audit_mismatches.append([list(u), list(v)])
    report.elapsed = time.perf_counter() - start
    return report
