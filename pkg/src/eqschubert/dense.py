"""Dense engine: homogeneous polynomials as int64 coefficient vectors.

A homogeneous polynomial of degree d in k variables is stored as a vector
over the monomials of degree d, ordered by their packed exponent key
``sum_i e_i * BASE**i``.  Multiplication and exact division by t_a - t_b
are table-driven and run through :mod:`eqschubert.kernels`.  Whenever a
kernel reports a possible int64 overflow the engine raises
:class:`KernelOverflow`; callers redo that unit of work exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from . import kernels
from . import permutation as perm
from .expand import Expansion
from .permutation import Permutation
from .polyring import NotDivisible, Polynomial, VariableRef, make_monomial
from .schubert import SchubertTable, diagonal_factors, get_table

BASE = 64


class KernelOverflow(ArithmeticError):
    """A dense kernel could not guarantee an exact int64 result."""


def _check(status: int, what: str) -> None:
    if status == kernels.OVERFLOW:
        raise KernelOverflow(what)
    if status == kernels.NOT_DIVISIBLE:
        raise NotDivisible(what)


class GradedBasis:
    """Monomial bases of each degree in ``k`` variables."""

    def __init__(self, k: int):
        if k > 8:
            raise ValueError("too many variables for packed keys")
        self.k = k
        self.weights = BASE ** np.arange(k, dtype=np.int64)
        self._exps: dict[int, np.ndarray] = {}
        self._keys: dict[int, np.ndarray] = {}
        self._tables: dict[tuple[int, int], np.ndarray] = {}

    def exps(self, d: int) -> np.ndarray:
        if d not in self._exps:
            if d >= BASE:
                raise ValueError("degree too large for packed keys")
            rows = []
            for combo in combinations_with_replacement(range(self.k), d):
                e = [0] * self.k
                for i in combo:
                    e[i] += 1
                rows.append(e)
            arr = np.array(rows, dtype=np.int64).reshape(len(rows), self.k)
            keys = arr @ self.weights if self.k else np.zeros(len(arr), dtype=np.int64)
            order = np.argsort(keys, kind="stable")
            self._exps[d] = arr[order]
            self._keys[d] = keys[order]
        return self._exps[d]

    def keys(self, d: int) -> np.ndarray:
        self.exps(d)
        return self._keys[d]

    def size(self, d: int) -> int:
        return len(self.keys(d))

    def index(self, d: int, keys) -> np.ndarray:
        """Positions of packed ``keys`` within the degree-d basis."""
        basis = self.keys(d)
        pos = np.searchsorted(basis, keys)
        if np.any(pos >= len(basis)) or np.any(basis[np.minimum(pos, len(basis) - 1)] != keys):
            raise KeyError("monomial not in basis")
        return pos

    def mul_table(self, a: int, b: int) -> np.ndarray:
        key = (a, b)
        if key not in self._tables:
            ka, kb = self.keys(a), self.keys(b)
            self._tables[key] = self.index(a + b, ka[:, None] + kb[None, :]).astype(np.int64)
        return self._tables[key]

    def unit(self, var: int) -> np.ndarray:
        """Packed key offset of one power of variable ``var`` (0-based)."""
        return self.weights[var]


@dataclass
class DivisionPlan:
    q_idx: np.ndarray
    p_idx: np.ndarray
    shift: np.ndarray
    rem_p: np.ndarray
    rem_q: np.ndarray
    levels: list
    q_size: int


def make_division_plan(basis: GradedBasis, d: int, a: int, b: int) -> DivisionPlan:
    """Tables for dividing a degree-d polynomial by (var_a - var_b), 0-based
    variables.  From p = q*(t_a - t_b): q[m] = p[m t_a] + q[m t_a / t_b],
    filled in decreasing exponent of t_a; p[M] + q[M / t_b] = 0 whenever t_a
    does not divide M."""
    qexps = basis.exps(d - 1)
    qkeys = basis.keys(d - 1)
    nq = len(qkeys)
    ua, ub = basis.unit(a), basis.unit(b)
    order = np.argsort(-qexps[:, a], kind="stable")
    q_idx = order.astype(np.int64)
    p_idx = basis.index(d, qkeys[order] + ua).astype(np.int64)
    has_b = qexps[order, b] >= 1
    shift = np.full(nq, nq, dtype=np.int64)
    if has_b.any():
        shift[has_b] = basis.index(d - 1, qkeys[order][has_b] + ua - ub)
    pexps = basis.exps(d)
    pkeys = basis.keys(d)
    free = np.nonzero(pexps[:, a] == 0)[0]
    rem_p = free.astype(np.int64)
    rem_q = np.full(len(free), nq, dtype=np.int64)
    div_b = pexps[free, b] >= 1
    if div_b.any():
        rem_q[div_b] = basis.index(d - 1, pkeys[free][div_b] - ub)
    levels = []
    ea = qexps[order, a]
    for e in sorted(set(ea.tolist()), reverse=True):
        sel = ea == e
        levels.append((q_idx[sel], p_idx[sel], shift[sel]))
    return DivisionPlan(q_idx, p_idx, shift, rem_p, rem_q, levels, nq)


class DenseSpace:
    """Homogeneous polynomials in t_1..t_n (and alpha_1..alpha_{n-1})."""

    def __init__(self, n: int, backend: kernels.Backend | None = None):
        self.n = n
        self.backend = backend or kernels.get_backend()
        self.t = GradedBasis(n)
        self.a = GradedBasis(n - 1)
        self._plans: dict = {}
        self._to_alpha: dict = {}
        self._from_alpha: dict = {}

    # conversions

    def from_poly(self, p: Polynomial, d: int) -> np.ndarray:
        out = np.zeros(self.t.size(d), dtype=np.int64)
        if not p.terms:
            return out
        keys, coeffs = [], []
        for m, c in p.terms.items():
            k = 0
            for v, e in m:
                if v.alphabet != "T" or not 1 <= v.index <= self.n:
                    raise ValueError(f"{v} is outside t_1..t_{self.n}")
                k += e * BASE ** (v.index - 1)
            keys.append(k)
            coeffs.append(c)
        idx = self.t.index(d, np.array(keys, dtype=np.int64))
        out[idx] = coeffs
        return out

    def _to_poly(self, basis: GradedBasis, alphabet: str, vec: np.ndarray, d: int) -> Polynomial:
        exps = basis.exps(d)
        terms = {}
        for i in np.nonzero(vec)[0]:
            m = make_monomial(
                {VariableRef(alphabet, j + 1): int(e) for j, e in enumerate(exps[i]) if e}
            )
            terms[m] = int(vec[i])
        return Polynomial(terms)

    def to_poly(self, vec: np.ndarray, d: int) -> Polynomial:
        return self._to_poly(self.t, "T", vec, d)

    def alpha_to_poly(self, vec: np.ndarray, d: int) -> Polynomial:
        return self._to_poly(self.a, "A", vec, d)

    # arithmetic

    def mul_acc(self, out, x, dx, y, dy, sign=1):
        _check(
            self.backend.mul_acc(out, x, y, self.t.mul_table(dx, dy), sign, kernels.LIMIT),
            "product",
        )

    def mul(self, x, dx, y, dy):
        out = np.zeros(self.t.size(dx + dy), dtype=np.int64)
        self.mul_acc(out, x, dx, y, dy)
        return out

    def plan(self, d: int, a: int, b: int) -> DivisionPlan:
        key = (d, a, b)
        if key not in self._plans:
            self._plans[key] = make_division_plan(self.t, d, a - 1, b - 1)
        return self._plans[key]

    def divide_linear(self, p: np.ndarray, d: int, a: int, b: int) -> np.ndarray:
        """Quotient of the degree-d vector p by (t_a - t_b), 1-based."""
        if d == 0:
            if p.any():
                raise NotDivisible(f"nonzero constant is not divisible by t_{a} - t_{b}")
            return np.zeros(0, dtype=np.int64)
        plan = self.plan(d, a, b)
        q = np.zeros(plan.q_size + 1, dtype=np.int64)
        _check(self.backend.div_linear(p, q, plan, kernels.LIMIT), f"division by t_{a} - t_{b}")
        return q[:-1]

    # simple-root coordinates

    def _linear_image(self, src: GradedBasis, dst: GradedBasis, images1, d: int) -> np.ndarray:
        """Matrix (dst_size x src_size) of the ring map sending source
        variable j to the degree-1 dst vector images1[j]."""
        cols = np.zeros((dst.size(d), src.size(d)), dtype=np.int64)
        if d == 0:
            cols[0, 0] = 1
            return cols
        prev = self._linear_image(src, dst, images1, d - 1) if d > 1 else None
        exps = src.exps(d)
        for i, e in enumerate(exps):
            j = int(np.nonzero(e)[0][-1])
            lower_key = int(src.keys(d)[i] - src.unit(j))
            if d == 1:
                lower_img = np.ones(1, dtype=np.int64)
            else:
                lower_img = prev[:, int(src.index(d - 1, np.array([lower_key]))[0])]
            out = np.zeros(dst.size(d), dtype=np.int64)
            _check(
                self.backend.mul_acc(out, lower_img, images1[j], dst.mul_table(d - 1, 1), 1, kernels.LIMIT),
                "coordinate change",
            )
            cols[:, i] = out
        return cols

    def to_alpha_matrix(self, d: int) -> tuple[np.ndarray, float]:
        """t_1 -> 0, t_i -> alpha_1 + ... + alpha_{i-1}."""
        if d not in self._to_alpha:
            k = self.n - 1
            images = []
            for i in range(self.n):
                v = np.zeros(self.a.size(1), dtype=np.int64)
                for j in range(i):
                    v[self.a.index(1, np.array([self.a.unit(j)]))[0]] = 1
                images.append(v)
            if k == 0:
                m = np.zeros((1, self.t.size(d)), dtype=np.int64)
                if d == 0:
                    m[0, 0] = 1
            else:
                m = self._linear_image(self.t, self.a, images, d)
            self._to_alpha[d] = (m, float(np.abs(m).max(initial=0)))
        return self._to_alpha[d]

    def from_alpha_matrix(self, d: int) -> tuple[np.ndarray, float]:
        """alpha_i -> t_{i+1} - t_i."""
        if d not in self._from_alpha:
            images = []
            for i in range(self.n - 1):
                v = np.zeros(self.t.size(1), dtype=np.int64)
                v[self.t.index(1, np.array([self.t.unit(i + 1)]))[0]] = 1
                v[self.t.index(1, np.array([self.t.unit(i)]))[0]] = -1
                images.append(v)
            if self.n == 1:
                m = np.ones((1, 1), dtype=np.int64) if d == 0 else np.zeros((self.t.size(d), 0), dtype=np.int64)
            else:
                m = self._linear_image(self.a, self.t, images, d)
            self._from_alpha[d] = (m, float(np.abs(m).max(initial=0)))
        return self._from_alpha[d]

    def to_alpha(self, vec: np.ndarray, d: int) -> np.ndarray:
        """Alpha coordinates of a translation-invariant vector; raises
        NotTranslationInvariant when the round trip does not reproduce it."""
        from .positivity import NotTranslationInvariant

        m, mmax = self.to_alpha_matrix(d)
        out = np.zeros(m.shape[0], dtype=np.int64)
        _check(self.backend.matvec(m, mmax, vec, out, kernels.LIMIT), "alpha conversion")
        b, bmax = self.from_alpha_matrix(d)
        back = np.zeros(b.shape[0], dtype=np.int64)
        _check(self.backend.matvec(b, bmax, out, back, kernels.LIMIT), "alpha round trip")
        if not np.array_equal(back, vec):
            raise NotTranslationInvariant(
                f"{self.to_poly(vec, d)} is not a polynomial in the differences t_j - t_i"
            )
        return out


class DenseEngine:
    """Structure constants for fixed n with dense kernels."""

    def __init__(self, n: int, backend: kernels.Backend | str | None = None,
                 table: SchubertTable | None = None):
        if isinstance(backend, str) or backend is None:
            backend = kernels.get_backend(backend)
        self.n = n
        self.table = table or get_table(n)
        self.space = DenseSpace(n, backend)
        self.perms = perm.all_permutations(n)
        self.index = {w: i for i, w in enumerate(self.perms)}
        self.lengths = np.array([perm.length(w) for w in self.perms], dtype=np.int64)
        ranks = np.array([perm.rank_matrix(w) for w in self.perms], dtype=np.int64)
        self.leq = backend.bruhat_matrix(ranks)
        self.factors = [diagonal_factors(w) for w in self.perms]
        self._loc: dict[tuple[int, int], np.ndarray] = {}

    @property
    def backend(self) -> kernels.Backend:
        return self.space.backend

    def loc(self, vi: int, wi: int) -> np.ndarray:
        key = (vi, wi)
        arr = self._loc.get(key)
        if arr is None:
            p = self.table.localize(self.perms[vi], self.perms[wi])
            arr = self.space.from_poly(p, int(self.lengths[vi]))
            self._loc[key] = arr
        return arr

    def expand_indices(self, ui: int, vi: int) -> dict[int, np.ndarray]:
        """Triangular solve for sigma_u * sigma_v; keys are permutation
        indices, values coefficient vectors of degree l(u)+l(v)-l(w)."""
        sp = self.space
        lu, lv = int(self.lengths[ui]), int(self.lengths[vi])
        total = lu + lv
        leq = self.leq
        coeffs: dict[int, np.ndarray] = {}
        size_total = sp.t.size(total)
        for wi in range(len(self.perms)):
            res = np.zeros(size_total, dtype=np.int64)
            if leq[ui, wi] and leq[vi, wi]:
                sp.mul_acc(res, self.loc(ui, wi), lu, self.loc(vi, wi), lv)
            for ci, c in coeffs.items():
                if leq[ci, wi]:
                    lc = int(self.lengths[ci])
                    sp.mul_acc(res, c, total - lc, self.loc(ci, wi), lc, -1)
            if not res.any():
                continue
            lw = int(self.lengths[wi])
            if lw > total:
                raise NotDivisible(
                    f"nonzero residual at {list(self.perms[wi])} above degree {total}"
                )
            d = total
            for a, b in self.factors[wi]:
                res = sp.divide_linear(res, d, a, b)
                d -= 1
            coeffs[wi] = res
        return coeffs

    def structure_constants(self, u: Permutation, v: Permutation) -> Expansion:
        u, v = tuple(u), tuple(v)
        total = perm.length(u) + perm.length(v)
        raw = self.expand_indices(self.index[u], self.index[v])
        coeffs = {
            self.perms[wi]: self.space.to_poly(c, total - int(self.lengths[wi]))
            for wi, c in raw.items()
        }
        return Expansion(self.n, u, v, coeffs)
