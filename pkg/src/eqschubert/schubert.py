"""Double Schubert polynomials and their restrictions to torus-fixed points.

Convention: the top class is prod_{i+j<=n} (x_i - t_j), divided differences
act on the x variables, and the class of v restricted to the fixed point w is
obtained by substituting x_i -> t_{w(i)}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import permutation as perm
from .permutation import Permutation
from .polyring import Polynomial, T, X, exact_divide_linear, substitute, t, x


def divided_difference(i: int, p: Polynomial) -> Polynomial:
    """(p - s_i p) / (x_i - x_{i+1}) where s_i swaps x_i and x_{i+1}."""
    swapped = substitute(p, {X(i): x(i + 1), X(i + 1): x(i)})
    return exact_divide_linear(p - swapped, X(i), X(i + 1))


def top_class(n: int) -> Polynomial:
    out = Polynomial.const(1)
    for i in range(1, n):
        for j in range(1, n + 1 - i):
            out = out * (x(i) - t(j))
    return out


def fixed_point_substitution(w: Permutation) -> dict:
    return {X(i): t(a) for i, a in enumerate(w, 1)}


def reverse_t(p: Polynomial, n: int) -> Polynomial:
    """t_i -> t_{n+1-i}."""
    return substitute(p, {T(i): t(n + 1 - i) for i in range(1, n + 1)})


def diagonal_factors(w: Permutation) -> list[tuple[int, int]]:
    """Pairs (a, b) with localize(w, w) = prod (t_a - t_b)."""
    return [(w[i - 1], w[j - 1]) for i, j in perm.inversions(w)]


@dataclass
class RestrictionVector:
    """A class in the fixed-point model: one t-polynomial per w in S_n."""

    n: int
    values: dict[Permutation, Polynomial]

    def __getitem__(self, w: Permutation) -> Polynomial:
        return self.values[w]

    def __mul__(self, other: "RestrictionVector") -> "RestrictionVector":
        if self.n != other.n:
            raise perm.RankMismatch(f"rank mismatch: {self.n} vs {other.n}")
        return RestrictionVector(
            self.n, {w: p * other.values[w] for w, p in self.values.items()}
        )

    def __add__(self, other: "RestrictionVector") -> "RestrictionVector":
        return RestrictionVector(
            self.n, {w: p + other.values[w] for w, p in self.values.items()}
        )

    def scale(self, c: Polynomial) -> "RestrictionVector":
        return RestrictionVector(self.n, {w: c * p for w, p in self.values.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, RestrictionVector):
            return NotImplemented
        return self.n == other.n and self.values == other.values

    @classmethod
    def constant(cls, n: int, c: int = 1) -> "RestrictionVector":
        return cls(n, {w: Polynomial.const(c) for w in perm.all_permutations(n)})

    @classmethod
    def of_polynomial(cls, p: Polynomial, n: int) -> "RestrictionVector":
        """Restriction of an arbitrary x,t polynomial."""
        return cls(
            n,
            {w: substitute(p, fixed_point_substitution(w)) for w in perm.all_permutations(n)},
        )


@dataclass
class SchubertTable:
    n: int
    entries: dict[Permutation, Polynomial]
    _loc: dict = field(default_factory=dict, repr=False, compare=False)

    def entry(self, w: Permutation) -> Polynomial:
        return self.entries[tuple(w)]

    def __getitem__(self, w: Permutation) -> Polynomial:
        return self.entries[tuple(w)]

    def localize(self, v: Permutation, w: Permutation) -> Polynomial:
        key = (v, w)
        cached = self._loc.get(key)
        if cached is None:
            cached = substitute(self.entries[v], fixed_point_substitution(w))
            self._loc[key] = cached
        return cached


def build_table(n: int, choose_ascent=min) -> SchubertTable:
    """All double Schubert polynomials for S_n by descending induction.

    ``choose_ascent`` picks which ascent i of w to use in
    S_w = d_i S_{w s_i}; the result does not depend on it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    perms = perm.all_permutations(n)
    w0 = perm.longest_element(n)
    entries: dict[Permutation, Polynomial] = {w0: top_class(n)}
    for w in reversed(perms):
        if w == w0:
            continue
        ascents = [i for i in range(1, n) if w[i - 1] < w[i]]
        i = choose_ascent(ascents)
        entries[w] = divided_difference(i, entries[perm.swap_positions(w, i)])
    return SchubertTable(n, {w: entries[w] for w in perms})


@lru_cache(maxsize=8)
def get_table(n: int) -> SchubertTable:
    """Memoized table per rank; treat the result as read-only."""
    return build_table(n)


def localize(table: SchubertTable, v: Permutation, w: Permutation) -> Polynomial:
    return table.localize(tuple(v), tuple(w))


def restriction_vector(table: SchubertTable, v: Permutation) -> RestrictionVector:
    v = tuple(v)
    return RestrictionVector(
        table.n, {w: table.localize(v, w) for w in perm.all_permutations(table.n)}
    )


def opposite_restriction_vector(table: SchubertTable, v: Permutation) -> RestrictionVector:
    """Restrictions of the opposite class: the w0-translate of the class of v,
    values(w) = reverse_t(localize(v, w0 w))."""
    n = table.n
    v = tuple(v)
    w0 = perm.longest_element(n)
    return RestrictionVector(
        n,
        {
            w: reverse_t(table.localize(v, perm.compose(w0, w)), n)
            for w in perm.all_permutations(n)
        },
    )
