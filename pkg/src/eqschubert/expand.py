"""Structure constants of the equivariant Schubert basis.

The normative route is a triangular solve in the fixed-point model: walking
S_n by increasing length, the coefficient at w is the residual of the target
vector at w divided by localize(w, w).  The pushforward route computes the
same numbers from the duality pairing and is kept as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import permutation as perm
from .permutation import Permutation
from .polyring import NotDivisible, Polynomial, T, exact_divide_linear
from .schubert import (
    RestrictionVector,
    SchubertTable,
    diagonal_factors,
    opposite_restriction_vector,
    restriction_vector,
)


@dataclass
class Expansion:
    n: int
    u: Permutation
    v: Permutation
    coefficients: dict[Permutation, Polynomial] = field(default_factory=dict)

    def coefficient(self, w: Permutation) -> Polynomial:
        return self.coefficients.get(tuple(w), Polynomial())

    def sorted_items(self) -> list[tuple[Permutation, Polynomial]]:
        return sorted(self.coefficients.items(), key=lambda kv: perm.sort_key(kv[0]))


def divide_by_factors(p: Polynomial, factors) -> Polynomial:
    for a, b in factors:
        p = exact_divide_linear(p, T(a), T(b))
    return p


def expand_product(
    table: SchubertTable, f: RestrictionVector, degree: int | None = None, order=None
) -> dict[Permutation, Polynomial]:
    """Coefficients c_w with f = sum_w c_w * restriction_vector(w).

    ``order`` may supply any linear extension of the length grading; by default
    S_n is walked by (length, word).  ``degree``, when given, is the
    cohomological degree of f; a residual that cannot have degree
    ``degree - length(w)`` raises NotDivisible.
    """
    perms = order if order is not None else perm.all_permutations(table.n)
    coeffs: dict[Permutation, Polynomial] = {}
    for w in perms:
        residual = f.values[w]
        for v, c in coeffs.items():
            if perm.bruhat_leq(v, w):
                residual = residual - c * table.localize(v, w)
        if not residual:
            continue
        lw = perm.length(w)
        if degree is not None and lw > degree:
            raise NotDivisible(f"nonzero residual at {list(w)} above degree {degree}")
        c = divide_by_factors(residual, diagonal_factors(w))
        if degree is not None and not c.is_homogeneous(degree - lw):
            raise NotDivisible(f"coefficient at {list(w)} is not homogeneous")
        coeffs[w] = c
    return coeffs


def structure_constants(table: SchubertTable, u: Permutation, v: Permutation) -> Expansion:
    u, v = tuple(u), tuple(v)
    f = restriction_vector(table, u) * restriction_vector(table, v)
    coeffs = expand_product(table, f, perm.length(u) + perm.length(v))
    return Expansion(table.n, u, v, coeffs)


def vandermonde_factors(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def pushforward(f: RestrictionVector) -> Polynomial:
    """Integral over the flag variety: sum_w sign(w) f(w), divided by
    prod_{i<j} (t_i - t_j)."""
    total = Polynomial()
    for w, val in f.values.items():
        if val:
            total = total + val * perm.sign(w)
    return divide_by_factors(total, vandermonde_factors(f.n))


def duality_constant(
    table: SchubertTable, u: Permutation, v: Permutation, w: Permutation
) -> Polynomial:
    """c_uv^w as the pushforward of sigma_u * sigma_v * (opposite class of w0 w)."""
    n = table.n
    w0 = perm.longest_element(n)
    f = (
        restriction_vector(table, u)
        * restriction_vector(table, v)
        * opposite_restriction_vector(table, perm.compose(w0, tuple(w)))
    )
    return pushforward(f)


def expansion_to_json(exp: Expansion, with_alpha: bool = True) -> dict:
    from .polyring import to_json
    from .positivity import to_alpha

    terms = []
    for w, c in exp.sorted_items():
        term = {"w": list(w), "coeff_t": to_json(c)}
        if with_alpha:
            term["coeff_alpha"] = to_json(to_alpha(c, exp.n).poly)
        terms.append(term)
    return {"n": exp.n, "u": list(exp.u), "v": list(exp.v), "terms": terms}


def expansion_from_json(data: dict) -> Expansion:
    from .polyring import from_json

    coeffs = {tuple(term["w"]): from_json(term["coeff_t"]) for term in data["terms"]}
    return Expansion(data["n"], tuple(data["u"]), tuple(data["v"]), coeffs)
