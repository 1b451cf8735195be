"""Permutations of {1..n} in one-line notation.

A permutation is a plain tuple ``w`` with ``w[i-1] == w(i)``.  All functions
are pure and work on any tuple that is a bijection of ``1..n``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from itertools import permutations as _iter_perms
from typing import Iterable, Sequence

Permutation = tuple[int, ...]


class RankMismatch(ValueError):
    pass


class InvalidPermutation(ValueError):
    pass


def validate(word: Sequence[int], n: int | None = None) -> Permutation:
    """Return ``word`` as a tuple, raising InvalidPermutation unless it is a
    bijection of 1..len(word) (and of length ``n`` when given)."""
    w = tuple(word)
    if any(not isinstance(a, int) or isinstance(a, bool) for a in w):
        raise InvalidPermutation(f"entries must be integers: {list(word)!r}")
    if sorted(w) != list(range(1, len(w) + 1)) or not w:
        raise InvalidPermutation(f"not a permutation of 1..{len(w)}: {list(w)}")
    if n is not None and len(w) != n:
        raise InvalidPermutation(f"expected a permutation of 1..{n}, got {list(w)}")
    return w


def parse(text: str, n: int | None = None) -> Permutation:
    """Parse the JSON-array form ``"[2,1,3]"``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidPermutation(f"not a JSON array: {text!r}") from exc
    if not isinstance(data, list):
        raise InvalidPermutation(f"not a JSON array: {text!r}")
    return validate(data, n)


def to_json(w: Permutation) -> list[int]:
    return list(w)


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def longest_element(n: int) -> Permutation:
    return tuple(range(n, 0, -1))


def _check_same_rank(u: Permutation, v: Permutation) -> None:
    if len(u) != len(v):
        raise RankMismatch(f"rank mismatch: {len(u)} vs {len(v)}")


def compose(u: Permutation, v: Permutation) -> Permutation:
    """(u o v)(i) = u(v(i))."""
    _check_same_rank(u, v)
    return tuple(u[j - 1] for j in v)


def inverse(w: Permutation) -> Permutation:
    inv = [0] * len(w)
    for i, a in enumerate(w, 1):
        inv[a - 1] = i
    return tuple(inv)


def simple_transposition(k: int, n: int) -> Permutation:
    if not 1 <= k <= n - 1:
        raise IndexError(f"simple transposition index {k} out of range for n={n}")
    w = list(range(1, n + 1))
    w[k - 1], w[k] = w[k], w[k - 1]
    return tuple(w)


def swap_positions(w: Permutation, k: int) -> Permutation:
    """w * s_k, i.e. exchange the entries in positions k and k+1."""
    lst = list(w)
    lst[k - 1], lst[k] = lst[k], lst[k - 1]
    return tuple(lst)


def length(w: Permutation) -> int:
    """Number of inversions."""
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def inversions(w: Permutation) -> list[tuple[int, int]]:
    """Position pairs (i, j), 1-indexed, with i < j and w(i) > w(j)."""
    n = len(w)
    return [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if w[i] > w[j]]


def descents(w: Permutation) -> set[int]:
    return {i for i in range(1, len(w)) if w[i - 1] > w[i]}


def sign(w: Permutation) -> int:
    return -1 if length(w) % 2 else 1


def rank_function(w: Permutation, p: int, q: int) -> int:
    """#{i <= q : w(i) <= p}."""
    return sum(1 for a in w[:q] if a <= p)


def rank_matrix(w: Permutation) -> tuple[tuple[int, ...], ...]:
    """Table r[p-1][q-1] = rank_function(w, p, q) for 1 <= p, q <= n."""
    n = len(w)
    rows = []
    for p in range(1, n + 1):
        row, count = [], 0
        for q in range(1, n + 1):
            if w[q - 1] <= p:
                count += 1
            row.append(count)
        rows.append(tuple(row))
    return tuple(rows)


def bruhat_leq(u: Permutation, w: Permutation) -> bool:
    """Bruhat order by comparison of rank functions: u <= w iff
    r_u(p, q) >= r_w(p, q) everywhere."""
    _check_same_rank(u, w)
    ru, rw = rank_matrix(u), rank_matrix(w)
    return all(a >= b for row_u, row_w in zip(ru, rw) for a, b in zip(row_u, row_w))


def reduced_word(w: Permutation) -> list[int]:
    """A reduced word i_1 ... i_l with w = s_{i_1} ... s_{i_l}.

    Built greedily: repeatedly strip the leftmost right descent.
    """
    word: list[int] = []
    cur = w
    while True:
        ds = descents(cur)
        if not ds:
            break
        k = min(ds)
        word.append(k)
        cur = swap_positions(cur, k)
    word.reverse()
    return word


def from_word(word: Iterable[int], n: int) -> Permutation:
    """Product s_{i_1} ... s_{i_l} as a permutation of 1..n."""
    w = identity(n)
    for k in word:
        w = swap_positions(w, k)
    return w


def embed(w: Permutation, n: int) -> Permutation:
    """View w in S_m as an element of S_n (n >= m) fixing m+1..n."""
    return tuple(w) + tuple(range(len(w) + 1, n + 1))


@lru_cache(maxsize=None)
def all_permutations(n: int) -> tuple[Permutation, ...]:
    """S_n sorted by (length, one-line word)."""
    perms = [tuple(p) for p in _iter_perms(range(1, n + 1))]
    perms.sort(key=lambda p: (length(p), p))
    return tuple(perms)


def sort_key(w: Permutation) -> tuple[int, Permutation]:
    return (length(w), w)
