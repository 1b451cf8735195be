import itertools
import json

import pytest

from eqschubert import permutation as perm
from oracles import all_reduced_words, bruhat_ideal_by_subwords


def test_identity_and_longest():
    assert perm.identity(3) == (1, 2, 3)
    assert perm.identity(1) == (1,)
    assert perm.length(perm.identity(4)) == 0
    assert perm.longest_element(3) == (3, 2, 1)
    assert perm.longest_element(2) == (2, 1)
    assert perm.length(perm.longest_element(4)) == 6


def test_compose():
    assert perm.compose((2, 1, 3), (1, 3, 2)) == (2, 3, 1)
    assert perm.compose((3, 2, 1), (3, 2, 1)) == (1, 2, 3)
    for v in perm.all_permutations(3):
        assert perm.compose(perm.identity(3), v) == v
    with pytest.raises(perm.RankMismatch):
        perm.compose((1, 2), (1, 2, 3))


def test_generators_inverse_descents():
    assert perm.simple_transposition(1, 3) == (2, 1, 3)
    assert perm.inverse((2, 3, 1)) == (3, 1, 2)
    assert perm.descents((3, 1, 2)) == {1}
    with pytest.raises(IndexError):
        perm.simple_transposition(3, 3)
    with pytest.raises(IndexError):
        perm.simple_transposition(0, 3)
    for w in perm.all_permutations(4):
        assert perm.compose(w, perm.inverse(w)) == perm.identity(4)


def test_rank_function_examples():
    assert perm.rank_function((2, 1, 3), 1, 1) == 0
    assert perm.rank_function((3, 1, 2), 2, 2) == 1
    e = perm.identity(3)
    for p in range(4):
        for q in range(4):
            assert perm.rank_function(e, p, q) == min(p, q)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_rank_function_properties(n):
    for w in perm.all_permutations(n):
        for q in range(n + 1):
            assert perm.rank_function(w, n, q) == q
            assert perm.rank_function(w, q, n) == q
        for p in range(n + 1):
            for q in range(1, n + 1):
                step = perm.rank_function(w, p, q) - perm.rank_function(w, p, q - 1)
                assert step in (0, 1)
                if p >= 1:
                    assert perm.rank_function(w, p, q) >= perm.rank_function(w, p - 1, q)
        r = perm.rank_matrix(w)
        assert all(r[p - 1][q - 1] == perm.rank_function(w, p, q)
                   for p in range(1, n + 1) for q in range(1, n + 1))


def test_bruhat_examples():
    for w in perm.all_permutations(4):
        assert perm.bruhat_leq(perm.identity(4), w)
    assert perm.bruhat_leq((2, 1, 3), (3, 2, 1))
    assert not perm.bruhat_leq((2, 1, 3), (1, 3, 2))
    with pytest.raises(perm.RankMismatch):
        perm.bruhat_leq((1, 2), (1, 2, 3))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_bruhat_matches_subword_property(n):
    perms = perm.all_permutations(n)
    for w in perms:
        below = bruhat_ideal_by_subwords(perm.reduced_word(w), n)
        for u in perms:
            assert perm.bruhat_leq(u, w) == (u in below), (u, w)


@pytest.mark.parametrize("n", [3, 4])
def test_subword_ideal_independent_of_reduced_word(n):
    for w in perm.all_permutations(n):
        ideals = {frozenset(bruhat_ideal_by_subwords(word, n)) for word in all_reduced_words(w)}
        assert len(ideals) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bruhat_refines_length(n):
    perms = perm.all_permutations(n)
    for u, w in itertools.product(perms, repeat=2):
        if perm.bruhat_leq(u, w):
            assert perm.length(u) <= perm.length(w)
            if perm.length(u) == perm.length(w):
                assert u == w


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_length_changes_by_one_under_simple_transpositions(n):
    for w in perm.all_permutations(n):
        for k in range(1, n):
            moved = perm.compose(w, perm.simple_transposition(k, n))
            assert abs(perm.length(moved) - perm.length(w)) == 1
            assert moved == perm.swap_positions(w, k)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_reduced_word(n):
    for w in perm.all_permutations(n):
        word = perm.reduced_word(w)
        assert len(word) == perm.length(w)
        assert perm.from_word(word, n) == w
        assert tuple(word) in set(all_reduced_words(w))


def test_length_is_inversion_count():
    for w in perm.all_permutations(5):
        assert perm.length(w) == len(perm.inversions(w))
        assert perm.sign(w) == (-1) ** perm.length(w)


def test_all_permutations_ordering():
    perms = perm.all_permutations(4)
    assert len(perms) == 24 and len(set(perms)) == 24
    assert [perm.sort_key(w) for w in perms] == sorted(perm.sort_key(w) for w in perms)


def test_parse_and_validate():
    assert perm.parse("[2,1,3]") == (2, 1, 3)
    assert perm.parse(" [1] ", 1) == (1,)
    assert json.dumps(perm.to_json((2, 1, 3))) == "[2, 1, 3]"
    for bad in ("[1,1,2]", "[0,1,2]", "(1,2)", "[1,2,x]", "[]", "3", "[1.0, 2]", "[true]"):
        with pytest.raises(perm.InvalidPermutation):
            perm.parse(bad)
    with pytest.raises(perm.InvalidPermutation):
        perm.parse("[2,1]", 3)


def test_embed():
    assert perm.embed((2, 1), 4) == (2, 1, 3, 4)
    assert perm.length(perm.embed((3, 1, 2), 5)) == perm.length((3, 1, 2))
