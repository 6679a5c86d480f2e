import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.sparse.csgraph import connected_components

from signpat.digraph import (EnumerationBoundError, NotCycleFormError, Orientation, build_digraph,
                             cycle_form_labelings, is_ap_irreducible, is_cycle_form, is_irreducible,
                             monotone_n_cycles, signed_paths, two_cycle_signs)
from signpat.pattern import MINUS, PLUS, ZERO, Negate, PermuteSimilar, SignPattern, apply_symmetry, split_parts

from conftest import P, cycle_patterns, patterns


def strongly_connected(a: SignPattern) -> bool:
    adj = (a.to_array() != 0).astype(int)
    return connected_components(adj, directed=True, connection="strong")[0] == 1


def has_hamiltonian_cycle(a: SignPattern, sign) -> bool:
    e, n = a.entries, a.n
    for rest in itertools.permutations(range(1, n)):
        cyc = (0,) + rest + (0,)
        if all(e[u][v] is sign for u, v in zip(cyc, cyc[1:])):
            return True
    return False


def test_build_digraph_examples():
    assert build_digraph(P("0+/-0")).arcs == {(0, 1, PLUS), (1, 0, MINUS)}
    assert build_digraph(SignPattern.zeros(3)).arcs == frozenset()
    assert build_digraph(P("+0/00")).arcs == {(0, 0, PLUS)}


def test_irreducible_examples(positive_three_cycle):
    assert is_irreducible(positive_three_cycle)
    assert not is_irreducible(P("00+/+0+/+00"))
    assert is_irreducible(P("-")) and is_irreducible(P("0"))


@given(patterns())
def test_irreducible_matches_scipy(a):
    assert is_irreducible(a) == strongly_connected(a)


def test_ap_irreducible_examples():
    assert is_ap_irreducible(P("0++/+0+/++0"))
    assert not is_ap_irreducible(P("0--/+0+/++0"))
    a = P("0+0/+0-/0+0")
    # column 2 holds only a minus, so the first condition already fails
    assert not is_ap_irreducible(a)
    assert strongly_connected(split_parts(a)[2]) == is_irreducible(split_parts(a)[2])


@given(patterns())
def test_ap_irreducible_definition(a):
    arr = a.to_array()
    rows_ok = (arr > 0).any(axis=1).all() and (arr > 0).any(axis=0).all()
    expected = bool(rows_ok and strongly_connected(a) and strongly_connected(split_parts(a)[2]))
    assert is_ap_irreducible(a) == expected


def test_two_cycle_examples():
    assert two_cycle_signs(P("0+/+0")) == [(0, 1, PLUS)]
    assert two_cycle_signs(P("0+/-0")) == [(0, 1, MINUS)]
    assert two_cycle_signs(P("0+/00")) == []


@given(patterns())
def test_two_cycles_negation_invariant(a):
    assert two_cycle_signs(apply_symmetry(a, Negate())) == two_cycle_signs(a)


def test_monotone_cycle_examples():
    assert monotone_n_cycles(P("0+0/00+/+00")) == {(Orientation.FORWARD, PLUS)}
    assert monotone_n_cycles(P("0+0/00-/+00")) == set()
    assert monotone_n_cycles(P("0+-/-0+/+-0")) == {(Orientation.FORWARD, PLUS), (Orientation.BACKWARD, MINUS)}
    with pytest.raises(NotCycleFormError):
        monotone_n_cycles(P("0+0/+0+/0+0"))


@given(cycle_patterns(max_n=6))
def test_monotone_cycles_match_hamiltonian_search(a):
    found = monotone_n_cycles(a)
    for sign in (PLUS, MINUS):
        assert any(s is sign for _, s in found) == has_hamiltonian_cycle(a, sign)


def test_labelings_examples():
    assert len(cycle_form_labelings(P("0+-/-0+/+-0"))) == 6
    assert cycle_form_labelings(P("0+0/+0+/0+0")) == []
    labs = cycle_form_labelings(P("0+00/-0+0/00-+/+000"))
    assert len(labs) == 8 and labs[0].perm == (0, 1, 2, 3)


def test_labelings_small_orders():
    assert cycle_form_labelings(P("0+/+0")) == []
    assert cycle_form_labelings(P("+")) == []


@given(cycle_patterns(max_n=6), st.data())
def test_labelings_recover_shuffled_cycles(a, data):
    sigma = tuple(data.draw(st.permutations(range(a.n))))
    shuffled = apply_symmetry(a, PermuteSimilar(sigma))
    labs = cycle_form_labelings(shuffled)
    assert len(labs) == 2 * a.n
    for lab in labs:
        assert is_cycle_form(lab.apply(shuffled))


def test_signed_paths_examples(positive_three_cycle):
    (path,) = signed_paths(positive_three_cycle, 0, 2)
    assert path.vertices == (0, 1, 2) and path.sign is PLUS and path.length == 2
    (path,) = signed_paths(P("0+/-0"), 1, 0)
    assert path.vertices == (1, 0) and path.sign is MINUS and path.length == 1
    assert signed_paths(P("0+/00"), 1, 0) == []


def test_signed_paths_bound():
    with pytest.raises(EnumerationBoundError):
        signed_paths(SignPattern.zeros(13), 0, 1)
    with pytest.raises(ValueError):
        signed_paths(P("0+/-0"), 1, 1)


@given(patterns(min_n=2, max_n=5))
def test_signed_paths_recomputed(a):
    e = a.entries
    for s, r in itertools.permutations(range(a.n), 2):
        paths = signed_paths(a, s, r)
        assert [p.vertices for p in paths] == sorted(p.vertices for p in paths)
        for p in paths:
            assert len(set(p.vertices)) == len(p.vertices)
            sign = PLUS
            for u, v in zip(p.vertices, p.vertices[1:]):
                assert e[u][v] is not ZERO
                sign = sign * e[u][v]
            assert sign is p.sign
