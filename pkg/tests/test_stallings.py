import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from gogfold import stallings as S
from gogfold import words as W
from gogfold.errors import TrivialWord

from oracles import dyck_membership, word_trie
from strategies import nontrivial, reduced

a, b, A, B = 1, 2, -1, -2
gen_lists = st.lists(nontrivial(max_size=5), min_size=1, max_size=3)


def test_example_graph_shape_and_membership():
    H = S.subgroup_graph([(a, a), (a, b)], 2)
    assert (H.n_vertices, H.n_edges) == (2, 3)
    assert S.member(H, (a, a, a, b))
    assert not S.member(H, (b,))
    assert S.intersect_cyclic(H, (a,)) == 2


def test_conjugate_into_examples():
    assert S.conjugate_into(S.subgroup_graph([(a, a)], 2), (a,)) == ((), 2)
    comm = W.commutator((a,), (b,))
    assert S.conjugate_into(S.subgroup_graph([comm], 2), (a,)) is None


def test_index_examples():
    assert S.index(S.subgroup_graph([(a, a), (a, b)], 2)) is None
    assert S.index(S.subgroup_graph([(a, a), (b,), (a, b, A)], 2)) == 2


def test_trivial_word_rejected():
    H = S.subgroup_graph([(a,)], 2)
    with pytest.raises(TrivialWord):
        S.intersect_cyclic(H, ())
    with pytest.raises(TrivialWord):
        S.conjugate_into(H, (a, A))


def test_trivial_subgroup():
    H = S.subgroup_graph([], 2)
    assert H.n_vertices == 1 and H.subgroup_rank() == 0
    assert S.member(H, ()) and not S.member(H, (a,))


def test_dot_export():
    dot = S.subgroup_graph([(a, a), (a, b)], 2).to_dot(W.Alphabet(("a", "b")))
    assert dot.startswith("digraph") and 'label="a"' in dot


@given(gen_lists)
def test_graph_is_folded_core(gens):
    H = S.subgroup_graph(gens, 2)
    assert H.is_folded()
    for v, d in enumerate(H.out):
        assert v == 0 or len(d) >= 2
        for x, t in d.items():
            assert H.out[t][-x] == v


@given(gen_lists)
def test_member_matches_dyck_oracle(gens):
    parents, letters, words = word_trie(5)
    oracle = dyck_membership([tuple(gens)], parents, letters)[0]
    H = S.subgroup_graph(gens, 2)
    got = np.array([S.member(H, w) for w in words])
    assert (got == oracle).all()


@given(gen_lists, st.lists(st.integers(0, 2), max_size=5), st.lists(st.booleans(), max_size=5))
def test_products_of_generators_are_members(gens, idx, signs):
    H = S.subgroup_graph(gens, 2)
    w = ()
    for i, s in zip(idx, signs):
        g = gens[i % len(gens)]
        w = W.mul(w, g if s else W.inverse(g))
    assert S.member(H, w)
    e = H.express(w)
    assert e is not None
    basis = H.basis()
    assert W.mul(*[basis[x - 1] if x > 0 else W.inverse(basis[-x - 1]) for x in e]) == w


@given(gen_lists)
def test_basis_regenerates_subgroup(gens):
    H = S.subgroup_graph(gens, 2)
    basis = H.basis()
    assert len(basis) == H.subgroup_rank() <= len(gens)
    assert S.subgroup_graph(basis, 2) == H


@given(gen_lists, st.permutations(range(3)), st.integers(0, 2), st.integers(0, 2))
def test_nielsen_moves_preserve_graph(gens, perm, i, j):
    H = S.subgroup_graph(gens, 2)
    moved = [gens[p] for p in perm if p < len(gens)]
    assert S.subgroup_graph(moved, 2) == H
    i, j = i % len(gens), j % len(gens)
    if i != j:
        moved = list(gens)
        moved[i] = W.mul(moved[i], W.inverse(moved[j]))
        assert S.subgroup_graph(moved, 2) == H


@given(gen_lists)
def test_schreier_index_formula(gens):
    H = S.subgroup_graph(gens, 2)
    n = S.index(H)
    if n is not None:
        assert H.subgroup_rank() == 1 + n


@given(gen_lists, nontrivial(max_size=4))
def test_intersect_cyclic_minimal(gens, w):
    H = S.subgroup_graph(gens, 2)
    k = S.intersect_cyclic(H, w)
    if k is None:
        assert all(not S.member(H, W.power(w, j)) for j in range(1, H.n_vertices + 2))
    else:
        assert S.member(H, W.power(w, k))
        assert all(not S.member(H, W.power(w, j)) for j in range(1, k))


@given(gen_lists, nontrivial(max_size=4), reduced(max_size=3))
def test_conjugate_into_finds_hidden_conjugate(gens, w, g):
    H = S.subgroup_graph(gens, 2)
    # g^-1 w g conjugates into H exactly when w does
    r1 = S.conjugate_into(H, w)
    r2 = S.conjugate_into(H, W.conjugate(w, g))
    assert (r1 is None) == (r2 is None)
    if r1 is not None:
        h, k = r1
        assert S.member(H, W.conjugate(W.power(w, k), h))
        assert r2[1] == k
