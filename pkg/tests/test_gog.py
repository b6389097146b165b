import random

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix

from gogfold import gog as M
from gogfold import moves
from gogfold import words as W
from gogfold.corpus import random_element, random_gog
from gogfold.errors import InvalidGraph, PreconditionFailed
from gogfold.fixtures import example_one, make_gog
from gogfold.gog import EdgeData, GraphOfGroups
from gogfold.groups import FreeAbelianGroup, FreeGroup, NestedGroup

seeds = st.integers(0, 10**6)


def amalgam():
    return make_gog({"L": FreeGroup(["a", "b"]), "R": FreeGroup(["c", "d"])},
                    [("e", "L", "R", ["a"], ["c^2"])])


def betti_by_sympy(G):
    pres = M.relative_presentation(G)
    n = len(pres.generators)
    rows = [list(W.abelianize(r, n)) for r in pres.relations]
    return n - (Matrix(rows).rank() if rows else 0)


def test_validate_examples():
    assert M.validate(amalgam()) == []
    F = FreeGroup(["a", "b"])
    bad = GraphOfGroups({"L": F, "R": F}, [EdgeData("e", "L", "R", 1, ((),), ((1,),))])
    assert any(d.where.startswith("e") or "e" in d.where for d in M.validate(bad))
    two = GraphOfGroups({"L": F, "A": FreeAbelianGroup(["p", "q"])},
                        [EdgeData("e", "L", "A", 2, ((1,), (2,)), ((1, 0), (0, 1)))])
    assert M.validate(two)
    with pytest.raises(InvalidGraph):
        M.require_valid(two)


def test_disconnected_graph_rejected():
    F = FreeGroup(["a"])
    assert M.validate(GraphOfGroups({"u": F, "v": F}))


def test_relative_presentation_examples():
    pres = M.relative_presentation(amalgam())
    assert pres.generators == ("a", "b", "c", "d")
    assert pres.relations == ((1, -3, -3),)
    hnn = make_gog({"F": FreeGroup(["a", "b"])}, [("t", "F", "F", ["a"], ["a"])])
    pres = M.relative_presentation(hnn)
    assert list(pres.stable_letters) == ["t"] and len(pres.relations) == 1
    pres = M.relative_presentation(example_one())
    assert pres.generators == ("a", "b", "t", "s")
    assert list(pres.stable_letters) == ["s"] and len(pres.relations) == 2


def test_betti_examples():
    F = FreeGroup(["a", "b"])
    G = make_gog({"F": F, "A": FreeAbelianGroup(["a", "r"])}, [("e", "F", "A", ["a"], ["a"])])
    assert M.betti(G) == 3
    assert M.betti_bound_check(G)
    assert M.betti(make_gog({"F": FreeGroup(["x", "y", "z"])})) == 3
    # <F(a,b), s, t | [s,t] = a> as F *_{a = [s,t]} F(s,t)
    G = make_gog({"F": F, "S": FreeGroup(["s", "t"])}, [("e", "F", "S", ["a"], ["s^-1 t^-1 s t"])])
    assert M.betti(G) == 3


def test_conjugate_boundary_examples():
    G = amalgam()
    H = moves.conjugate_boundary(G, "e", "i", (2,))
    assert H.edge("e").i_images == ((-2, 1, 2),)
    assert moves.conjugate_boundary(G, "e", "i", ()).edge("e") == G.edge("e")


def test_slide_examples():
    F = FreeGroup(["a", "b"])
    G = make_gog({"F": F, "X": FreeGroup(["x"]), "Y": FreeGroup(["y"])},
                 [("e", "F", "X", ["a"], ["x"]), ("f", "F", "Y", ["a^2"], ["y"])])
    H = moves.slide(G, "e", "f")
    assert H.edge("f").src == "X" and H.edge("f").i_images == ((1, 1),)
    assert M.betti(H) == M.betti(G)
    G2 = make_gog({"F": F, "X": FreeGroup(["x"]), "Y": FreeGroup(["y"])},
                  [("e", "F", "X", ["a"], ["x"]), ("f", "F", "Y", ["b"], ["y"])])
    with pytest.raises(PreconditionFailed):
        moves.slide(G2, "e", "f")


def test_fold_enlarge_examples():
    G = make_gog({"F": FreeGroup(["a", "b"]), "A": FreeAbelianGroup(["p", "r"])},
                 [("e", "A", "F", ["p"], ["a"])])
    H = moves.fold_enlarge(G, "e", [(1, 0), (0, 1)])
    assert H.edge("e").rank == 2
    assert isinstance(H.vertices["F"], NestedGroup)
    assert M.validate(H) == [] and M.betti(H) == M.betti(G)
    assert moves.fold_enlarge(G, "e", [(1, 0)]) is G
    with pytest.raises(PreconditionFailed):
        moves.fold_enlarge(G, "e", [(0, 1)])


def test_collapse_examples():
    H = moves.collapse_edge(amalgam(), "e")
    assert len(H.vertices) == 1 and not H.edges
    assert isinstance(next(iter(H.vertices.values())), NestedGroup)
    hnn = make_gog({"F": FreeGroup(["a", "b"])}, [("t", "F", "F", ["a"], ["a"])])
    H = moves.collapse_edge(hnn, "t")
    assert not H.edges and isinstance(H.vertices["F"], NestedGroup)
    assert M.betti(H) == M.betti(hnn) == 3


def test_remove_hairs_examples():
    G = make_gog({"L": FreeGroup(["a", "b"]), "R": FreeGroup(["c", "d"]), "P": FreeGroup(["z"])},
                 [("e", "L", "R", ["a"], ["c^2"]), ("h", "R", "P", ["d"], ["z^2"])])
    H = moves.remove_hairs(G)
    assert set(H.vertices) == {"L", "R"} and M.betti(H) == M.betti(G)
    assert moves.remove_hairs(H) is H
    assert moves.remove_hairs(amalgam()) is not None
    assert len(moves.remove_hairs(amalgam()).vertices) == 2


def test_balance_examples():
    G = amalgam()
    H = moves.balance(G)
    # the root of c^2 is adjoined on the far side of the edge
    assert isinstance(H.vertices["L"], NestedGroup)
    assert H.edge("e").t_images == ((1,),)
    assert M.betti(H) == M.betti(G)
    balanced = make_gog({"L": FreeGroup(["a", "b"]), "R": FreeGroup(["c", "d"])},
                        [("e", "L", "R", ["a"], ["c"])])
    assert moves.balance(balanced) is balanced


def test_maximal_abelian_collapse_example():
    F = FreeGroup(["a", "b"])
    H = FreeGroup(["x", "y"])
    G = make_gog({"F": F, "H": H, "A": FreeAbelianGroup(["beta", "r"])},
                 [("e", "F", "H", ["a"], ["x"]), ("f", "H", "A", ["y"], ["beta"])])
    out = moves.maximal_abelian_collapse(G, "F")
    assert len(out.vertices) == 2 and len(out.edges) == 1
    assert M.validate(out) == [] and M.betti(out) == M.betti(G)
    two = make_gog({"F": F, "H": H}, [("e", "F", "H", ["a"], ["x"])])
    assert moves.maximal_abelian_collapse(two, "F").edges == two.edges
    with pytest.raises(PreconditionFailed):
        moves.maximal_abelian_collapse(make_gog({"F": F}), "F")


def test_json_and_dot_export():
    d = M.to_json_dict(example_one())
    assert d["vertices"] and d["edges"]
    dot = M.to_dot(amalgam())
    assert "digraph" in dot and "->" in dot


@given(seeds)
def test_betti_two_routes_and_bound(seed):
    G = random_gog(random.Random(seed))
    assert M.betti(G) == betti_by_sympy(G)
    assert M.betti_bound_check(G)


@given(seeds)
def test_betti_invariant_under_moves(seed):
    rng = random.Random(seed)
    G = random_gog(rng)
    b = M.betti(G)
    e = rng.choice(G.edges) if G.edges else None
    if e is not None and e.rank:
        end = rng.choice("it")
        vg = G.vertices[e.src if end == "i" else e.dst]
        H = moves.conjugate_boundary(G, e.id, end, random_element(rng, vg, allow_trivial=True))
        assert M.validate(H) == [] and M.betti(H) == b
    if e is not None:
        H = moves.collapse_edge(G, e.id)
        assert M.betti(H) == b
    if all(x.rank <= 1 for x in G.edges):
        H = moves.remove_hairs(G)
        assert M.betti(H) == b
        assert moves.remove_hairs(H) is H
        B = moves.balance(G)
        assert M.betti(B) == b


@given(seeds)
def test_balance_post_state(seed):
    G = random_gog(random.Random(seed))
    if any(e.rank > 1 for e in G.edges):
        return
    B = moves.balance(G)
    for e in B.edges:
        for v, imgs in ((e.src, e.i_images), (e.dst, e.t_images)):
            vg = B.vertices[v]
            for x in imgs:
                if vg.kind == "free":
                    assert W.primitive_root(x)[1] == 1
                elif vg.kind == "abelian":
                    from gogfold.ablin import primitive_part
                    assert primitive_part(x)[1] == 1


@given(seeds)
def test_stable_letters_count_cycles(seed):
    G = random_gog(random.Random(seed))
    pres = M.relative_presentation(G)
    assert len(pres.stable_letters) == G.cycle_rank()


@given(seeds)
def test_slide_preserves_betti(seed):
    rng = random.Random(seed)
    G = random_gog(rng)
    for e in G.edges:
        for f in G.edges:
            for se in ((e.id, 1), (e.id, -1)):
                for sf in ((f.id, 1), (f.id, -1)):
                    try:
                        H = moves.slide(G, se, sf)
                    except PreconditionFailed:
                        continue
                    assert M.validate(H) == [] and M.betti(H) == M.betti(G)
                    return
