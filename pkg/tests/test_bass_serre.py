import random

import pytest
from hypothesis import given, strategies as st

from gogfold import bass_serre as BS
from gogfold import words as W
from gogfold.corpus import _tree_path, random_closed_path, random_retract_fixture
from gogfold.errors import EdgeInTree, IllTyped, ProtectedSet
from gogfold.fixtures import (
    example_one, example_one_identity, example_three, example_three_identity,
    example_two_flat, example_two_relations, make_gog,
)
from gogfold.gog import format_path, parse_path
from gogfold.groups import FreeAbelianGroup, FreeGroup

seeds = st.integers(0, 10**6)


def hnn():
    return make_gog({"F": FreeGroup(["a", "b"])}, [("t", "F", "F", ["a"], ["a"])])


def P(G, text):
    return parse_path(G, text)


def test_normalize_resolves_pinch():
    G = hnn()
    p = BS.normalize(G, P(G, "[ F: 1 , t^-1 , F: a^2 , t , F: 1 ]"))
    assert p.edges == () and p.elements == ((1, 1),)
    q = P(G, "[ F: 1 , t^-1 , F: b , t , F: 1 ]")
    assert len(BS.normalize(G, q).edges) == 2


def test_paper_identities():
    assert example_one_identity(example_one())
    assert example_three_identity(example_three())


def test_edge_relation_orientation():
    rel = example_two_relations(example_two_flat())
    assert rel["r^-1 gamma r = gamma'"]
    assert not rel["gamma'^r = gamma"]
    assert rel["[p, t] = 1"] and rel["[s, a] = 1"]


def test_is_identity_examples():
    G = hnn()
    t = P(G, "[ F: 1 , t , F: 1 ]")
    assert not BS.is_identity(G, t)
    assert BS.is_identity(G, BS.concat(G, t, BS.inverse(G, t)))


def test_power_problem_examples():
    G = make_gog({"F": FreeGroup(["a", "b"]), "A": FreeAbelianGroup(["a", "r"])},
                 [("e", "F", "A", ["a"], ["a"])])
    u = P(G, "[ F: a , e , A: r^2 , e^-1 , F: 1 ]")
    g = P(G, "[ F: a^2 , e , A: r^4 , e^-1 , F: 1 ]")
    assert BS.power_problem(G, g, u) == 2
    assert BS.power_problem(G, BS.vertex_path(G, "F"), u) == 0
    assert BS.power_problem(G, P(G, "[ F: b ]"), u) is None


def test_ellipticity_examples():
    G = hnn()
    assert BS.is_elliptic(G, P(G, "[ F: a ]"))[0]
    assert not BS.is_elliptic(G, P(G, "[ F: 1 , t , F: 1 ]"))[0]
    g = P(G, "[ F: 1 , t^-1 , F: b , t , F: 1 ]")
    ok, conj = BS.is_elliptic(G, g)
    assert ok and len(conj.edges) == 1
    core = BS.normalize(G, BS.concat(G, BS.inverse(G, conj), g, conj))
    assert core.edges == () and core.elements == ((2,),)


def test_sigma_stable_examples():
    G = hnn()
    tree = G.spanning_tree()
    assert BS.sigma_stable(G, tree, P(G, "[ F: 1 , t , F: 1 ]"), "t") == 1
    assert BS.sigma_stable(G, tree, P(G, "[ F: 1 , t^-1 , F: a , t , F: 1 ]"), "t") == 0
    amal = make_gog({"L": FreeGroup(["a"]), "R": FreeGroup(["c"])}, [("e", "L", "R", ["a"], ["c"])])
    with pytest.raises(EdgeInTree):
        BS.sigma_stable(amal, amal.spanning_tree(), P(amal, "[ L: a ]"), "e")


def test_path_syntax_round_trip_and_typing():
    G = example_two_flat()
    text = "[ F: a b , s , F: b^-1 , e , A: t , e^-1 , F: 1 ]"
    p = P(G, text)
    assert p.edges == (("s", 1), ("e", 1), ("e", -1))
    assert P(G, format_path(G, p)) == p
    with pytest.raises((IllTyped, ValueError)):
        BS.check_path(G, BS.GAPath("A", ((0, 0),), (("s", 1),)))


def test_weidmann_nielsen_moves():
    G = hnn()
    a = P(G, "[ F: a ]")
    b = P(G, "[ F: b ]")
    t = P(G, "[ F: 1 , t , F: 1 ]")
    M = BS.MarkedGeneratingSet(((a, b), (t,)), (t,))
    assert BS.wn1(G, M, 1, BS.vertex_path(G, "F")).sets[1][0] == t
    with pytest.raises(ProtectedSet):
        BS.wn1(G, M, 0, t)
    M2 = BS.wn1(G, M, 1, t)
    assert BS.equal(G, M2.sets[1][0], t)
    M3 = BS.wn2(G, M, 0, a, b)
    assert BS.equal(G, M3.elements[0], BS.concat(G, a, t, b))
    with pytest.raises(IndexError):
        BS.wn2(G, M, 3, a, b)


@given(seeds)
def test_normal_form_properties_with_retraction(seed):
    rng = random.Random(seed)
    G, phi = random_retract_fixture(rng)
    p = random_closed_path(rng, G, "F", steps=rng.randint(0, 4))
    q = random_closed_path(rng, G, "F", steps=rng.randint(0, 4))
    n = BS.normalize(G, p)
    assert BS.normalize(G, n) == n
    assert BS.is_identity(G, BS.concat(G, p, BS.inverse(G, p)))
    # one-sided soundness: the retraction kills whatever is trivial
    pq = BS.concat(G, p, q)
    if BS.is_identity(G, pq):
        assert phi.path(G, pq) == ()
    assert phi.path(G, n) == phi.path(G, p)
    if phi.path(G, p) != ():
        assert not BS.is_identity(G, p)


def relator_at(G, rng, base):
    e = rng.choice(G.edges)
    j = rng.randrange(e.rank)
    x, y = e.i_images[j], e.t_images[j]
    Ve, Vt = G.vertices[e.src], G.vertices[e.dst]
    # x e y^-1 e^-1 is trivial at e.src
    rel = BS.GAPath(e.src, (x, Vt.inv(y), Ve.identity()), ((e.id, 1), (e.id, -1)))
    to = BS.GAPath(base, tuple(G.vertices[base].identity() for _ in range(1)), ())
    for sym in _tree_path(G, base, e.src):
        to = BS.concat(G, to, BS.edge_path(G, sym))
    return BS.concat(G, to, rel, BS.inverse(G, to))


@given(seeds)
def test_relator_insertion_is_invisible(seed):
    rng = random.Random(seed)
    G, _ = random_retract_fixture(rng)
    if not any(e.rank for e in G.edges):
        return
    p = random_closed_path(rng, G, "F", steps=3)
    q = random_closed_path(rng, G, "F", steps=3)
    r = relator_at(G, rng, "F")
    assert BS.is_identity(G, r)
    assert BS.equal(G, BS.concat(G, p, r, q), BS.concat(G, p, q))
    tree = G.spanning_tree()
    for e in G.edges:
        if e.id not in tree:
            s1 = BS.sigma_stable(G, tree, BS.concat(G, p, r, q), e.id)
            assert s1 == BS.sigma_stable(G, tree, BS.concat(G, p, q), e.id)


@given(seeds)
def test_sigma_stable_additive(seed):
    rng = random.Random(seed)
    G, _ = random_retract_fixture(rng)
    p = random_closed_path(rng, G, "F")
    q = random_closed_path(rng, G, "F")
    tree = G.spanning_tree()
    for e in G.edges:
        if e.id not in tree:
            s = BS.sigma_stable(G, tree, BS.normalize(G, BS.concat(G, p, q)), e.id)
            assert s == BS.sigma_stable(G, tree, p, e.id) + BS.sigma_stable(G, tree, q, e.id)


@given(seeds, st.integers(-6, 6))
def test_power_problem_recovers_exponent(seed, k):
    rng = random.Random(seed)
    G, _ = random_retract_fixture(rng)
    u = random_closed_path(rng, G, "F", steps=rng.randint(0, 3))
    if BS.is_identity(G, u):
        return
    assert BS.power_problem(G, BS.power(G, u, k), u) == k
