"""Worked example groups used by tests, the CLI ``verify-examples`` task and demos."""
from __future__ import annotations

from .bass_serre import concat, inverse, is_identity, power
from .gog import EdgeData, GraphOfGroups, parse_path, require_valid
from .groups import FreeAbelianGroup, FreeGroup, NestedGroup


def make_gog(vertices: dict, edges=(), tree=None, name: str = "") -> GraphOfGroups:
    """Build a graph of groups from ``(id, src, dst, i_texts, t_texts)`` tuples.

    Boundary images are written in each endpoint's element syntax; the edge
    group rank is the number of images.
    """
    out = []
    for eid, src, dst, i_txt, t_txt in edges:
        A, B = vertices[src], vertices[dst]
        out.append(EdgeData(eid, src, dst, len(i_txt),
                            tuple(A.parse(x) for x in i_txt), tuple(B.parse(x) for x in t_txt)))
    return require_valid(GraphOfGroups(vertices, out, tree, name))


U_WORD = "a^-1 b^-1 a b a^-1 b^-1 a"  # [a,b] a^-1 b^-1 a, followed by t


def centralizer_extension_f_tilde() -> GraphOfGroups:
    """``F(a,b)`` with the centralizer of ``a`` extended by ``t``: one HNN loop ``a <-> a``."""
    F = FreeGroup(["a", "b"])
    return make_gog({"F": F}, [("t", "F", "F", ["a"], ["a"])], name="Ftilde")


def example_one() -> GraphOfGroups:
    """``<F, t, s | [t,a], [s,u]>`` with ``u = [a,b] a^-1 b^-1 a t``, as a loop over the nested ``F~``."""
    inner = centralizer_extension_f_tilde()
    V = NestedGroup(inner, "F")
    u = f"[ F: {U_WORD} , t , F: 1 ]"
    return make_gog({"X": V}, [("s", "X", "X", [u], [u])], name="F2")


def example_one_witness(G: GraphOfGroups) -> dict:
    """Images of ``x, y`` and the element ``u``, all as closed paths at ``X``."""
    s = "[ X: 1 , s , X: 1 ]"
    S = parse_path(G, s)
    Si = inverse(G, S)
    xin = parse_path(G, "[ X: [ F: b^-1 , t , F: 1 ] ]")
    yin = parse_path(G, "[ X: [ F: b^-1 a b ] ]")
    u = parse_path(G, f"[ X: [ F: {U_WORD} , t , F: 1 ] ]")
    return {"x": concat(G, Si, xin, S), "y": concat(G, Si, yin, S), "u": u}


def example_one_identity(G: GraphOfGroups) -> bool:
    """``[x,y]^2 x u^-1`` is trivial in ``F2``."""
    w = example_one_witness(G)
    x, y, u = w["x"], w["y"], w["u"]
    comm = concat(G, inverse(G, x), inverse(G, y), x, y)
    return is_identity(G, concat(G, power(G, comm, 2), x, inverse(G, u)))


Q_WORD = "a^2 b^-1 a^2 b"  # a^2 (b^-1 a b)^2


def example_two_outer() -> GraphOfGroups:
    """``F~ *_p Ab(p, t)`` where ``F~ = <F, s | [s,a]>`` and ``p = s^-1 q s``."""
    F = FreeGroup(["a", "b"])
    inner = make_gog({"F": F}, [("s", "F", "F", ["a"], ["a"])], name="Fs")
    V = NestedGroup(inner, "F")
    p = f"[ F: 1 , s^-1 , F: {Q_WORD} , s , F: 1 ]"
    return make_gog({"X": V, "A": FreeAbelianGroup(["p", "t"])},
                    [("e", "X", "A", [p], ["p"])], name="F2")


def example_two_flat() -> GraphOfGroups:
    """The same group on one level: ``F`` with an ``s`` loop and an edge to ``Ab(q, t)`` over ``q``."""
    F = FreeGroup(["a", "b"])
    return make_gog({"F": F, "A": FreeAbelianGroup(["q", "t"])},
                    [("s", "F", "F", ["a"], ["a"]), ("e", "F", "A", [Q_WORD], ["q"])], name="F2flat")


def example_two_elements(G: GraphOfGroups) -> dict:
    """Named elements of the flat model, closed paths at ``F``."""
    P = lambda text: parse_path(G, text, start="F")  # noqa: E731
    return {
        "a": P("[ F: a ]"),
        "b": P("[ F: b ]"),
        "s": P("[ F: 1 , s , F: 1 ]"),
        "t": P("[ F: 1 , s^-1 , F: 1 , e , A: t , e^-1 , F: 1 , s , F: 1 ]"),
        "r": P("[ F: 1 , s^-1 , F: b , s , F: 1 ]"),
        "gamma": P("[ F: 1 , s^-1 , F: a , s , F: 1 ]"),
        "gamma'": P("[ F: 1 , s^-1 , F: b^-1 a b , s , F: 1 ]"),
        "p": P(f"[ F: 1 , s^-1 , F: {Q_WORD} , s , F: 1 ]"),
    }


def example_two_relations(G: GraphOfGroups) -> dict:
    """The relations the example asserts, each mapped to whether it holds."""
    el = example_two_elements(G)
    conj = lambda x, g: concat(G, inverse(G, g), x, g)  # noqa: E731
    comm = lambda x, y: concat(G, inverse(G, x), inverse(G, y), x, y)  # noqa: E731
    return {
        "r^-1 gamma r = gamma'": is_identity(G, concat(G, conj(el["gamma"], el["r"]), inverse(G, el["gamma'"]))),
        "gamma'^r = gamma": is_identity(G, concat(G, conj(el["gamma'"], el["r"]), inverse(G, el["gamma"]))),
        "[p, t] = 1": is_identity(G, comm(el["p"], el["t"])),
        "[s, a] = 1": is_identity(G, comm(el["s"], el["a"])),
    }


def example_three() -> GraphOfGroups:
    """``<F, s, t, r | [t,a], [s, b^-1 a b], [u, r]>`` as a loop ``r`` over a two-loop nested vertex."""
    F = FreeGroup(["a", "b"])
    inner = make_gog({"F": F}, [("t", "F", "F", ["a"], ["a"]),
                                ("s", "F", "F", ["b^-1 a b"], ["b^-1 a b"])], name="Fts")
    V = NestedGroup(inner, "F")
    u = f"[ F: {U_WORD} , t , F: 1 ]"
    return make_gog({"X": V}, [("r", "X", "X", [u], [u])], name="F1")


def example_three_identity(G: GraphOfGroups) -> bool:
    """``(sr)^-1 b^-1 a b (sr) = r^-1 b^-1 a b r``."""
    s = parse_path(G, "[ X: [ F: 1 , s , F: 1 ] ]")
    r = parse_path(G, "[ X: 1 , r , X: 1 ]")
    y = parse_path(G, "[ X: [ F: b^-1 a b ] ]")
    sr = concat(G, s, r)
    lhs = concat(G, inverse(G, sr), y, sr)
    rhs = concat(G, inverse(G, r), y, r)
    return is_identity(G, concat(G, lhs, inverse(G, rhs)))


def example_two_fold(budget=None) -> dict:
    """Fold the wedge of ``<F, s^-1 b s, t>`` over the outer splitting (through its flattening).

    Returns the folded G(A)-graph, the induced splitting over the flattened
    base and the induced splitting read back at the outer level.
    """
    from .folding import coarsen, fold, induced_splitting
    from .gagraph import make_wedge
    from .moves import flatten_vertex

    outer = example_two_outer()
    flat, tr, inner_edges = flatten_vertex(outer, "X")
    P = lambda text: tr(parse_path(outer, text, start="X"))  # noqa: E731
    words = [P("[ X: [ F: 1 , s^-1 , F: b , s , F: 1 ] ]"), P("[ X: 1 , e , A: t , e^-1 , X: 1 ]")]
    base = flat.vertices["F"]
    B = make_wedge(flat, "F", [base.parse("a"), base.parse("b")], words)
    res = fold(B, budget)
    induced, over = induced_splitting(res.graph, with_labels=True)
    return {"outer": outer, "flat": flat, "folded": res.graph, "trace": res.trace,
            "induced_flat": induced, "induced_outer": coarsen(induced, over, inner_edges)}


# ---- one constructor per classification case --------------------------------

W_XY = "x^-1 y^-1 x y x^-1 y^-1 x y x"  # [x,y]^2 x


def _F():
    return FreeGroup(["a", "b"])


def _H(names=("x", "y")):
    return FreeGroup(list(names))


def ice_amalgam(u: str = "a") -> NestedGroup:
    """``F *_<u> Ab(c, r)`` written as a nested two-vertex graph, ``u`` glued to ``c``."""
    inner = make_gog({"F": _F(), "A": FreeAbelianGroup(["c", "r"])}, [("e", "F", "A", [u], ["c"])], name="ICE")
    return NestedGroup(inner, "F")


def example_one_amalgam() -> GraphOfGroups:
    """``F~ *_<u = w(x,y)> <x, y>`` with ``F~ = F *_<a> Ab(c, r)`` and ``u = [a,b] a^-1 b^-1 a r``."""
    X = ice_amalgam("a")
    u = f"[ F: {U_WORD} , e , A: r , e^-1 , F: 1 ]"
    return make_gog({"X": X, "H": _H()}, [("f", "X", "H", [u], [W_XY])], name="F2amalgam")


def centralizer_extension(alpha: str = "a") -> GraphOfGroups:
    """``F *_<alpha> Ab(alpha, r)``."""
    return make_gog({"F": _F(), "A": FreeAbelianGroup(["c", "r"])}, [("e", "F", "A", [alpha], ["c"])], name="Fext")


def qh_extension(alpha: str = "a^2 b^-1 a b") -> GraphOfGroups:
    """``<F, s, t | [s,t] = alpha>`` as ``F *_<alpha> F(s, t)``."""
    return make_gog({"F": _F(), "Q": _H(("s", "t"))}, [("e", "F", "Q", [alpha], ["s^-1 t^-1 s t"])], name="QH")


def classification_fixtures() -> dict:
    """Case id -> ``(graph, F vertex)``; every case of the classification has one entry."""
    F, H = _F, _H
    Ab = lambda: FreeAbelianGroup(["c", "r"])  # noqa: E731
    Ab2 = lambda: FreeAbelianGroup(["d", "q"])  # noqa: E731
    out = {}
    out["2.2-F-free"] = make_gog({"F": F()}, [("t", "F", "F", [], [])])
    out["2.2-F-times-H"] = make_gog({"F": F(), "H": H()}, [("e", "F", "H", [], [])])
    out["2.2-ICE-times-free"] = make_gog({"X": ice_amalgam()}, [("s", "X", "X", [], [])])
    out["2.3-two-vertex"] = centralizer_extension("a")
    out["2.3-three-vertex-line"] = make_gog({"F": F(), "A": Ab(), "B": Ab2()},
                                            [("e", "F", "A", ["a"], ["c"]), ("f", "F", "B", ["b"], ["d"])])
    out["2.3-loop-plus-edge"] = make_gog({"F": F(), "A": Ab()},
                                         [("t", "F", "F", ["b"], ["a^-1 b^-1 a b^2"]), ("e", "F", "A", ["a"], ["c"])])
    out["2.4.1-A1"] = make_gog({"F": F(), "H": H()}, [("e", "F", "H", ["a b^2"], ["x^2 y"])])
    out["2.4.1-A2-QH"] = qh_extension()
    out["2.4.1-B1"] = make_gog({"F": F(), "H": H()},
                               [("e", "F", "H", ["a b^2"], ["x^2 y"]), ("t", "H", "H", ["x y x y^-1"], ["y^2 x^-1 y"])])
    out["2.4.1-B2"] = make_gog({"F": F(), "H": H()},
                               [("e", "F", "H", ["a b^2"], ["x^2 y"]), ("t", "F", "H", ["b a^2"], ["x y x y^-1"])])
    out["2.4.1-C1"] = make_gog({"F": F(), "H": H()},
                               [("e", "F", "H", ["a b^2"], ["x^2 y"]), ("t", "F", "H", ["b a^2"], ["x y x y^-1"]),
                                ("s", "H", "H", ["y^3 x"], ["x^-2 y^-1 x"])])
    out["2.4.1-C2"] = make_gog({"F": F(), "H": H()},
                               [("e", "F", "H", ["a b^2"], ["x"]), ("t", "F", "H", ["b a^2"], ["y"]),
                                ("s", "F", "H", ["a b a^-1 b^2"], ["x y x"])])
    out["2.4.2-A"] = make_gog({"F": F(), "H": H(), "A": Ab()},
                              [("e", "F", "H", ["a b^2"], ["x^2 y"]), ("f", "H", "A", ["x y^3"], ["c"])])
    out["2.4.2-B1"] = make_gog({"F": F(), "H": H(), "A": Ab()},
                               [("e", "F", "H", ["a b^2"], ["x^2 y"]), ("f", "H", "A", ["x y^3"], ["c"]),
                                ("t", "H", "H", ["x y x y^-1"], ["y^2 x^-1 y"])])
    out["2.4.2-B2"] = make_gog({"F": F(), "H": H(), "A": Ab()},
                               [("e", "F", "H", ["a b^2"], ["x^2 y"]), ("f", "H", "A", ["x y^3"], ["c"]),
                                ("t", "F", "H", ["b a^2"], ["x y x y^-1"])])
    out["2.4.3-1"] = example_one_amalgam()
    out["2.4.3-2"] = make_gog({"X": ice_amalgam(), "H": H()},
                              [("f", "X", "H", ["a b^2"], ["x^2 y"]), ("t", "H", "H", ["x y x y^-1"], ["y^2 x^-1 y"])])
    out["2.4.3-3"] = make_gog({"X": ice_amalgam(), "H": H()},
                              [("f", "X", "H", ["a b^2"], ["x^2 y"]),
                               ("t", "X", "H", ["[ F: b , e , A: r , e^-1 , F: a ]"], ["x y x y^-1"])])
    inner = make_gog({"F": F(), "H": H()}, [("e", "F", "H", ["a b^2"], ["x^2 y"])], name="Fx")
    out["2.5-I"] = make_gog({"X": NestedGroup(inner, "F")},
                            [("t", "X", "X", ["a b a^-1 b^2"], ["b a^3"]), ("s", "X", "X", ["b^2 a"], ["a b^-1 a^2"])])
    out["2.5-II"] = example_one()
    return {k: (G, "X" if "X" in G.vertices else "F") for k, G in out.items()}


def double_hnn_with_abelian() -> GraphOfGroups:
    """Two loops at ``F`` and a pendant ``Ab(beta, r)``: the shape the two-cycle lint rejects."""
    return make_gog({"F": _F(), "A": FreeAbelianGroup(["c", "r"])},
                    [("t", "F", "F", ["b"], ["a^-1 b a^2"]), ("s", "F", "F", ["a b^2"], ["b a^3"]),
                     ("e", "F", "A", ["a"], ["c"])], name="doubleHNNab")


def double_hnn_cyclic() -> GraphOfGroups:
    return make_gog({"F": _F()}, [("t", "F", "F", ["b"], ["a^-1 b a^2"]), ("s", "F", "F", ["a b^2"], ["b a^3"])],
                    name="doubleHNN")


def example_one_flipped() -> GraphOfGroups:
    """Example 1 with the centralizer relation sign-flipped: ``t^-1 a t = a^-1``."""
    F = FreeGroup(["a", "b"])
    inner = make_gog({"F": F}, [("t", "F", "F", ["a"], ["a^-1"])], name="Fflip")
    V = NestedGroup(inner, "F")
    u = f"[ F: {U_WORD} , t , F: 1 ]"
    return make_gog({"X": V}, [("s", "X", "X", [u], [u])], name="F2flip")
