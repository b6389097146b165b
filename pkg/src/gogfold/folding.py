"""Folding moves on G(A)-graphs and the folding driver.

Adjustments (A0 conjugation, A1 Bass-Serre move, A2 simple adjustment,
L1 long range adjustment) change labels without changing the represented
subgroup.  Folds (F1-F4) identify edges, transmissions (T1) enlarge
B-vertex groups, shaves (S1) drop valence-1 vertices.  A graph is folded
when nothing but adjustments applies.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import ablin
from . import words as W
from .bass_serre import images_at_end, images_at_start
from .errors import BudgetExceeded, NotApplicable, NotFolded
from .gagraph import GAGraph, Sub
from .gog import EdgeData, GraphOfGroups
from .groups import FreeAbelianGroup, FreeGroup


@dataclass(frozen=True)
class Move:
    kind: str
    args: dict = field(default_factory=dict, hash=False, compare=False)
    prep: tuple = ()

    def describe(self, B: Optional[GAGraph] = None) -> dict:
        out = {"move": self.kind}
        for k, v in self.args.items():
            out[k] = _jsonable(v)
        if self.prep:
            out["prep"] = [m.describe(B) for m in self.prep]
        return out


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    return v


# ---- primitive label moves -------------------------------------------------

def _a0(B: GAGraph, v: int, g):
    """Conjugation at ``v``: ``B_v -> g B_v g^-1`` and ``e_i -> g e_i`` on edges leaving ``v``."""
    vg = B.vg(v)
    if vg.is_trivial(g):
        return
    B.subs[v] = B.subs[v].conjugated(g)
    for k, e in B.edges.items():
        if e.src == v:
            e.a = vg.mul(g, e.a)
        if e.dst == v:
            e.b = vg.mul(e.b, vg.inv(g))
    if v == B.base:
        B.twist = vg.mul(g, B.twist)


def _a1(B: GAGraph, h, c):
    """Bass-Serre move on the half-edge ``h``: ``(a, f, b) -> (a i(c), f, t(c)^-1 b)``."""
    a, sym, b, far = B.view(h)
    u = B.view((h[0], -h[1]))[3]
    U, V = B.vg(u), B.vg(far)
    a2 = U.mul(a, U.combine(images_at_start(B.A, sym), c))
    b2 = V.mul(V.inv(V.combine(images_at_end(B.A, sym), c)), b)
    B.set_view(h, a2, b2)


def _a2(B: GAGraph, h, g):
    """Left-multiply the start label of ``h`` by ``g`` (an element of ``B_u`` or an L1-enlarged group)."""
    a, _, b, _ = B.view(h)
    u = B.view((h[0], -h[1]))[3]
    B.set_view(h, B.vg(u).mul(g, a), b)


def _transmissions(B: GAGraph, h, subs=None) -> list:
    """Elements transmitted along half-edge ``h`` into its far vertex (one per admissible basis vector)."""
    subs = B.subs if subs is None else subs
    a, sym, b, far = B.view(h)
    u = B.view((h[0], -h[1]))[3]
    imgs_u = images_at_start(B.A, sym)
    imgs_v = images_at_end(B.A, sym)
    V = B.vg(far)
    out = []
    for c in subs[u].admissible(a, imgs_u):
        y = V.mul(V.mul(V.inv(b), V.combine(imgs_v, c)), b)
        out.append((tuple(c), y))
    return out


def _proper_transmissions(B: GAGraph):
    for k in sorted(B.edges):
        for d in (1, -1):
            h = (k, d)
            far = B.view(h)[3]
            for idx, (c, y) in enumerate(_transmissions(B, h)):
                if y not in B.subs[far]:
                    yield Move("T1", {"edge": k, "direction": d, "c": c, "basis_index": idx})


def _enlarged(B: GAGraph, u: int, exclude_edge: int, rounds: Optional[int] = None) -> tuple:
    """``B_u`` after every chain of transmissions avoiding ``exclude_edge``; also the transmissions used."""
    subs = dict(B.subs)
    used = []
    rounds = B.n_vertices + 1 if rounds is None else rounds
    for _ in range(rounds):
        changed = False
        for k in sorted(B.edges):
            if k == exclude_edge:
                continue
            for d in (1, -1):
                h = (k, d)
                far = B.view(h)[3]
                new = [y for _, y in _transmissions(B, h, subs) if y not in subs[far]]
                if new:
                    subs[far] = subs[far].join(new)
                    used.append((k, d))
                    changed = True
        if not changed:
            break
    return subs[u], used


def _shaves(B: GAGraph):
    for u in sorted(B.labels):
        if u == B.base:
            continue
        hs = B.half_edges(u)
        if len(hs) != 1:
            continue
        k, d = hs[0]
        h = (k, -d)  # seen from the neighbour
        a, sym, b, far = B.view(h)
        if far != u:
            continue
        V = B.vg(u)
        imgs = images_at_end(B.A, sym)
        C = []
        for x in B.subs[u].gens:
            c = V.coords(V.mul(V.mul(b, x), V.inv(b)), imgs)
            if c is None:
                break
            C.append(c)
        else:
            yield Move("S1", {"edge": k, "vertex": u, "C": tuple(tuple(c) for c in C)})


def _fold_pairs(B: GAGraph):
    for u in sorted(B.labels):
        hs = B.half_edges(u)
        for i, h1 in enumerate(hs):
            for h2 in hs[i + 1:]:
                if h1[0] == h2[0]:
                    continue
                if B.view(h1)[1] == B.view(h2)[1]:
                    yield u, h1, h2


def _plan_fold(B: GAGraph, u: int, h1, h2, group: Sub, via: str, transmissions=()) -> Optional[Move]:
    a1, sym, b1, v1 = B.view(h1)
    a2, _, b2, v2 = B.view(h2)
    if v2 == u and v1 != u:
        return _plan_fold(B, u, h2, h1, group, via, transmissions)
    imgs = images_at_start(B.A, sym)
    sol = group.solve_coset(a1, a2, imgs)
    if sol is None:
        return None
    g, c = sol
    U = B.vg(u)
    prep = []
    if not U.is_trivial(g):
        if via == "L1":
            prep.append(Move("L1", {"vertex": u, "edge": h2[0], "direction": h2[1], "g": g,
                                    "transmissions": tuple(transmissions)}))
        else:
            prep.append(Move("A2", {"vertex": u, "edge": h2[0], "direction": h2[1], "g": g}))
    if any(c):
        prep.append(Move("A1", {"edge": h2[0], "direction": h2[1], "c": tuple(c)}))
    if v1 == v2:
        kind = "F3" if v1 == u else "F4"
    else:
        kind = "F2" if u in (v1, v2) else "F1"
    return Move(kind, {"vertex": u, "e1": h1[0], "d1": h1[1], "e2": h2[0], "d2": h2[1], "via": via}, tuple(prep))


def enumerate_moves(B: GAGraph, include_l1: bool = True) -> list:
    """Applicable shaves, folds (with the adjustments enabling them) and proper transmissions, in priority order."""
    moves = list(_shaves(B))
    pairs = list(_fold_pairs(B))
    deferred = []
    for u, h1, h2 in pairs:
        m = _plan_fold(B, u, h1, h2, B.subs[u], "adjust")
        if m is not None:
            moves.append(m)
        else:
            deferred.append((u, h1, h2))
    if include_l1:
        for u, h1, h2 in deferred:
            big, used = _enlarged(B, u, h2[0])
            if big == B.subs[u]:
                continue
            m = _plan_fold(B, u, h1, h2, big, "L1", used)
            if m is not None:
                moves.append(m)
    moves.extend(_proper_transmissions(B))
    return moves


def next_move(B: GAGraph) -> Optional[Move]:
    for m in _shaves(B):
        return m
    pairs = list(_fold_pairs(B))
    for u, h1, h2 in pairs:
        m = _plan_fold(B, u, h1, h2, B.subs[u], "adjust")
        if m is not None:
            return m
    for u, h1, h2 in pairs:
        big, used = _enlarged(B, u, h2[0])
        if big == B.subs[u]:
            continue
        m = _plan_fold(B, u, h1, h2, big, "L1", used)
        if m is not None:
            return m
    for m in _proper_transmissions(B):
        return m
    return None


def is_folded(B: GAGraph) -> bool:
    return next_move(B) is None


# ---- applying moves ------------------------------------------------------

def _merge(B: GAGraph, keep: int, drop: int):
    B.subs[keep] = B.subs[keep].join(B.subs[drop].gens)
    for e in B.edges.values():
        if e.src == drop:
            e.src = keep
        if e.dst == drop:
            e.dst = keep
    del B.subs[drop]
    del B.labels[drop]


def _apply(B: GAGraph, m: Move, trace: Optional[list] = None):
    for p in m.prep:
        _apply(B, p, trace)
    A = m.args
    kind = m.kind
    if kind == "A0":
        _a0(B, A["vertex"], A["g"])
    elif kind == "A1":
        _a1(B, (A["edge"], A["direction"]), A["c"])
    elif kind in ("A2", "L1"):
        h = (A["edge"], A["direction"])
        u = A["vertex"]
        if kind == "A2" and A["g"] not in B.subs[u]:
            raise NotApplicable("A2 multiplier is not in the B-vertex group")
        if B.view((h[0], -h[1]))[3] != u:
            raise NotApplicable("A2 edge does not start at the vertex")
        _a2(B, h, A["g"])
    elif kind in ("F1", "F2", "F3", "F4"):
        _identify(B, m, trace)
        return
    elif kind == "T1":
        h = (A["edge"], A["direction"])
        far = B.view(h)[3]
        trans = dict(_transmissions(B, h))
        y = trans.get(tuple(A["c"]))
        if y is None or y in B.subs[far]:
            raise NotApplicable("transmission is not admissible or not proper")
        B.subs[far] = B.subs[far].join([y])
    elif kind == "S1":
        k, u = A["edge"], A["vertex"]
        if B.valence(u) != 1 or u == B.base:
            raise NotApplicable("shaving needs a valence-1 non-base vertex")
        e = B.edges[k]
        h = (k, 1) if e.dst == u else (k, -1)  # from the neighbour towards u
        a, sym, b, _ = B.view(h)
        v = B.view((k, -h[1]))[3]
        U = B.vg(v)
        imgs = images_at_start(B.A, sym)
        new = [U.mul(U.mul(a, U.combine(imgs, c)), U.inv(a)) for c in A["C"]]
        del B.edges[k]
        del B.subs[u]
        del B.labels[u]
        B.subs[v] = B.subs[v].join(new)
    else:
        raise NotApplicable(f"unknown move {kind}")
    if trace is not None:
        trace.append(m.kind)


def _identify(B: GAGraph, m: Move, trace):
    A = m.args
    u = A["vertex"]
    h1, h2 = (A["e1"], A["d1"]), (A["e2"], A["d2"])
    a1, sym1, b1, v1 = B.view(h1)
    a2, sym2, b2, v2 = B.view(h2)
    U = B.vg(u)
    if sym1 != sym2 or not U.equal(a1, a2):
        raise NotApplicable("fold needs equal start labels on edges of the same type")
    before = B.n_edges
    V = B.vg(v1)
    if v1 == v2:
        x = V.mul(V.inv(b1), b2)
        del B.edges[h2[0]]
        if not V.is_trivial(x):
            B.subs[v1] = B.subs[v1].join([x])
    else:
        if not V.equal(b1, b2):
            # conjugate at the far vertex that is not u so the end labels agree
            g = V.mul(V.inv(b1), b2)
            _a0(B, v2, g)
            if trace is not None:
                trace.append("A0")
        keep, drop, dead = (v1, v2, h2[0]) if v2 != B.base else (v2, v1, h1[0])
        del B.edges[dead]
        _merge(B, keep, drop)
    assert B.n_edges == before - 1, "a fold must remove exactly one edge"
    if trace is not None:
        trace.append(m.kind)


def apply_move(B: GAGraph, m: Move) -> GAGraph:
    out = B.copy()
    _apply(out, m)
    return out


def default_budget(B: GAGraph) -> int:
    ranks = sum(e.rank for e in B.A.edges)
    return 4 * B.n_edges * (1 + ranks)


@dataclass
class FoldResult:
    graph: GAGraph
    trace: list

    def trace_json(self) -> dict:
        return {"schema": "gogfold.fold-trace/1", "moves": self.trace, "folded": is_folded(self.graph)}


def fold(B: GAGraph, budget: Optional[int] = None, record: bool = True) -> FoldResult:
    """Apply moves in priority order (shave, adjusted fold, L1 fold, transmission) until folded."""
    B = B.copy()
    budget = default_budget(B) if budget is None else budget
    trace: list = []
    count = 0
    while True:
        m = next_move(B)
        if m is None:
            return FoldResult(B, trace)
        if count >= budget:
            raise BudgetExceeded(budget, trace)
        edges_before, verts_before = B.n_edges, B.n_vertices
        _apply(B, m)
        if m.kind.startswith("F"):
            assert B.n_edges < edges_before
        if m.kind == "S1":
            assert B.n_vertices < verts_before
        count += 1
        if record:
            trace.append(m.describe())


# ---- induced splitting ---------------------------------------------------

def _express(sub: Sub, x) -> tuple:
    if sub.vg.kind == "free":
        w = sub.graph.express(x)
        if w is None:
            raise NotFolded("edge image not in the B-vertex group")
        return w
    c = ablin.solve([list(b) for b in sub.lattice.basis], list(x))
    if c is None:
        raise NotFolded("edge image not in the B-vertex group")
    return tuple(c)


def _local_group(sub: Sub, v: int):
    n = len(sub.gens)
    names = [f"x{v}_{j + 1}" for j in range(n)]
    return FreeGroup(names) if sub.vg.kind == "free" else FreeAbelianGroup(names)


def induced_splitting(B: GAGraph, with_labels: bool = False):
    """Graph of groups of the represented subgroup read off a folded G(A)-graph.

    With ``with_labels`` also returns a map from new edge ids to the
    A-edge each one lies over.
    """
    if not is_folded(B):
        raise NotFolded("induced splitting needs a folded G(A)-graph")
    order = [B.base] + [v for v in sorted(B.labels) if v != B.base]
    vid = {v: f"u{i}" for i, v in enumerate(order)}
    groups = {vid[v]: _local_group(B.subs[v], v) for v in order}
    edges = []
    over = {}
    for n, k in enumerate(sorted(B.edges)):
        e = B.edges[k]
        a, sym, b, _ = B.view((k, 1))
        U, V = B.vg(e.src), B.vg(e.dst)
        L = B.subs[e.src].admissible(a, images_at_start(B.A, sym))
        ii, tt = [], []
        for c in L:
            x = U.mul(U.mul(a, U.combine(images_at_start(B.A, sym), c)), U.inv(a))
            y = V.mul(V.mul(V.inv(b), V.combine(images_at_end(B.A, sym), c)), b)
            ii.append(_to_local(B.subs[e.src], x))
            tt.append(_to_local(B.subs[e.dst], y))
        edges.append(EdgeData(f"f{n}", vid[e.src], vid[e.dst], len(L), tuple(ii), tuple(tt)))
        over[f"f{n}"] = sym[0]
    G = GraphOfGroups(groups, edges, None, "induced")
    return (G, over) if with_labels else G


def coarsen(G: GraphOfGroups, over: dict, collapse) -> GraphOfGroups:
    """Collapse every edge lying over an A-edge in ``collapse``.

    Reads an induced splitting computed over a refined base graph back at
    the coarser level the refined edges were unfolded from.
    """
    from .moves import collapse_edge
    collapse = set(collapse)
    for fid in sorted(f for f, a in over.items() if a in collapse):
        if fid in G.edge_index:
            G = collapse_edge(G, fid, simplify=False)
    return G


def _to_local(sub: Sub, x):
    w = _express(sub, x)
    if sub.vg.kind == "free":
        return W.free_reduce(w)
    return tuple(w)


def shape(G: GraphOfGroups) -> dict:
    """Coarse shape summary: vertex kinds and ranks, edge count, loops, cycle rank."""
    return {
        "vertices": {v: (vg.kind, getattr(vg, "rank", None)) for v, vg in G.vertices.items()},
        "edges": len(G.edges),
        "loops": sum(1 for e in G.edges if e.is_loop),
        "cycle_rank": G.cycle_rank(),
        "edge_ranks": sorted(e.rank for e in G.edges),
    }
