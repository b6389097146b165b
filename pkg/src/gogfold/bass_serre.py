"""Element arithmetic in fundamental groups of graphs of groups.

Elements are G(A)-paths ``a0, e1^s1, a1, ..., en^sn, an``.  The pinch
``e a e^-1`` with ``a`` in the boundary image at the middle vertex is
rewritten through the edge relation ``e^-1 i_e(c) e = t_e(c)``.  Vertex
groups are duck-typed (see :mod:`gogfold.gog`); they must provide ``mul``,
``inv``, ``is_trivial``, ``coords`` and ``combine``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import EdgeInTree, GogError, IllTyped, ProtectedSet, UnsupportedVertexGroup

MAX_DEPTH = 8
_depth = [0]


@dataclass(frozen=True)
class GAPath:
    """``start`` vertex id, ``n + 1`` vertex elements and ``n`` oriented edges ``(edge_id, +-1)``."""

    start: str
    elements: tuple
    edges: tuple = ()

    def __post_init__(self):
        if len(self.elements) != len(self.edges) + 1:
            raise IllTyped("a G(A)-path alternates n + 1 vertex elements with n edges")

    def __len__(self):
        return len(self.edges)

    def end(self, G) -> str:
        if not self.edges:
            return self.start
        return edge_end(G, self.edges[-1])

    def is_closed(self, G) -> bool:
        return self.end(G) == self.start


def edge_start(G, sym) -> str:
    e = G.edge(sym[0])
    return e.src if sym[1] > 0 else e.dst


def edge_end(G, sym) -> str:
    e = G.edge(sym[0])
    return e.dst if sym[1] > 0 else e.src


def images_at_start(G, sym) -> tuple:
    e = G.edge(sym[0])
    return e.i_images if sym[1] > 0 else e.t_images


def images_at_end(G, sym) -> tuple:
    e = G.edge(sym[0])
    return e.t_images if sym[1] > 0 else e.i_images


def vertex_path(G, v: str, x=None) -> GAPath:
    """Length-0 path at ``v`` carrying the vertex element ``x`` (identity by default)."""
    vg = G.vertices[v]
    return GAPath(v, (vg.identity() if x is None else x,), ())


def edge_path(G, sym) -> GAPath:
    s, t = edge_start(G, sym), edge_end(G, sym)
    return GAPath(s, (G.vertices[s].identity(), G.vertices[t].identity()), (tuple(sym),))


def check_path(G, p: GAPath):
    """Raise :class:`IllTyped` unless consecutive edges meet and elements sit at the right vertices."""
    v = p.start
    if v not in G.vertices:
        raise IllTyped(f"unknown vertex {v!r}")
    for k, sym in enumerate(p.edges):
        if sym[0] not in G.edge_index:
            raise IllTyped(f"unknown edge {sym[0]!r}")
        if edge_start(G, sym) != v:
            raise IllTyped(f"edge {sym} does not start at {v!r}")
        v = edge_end(G, sym)


def _push(G, elems: list, edges: list, sym, b):
    """Append ``sym, b`` to a reduced path held in ``elems``/``edges``, resolving pinches."""
    if edges and edges[-1][0] == sym[0] and edges[-1][1] == -sym[1]:
        last = edges[-1]
        mid_v = edge_end(G, last)
        c = G.vertices[mid_v].coords(elems[-1], images_at_end(G, last))
        if c is not None:
            edges.pop()
            elems.pop()
            back_v = edge_start(G, last)
            vg = G.vertices[back_v]
            y = vg.combine(images_at_start(G, last), c)
            elems[-1] = vg.mul(vg.mul(elems[-1], y), b)
            return
    edges.append(tuple(sym))
    elems.append(b)


def normalize(G, p: GAPath) -> GAPath:
    """Pinch-free form of ``p`` (same element, minimal number of edges)."""
    if _depth[0] > MAX_DEPTH:
        raise UnsupportedVertexGroup(f"nesting deeper than {MAX_DEPTH} levels")
    _depth[0] += 1
    try:
        vg0 = G.vertices[p.start]
        elems = [vg0.mul(vg0.identity(), p.elements[0])]
        edges: list = []
        for sym, b in zip(p.edges, p.elements[1:]):
            vb = G.vertices[edge_end(G, sym)]
            _push(G, elems, edges, sym, vb.mul(vb.identity(), b))
        return GAPath(p.start, tuple(elems), tuple(edges))
    finally:
        _depth[0] -= 1


def concat(G, *paths: GAPath) -> GAPath:
    """Product of paths, each starting where the previous one ends; result is normalized."""
    p = paths[0]
    elems = [p.elements[0]]
    edges: list = []
    cur = p.start
    for n, q in enumerate(paths):
        if n:
            if q.start != cur:
                raise IllTyped(f"cannot concatenate: path ends at {cur!r}, next starts at {q.start!r}")
            elems[-1] = G.vertices[cur].mul(elems[-1], q.elements[0])
        for sym, b in zip(q.edges, q.elements[1:]):
            _push(G, elems, edges, sym, b)
            cur = edge_end(G, sym)
    return normalize(G, GAPath(p.start, tuple(elems), tuple(edges)))


def inverse(G, p: GAPath) -> GAPath:
    if not p.edges:
        return GAPath(p.start, (G.vertices[p.start].inv(p.elements[0]),), ())
    end = p.end(G)
    elems = []
    verts = [p.start] + [edge_end(G, s) for s in p.edges]
    for v, a in zip(reversed(verts), reversed(p.elements)):
        elems.append(G.vertices[v].inv(a))
    edges = tuple((e, -s) for e, s in reversed(p.edges))
    return GAPath(end, tuple(elems), edges)


def power(G, p: GAPath, k: int) -> GAPath:
    if k < 0:
        p, k = inverse(G, p), -k
    result = vertex_path(G, p.start)
    base = p
    while k:
        if k & 1:
            result = concat(G, result, base)
        base = concat(G, base, base)
        k >>= 1
    return result


def is_identity(G, p: GAPath) -> bool:
    q = normalize(G, p)
    return not q.edges and G.vertices[q.start].is_trivial(q.elements[0])


def equal(G, p: GAPath, q: GAPath) -> bool:
    return is_identity(G, concat(G, p, inverse(G, q)))


def cyclic_normalize(G, p: GAPath) -> tuple:
    """``(core, conj)`` with ``p == conj core conj^-1`` and ``core`` cyclically reduced."""
    if not p.is_closed(G):
        raise IllTyped("cyclic normalization needs a closed path")
    q = normalize(G, p)
    conj = vertex_path(G, p.start)
    while q.edges:
        n = len(q.edges)
        first = q.edges[0]
        mid = edge_end(G, first)
        step = GAPath(q.start, (q.elements[0], G.vertices[mid].identity()), (first,))
        vs = G.vertices[q.start]
        rotated_elems = list(q.elements[1:-1]) + [vs.mul(q.elements[-1], q.elements[0]),
                                                  G.vertices[mid].identity()]
        rotated = normalize(G, GAPath(mid, tuple(rotated_elems), tuple(q.edges[1:]) + (first,)))
        if len(rotated.edges) >= n:
            break
        conj = concat(G, conj, step)
        q = rotated
    return q, conj


def power_problem(G, g: GAPath, u: GAPath) -> Optional[int]:
    """``k`` with ``g == u^k``, or ``None``."""
    if is_identity(G, u):
        raise GogError("power problem needs a non-trivial base element")
    if is_identity(G, g):
        return 0
    core, conj = cyclic_normalize(G, u)
    g2 = normalize(G, concat(G, inverse(G, conj), g, conj))
    if not core.edges:
        if g2.edges:
            return None
        return G.vertices[core.start].power_of(g2.elements[0], core.elements[0])
    n = len(core.edges)
    if len(g2.edges) % n:
        return None
    k = len(g2.edges) // n
    for cand in (k, -k):
        if is_identity(G, concat(G, g2, power(G, core, -cand))):
            return cand
    return None


def is_elliptic(G, g: GAPath) -> tuple:
    """``(True, conj)`` when ``conj^-1 g conj`` is a vertex element, else ``(False, None)``."""
    core, conj = cyclic_normalize(G, g)
    if core.edges:
        return False, None
    return True, conj


def sigma_stable(G, tree, g: GAPath, edge_id: str) -> int:
    """Exponent sum of the stable letter of a non-tree edge."""
    if edge_id in set(tree):
        raise EdgeInTree(f"edge {edge_id!r} lies in the spanning tree")
    return sum(s for e, s in g.edges if e == edge_id)


def abelian_coords(G, x: GAPath, images: Sequence[GAPath], depth: Optional[int] = None) -> Optional[tuple]:
    """Coordinates of ``x`` in the free abelian subgroup with basis ``images``.

    Rank 0 and 1 reduce to identity and power problems.  For higher rank the
    images are conjugated so the first one is a vertex element, then pushed
    across edges whose boundary contains it until every image sits in one
    vertex group that can answer the question.
    """
    r = len(images)
    if r == 0:
        return () if is_identity(G, x) else None
    if r == 1:
        k = power_problem(G, x, images[0])
        return None if k is None else (k,)
    core, conj = cyclic_normalize(G, images[0])
    if core.edges:
        raise UnsupportedVertexGroup("rank >= 2 boundary image containing a hyperbolic element")
    cinv = inverse(G, conj)
    items = [normalize(G, concat(G, cinv, y, conj)) for y in [x, *images]]
    seen = set()
    frontier = [(core.start, items)]
    limit = len(G.vertices) + 1 if depth is None else depth
    for _ in range(limit):
        nxt = []
        for v, its in frontier:
            if v in seen:
                continue
            seen.add(v)
            if all(not p.edges for p in its):
                vg = G.vertices[v]
                c = vg.coords(its[0].elements[0], [p.elements[0] for p in its[1:]])
                if c is not None or vg.is_abelian:
                    return c
            for e in G.edges:
                for s in (1, -1):
                    sym = (e.id, s)
                    if edge_start(G, sym) != v or edge_end(G, sym) in seen:
                        continue
                    if all(not p.edges for p in its[1:]) and G.vertices[v].coords(
                            its[1].elements[0], images_at_start(G, sym)) is not None:
                        ep = edge_path(G, sym)
                        epi = inverse(G, ep)
                        moved = [normalize(G, concat(G, epi, p, ep)) for p in its]
                        nxt.append((edge_end(G, sym), moved))
        frontier = nxt
        if not frontier:
            break
    return None


@dataclass(frozen=True)
class MarkedGeneratingSet:
    """Marking ``(S_1, ..., S_p; h_1, ..., h_s)``; ``S_1`` is protected from WN1."""

    sets: tuple
    elements: tuple = ()
    protected: tuple = field(default=(0,))

    def all_elements(self) -> list:
        out = [g for S in self.sets for g in S]
        return out + list(self.elements)


def _drawn_from(G, g: GAPath, pool: list) -> bool:
    return any(equal(G, g, h) or equal(G, g, inverse(G, h)) for h in pool)


def wn1(G, M: MarkedGeneratingSet, i: int, g: GAPath, check: bool = True) -> MarkedGeneratingSet:
    """Replace ``S_i`` by ``g^-1 S_i g`` with ``g`` taken from ``M - S_i``."""
    if not 0 <= i < len(M.sets):
        raise IndexError(f"no set S_{i + 1} in marking")
    if i in M.protected:
        raise ProtectedSet(f"S_{i + 1} holds F and may not be conjugated")
    pool = [h for j, S in enumerate(M.sets) if j != i for h in S] + list(M.elements)
    if check and not is_identity(G, g) and not _drawn_from(G, g, pool):
        raise GogError("WN1 conjugator must be an element of M - S_i")
    gi = inverse(G, g)
    new = tuple(concat(G, gi, h, g) for h in M.sets[i])
    sets = M.sets[:i] + (new,) + M.sets[i + 1:]
    return MarkedGeneratingSet(sets, M.elements, M.protected)


def wn2(G, M: MarkedGeneratingSet, i: int, g1: GAPath, g2: GAPath, check: bool = True) -> MarkedGeneratingSet:
    """Replace ``h_i`` by ``g1 h_i g2`` with ``g1, g2`` taken from ``M - {h_i}``."""
    if not 0 <= i < len(M.elements):
        raise IndexError(f"no element h_{i + 1} in marking")
    pool = [h for S in M.sets for h in S] + [h for j, h in enumerate(M.elements) if j != i]
    if check:
        for g in (g1, g2):
            if not is_identity(G, g) and not _drawn_from(G, g, pool):
                raise GogError("WN2 multipliers must be elements of M - {h_i}")
    h = concat(G, g1, M.elements[i], g2)
    return MarkedGeneratingSet(M.sets, M.elements[:i] + (h,) + M.elements[i + 1:], M.protected)
