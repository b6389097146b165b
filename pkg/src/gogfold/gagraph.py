"""G(A)-graphs: graphs mapping onto a graph of groups, carrying subgroups and edge labels.

A B-vertex ``u`` carries a subgroup ``B_u`` of the vertex group ``A_[u]``;
a B-edge carries a label ``(e_i, [e], e_t)``.  The subgroup represented
at the base vertex is generated by the labels of B-loops.  The folding
engine itself lives in :mod:`gogfold.folding`.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Optional

from . import ablin
from . import stallings as S
from . import words as W
from .bass_serre import GAPath, concat, edge_end, edge_start, images_at_end, images_at_start, inverse, normalize
from .errors import IllTyped, NotClosed, UnsupportedVertexGroup


class Sub:
    """Finitely generated subgroup of a free or free abelian vertex group."""

    def __init__(self, vg, gens=()):
        if vg.kind not in ("free", "abelian"):
            raise UnsupportedVertexGroup(
                f"folding needs free or free abelian vertex groups, found {vg.kind}")
        self.vg = vg
        if vg.kind == "free":
            gens = [W.free_reduce(g) for g in gens]
            self.graph = S.subgroup_graph(gens, vg.rank)
            self.gens = self.graph.basis()
        else:
            self.lattice = ablin.Lattice.span([list(g) for g in gens], vg.rank)
            self.gens = [tuple(b) for b in self.lattice.basis]

    def __contains__(self, x) -> bool:
        if self.vg.kind == "free":
            return S.member(self.graph, x)
        return list(x) in self.lattice

    def __eq__(self, other):
        if not isinstance(other, Sub) or other.vg != self.vg:
            return False
        if self.vg.kind == "free":
            return self.graph == other.graph
        return self.lattice == other.lattice

    def is_trivial(self) -> bool:
        return not self.gens

    def join(self, xs) -> "Sub":
        return Sub(self.vg, list(self.gens) + list(xs))

    def conjugated(self, g) -> "Sub":
        """``g X g^-1``."""
        if self.vg.kind == "abelian":
            return self
        return Sub(self.vg, [W.mul(g, x, W.inverse(g)) for x in self.gens])

    def admissible(self, a, images) -> list:
        """Basis of ``{c in Z^r : a (prod images^c) a^-1 in X}``."""
        r = len(images)
        if r == 0:
            return []
        if self.vg.kind == "abelian":
            return self.lattice.preimage([list(x) for x in images])
        if r > 1:
            raise UnsupportedVertexGroup("higher rank edge group at a free vertex")
        k = S.intersect_cyclic(self.graph, W.mul(a, images[0], W.inverse(a)))
        return [] if k is None else [[k]]

    def solve_coset(self, x, a, images):
        """``(g, c)`` with ``g`` in X and ``x == g a i(c)``, or ``None``."""
        vg = self.vg
        r = len(images)
        if vg.kind == "abelian":
            rows = [list(b) for b in self.lattice.basis] + [list(y) for y in images]
            diff = [p - q for p, q in zip(x, a)]
            sol = ablin.solve(rows, diff)
            if sol is None:
                return None
            k = len(self.lattice.basis)
            c = tuple(sol[k:])
            g = tuple(p - q for p, q in zip(diff, vg.combine(images, c)))
            return g, c
        if r == 0:
            g = W.mul(x, W.inverse(a))
            return (g, ()) if g in self else None
        found = S.double_coset_rep(self.graph, a, images[0], x)
        if found is None:
            return None
        g, k = found
        return g, (k,)

    def format(self) -> str:
        return "<" + ", ".join(self.vg.format(g) for g in self.gens) + ">"


@dataclass
class BEdge:
    src: int
    dst: int
    sym: tuple       # oriented A-edge (edge_id, +-1)
    a: object        # e_i, element of A at the start of sym
    b: object        # e_t, element of A at the end of sym


class GAGraph:
    """Mutable working representation; public functions copy before changing it."""

    def __init__(self, A, base_label: str):
        self.A = A
        self.labels: dict = {}
        self.subs: dict = {}
        self.edges: dict = {}
        self.base = 0
        self.twist = A.vertices[base_label].identity()
        self._next_v = 0
        self._next_e = 0

    def copy(self) -> "GAGraph":
        out = copy.copy(self)
        out.labels = dict(self.labels)
        out.subs = dict(self.subs)
        out.edges = {k: copy.copy(e) for k, e in self.edges.items()}
        return out

    # -- construction -------------------------------------------------------
    def add_vertex(self, label: str, gens=()) -> int:
        v = self._next_v
        self._next_v += 1
        self.labels[v] = label
        self.subs[v] = Sub(self.A.vertices[label], gens)
        return v

    def add_edge(self, src: int, dst: int, sym, a=None, b=None) -> int:
        sym = tuple(sym)
        if edge_start(self.A, sym) != self.labels[src] or edge_end(self.A, sym) != self.labels[dst]:
            raise IllTyped(f"edge {sym} does not map {self.labels[src]!r} -> {self.labels[dst]!r}")
        ga, gb = self.A.vertices[self.labels[src]], self.A.vertices[self.labels[dst]]
        e = self._next_e
        self._next_e += 1
        self.edges[e] = BEdge(src, dst, sym, ga.identity() if a is None else a, gb.identity() if b is None else b)
        return e

    # -- queries ------------------------------------------------------------
    def vg(self, v: int):
        return self.A.vertices[self.labels[v]]

    def half_edges(self, v: int) -> list:
        """``(edge, direction)`` pairs leaving ``v``; loops contribute both directions."""
        out = []
        for k in sorted(self.edges):
            e = self.edges[k]
            if e.src == v:
                out.append((k, 1))
            if e.dst == v:
                out.append((k, -1))
        return out

    def view(self, h) -> tuple:
        """``(a, sym, b, far)`` of a half-edge as seen from its start."""
        k, d = h
        e = self.edges[k]
        if d > 0:
            return e.a, e.sym, e.b, e.dst
        ga, gb = self.vg(e.src), self.vg(e.dst)
        return gb.inv(e.b), (e.sym[0], -e.sym[1]), ga.inv(e.a), e.src

    def set_view(self, h, a, b):
        """Store the label of half-edge ``h`` given from its start."""
        k, d = h
        e = self.edges[k]
        if d > 0:
            e.a, e.b = a, b
        else:
            e.b, e.a = self.vg(e.dst).inv(a), self.vg(e.src).inv(b)

    def valence(self, v: int) -> int:
        return len(self.half_edges(v))

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def spanning_tree(self) -> dict:
        """Half-edge path (list) from the base to every vertex."""
        paths = {self.base: []}
        queue = [self.base]
        while queue:
            v = queue.pop(0)
            for h in self.half_edges(v):
                far = self.view(h)[3]
                if far not in paths:
                    paths[far] = paths[v] + [h]
                    queue.append(far)
        return paths

    def b_path_label(self, start: int, hs, elems=None) -> GAPath:
        """Label ``mu`` of the B-path along half-edges ``hs`` with B-vertex elements ``elems``."""
        A = self.A
        n = len(hs)
        if elems is None:
            verts = [start]
            for h in hs:
                verts.append(self.view(h)[3])
            elems = [self.vg(v).identity() for v in verts]
        if len(elems) != n + 1:
            raise IllTyped("a B-path has one more element than edges")
        if n == 0:
            return GAPath(self.labels[start], (elems[0],), ())
        out = []
        syms = []
        prev_b = None
        v = start
        for j, h in enumerate(hs):
            a, sym, b, far = self.view(h)
            vg = self.vg(v)
            x = vg.mul(elems[j], a) if prev_b is None else vg.mul(vg.mul(prev_b, elems[j]), a)
            out.append(x)
            syms.append(sym)
            prev_b = b
            v = far
        out.append(self.vg(v).mul(prev_b, elems[-1]))
        return normalize(A, GAPath(self.labels[start], tuple(out), tuple(syms)))

    def pi1_generators(self) -> list:
        """Closed A-paths generating the represented subgroup (twist applied)."""
        A = self.A
        paths = self.spanning_tree()
        if len(paths) != self.n_vertices:
            raise IllTyped("G(A)-graph is disconnected")
        tree = {h[0] for p in paths.values() for h in p}
        gens = []
        for v in sorted(self.labels):
            to_v = self.b_path_label(self.base, paths[v])
            back = inverse(A, to_v)
            for x in self.subs[v].gens:
                gens.append(concat(A, to_v, GAPath(self.labels[v], (x,), ()), back))
        for k in sorted(self.edges):
            if k in tree:
                continue
            e = self.edges[k]
            hs = paths[e.src] + [(k, 1)] + [(h[0], -h[1]) for h in reversed(paths[e.dst])]
            gens.append(self.b_path_label(self.base, hs))
        tw = GAPath(self.labels[self.base], (self.twist,), ())
        twi = inverse(A, tw)
        return [concat(A, twi, g, tw) for g in gens]

    # -- export -------------------------------------------------------------
    def to_dot(self, name: str = "B") -> str:
        lines = [f"digraph {name} {{"]
        for v in sorted(self.labels):
            shape = ", shape=doublecircle" if v == self.base else ""
            lines.append(f'  {v} [label="({self.subs[v].format()}, {self.labels[v]})"{shape}];')
        for k in sorted(self.edges):
            e = self.edges[k]
            ga, gb = self.vg(e.src), self.vg(e.dst)
            sym = e.sym[0] if e.sym[1] > 0 else f"{e.sym[0]}^-1"
            lines.append(f'  {e.src} -> {e.dst} [label="({ga.format(e.a)}, {sym}, {gb.format(e.b)})"];')
        lines.append("}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "schema": "gogfold.ga-graph/1",
            "base": self.base,
            "vertices": [{"id": v, "label": self.labels[v], "subgroup": [self.vg(v).format(g) for g in self.subs[v].gens]}
                         for v in sorted(self.labels)],
            "edges": [{"id": k, "src": e.src, "dst": e.dst, "edge": e.sym[0], "orientation": e.sym[1],
                       "e_i": self.vg(e.src).format(e.a), "e_t": self.vg(e.dst).format(e.b)}
                      for k, e in sorted(self.edges.items())],
        }


def make_g_loop(A, g: GAPath, base: Optional[str] = None) -> GAGraph:
    """Cycle labelled ``(b0, e1, 1), ..., (b_{n-1}, e_n, b_n)``; a length-0 ``g`` becomes the base subgroup."""
    base = g.start if base is None else base
    if g.start != base or not g.is_closed(A):
        raise NotClosed(f"element is not a closed path at {base!r}")
    B = GAGraph(A, base)
    v0 = B.add_vertex(base)
    _attach_loop(B, v0, g)
    return B


def _attach_loop(B: GAGraph, v0: int, g: GAPath):
    A = B.A
    if not g.edges:
        vg = A.vertices[g.start]
        if not vg.is_trivial(g.elements[0]):
            B.subs[v0] = B.subs[v0].join([g.elements[0]])
        return
    n = len(g.edges)
    cur = v0
    for j, sym in enumerate(g.edges):
        if j == n - 1:
            nxt = v0
            b = g.elements[-1]
        else:
            nxt = B.add_vertex(edge_end(A, sym))
            b = None
        B.add_edge(cur, nxt, sym, g.elements[j], b)
        cur = nxt


def make_wedge(A, base: str, base_gens, words) -> GAGraph:
    """One vertex labelled ``(<base_gens>, base)`` with a g-loop attached for every word."""
    B = GAGraph(A, base)
    v0 = B.add_vertex(base, base_gens)
    for w in words:
        if w.start != base or not w.is_closed(A):
            raise NotClosed(f"wedge words must be closed paths at {base!r}")
        _attach_loop(B, v0, w)
    return B


def label_of_path(B: GAGraph, start: int, hs, elems=None) -> GAPath:
    return B.b_path_label(start, hs, elems)


def rose_from_free(A, vertex: Optional[str] = None):
    """Convert a single free vertex group into a rose: trivial vertex, one rank-0 loop per generator.

    Returns ``(rose, translate)`` where ``translate(word)`` is the
    corresponding closed path.  Both graphs have the same fundamental group.
    """
    from .gog import EdgeData, GraphOfGroups
    from .groups import FreeGroup

    vertex = next(iter(A.vertices)) if vertex is None else vertex
    F = A.vertices[vertex]
    if F.kind != "free" or A.edges:
        raise UnsupportedVertexGroup("rose conversion needs a single free vertex and no edges")
    names = list(F.alphabet.generators)
    rose = GraphOfGroups({"o": FreeGroup([])}, [EdgeData(n, "o", "o", 0) for n in names], None, "rose")

    def translate(w) -> GAPath:
        w = W.free_reduce(w)
        syms = tuple((names[abs(x) - 1], 1 if x > 0 else -1) for x in w)
        return GAPath("o", ((),) * (len(w) + 1), syms)

    return rose, translate


def to_subgroup_graph(B: GAGraph, generators) -> S.SubgroupGraph:
    """Read a rose-based G(A)-graph with trivial vertex groups as a Stallings graph."""
    index = {n: i + 1 for i, n in enumerate(generators)}
    order = sorted(B.labels)
    pos = {v: i for i, v in enumerate([B.base] + [v for v in order if v != B.base])}
    edges = []
    for e in B.edges.values():
        letter = index[e.sym[0]] * e.sym[1]
        edges.append((pos[e.src], letter, pos[e.dst]) if letter > 0 else (pos[e.dst], -letter, pos[e.src]))
    return S.SubgroupGraph.from_edges(len(generators), len(pos), edges, base=0, prune=False)
