"""Graphs of groups: data model, validation, presentations, export."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional

from . import ablin
from . import words as W
from .bass_serre import GAPath, edge_end, edge_start
from .errors import IllTyped, InvalidGraph, ParseError, TypeMismatch


@dataclass(frozen=True)
class EdgeData:
    """Edge ``src -> dst`` with free abelian edge group of ``rank`` and boundary images at both ends."""

    id: str
    src: str
    dst: str
    rank: int
    i_images: tuple = ()
    t_images: tuple = ()

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    where: str
    message: str

    def __str__(self):
        return f"{self.kind} at {self.where}: {self.message}"


class GraphOfGroups:
    """Immutable graph of groups.  ``vertices`` maps id to vertex group (insertion ordered)."""

    def __init__(self, vertices, edges=(), tree=None, name: str = ""):
        self.vertices = dict(vertices)
        self.edges = tuple(edges)
        self.edge_index = {e.id: e for e in self.edges}
        if len(self.edge_index) != len(self.edges):
            raise InvalidGraph([Diagnostic("duplicate", "edges", "edge ids repeat")])
        self.tree = None if tree is None else frozenset(tree)
        self.name = name

    def __repr__(self):
        return f"GraphOfGroups({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def edge(self, eid: str) -> EdgeData:
        try:
            return self.edge_index[eid]
        except KeyError:
            raise IllTyped(f"unknown edge {eid!r}") from None

    def replace_edges(self, edges, vertices=None, tree="keep") -> "GraphOfGroups":
        t = self.tree if tree == "keep" else tree
        return GraphOfGroups(self.vertices if vertices is None else vertices, edges, t, self.name)

    def incident(self, v: str) -> list:
        """Oriented edge symbols ``(edge_id, +-1)`` starting at ``v`` (loops appear twice)."""
        out = []
        for e in self.edges:
            if e.src == v:
                out.append((e.id, 1))
            if e.dst == v:
                out.append((e.id, -1))
        return out

    def valence(self, v: str) -> int:
        return len(self.incident(v))

    def cycle_rank(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def spanning_tree(self) -> frozenset:
        if self.tree is not None:
            return self.tree
        return default_spanning_tree(self)

    def with_tree(self, tree) -> "GraphOfGroups":
        return GraphOfGroups(self.vertices, self.edges, tree, self.name)


def default_spanning_tree(G: GraphOfGroups) -> frozenset:
    """BFS tree from the lowest vertex id, trying edges in id order."""
    if not G.vertices:
        return frozenset()
    root = min(G.vertices)
    seen = {root}
    tree = set()
    queue = deque([root])
    edges = sorted(G.edges, key=lambda e: e.id)
    while queue:
        v = queue.popleft()
        for e in edges:
            for a, b in ((e.src, e.dst), (e.dst, e.src)):
                if a == v and b not in seen:
                    seen.add(b)
                    tree.add(e.id)
                    queue.append(b)
    return frozenset(tree)


def _connected(G: GraphOfGroups) -> bool:
    if not G.vertices:
        return False
    start = next(iter(G.vertices))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for e in G.edges:
            for a, b in ((e.src, e.dst), (e.dst, e.src)):
                if a == v and b not in seen and b in G.vertices:
                    seen.add(b)
                    stack.append(b)
    return len(seen) == len(G.vertices)


def _check_end(vg, images, rank, where) -> list:
    diags = []
    if len(images) != rank:
        return [Diagnostic("arity", where, f"{len(images)} images for an edge group of rank {rank}")]
    for x in images:
        try:
            vg.check(x)
        except (TypeMismatch, IllTyped) as exc:
            return [Diagnostic("type", where, str(exc))]
    if rank == 0:
        return diags
    if rank == 1:
        if vg.is_trivial(images[0]):
            diags.append(Diagnostic("non-injective", where, "boundary image is trivial"))
        return diags
    if vg.kind == "abelian":
        if ablin.rank([list(x) for x in images]) < rank:
            diags.append(Diagnostic("non-injective", where, "images are linearly dependent"))
        return diags
    if any(vg.is_trivial(x) for x in images):
        return [Diagnostic("non-injective", where, "boundary image is trivial")]
    for i in range(rank):
        for j in range(i + 1, rank):
            if not vg.commute(images[i], images[j]):
                return [Diagnostic("non-abelian-image", where,
                                   "not inside one abelian subgroup")]
    if vg.kind == "free":
        diags.append(Diagnostic("non-injective", where,
                                f"Z^{rank} does not embed in a free group"))
    return diags


def validate(G: GraphOfGroups) -> list:
    """All invariant violations as diagnostics; empty iff ``G`` is valid."""
    diags = []
    if not G.vertices:
        return [Diagnostic("empty", "graph", "no vertices")]
    for v, vg in G.vertices.items():
        if vg.kind == "nested":
            for d in validate(vg.gog):
                diags.append(Diagnostic(d.kind, f"{v}/{d.where}", d.message))
    for e in G.edges:
        if e.rank < 0:
            diags.append(Diagnostic("rank", f"edge {e.id}", "negative edge group rank"))
            continue
        ok = True
        for end in (e.src, e.dst):
            if end not in G.vertices:
                diags.append(Diagnostic("dangling", f"edge {e.id}", f"unknown vertex {end!r}"))
                ok = False
        if not ok:
            continue
        diags += _check_end(G.vertices[e.src], e.i_images, e.rank, f"edge {e.id} (initial end)")
        diags += _check_end(G.vertices[e.dst], e.t_images, e.rank, f"edge {e.id} (terminal end)")
    if not _connected(G):
        diags.append(Diagnostic("disconnected", "graph", "underlying graph is not connected"))
    elif G.tree is not None:
        bad = [t for t in G.tree if t not in G.edge_index]
        if bad:
            diags.append(Diagnostic("tree", "graph", f"tree names unknown edges {sorted(bad)}"))
        else:
            sub = GraphOfGroups(G.vertices, [G.edge(t) for t in G.tree])
            if len(G.tree) != len(G.vertices) - 1 or not _connected(sub):
                diags.append(Diagnostic("tree", "graph", "chosen edges do not form a spanning tree"))
    return diags


def require_valid(G: GraphOfGroups) -> GraphOfGroups:
    diags = validate(G)
    if diags:
        raise InvalidGraph(diags)
    return G


@dataclass(frozen=True)
class RelativePresentation:
    generators: tuple
    relations: tuple
    stable_letters: dict = field(default_factory=dict)
    letter_maps: dict = field(default_factory=dict)
    tree: frozenset = frozenset()

    def local_to_global(self, v: str, w) -> tuple:
        m = self.letter_maps[v]
        return tuple(m[abs(x) - 1] * (1 if x > 0 else -1) for x in w)

    def path_word(self, G: GraphOfGroups, p: GAPath) -> tuple:
        """Word in the presentation generators for a closed path (tree edges map to 1)."""
        out = []
        v = p.start
        for k, a in enumerate(p.elements):
            out.extend(self.local_to_global(v, G.vertices[v].as_word(a)))
            if k < len(p.edges):
                eid, s = p.edges[k]
                if eid in self.stable_letters:
                    out.append(self.stable_letters[eid] * s)
                v = edge_end(G, p.edges[k])
        return W.free_reduce(out)

    def format(self) -> str:
        alpha = W.Alphabet(self.generators)
        rels = ", ".join(alpha.format(r) for r in self.relations)
        return f"<{', '.join(self.generators)} | {rels}>"


def relative_presentation(G: GraphOfGroups, tree=None) -> RelativePresentation:
    require_valid(G)
    tree = frozenset(tree) if tree is not None else G.spanning_tree()
    local = {v: vg.presentation() for v, vg in G.vertices.items()}
    counts: dict = {}
    for names, _ in local.values():
        for n in names:
            counts[n] = counts.get(n, 0) + 1
    gens: list = []
    maps = {}
    for v, (names, _) in local.items():
        m = []
        for n in names:
            gens.append(n if counts[n] == 1 else f"{v}.{n}")
            m.append(len(gens))
        maps[v] = m
    stable = {}
    taken = set(gens)
    for e in G.edges:
        if e.id not in tree:
            name = e.id
            while name in taken:
                name = "t_" + name
            taken.add(name)
            gens.append(name)
            stable[e.id] = len(gens)
    pres = RelativePresentation(tuple(gens), (), stable, maps, tree)
    rels = []
    for v, (_, vrels) in local.items():
        rels += [pres.local_to_global(v, r) for r in vrels]
    for e in G.edges:
        A, B = G.vertices[e.src], G.vertices[e.dst]
        for x, y in zip(e.i_images, e.t_images):
            wi = pres.local_to_global(e.src, A.as_word(x))
            wt = pres.local_to_global(e.dst, B.as_word(y))
            if e.id in stable:
                t = (stable[e.id],)
                rels.append(W.mul(W.inverse(t), wi, t, W.inverse(wt)))
            else:
                rels.append(W.mul(wi, W.inverse(wt)))
    return replace(pres, relations=tuple(r for r in rels if r))


def betti(G: GraphOfGroups) -> int:
    """First Betti number: free rank of the abelianized relative presentation."""
    pres = relative_presentation(G)
    n = len(pres.generators)
    return ablin.free_rank_of_quotient(n, [W.abelianize(r, n) for r in pres.relations])


def vertex_betti(vg) -> int:
    if vg.kind in ("free", "abelian"):
        return vg.rank
    return betti(vg.gog)


def betti_bound_check(G: GraphOfGroups) -> bool:
    """``b1(G) >= sum of vertex Betti numbers - total edge group rank``."""
    bound = sum(vertex_betti(vg) for vg in G.vertices.values()) - sum(e.rank for e in G.edges)
    return betti(G) >= bound


# ---- G(A)-path text syntax -------------------------------------------------

def _split_top(text: str, sep: str = ",") -> list:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_path(G: GraphOfGroups, text: str, start: Optional[str] = None) -> GAPath:
    """Parse ``[ v0: a b , e1 , v1: r , e1^-1 , v0: b^-1 ]``; omitted vertex elements are trivial."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError(f"a G(A)-path is written in brackets: {text!r}")
    tokens = [t for t in _split_top(body[1:-1]) if t]
    elems: list = []
    edges: list = []
    cur = start
    pending = None
    for tok in tokens:
        head, colon, rest = tok.partition(":")
        if colon and head.strip() in G.vertices:
            v = head.strip()
            if cur is None:
                cur = v
            if v != cur:
                raise IllTyped(f"element at {v!r} where the path is at {cur!r}")
            x = G.vertices[v].parse(rest.strip())
            pending = x if pending is None else G.vertices[v].mul(pending, x)
            continue
        name, _, exp = tok.partition("^")
        name = name.strip()
        if name not in G.edge_index:
            raise ParseError(f"unknown edge or vertex in path token {tok!r}")
        sign = int(exp) if exp else 1
        if sign not in (1, -1):
            raise ParseError(f"edge exponent must be 1 or -1 in {tok!r}")
        sym = (name, sign)
        if cur is None:
            cur = edge_start(G, sym)
        if edge_start(G, sym) != cur:
            raise IllTyped(f"edge {tok!r} does not start at {cur!r}")
        elems.append(G.vertices[cur].identity() if pending is None else pending)
        edges.append(sym)
        pending = None
        cur = edge_end(G, sym)
    if cur is None:
        raise ParseError("empty path needs a start vertex")
    elems.append(G.vertices[cur].identity() if pending is None else pending)
    first = start if start is not None else (edge_start(G, edges[0]) if edges else cur)
    return GAPath(first, tuple(elems), tuple(edges))


def format_path(G: GraphOfGroups, p: GAPath) -> str:
    parts = []
    v = p.start
    for k, a in enumerate(p.elements):
        parts.append(f"{v}: {G.vertices[v].format(a)}")
        if k < len(p.edges):
            eid, s = p.edges[k]
            parts.append(eid if s > 0 else f"{eid}^-1")
            v = edge_end(G, p.edges[k])
    return "[ " + " , ".join(parts) + " ]"


# ---- export ----------------------------------------------------------------

def _vertex_json(vg) -> dict:
    d = {"kind": vg.kind}
    if vg.kind == "nested":
        d["base"] = vg.base
        d["graph"] = to_json_dict(vg.gog)
    else:
        d["rank"] = vg.rank
        d["generators"] = list(vg.alphabet.generators)
    return d


def to_json_dict(G: GraphOfGroups) -> dict:
    return {
        "schema": "gogfold.graph-of-groups/1",
        "vertices": [{"id": v, **_vertex_json(vg)} for v, vg in G.vertices.items()],
        "edges": [{
            "id": e.id, "src": e.src, "dst": e.dst, "rank": e.rank,
            "i": [G.vertices[e.src].format(x) for x in e.i_images],
            "t": [G.vertices[e.dst].format(x) for x in e.t_images],
        } for e in G.edges],
        "tree": sorted(G.spanning_tree()),
    }


def to_json(G: GraphOfGroups) -> str:
    return json.dumps(to_json_dict(G), indent=2)


def describe_vertex(vg) -> str:
    if vg.kind == "nested":
        return f"nested({len(vg.gog.vertices)}v,{len(vg.gog.edges)}e)"
    return f"{vg.kind}({', '.join(vg.alphabet.generators)})"


def to_dot(G: GraphOfGroups, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    for v, vg in G.vertices.items():
        lines.append(f'  "{v}" [label="{v}: {describe_vertex(vg)}"];')
    for e in G.edges:
        i = "; ".join(G.vertices[e.src].format(x) for x in e.i_images)
        t = "; ".join(G.vertices[e.dst].format(x) for x in e.t_images)
        lines.append(f'  "{e.src}" -> "{e.dst}" [label="{e.id} Z^{e.rank}: {i} | {t}"];')
    lines.append("}")
    return "\n".join(lines)
