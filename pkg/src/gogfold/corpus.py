"""Seeded random graphs of groups, wedges and move schedules for property checks.

``Retraction`` carries a homomorphism from the fundamental group onto a
free group; images of G(A)-graph subgroups under it are compared with
Stallings graphs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from . import ablin
from . import stallings as S
from . import words as W
from .bass_serre import GAPath, edge_end, images_at_end, images_at_start, normalize
from .folding import Move, _enlarged, enumerate_moves
from .gagraph import GAGraph, make_wedge
from .gog import EdgeData, GraphOfGroups, require_valid
from .groups import FreeAbelianGroup, FreeGroup


def random_word(rng: random.Random, rank: int, max_len: int = 4, min_len: int = 1) -> tuple:
    """Freely reduced word of length in ``[min_len, max_len]`` over ``rank`` letters."""
    while True:
        n = rng.randint(min_len, max_len)
        w = []
        for _ in range(n):
            choices = [k for k in range(-rank, rank + 1) if k and (not w or k != -w[-1])]
            w.append(rng.choice(choices))
        if len(w) >= min_len:
            return tuple(w)


def random_vector(rng: random.Random, rank: int, bound: int = 2, primitive: bool = False) -> tuple:
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(rank))
        if any(v) and (not primitive or ablin.primitive_part(v)[1] == 1):
            return v


def random_element(rng: random.Random, vg, max_len: int = 3, allow_trivial: bool = False):
    if allow_trivial and rng.random() < 0.2:
        return vg.identity()
    if vg.kind == "free":
        return random_word(rng, vg.rank, max_len) if vg.rank else ()
    return random_vector(rng, vg.rank)


# ---- retractions -------------------------------------------------------------

@dataclass
class Retraction:
    """Homomorphism onto a free group given on vertex generators and stable letters."""
    target: FreeGroup
    vertex_maps: dict            # vertex -> tuple of words (one per generator)
    edge_maps: dict = field(default_factory=dict)  # edge id -> word (tree edges map to 1)

    def element(self, G: GraphOfGroups, v: str, x) -> tuple:
        vg = G.vertices[v]
        imgs = self.vertex_maps[v]
        if vg.kind == "free":
            out = ()
            for k in W.free_reduce(x):
                out = W.mul(out, imgs[abs(k) - 1] if k > 0 else W.inverse(imgs[abs(k) - 1]))
            return out
        out = ()
        for c, img in zip(x, imgs):
            out = W.mul(out, W.power(img, c))
        return out

    def path(self, G: GraphOfGroups, p: GAPath) -> tuple:
        v = p.start
        out = self.element(G, v, p.elements[0])
        for j, (eid, d) in enumerate(p.edges):
            g = self.edge_maps.get(eid, ())
            out = W.mul(out, g if d == 1 else W.inverse(g))
            v = edge_end(G, (eid, d))
            out = W.mul(out, self.element(G, v, p.elements[j + 1]))
        return W.free_reduce(out)

    def check(self, G: GraphOfGroups) -> bool:
        """Every edge relation ``e^-1 i(c) e = t(c)`` holds after mapping."""
        for e in G.edges:
            g = self.edge_maps.get(e.id, ())
            for x, y in zip(e.i_images, e.t_images):
                lhs = W.conjugate(self.element(G, e.src, x), g)
                if W.free_reduce(lhs) != W.free_reduce(self.element(G, e.dst, y)):
                    return False
        return True

    def subgroup_graph(self, B: GAGraph) -> S.SubgroupGraph:
        """Stallings graph of the image of the subgroup represented by ``B``."""
        gens = [self.path(B.A, p) for p in B.pi1_generators()]
        return S.subgroup_graph(gens, self.target.rank)


def random_retract_fixture(rng: random.Random, n_vertices: Optional[int] = None,
                           extra_edges: Optional[int] = None, abelian_prob: float = 0.35):
    """Random graph of groups over ``F(a, b)`` together with a retraction onto it.

    Vertex ``F`` is ``F(a, b)`` mapped identically.  Other vertices are free
    or free abelian; each edge's ``t``-image is a dedicated generator whose
    image is forced by the edge relation, so the map is a homomorphism.
    """
    n = rng.randint(1, 3) if n_vertices is None else n_vertices
    m = rng.randint(0, 2) if extra_edges is None else extra_edges
    T = FreeGroup(["a", "b"])
    kinds = {"F": "free"}
    gens = {"F": [(1,), (2,)]}  # images of vertex generators in T
    names = ["F"] + [f"V{j}" for j in range(1, n)]
    raw_edges = []

    def elem_of(v):
        # random element of vertex v with non-trivial image
        for _ in range(50):
            if kinds[v] == "free":
                x = random_word(rng, len(gens[v]), 3)
            else:
                x = random_vector(rng, len(gens[v]), 2, primitive=True)
            img = _img(kinds[v], gens[v], x)
            if img:
                return x, img
        return None

    for j, v in enumerate(names[1:], start=1):
        p = names[rng.randrange(j)]
        got = elem_of(p)
        if got is None:
            got = ((1,) if kinds[p] == "free" else (1,) + (0,) * (len(gens[p]) - 1),
                   gens[p][0])
        x, y = got
        if rng.random() < abelian_prob:
            kinds[v] = "abelian"
            root = W.primitive_root(W.cyclic_reduce(y)[0])[0]
            core_conj = W.cyclic_reduce(y)[1]
            # second generator commutes with y: a power of its root, conjugated back
            z = W.conjugate(W.power(root, rng.randint(0, 2)), W.inverse(core_conj))
            gens[v] = [y, W.free_reduce(z)]
            raw_edges.append((f"e{j}", p, v, x, (1, 0), ()))
        else:
            kinds[v] = "free"
            gens[v] = [y, random_word(rng, 2, 3)]
            raw_edges.append((f"e{j}", p, v, x, (1,), ()))
    free_vs = [v for v in names if kinds[v] == "free" and v != "F"]
    for k in range(m if free_vs else 0):
        u = rng.choice(names)
        v = rng.choice(free_vs)
        got = elem_of(u)
        if got is None:
            continue
        x, y = got
        g = random_word(rng, 2, 2) if rng.random() < 0.7 else ()
        gens[v].append(W.free_reduce(W.conjugate(y, g)))
        z = len(gens[v])
        # conjugate the new generator by a word in the old ones, and the stable letter to match
        h = random_word(rng, z - 1, 2) if rng.random() < 0.5 else ()
        t_img = W.free_reduce(W.mul(W.mul(h, (z,)), W.inverse(h)))
        phi_h = _img("free", gens[v], h)
        raw_edges.append((f"x{k}", u, v, x, t_img, W.free_reduce(W.mul(g, W.inverse(phi_h)))))
    vertices = {}
    for v in names:
        r = len(gens[v])
        gnames = [f"{v.lower()}{i}" for i in range(r)] if v != "F" else ["a", "b"]
        vertices[v] = FreeGroup(gnames) if kinds[v] == "free" else FreeAbelianGroup(gnames)
    edges = [EdgeData(eid, u, v, 1, (x,), (y,)) for eid, u, v, x, y, _ in raw_edges]
    tree = frozenset(eid for eid, *_ in raw_edges if eid.startswith("e"))
    G = require_valid(GraphOfGroups(vertices, edges, tree, "random"))
    phi = Retraction(T, {v: tuple(gens[v]) for v in names}, {eid: g for eid, *_, g in raw_edges if g})
    assert phi.check(G)
    return G, phi


def _img(kind, gens, x) -> tuple:
    out = ()
    if kind == "free":
        for k in W.free_reduce(x):
            out = W.mul(out, gens[abs(k) - 1] if k > 0 else W.inverse(gens[abs(k) - 1]))
        return out
    for c, g in zip(x, gens):
        out = W.mul(out, W.power(g, c))
    return out


def example_two_retraction(G: GraphOfGroups) -> Retraction:
    """``F`` fixed, ``s -> 1``, ``q -> a^2 b^-1 a^2 b`` and ``t -> q`` for the flat second example."""
    q = G.vertices["F"].parse("a^2 b^-1 a^2 b")
    return Retraction(FreeGroup(["a", "b"]), {"F": ((1,), (2,)), "A": (q, q)}, {})


def centralizer_extension_retraction(k: int = 2) -> Retraction:
    return Retraction(FreeGroup(["a", "b"]), {"F": ((1,), (2,)), "A": ((1,), (1,) * k)}, {})


# ---- random closed paths and wedges ------------------------------------------

def random_closed_path(rng: random.Random, G: GraphOfGroups, base: str, steps: int = 3) -> GAPath:
    """Random walk of ``steps`` edges from ``base``, closed by a walk back along the spanning tree."""
    v = base
    elems = [random_element(rng, G.vertices[v], allow_trivial=True)]
    syms = []
    for _ in range(steps):
        inc = G.incident(v)
        if not inc:
            break
        sym = rng.choice(inc)
        syms.append(sym)
        v = edge_end(G, sym)
        elems.append(random_element(rng, G.vertices[v], allow_trivial=True))
    back = _tree_path(G, v, base)
    for sym in back:
        syms.append(sym)
        elems.append(G.vertices[edge_end(G, sym)].identity())
    return normalize(G, GAPath(base, tuple(elems), tuple(syms)))


def _tree_path(G: GraphOfGroups, src: str, dst: str) -> list:
    tree = G.tree if G.tree is not None else G.spanning_tree()
    prev = {src: None}
    queue = [src]
    while queue:
        v = queue.pop(0)
        if v == dst:
            break
        for sym in G.incident(v):
            if sym[0] in tree:
                w = edge_end(G, sym)
                if w not in prev:
                    prev[w] = (v, sym)
                    queue.append(w)
    out = []
    v = dst
    while prev[v] is not None:
        u, sym = prev[v]
        out.append(sym)
        v = u
    return list(reversed(out))


def random_wedge(rng: random.Random, G: GraphOfGroups, base: str = "F", n_words: Optional[int] = None,
                 n_elements: Optional[int] = None, hairs: int = 0) -> GAGraph:
    vg = G.vertices[base]
    k = rng.randint(0, 2) if n_elements is None else n_elements
    m = rng.randint(1, 3) if n_words is None else n_words
    elems = [random_element(rng, vg) for _ in range(k)]
    words = [random_closed_path(rng, G, base, rng.randint(1, 4)) for _ in range(m)]
    B = make_wedge(G, base, elems, words)
    for _ in range(hairs):
        attach_hair(rng, B)
    return B


def attach_hair(rng: random.Random, B: GAGraph) -> Optional[int]:
    """Hang a valence-1 vertex off a random B-vertex; its group lies in the conjugated edge group.

    The result is a valid G(A)-graph that an S1 move can shave.
    """
    u = rng.choice(sorted(B.labels))
    inc = B.A.incident(B.labels[u])
    if not inc:
        return None
    sym = rng.choice(inc)
    far = edge_end(B.A, sym)
    V = B.A.vertices[far]
    a = random_element(rng, B.vg(u), allow_trivial=True)
    b = random_element(rng, V, allow_trivial=True)
    imgs = images_at_end(B.A, sym)
    gens = []
    if rng.random() < 0.7:
        c = tuple(rng.randint(-2, 2) for _ in imgs)
        if any(c):
            y = V.combine(imgs, c)
            gens.append(V.mul(V.mul(V.inv(b), y), b))
    v = B.add_vertex(far, gens)
    B.add_edge(u, v, sym, a, b)
    return v


# ---- random move schedules ---------------------------------------------------

def random_adjustment(rng: random.Random, B: GAGraph) -> Optional[Move]:
    """A random A0, A1, A2 or long range (L1) adjustment applicable to ``B``."""
    kind = rng.choice(("A0", "A1", "A2", "L1"))
    if kind == "A0":
        v = rng.choice(sorted(B.labels))
        return Move("A0", {"vertex": v, "g": random_element(rng, B.vg(v))})
    if not B.edges:
        return None
    k = rng.choice(sorted(B.edges))
    d = rng.choice((1, -1))
    a, sym, b, far = B.view((k, d))
    u = B.view((k, -d))[3]
    if kind == "A1":
        r = len(images_at_start(B.A, sym))
        return Move("A1", {"edge": k, "direction": d, "c": tuple(rng.randint(-2, 2) for _ in range(r))})
    sub = _enlarged(B, u, k)[0] if kind == "L1" else B.subs[u]
    if not sub.gens:
        return None
    vg = B.vg(u)
    g = vg.identity()
    for _ in range(rng.randint(1, 3)):
        x = rng.choice(sub.gens)
        g = vg.mul(g, x if rng.random() < 0.5 else vg.inv(x))
    return Move(kind, {"vertex": u, "edge": k, "direction": d, "g": g})


def random_move(rng: random.Random, B: GAGraph, adjust_prob: float = 0.4) -> Optional[Move]:
    """Uniform choice among applicable folding moves, mixed with random adjustments."""
    if rng.random() < adjust_prob:
        m = random_adjustment(rng, B)
        if m is not None:
            return m
    moves = enumerate_moves(B)
    if not moves:
        return random_adjustment(rng, B)
    return rng.choice(moves)


def random_gog(rng: random.Random, max_vertices: int = 4, max_extra: int = 2) -> GraphOfGroups:
    """Random valid graph of groups with free and free abelian vertex groups (no retraction)."""
    n = rng.randint(1, max_vertices)
    vertices = {}
    for j in range(n):
        r = rng.randint(1, 3)
        if rng.random() < 0.5:
            vertices[f"v{j}"] = FreeGroup([f"x{j}_{i}" for i in range(r)])
        else:
            vertices[f"v{j}"] = FreeAbelianGroup([f"y{j}_{i}" for i in range(r)])
    names = list(vertices)
    pairs = [(names[rng.randrange(j)], names[j]) for j in range(1, n)]
    pairs += [(rng.choice(names), rng.choice(names)) for _ in range(rng.randint(0, max_extra))]
    edges = []
    for k, (u, v) in enumerate(pairs):
        U, V = vertices[u], vertices[v]
        rank = 1
        if U.kind == "abelian" and V.kind == "abelian":
            rank = rng.randint(0, min(U.rank, V.rank))
        elif rng.random() < 0.1:
            rank = 0
        edges.append(EdgeData(f"e{k}", u, v, rank, _images(rng, U, rank), _images(rng, V, rank)))
    return require_valid(GraphOfGroups(vertices, edges, None, "random"))


def _images(rng, vg, rank) -> tuple:
    if rank == 0:
        return ()
    if vg.kind == "free":
        return (random_word(rng, vg.rank, 3),)
    while True:
        rows = [random_vector(rng, vg.rank) for _ in range(rank)]
        if ablin.rank([list(r) for r in rows]) == rank:
            return tuple(rows)
