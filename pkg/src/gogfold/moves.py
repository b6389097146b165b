"""Moves on graphs of groups that preserve the fundamental group.

Every function returns a new graph; inputs are never modified.  Amalgams
and HNN extensions produced by folds and collapses are stored as nested
vertex groups.
"""
from __future__ import annotations

from dataclasses import replace
from typing import Optional

from . import ablin
from . import words as W
from .bass_serre import GAPath, edge_end, edge_start, images_at_end, images_at_start
from .errors import PreconditionFailed
from .gog import EdgeData, GraphOfGroups, require_valid
from .groups import FreeAbelianGroup, NestedGroup


def _sym(e) -> tuple:
    return tuple(e) if isinstance(e, tuple) else (e, 1)


def _set_end(edge: EdgeData, eps: int, vertex: str, images) -> EdgeData:
    if eps > 0:
        return replace(edge, src=vertex, i_images=tuple(images))
    return replace(edge, dst=vertex, t_images=tuple(images))


def _end_of(end) -> int:
    if end in ("i", "initial", 0, 1):
        return 1
    if end in ("t", "terminal", -1):
        return -1
    raise ValueError(f"edge end must be 'i' or 't', got {end!r}")


def conjugate_boundary(G: GraphOfGroups, edge: str, end, g) -> GraphOfGroups:
    """Replace the boundary map at ``end`` of ``edge`` by ``x -> g^-1 x g``."""
    eps = _end_of(end)
    e = G.edge(edge)
    v = e.src if eps > 0 else e.dst
    vg = G.vertices[v]
    vg.check(g)
    imgs = e.i_images if eps > 0 else e.t_images
    new = _set_end(e, eps, v, [vg.conjugate(x, g) for x in imgs])
    return G.replace_edges([new if f.id == edge else f for f in G.edges])


def slide(G: GraphOfGroups, e, f) -> GraphOfGroups:
    """Slide the end of ``f`` at the common vertex across ``e``.

    ``e`` and ``f`` are edge ids or oriented symbols ``(id, +-1)``; both
    must start at the same vertex and the boundary image of ``f`` there must
    lie in the boundary image of ``e``.
    """
    se, sf = _sym(e), _sym(f)
    if se[0] == sf[0]:
        raise PreconditionFailed("cannot slide an edge along itself")
    v = edge_start(G, se)
    if edge_start(G, sf) != v:
        raise PreconditionFailed(f"edges {se[0]} and {sf[0]} do not share the vertex {v!r}")
    vg = G.vertices[v]
    e_img = images_at_start(G, se)
    coords = []
    for x in images_at_start(G, sf):
        c = vg.coords(x, e_img)
        if c is None:
            raise PreconditionFailed(f"boundary image of {sf[0]} is not contained in that of {se[0]}")
        coords.append(c)
    w = edge_end(G, se)
    wg = G.vertices[w]
    far = images_at_end(G, se)
    moved = _set_end(G.edge(sf[0]), sf[1], w, [wg.combine(far, c) for c in coords])
    return G.replace_edges([moved if x.id == sf[0] else x for x in G.edges], tree=None)


def _embedder(inner: GraphOfGroups, base: str):
    """Maps ``(vertex, element)`` of an inner vertex to a closed path at ``base``."""
    from .bass_serre import concat, inverse, vertex_path

    # paths from base to each inner vertex along the inner tree
    tree = inner.spanning_tree()
    reach = {base: vertex_path(inner, base)}
    frontier = [base]
    while frontier:
        v = frontier.pop()
        for eid, s in inner.incident(v):
            if eid in tree:
                w = edge_end(inner, (eid, s))
                if w not in reach:
                    step = GAPath(v, (inner.vertices[v].identity(), inner.vertices[w].identity()), ((eid, s),))
                    reach[w] = concat(inner, reach[v], step)
                    frontier.append(w)

    def embed(v: str, x):
        p = reach[v]
        return concat(inner, p, vertex_path(inner, v, x), inverse(inner, p))

    return embed


def _rebuild(G: GraphOfGroups, merged: dict, new_id: str, new_group, embed, drop=()) -> GraphOfGroups:
    """Replace the vertices in ``merged`` by ``new_id`` and re-express incident images."""
    vertices = {}
    for v, vg in G.vertices.items():
        if v in merged:
            if new_id not in vertices:
                vertices[new_id] = new_group
        else:
            vertices[v] = vg
    edges = []
    for e in G.edges:
        if e.id in drop:
            continue
        src, dst, ii, tt = e.src, e.dst, e.i_images, e.t_images
        if src in merged:
            ii = tuple(embed(src, x) for x in ii)
            src = new_id
        if dst in merged:
            tt = tuple(embed(dst, x) for x in tt)
            dst = new_id
        edges.append(EdgeData(e.id, src, dst, e.rank, ii, tt))
    return GraphOfGroups(vertices, edges, None, G.name)


def _generates(vg, images) -> bool:
    """``images`` generate the whole (abelian or cyclic) vertex group."""
    if vg.kind == "abelian":
        return len(images) == vg.rank and abs(ablin.det([list(x) for x in images])) == 1
    if vg.kind == "free" and vg.rank <= 1:
        if vg.rank == 0:
            return True
        return len(images) == 1 and W.free_reduce(images[0]) in ((1,), (-1,))
    return False


def collapse_edge(G: GraphOfGroups, edge: str, keep: Optional[str] = None, simplify: bool = True) -> GraphOfGroups:
    """Collapse ``edge`` to a point: amalgam for a non-loop, HNN extension for a loop.

    With ``simplify`` a valence-1 endpoint whose group is exactly the edge
    image is absorbed without nesting (the amalgam is the other group).
    """
    e = G.edge(edge)
    if e.is_loop:
        u = e.src
        inner = GraphOfGroups({u: G.vertices[u]}, [e], None, f"{G.name}/{u}")
        embed = _embedder(inner, u)
        return _rebuild(G, {u}, u, NestedGroup(inner, u), embed, drop={edge})
    keep = e.src if keep is None else keep
    if keep not in (e.src, e.dst):
        raise PreconditionFailed(f"{keep!r} is not an endpoint of {edge}")
    other = e.dst if keep == e.src else e.src
    if simplify:
        for v, imgs, w, wimgs in ((e.dst, e.t_images, e.src, e.i_images), (e.src, e.i_images, e.dst, e.t_images)):
            if G.valence(v) == 1 and _generates(G.vertices[v], imgs):
                # A_w *_{A_e} A_e == A_w; the absorbed side had no other edges
                vertices = {x: g for x, g in G.vertices.items() if x != v}
                edges = [f for f in G.edges if f.id != edge]
                H = GraphOfGroups(vertices, edges, None, G.name)
                if w != keep:
                    H = rename_vertex(H, w, keep)
                return H
    inner = GraphOfGroups({keep: G.vertices[keep], other: G.vertices[other]}, [e], None, f"{G.name}/{keep}")
    embed = _embedder(inner, keep)
    return _rebuild(G, {keep, other}, keep, NestedGroup(inner, keep), embed, drop={edge})


def rename_vertex(G: GraphOfGroups, old: str, new: str) -> GraphOfGroups:
    if old == new:
        return G
    if new in G.vertices:
        raise PreconditionFailed(f"vertex {new!r} already exists")
    vertices = {(new if v == old else v): g for v, g in G.vertices.items()}
    edges = [replace(e, src=new if e.src == old else e.src, dst=new if e.dst == old else e.dst) for e in G.edges]
    return GraphOfGroups(vertices, edges, G.tree, G.name)


def fold_enlarge(G: GraphOfGroups, edge, A, names=None) -> GraphOfGroups:
    """Enlarge the edge group to ``A`` (basis of an abelian subgroup at the start of ``edge``).

    The vertex group at the far end becomes the amalgam of the old group
    with a copy of ``A`` over the old edge image.
    """
    sym = _sym(edge)
    e = G.edge(sym[0])
    u, v = edge_start(G, sym), edge_end(G, sym)
    U, V = G.vertices[u], G.vertices[v]
    A = list(A)
    for x in A:
        U.check(x)
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            if not U.commute(A[i], A[j]):
                raise PreconditionFailed("enlarged edge group must be abelian")
    near, far = images_at_start(G, sym), images_at_end(G, sym)
    coords = []
    for x in near:
        c = U.coords(x, A)
        if c is None:
            raise PreconditionFailed("the boundary image is not contained in the enlarged group")
        coords.append(c)
    if len(A) == e.rank and all(U.coords(a, near) is not None for a in A):
        return G
    names = list(names) if names else [f"{e.id}_{j}" for j in range(len(A))]
    ab = FreeAbelianGroup(names)
    new_v = f"{v}+"
    fold_edge = EdgeData(f"{e.id}~", v, new_v, e.rank, tuple(far), tuple(tuple(c) for c in coords))
    inner = GraphOfGroups({v: V, new_v: ab}, [fold_edge], None, f"{G.name}/{v}")
    embed = _embedder(inner, v)
    unit = [tuple(int(k == j) for k in range(len(A))) for j in range(len(A))]
    far_new = tuple(embed(new_v, x) for x in unit)
    rebuilt = _rebuild(G, {v}, v, NestedGroup(inner, v), embed)
    out = []
    for f in rebuilt.edges:
        if f.id == e.id:
            near_new = tuple(embed(u, a) for a in A) if u == v else tuple(A)
            f = _set_end(f, sym[1], u, near_new)
            f = _set_end(f, -sym[1], v, far_new)
            f = replace(f, rank=len(A))
        out.append(f)
    return GraphOfGroups(rebuilt.vertices, out, None, G.name)


def _is_cyclic_group(vg) -> bool:
    return (vg.kind == "free" and vg.rank <= 1) or (vg.kind == "abelian" and vg.rank <= 1)


def remove_hairs(G: GraphOfGroups, F_vertex: Optional[str] = None) -> GraphOfGroups:
    """Collapse every edge ending in a valence-1 vertex with cyclic vertex group."""
    while True:
        hair = None
        for e in sorted(G.edges, key=lambda x: x.id):
            if e.is_loop:
                continue
            for v, w in ((e.dst, e.src), (e.src, e.dst)):
                if v != F_vertex and G.valence(v) == 1 and _is_cyclic_group(G.vertices[v]):
                    hair = (e.id, w)
                    break
            if hair:
                break
        if hair is None:
            return G
        G = collapse_edge(G, hair[0], keep=hair[1])


def _unbalanced_end(G: GraphOfGroups):
    from .groups import is_maximal_cyclic
    for e in sorted(G.edges, key=lambda x: x.id):
        if e.rank != 1:
            continue
        for eps, v, x in ((1, e.src, e.i_images[0]), (-1, e.dst, e.t_images[0])):
            vg = G.vertices[v]
            if vg.kind in ("free", "abelian") and not is_maximal_cyclic(vg, x):
                return e, eps, v, x
    return None


def maximal_root(vg, x):
    if vg.kind == "free":
        return W.primitive_root(x)[0]
    return ablin.primitive_part(x)[0]


def balance(G: GraphOfGroups) -> GraphOfGroups:
    """Balancing folds until every cyclic edge image in a free or abelian vertex group is maximal cyclic."""
    seen = 0
    while True:
        found = _unbalanced_end(G)
        if found is None:
            return G
        e, eps, v, x = found
        root = maximal_root(G.vertices[v], x)
        G = fold_enlarge(G, (e.id, eps), [root], names=[f"{e.id}_root"])
        seen += 1
        if seen > 4 * len(G.edges) + 4:
            raise PreconditionFailed("balancing did not terminate")


def is_non_abelian(vg) -> bool:
    if vg.kind == "abelian":
        return False
    if vg.kind == "free":
        return vg.rank >= 2
    return True


def _maximal_abelian(vg, images) -> Optional[list]:
    """Basis of the maximal abelian subgroup containing a cyclic image, if it is strictly larger."""
    if len(images) != 1:
        return None
    x = images[0]
    if vg.kind == "free":
        root, k = W.primitive_root(x)
        return [root] if k > 1 else None
    if vg.kind == "abelian":
        if _generates(vg, images):
            return None
        return [tuple(int(i == j) for i in range(vg.rank)) for j in range(vg.rank)]
    return None


def _conjugator_into(vg, y, x):
    """``g`` with ``g^-1 y g`` in ``<x>`` up to inversion (free), ``()`` for abelian, else ``None``."""
    if vg.kind == "free":
        g = W.is_conjugate_free(y, x)
        return g if g is not None else W.is_conjugate_free(y, W.inverse(x))
    if vg.kind == "abelian":
        return ()
    return None


def maximal_abelian_collapse(G: GraphOfGroups, F_vertex: str) -> GraphOfGroups:
    """Fold boundary subgroups up to maximal abelian ones, then slide and collapse to two vertices."""
    require_valid(G)
    if F_vertex not in G.vertices:
        raise PreconditionFailed(f"unknown vertex {F_vertex!r}")
    if any(e.rank > 1 for e in G.edges):
        raise PreconditionFailed("maximal abelian collapse needs cyclic edge groups")
    if sum(is_non_abelian(vg) for vg in G.vertices.values()) < 2:
        raise PreconditionFailed("fewer than 2 non-abelian vertex groups")
    # (i) enlarge boundary subgroups to maximal abelian ones
    changed = True
    while changed:
        changed = False
        for e in sorted(G.edges, key=lambda x: x.id):
            for eps, v, imgs in ((1, e.src, e.i_images), (-1, e.dst, e.t_images)):
                A = _maximal_abelian(G.vertices[v], imgs)
                if A is not None:
                    G = fold_enlarge(G, (e.id, eps), A)
                    changed = True
                    break
            if changed:
                break
    # (ii) collapse while two non-abelian vertices survive
    while True:
        step = _collapse_step(G, F_vertex)
        if step is None:
            break
        G = step
    verts = list(G.vertices)
    if len(verts) != 2 or not 1 <= len(G.edges) <= 3 or any(e.is_loop for e in G.edges):
        raise PreconditionFailed(
            f"collapse ended with {len(verts)} vertices and {len(G.edges)} edges, not a two-vertex shape")
    return G


def _collapse_step(G: GraphOfGroups, F_vertex: str) -> Optional[GraphOfGroups]:
    count = sum(is_non_abelian(vg) for vg in G.vertices.values())
    for e in sorted(G.edges, key=lambda x: x.id):
        if e.is_loop:
            return collapse_edge(G, e.id)
    for e in sorted(G.edges, key=lambda x: x.id):
        a, b = is_non_abelian(G.vertices[e.src]), is_non_abelian(G.vertices[e.dst])
        after = count - (1 if a and b else 0) + (1 if not a and not b else 0)
        if after >= 2 and not (a and b and count == 2):
            keep = F_vertex if F_vertex in (e.src, e.dst) else (e.src if a or not b else e.dst)
            return collapse_edge(G, e.id, keep=keep)
    # slide a parallel edge whose boundary repeats another's, turning it into a loop
    edges = sorted(G.edges, key=lambda x: x.id)
    for i, e in enumerate(edges):
        for f in edges[i + 1:]:
            for se in ((e.id, 1), (e.id, -1)):
                for sf in ((f.id, 1), (f.id, -1)):
                    v = edge_start(G, se)
                    if edge_start(G, sf) != v or edge_end(G, se) != edge_end(G, sf):
                        continue
                    vg = G.vertices[v]
                    x, y = images_at_start(G, se)[0], images_at_start(G, sf)[0]
                    g = _conjugator_into(vg, y, x)
                    if g is None:
                        continue
                    H = G
                    if vg.kind == "free" and g:
                        H = conjugate_boundary(H, f.id, "i" if sf[1] > 0 else "t", g)
                    try:
                        H = slide(H, se, sf)
                    except PreconditionFailed:
                        continue
                    return H
    return None



def flatten_vertex(G: GraphOfGroups, v: str):
    """Replace the nested vertex ``v`` by its inner graph.

    Every boundary image at ``v`` must be elliptic in the inner graph; the
    edge is re-attached at the inner vertex holding a conjugate of it.
    Returns ``(flat, translate, inner_edges)`` where ``translate`` maps
    paths of ``G`` to paths of ``flat`` representing the same elements and
    ``inner_edges`` lists the edge ids that came from the inner graph.
    """
    from .bass_serre import concat, cyclic_normalize, inverse, normalize, vertex_path
    from .errors import UnsupportedVertexGroup

    X = G.vertices[v]
    if X.kind != "nested":
        raise PreconditionFailed(f"vertex {v!r} is not nested")
    Gi = X.gog
    vname = {w: (w if w not in G.vertices or w == v else f"{v}.{w}") for w in Gi.vertices}
    outer_ids = {e.id for e in G.edges}
    ename = {e.id: (e.id if e.id not in outer_ids else f"{v}.{e.id}") for e in Gi.edges}
    vertices = {}
    for w, g in G.vertices.items():
        if w == v:
            for wi, gi in Gi.vertices.items():
                vertices[vname[wi]] = gi
        else:
            vertices[w] = g
    inner_edges = [EdgeData(ename[e.id], vname[e.src], vname[e.dst], e.rank, e.i_images, e.t_images)
                   for e in Gi.edges]

    def rename(p: GAPath) -> GAPath:
        return GAPath(vname[p.start], p.elements, tuple((ename[k], s) for k, s in p.edges))

    conj = {}
    outer = []
    for e in G.edges:
        src, dst, ii, tt = e.src, e.dst, e.i_images, e.t_images
        for end in ("i", "t"):
            at = src if end == "i" else dst
            if at != v:
                continue
            imgs = ii if end == "i" else tt
            if not imgs:
                c = vertex_path(Gi, X.base)
                w = X.base
                new = ()
            else:
                core, c = cyclic_normalize(Gi, imgs[0])
                if core.edges:
                    raise UnsupportedVertexGroup(f"edge {e.id} image is hyperbolic in the inner graph")
                w = core.start
                new = []
                for y in imgs:
                    z = normalize(Gi, concat(Gi, inverse(Gi, c), y, c))
                    if z.edges:
                        raise UnsupportedVertexGroup(f"edge {e.id} images are not jointly elliptic")
                    new.append(z.elements[0])
                new = tuple(new)
            conj[(e.id, end)] = c
            if end == "i":
                src, ii = vname[w], new
            else:
                dst, tt = vname[w], new
        outer.append(EdgeData(e.id, src, dst, e.rank, ii, tt))
    flat = GraphOfGroups(vertices, outer + inner_edges, None, G.name)

    def translate(p: GAPath) -> GAPath:
        pieces = []
        cur = p.start
        for k, a in enumerate(p.elements):
            if cur == v:
                pieces.append(rename(a))
            else:
                pieces.append(vertex_path(flat, cur, a))
            if k == len(p.edges):
                break
            eid, s = p.edges[k]
            e = G.edge(eid)
            first, last = ((e.src, "i"), (e.dst, "t")) if s > 0 else ((e.dst, "t"), (e.src, "i"))
            if first[0] == v:
                pieces.append(rename(conj[(eid, first[1])]))
            w0 = pieces[-1].end(flat)
            fe = flat.edge(eid)
            w1 = fe.dst if s > 0 else fe.src
            pieces.append(GAPath(w0, (flat.vertices[w0].identity(), flat.vertices[w1].identity()), ((eid, s),)))
            if last[0] == v:
                pieces.append(rename(inverse(Gi, conj[(eid, last[1])])))
            cur = last[0]
        return concat(flat, *pieces)

    return flat, translate, [ename[e.id] for e in Gi.edges]
