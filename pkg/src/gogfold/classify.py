"""Matching splittings against the finite list of low-rank shapes, plus structural lints.

Every splitting is read modulo a designated vertex ``F_vertex`` containing
the coefficient group.  Non-designated non-abelian vertices must be free of
rank 2 (called H below).  Case ids are strings such as ``"2.4.1-B1"``; the
numeric prefix names the family.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import stallings as S
from . import words as W
from .errors import TrivialWord, UnsupportedVertexGroup
from .gog import Diagnostic, GraphOfGroups, require_valid
from .groups import FreeAbelianGroup, FreeGroup, NestedGroup

FAMILIES = {
    "FreeDecomposable": ("2.2", ("F-free", "F-times-H", "ICE-times-free")),
    "AbelianOnly": ("2.3", ("two-vertex", "three-vertex-line", "loop-plus-edge")),
    "AllFree": ("2.4.1", ("A1", "A2-QH", "B1", "B2", "C1", "C2")),
    "WithAbelian": ("2.4.2", ("A", "B1", "B2")),
    "ICEVertex": ("2.4.3", ("1", "2", "3")),
    "OneVertex": ("2.5", ("I", "II")),
}


@dataclass(frozen=True)
class TaxonomyLabel:
    family: str
    case: str = ""
    reason: str = ""
    unchecked: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.family == "Unclassified":
            if not self.reason:
                raise ValueError("Unclassified needs a reason")
        elif self.family not in FAMILIES or self.case not in FAMILIES[self.family][1]:
            raise ValueError(f"no case {self.family}.{self.case}")

    @property
    def id(self) -> str:
        if self.family == "Unclassified":
            return "unclassified"
        return f"{FAMILIES[self.family][0]}-{self.case}"

    @property
    def classified(self) -> bool:
        return self.family != "Unclassified"

    def __str__(self):
        if not self.classified:
            return f"Unclassified({self.reason})"
        return f"{self.family}.{self.case}"

    def to_json_dict(self) -> dict:
        return {"schema": "gogfold.classification/1", "id": self.id, "family": self.family,
                "case": self.case or None, "reason": self.reason or None,
                "unchecked": list(self.unchecked)}


def all_labels() -> list:
    return [TaxonomyLabel(f, c) for f, (_, cases) in FAMILIES.items() for c in cases]


def _unclassified(reason: str) -> TaxonomyLabel:
    return TaxonomyLabel("Unclassified", reason=reason)


# ---- almost conjugacy --------------------------------------------------------

def almost_conjugate(H, elements: Sequence) -> Optional[tuple]:
    """Witness ``(gamma, conjugators)`` with ``g_i^-1 alpha_i g_i`` a power of ``gamma`` for all i.

    ``H`` is the ambient free group (only its rank matters).  Each candidate
    ``gamma`` is the root of one element's cyclic core; membership of the
    others is decided on the Stallings graph of ``<gamma>``.
    """
    els = [W.free_reduce(x) for x in elements]
    if any(not x for x in els):
        raise TrivialWord("almost conjugacy is defined for non-trivial elements")
    if not els:
        return None
    rank = H.rank if H is not None else max(abs(k) for x in els for k in x)
    tried = set()
    for x in els:
        gamma = W.primitive_root(W.cyclic_reduce(x)[0])[0]
        if gamma in tried:
            continue
        tried.add(gamma)
        C = S.subgroup_graph([gamma], rank)
        gs = []
        for y in els:
            hit = S.conjugate_into(C, y)
            if hit is None:
                break
            g, k = hit
            if k != 1:  # a proper power of y lands in <gamma>, y itself does not
                break
            gs.append(g)
        else:
            return gamma, tuple(gs)
    return None


def _ac(H, *els) -> bool:
    return almost_conjugate(H, els) is not None


# ---- vertex recognition ------------------------------------------------------

def ice_data(vg) -> Optional[dict]:
    """Recognise a rank 1 centralizer extension ``F *_<u> Ab(u, r)`` of a free base.

    Accepts the amalgam form (free vertex, rank 2 abelian vertex, one rank 1
    edge) and the loop form ``<F, r | [r, u]>`` (one rank 1 loop with equal
    images).  ``u`` must not be a proper power in the free base.
    """
    if not isinstance(vg, NestedGroup):
        return None
    G = vg.gog
    base = G.vertices.get(vg.base)
    if not isinstance(base, FreeGroup) or base.rank < 2 or len(G.edges) != 1:
        return None
    e = G.edges[0]
    if e.rank != 1:
        return None
    if e.is_loop:
        if e.src != vg.base or not base.equal(e.i_images[0], e.t_images[0]):
            return None
        u = W.free_reduce(e.i_images[0])
    else:
        if len(G.vertices) != 2 or vg.base not in (e.src, e.dst):
            return None
        other = e.dst if e.src == vg.base else e.src
        A = G.vertices[other]
        if not isinstance(A, FreeAbelianGroup) or A.rank != 2:
            return None
        u = W.free_reduce(e.i_images[0] if e.src == vg.base else e.t_images[0])
    if W.primitive_root(u)[1] != 1:
        return None
    return {"base": base, "u": u}


def _kind(vg) -> str:
    if isinstance(vg, FreeAbelianGroup):
        return "abelian" if vg.rank >= 1 else "trivial"
    if isinstance(vg, FreeGroup):
        if vg.rank == 0:
            return "trivial"
        return "cyclic" if vg.rank == 1 else "free"
    if isinstance(vg, NestedGroup):
        return "ice" if ice_data(vg) is not None else "nested"
    raise UnsupportedVertexGroup(f"cannot classify vertex group {vg!r}")


def has_noncyclic_abelian(vg) -> bool:
    """Syntactic check for a visible ``Z^2``: an abelian vertex of rank >= 2 or a loop whose images are conjugate.

    Only the declared structure is inspected; subgroups hidden by other
    relations are not searched for.
    """
    if isinstance(vg, FreeAbelianGroup):
        return vg.rank >= 2
    if isinstance(vg, FreeGroup):
        return False
    if isinstance(vg, NestedGroup):
        G = vg.gog
        if any(has_noncyclic_abelian(x) for x in G.vertices.values()):
            return True
        for e in G.edges:
            if e.rank >= 2:
                return True
            if e.is_loop and e.rank == 1:
                V = G.vertices[e.src]
                x, y = e.i_images[0], e.t_images[0]
                if isinstance(V, FreeGroup):
                    if W.is_conjugate_free(x, y) is not None or W.is_conjugate_free(x, W.inverse(y)) is not None:
                        return True
                elif V.equal(x, y):
                    return True
        return False
    raise UnsupportedVertexGroup(f"cannot inspect vertex group {vg!r}")


def is_basis_commutator(H: FreeGroup, x) -> bool:
    """``x`` is conjugate to ``[y, z]^{+-1}`` for the standard basis of a rank 2 free group.

    Every basis commutator of ``F(y, z)`` is conjugate to one of these two.
    """
    if H.rank != 2:
        return False
    c = W.commutator((1,), (2,))
    return W.is_conjugate_free(x, c) is not None or W.is_conjugate_free(x, W.inverse(c)) is not None


def generates(H: FreeGroup, elements) -> bool:
    els = [W.free_reduce(x) for x in elements if W.free_reduce(x)]
    if not els:
        return H.rank == 0
    return S.index(S.subgroup_graph(els, H.rank)) == 1


# ---- edge bookkeeping --------------------------------------------------------

def _image_at(e, v):
    return e.i_images[0] if e.src == v else e.t_images[0]


def _image_other(e, v):
    return e.t_images[0] if e.src == v else e.i_images[0]


def _between(G, x, y) -> list:
    return [e for e in G.edges if not e.is_loop and {e.src, e.dst} == {x, y}]


def _loops(G, v) -> list:
    return [e for e in G.edges if e.is_loop and e.src == v]


# ---- family matchers ---------------------------------------------------------

def _free_decomposable(G, Fv, kinds) -> TaxonomyLabel:
    trivial = [e for e in G.edges if e.rank == 0]
    cyclic = [e for e in G.edges if e.rank == 1]
    if len(trivial) != 1:
        return _unclassified("more than one trivial edge group")
    if any(e.rank > 1 for e in G.edges):
        return _unclassified("non-cyclic edge group")
    f = trivial[0]
    others = [v for v in G.vertices if v != Fv]
    # the free factor is either a trivial-edge loop at F or a cyclic vertex hanging off F
    if f.is_loop:
        if f.src != Fv:
            return _unclassified("trivial loop away from the F vertex")
        far = None
    else:
        if Fv not in (f.src, f.dst):
            return _unclassified("trivial edge does not touch the F vertex")
        far = f.dst if f.src == Fv else f.src
    fk = kinds[Fv]
    if not cyclic:
        if far is None:
            if len(G.vertices) != 1:
                return _unclassified("vertices other than F away from the free factor")
            if fk == "free":
                return TaxonomyLabel("FreeDecomposable", "F-free")
            if fk == "ice":
                return TaxonomyLabel("FreeDecomposable", "ICE-times-free")
            return _unclassified("F vertex must be free or a rank 1 centralizer extension")
        if len(G.vertices) != 2:
            return _unclassified("vertices other than F away from the free factor")
        fark = kinds[far]
        if fk == "free" and fark == "cyclic":
            return TaxonomyLabel("FreeDecomposable", "F-free")
        if fk == "ice" and fark == "cyclic":
            return TaxonomyLabel("FreeDecomposable", "ICE-times-free")
        if fk == "free":
            H = G.vertices[far]
            if H.rank == 2 and fark in ("free", "abelian"):
                return TaxonomyLabel("FreeDecomposable", "F-times-H")
            if fark in ("nested", "ice"):
                return TaxonomyLabel("FreeDecomposable", "F-times-H",
                                     unchecked=("free factor is fully residually free of rank 2",))
        return _unclassified("free factor does not match any decomposable shape")
    # flat centralizer extension plus a free factor: F -- Ab(alpha, r) over <alpha>
    if len(cyclic) != 1 or fk != "free":
        return _unclassified("decomposable splitting with extra cyclic edges")
    c = cyclic[0]
    if c.is_loop or Fv not in (c.src, c.dst):
        return _unclassified("cyclic edge does not join F to an abelian vertex")
    ab = c.dst if c.src == Fv else c.src
    if kinds[ab] != "abelian" or G.vertices[ab].rank != 2:
        return _unclassified("cyclic edge does not join F to Ab(alpha, r)")
    if W.primitive_root(W.free_reduce(_image_at(c, Fv)))[1] != 1:
        return _unclassified("centralizer is extended along a proper power")
    rest = [v for v in others if v != ab]
    if far is None and not rest:
        return TaxonomyLabel("FreeDecomposable", "ICE-times-free")
    if far is not None and rest == [far] and kinds[far] == "cyclic" and Fv in (f.src, f.dst):
        return TaxonomyLabel("FreeDecomposable", "ICE-times-free")
    return _unclassified("free factor does not match any decomposable shape")


def _abelian_only(G, Fv, kinds) -> TaxonomyLabel:
    fk = kinds[Fv]
    if fk not in ("free", "ice"):
        return _unclassified("F vertex must be free or a rank 1 centralizer extension")
    abel = [v for v in G.vertices if v != Fv]
    if any(kinds[v] == "cyclic" for v in abel):
        return _unclassified("cyclic vertex group of valence one (a hair)")
    if any(e.rank != 1 for e in G.edges):
        return _unclassified("non-cyclic edge group")
    if any(Fv not in (e.src, e.dst) for e in G.edges):
        return _unclassified("edge between abelian vertex groups")
    n, m = len(G.vertices), len(G.edges)
    if any(G.vertices[v].rank >= 3 for v in abel) and fk != "free":
        return _unclassified("rank 3 abelian vertex forces the F vertex to be F itself")
    if n == 2 and m == 1:
        return TaxonomyLabel("AbelianOnly", "two-vertex")
    if n == 3 and m == 2 and not _loops(G, Fv):
        if fk != "free":
            return _unclassified("two abelian vertex groups force the F vertex to be F itself")
        return TaxonomyLabel("AbelianOnly", "three-vertex-line")
    if n == 2 and m == 2 and len(_loops(G, Fv)) == 1:
        return TaxonomyLabel("AbelianOnly", "loop-plus-edge")
    return _unclassified("underlying graph is not an edge, a line of two edges, or an edge plus a loop")


def _two_nonabelian(G, Fv, kinds) -> TaxonomyLabel:
    fk = kinds[Fv]
    if fk not in ("free", "ice"):
        return _unclassified("F vertex must be free or a rank 1 centralizer extension")
    if any(e.rank != 1 for e in G.edges):
        return _unclassified("non-cyclic edge group")
    nonab = [v for v in G.vertices if v != Fv and kinds[v] not in ("abelian", "cyclic")]
    abel = [v for v in G.vertices if v != Fv and kinds[v] in ("abelian", "cyclic")]
    if len(nonab) != 1:
        return _unclassified("more than two non-abelian vertex groups")
    h = nonab[0]
    if kinds[h] != "free" or G.vertices[h].rank != 2:
        return _unclassified("second non-abelian vertex group is not free of rank 2")
    if any(kinds[v] == "cyclic" for v in abel):
        return _unclassified("cyclic vertex group of valence one (a hair)")
    if len(abel) > 1:
        return _unclassified("more than one abelian vertex group")
    H = G.vertices[h]
    fh = _between(G, Fv, h)
    hloops = _loops(G, h)
    if _loops(G, Fv):
        return _unclassified("loop at the F vertex")
    if not fh:
        return _unclassified("F and H are not adjacent")
    amal, extra = fh[0], fh[1:]
    alpha = _image_at(amal, h)
    m = len(G.edges)

    if abel:
        ab = abel[0]
        if G.vertices[ab].rank != 2:
            return _unclassified("abelian vertex group is not Ab(delta, r)")
        ha = _between(G, h, ab)
        if len(ha) != 1 or _between(G, Fv, ab):
            return _unclassified("abelian vertex must hang off H alone")
        p = _image_at(ha[0], h)
        if fk == "ice" and not (m == 3 and hloops):
            return _unclassified("abelian vertex together with a centralizer extension vertex")
        if m == 2 and not extra and not hloops:
            return TaxonomyLabel("WithAbelian", "A")
        if m == 3 and len(hloops) == 1 and not extra:
            lo = hloops[0]
            a1, a2 = lo.i_images[0], lo.t_images[0]
            for x in (alpha, p):
                for y in (a1, a2):
                    if _ac(H, x, y):
                        return _unclassified("edge generator is almost conjugate to a loop image in H")
            return TaxonomyLabel("WithAbelian", "B1")
        if m == 3 and len(extra) == 1 and not hloops:
            gamma = _image_at(extra[0], h)
            if _ac(H, gamma, alpha):
                return _unclassified("gamma and alpha are almost conjugate in H")
            return TaxonomyLabel("WithAbelian", "B2")
        return _unclassified("no shape with an abelian vertex matches")

    fam = "ICEVertex" if fk == "ice" else "AllFree"
    if m == 1:
        if fk == "ice":
            return TaxonomyLabel(fam, "1")
        if is_basis_commutator(H, alpha):
            return TaxonomyLabel(fam, "A2-QH")
        return TaxonomyLabel(fam, "A1")
    if m == 2 and len(hloops) == 1:
        lo = hloops[0]
        if _ac(H, alpha, lo.i_images[0]) or _ac(H, alpha, lo.t_images[0]):
            return _unclassified("alpha is almost conjugate to a loop image in H")
        return TaxonomyLabel(fam, "2" if fk == "ice" else "B1",
                             unchecked=("<H, t> is free of rank 2",))
    if m == 2 and len(extra) == 1:
        return TaxonomyLabel(fam, "3" if fk == "ice" else "B2")
    if fk == "ice":
        return _unclassified("too many edges for a centralizer extension vertex")
    if m == 3 and len(extra) == 1 and len(hloops) == 1:
        gamma = _image_at(extra[0], h)
        if _ac(H, alpha, gamma):
            return _unclassified("alpha and gamma are almost conjugate in H")
        return TaxonomyLabel(fam, "C1", unchecked=("<H, s> is free of rank 2",))
    if m == 3 and len(extra) == 2 and not hloops:
        delta, eps = _image_at(extra[0], h), _image_at(extra[1], h)
        if not generates(H, [alpha, delta, eps]):
            return _unclassified("alpha, delta, epsilon do not generate H")
        return TaxonomyLabel(fam, "C2")
    return _unclassified("no shape with free vertex groups matches")


def _one_vertex(G, Fv, kinds) -> TaxonomyLabel:
    if kinds[Fv] in ("free", "cyclic", "trivial"):
        return _unclassified("a single vertex group must properly contain F")
    if kinds[Fv] == "abelian":
        return _unclassified("single vertex group is abelian")
    if any(e.rank != 1 for e in G.edges):
        return _unclassified("non-cyclic edge group")
    m = len(G.edges)
    if m == 2:
        if has_noncyclic_abelian(G.vertices[Fv]):
            return _unclassified("two loops but the vertex group has a non-cyclic abelian subgroup")
        return TaxonomyLabel("OneVertex", "I")
    if m == 1:
        return TaxonomyLabel("OneVertex", "II")
    return _unclassified("one vertex group with more than two loops")


def classify_splitting(G: GraphOfGroups, F_vertex: str) -> TaxonomyLabel:
    """The unique matching case, or ``Unclassified`` naming the first failed constraint."""
    require_valid(G)
    if F_vertex not in G.vertices:
        return _unclassified(f"no vertex {F_vertex!r}")
    kinds = {v: _kind(vg) for v, vg in G.vertices.items()}
    if len(G.vertices) > 3:
        return _unclassified("more than three vertices")
    if G.cycle_rank() > 2:
        return _unclassified("more than two independent cycles")
    if not G.edges:
        return _unclassified("no edges: the group is its F vertex")
    if any(e.rank == 0 for e in G.edges):
        return _free_decomposable(G, F_vertex, kinds)
    if len(G.vertices) == 1:
        return _one_vertex(G, F_vertex, kinds)
    if all(kinds[v] in ("abelian", "cyclic") for v in G.vertices if v != F_vertex):
        return _abelian_only(G, F_vertex, kinds)
    return _two_nonabelian(G, F_vertex, kinds)


# ---- lints and depth ---------------------------------------------------------

def double_hnn_abelian_lint(G: GraphOfGroups) -> list:
    """Flag non-cyclic abelian data in a splitting with two independent cycles.

    Such a splitting has no non-cyclic abelian vertex group and no edge
    group of rank >= 2.  Graphs with a different cycle rank are skipped,
    reported by a single ``skipped`` diagnostic.
    """
    if G.cycle_rank() != 2:
        return [Diagnostic("skipped", G.name or "graph", f"cycle rank {G.cycle_rank()} is not 2")]
    out = []

    def walk(H: GraphOfGroups, prefix: str):
        for v, vg in H.vertices.items():
            if isinstance(vg, FreeAbelianGroup) and vg.rank >= 2:
                out.append(Diagnostic("non-cyclic-abelian-vertex", prefix + v,
                                      f"abelian vertex group of rank {vg.rank}"))
            elif isinstance(vg, NestedGroup):
                walk(vg.gog, f"{prefix}{v}/")
        for e in H.edges:
            if e.rank >= 2:
                out.append(Diagnostic("non-cyclic-edge-group", prefix + e.id, f"edge group of rank {e.rank}"))

    walk(G, "")
    return out


def hierarchy_depth(H) -> int:
    """Depth of a given nesting: leaves (free, abelian, trivial) are 0, each level of splitting adds 1.

    A graph of groups with one vertex and no edges is just its vertex group.
    """
    if isinstance(H, (FreeGroup, FreeAbelianGroup)):
        return 0
    if isinstance(H, NestedGroup):
        return hierarchy_depth(H.gog)
    if isinstance(H, GraphOfGroups):
        depths = [hierarchy_depth(vg) for vg in H.vertices.values()]
        if not H.edges and len(H.vertices) == 1:
            return depths[0]
        return 1 + max(depths, default=0)
    raise UnsupportedVertexGroup(f"cannot measure depth of {H!r}")
