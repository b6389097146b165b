"""Folded Stallings graphs of finitely generated subgroups of free groups."""
from __future__ import annotations

from collections import deque
from typing import Optional, Sequence

from . import words as W
from .errors import TrivialWord


class _Folder:
    """Union-find graph builder; edges are labelled by signed letters."""

    def __init__(self):
        self.parent: list = []
        self.out: list = []

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.out.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def add_edge(self, u: int, letter: int, v: int):
        pending = [(u, letter, v)]
        while pending:
            u, x, v = pending.pop()
            u, v = self.find(u), self.find(v)
            for a, y, b in ((u, x, v), (v, -x, u)):
                a, b = self.find(a), self.find(b)
                if y in self.out[a]:
                    c = self.find(self.out[a][y])
                    if c != b:
                        pending.extend(self._merge(c, b))
                else:
                    self.out[a][y] = b

    def _merge(self, a: int, b: int) -> list:
        lo, hi = min(a, b), max(a, b)
        self.parent[hi] = lo
        moved = [(lo, y, t) for y, t in self.out[hi].items()]
        self.out[hi] = {}
        return moved

    def add_path(self, start: int, word, end: Optional[int] = None) -> int:
        v = start
        for i, x in enumerate(word):
            if i == len(word) - 1 and end is not None:
                nxt = end
            else:
                nxt = self.new_vertex()
            self.add_edge(v, x, nxt)
            v = nxt
        if not word and end is not None and self.find(end) != self.find(start):
            raise ValueError("empty path between distinct vertices")
        return v

    def edges(self):
        seen = set()
        for v in range(len(self.parent)):
            if self.find(v) != v:
                continue
            for x, t in self.out[v].items():
                t = self.find(t)
                if x > 0 and (v, x, t) not in seen:
                    seen.add((v, x, t))
                    yield v, x, t


class SubgroupGraph:
    """Folded core graph with base vertex 0 and canonical BFS numbering.

    ``out[v]`` maps a signed letter to the target vertex.  Two subgroup graphs
    compare equal iff they are isomorphic as based labelled graphs.
    """

    def __init__(self, rank: int, out: Sequence[dict]):
        self.rank = rank
        self.out = [dict(d) for d in out]
        self._tree = None

    @classmethod
    def from_edges(cls, rank: int, n_vertices: int, edges, base: int = 0, prune: bool = True):
        f = _Folder()
        for _ in range(n_vertices):
            f.new_vertex()
        for u, x, v in edges:
            f.add_edge(u, x, v)
        return cls._from_folder(rank, f, base, prune)

    @classmethod
    def _from_folder(cls, rank: int, f: _Folder, base: int, prune: bool):
        base = f.find(base)
        adj = {}
        for v in range(len(f.parent)):
            if f.find(v) == v:
                adj[v] = {x: f.find(t) for x, t in f.out[v].items()}
        if prune:
            changed = True
            while changed:
                changed = False
                for v in list(adj):
                    if v != base and len(adj[v]) <= 1:
                        for x, t in adj[v].items():
                            adj[t].pop(-x, None)
                        del adj[v]
                        changed = True
        # keep only the component of the base vertex
        order = [base]
        index = {base: 0}
        queue = deque([base])
        while queue:
            v = queue.popleft()
            for x in sorted(adj[v], key=lambda y: (abs(y), -y)):
                t = adj[v][x]
                if t not in index:
                    index[t] = len(order)
                    order.append(t)
                    queue.append(t)
        out = [{x: index[t] for x, t in adj[v].items()} for v in order]
        return cls(rank, out)

    @property
    def n_vertices(self) -> int:
        return len(self.out)

    @property
    def n_edges(self) -> int:
        return sum(1 for d in self.out for x in d if x > 0)

    def edges(self):
        for v, d in enumerate(self.out):
            for x, t in sorted(d.items()):
                if x > 0:
                    yield v, x, t

    def subgroup_rank(self) -> int:
        return self.n_edges - self.n_vertices + 1

    def is_folded(self) -> bool:
        seen = set()
        for v, d in enumerate(self.out):
            for x, t in d.items():
                if self.out[t].get(-x) != v:
                    return False
                seen.add((v, x))
        return True

    def __eq__(self, other):
        return isinstance(other, SubgroupGraph) and self.rank == other.rank and self.out == other.out

    def __hash__(self):
        return hash((self.rank, tuple(tuple(sorted(d.items())) for d in self.out)))

    def __repr__(self):
        return f"SubgroupGraph(rank={self.rank}, vertices={self.n_vertices}, edges={self.n_edges})"

    def read(self, word, start: int = 0) -> Optional[int]:
        v = start
        for x in word:
            v = self.out[v].get(x)
            if v is None:
                return None
        return v

    def spanning_tree(self):
        """``(tree_word, non_tree_edges)``: path word from base to each vertex, basis edges."""
        if self._tree is None:
            paths = {0: ()}
            queue = deque([0])
            tree = set()
            while queue:
                v = queue.popleft()
                for x, t in sorted(self.out[v].items(), key=lambda it: (abs(it[0]), -it[0])):
                    if t not in paths:
                        paths[t] = paths[v] + (x,)
                        tree.add((v, x, t) if x > 0 else (t, -x, v))
                        queue.append(t)
            basis = [e for e in self.edges() if e not in tree]
            self._tree = ([paths[v] for v in range(self.n_vertices)], basis)
        return self._tree

    def basis(self) -> list:
        """Free basis of the subgroup, one word per non-tree edge."""
        paths, basis = self.spanning_tree()
        return [W.mul(paths[u], (x,), W.inverse(paths[v])) for u, x, v in basis]

    def express(self, w) -> Optional[tuple]:
        """Word over ``basis()`` spelling ``w``, or ``None`` if ``w`` is not a member."""
        _, basis = self.spanning_tree()
        index = {e: i + 1 for i, e in enumerate(basis)}
        v = 0
        letters = []
        for x in W.free_reduce(w):
            t = self.out[v].get(x)
            if t is None:
                return None
            e = (v, x, t) if x > 0 else (t, -x, v)
            if e in index:
                letters.append(index[e] if x > 0 else -index[e])
            v = t
        if v != 0:
            return None
        return W.free_reduce(letters)

    def to_dot(self, alphabet: Optional[W.Alphabet] = None, name: str = "H") -> str:
        lines = [f"digraph {name} {{", '  0 [shape=doublecircle];']
        for u, x, v in self.edges():
            label = alphabet.generators[x - 1] if alphabet else f"x{x}"
            lines.append(f'  {u} -> {v} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


def subgroup_graph(generators, alphabet) -> SubgroupGraph:
    """Folded core graph of the subgroup generated by ``generators``."""
    rank = alphabet if isinstance(alphabet, int) else len(alphabet)
    f = _Folder()
    base = f.new_vertex()
    for g in generators:
        g = W.free_reduce(g)
        if g:
            f.add_path(base, g, base)
    return SubgroupGraph._from_folder(rank, f, base, prune=True)


def member(H: SubgroupGraph, w) -> bool:
    return H.read(W.free_reduce(w)) == 0


def intersect_cyclic(H: SubgroupGraph, w) -> Optional[int]:
    """Least ``k > 0`` with ``w^k`` in H, or ``None`` when ``H`` meets ``<w>`` trivially."""
    w = W.free_reduce(w)
    if not w:
        raise TrivialWord("intersect_cyclic needs a non-trivial word")
    core, c = W.cyclic_reduce(w)
    v0 = H.read(c)
    if v0 is None:
        return None
    v = v0
    # reading the core is an injective partial map on vertices
    for k in range(1, H.n_vertices + 1):
        v = H.read(core, v)
        if v is None:
            return None
        if v == v0:
            return k
    return None


def conjugate_into(H: SubgroupGraph, w) -> Optional[tuple]:
    """``(g, k)`` with ``g^-1 w^k g`` in H and k minimal, or ``None``."""
    w = W.free_reduce(w)
    if not w:
        raise TrivialWord("conjugate_into needs a non-trivial word")
    core, c = W.cyclic_reduce(w)
    paths, _ = H.spanning_tree()
    best = None
    for v0 in range(H.n_vertices):
        v = v0
        for k in range(1, H.n_vertices + 1):
            v = H.read(core, v)
            if v is None:
                break
            if v == v0:
                if best is None or k < best[1]:
                    best = (W.mul(c, W.inverse(paths[v0])), k)
                break
    return best


def index(H: SubgroupGraph) -> Optional[int]:
    """Index of H in the ambient free group; ``None`` stands for infinite index."""
    letters = [k for i in range(1, H.rank + 1) for k in (i, -i)]
    for d in H.out:
        if any(x not in d for x in letters):
            return None
    return H.n_vertices


def is_isomorphic(G: SubgroupGraph, H: SubgroupGraph) -> bool:
    return G == H


def double_coset_rep(H: SubgroupGraph, a, w, x, bound: Optional[int] = None) -> Optional[tuple]:
    """``(g, k)`` with ``g in H`` and ``x == g a w^k``, or ``None``.

    ``w`` may be trivial (then k is 0).  The search over k is bounded by the
    word lengths plus the vertex count, which covers every cancellation
    pattern of ``a w^k`` against ``x`` in a folded graph.
    """
    a, w, x = W.free_reduce(a), W.free_reduce(w), W.free_reduce(x)
    if not w:
        g = W.mul(x, W.inverse(a))
        return (g, 0) if member(H, g) else None
    if bound is None:
        bound = len(a) + len(x) + H.n_vertices + 2
    for k in sorted(range(-bound, bound + 1), key=abs):
        g = W.mul(x, W.power(w, -k), W.inverse(a))
        if member(H, g):
            return g, k
    return None
