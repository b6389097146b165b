"""Independent reference implementations used only by the tests.

Membership oracle: a reduced word ``w`` lies in ``<g_1, ..., g_k>`` iff some
closed path at the base of the *unfolded* petal graph reads a word that
freely reduces to ``w``.  Paths whose label reduces to the empty word form
a Dyck closure ``R``, computed as a fixpoint; no folding is involved.
"""
from __future__ import annotations

import itertools

import numpy as np
from numba import njit

from gogfold import words as W

LETTERS = (1, -1, 2, -2)
LETTER_POS = {x: i for i, x in enumerate(LETTERS)}


def word_trie(max_len: int):
    """All reduced words over F(a, b) up to ``max_len`` in BFS order: (parent, letter index, words)."""
    parents = [-1]
    letters = [-1]
    words = [()]
    frontier = [0]
    for _ in range(max_len):
        nxt = []
        for node in frontier:
            w = words[node]
            for i, x in enumerate(LETTERS):
                if w and w[-1] == -x:
                    continue
                parents.append(node)
                letters.append(i)
                words.append(w + (x,))
                nxt.append(len(words) - 1)
        frontier = nxt
    return np.array(parents, dtype=np.int64), np.array(letters, dtype=np.int64), words


def generator_sets(max_len: int = 4, max_gens: int = 3, rank: int = 2):
    """Generator sets up to order and inversion of each generator."""
    pool = []
    seen = set()
    for w in W.reduced_words(rank, max_len, 1):
        key = min(w, W.inverse(w))
        if key not in seen:
            seen.add(key)
            pool.append(key)
    for k in range(1, max_gens + 1):
        yield from itertools.combinations(pool, k)


def petal_arrays(gen_sets, max_vertices: int = 16):
    """Traversal lists of the unfolded petal graphs, padded into arrays."""
    n = len(gen_sets)
    max_trav = max(2 * sum(len(g) for g in gens) for gens in gen_sets)
    trav = np.full((n, max_trav, 3), -1, dtype=np.int64)
    ntrav = np.zeros(n, dtype=np.int64)
    nverts = np.zeros(n, dtype=np.int64)
    for s, gens in enumerate(gen_sets):
        nv = 1
        t = 0
        for g in gens:
            cur = 0
            for j, x in enumerate(g):
                if j == len(g) - 1:
                    nxt = 0
                else:
                    nxt = nv
                    nv += 1
                trav[s, t] = (cur, LETTER_POS[x], nxt)
                trav[s, t + 1] = (nxt, LETTER_POS[-x], cur)
                t += 2
                cur = nxt
        ntrav[s] = t
        nverts[s] = nv
        assert nv <= max_vertices
    return trav, ntrav, nverts


@njit(cache=True)
def _dyck_members(trav, ntrav, nverts, parents, letters, out):
    n_sets = trav.shape[0]
    n_nodes = parents.shape[0]
    inv = np.array([1, 0, 3, 2])
    R = np.zeros(16, dtype=np.int64)
    T = np.zeros((4, 16), dtype=np.int64)
    state = np.zeros(n_nodes, dtype=np.int64)
    for s in range(n_sets):
        nv = nverts[s]
        nt = ntrav[s]
        for p in range(nv):
            R[p] = 1 << p
        changed = True
        while changed:
            changed = False
            for a in range(nt):
                p, x, p2 = trav[s, a, 0], trav[s, a, 1], trav[s, a, 2]
                for b in range(nt):
                    q2, y, q = trav[s, b, 0], trav[s, b, 1], trav[s, b, 2]
                    if y == inv[x] and (R[p2] >> q2) & 1 and not (R[p] >> q) & 1:
                        R[p] |= 1 << q
                        changed = True
            for p in range(nv):
                acc = R[p]
                for q in range(nv):
                    if (R[p] >> q) & 1:
                        acc |= R[q]
                if acc != R[p]:
                    R[p] = acc
                    changed = True
        for x in range(4):
            for v in range(nv):
                T[x, v] = 0
        for a in range(nt):
            p, x, p2 = trav[s, a, 0], trav[s, a, 1], trav[s, a, 2]
            T[x, p] |= R[p2]
        state[0] = R[0]
        out[s, 0] = True
        for node in range(1, n_nodes):
            S = state[parents[node]]
            x = letters[node]
            acc = 0
            for v in range(nv):
                if (S >> v) & 1:
                    acc |= T[x, v]
            state[node] = acc
            out[s, node] = (acc & 1) == 1


def dyck_membership(gen_sets, parents, letters) -> np.ndarray:
    trav, ntrav, nverts = petal_arrays(gen_sets)
    out = np.zeros((len(gen_sets), parents.shape[0]), dtype=np.bool_)
    _dyck_members(trav, ntrav, nverts, parents, letters, out)
    return out


@njit(cache=True)
def _read_members(tables, parents, letters, out):
    n_sets = tables.shape[0]
    n_nodes = parents.shape[0]
    state = np.zeros(n_nodes, dtype=np.int64)
    for s in range(n_sets):
        state[0] = 0
        out[s, 0] = True
        for node in range(1, n_nodes):
            v = state[parents[node]]
            state[node] = -1 if v < 0 else tables[s, v, letters[node]]
            out[s, node] = state[node] == 0


def transition_table(H, max_vertices: int) -> np.ndarray:
    """Outgoing letter -> vertex table of a package SubgroupGraph (-1 for missing)."""
    tab = np.full((max_vertices, 4), -1, dtype=np.int64)
    for v, d in enumerate(H.out):
        for x, w in d.items():
            tab[v, LETTER_POS[x]] = w
    return tab


def graph_membership(graphs, parents, letters) -> np.ndarray:
    mv = max(H.n_vertices for H in graphs)
    tables = np.stack([transition_table(H, mv) for H in graphs])
    out = np.zeros((len(graphs), parents.shape[0]), dtype=np.bool_)
    _read_members(tables, parents, letters, out)
    return out


def sympy_snf_diagonal(M) -> list:
    """Invariant factors by sympy, as a reference for the hand-written Smith form."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form
    if not M or not M[0]:
        return []
    D = smith_normal_form(Matrix(M), domain=ZZ)
    k = min(D.shape)
    return [abs(int(D[i, i])) for i in range(k)]
