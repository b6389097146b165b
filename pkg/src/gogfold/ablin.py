"""Integer linear algebra on row vectors (Python ints, no overflow).

Matrices are lists of rows.  Lattices are row spans.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .errors import DimensionMismatch


def _copy(M):
    return [list(r) for r in M]


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def vecmat(v, M) -> list:
    cols = len(M[0]) if M else 0
    return [sum(v[k] * M[k][j] for k in range(len(M))) for j in range(cols)]


def transpose(M, cols: Optional[int] = None) -> list:
    if not M:
        return [[] for _ in range(cols or 0)]
    return [list(c) for c in zip(*M)]


def det(M) -> int:
    """Bareiss fraction-free determinant."""
    n = len(M)
    if n == 0:
        return 1
    A = _copy(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def hermite(M, cols: Optional[int] = None) -> tuple:
    """Row Hermite form: returns ``(H, U)`` with ``U M = H`` and U unimodular.

    Non-zero rows of H come first, pivots are positive and strictly move
    right, entries above a pivot lie in ``[0, pivot)``.
    """
    H = _copy(M)
    m = len(H)
    n = len(H[0]) if m else (cols or 0)
    U = identity(m)
    row = 0
    for col in range(n):
        if row >= m:
            break
        while True:
            nz = [r for r in range(row, m) if H[r][col]]
            if not nz:
                break
            piv = min(nz, key=lambda r: abs(H[r][col]))
            H[row], H[piv] = H[piv], H[row]
            U[row], U[piv] = U[piv], U[row]
            done = True
            for r in range(row + 1, m):
                q = H[r][col] // H[row][col]
                if q:
                    H[r] = [a - q * b for a, b in zip(H[r], H[row])]
                    U[r] = [a - q * b for a, b in zip(U[r], U[row])]
                if H[r][col]:
                    done = False
            if done:
                break
        if row < m and H[row][col]:
            if H[row][col] < 0:
                H[row] = [-a for a in H[row]]
                U[row] = [-a for a in U[row]]
            for r in range(row):
                q = H[r][col] // H[row][col]
                if q:
                    H[r] = [a - q * b for a, b in zip(H[r], H[row])]
                    U[r] = [a - q * b for a, b in zip(U[r], U[row])]
            row += 1
    return H, U


def rank(M) -> int:
    H, _ = hermite(M)
    return sum(1 for r in H if any(r))


def left_kernel(M, cols: Optional[int] = None) -> list:
    """Basis of ``{x : x M = 0}`` as rows."""
    H, U = hermite(M, cols)
    return [U[i] for i, r in enumerate(H) if not any(r)]


def smith_normal_form(M) -> tuple:
    """Return ``(U, D, V)`` with ``U M V = D`` diagonal, ``d_i | d_{i+1}``, U and V unimodular."""
    m = len(M)
    n = len(M[0]) if m else 0
    D = _copy(M)
    U = identity(m)
    V = identity(n)

    def swap_rows(a, b):
        D[a], D[b] = D[b], D[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for r in D:
            r[a], r[b] = r[b], r[a]
        for r in V:
            r[a], r[b] = r[b], r[a]

    def add_row(dst, src, q):  # row_dst -= q row_src
        D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q col_src
        for r in D:
            r[dst] -= q * r[src]
        for r in V:
            r[dst] -= q * r[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // D[t][t]
                if q:
                    add_row(i, t, q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // D[t][t]
                if q:
                    add_col(j, t, q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            # fold the offending row into row t to restore divisibility
            D[t] = [a + b for a, b in zip(D[t], D[bad[0]])]
            U[t] = [a + b for a, b in zip(U[t], U[bad[0]])]
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return U, D, V


def diagonal(D) -> list:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def free_rank_of_quotient(ambient_rank: int, relations: Sequence[Sequence[int]]) -> int:
    """Torsion-free rank of ``Z^ambient_rank / <relations>``."""
    rels = [list(r) for r in relations]
    for r in rels:
        if len(r) != ambient_rank:
            raise DimensionMismatch(f"relation of length {len(r)} in rank {ambient_rank}")
    return ambient_rank - (rank(rels) if rels else 0)


def solve(basis: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[list]:
    """Integer ``c`` with ``c . basis == v`` (rows may be dependent), or ``None``."""
    n = len(v)
    rows = [list(r) for r in basis]
    for r in rows:
        if len(r) != n:
            raise DimensionMismatch(f"vector of length {n} against rows of length {len(r)}")
    if not rows:
        return [] if not any(v) else None
    H, U = hermite(rows)
    rest = list(v)
    y = [0] * len(rows)
    for i, r in enumerate(H):
        if not any(r):
            break
        col = next(j for j, a in enumerate(r) if a)
        if rest[col] % r[col]:
            return None
        q = rest[col] // r[col]
        y[i] = q
        rest = [a - q * b for a, b in zip(rest, r)]
    if any(rest):
        return None
    return vecmat(y, U)


def primitive_part(v: Sequence[int]) -> tuple:
    """``(p, k)`` with ``v == k p``, p primitive, ``k >= 0``."""
    g = 0
    for a in v:
        g = gcd(g, a)
    if g == 0:
        return tuple(v), 0
    return tuple(a // g for a in v), g


@dataclass(frozen=True)
class Lattice:
    """Subgroup of ``Z^ambient`` stored by its reduced Hermite basis."""

    basis: tuple
    ambient: int

    @classmethod
    def span(cls, vectors, ambient: int) -> "Lattice":
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise DimensionMismatch(f"vector {v} not in Z^{ambient}")
        if not vecs:
            return cls((), ambient)
        H, _ = hermite(vecs)
        return cls(tuple(tuple(r) for r in H if any(r)), ambient)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return lattice_member(self, v) is not None

    def join(self, vectors) -> "Lattice":
        return Lattice.span(list(self.basis) + [list(v) for v in vectors], self.ambient)

    def least_multiple(self, v) -> Optional[int]:
        """Least ``k > 0`` with ``k v`` in the lattice."""
        if not any(v):
            return 1
        ker = left_kernel([list(b) for b in self.basis] + [list(v)], self.ambient)
        g = 0
        for row in ker:
            g = gcd(g, row[-1])
        return abs(g) or None

    def preimage(self, images) -> list:
        """Basis of ``{g in Z^r : sum g_j images_j in self}`` for r = len(images)."""
        r = len(images)
        if r == 0:
            return []
        rows = [list(x) for x in images] + [list(b) for b in self.basis]
        ker = left_kernel(rows, self.ambient)
        gens = [row[:r] for row in ker]
        if not gens:
            return []
        H, _ = hermite(gens)
        return [h for h in H if any(h)]


def lattice_member(L: Lattice, v: Sequence[int]) -> Optional[list]:
    if len(v) != L.ambient:
        raise DimensionMismatch(f"vector of length {len(v)} in lattice of ambient rank {L.ambient}")
    return solve(L.basis, v)
