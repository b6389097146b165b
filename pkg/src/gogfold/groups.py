"""Vertex groups: free, free abelian, and nested graphs of groups.

All three expose the same duck-typed interface used by the normal form
code: ``identity``, ``mul``, ``inv``, ``is_trivial``, ``power``, ``equal``,
``coords`` (coefficients of an element in a free abelian subgroup given by
a basis of images), ``combine`` (the inverse of ``coords``), ``power_of``,
``presentation``, ``as_word``, ``parse`` and ``format``.
"""
from __future__ import annotations

import re
from typing import Optional, Sequence

from . import ablin
from . import words as W
from .errors import DimensionMismatch, TypeMismatch, UnsupportedVertexGroup


class FreeGroup:
    kind = "free"

    def __init__(self, generators):
        self.alphabet = generators if isinstance(generators, W.Alphabet) else W.Alphabet(generators)

    def __repr__(self):
        return f"FreeGroup({list(self.alphabet.generators)})"

    def __eq__(self, other):
        return isinstance(other, FreeGroup) and self.alphabet == other.alphabet

    def __hash__(self):
        return hash(("free", self.alphabet))

    @property
    def rank(self) -> int:
        return len(self.alphabet)

    @property
    def is_abelian(self) -> bool:
        return self.rank <= 1

    def check(self, x):
        if not isinstance(x, tuple) or any(not isinstance(k, int) or k == 0 or abs(k) > self.rank for k in x):
            raise TypeMismatch(f"{x!r} is not a word over {self.alphabet.generators}")

    def identity(self):
        return ()

    def mul(self, x, y):
        return W.mul(x, y)

    def inv(self, x):
        return W.inverse(x)

    def is_trivial(self, x) -> bool:
        return not W.free_reduce(x)

    def equal(self, x, y) -> bool:
        return W.free_reduce(x) == W.free_reduce(y)

    def power(self, x, k: int):
        return W.power(x, k)

    def conjugate(self, x, g):
        return W.conjugate(x, g)

    def power_of(self, x, w) -> Optional[int]:
        return W.power_of(x, w)

    def commute(self, x, y) -> bool:
        return W.commutes_free(x, y)

    def coords(self, x, images) -> Optional[tuple]:
        r = len(images)
        if r == 0:
            return () if self.is_trivial(x) else None
        if r == 1:
            k = W.power_of(x, images[0])
            return None if k is None else (k,)
        # commuting images share a root; solve in that cyclic group
        root, _ = W.primitive_root(images[0])
        exps = []
        for y in images:
            k = W.power_of(y, root)
            if k is None:
                return None
            exps.append([k])
        n = W.power_of(x, root)
        if n is None:
            return None
        c = ablin.solve(exps, [n])
        return None if c is None else tuple(c)

    def combine(self, images, c):
        out = ()
        for y, k in zip(images, c):
            out = W.mul(out, W.power(y, k))
        return out

    def presentation(self) -> tuple:
        return self.alphabet.generators, []

    def as_word(self, x):
        return W.free_reduce(x)

    def parse(self, text: str):
        return W.parse_word(text, self.alphabet)

    def format(self, x) -> str:
        return W.format_word(x, self.alphabet)

    def abelian_image(self, x) -> tuple:
        return W.abelianize(x, self.rank)


_VEC = re.compile(r"^\s*\(([-\d,\s]*)\)\s*$")


class FreeAbelianGroup:
    """``Z^n`` with named basis; elements are integer tuples."""

    kind = "abelian"
    is_abelian = True

    def __init__(self, basis):
        self.alphabet = basis if isinstance(basis, W.Alphabet) else W.Alphabet(basis)

    def __repr__(self):
        return f"FreeAbelianGroup({list(self.alphabet.generators)})"

    def __eq__(self, other):
        return isinstance(other, FreeAbelianGroup) and self.alphabet == other.alphabet

    def __hash__(self):
        return hash(("abelian", self.alphabet))

    @property
    def rank(self) -> int:
        return len(self.alphabet)

    def check(self, x):
        if not isinstance(x, tuple) or len(x) != self.rank or any(not isinstance(k, int) for k in x):
            raise TypeMismatch(f"{x!r} is not an element of Z^{self.rank}")

    def identity(self):
        return (0,) * self.rank

    def mul(self, x, y):
        if len(x) != len(y):
            raise DimensionMismatch(f"adding vectors of lengths {len(x)} and {len(y)}")
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def is_trivial(self, x) -> bool:
        return not any(x)

    def equal(self, x, y) -> bool:
        return tuple(x) == tuple(y)

    def power(self, x, k: int):
        return tuple(k * a for a in x)

    def conjugate(self, x, g):
        return tuple(x)

    def commute(self, x, y) -> bool:
        return True

    def power_of(self, x, w) -> Optional[int]:
        if not any(w):
            raise ValueError("power_of needs a non-trivial base element")
        c = ablin.solve([list(w)], list(x))
        return None if c is None else c[0]

    def coords(self, x, images) -> Optional[tuple]:
        c = ablin.solve([list(y) for y in images], list(x))
        return None if c is None else tuple(c)

    def combine(self, images, c):
        out = [0] * self.rank
        for y, k in zip(images, c):
            for j, a in enumerate(y):
                out[j] += k * a
        return tuple(out)

    def presentation(self) -> tuple:
        n = self.rank
        rels = [W.commutator((i + 1,), (j + 1,)) for i in range(n) for j in range(i + 1, n)]
        return self.alphabet.generators, rels

    def as_word(self, x):
        out = []
        for i, k in enumerate(x):
            out.extend([(i + 1) if k > 0 else -(i + 1)] * abs(k))
        return tuple(out)

    def parse(self, text: str):
        m = _VEC.match(text)
        if m:
            parts = [p for p in m.group(1).replace(" ", "").split(",") if p]
            v = tuple(int(p) for p in parts)
            self.check(v)
            return v
        return W.abelianize(W.parse_word(text, self.alphabet), self.rank)

    def format(self, x) -> str:
        return W.format_word(self.as_word(x), self.alphabet)

    def abelian_image(self, x) -> tuple:
        return tuple(x)


class NestedGroup:
    """Fundamental group of an inner graph of groups at a base vertex; elements are closed GAPaths."""

    kind = "nested"
    is_abelian = False

    def __init__(self, gog, base: str):
        if base not in gog.vertices:
            raise TypeMismatch(f"base vertex {base!r} not in nested graph")
        self.gog = gog
        self.base = base
        self._pres = None

    def __repr__(self):
        return f"NestedGroup({self.gog.name or 'G'}@{self.base})"

    @property
    def depth(self) -> int:
        return 1 + max((getattr(g, "depth", 0) for g in self.gog.vertices.values()), default=0)

    def check(self, x):
        from .bass_serre import GAPath, check_path
        if not isinstance(x, GAPath):
            raise TypeMismatch(f"{x!r} is not a G(A)-path")
        check_path(self.gog, x)
        if x.start != self.base or not x.is_closed(self.gog):
            raise TypeMismatch("nested group elements are closed paths at the base vertex")

    def identity(self):
        from .bass_serre import vertex_path
        return vertex_path(self.gog, self.base)

    def mul(self, x, y):
        from .bass_serre import concat
        return concat(self.gog, x, y)

    def inv(self, x):
        from .bass_serre import inverse
        return inverse(self.gog, x)

    def is_trivial(self, x) -> bool:
        from .bass_serre import is_identity
        return is_identity(self.gog, x)

    def equal(self, x, y) -> bool:
        from .bass_serre import equal
        return equal(self.gog, x, y)

    def power(self, x, k: int):
        from .bass_serre import power
        return power(self.gog, x, k)

    def conjugate(self, x, g):
        return self.mul(self.mul(self.inv(g), x), g)

    def commute(self, x, y) -> bool:
        return self.is_trivial(self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y)))

    def power_of(self, x, w) -> Optional[int]:
        from .bass_serre import power_problem
        return power_problem(self.gog, x, w)

    def coords(self, x, images) -> Optional[tuple]:
        from .bass_serre import abelian_coords
        return abelian_coords(self.gog, x, list(images))

    def combine(self, images, c):
        out = self.identity()
        for y, k in zip(images, c):
            out = self.mul(out, self.power(y, k))
        return out

    def presentation(self) -> tuple:
        from .gog import relative_presentation
        if self._pres is None:
            self._pres = relative_presentation(self.gog)
        return self._pres.generators, list(self._pres.relations)

    def as_word(self, x):
        from .gog import relative_presentation
        if self._pres is None:
            self._pres = relative_presentation(self.gog)
        return self._pres.path_word(self.gog, x)

    def parse(self, text: str):
        from .gog import parse_path
        text = text.strip()
        if not text.startswith("["):
            # bare element of the base vertex group
            text = f"[ {self.base}: {text} ]"
        p = parse_path(self.gog, text, start=self.base)
        self.check(p)
        return p

    def format(self, x) -> str:
        from .gog import format_path
        return format_path(self.gog, x)

    def abelian_image(self, x) -> tuple:
        gens, _ = self.presentation()
        return W.abelianize(self.as_word(x), len(gens))


def require_free_or_abelian(vg, what: str = "operation"):
    if vg.kind not in ("free", "abelian"):
        raise UnsupportedVertexGroup(f"{what} supports free and free abelian vertex groups, got {vg.kind}")


def is_maximal_cyclic(vg, x) -> bool:
    """``x`` generates a maximal cyclic subgroup: not a proper power (free) or primitive (abelian)."""
    if vg.kind == "free":
        return W.primitive_root(x)[1] == 1
    if vg.kind == "abelian":
        return ablin.primitive_part(x)[1] == 1
    raise UnsupportedVertexGroup("root extraction in nested vertex groups is not supported")

