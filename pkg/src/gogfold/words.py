"""Free group and free abelian group element arithmetic.

A word is a tuple of non-zero integers: ``k`` stands for the generator with
index ``k - 1`` and ``-k`` for its inverse.  All constructors return freely
reduced words.  Conjugation follows ``x^w = w^-1 x w``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ParseError, TrivialWord

Word = tuple


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of generator names; the order fixes abelianization coordinates."""

    generators: tuple

    def __init__(self, generators: Iterable[str]):
        gens = tuple(generators)
        if any(not g for g in gens):
            raise ValueError("generator names must be non-empty")
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator names in {gens}")
        object.__setattr__(self, "generators", gens)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def letter(self, name: str, sign: int = 1) -> int:
        return sign * (self.generators.index(name) + 1)

    def parse(self, text: str) -> Word:
        return parse_word(text, self)

    def format(self, w: Word) -> str:
        return format_word(w, self)


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_'.]*)(?:\^(-?\d+))?\s*")


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse ``a b^-1 a^2`` (``1`` or empty for the identity)."""
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    letters = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse word {text!r} at {pos}", 0, pos)
        name, exp = m.group(1), int(m.group(2) or 1)
        if name not in alphabet.generators:
            raise ParseError(f"unknown generator {name!r} in {text!r}", 0, pos)
        k = alphabet.index(name) + 1
        letters.extend([k if exp > 0 else -k] * abs(exp))
        pos = m.end()
    return free_reduce(letters)


def format_word(w: Word, alphabet: Alphabet) -> str:
    if not w:
        return "1"
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = alphabet.generators[abs(w[i]) - 1]
        exp = (j - i) * (1 if w[i] > 0 else -1)
        out.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(out)


def free_reduce(w: Iterable[int]) -> Word:
    stack = []
    for x in w:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def mul(*words: Word) -> Word:
    out: list = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(w: Word, k: int) -> Word:
    if k < 0:
        w, k = inverse(w), -k
    core, c = cyclic_reduce(w)
    return mul(c, core * k, inverse(c))


def conjugate(x: Word, w: Word) -> Word:
    """``x^w = w^-1 x w``."""
    return mul(inverse(w), x, w)


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x^-1 y^-1 x y``."""
    return mul(inverse(x), inverse(y), x, y)


def cyclic_reduce(w: Word) -> tuple:
    """Return ``(core, conjugator)`` with ``conjugator core conjugator^-1 == w``."""
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1], w[:i]


def is_cyclically_reduced(w: Word) -> bool:
    return len(w) < 2 or w[0] != -w[-1]


def _period(core: Word) -> int:
    n = len(core)
    for d in range(1, n + 1):
        if n % d == 0 and core[:d] * (n // d) == core:
            return d
    return n


def primitive_root(w: Word) -> tuple:
    """Return ``(root, exponent)`` with ``w == root^exponent`` and root not a proper power."""
    w = free_reduce(w)
    if not w:
        raise TrivialWord("the identity has no primitive root")
    core, c = cyclic_reduce(w)
    d = _period(core)
    return mul(c, core[:d], inverse(c)), len(core) // d


def _rotations(w: Word):
    for i in range(len(w)):
        yield i, w[i:] + w[:i]


def is_conjugate_free(u: Word, v: Word) -> Optional[Word]:
    """A word ``g`` with ``g^-1 u g == v``, or ``None`` when u and v are not conjugate."""
    u, v = free_reduce(u), free_reduce(v)
    cu, gu = cyclic_reduce(u)
    cv, gv = cyclic_reduce(v)
    if len(cu) != len(cv):
        return None
    if not cu:
        return ()
    for i, rot in _rotations(cu):
        if rot == cv:
            # cu[i:]+cu[:i] = cu[:i]^-1 cu cu[:i]
            g = mul(gu, cu[:i], inverse(gv))
            return g
    return None


def exponent_sum(w: Word, generator: int) -> int:
    """Signed count of the generator with 0-based index ``generator``."""
    k = generator + 1
    return sum(1 if x == k else -1 if x == -k else 0 for x in w)


def abelianize(w: Word, rank: int) -> tuple:
    vec = [0] * rank
    for x in w:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(vec)


def commutes_free(u: Word, v: Word) -> bool:
    u, v = free_reduce(u), free_reduce(v)
    if not u or not v:
        return True
    ru, _ = primitive_root(u)
    rv, _ = primitive_root(v)
    return ru == rv or ru == inverse(rv)


def power_of(x: Word, w: Word) -> Optional[int]:
    """``k`` with ``x == w^k`` or ``None``; ``w`` must be non-trivial."""
    x = free_reduce(x)
    if not x:
        return 0
    rw, m = primitive_root(w)
    rx, n = primitive_root(x)
    if rx == rw:
        sign = 1
    elif rx == inverse(rw):
        sign = -1
    else:
        return None
    if n % m:
        return None
    return sign * n // m


def reduced_words(rank: int, max_length: int, min_length: int = 0):
    """Every reduced word of length in ``[min_length, max_length]``, shortlex order."""
    letters = [k for i in range(1, rank + 1) for k in (i, -i)]
    level: list = [()]
    for length in range(max_length + 1):
        if length >= min_length:
            yield from level
        level = [w + (x,) for w in level for x in letters if not w or w[-1] != -x]


def word_from_pairs(pairs: Sequence[tuple]) -> Word:
    """Build a word from ``(generator_index, sign)`` pairs."""
    return free_reduce((g + 1) * s for g, s in pairs)
