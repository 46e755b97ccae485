"""Mod 2 Steenrod algebra arithmetic in the admissible basis.

Monomials are tuples of positive integers ``(i1, ..., ik)`` meaning
``Sq^i1 Sq^i2 ... Sq^ik``; the empty tuple is the unit.  Elements are
F2-linear combinations, i.e. sets of monomials.

The sub-Hopf algebras A(1), A(2) and the degree-truncated algebra are
:class:`AlgebraSpec` objects.  Their bases are built by multiplicative
closure of the generators ``Sq^(2^k)``, so every basis element is recorded as
a word in the generators; modules only store generator actions, and words
are what lets any algebra element act on them.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .f2linalg import RowSpace, iter_bits

Monomial = Tuple[int, ...]


def binom2(n: int, k: int) -> int:
    """Binomial coefficient ``C(n, k)`` mod 2 by Lucas' theorem.

    Negative ``n`` is read 2-adically (two's complement), which agrees with
    ``C(n, k) = (-1)^k C(k - n - 1, k)``.
    """
    if k < 0:
        return 0
    return 1 if (k & ~n) == 0 else 0


def is_admissible(mono: Sequence[int]) -> bool:
    return all(mono[i] >= 2 * mono[i + 1] for i in range(len(mono) - 1)) and all(i > 0 for i in mono)


def adem(a: int, b: int) -> List[Monomial]:
    """Admissible expansion of ``Sq^a Sq^b`` for ``0 < a < 2b``."""
    out = []
    for c in range(a // 2 + 1):
        if binom2(b - c - 1, a - 2 * c):
            out.append((a + b - c, c) if c else (a + b - c,))
    return out


def _strip(word: Iterable[int]) -> Monomial:
    return tuple(i for i in word if i)


def _xor_into(acc: set, terms: Iterable[Monomial]) -> None:
    for m in terms:
        if m in acc:
            acc.remove(m)
        else:
            acc.add(m)


@lru_cache(maxsize=None)
def _normalize_leftmost(word: Monomial) -> FrozenSet[Monomial]:
    for p in range(len(word) - 1):
        a, b = word[p], word[p + 1]
        if a < 2 * b:
            acc: set = set()
            for rep in adem(a, b):
                _xor_into(acc, _normalize_leftmost(word[:p] + rep + word[p + 2:]))
            return frozenset(acc)
    return frozenset((word,))


def _normalize_with(word: Monomial, choose: Callable[[List[int]], int], memo: dict) -> FrozenSet[Monomial]:
    if word in memo:
        return memo[word]
    bad = [p for p in range(len(word) - 1) if word[p] < 2 * word[p + 1]]
    if not bad:
        result = frozenset((word,))
    else:
        p = choose(bad)
        acc: set = set()
        for rep in adem(word[p], word[p + 1]):
            _xor_into(acc, _normalize_with(word[:p] + rep + word[p + 2:], choose, memo))
        result = frozenset(acc)
    memo[word] = result
    return result


@lru_cache(maxsize=None)
def _sq_times(a: int, mono: Monomial) -> FrozenSet[Monomial]:
    """``Sq^a`` times an admissible monomial, in admissible form."""
    if a == 0:
        return frozenset((mono,))
    if not mono or a >= 2 * mono[0]:
        return frozenset(((a,) + mono,))
    b, rest = mono[0], mono[1:]
    acc: set = set()
    for rep in adem(a, b):
        if len(rep) == 1:
            _xor_into(acc, _sq_times(rep[0], rest))
        else:
            for m in _sq_times(rep[1], rest):
                _xor_into(acc, _sq_times(rep[0], m))
    return frozenset(acc)


def _fold_normalize(word: Monomial) -> FrozenSet[Monomial]:
    cur = {()}
    for a in reversed(word):
        acc: set = set()
        for m in cur:
            _xor_into(acc, _sq_times(a, m))
        cur = acc
    return frozenset(cur)


class SteenrodElement:
    """Homogeneous element of A: a set of admissible monomials of one degree."""

    __slots__ = ("terms", "degree")

    def __init__(self, terms: Iterable[Monomial], degree: Optional[int] = None):
        terms = frozenset(tuple(m) for m in terms)
        degrees = {sum(m) for m in terms}
        if len(degrees) > 1:
            raise ValueError(f"inhomogeneous element {sorted(terms)}")
        for m in terms:
            if not is_admissible(m):
                raise ValueError(f"inadmissible monomial {m}")
        if degrees:
            (d,) = degrees
            if degree is not None and degree != d:
                raise ValueError("degree mismatch")
            degree = d
        elif degree is None:
            degree = 0
        self.terms = terms
        self.degree = degree

    @classmethod
    def unit(cls) -> "SteenrodElement":
        return cls([()])

    @classmethod
    def zero(cls, degree: int = 0) -> "SteenrodElement":
        return cls([], degree)

    @classmethod
    def sq(cls, n: int) -> "SteenrodElement":
        return cls([(n,) if n else ()])

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SteenrodElement") -> "SteenrodElement":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add elements of different degrees")
        return SteenrodElement(self.terms ^ other.terms, self.degree)

    def __mul__(self, other: "SteenrodElement") -> "SteenrodElement":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SteenrodElement):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def sorted_terms(self) -> List[Monomial]:
        return sorted(self.terms, reverse=True)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return " + ".join(monomial_str(m) for m in self.sorted_terms())

    __repr__ = __str__


def monomial_str(m: Monomial) -> str:
    return "1" if not m else "Sq(" + ",".join(map(str, m)) + ")"


def parse_monomial(text: str) -> Monomial:
    text = text.strip()
    if text == "1":
        return ()
    if not (text.startswith("Sq(") and text.endswith(")")):
        raise ValueError(f"bad monomial {text!r}")
    inner = text[3:-1].strip()
    return tuple(int(x) for x in inner.split(",")) if inner else ()


def parse_element(text: str, degree: Optional[int] = None) -> SteenrodElement:
    text = text.strip()
    if text == "0":
        return SteenrodElement.zero(degree or 0)
    return SteenrodElement([parse_monomial(t) for t in text.split("+")], degree)


def adem_normalize(word: Sequence[int], strategy: str = "leftmost", seed: int = 0) -> SteenrodElement:
    """Rewrite ``Sq^word`` into admissible form.

    ``strategy`` picks which inadmissible adjacent pair is rewritten first:
    ``"leftmost"`` (the default), ``"rightmost"``, ``"random"``, or
    ``"fold"`` (accumulate from the right one square at a time).
    """
    w = _strip(word)
    degree = sum(w)
    if strategy == "leftmost":
        terms = _normalize_leftmost(w)
    elif strategy == "rightmost":
        terms = _normalize_with(w, lambda bad: bad[-1], {})
    elif strategy == "random":
        rng = random.Random(seed)
        terms = _normalize_with(w, lambda bad: rng.choice(bad), {})
    elif strategy == "fold":
        terms = _fold_normalize(w)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return SteenrodElement(terms, degree)


def multiply(x: SteenrodElement, y: SteenrodElement) -> SteenrodElement:
    degree = x.degree + y.degree
    acc: set = set()
    for m1 in x.terms:
        for m2 in y.terms:
            cur = {m2}
            for a in reversed(m1):
                nxt: set = set()
                for m in cur:
                    _xor_into(nxt, _sq_times(a, m))
                cur = nxt
            _xor_into(acc, cur)
    return SteenrodElement(acc, degree)


def coproduct(n: int) -> List[Tuple[SteenrodElement, SteenrodElement]]:
    """Cartan formula: the ``n + 1`` pairs ``(Sq^i, Sq^(n-i))``."""
    if n < 0:
        raise ValueError("negative square")
    return [(SteenrodElement.sq(i), SteenrodElement.sq(n - i)) for i in range(n + 1)]


@lru_cache(maxsize=None)
def coproduct_monomial(mono: Monomial) -> FrozenSet[Tuple[Monomial, Monomial]]:
    """Coproduct of an admissible monomial as a set of pairs of admissible monomials."""
    if not mono:
        return frozenset({((), ())})
    a, rest = mono[0], mono[1:]
    acc: set = set()
    for left, right in coproduct_monomial(rest):
        for i in range(a + 1):
            for l2 in _sq_times(i, left):
                for r2 in _sq_times(a - i, right):
                    _xor_into(acc, [(l2, r2)])
    return frozenset(acc)


def coproduct_element(x: SteenrodElement) -> FrozenSet[Tuple[Monomial, Monomial]]:
    acc: set = set()
    for m in x.terms:
        _xor_into(acc, coproduct_monomial(m))
    return frozenset(acc)


@lru_cache(maxsize=None)
def _chi_sq(n: int) -> FrozenSet[Monomial]:
    if n == 0:
        return frozenset({()})
    acc: set = set()
    for i in range(1, n + 1):
        for m in _chi_sq(n - i):
            _xor_into(acc, _sq_times(i, m))
    return frozenset(acc)


def antipode(n: int) -> SteenrodElement:
    """``χ(Sq^n)`` from the recursion ``Σ_{i+j=n} Sq^i χ(Sq^j) = 0``."""
    if n < 0:
        raise ValueError("negative square")
    return SteenrodElement(_chi_sq(n), n)


@lru_cache(maxsize=None)
def _chi_monomial(mono: Monomial) -> FrozenSet[Monomial]:
    # χ(Sq^i1 ... Sq^ij) = χ(Sq^ij) · χ(Sq^i1 ... Sq^i(j-1))
    cur = SteenrodElement.unit()
    for a in mono:
        cur = multiply(SteenrodElement(_chi_sq(a), a), cur)
    return cur.terms


def antipode_element(x: SteenrodElement) -> SteenrodElement:
    acc: set = set()
    for m in x.terms:
        _xor_into(acc, _chi_monomial(m))
    return SteenrodElement(acc, x.degree)


@lru_cache(maxsize=None)
def admissible_monomials(degree: int) -> Tuple[Monomial, ...]:
    """All admissible monomials of a degree, in reverse lexicographic order."""

    def gen(d: int, max_first: int) -> List[Monomial]:
        if d == 0:
            return [()]
        out = []
        for a in range(min(d, max_first), 0, -1):
            for rest in gen(d - a, a // 2):
                out.append((a,) + rest)
        return out

    if degree < 0:
        return ()
    return tuple(gen(degree, degree))


class AlgebraSpec:
    """One of A(1), A(2) or A truncated above a degree cap.

    Attributes per degree ``d``: ``words[d]`` (generator words of the basis),
    ``basis[d]`` (their admissible normal forms).  Products of basis
    elements are returned as bitmasks over the basis of the target degree.
    """

    def __init__(self, kind: str, cap: Optional[int] = None):
        if kind in ("A1", "A2"):
            n = int(kind[1])
            self.generators = tuple(2 ** k for k in range(n + 1))
            self.cap = None
        elif kind == "A":
            if cap is None or cap < 0:
                raise ValueError("truncated A needs a non-negative degree cap")
            self.generators = tuple(2 ** k for k in range(cap.bit_length()) if 2 ** k <= cap)
            self.cap = cap
        else:
            raise ValueError(f"unknown algebra {kind!r}")
        self.kind = kind
        self.words: Dict[int, List[Monomial]] = {}
        self.basis: Dict[int, List[SteenrodElement]] = {}
        self._reducers: Dict[int, RowSpace] = {}
        self._mono_index: Dict[int, Dict[Monomial, int]] = {}
        self._products: Dict[Tuple[int, int, int, int], int] = {}
        self._build()

    @property
    def name(self) -> str:
        return self.kind if self.cap is None else f"A:{self.cap}"

    def __repr__(self) -> str:
        return f"AlgebraSpec({self.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraSpec) and (self.kind, self.cap) == (other.kind, other.cap)

    def __hash__(self) -> int:
        return hash((self.kind, self.cap))

    def mono_index(self, d: int) -> Dict[Monomial, int]:
        idx = self._mono_index.get(d)
        if idx is None:
            idx = {m: i for i, m in enumerate(admissible_monomials(d))}
            self._mono_index[d] = idx
        return idx

    def to_mask(self, terms: Iterable[Monomial], d: int) -> int:
        idx = self.mono_index(d)
        mask = 0
        for m in terms:
            mask ^= 1 << idx[m]
        return mask

    def _build(self) -> None:
        self.words[0] = [()]
        self.basis[0] = [SteenrodElement.unit()]
        space = RowSpace(track=True)
        space.add(self.to_mask([()], 0))
        self._reducers[0] = space
        limit = self.cap if self.cap is not None else None
        top_gen = max(self.generators)
        empty_run = 0
        d = 0
        while True:
            d += 1
            if limit is not None and d > limit:
                break
            if limit is None and empty_run >= top_gen:
                break
            space = RowSpace(track=True)
            words, elems = [], []
            for g in self.generators:
                lower = self.words.get(d - g)
                if not lower:
                    continue
                for w, e in zip(lower, self.basis[d - g]):
                    acc: set = set()
                    for m in e.terms:
                        _xor_into(acc, _sq_times(g, m))
                    mask = self.to_mask(acc, d)
                    if space.reduce(mask) and space.add(mask):
                        words.append((g,) + w)
                        elems.append(SteenrodElement(acc, d))
            self.words[d] = words
            self.basis[d] = elems
            self._reducers[d] = space
            empty_run = 0 if words else empty_run + 1
        self.top_degree = max(k for k, v in self.words.items() if v)
        for k in [k for k, v in self.words.items() if not v]:
            if k > self.top_degree:
                del self.words[k], self.basis[k], self._reducers[k]

    def dim(self, d: int) -> int:
        return len(self.words.get(d, ()))

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self.words.values())

    def degrees(self) -> List[int]:
        return sorted(self.words)

    def in_range(self, d: int) -> bool:
        return 0 <= d <= self.top_degree

    def coords(self, x: SteenrodElement) -> int:
        """Coordinates of ``x`` in the word basis, as a bitmask."""
        if x.is_zero():
            return 0
        d = x.degree
        if d not in self._reducers:
            if self.cap is not None and d > self.cap:
                return 0
            raise ValueError(f"{x} is not in {self.name}")
        combo = self._reducers[d].express(self.to_mask(x.terms, d))
        if combo is None:
            raise ValueError(f"{x} is not in {self.name}")
        return combo

    def contains(self, x: SteenrodElement) -> bool:
        try:
            self.coords(x)
        except ValueError:
            return False
        return True

    def product(self, d1: int, i: int, d2: int, j: int) -> int:
        """``basis[d1][i] * basis[d2][j]`` as a mask over ``basis[d1 + d2]``."""
        key = (d1, i, d2, j)
        out = self._products.get(key)
        if out is None:
            d = d1 + d2
            if d not in self._reducers:
                out = 0
            else:
                x = multiply(self.basis[d1][i], self.basis[d2][j])
                out = self.coords(x)
            self._products[key] = out
        return out

    def gen_product(self, g: int, d: int, j: int) -> int:
        """``Sq^g * basis[d][j]`` as a mask over ``basis[d + g]``."""
        key = (-g, 0, d, j)
        out = self._products.get(key)
        if out is None:
            if (d + g) not in self._reducers:
                out = 0
            else:
                acc: set = set()
                for m in self.basis[d][j].terms:
                    _xor_into(acc, _sq_times(g, m))
                out = self.coords(SteenrodElement(acc, d + g))
            self._products[key] = out
        return out

    def element(self, d: int, mask: int) -> SteenrodElement:
        acc: set = set()
        for i in iter_bits(mask):
            _xor_into(acc, self.basis[d][i].terms)
        return SteenrodElement(acc, d)

    def word_expansion(self, x: SteenrodElement) -> List[Monomial]:
        """``x`` as a sum of generator words."""
        return [self.words[x.degree][i] for i in iter_bits(self.coords(x))]


@lru_cache(maxsize=None)
def get_algebra(kind: str, cap: Optional[int] = None) -> AlgebraSpec:
    return AlgebraSpec(kind, cap)


def parse_algebra(text: str) -> AlgebraSpec:
    """Parse ``A1``, ``A2``, ``A:<cap>`` or ``A cap=<cap>``."""
    text = text.strip()
    if text in ("A1", "A2"):
        return get_algebra(text)
    if text.startswith("A:"):
        return get_algebra("A", int(text[2:]))
    if text.startswith("A cap="):
        return get_algebra("A", int(text[6:]))
    raise ValueError(f"unknown algebra {text!r}")


def enumerate_basis(spec: AlgebraSpec) -> Dict[int, List[SteenrodElement]]:
    """Per-degree basis tables.

    For A(n) this is the closure basis; for truncated A it is the admissible
    monomials of each degree up to the cap.
    """
    if spec.kind == "A":
        return {d: [SteenrodElement([m]) for m in admissible_monomials(d)] for d in range(spec.cap + 1)}
    return {d: list(v) for d, v in spec.basis.items()}
