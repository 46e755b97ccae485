"""Graded modules with an explicit F2 basis over A(1), A(2) or truncated A.

A module stores the action of the algebra generators ``Sq^(2^k)`` only, as
one packed row per basis element (bit ``j`` set means basis element ``j``
appears in the image).  Every other element acts through its expansion in
generator words, see :class:`~sqext.steenrod.AlgebraSpec`.

Infinite modules are handled through degree windows: ``window = (lo, hi)``
with ``truncation`` one of ``"exact"``, ``"truncated-above"`` or
``"truncated-below"`` saying which edge cuts off a larger module.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .f2linalg import F2Matrix, RowSpace, combine, iter_bits
from .steenrod import (
    AlgebraSpec,
    SteenrodElement,
    antipode,
    coproduct_element,
    get_algebra,
    parse_algebra,
)

TRUNCATIONS = ("exact", "truncated-above", "truncated-below")


class ModuleError(ValueError):
    pass


class FpModule:
    """Finite graded F2 vector space with generator actions."""

    def __init__(
        self,
        algebra: AlgebraSpec,
        names: Sequence[str],
        degrees: Sequence[int],
        action: Dict[int, Sequence[int]],
        window: Optional[Tuple[int, int]] = None,
        truncation: str = "exact",
    ):
        names = tuple(names)
        degrees = tuple(int(d) for d in degrees)
        if len(names) != len(degrees):
            raise ModuleError("names and degrees differ in length")
        if len(set(names)) != len(names):
            raise ModuleError("basis names must be unique")
        for n in names:
            if not n or any(c.isspace() for c in n):
                raise ModuleError(f"bad basis name {n!r}")
        if truncation not in TRUNCATIONS:
            raise ModuleError(f"unknown truncation flag {truncation!r}")
        dim = len(names)
        acts = {}
        for g in algebra.generators:
            rows = tuple(action.get(g, (0,) * dim))
            if len(rows) != dim:
                raise ModuleError(f"Sq^{g} action has {len(rows)} rows, expected {dim}")
            for r in rows:
                if r < 0 or r >> dim:
                    raise ModuleError(f"Sq^{g} row out of range")
            acts[g] = rows
        extra = set(action) - set(algebra.generators)
        if any(any(action[g]) for g in extra):
            raise ModuleError(f"action given for non-generators {sorted(extra)}")
        if window is None and dim:
            window = (min(degrees), max(degrees))
        self.algebra = algebra
        self.names = names
        self.degrees = degrees
        self.action = acts
        self.window = window
        self.truncation = truncation
        self._index = {n: i for i, n in enumerate(names)}
        self._by_degree: Dict[int, List[int]] = {}
        for i, d in enumerate(degrees):
            self._by_degree.setdefault(d, []).append(i)
        self._element_rows: Dict[Tuple, Tuple[int, ...]] = {}

    # -- basic data ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"FpModule({self.algebra.name}, dim={self.dim}, window={self.window}, {self.truncation})"

    def index(self, name: str) -> int:
        return self._index[name]

    def in_degree(self, d: int) -> List[int]:
        return self._by_degree.get(d, [])

    def degree_mask(self, d: int) -> int:
        mask = 0
        for i in self.in_degree(d):
            mask |= 1 << i
        return mask

    @property
    def bottom(self) -> int:
        return min(self.degrees) if self.degrees else 0

    @property
    def top(self) -> int:
        return max(self.degrees) if self.degrees else -1

    def graded_dims(self) -> Dict[int, int]:
        return {d: len(v) for d, v in sorted(self._by_degree.items())}

    def dims_list(self, lo: int, hi: int) -> List[int]:
        return [len(self.in_degree(d)) for d in range(lo, hi + 1)]

    @property
    def is_finite(self) -> bool:
        return self.truncation == "exact"

    def vector_degree(self, v: int) -> Optional[int]:
        degs = {self.degrees[i] for i in iter_bits(v)}
        if len(degs) > 1:
            raise ModuleError("inhomogeneous vector")
        return degs.pop() if degs else None

    def vector_name(self, v: int) -> str:
        return "+".join(self.names[i] for i in iter_bits(v)) or "0"

    # -- actions ------------------------------------------------------------

    def act_gen(self, g: int, v: int) -> int:
        return combine(self.action[g], v)

    def act_word(self, word: Sequence[int], v: int) -> int:
        for g in reversed(word):
            if not v:
                break
            v = combine(self.action[g], v)
        return v

    def act_basis(self, d: int, i: int, v: int) -> int:
        """Action of the algebra basis element ``basis[d][i]``."""
        return self.act_word(self.algebra.words[d][i], v)

    def element_rows(self, x: SteenrodElement) -> Tuple[int, ...]:
        key = (x.degree, x.terms)
        rows = self._element_rows.get(key)
        if rows is None:
            if x.is_zero() or (self.algebra.cap is not None and x.degree > self.algebra.cap):
                rows = (0,) * self.dim
            else:
                words = self.algebra.word_expansion(x)
                rows = tuple(
                    _xor_all(self.act_word(w, 1 << i) for w in words) for i in range(self.dim)
                )
            self._element_rows[key] = rows
        return rows

    def act(self, x: SteenrodElement, v: int) -> int:
        return combine(self.element_rows(x), v)

    def sq(self, i: int, v: int) -> int:
        return self.act(SteenrodElement.sq(i), v)

    def lines(self, g: int) -> List[Tuple[str, str]]:
        """Pairs ``(source, target)`` of basis names joined by ``Sq^g``."""
        out = []
        for i, row in enumerate(self.action[g]):
            for j in iter_bits(row):
                out.append((self.names[i], self.names[j]))
        return out

    # -- serialisation ------------------------------------------------------

    def to_text(self) -> str:
        return write_module(self)

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()


def _xor_all(values: Iterable[int]) -> int:
    acc = 0
    for v in values:
        acc ^= v
    return acc


@dataclass(eq=False)
class ModuleHom:
    """Degree-preserving (up to ``shift``) linear map, one target row per source basis element."""

    source: FpModule
    target: FpModule
    images: Tuple[int, ...]
    shift: int = 0

    def __post_init__(self):
        self.images = tuple(self.images)
        if len(self.images) != self.source.dim:
            raise ModuleError("hom has the wrong number of rows")

    @property
    def matrix(self) -> F2Matrix:
        return F2Matrix(self.images, self.target.dim)

    def apply(self, v: int) -> int:
        return combine(self.images, v)

    def violations(self) -> List[str]:
        out = []
        for i, img in enumerate(self.images):
            if img and self.target.vector_degree(img) != self.source.degrees[i] + self.shift:
                out.append(f"{self.source.names[i]} maps to the wrong degree")
        for g in self.source.algebra.generators:
            if g not in self.target.action:
                continue
            for i in range(self.source.dim):
                lhs = self.apply(self.source.act_gen(g, 1 << i))
                rhs = self.target.act_gen(g, self.images[i])
                if lhs != rhs:
                    out.append(f"Sq^{g} does not commute on {self.source.names[i]}")
        return out

    def is_module_map(self) -> bool:
        return not self.violations()

    def rank(self) -> int:
        space = RowSpace()
        for r in self.images:
            space.add(r)
        return space.rank

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def compose(self, other: "ModuleHom") -> "ModuleHom":
        """``self ∘ other``."""
        return ModuleHom(other.source, self.target, tuple(self.apply(r) for r in other.images), self.shift + other.shift)


def identity_hom(m: FpModule) -> ModuleHom:
    return ModuleHom(m, m, tuple(1 << i for i in range(m.dim)))


@dataclass(eq=False)
class Filtration:
    """Increasing chain of submodules, each stored as a list of spanning vectors."""

    module: FpModule
    stages: List[List[int]]
    labels: List[str] = field(default_factory=list)

    def stage_space(self, i: int) -> RowSpace:
        space = RowSpace()
        for v in self.stages[i]:
            space.add(v)
        return space

    def violations(self) -> List[str]:
        out = []
        prev = RowSpace()
        for i, vecs in enumerate(self.stages):
            space = self.stage_space(i)
            for v in prev.basis():
                if not space.contains(v):
                    out.append(f"stage {i} does not contain stage {i - 1}")
                    break
            for v in space.basis():
                for g in self.module.algebra.generators:
                    if not space.contains(self.module.act_gen(g, v)):
                        out.append(f"stage {i} not closed under Sq^{g}")
                        break
            prev = space
        return out


# -- validation ---------------------------------------------------------------


def validate(m: FpModule) -> List[str]:
    """Every way the generator actions fail to define an algebra action.

    Checks degree shifts, then for each degree ``d`` up to the span of the
    module (and the algebra cap) every product ``Sq^g · b`` of a generator with
    a basis element of degree ``d - g``: its action must equal the action of
    its expansion in the degree-``d`` basis.  By induction on word length
    these relations are exactly the ones needed.
    """
    out: List[str] = []
    alg = m.algebra
    for g, rows in m.action.items():
        for i, row in enumerate(rows):
            for j in iter_bits(row):
                if m.degrees[j] != m.degrees[i] + g:
                    out.append(f"Sq^{g} {m.names[i]} -> {m.names[j]} has the wrong degree")
    if out or m.dim == 0:
        return out
    span = m.top - m.bottom
    dmax = min(span, alg.top_degree)
    for d in range(1, dmax + 1):
        for g in alg.generators:
            if g > d:
                continue
            lower = d - g
            for j in range(alg.dim(lower)):
                prod = alg.gen_product(g, lower, j)
                for i in range(m.dim):
                    lhs = m.act_gen(g, m.act_basis(lower, j, 1 << i))
                    rhs = 0
                    for k in iter_bits(prod):
                        rhs ^= m.act_basis(d, k, 1 << i)
                    if lhs != rhs:
                        rel = f"Sq^{g} * ({alg.basis[lower][j]}) = {alg.element(d, prod)}"
                        out.append(f"relation {rel} fails on {m.names[i]}")
    return out


# -- constructors -------------------------------------------------------------


def trivial_module(algebra: AlgebraSpec, degree: int = 0, name: str = "1") -> FpModule:
    return FpModule(algebra, [name], [degree], {})


def zero_module(algebra: AlgebraSpec) -> FpModule:
    return FpModule(algebra, [], [], {}, window=(0, -1))


def from_cells(
    algebra: AlgebraSpec,
    cells: Sequence[Tuple[str, int]],
    lines: Iterable[Tuple[int, str, str]],
    window=None,
    truncation="exact",
) -> FpModule:
    """Build a module from named cells and ``(g, source, target)`` action lines."""
    names = [c[0] for c in cells]
    index = {n: i for i, n in enumerate(names)}
    rows = {g: [0] * len(names) for g in algebra.generators}
    for g, a, b in lines:
        if g not in rows:
            raise ModuleError(f"Sq^{g} is not a generator of {algebra.name}")
        rows[g][index[a]] ^= 1 << index[b]
    return FpModule(algebra, names, [c[1] for c in cells], rows, window, truncation)


def restrict(m: FpModule, algebra: AlgebraSpec) -> FpModule:
    """Restrict to a subalgebra whose generators are a subset of ``m``'s."""
    missing = set(algebra.generators) - set(m.algebra.generators)
    if missing:
        raise ModuleError(f"{m.algebra.name} has no Sq^{sorted(missing)} to restrict along")
    return FpModule(algebra, m.names, m.degrees, {g: m.action[g] for g in algebra.generators}, m.window, m.truncation)


def suspend(m: FpModule, k: int) -> FpModule:
    window = None if m.window is None else (m.window[0] + k, m.window[1] + k)
    return FpModule(m.algebra, m.names, [d + k for d in m.degrees], m.action, window, m.truncation)


def rename(m: FpModule, fn) -> FpModule:
    return FpModule(m.algebra, [fn(n) for n in m.names], m.degrees, m.action, m.window, m.truncation)


def dual(m: FpModule) -> FpModule:
    """Vector space dual with ``(Sq^i f)(x) = f(χ(Sq^i) x)``."""
    if not m.is_finite:
        raise ModuleError("dual needs a finite (exact-window) module")
    rows = {}
    for g in m.algebra.generators:
        chi = m.element_rows(antipode(g))
        out = [0] * m.dim
        for k, img in enumerate(chi):
            for j in iter_bits(img):
                out[j] |= 1 << k
        rows[g] = out
    names = [n[:-1] if n.endswith("*") else n + "*" for n in m.names]
    return FpModule(m.algebra, names, [-d for d in m.degrees], rows)


def tensor(m1: FpModule, m2: FpModule) -> FpModule:
    """Tensor product with the diagonal (Cartan) action, basis ordered by pairs."""
    if m1.algebra != m2.algebra:
        raise ModuleError("tensor factors must share an algebra")
    n2 = m2.dim
    names, degrees = [], []
    for i in range(m1.dim):
        for j in range(n2):
            names.append(f"{m1.names[i]}#{m2.names[j]}")
            degrees.append(m1.degrees[i] + m2.degrees[j])
    rows = {}
    for g in m1.algebra.generators:
        left = [m1.element_rows(SteenrodElement.sq(a)) for a in range(g + 1)]
        right = [m2.element_rows(SteenrodElement.sq(g - a)) for a in range(g + 1)]
        out = []
        for i in range(m1.dim):
            for j in range(n2):
                acc = 0
                for a in range(g + 1):
                    x, y = left[a][i], right[a][j]
                    if x and y:
                        for p in iter_bits(x):
                            acc ^= y << (p * n2)
                out.append(acc)
        rows[g] = out
    lo = m1.bottom + m2.bottom
    hi = m1.top + m2.top
    trunc = "exact"
    if not (m1.is_finite and m2.is_finite):
        flags = {m1.truncation, m2.truncation} - {"exact"}
        if len(flags) > 1:
            raise ModuleError("cannot tensor modules truncated on opposite sides")
        trunc = flags.pop()
        if trunc == "truncated-above":
            hi = min(
                m1.window[1] + (m2.bottom if m2.dim else 0) if not m1.is_finite else 10 ** 9,
                m2.window[1] + (m1.bottom if m1.dim else 0) if not m2.is_finite else 10 ** 9,
            )
        else:
            lo = max(
                m1.window[0] + (m2.top if m2.dim else 0) if not m1.is_finite else -(10 ** 9),
                m2.window[0] + (m1.top if m1.dim else 0) if not m2.is_finite else -(10 ** 9),
            )
    out = FpModule(m1.algebra, names, degrees, rows, (lo, hi), trunc)
    if trunc == "truncated-above":
        out = truncate_above(out, hi)
    elif trunc == "truncated-below":
        out = truncate_below(out, lo)
    return out


def direct_sum(ms: Sequence[FpModule]) -> FpModule:
    if not ms:
        raise ModuleError("empty direct sum")
    algebra = ms[0].algebra
    if len(ms) == 1:
        return ms[0]
    names, degrees = [], []
    rows = {g: [] for g in algebra.generators}
    offset = 0
    flags = set()
    for k, m in enumerate(ms):
        if m.algebra != algebra:
            raise ModuleError("summands must share an algebra")
        names.extend(f"s{k}.{n}" for n in m.names)
        degrees.extend(m.degrees)
        for g in algebra.generators:
            rows[g].extend(r << offset for r in m.action[g])
        offset += m.dim
        flags.add(m.truncation)
    flags.discard("exact")
    trunc = flags.pop() if len(flags) == 1 else ("exact" if not flags else "truncated-above")
    windows = [m.window for m in ms if m.dim]
    window = (min(w[0] for w in windows), max(w[1] for w in windows)) if windows else None
    return FpModule(algebra, names, degrees, rows, window, trunc)


def _sub_from_space(m: FpModule, space: RowSpace) -> Tuple[FpModule, ModuleHom]:
    vecs = space.basis()
    vecs.sort(key=lambda v: (m.vector_degree(v), (v & -v).bit_length()))
    coords = RowSpace(track=True)
    for v in vecs:
        coords.add(v)
    rows = {}
    for g in m.algebra.generators:
        out = []
        for v in vecs:
            img = m.act_gen(g, v)
            combo = coords.express(img)
            if combo is None:
                raise ModuleError("subspace is not closed under the action")
            out.append(combo)
        rows[g] = out
    names = [m.vector_name(v) for v in vecs]
    degrees = [m.vector_degree(v) for v in vecs]
    window = m.window if m.truncation != "exact" else None
    trunc = m.truncation
    if vecs and trunc == "truncated-above" and max(degrees) <= m.window[1] - m.algebra.top_degree:
        trunc, window = "exact", None
    sub = FpModule(m.algebra, names, degrees, rows, window, trunc)
    return sub, ModuleHom(sub, m, tuple(vecs))


def span_closure(m: FpModule, vectors: Iterable[int]) -> RowSpace:
    space = RowSpace()
    queue = []
    for v in vectors:
        r = space.reduce(v)
        if r:
            space.add(v)
            queue.append(v)
    while queue:
        v = queue.pop()
        for g in m.algebra.generators:
            w = m.act_gen(g, v)
            if w and space.reduce(w):
                space.add(w)
                queue.append(w)
    return space


def submodule_generated(m: FpModule, gens: Iterable) -> Tuple[FpModule, ModuleHom]:
    """Smallest action-closed subspace containing the given basis elements (names or indices)."""
    vecs = [1 << (m.index(g) if isinstance(g, str) else g) for g in gens]
    return _sub_from_space(m, span_closure(m, vecs))


def submodule_spanned(m: FpModule, vectors: Iterable[int]) -> Tuple[FpModule, ModuleHom]:
    return _sub_from_space(m, span_closure(m, vectors))


def quotient(m: FpModule, sub: ModuleHom) -> Tuple[FpModule, ModuleHom]:
    """Cokernel of an injective hom into ``m``; basis = cells that are not pivots of the image."""
    if sub.target is not m and sub.target.to_text() != m.to_text():
        raise ModuleError("submodule hom does not land in this module")
    if not sub.is_injective():
        raise ModuleError("quotient needs an injective submodule map")
    space = RowSpace()
    for v in sub.images:
        space.add(v)
    pivot_bits = 0
    for v in space.basis():
        pivot_bits |= v & -v
    keep = [i for i in range(m.dim) if not (pivot_bits >> i) & 1]
    position = {i: k for k, i in enumerate(keep)}

    def project(v: int) -> int:
        r = space.reduce(v)
        out = 0
        for i in iter_bits(r):
            out |= 1 << position[i]
        return out

    rows = {g: [project(m.act_gen(g, 1 << i)) for i in keep] for g in m.algebra.generators}
    q = FpModule(
        m.algebra,
        [m.names[i] for i in keep],
        [m.degrees[i] for i in keep],
        rows,
        m.window,
        m.truncation,
    )
    proj = ModuleHom(m, q, tuple(project(1 << i) for i in range(m.dim)))
    return q, proj


def truncate_above(m: FpModule, hi: int) -> FpModule:
    """Quotient by everything above degree ``hi``."""
    above = [i for i in range(m.dim) if m.degrees[i] > hi]
    if not above:
        return FpModule(m.algebra, m.names, m.degrees, m.action, (m.window[0] if m.window else m.bottom, hi), "truncated-above")
    sub = ModuleHom(FpModule(m.algebra, [m.names[i] for i in above], [m.degrees[i] for i in above],
                             {g: [0] * len(above) for g in m.algebra.generators}), m, tuple(1 << i for i in above))
    q, _ = quotient(m, sub)
    lo = m.window[0] if m.window else q.bottom
    return FpModule(q.algebra, q.names, q.degrees, q.action, (lo, hi), "truncated-above")


def truncate_below(m: FpModule, lo: int) -> FpModule:
    """Submodule of everything in degree ``lo`` and above."""
    keep = [i for i in range(m.dim) if m.degrees[i] >= lo]
    sub, _ = submodule_spanned(m, [1 << i for i in keep])
    hi = m.window[1] if m.window else sub.top
    return FpModule(sub.algebra, sub.names, sub.degrees, sub.action, (lo, hi), "truncated-below")


def cyclic_quotient_of_algebra(algebra: AlgebraSpec, sub_generators: Sequence[int], name_prefix: str = "", with_projection: bool = False):
    """``algebra ⊗_B F2`` where B is generated by ``Sq^g`` for ``g`` in ``sub_generators``.

    Computed as the left regular module modulo the left ideal spanned by
    ``a · Sq^g``; the basis is the set of word-basis elements that are not
    pivots of that ideal.  With ``with_projection`` also returns the projection
    from the regular module and the per-degree offsets of its basis.
    """
    degrees = algebra.degrees()
    offsets = {}
    names, degs = [], []
    for d in degrees:
        offsets[d] = len(names)
        for w in algebra.words[d]:
            names.append(name_prefix + _word_name(w))
            degs.append(d)

    def embed(d: int, mask: int) -> int:
        return mask << offsets[d] if d in offsets else 0

    gen_coords = {g: algebra.coords(SteenrodElement.sq(g)) for g in set(sub_generators) | set(algebra.generators)}
    left = {g: [] for g in algebra.generators}
    for d in degrees:
        for i in range(algebra.dim(d)):
            for g in algebra.generators:
                left[g].append(embed(d + g, _mul_mask(algebra, g, gen_coords[g], d, 1 << i)))
    regular = FpModule(algebra, names, degs, left, truncation="exact" if algebra.cap is None else "truncated-above",
                       window=(0, algebra.top_degree))
    ideal = []
    for d in degrees:
        for i in range(algebra.dim(d)):
            for g in sub_generators:
                ideal.append(embed(d + g, _mul_mask(algebra, d, 1 << i, g, gen_coords[g])))
    sub, inc = submodule_spanned(regular, [v for v in ideal if v])
    q, proj = quotient(regular, inc)
    if with_projection:
        return q, proj, offsets
    return q


def _mul_mask(algebra: AlgebraSpec, d1: int, m1: int, d2: int, m2: int) -> int:
    out = 0
    for i in iter_bits(m1):
        for j in iter_bits(m2):
            out ^= algebra.product(d1, i, d2, j)
    return out


# -- isomorphism by template matching ------------------------------------------


def indecomposable_cells(m: FpModule) -> List[int]:
    """Basis elements spanning a complement of the image of the augmentation ideal."""
    space = RowSpace()
    for g in m.algebra.generators:
        for r in m.action[g]:
            if r:
                space.add(r)
    pivots = 0
    for v in space.basis():
        pivots |= v & -v
    return [i for i in range(m.dim) if not (pivots >> i) & 1]


def extend_from_generators(template: FpModule, gen_images: Dict[int, int], target: FpModule) -> Optional[ModuleHom]:
    """The module map sending template generators to the given vectors, if it exists."""
    known = RowSpace(track=True)
    pairs: List[Tuple[int, int]] = []
    queue = []
    for i, img in gen_images.items():
        v = 1 << i
        combo = known.express(v)
        if combo is not None:
            if _combine_pairs(pairs, combo) != img:
                return None
            continue
        known.add(v)
        pairs.append((v, img))
        queue.append((v, img))
    while queue:
        v, img = queue.pop(0)
        for g in template.algebra.generators:
            tv = template.act_gen(g, v)
            if g not in target.action:
                return None
            timg = target.act_gen(g, img)
            if not tv:
                if timg:
                    return None
                continue
            combo = known.express(tv)
            if combo is not None:
                if _combine_pairs(pairs, combo) != timg:
                    return None
                continue
            known.add(tv)
            pairs.append((tv, timg))
            queue.append((tv, timg))
    images = []
    for i in range(template.dim):
        combo = known.express(1 << i)
        if combo is None:
            return None
        images.append(_combine_pairs(pairs, combo))
    hom = ModuleHom(template, target, tuple(images))
    return hom if hom.is_module_map() else None


def _combine_pairs(pairs: List[Tuple[int, int]], combo: int) -> int:
    acc = 0
    for k in iter_bits(combo):
        acc ^= pairs[k][1]
    return acc


def match_cyclic_piece(m: FpModule, template: FpModule, max_candidates: int = 4096) -> Optional[ModuleHom]:
    """Isomorphism ``template -> m`` sending template generators to bottom classes of ``m``.

    Returns ``None`` when graded dimensions differ or no choice of generator
    images extends to a bijective module map.
    """
    if template.graded_dims() != m.graded_dims():
        return None
    gens = indecomposable_cells(template)
    choices = []
    for i in gens:
        cells = m.in_degree(template.degrees[i])
        cands = []
        for mask in range(1, 1 << len(cells)):
            v = 0
            for k, c in enumerate(cells):
                if (mask >> k) & 1:
                    v |= 1 << c
            cands.append(v)
        choices.append(cands)
    total = 1
    for c in choices:
        total *= len(c)
    if total > max_candidates:
        raise ModuleError("too many candidate generator images")
    for combo in cartesian(*choices):
        hom = extend_from_generators(template, dict(zip(gens, combo)), m)
        if hom is not None and hom.is_isomorphism():
            return hom
    return None


def same_diagram(a: FpModule, b: FpModule) -> List[str]:
    """Differences between two cell diagrams, pairing cells by name or, when
    every degree is at most one-dimensional, by degree."""
    diffs = []
    if a.graded_dims() != b.graded_dims():
        return [f"graded dimensions differ: {a.graded_dims()} vs {b.graded_dims()}"]
    if set(a.names) == set(b.names):
        pair = {i: b.index(n) for i, n in enumerate(a.names)}
    elif all(v == 1 for v in a.graded_dims().values()):
        pair = {i: b.in_degree(a.degrees[i])[0] for i in range(a.dim)}
    else:
        return ["cannot pair cells: names differ and some degree has several cells"]
    common = sorted(set(a.algebra.generators) & set(b.algebra.generators))
    for g in common:
        la = {(pair[i], pair_bit) for i, row in enumerate(a.action[g]) for pair_bit in (pair[j] for j in iter_bits(row))}
        lb = {(i, j) for i, row in enumerate(b.action[g]) for j in iter_bits(row)}
        for i, j in sorted(la - lb):
            diffs.append(f"Sq^{g} {b.names[i]} -> {b.names[j]} only in the first diagram")
        for i, j in sorted(lb - la):
            diffs.append(f"Sq^{g} {b.names[i]} -> {b.names[j]} only in the second diagram")
    return diffs


# -- associated graded ----------------------------------------------------------


def associated_graded(f: Filtration) -> List[FpModule]:
    """Successive quotients ``F_i / F_(i-1)``, plus ``M / F_last`` when nonzero."""
    pieces = []
    prev_vecs: List[int] = []
    stages = list(f.stages)
    whole = [1 << i for i in range(f.module.dim)]
    last = RowSpace()
    for v in stages[-1] if stages else []:
        last.add(v)
    if last.rank < f.module.dim:
        stages.append(whole)
    for vecs in stages:
        stage, inc = submodule_spanned(f.module, vecs)
        if prev_vecs:
            coords = RowSpace(track=True)
            for v in inc.images:
                coords.add(v)
            prev_space = span_closure(f.module, prev_vecs)
            images = []
            for v in prev_space.basis():
                combo = coords.express(v)
                if combo is None:
                    raise ModuleError("filtration is not increasing")
                images.append(combo)
            prev_mod = FpModule(stage.algebra, [f"p{k}" for k in range(len(images))],
                                [stage.vector_degree(c) for c in images],
                                {g: [0] * len(images) for g in stage.algebra.generators})
            # the zero action on prev_mod is irrelevant: only the image span is used
            piece, _ = quotient(stage, _unchecked_hom(prev_mod, stage, images))
        else:
            piece = stage
        pieces.append(piece)
        prev_vecs = list(inc.images)
    return pieces


def _unchecked_hom(source: FpModule, target: FpModule, images: Sequence[int]) -> ModuleHom:
    return ModuleHom(source, target, tuple(images))


# -- induced modules -------------------------------------------------------------


@dataclass(eq=False)
class InducedModule:
    """``A ⊗_B M`` for a subalgebra ``B`` together with its diagonal model.

    ``diagonal`` is ``A//B ⊗ M`` with the Cartan action and ``phi`` sends
    ``a ⊗ m`` to ``Σ a' ⊗ a''m``; both are present only when an A-module
    structure on ``M`` is known.
    """

    induced: FpModule
    diagonal: Optional[FpModule]
    phi: Optional[ModuleHom]
    relation_violations: List[str] = field(default_factory=list)


def induced_module(m: FpModule, cap: int, full: Optional[FpModule] = None) -> InducedModule:
    """Induce ``m`` from its algebra up to ``A`` truncated at ``cap``.

    Everything is kept up to degree ``cap + bottom(m)``, where the truncated
    algebra still sees every element.  ``full`` is ``m`` with an action of
    ``A:cap`` extending the given one; a one-cell ``m`` needs none.
    """
    if not m.is_finite:
        raise ModuleError("induction needs a finite module")
    big = get_algebra("A", cap)
    sub_gens = m.algebra.generators
    if not set(sub_gens) <= set(big.generators):
        raise ModuleError(f"{m.algebra.name} is not a subalgebra of {big.name}")
    hi = cap + m.bottom
    cells = [(d, i, j) for d in big.degrees() for i in range(big.dim(d)) for j in range(m.dim)
             if d + m.degrees[j] <= hi]
    pos = {c: k for k, c in enumerate(cells)}

    def lift(d: int, mask: int, j: int) -> int:
        out = 0
        for i in iter_bits(mask):
            k = pos.get((d, i, j))
            if k is not None:
                out |= 1 << k
        return out

    names = [f"{_word_name(big.words[d][i])}|{m.names[j]}" for d, i, j in cells]
    degrees = [d + m.degrees[j] for d, i, j in cells]
    rows = {g: [lift(d + g, big.gen_product(g, d, i), j) for d, i, j in cells] for g in big.generators}
    free = FpModule(big, names, degrees, rows, (m.bottom, hi), "truncated-above")
    sq = {g: big.coords(SteenrodElement.sq(g)) for g in sub_gens}
    relations = []
    for d, i, j in cells:
        for g in sub_gens:
            v = lift(d + g, _mul_mask(big, d, 1 << i, g, sq[g]), j)
            for jj in iter_bits(m.act_gen(g, 1 << j)):
                v ^= lift(d, 1 << i, jj)
            if v:
                relations.append(v)
    _, rel_inc = submodule_spanned(free, relations)
    induced, proj = quotient(free, rel_inc)
    induced = FpModule(big, induced.names, induced.degrees, induced.action, (m.bottom, hi), "truncated-above")

    if full is None and m.dim == 1:
        full = trivial_module(big, m.bottom, m.names[0])
    if full is None:
        return InducedModule(induced, None, None)
    if full.algebra != big or not full.is_finite:
        raise ModuleError("the extended action must be a finite module over the truncated algebra")
    quot, qproj, offsets = cyclic_quotient_of_algebra(big, sub_gens, with_projection=True)
    diagonal = tensor(quot, full)
    diag_index = {n: k for k, n in enumerate(diagonal.names)}

    def psi(d: int, i: int, j: int) -> int:
        out = 0
        for left, right in coproduct_element(big.basis[d][i]):
            dl = sum(left)
            lv = qproj.apply(big.coords(SteenrodElement([left], dl)) << offsets[dl])
            rv = full.act(SteenrodElement([right], d - dl), 1 << j)
            for p in iter_bits(lv):
                for r in iter_bits(rv):
                    k = diag_index.get(f"{quot.names[p]}#{full.names[r]}")
                    if k is not None:
                        out ^= 1 << k
        return out

    psi_free = [psi(d, i, j) for d, i, j in cells]
    bad = [free.vector_name(v) for v in rel_inc.images if combine(psi_free, v)]
    images = [psi_free[free.index(n)] for n in induced.names]
    phi = ModuleHom(induced, diagonal, tuple(images))
    return InducedModule(induced, diagonal, phi, [f"relation {n} does not map to zero" for n in bad])


def _word_name(word) -> str:
    return "1" if not word else "w" + ".".join(map(str, word))


# -- module definition files ----------------------------------------------------


def write_module(m: FpModule) -> str:
    alg = m.algebra.name if m.algebra.cap is None else f"A cap={m.algebra.cap}"
    lines = [f"algebra {alg}"]
    if m.window is not None:
        lines.append(f"window {m.window[0]} {m.window[1]} {m.truncation}")
    for n, d in zip(m.names, m.degrees):
        lines.append(f"gen {n} {d}")
    for g in m.algebra.generators:
        for i, row in enumerate(m.action[g]):
            if row:
                lines.append(f"sq {g} {m.names[i]} = " + " + ".join(m.names[j] for j in iter_bits(row)))
    return "\n".join(lines) + "\n"


def parse_module(text: str) -> FpModule:
    lines = [ln for ln in (_strip_comment(l) for l in text.splitlines()) if ln]
    if not lines or not lines[0].startswith("algebra"):
        raise ModuleError("first line must declare the algebra")
    algebra = parse_algebra(lines[0][len("algebra"):].strip())
    cells: List[Tuple[str, int]] = []
    acts: List[Tuple[int, str, List[str]]] = []
    window = None
    trunc = "exact"
    for ln in lines[1:]:
        tok = ln.split()
        if tok[0] == "gen":
            if len(tok) != 3:
                raise ModuleError(f"bad gen line {ln!r}")
            cells.append((tok[1], int(tok[2])))
        elif tok[0] == "sq":
            if len(tok) < 5 or tok[3] != "=":
                raise ModuleError(f"bad sq line {ln!r}")
            k = int(tok[1])
            rhs = tok[4:]
            if rhs == ["0"]:
                targets = []
            else:
                targets = rhs[0::2]
                if any(t != "+" for t in rhs[1::2]):
                    raise ModuleError(f"bad sq line {ln!r}")
            acts.append((k, tok[2], targets))
        elif tok[0] == "window":
            window = (int(tok[1]), int(tok[2]))
            trunc = tok[3] if len(tok) > 3 else "exact"
        else:
            raise ModuleError(f"unknown line {ln!r}")
    index = {n: i for i, (n, _) in enumerate(cells)}
    rows = {g: [0] * len(cells) for g in algebra.generators}
    for k, src, targets in acts:
        if k not in rows:
            raise ModuleError(f"Sq^{k} is not a generator of {algebra.name}")
        for t in targets:
            rows[k][index[src]] ^= 1 << index[t]
    return FpModule(algebra, [c[0] for c in cells], [c[1] for c in cells], rows, window, trunc)


def _strip_comment(line: str) -> str:
    s = line.strip()
    if s.startswith("#"):
        return ""
    # names may contain '#', so only a '#' preceded by whitespace starts a comment
    for k in range(1, len(s)):
        if s[k] == "#" and s[k - 1].isspace():
            return s[:k].strip()
    return s
