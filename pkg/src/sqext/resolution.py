"""Minimal free resolutions, Ext, induced maps and independent Ext oracles.

A free module ``P_s`` is described by the degrees of its generators.  Its
degree-``t`` part has a basis of pairs ``(k, i)``: generator ``k`` times the
algebra basis element ``basis[t - deg k][i]``.  These pairs are laid out in
blocks, generator by generator, and an element of ``P_s`` in degree ``t`` is
a bitmask over that layout.  Generators are created in increasing degree, so
adding a generator only appends a block.

The differential of generator ``k`` of ``P_s`` is stored as a mask over the
layout of ``P_(s-1)`` in the generator's degree (for ``s = 0``, a vector of
the module being resolved).
"""

from __future__ import annotations

import bisect
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .charts import ExtChart
from .f2linalg import F2Matrix, RowSpace, iter_bits
from .fpmodule import FpModule, ModuleHom, cyclic_quotient_of_algebra, dual, induced_module, restrict
from .steenrod import AlgebraSpec, get_algebra, parse_algebra, parse_element

CACHE_VERSION = 1


class WindowError(ValueError):
    """A request reaches past the range where a truncated computation is exact."""


class Layout:
    """Basis of ``P_s`` in one internal degree: blocks of algebra basis elements per generator."""

    __slots__ = ("t", "offsets", "starts", "gens", "dim")

    def __init__(self, algebra: AlgebraSpec, gen_degrees: Sequence[int], t: int):
        self.t = t
        self.offsets: Dict[int, int] = {}
        self.starts: List[int] = []
        self.gens: List[int] = []
        pos = 0
        for k, d in enumerate(gen_degrees):
            if d > t:
                break
            n = algebra.dim(t - d)
            if n:
                self.offsets[k] = pos
                self.starts.append(pos)
                self.gens.append(k)
                pos += n
        self.dim = pos

    def cell(self, bit: int) -> Tuple[int, int]:
        """``(generator, algebra basis index)`` of a layout position."""
        b = bisect.bisect_right(self.starts, bit) - 1
        return self.gens[b], bit - self.starts[b]

    def block(self, v: int, k: int, size: int) -> int:
        off = self.offsets.get(k)
        if off is None:
            return 0
        return (v >> off) & ((1 << size) - 1)


@dataclass
class ResolutionConfig:
    s_max: int = 6
    t_max: int = 20
    threads: int = 1


def default_trust(algebra: AlgebraSpec, module: FpModule) -> Tuple[Callable[[int, int], bool], Optional[int], str]:
    """Trust predicate for ``Ext^(s,t)``, the largest sensible ``t`` at ``s = 0`` offset, and a description.

    A module truncated above degree ``T`` agrees with the untruncated one up
    to a module concentrated in degrees ``> T``, whose Ext vanishes for
    ``t <= T + s``; so ``Ext^(s,t)`` is exact for ``t <= T + s - 1``.  Over A
    truncated at ``cap`` the computation only ever uses algebra elements of
    degree ``<= t - bottom``, so it is exact for ``t <= bottom + cap``.
    """
    parts = []
    preds = []
    if module.truncation == "truncated-above":
        T = module.window[1]
        preds.append(lambda s, t, T=T: t <= T + s - 1)
        parts.append(f"t <= {T} + s - 1 (module truncated above degree {T})")
    elif module.truncation == "truncated-below":
        preds.append(lambda s, t: False)
        parts.append("no bidegree (module truncated below; supply an explicit trust rule)")
    if algebra.cap is not None:
        bound = module.bottom + algebra.cap
        preds.append(lambda s, t, b=bound: t <= b)
        parts.append(f"t <= {bound} (algebra truncated at degree {algebra.cap})")
    desc = " and ".join(parts) if parts else "everywhere"
    return (lambda s, t: all(p(s, t) for p in preds)), None, desc


def validity_bound(algebra: AlgebraSpec, module: FpModule, s_max: int) -> Optional[int]:
    bounds = []
    if module.truncation == "truncated-above":
        bounds.append(module.window[1] + s_max - 1)
    if algebra.cap is not None:
        bounds.append(module.bottom + algebra.cap)
    return min(bounds) if bounds else None


class FreeResolution:
    """Minimal free resolution ``... -> P_1 -> P_0 -> M`` through ``s_max`` and internal degree ``t_max``."""

    def __init__(self, algebra: AlgebraSpec, module: FpModule, s_max: int, t_max: int):
        if module.algebra != algebra:
            raise ValueError(f"module is over {module.algebra.name}, not {algebra.name}")
        self.algebra = algebra
        self.module = module
        self.s_max = s_max
        self.t_max = t_max
        self.gens: List[List[int]] = [[] for _ in range(s_max + 1)]
        self.diffs: List[List[int]] = [[] for _ in range(s_max + 1)]
        self.kernels: Dict[Tuple[int, int], List[int]] = {}
        self._layouts: Dict[Tuple[int, int], Layout] = {}
        self.trust, _, self.trust_description = default_trust(algebra, module)
        self.t_min = module.bottom if module.dim else 0

    # -- layouts and the action on free modules --------------------------

    def layout(self, s: int, t: int) -> Layout:
        key = (s, t)
        lay = self._layouts.get(key)
        if lay is None:
            lay = Layout(self.algebra, self.gens[s], t)
            self._layouts[key] = lay
        return lay

    def act_on_free(self, s: int, e: int, i: int, x: int, deg: int) -> int:
        """``basis[e][i] · x`` for ``x`` in ``P_s`` of degree ``deg`` (``s = -1`` is the module)."""
        if s < 0:
            return self.module.act_basis(e, i, x)
        alg = self.algebra
        src = self.layout(s, deg)
        dst = self.layout(s, deg + e)
        gdeg = self.gens[s]
        out = 0
        for bit in iter_bits(x):
            k, j = src.cell(bit)
            prod = alg.product(e, i, deg - gdeg[k], j)
            if prod:
                out ^= prod << dst.offsets[k]
        return out

    def d_basis(self, s: int, k: int, e: int, i: int) -> int:
        """``d(basis[e][i] · g_k)`` for generator ``k`` of ``P_s``."""
        deg = self.gens[s][k]
        return self.act_on_free(s - 1, e, i, self.diffs[s][k], deg)

    def d_element(self, s: int, x: int, t: int) -> int:
        """Differential of an element of ``P_s`` of degree ``t``."""
        lay = self.layout(s, t)
        out = 0
        for bit in iter_bits(x):
            k, i = lay.cell(bit)
            out ^= self.d_basis(s, k, t - self.gens[s][k], i)
        return out

    def d_rows(self, s: int, t: int) -> List[int]:
        """Matrix of ``d: P_s -> P_(s-1)`` in degree ``t``, one row per layout position."""
        lay = self.layout(s, t)
        rows = []
        for k in lay.gens:
            e = t - self.gens[s][k]
            for i in range(self.algebra.dim(e)):
                rows.append(self.d_basis(s, k, e, i))
        return rows

    # -- construction ------------------------------------------------------

    def _target(self, s: int, t: int) -> List[int]:
        if s == 0:
            return [1 << i for i in self.module.in_degree(t)]
        return self.kernels.get((s - 1, t), [])

    def _compute(self, s: int, t: int) -> Tuple[List[int], List[int]]:
        """New generator differentials and the kernel of ``d_s`` in degree ``t``."""
        target = self._target(s, t)
        old = Layout(self.algebra, [d for d in self.gens[s] if d < t], t)
        space = RowSpace(track=True)
        kernel = []
        need_kernel = s < self.s_max
        for k in old.gens:
            e = t - self.gens[s][k]
            for i in range(self.algebra.dim(e)):
                rel = space.add_or_relation(self.d_basis(s, k, e, i))
                if rel is not None and need_kernel:
                    kernel.append(rel)
        new = []
        for z in target:
            if space.reduce(z):
                space.add(z)
                new.append(z)
        return new, kernel

    def _commit(self, s: int, t: int, new: List[int], kernel: List[int]) -> None:
        for z in new:
            self.gens[s].append(t)
            self.diffs[s].append(z)
        self._layouts.pop((s, t), None)
        if s < self.s_max:
            self.kernels[(s, t)] = kernel

    def run(self, threads: int = 1) -> "FreeResolution":
        """Fill every bidegree; cells on one anti-diagonal ``s + t`` are independent.

        With ``threads > 1`` the cells of a diagonal are computed concurrently
        and then committed in order of ``s``, so the result is identical to a
        serial run.
        """
        lo = self.t_min
        span = self.t_max - lo
        pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
        try:
            for c in range(0, span + self.s_max + 1):
                cells = [(s, lo + c - s) for s in range(0, min(c, self.s_max) + 1) if lo + c - s <= self.t_max]
                if pool is None:
                    results = [self._compute(s, t) for s, t in cells]
                else:
                    results = list(pool.map(lambda st: self._compute(*st), cells))
                for (s, t), (new, kernel) in zip(cells, results):
                    self._commit(s, t, new, kernel)
        finally:
            if pool is not None:
                pool.shutdown()
        return self

    # -- inspection ----------------------------------------------------------

    def generators(self, s: int, t: int) -> List[int]:
        return [k for k, d in enumerate(self.gens[s]) if d == t]

    def count(self, s: int, t: int) -> int:
        return sum(1 for d in self.gens[s] if d == t)

    def check_d_squared(self) -> List[str]:
        """Bidegrees where ``d ∘ d`` (or ``ε ∘ d``) is nonzero on a generator."""
        out = []
        for s in range(1, self.s_max + 1):
            for k, t in enumerate(self.gens[s]):
                if self.d_element(s - 1, self.diffs[s][k], t):
                    out.append(f"d∘d != 0 on generator {k} of P_{s} (t={t})")
        return out

    def check_minimal(self) -> List[str]:
        """Generators whose differential has a unit coefficient."""
        out = []
        for s in range(1, self.s_max + 1):
            for k, t in enumerate(self.gens[s]):
                lay = self.layout(s - 1, t)
                for bit in iter_bits(self.diffs[s][k]):
                    kk, _ = lay.cell(bit)
                    if self.gens[s - 1][kk] == t:
                        out.append(f"unit coefficient in d of generator {k} of P_{s} (t={t})")
                        break
        return out

    def check_exact(self) -> List[str]:
        """``P_0 -> M`` onto and ``ker d_(s-1) = im d_s`` in every computed degree, by dimension count."""
        out = []
        for t in range(self.t_min, self.t_max + 1):
            rows0 = [self.d_basis(0, k, t - self.gens[0][k], i)
                     for k in self.layout(0, t).gens for i in range(self.algebra.dim(t - self.gens[0][k]))]
            if _rank(rows0) != len(self.module.in_degree(t)):
                out.append(f"P_0 -> M not onto in degree {t}")
            for s in range(1, self.s_max + 1):
                below = self.d_rows(s - 1, t)
                ker = len(below) - _rank(below)
                if _rank(self.d_rows(s, t)) != ker:
                    out.append(f"not exact at P_{s - 1}, t={t}")
        return out

    def untrusted(self) -> set:
        return {
            (s, t)
            for s in range(self.s_max + 1)
            for t in range(self.t_min, self.t_max + 1)
            if not self.trust(s, t)
        }


def _rank(rows: Sequence[int]) -> int:
    space = RowSpace()
    for r in rows:
        space.add(r)
    return space.rank


def minimal_resolution(
    algebra: AlgebraSpec,
    m: FpModule,
    s_max: int,
    t_max: int,
    threads: int = 1,
    allow_untrusted: bool = False,
) -> FreeResolution:
    """Minimal resolution of ``m`` through ``(s_max, t_max)``.

    Refuses (``WindowError``) when ``t_max`` lies beyond the last internal
    degree where a truncated module or algebra still gives exact Ext, unless
    ``allow_untrusted`` is set; per-bidegree trust flags are kept either way.
    """
    bound = validity_bound(algebra, m, s_max)
    if bound is not None and t_max > bound and not allow_untrusted:
        _, _, desc = default_trust(algebra, m)
        raise WindowError(f"t_max={t_max} exceeds the validity bound t <= {bound} at s = {s_max} ({desc})")
    return FreeResolution(algebra, m, s_max, t_max).run(threads)


# -- Ext ---------------------------------------------------------------------


def structure_lines(res: FreeResolution, s_max: Optional[int] = None) -> Tuple[set, set]:
    """h0 and h1 lines read off from the ``Sq^1`` and ``Sq^2`` coefficients of the differentials."""
    alg = res.algebra
    sq1 = _single_square_bit(alg, 1)
    sq2 = _single_square_bit(alg, 2)
    h0, h1 = set(), set()
    top = res.s_max if s_max is None else s_max
    index = [_class_index(res.gens[s]) for s in range(res.s_max + 1)]
    for s in range(1, top + 1):
        for k, t in enumerate(res.gens[s]):
            lay = res.layout(s - 1, t)
            x = res.diffs[s][k]
            for kk in lay.gens:
                gdeg = res.gens[s - 1][kk]
                e = t - gdeg
                if e not in (1, 2):
                    continue
                blk = lay.block(x, kk, alg.dim(e))
                bit = sq1 if e == 1 else sq2
                if bit is not None and (blk >> bit) & 1:
                    line = ((s - 1, gdeg, index[s - 1][kk]), (s, t, index[s][k]))
                    (h0 if e == 1 else h1).add(line)
    return h0, h1


def _single_square_bit(alg: AlgebraSpec, n: int) -> Optional[int]:
    from .steenrod import SteenrodElement

    if alg.dim(n) == 0:
        return None
    if alg.dim(n) != 1:
        raise ValueError(f"degree {n} of {alg.name} is not one-dimensional")
    return 0 if alg.coords(SteenrodElement.sq(n)) == 1 else None


def _class_index(degrees: Sequence[int]) -> List[int]:
    seen: Dict[int, int] = {}
    out = []
    for d in degrees:
        out.append(seen.get(d, 0))
        seen[d] = out[-1] + 1
    return out


def ext_chart(res: FreeResolution, name: str = "", lines: bool = True, t_max: Optional[int] = None) -> ExtChart:
    """``Ext^(s,t)(M, F2)``: generator counts, with h0/h1 lines and trust flags."""
    t_top = res.t_max if t_max is None else min(t_max, res.t_max)
    dims = {}
    for s in range(res.s_max + 1):
        for t in res.gens[s]:
            if t <= t_top:
                dims[(s, t)] = dims.get((s, t), 0) + 1
    h0, h1 = structure_lines(res) if lines else (set(), set())
    keep = lambda ln: ln[1][1] <= t_top
    untrusted = {(s, t) for (s, t) in res.untrusted() if t <= t_top}
    return ExtChart(dims, res.s_max, t_top, {l for l in h0 if keep(l)}, {l for l in h1 if keep(l)}, untrusted, name)


def hom_complex_ext(res: FreeResolution, n: FpModule, name: str = "") -> ExtChart:
    """``Ext^(s,t)(M, N)`` for a finite module ``N`` via the cohomology of ``Hom(P_*, N)``.

    A hom of degree ``t`` (lowering degrees by ``t``) sends each generator of
    ``P_s`` in degree ``d`` to ``N`` in degree ``d - t``.  Needs the
    resolution one step further in ``s`` and ``top(N)`` further in ``t``.
    """
    if not n.is_finite:
        raise WindowError("the second variable must be a finite module")
    if n.algebra != res.algebra:
        raise ValueError("modules over different algebras")
    if n.dim == 0:
        return ExtChart({}, res.s_max - 1, res.t_max - n.top, name=name)
    s_top = res.s_max - 1
    t_top = res.t_max - n.top
    t_lo = res.t_min - n.top

    def basis(s: int, t: int) -> Dict[Tuple[int, int], int]:
        out = {}
        for k, d in enumerate(res.gens[s]):
            for c in n.in_degree(d - t):
                out[(k, c)] = len(out)
        return out

    def coboundary_rank(s: int, t: int) -> int:
        """Rank of ``Hom^t(P_(s-1), N) -> Hom^t(P_s, N)``."""
        if s == 0 or s > res.s_max:
            return 0
        src = basis(s - 1, t)
        dst = basis(s, t)
        rows = {key: 0 for key in src}
        for k, d in enumerate(res.gens[s]):
            lay = res.layout(s - 1, d)
            for bit in iter_bits(res.diffs[s][k]):
                kk, j = lay.cell(bit)
                e = d - res.gens[s - 1][kk]
                for c in n.in_degree(res.gens[s - 1][kk] - t):
                    img = n.act_basis(e, j, 1 << c)
                    for c2 in iter_bits(img):
                        rows[(kk, c)] ^= 1 << dst[(k, c2)]
        return _rank(list(rows.values()))

    dims, untrusted = {}, set()
    for s in range(s_top + 1):
        for t in range(t_lo, t_top + 1):
            h = len(basis(s, t))
            if not h:
                continue
            dim = h - coboundary_rank(s, t) - coboundary_rank(s + 1, t)
            if dim:
                dims[(s, t)] = dim
    for s in range(s_top + 1):
        for t in range(t_lo, t_top + 1):
            if not (res.trust(s, t + n.top) and res.trust(s + 1, t + n.top)):
                untrusted.add((s, t))
    return ExtChart(dims, s_top, t_top, set(), set(), untrusted, name)


def ext_from_f2(n: FpModule, s_max: int, stem_hi: int, threads: int = 1, name: str = "") -> ExtChart:
    """``Ext^(s,t)(F2, N)`` for a finite module ``N``, as ``Ext(DN, F2)`` so that h0/h1 lines come for free."""
    d = dual(n)
    res = FreeResolution(n.algebra, d, s_max, stem_hi + s_max).run(threads)
    return ext_chart(res, name)


def a_mod_a1_over_a1(top: int) -> FpModule:
    """``A//A(1)`` through degree ``top``, as a finite A(1)-module.

    Cutting off above ``top`` is a quotient of ``A//A(1)`` (not a submodule),
    so the result is an honest finite A(1)-module.
    """
    a1 = get_algebra("A1")
    q = restrict(cyclic_quotient_of_algebra(get_algebra("A", top), (1, 2)), a1)
    return FpModule(a1, q.names, q.degrees, q.action)


def ext_a1_into_a_mod_a1(top: int, s_max: int, stem_hi: int, threads: int = 1) -> ExtChart:
    """``Ext_(A(1))(F2, A//A(1))`` from the part of ``A//A(1)`` below ``top``.

    Generators of the minimal A(1)-resolution of F2 in homological degree
    ``s`` lie in internal degrees ``<= 3s``, so ``Hom^t(P_s, K)`` vanishes
    for the kernel ``K`` (degrees ``> top``) once ``t >= 3s - top``.  By the
    long exact sequence a bidegree is exact when ``t >= 3(s + 1) - top``;
    the rest is flagged untrusted.
    """
    chart = ext_from_f2(a_mod_a1_over_a1(top), s_max, stem_hi, threads, name=f"Ext_A(1)(F2, A//A(1) below {top})")
    t_lo = min((t for _, t in chart.dims), default=0)
    chart.untrusted |= {
        (s, t) for s in range(s_max + 1) for t in range(t_lo - s_max, chart.t_max + 1) if t < 3 * (s + 1) - top
    }
    return chart


# -- chain maps and induced maps on Ext ------------------------------------------


class ChainMap:
    """A lift ``F_s: P_s -> Q_s`` of a module map ``f: M -> M'`` between resolutions."""

    def __init__(self, f: ModuleHom, src: FreeResolution, dst: FreeResolution):
        if f.shift != 0:
            raise ValueError("only degree-preserving homs are lifted")
        self.f, self.src, self.dst = f, src, dst
        self.s_max = min(src.s_max, dst.s_max)
        self.t_max = min(src.t_max, dst.t_max)
        self.images: List[List[Optional[int]]] = [[None] * len(src.gens[s]) for s in range(self.s_max + 1)]
        self._solvers: Dict[Tuple[int, int], RowSpace] = {}

    def _solver(self, s: int, t: int) -> RowSpace:
        key = (s, t)
        sp = self._solvers.get(key)
        if sp is None:
            sp = RowSpace(track=True)
            for r in self.dst.d_rows(s, t):
                sp.add(r)
            self._solvers[key] = sp
        return sp

    def apply(self, s: int, x: int, t: int) -> int:
        """``F_s`` on an element of ``P_s`` of degree ``t`` (``s = -1`` applies ``f``)."""
        if s < 0:
            return self.f.apply(x)
        lay = self.src.layout(s, t)
        out = 0
        for bit in iter_bits(x):
            k, i = lay.cell(bit)
            gdeg = self.src.gens[s][k]
            out ^= self.dst.act_on_free(s, t - gdeg, i, self.image(s, k), gdeg)
        return out

    def image(self, s: int, k: int) -> int:
        img = self.images[s][k]
        if img is None:
            t = self.src.gens[s][k]
            target = self.apply(s - 1, self.src.diffs[s][k], t)
            combo = self._solver(s, t).express(target)
            if combo is None:
                raise ArithmeticError(f"cannot lift generator {k} of P_{s}")
            img = combo
            self.images[s][k] = img
        return img

    def ext_matrix(self, s: int, t: int) -> F2Matrix:
        """Induced ``Ext^(s,t)(M', F2) -> Ext^(s,t)(M, F2)`` in generator bases.

        Row ``h`` (a generator of ``Q_s``) lists the generators ``g`` of ``P_s``
        whose image under ``F_s`` has a unit coefficient on ``h``.
        """
        src_g = self.src.generators(s, t)
        dst_g = self.dst.generators(s, t)
        rows = []
        lay = self.dst.layout(s, t)
        for h in dst_g:
            bit = lay.offsets[h]
            row = 0
            for col, g in enumerate(src_g):
                if (self.image(s, g) >> bit) & 1:
                    row |= 1 << col
            rows.append(row)
        return F2Matrix(tuple(rows), len(src_g))


def ext_of_hom(f: ModuleHom, res_source: FreeResolution, res_target: FreeResolution) -> Dict[Tuple[int, int], F2Matrix]:
    """Per-bidegree matrices of the map ``Ext(target, F2) -> Ext(source, F2)`` induced by ``f``."""
    cm = ChainMap(f, res_source, res_target)
    out = {}
    for s in range(cm.s_max + 1):
        for t in range(min(res_source.t_min, res_target.t_min), cm.t_max + 1):
            if res_source.count(s, t) or res_target.count(s, t):
                out[(s, t)] = cm.ext_matrix(s, t)
    return out


def les_check(f: ModuleHom, q: ModuleHom, s_max: int, t_max: int, algebra: Optional[AlgebraSpec] = None) -> List[str]:
    """Check ``0 -> A -f-> B -q-> C -> 0`` gives ``Ext(C) -> Ext(B) -> Ext(A)`` exact in the middle.

    Verifies ``f# ∘ q# = 0`` and ``rank q# + rank f# = dim Ext(B)`` per bidegree.
    Truncation flags are ignored: the check is about the modules as given.
    """
    algebra = algebra or f.source.algebra
    resolve = lambda m: FreeResolution(algebra, m, s_max, t_max).run()
    ra, rb, rc = resolve(f.source), resolve(f.target), resolve(q.target)
    fs = ext_of_hom(f, ra, rb)
    qs = ext_of_hom(q, rb, rc)
    problems = []
    for s in range(s_max + 1):
        for t in range(min(ra.t_min, rb.t_min, rc.t_min), t_max + 1):
            nb = rb.count(s, t)
            fm = fs.get((s, t), F2Matrix((0,) * nb, ra.count(s, t)))
            qm = qs.get((s, t), F2Matrix((0,) * rc.count(s, t), nb))
            comp = qm.matmul(fm) if qm.nrows and nb else None
            if comp is not None and any(comp.rows):
                problems.append(f"f#∘q# != 0 at (s,t)=({s},{t})")
            if qm.rank() + fm.rank() != nb:
                problems.append(f"not exact at Ext(B) in (s,t)=({s},{t})")
    return problems


@dataclass
class DimComparison:
    """Per-bidegree comparison of two sets of Ext dimensions."""

    compared: int = 0
    mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __str__(self) -> str:
        head = f"{self.compared} bidegrees compared, {len(self.mismatches)} mismatches"
        return "\n".join([head] + self.mismatches)


def compare_dims(
    left: Callable[[int, int], int],
    right: Callable[[int, int], int],
    bidegrees: Iterable[Tuple[int, int]],
) -> DimComparison:
    out = DimComparison()
    for s, t in bidegrees:
        a, b = left(s, t), right(s, t)
        out.compared += 1
        if a != b:
            out.mismatches.append(f"(s,t)=({s},{t}) stem {t - s}: {a} vs {b}")
    return out


def change_of_rings_check(
    m: FpModule,
    cap: int,
    s_max: int,
    t_max: int,
    full: Optional[FpModule] = None,
    threads: int = 1,
) -> DimComparison:
    """Compare ``Ext_A(A ⊗_B M)`` over ``A`` truncated at ``cap`` with ``Ext_B(M)``.

    Both sides are resolved independently; only bidegrees trusted on the
    truncated side are compared.  With ``full`` given, the diagonal model
    ``A//B ⊗ M`` is resolved as well and must agree too.
    """
    ind = induced_module(m, cap, full)
    small = minimal_resolution(m.algebra, m, s_max, t_max, threads)
    models = [ind.induced] + ([ind.diagonal] if full is not None else [])
    window = [(s, t) for s in range(s_max + 1) for t in range(m.bottom, t_max + 1)]
    report = DimComparison()
    for model in models:
        big = FreeResolution(model.algebra, model, s_max, t_max).run(threads)
        part = compare_dims(big.count, small.count, [(s, t) for s, t in window if big.trust(s, t)])
        report.compared += part.compared
        report.mismatches += part.mismatches
    return report


# -- oracles ------------------------------------------------------------------------


def bar_ext_oracle(algebra: AlgebraSpec, m: FpModule, s_max: int, t_max: int) -> ExtChart:
    """``Ext^(s,t)(M, F2)`` from the reduced bar complex ``Ā^(⊗s) ⊗ M``, no minimality involved.

    ``d[a_1|...|a_s]x = Σ [..|a_i a_(i+1)|..]x + [a_1|...|a_(s-1)] a_s x``;
    ``dim Ext^(s,t) = dim C_s - rank d_s - rank d_(s+1)`` in degree ``t``.
    """
    if s_max > 4:
        raise ValueError("the bar complex oracle is meant for s <= 3 or 4")
    pos = [(d, i) for d in algebra.degrees() if d > 0 for i in range(algebra.dim(d))]

    basis_cache: Dict[Tuple[int, int], Dict[tuple, int]] = {}

    def basis(s: int, t: int) -> Dict[tuple, int]:
        key = (s, t)
        if key in basis_cache:
            return basis_cache[key]
        out: Dict[tuple, int] = {}

        def rec(prefix: tuple, remaining: int, left: int):
            if left == 0:
                for c in m.in_degree(remaining):
                    out[prefix + (c,)] = len(out)
                return
            for d, i in pos:
                if d > remaining - m.bottom:
                    break
                rec(prefix + ((d, i),), remaining - d, left - 1)

        rec((), t, s)
        basis_cache[key] = out
        return out

    def rank_d(s: int, t: int) -> int:
        if s == 0:
            return 0
        src, dst = basis(s, t), basis(s - 1, t)
        rows = []
        for key in src:
            bars, c = key[:-1], key[-1]
            row = 0
            for j in range(s - 1):
                (d1, i1), (d2, i2) = bars[j], bars[j + 1]
                prod = algebra.product(d1, i1, d2, i2)
                for k in iter_bits(prod):
                    new = bars[:j] + ((d1 + d2, k),) + bars[j + 2:] + (c,)
                    row ^= 1 << dst[new]
            d, i = bars[-1]
            img = m.act_basis(d, i, 1 << c)
            for c2 in iter_bits(img):
                row ^= 1 << dst[bars[:-1] + (c2,)]
            rows.append(row)
        return _rank(rows)

    dims = {}
    for s in range(s_max + 1):
        for t in range(m.bottom, t_max + 1):
            n = len(basis(s, t))
            if n:
                v = n - rank_d(s, t) - rank_d(s + 1, t)
                if v:
                    dims[(s, t)] = v
    return ExtChart(dims, s_max, t_max, name=f"bar complex for {algebra.name}")


# -- cache files ---------------------------------------------------------------------


def resolution_to_text(res: FreeResolution) -> str:
    """Canonical text: header, then generators and differentials as admissible-monomial strings."""
    alg = res.algebra
    lines = [
        f"sqext-resolution {CACHE_VERSION}",
        f"algebra {alg.name}",
        f"module {res.module.content_hash()}",
        f"bounds {res.s_max} {res.t_max}",
    ]
    for s in range(res.s_max + 1):
        for k, t in enumerate(res.gens[s]):
            x = res.diffs[s][k]
            if s == 0:
                body = " ".join(str(c) for c in iter_bits(x))
            else:
                lay = res.layout(s - 1, t)
                terms = []
                for kk in lay.gens:
                    e = t - res.gens[s - 1][kk]
                    blk = lay.block(x, kk, alg.dim(e))
                    if blk:
                        terms.append(f"{kk}:" + str(alg.element(e, blk)).replace(" ", ""))
                body = " ".join(terms)
            lines.append(f"gen {s} {k} {t} = {body}")
    return "\n".join(lines) + "\n"


def resolution_from_text(text: str, module: FpModule) -> FreeResolution:
    lines = text.splitlines()
    head = dict(ln.split(" ", 1) for ln in lines[:4])
    if head.get("sqext-resolution") != str(CACHE_VERSION):
        raise ValueError("unsupported cache version")
    if head["module"] != module.content_hash():
        raise ValueError("cache belongs to a different module")
    algebra = parse_algebra(head["algebra"])
    s_max, t_max = map(int, head["bounds"].split())
    res = FreeResolution(algebra, module, s_max, t_max)
    for ln in lines[4:]:
        if not ln.strip():
            continue
        lhs, body = ln.split(" = ", 1) if " = " in ln else (ln.rstrip(" ="), "")
        _, s, k, t = lhs.split()
        s, k, t = int(s), int(k), int(t)
        if k != len(res.gens[s]):
            raise ValueError("generators out of order in cache")
        if s == 0:
            x = 0
            for c in body.split():
                x |= 1 << int(c)
        else:
            lay = res.layout(s - 1, t)
            x = 0
            for term in body.split():
                kk, elem = term.split(":", 1)
                kk = int(kk)
                e = t - res.gens[s - 1][kk]
                x |= algebra.coords(parse_element(elem, e)) << lay.offsets[kk]
        res.gens[s].append(t)
        res.diffs[s].append(x)
    res._layouts.clear()
    return res
