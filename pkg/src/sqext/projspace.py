"""Cohomology of stunted real projective spaces and the modules cut out of them.

``H*P_m^n`` has one cell ``x^j`` for each ``m <= j <= n`` with
``Sq^i x^j = C(j, i) x^(i+j)``; for negative ``j`` the binomial coefficient
is read 2-adically.  From these we build ``L_n`` (a submodule generated by
low cells), ``M_0`` (the quotient) and the increasing filtration whose
pieces are suspensions of ``L_0`` and ``A(2)//A(1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .f2linalg import RowSpace, intersect
from .fpmodule import (
    Filtration,
    FpModule,
    ModuleHom,
    cyclic_quotient_of_algebra,
    quotient,
    submodule_generated,
)
from .steenrod import AlgebraSpec, binom2, get_algebra

DEFAULT_TOP = 41


def binom_mod2(j: int, i: int) -> int:
    """``C(j, i) mod 2`` for any integer ``j``, digitwise on the 2-adic expansion of ``j``."""
    if i < 0:
        return 0
    return binom2(j, i)


def binom_mod2_signed(j: int, i: int) -> int:
    """Same value through ``C(j, i) = (-1)^i C(i - j - 1, i)`` for ``j < 0``; used as a cross-check."""
    if i < 0:
        return 0
    if j >= 0:
        c = 1
        for k in range(i):
            c = c * (j - k) // (k + 1)
        return c & 1
    n = i - j - 1
    c = 1
    for k in range(i):
        c = c * (n - k) // (k + 1)
    return c & 1


def cell_name(j: int) -> str:
    return f"x{j}"


@dataclass(frozen=True)
class StuntedRange:
    bottom: int
    top: int
    truncated: bool = False  # True when ``top`` caps an infinite space

    def __post_init__(self):
        if self.bottom > self.top:
            raise ValueError("stunted range needs bottom <= top")


def stunted_module(r: StuntedRange, algebra: Optional[AlgebraSpec] = None) -> FpModule:
    algebra = algebra or get_algebra("A2")
    cells = list(range(r.bottom, r.top + 1))
    rows = {}
    for g in algebra.generators:
        out = []
        for j in cells:
            k = j + g
            out.append(1 << (k - r.bottom) if k <= r.top and binom_mod2(j, g) else 0)
        rows[g] = out
    trunc = "truncated-above" if r.truncated else "exact"
    return FpModule(algebra, [cell_name(j) for j in cells], cells, rows, (r.bottom, r.top), trunc)


def projective(bottom: int, top: int = DEFAULT_TOP, algebra: Optional[AlgebraSpec] = None, truncated: bool = True) -> FpModule:
    return stunted_module(StuntedRange(bottom, top, truncated), algebra)


def ln_generators(n: int, p: FpModule) -> List[str]:
    if n == 0:
        return [cell_name(0), cell_name(1)]
    return [cell_name(j) for j in range(-8 * n - 1, -1)]


def build_Ln(n: int, window_top: int = DEFAULT_TOP, algebra: Optional[AlgebraSpec] = None) -> Tuple[FpModule, ModuleHom]:
    """``L_n`` inside ``H*P_(-8n-1)`` (window capped at ``window_top``) with its inclusion."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if window_top < 8:
        raise ValueError("window_top must be at least 8")
    p = projective(-8 * n - 1, window_top, algebra)
    return submodule_generated(p, ln_generators(n, p))


def build_L0(algebra: Optional[AlgebraSpec] = None) -> FpModule:
    """``L_0`` on cells 0, 1, 2, 4, 8.

    Over a truncated full algebra this is taken inside the finite space
    ``H*P_0^8``, which is a genuine A-module (so ``Sq^8`` acts by zero on the
    top cell).
    """
    algebra = algebra or get_algebra("A2")
    p = stunted_module(StuntedRange(0, 8), algebra)
    sub, _ = submodule_generated(p, [cell_name(0), cell_name(1)])
    return sub


def build_L(algebra: Optional[AlgebraSpec] = None) -> FpModule:
    """``L_0`` without its disjoint bottom cell: cells 1, 2, 4, 8."""
    algebra = algebra or get_algebra("A2")
    p = stunted_module(StuntedRange(1, 8), algebra)
    sub, _ = submodule_generated(p, [cell_name(1)])
    return sub


@dataclass(eq=False)
class M0Data:
    module: FpModule
    projective: FpModule
    L: FpModule
    f: ModuleHom
    q: ModuleHom
    n: int


def build_M0(n: int = 0, window_top: int = DEFAULT_TOP, algebra: Optional[AlgebraSpec] = None) -> M0Data:
    """``M_0 = H*P_(-8n-1) / L_n`` with both maps of the short exact sequence."""
    L, f = build_Ln(n, window_top, algebra)
    m0, q = quotient(f.target, f)
    return M0Data(m0, f.target, L, f, q, n)


def a2moda1() -> FpModule:
    """``A(2)//A(1)``: eight cells in degrees 0, 4, 6, 7, 10, 11, 13, 17."""
    m = cyclic_quotient_of_algebra(get_algebra("A2"), (1, 2))
    names = {d: f"a{d}" for d in m.degrees}
    return FpModule(m.algebra, [names[d] for d in m.degrees], m.degrees, m.action)


def filtration_generators(n: int, level: int) -> List[int]:
    """Cell degrees generating ``F_level(n)``."""
    return [-8 * n, -8 * n + 1] + [-8 * n + 8 * i - 1 for i in range(level)]


def projective_filtration(n: int, p: FpModule) -> Filtration:
    """``F_0(n) ⊂ F_1(n) ⊂ ...`` inside ``p = H*P_(-8n-1)``, until the window is exhausted."""
    stages, labels = [], []
    level = 0
    top = p.window[1]
    while True:
        gens = [d for d in filtration_generators(n, level) if d <= top]
        space = _closure(p, gens)
        stages.append(space)
        labels.append(f"F_{level}({n})")
        if len(space) == p.dim or -8 * n + 8 * level - 1 > top:
            break
        level += 1
    return Filtration(p, stages, labels)


def _closure(p: FpModule, degrees: List[int]) -> List[int]:
    sub, inc = submodule_generated(p, [cell_name(d) for d in degrees])
    return list(inc.images)


def build_filtration(target: str, n: int = 0, window_top: int = DEFAULT_TOP, algebra=None) -> Filtration:
    """The filtration on ``"stunted"``, ``"L"`` (meaning ``L_n``) or ``"M0"``.

    On ``L_n`` the stages are intersections with ``L_n``; on ``M_0`` they are
    images under the quotient map, expressed in the basis of ``M_0``.
    """
    p = projective(-8 * n - 1, window_top, algebra)
    pf = projective_filtration(n, p)
    if target == "stunted":
        return pf
    if target == "L":
        L, f = build_Ln(n, window_top, algebra)
        coords = RowSpace(track=True)
        for v in f.images:
            coords.add(v)
        stages = []
        for vecs in pf.stages:
            common = intersect(vecs, list(f.images))
            stages.append([coords.express(v) for v in common])
        return Filtration(L, stages, list(pf.labels))
    if target == "M0":
        data = build_M0(n, window_top, algebra)
        stages = []
        for vecs in pf.stages:
            space = RowSpace()
            for v in vecs:
                space.add(data.q.apply(v))
            stages.append(space.basis())
        return Filtration(data.module, stages, list(pf.labels))
    raise ValueError(f"unknown filtration target {target!r}")
