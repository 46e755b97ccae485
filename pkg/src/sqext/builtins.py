"""Named modules: the registry behind ``sqext generate`` and every command taking a module argument.

Names are ``F2``, ``L0``, ``L1`` (and ``L<n>``), ``L`` (cells 1, 2, 4, 8),
``M0``, ``A2modA1``, ``P:<m>:<n>`` (stunted projective space),
``LtensorDL0``, ``LtensorDP:<m>:<n>``, ``L0tensorDP:<m>:<n>`` and
``AmodA1:<top>``.  A leading ``D`` dualises any finite builtin; ``S<k>:``
suspends it by ``k``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from .fpmodule import FpModule, ModuleError, dual, restrict, suspend, tensor, trivial_module
from .projspace import DEFAULT_TOP, StuntedRange, a2moda1, build_L, build_L0, build_Ln, build_M0, stunted_module
from .resolution import a_mod_a1_over_a1
from .steenrod import AlgebraSpec, get_algebra


class UnknownBuiltin(KeyError):
    pass


@dataclass
class BuiltinConfig:
    algebra: Optional[AlgebraSpec] = None  # default A(2); A(1)-modules are restrictions
    top: int = DEFAULT_TOP  # window top for the infinite modules (M0, L_n)


def _alg(cfg: BuiltinConfig) -> AlgebraSpec:
    """Algebra to construct over: A(2) stands in for A(1), which then restricts."""
    alg = cfg.algebra or get_algebra("A2")
    return get_algebra("A2") if alg.kind == "A1" else alg


def _over(m: FpModule, cfg: BuiltinConfig) -> FpModule:
    if cfg.algebra is None or cfg.algebra == m.algebra:
        return m
    if cfg.algebra.kind != "A1":
        raise ModuleError(f"this module is defined over A(2), not {cfg.algebra.name}")
    return restrict(m, cfg.algebra)


def _range(args: str):
    lo, hi = (int(x) for x in args.split(":"))
    return StuntedRange(lo, hi)


FIXED: Dict[str, Callable[[BuiltinConfig], FpModule]] = {
    "F2": lambda c: trivial_module(_alg(c)),
    "L0": lambda c: build_L0(_alg(c)),
    "L": lambda c: build_L(_alg(c)),
    "M0": lambda c: build_M0(0, c.top, _alg(c)).module,
    "A2modA1": lambda c: _over(a2moda1(), c),
    "LtensorDL0": lambda c: tensor(build_L0(_alg(c)), dual(build_L0(_alg(c)))),
}

PATTERNS = [
    (re.compile(r"L(\d+)$"), lambda m, c: build_Ln(int(m[1]), c.top, _alg(c))[0]),
    (re.compile(r"P:(-?\d+:-?\d+)$"), lambda m, c: stunted_module(_range(m[1]), _alg(c))),
    (re.compile(r"LtensorDP:(-?\d+:-?\d+)$"),
     lambda m, c: tensor(build_L(_alg(c)), dual(stunted_module(_range(m[1]), _alg(c))))),
    (re.compile(r"L0tensorDP:(-?\d+:-?\d+)$"),
     lambda m, c: tensor(build_L0(_alg(c)), dual(stunted_module(_range(m[1]), _alg(c))))),
    (re.compile(r"AmodA1:(\d+)$"), lambda m, c: a_mod_a1_over_a1(int(m[1]))),
    (re.compile(r"S(-?\d+):(.+)$"), lambda m, c: suspend(builtin_module(m[2], c), int(m[1]))),
]


def builtin_names() -> list:
    return sorted(FIXED) + ["L<n>", "P:<m>:<n>", "LtensorDP:<m>:<n>", "L0tensorDP:<m>:<n>", "AmodA1:<top>", "D<name>", "S<k>:<name>"]


def builtin_module(name: str, cfg: Optional[BuiltinConfig] = None) -> FpModule:
    cfg = cfg or BuiltinConfig()
    if name in FIXED:
        return _over(FIXED[name](cfg), cfg)
    for pattern, make in PATTERNS:
        m = pattern.match(name)
        if m:
            out = make(m, cfg)
            return out if out.algebra.kind == "A1" else _over(out, cfg)
    if name.startswith("D") and len(name) > 1:
        inner = builtin_module(name[1:], cfg)
        if not inner.is_finite:
            raise ModuleError(f"{name[1:]} is truncated; only finite modules can be dualised")
        return dual(inner)
    raise UnknownBuiltin(name)
