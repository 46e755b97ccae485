"""Hand-transcribed reference data: Ext charts and cell diagrams.

Chart fixtures use the ``fig/window/dot/line`` format of :mod:`sqext.charts`.
Cell diagrams use

    diagram <name>
    window <lo> <hi>
    cell <degree>
    sq <g> <from-degree> <to-degree>

for modules with at most one cell per degree, which covers every diagram
stored here.  Lines starting with ``#`` carry provenance notes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Set, Tuple

from .charts import ChartFixture, FixtureError, parse_fixture
from .f2linalg import iter_bits
from .fpmodule import FpModule

CHARTS = (
    "ext_a1_f2",
    "ext_a1_l0",
    "ext_a2_l0_dl0",
    "ext_a2_l_p",
    "ext_a_l_p",
    "ext_a1_bo_bo",
)
DIAGRAMS = ("cells_l0", "cells_l1", "cells_m0", "cells_a2moda1")


def _read(filename: str) -> str:
    return resources.files("sqext").joinpath("data", filename).read_text()


def load_chart(name: str) -> ChartFixture:
    if name not in CHARTS:
        raise KeyError(f"no chart fixture {name!r}")
    return parse_fixture(_read(f"{name}.chart"))


@dataclass
class CellDiagram:
    name: str
    window: Tuple[int, int]
    cells: Set[int]
    lines: Set[Tuple[int, int, int]]  # (g, from, to)
    notes: List[str] = field(default_factory=list)

    def graded_dims(self) -> List[int]:
        lo, hi = self.window
        return [1 if d in self.cells else 0 for d in range(lo, hi + 1)]


def parse_cell_diagram(text: str) -> CellDiagram:
    name, window = None, None
    cells: Set[int] = set()
    lines: Set[Tuple[int, int, int]] = set()
    notes = []
    for k, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            notes.append(line[1:].strip())
            continue
        parts = line.split()
        try:
            if parts[0] == "diagram" and len(parts) == 2:
                name = parts[1]
            elif parts[0] == "window" and len(parts) == 3:
                window = (int(parts[1]), int(parts[2]))
            elif parts[0] == "cell" and len(parts) == 2:
                cells.add(int(parts[1]))
            elif parts[0] == "sq" and len(parts) == 4:
                lines.add(tuple(int(p) for p in parts[1:]))
            else:
                raise ValueError
        except ValueError:
            raise FixtureError(f"line {k}: cannot parse {raw!r}") from None
    if name is None or window is None:
        raise FixtureError("diagram needs a name and a window")
    for g, a, b in lines:
        if a not in cells or b not in cells or b - a != g:
            raise FixtureError(f"Sq^{g} line {a} -> {b} does not join two cells {g} apart")
    return CellDiagram(name, window, cells, lines, notes)


def load_diagram(name: str) -> CellDiagram:
    if name not in DIAGRAMS:
        raise KeyError(f"no cell diagram {name!r}")
    return parse_cell_diagram(_read(f"{name}.cells"))


def diagram_of(m: FpModule, window: Tuple[int, int], name: str = "") -> CellDiagram:
    """Cells and ``Sq^(2^k)`` lines of ``m`` with both ends inside ``window``."""
    lo, hi = window
    cells = set()
    for d in range(lo, hi + 1):
        n = len(m.in_degree(d))
        if n > 1:
            raise FixtureError(f"degree {d} has {n} cells; diagrams need at most one per degree")
        if n:
            cells.add(d)
    lines = set()
    for g, rows in m.action.items():
        for i, row in enumerate(rows):
            a = m.degrees[i]
            if not lo <= a <= hi - g:
                continue
            for j in iter_bits(row):
                lines.add((g, a, m.degrees[j]))
    return CellDiagram(name, window, cells, lines)


def compare_diagrams(computed: CellDiagram, fixture: CellDiagram) -> List[str]:
    out = []
    for d in sorted(computed.cells ^ fixture.cells):
        where = "computed" if d in computed.cells else "fixture"
        out.append(f"cell in degree {d} only in the {where} diagram")
    for g, a, b in sorted(computed.lines ^ fixture.lines):
        where = "computed" if (g, a, b) in computed.lines else "fixture"
        out.append(f"Sq^{g} line {a} -> {b} only in the {where} diagram")
    return out


def check_module_diagram(m: FpModule, name: str) -> List[str]:
    fixture = load_diagram(name)
    return compare_diagrams(diagram_of(m, fixture.window, name), fixture)


def fixture_summary() -> Dict[str, str]:
    """First provenance note of each stored fixture."""
    out = {}
    for name in CHARTS:
        fx = load_chart(name)
        out[name] = fx.notes[0] if fx.notes else ""
    for name in DIAGRAMS:
        d = load_diagram(name)
        out[name] = d.notes[0] if d.notes else ""
    return out
