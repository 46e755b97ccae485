"""Ext charts: storage, text and SVG rendering, fixture files and diffs.

Charts are indexed by ``(s, t)`` internally and drawn with ``x = t - s``
(the stem) and ``y = s``.  A class is ``(s, t, i)`` with ``i`` its position
among the classes of that bidegree; structure lines join classes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

Class = Tuple[int, int, int]
Line = Tuple[Class, Class]


@dataclass
class ExtChart:
    dims: Dict[Tuple[int, int], int]
    s_max: int
    t_max: int
    h0: Set[Line] = field(default_factory=set)
    h1: Set[Line] = field(default_factory=set)
    untrusted: Set[Tuple[int, int]] = field(default_factory=set)
    name: str = ""

    def dim(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    def stem_dim(self, stem: int, s: int) -> int:
        return self.dims.get((s, stem + s), 0)

    def covers(self, s: int, t: int) -> bool:
        return 0 <= s <= self.s_max and t <= self.t_max

    def trusted(self, s: int, t: int) -> bool:
        return self.covers(s, t) and (s, t) not in self.untrusted

    def stems(self) -> Tuple[int, int]:
        xs = [t - s for (s, t), n in self.dims.items() if n]
        return (min(xs), max(xs)) if xs else (0, 0)

    def line_sources(self, kind: str) -> Set[Tuple[int, int]]:
        """Bidegrees ``(stem, s)`` from which at least one line of the given kind starts."""
        lines = self.h0 if kind == "h0" else self.h1
        return {(a[1] - a[0], a[0]) for a, _ in lines}

    def nonzero(self) -> Dict[Tuple[int, int], int]:
        return {k: v for k, v in sorted(self.dims.items()) if v}

    # -- json -----------------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "name": self.name,
            "window": {"s_max": self.s_max, "t_max": self.t_max},
            "dims": [[s, t, n] for (s, t), n in sorted(self.dims.items()) if n],
            "h0": sorted([list(a) + list(b) for a, b in self.h0]),
            "h1": sorted([list(a) + list(b) for a, b in self.h1]),
            "untrusted": sorted([list(x) for x in self.untrusted]),
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExtChart":
        doc = json.loads(text)
        return cls(
            dims={(s, t): n for s, t, n in doc["dims"]},
            s_max=doc["window"]["s_max"],
            t_max=doc["window"]["t_max"],
            h0={(tuple(x[:3]), tuple(x[3:])) for x in doc.get("h0", [])},
            h1={(tuple(x[:3]), tuple(x[3:])) for x in doc.get("h1", [])},
            untrusted={tuple(x) for x in doc.get("untrusted", [])},
            name=doc.get("name", ""),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtChart):
            return NotImplemented
        return (
            self.nonzero() == other.nonzero()
            and (self.s_max, self.t_max) == (other.s_max, other.t_max)
            and self.h0 == other.h0
            and self.h1 == other.h1
            and self.untrusted == other.untrusted
        )


def shifted(chart: ExtChart, k: int) -> ExtChart:
    """The chart of a module suspended by ``k``: every class moves from ``t`` to ``t + k``."""
    mv = lambda c: (c[0], c[1] + k, c[2])
    return ExtChart(
        {(s, t + k): n for (s, t), n in chart.dims.items()},
        chart.s_max,
        chart.t_max + k,
        {(mv(a), mv(b)) for a, b in chart.h0},
        {(mv(a), mv(b)) for a, b in chart.h1},
        {(s, t + k) for s, t in chart.untrusted},
        chart.name,
    )


@dataclass(frozen=True)
class Tower:
    """A class at ``(stem, s)`` whose h0-powers die after ``length`` steps (``h0^length x = 0``)."""

    stem: int
    s: int
    length: int


def finite_towers(chart: ExtChart, stem_lo: int, stem_hi: int, min_length: int = 2) -> List[Tower]:
    """Classes starting h0-towers of at least ``min_length`` dots that end inside the trusted region.

    Multiplication by h0 is read from the chart's h0 lines as a matrix.  A
    tower counts only if every bidegree it visits, including the first one
    where the power vanishes, is trusted; towers still alive at the top of
    the chart are treated as possibly infinite and left out.
    """
    step: Dict[Class, Set[Class]] = {}
    for a, b in chart.h0:
        step.setdefault(a, set()).add(b)
    out = []
    for stem in range(stem_lo, stem_hi + 1):
        for s in range(chart.s_max + 1):
            t = stem + s
            if not chart.trusted(s, t):
                continue
            for i in range(chart.dim(s, t)):
                vec = {(s, t, i)}
                k = 0
                while vec:
                    nxt: Set[Class] = set()
                    for x in vec:
                        nxt ^= step.get(x, set())
                    k += 1
                    if not chart.trusted(s + k, t + k):
                        break
                    vec = nxt
                if not vec and k >= min_length:
                    out.append(Tower(stem, s, k))
    return out


# -- fixtures ---------------------------------------------------------------


@dataclass
class ChartFixture:
    """A chart transcribed by hand from a published figure."""

    name: str
    window: Tuple[int, int, int]  # stem_lo, stem_hi, s_max
    dims: Dict[Tuple[int, int], int] = field(default_factory=dict)  # (stem, s) -> count
    h0: Set[Tuple[int, int]] = field(default_factory=set)  # line sources (stem, s)
    h1: Set[Tuple[int, int]] = field(default_factory=set)
    notes: List[str] = field(default_factory=list)

    def dim(self, stem: int, s: int) -> int:
        return self.dims.get((stem, s), 0)

    def in_window(self, stem: int, s: int) -> bool:
        lo, hi, smax = self.window
        return lo <= stem <= hi and 0 <= s <= smax

    @property
    def has_lines(self) -> bool:
        return bool(self.h0 or self.h1)

    def to_text(self) -> str:
        lines = [f"# {n}" for n in self.notes]
        lines.append(f"fig {self.name}")
        lines.append("window {} {} {}".format(*self.window))
        for (stem, s), n in sorted(self.dims.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            if n:
                lines.append(f"dot {stem} {s}" + (f" {n}" if n != 1 else ""))
        for kind, srcs in (("h0", self.h0), ("h1", self.h1)):
            for stem, s in sorted(srcs, key=lambda x: (x[1], x[0])):
                lines.append(f"line {kind} {stem} {s}")
        return "\n".join(lines) + "\n"


class FixtureError(ValueError):
    pass


def parse_fixture(text: str) -> ChartFixture:
    name, window = None, None
    dims: Dict[Tuple[int, int], int] = {}
    h0, h1, notes = set(), set(), []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            notes.append(line[1:].strip())
            continue
        tok = line.split()
        try:
            if tok[0] == "fig":
                name = " ".join(tok[1:])
            elif tok[0] == "window":
                window = (int(tok[1]), int(tok[2]), int(tok[3]))
            elif tok[0] == "dot":
                n = int(tok[3]) if len(tok) > 3 else 1
                if n < 0:
                    raise FixtureError(f"negative count in {line!r}")
                key = (int(tok[1]), int(tok[2]))
                dims[key] = dims.get(key, 0) + n
            elif tok[0] == "line":
                key = (int(tok[2]), int(tok[3]))
                if tok[1] == "h0":
                    h0.add(key)
                elif tok[1] == "h1":
                    h1.add(key)
                else:
                    raise FixtureError(f"unknown line kind in {line!r}")
            else:
                raise FixtureError(f"unknown directive in {line!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, FixtureError):
                raise
            raise FixtureError(f"malformed line {line!r}") from exc
    if name is None or window is None:
        raise FixtureError("fixture needs 'fig' and 'window' lines")
    fx = ChartFixture(name, window, dims, h0, h1, notes)
    for stem, s in list(dims) + list(h0) + list(h1):
        if not fx.in_window(stem, s):
            raise FixtureError(f"entry at stem {stem}, s {s} lies outside the window")
    return fx


def fixture_from_chart(chart: ExtChart, name: str, window: Tuple[int, int, int], lines: bool = True) -> ChartFixture:
    lo, hi, smax = window
    dims = {(t - s, s): n for (s, t), n in chart.dims.items() if n and lo <= t - s <= hi and s <= smax}
    fx = ChartFixture(name, window, dims)
    if lines:
        for kind, target in (("h0", fx.h0), ("h1", fx.h1)):
            for stem, s in chart.line_sources(kind):
                dst = (stem, s + 1) if kind == "h0" else (stem + 1, s + 1)
                if fx.in_window(stem, s) and fx.in_window(*dst):
                    target.add((stem, s))
    return fx


@dataclass
class DiffReport:
    mismatches: List[str]
    skipped: List[Tuple[int, int]]  # (stem, s) not covered or not trusted
    compared: int
    dim_mismatches: List[Tuple[int, int]] = field(default_factory=list)  # (stem, s)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __str__(self) -> str:
        out = list(self.mismatches)
        if self.skipped:
            out.append(f"({len(self.skipped)} bidegrees outside the trusted range were skipped)")
        return "\n".join(out) if out else f"match ({self.compared} bidegrees compared)"


def diff(chart: ExtChart, fixture: ChartFixture, lines: bool = True) -> DiffReport:
    """Every bidegree of the fixture window where the chart disagrees.

    Bidegrees the chart does not cover, or does not trust, are listed as
    skipped rather than compared.  Lines are compared (as sets of line
    sources whose endpoints both lie in the window) only when the fixture
    records any.
    """
    lo, hi, smax = fixture.window
    mismatches, skipped, dims_off = [], [], []
    compared = 0
    for s in range(smax + 1):
        for stem in range(lo, hi + 1):
            t = stem + s
            if not chart.trusted(s, t):
                skipped.append((stem, s))
                continue
            compared += 1
            a, b = chart.dim(s, t), fixture.dim(stem, s)
            if a != b:
                mismatches.append(f"stem {stem}, s {s}: computed {a}, fixture {b}")
                dims_off.append((stem, s))
    if lines and fixture.has_lines:
        skip = set(skipped)
        for kind, fx_lines in (("h0", fixture.h0), ("h1", fixture.h1)):
            step = (0, 1) if kind == "h0" else (1, 1)
            ours = chart.line_sources(kind)
            for stem in range(lo, hi + 1):
                for s in range(smax + 1):
                    dst = (stem + step[0], s + step[1])
                    if not fixture.in_window(*dst) or (stem, s) in skip or dst in skip:
                        continue
                    a, b = (stem, s) in ours, (stem, s) in fx_lines
                    if a != b:
                        which = "computed only" if a else "fixture only"
                        mismatches.append(f"{kind} line from stem {stem}, s {s}: {which}")
    return DiffReport(mismatches, skipped, compared, dims_off)


# -- rendering --------------------------------------------------------------


def _digit(n: int) -> str:
    if n == 0:
        return "."
    if n < 10:
        return str(n)
    if n < 36:
        return chr(ord("a") + n - 10)
    return "*"


def render_text(chart: ExtChart, stem_lo: Optional[int] = None, stem_hi: Optional[int] = None, s_max: Optional[int] = None) -> str:
    """One row per filtration ``s`` (top row first), one character per stem.

    ``.`` is zero, digits and letters give counts, ``?`` marks bidegrees
    outside the trusted range.
    """
    lo0, hi0 = chart.stems()
    lo = lo0 if stem_lo is None else stem_lo
    hi = hi0 if stem_hi is None else stem_hi
    smax = chart.s_max if s_max is None else s_max
    width = len(str(smax))
    rows = []
    for s in range(smax, -1, -1):
        cells = []
        for stem in range(lo, hi + 1):
            t = stem + s
            cells.append(_digit(chart.dim(s, t)) if chart.trusted(s, t) else "?")
        rows.append(f"{s:>{width}} |" + "".join(cells))
    rows.append(" " * width + " +" + "-" * (hi - lo + 1))
    marks = "".join("|" if stem % 4 == 0 else " " for stem in range(lo, hi + 1))
    rows.append(" " * width + "  " + marks.rstrip())
    rows.append(" " * width + f"  stems {lo}..{hi}")
    return "\n".join(rows) + "\n"


CELL = 24
MARGIN = 32
DOT_R = 3
SPREAD = 6


def _class_xy(c: Class, counts: Dict[Tuple[int, int], int], lo: int, height: int) -> Tuple[float, float]:
    s, t, i = c
    n = counts.get((s, t), 1)
    x = MARGIN + (t - s - lo) * CELL + (i - (n - 1) / 2) * SPREAD
    y = height - MARGIN - s * CELL
    return x, y


def _fmt(v: float) -> str:
    return f"{v:.1f}".rstrip("0").rstrip(".")


def render_svg(chart: ExtChart, stem_lo: Optional[int] = None, stem_hi: Optional[int] = None, s_max: Optional[int] = None) -> str:
    """SVG with dots at lattice points, vertical h0 segments and slope-one h1 segments."""
    lo0, hi0 = chart.stems()
    lo = lo0 if stem_lo is None else stem_lo
    hi = hi0 if stem_hi is None else stem_hi
    smax = chart.s_max if s_max is None else s_max
    width = 2 * MARGIN + (hi - lo) * CELL
    height = 2 * MARGIN + smax * CELL

    def visible(c: Class) -> bool:
        return lo <= c[1] - c[0] <= hi and 0 <= c[0] <= smax

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    for stem in range(lo, hi + 1):
        x = MARGIN + (stem - lo) * CELL
        out.append(f'<line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{height - MARGIN}" stroke="#eee"/>')
        if stem % 2 == 0:
            out.append(f'<text x="{x}" y="{height - MARGIN + 16}" font-size="9" text-anchor="middle">{stem}</text>')
    for s in range(smax + 1):
        y = height - MARGIN - s * CELL
        out.append(f'<line x1="{MARGIN}" y1="{y}" x2="{width - MARGIN}" y2="{y}" stroke="#eee"/>')
        out.append(f'<text x="{MARGIN - 10}" y="{y + 3}" font-size="9" text-anchor="end">{s}</text>')
    for s, t in sorted(chart.untrusted):
        if lo <= t - s <= hi and s <= smax:
            x = MARGIN + (t - s - lo) * CELL
            y = height - MARGIN - s * CELL
            out.append(f'<rect x="{x - CELL / 2}" y="{y - CELL / 2}" width="{CELL}" height="{CELL}" fill="#f4f4f4"/>')
    for kind, lines, colour in (("h0", chart.h0, "black"), ("h1", chart.h1, "black")):
        for a, b in sorted(lines):
            if not (visible(a) and visible(b)):
                continue
            x1, y1 = _class_xy(a, chart.dims, lo, height)
            x2, y2 = _class_xy(b, chart.dims, lo, height)
            out.append(
                f'<line class="{kind}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" stroke="{colour}"/>'
            )
    for (s, t), n in sorted(chart.dims.items()):
        for i in range(n):
            c = (s, t, i)
            if not visible(c):
                continue
            x, y = _class_xy(c, chart.dims, lo, height)
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{DOT_R}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
