#!/usr/bin/env python3
"""Recompute every stored chart, diff it against its fixture, and render text and SVG copies."""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from sqext.charts import diff, render_svg, render_text
from sqext.fixtures import CHARTS, load_chart
from sqext.verify import KNOWN_FIXTURE_DISAGREEMENTS, chart_for_fixture


@dataclass
class FigureConfig:
    out_dir: Path = Path("figures")
    threads: int = 1


def main(cfg: FigureConfig) -> int:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name in CHARTS:
        start = time.perf_counter()
        fx = load_chart(name)
        chart = chart_for_fixture(name, cfg.threads)
        lo, hi, s_max = fx.window
        (cfg.out_dir / f"{name}.txt").write_text(render_text(chart, lo, hi, s_max) + "\n")
        (cfg.out_dir / f"{name}.svg").write_text(render_svg(chart, lo, hi, s_max))
        rep = diff(chart, fx)
        known = KNOWN_FIXTURE_DISAGREEMENTS.get(name, set())
        ok = set(rep.dim_mismatches) == known and len(rep.mismatches) == len(known)
        failures += not ok
        status = "match" if rep.ok else ("known disagreement" if ok else "MISMATCH")
        print(f"{name:16s} {status:20s} {time.perf_counter() - start:6.2f}s  {str(rep).splitlines()[0]}")
    return 1 if failures else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", type=Path, default=FigureConfig.out_dir)
    p.add_argument("--threads", type=int, default=1)
    a = p.parse_args()
    raise SystemExit(main(FigureConfig(a.out_dir, a.threads)))
