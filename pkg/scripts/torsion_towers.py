#!/usr/bin/env python3
"""Finite h0-towers in Ext_A(1)(F2, A//A(1)) by stem, from the truncated model A:<top>//A(1).

A larger ``--top`` trusts more of the chart (bidegrees with t >= 3(s+1) - top),
so negative stems further down become visible.
"""

import argparse
from collections import defaultdict
from dataclasses import dataclass

from sqext.verify import torsion_tower_analysis


@dataclass
class TowerConfig:
    top: int = 60
    s_max: int = 14
    stem_lo: int = -24
    stem_hi: int = 14


def main(cfg: TowerConfig) -> None:
    _, towers = torsion_tower_analysis(cfg.top, cfg.s_max, cfg.stem_lo, cfg.stem_hi)
    by_stem = defaultdict(list)
    for tw in towers:
        by_stem[tw.stem].append(tw)
    print(f"A:{cfg.top}//A(1), s <= {cfg.s_max}, stems {cfg.stem_lo}..{cfg.stem_hi}")
    for stem in sorted(by_stem):
        longest = max(by_stem[stem], key=lambda tw: tw.length)
        print(f"stem {stem:4d} (mod 8 = {stem % 8}): longest finite tower has {longest.length} dots, from s = {longest.s}")
    if not by_stem:
        print("no finite towers in the trusted range")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for f, v in TowerConfig().__dict__.items():
        p.add_argument("--" + f.replace("_", "-"), type=int, default=v)
    a = p.parse_args()
    main(TowerConfig(a.top, a.s_max, a.stem_lo, a.stem_hi))
