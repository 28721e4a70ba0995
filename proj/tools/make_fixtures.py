#!/usr/bin/env python3
"""Writes the synthetic sample inputs under data/.

data/minute/<index>_<date>_<preclose|postopen>.csv: 30 minute bars per session
whose MA(10) windows around the close/open boundary give the index gaps below.
data/macro_panel.csv: synthetic 2016Q1-2023Q4 quarterly panel.
"""

import argparse
import random
from pathlib import Path

GAPS = {"CSI300": 0.001721, "ChiNext": 0.002463, "50ETF": 0.000435}
LEVELS = {"CSI300": 3078.6, "ChiNext": 2053.3, "50ETF": 2.043}
CONTROLS = ["shibor_3m", "m2_growth", "dollar_index", "usdcny"]
DEP_VARS = ["gdp", "labor_productivity", "tech_expenditure", "mfg_fai_growth",
            "gov_consumption_gdp", "industry_va_gdp"]


def write_sessions(out: Path, index: str, gap: float, level: float) -> None:
    pre = [level * (0.997 + 0.0001 * i) for i in range(20)]
    pre += [level * (1 + (0.0002 if i % 2 == 0 else -0.0002)) for i in range(10)]
    opening = level * (1 + gap)
    post = [opening * (1 + (0.0003 if i % 2 == 0 else -0.0003)) for i in range(10)]
    post += [opening * (1.001 + 0.0001 * i) for i in range(20)]
    with open(out / f"{index}_2016-05-19_preclose.csv", "w") as f:
        f.write("timestamp,price\n")
        for i, p in enumerate(pre):
            f.write(f"2016-05-19T14:{30 + i:02d},{p!r}\n")
    with open(out / f"{index}_2016-05-20_postopen.csv", "w") as f:
        f.write("timestamp,price\n")
        for i, p in enumerate(post):
            f.write(f"2016-05-20T{9 + (30 + i) // 60:02d}:{(30 + i) % 60:02d},{p!r}\n")


def write_panel(path: Path, seed: int) -> None:
    rng = random.Random(seed)
    quarters = [f"{y}Q{q}" for y in range(2016, 2024) for q in range(1, 5)]
    cols = {}
    for name, start in zip(CONTROLS, [2.8, 12.0, 95.0, 6.5]):
        x = [start]
        for _ in quarters[1:]:
            x.append(x[-1] + 0.1 * rng.gauss(0, 1))
        cols[name] = x
    for j, name in enumerate(DEP_VARS):
        y = [5.0 + j]
        for t in range(1, len(quarters)):
            bump = 0.06 * (j + 1) if 2 <= t <= 5 else 0.0
            y.append(y[-1] + 0.02 + bump + 0.05 * rng.gauss(0, 1))
        cols[name] = y
    with open(path, "w") as f:
        f.write("quarter," + ",".join(cols) + "\n")
        for t, q in enumerate(quarters):
            f.write(q + "," + ",".join(f"{cols[c][t]:.6f}" for c in cols) + "\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--seed", type=int, default=20160519)
    args = ap.parse_args()
    minute = args.out / "minute"
    minute.mkdir(parents=True, exist_ok=True)
    for index, gap in GAPS.items():
        write_sessions(minute, index, gap, LEVELS[index])
    write_panel(args.out / "macro_panel.csv", args.seed)


if __name__ == "__main__":
    main()
