"""eps-T-count of cRz(theta) and G(theta) over theta = 2 pi k / 1000, k = 1, 51, ..., 951.

Writes one CSV per (family, eps, acceptance) under --out and prints the
average m per row. Points that need more than --max-m generators are
written as m = -1 and left out of the average.

    python3 scripts/crz_sweep.py --eps 1e-2 --max-m 6
    python3 scripts/crz_sweep.py --eps 1e-2 --acceptance amplitude
"""

import argparse
import csv
import time
from pathlib import Path

import numpy as np

from tsynth.cli import crz_baseline, rz_baseline
from tsynth.search import BudgetExceeded, SearchConfig, min_resource
from tsynth.targets import crz, givens, theta_grid

FAMILIES = {"crz": crz, "givens": givens}


def sweep(family, eps, cfg):
    rows = []
    for theta in theta_grid():
        t0 = time.perf_counter()
        try:
            res = min_resource(FAMILIES[family](theta), cfg)
            m, dist = res.m, res.achieved_distance
        except BudgetExceeded:
            m, dist = -1, float("nan")
        rows.append((float(theta), m, dist, (time.perf_counter() - t0) * 1000))
        print(f"  {family} theta={theta:.4f} m={m} d={dist:.3g}", flush=True)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", type=float, nargs="+", default=[1e-2])
    ap.add_argument("--family", choices=sorted(FAMILIES), nargs="+", default=["crz"])
    ap.add_argument("--acceptance", choices=("certified", "amplitude"), default="certified")
    ap.add_argument("--max-m", type=int, default=6)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    summary = []
    for family in args.family:
        for eps in args.eps:
            cfg = SearchConfig(epsilon=eps, m_max=args.max_m, threads=args.threads, acceptance=args.acceptance)
            rows = sweep(family, eps, cfg)
            path = args.out / f"{family}_eps{eps:g}_{args.acceptance}.csv"
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["theta", "m", "distance", "wall_ms"])
                w.writerows(rows)
            ms = [r[1] for r in rows if r[1] >= 0]
            summary.append((family, eps, np.mean(ms) if ms else float("nan"), len(rows) - len(ms)))

    print(f"\n{'family':8} {'eps':>8} {'avg m':>7} {'> max-m':>8} {'Rz est.':>8} {'cRz bound':>9}")
    for family, eps, avg, over in summary:
        print(f"{family:8} {eps:8.0e} {avg:7.2f} {over:8d} {rz_baseline(eps):8.2f} {crz_baseline(eps):9.2f}")


if __name__ == "__main__":
    main()
