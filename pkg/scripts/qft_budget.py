"""Error budget for an n-qubit QFT split into n(n-1)/2 controlled rotations.

    python3 scripts/qft_budget.py --n 20 --eps-r 3e-3 --tcount-avg 3.8
"""

import argparse

from tsynth.budget import compose_sequence, qft_budget


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--eps-r", type=float, default=3e-3)
    ap.add_argument("--tcount-avg", type=float, help="average eps-T-count per controlled rotation")
    args = ap.parse_args()

    n_r, eps = qft_budget(args.n, args.eps_r)
    print(f"controlled rotations N_R = {n_r}")
    print(f"composed epsilon        = {eps:.6f}")
    print(f"naive sum N_R * eps_r   = {n_r * args.eps_r:.6f}")
    if args.tcount_avg is not None:
        print(f"estimated T-count       = {n_r * args.tcount_avg:g}")
    # how the estimate grows block by block
    for k in sorted({1, 10, 50, 100, n_r}):
        if k <= n_r:
            print(f"  first {k:4d} blocks -> {compose_sequence([args.eps_r] * k):.6f}")


if __name__ == "__main__":
    main()
