"""Command-line front end: ``tsynth synth``, ``tsynth budget``, ``tsynth sweep``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from .budget import RULES, ErrorBudget, qft_budget
from .circuit import CircuitFormatError
from .matrix import NotUnitaryError
from .search import BudgetExceeded, DEFAULT_M_MAX, EpsilonRegimeError, SearchConfig, SearchStats, min_resource
from .targets import CONVENTIONS, MatrixFormatError, TargetSpec, load_matrix, theta_grid

EXIT_OK = 0
EXIT_USAGE = 2  # bad flags or unparsable input files
EXIT_BUDGET = 3  # no decomposition within --max-m
EXIT_REGIME = 4  # epsilon too large for the amplitude test
EXIT_INPUT = 5  # non-unitary matrix or unsupported flag combination

RZ_SLOPE, RZ_OFFSET, CRZ_OFFSET = 3.067, -4.322, 2.678


def rz_baseline(eps: float) -> float:
    """Empirical T-count of a single-qubit z-rotation at distance eps."""
    return RZ_SLOPE * math.log2(1 / eps) + RZ_OFFSET


def crz_baseline(eps: float) -> float:
    """The corresponding upper estimate for the controlled rotation."""
    return RZ_SLOPE * math.log2(1 / eps) + CRZ_OFFSET


@dataclass
class RunReport:
    target: str
    n: int
    mode: str
    acceptance: str
    epsilon: float
    m: int
    generator_indices: list[int]
    generator_labels: list[str]
    achieved_distance: float | None
    t_count: int | None
    t_depth: int | None
    circuit_path: str | None
    baselines: dict[str, float] = field(default_factory=dict)
    # wall time, threads and visit counts vary between runs; only with --timing
    run: dict[str, float] | None = None

    def to_json(self) -> str:
        data = {k: v for k, v in asdict(self).items() if not (k == "run" and v is None)}
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _atomic_write(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_target(args) -> TargetSpec:
    if args.matrix:
        return load_matrix(args.matrix)
    return TargetSpec.builtin(args.builtin, theta=args.theta, n=args.n, convention=args.convention)


def _baselines(name: str | None, eps: float) -> dict[str, float]:
    if name != "crz":
        return {}
    return {"rz_tcount_estimate": rz_baseline(eps), "crz_tcount_bound": crz_baseline(eps)}


def run_synthesis(args) -> int:
    target = _resolve_target(args)
    cfg = SearchConfig(mode=args.mode, epsilon=args.epsilon, m_max=args.max_m,
                       threads=args.threads, acceptance=args.acceptance)
    cfg.generators_for(target.n)  # fail fast on unsupported mode/size combinations
    stats = SearchStats()
    t0 = time.perf_counter()
    result = min_resource(target.matrix, cfg, stats)
    wall = time.perf_counter() - t0

    circ = result.circuit
    if args.out_circuit and circ is not None:
        _atomic_write(args.out_circuit, circ.to_text())
    dist = result.achieved_distance
    report = RunReport(
        target=target.description,
        n=target.n,
        mode=cfg.mode,
        acceptance=cfg.acceptance,
        epsilon=cfg.epsilon,
        m=result.m,
        generator_indices=[int(i) for i in result.generator_indices],
        generator_labels=result.labels,
        achieved_distance=None if math.isnan(dist) else round(dist, 15),
        t_count=None if circ is None else circ.t_count,
        t_depth=None if circ is None else circ.t_depth,
        circuit_path=args.out_circuit if circ is not None else None,
        baselines=_baselines(None if args.matrix else args.builtin, cfg.epsilon),
        run={"wall_time_s": wall, "threads": cfg.threads, "candidates_visited": stats.visited} if args.timing else None,
    )
    text = report.to_json()
    if args.out_json:
        _atomic_write(args.out_json, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def run_budget(args) -> int:
    if args.qft_n is not None:
        if args.eps_r is None:
            raise ValueError("--qft-n needs --eps-r")
        n_r, eps = qft_budget(args.qft_n, args.eps_r)
        print(f"N_R = {n_r}")
        print(f"epsilon = {eps:.6f}")
        if args.tcount_avg is not None:
            print(f"estimated T-count = {n_r * args.tcount_avg:g}")
        return EXIT_OK
    if args.list is None:
        raise ValueError("give either --qft-n/--eps-r or --list")
    eps_list = [float(v) for v in args.list.split(",") if v.strip()]
    budget = ErrorBudget(eps_list, rule=args.rule)
    print(f"epsilon = {budget.composed_epsilon:.6f}")
    if args.tcount_avg is not None:
        print(f"estimated T-count = {len(eps_list) * args.tcount_avg:g}")
    return EXIT_OK


def run_sweep(args) -> int:
    cfg = SearchConfig(mode=args.mode, epsilon=args.epsilon, m_max=args.max_m,
                       threads=args.threads, acceptance=args.acceptance)
    thetas = [float(t) for t in args.theta] if args.theta else list(theta_grid())
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    ms = []
    try:
        writer = csv.writer(out)
        writer.writerow(["theta", "m", "wall_ms"])
        for theta in thetas:
            target = TargetSpec.builtin(args.family, theta=theta)
            t0 = time.perf_counter()
            try:
                m = min_resource(target.matrix, cfg).m
            except BudgetExceeded:
                m = -1
            wall_ms = (time.perf_counter() - t0) * 1000
            writer.writerow([repr(theta), m, f"{wall_ms:.1f}"])
            out.flush()
            ms.append(m)
    finally:
        if out is not sys.stdout:
            out.close()
    done = [m for m in ms if m >= 0]
    failed = len(ms) - len(done)
    avg = sum(done) / len(done) if done else float("nan")
    print(f"average m = {avg:.3f} over {len(done)} points ({failed} exceeded m_max = {cfg.m_max})", file=sys.stderr)
    return EXIT_OK


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--mode", choices=("count", "depth"), default="count")
    p.add_argument("--max-m", type=int, default=DEFAULT_M_MAX)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--acceptance", choices=("certified", "amplitude"), default="certified",
                   help="'amplitude' accepts on the amplitude test alone (diagnostic)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsynth", description="eps-T-count / eps-T-depth optimal synthesis")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="synthesize one target")
    src = synth.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=("crz", "givens", "qft"))
    src.add_argument("--matrix", metavar="PATH")
    synth.add_argument("--theta", type=float)
    synth.add_argument("--n", type=int)
    synth.add_argument("--convention", choices=CONVENTIONS, default="swap")
    _add_search_flags(synth)
    synth.add_argument("--out-circuit", metavar="PATH")
    synth.add_argument("--out-json", metavar="PATH")
    synth.add_argument("--timing", action="store_true", help="add wall time and visit counts to the report")
    synth.set_defaults(func=run_synthesis)

    budget = sub.add_parser("budget", help="compose per-block errors")
    budget.add_argument("--qft-n", type=int)
    budget.add_argument("--eps-r", type=float)
    budget.add_argument("--list", help="comma-separated block epsilons")
    budget.add_argument("--rule", choices=RULES, default="sequence")
    budget.add_argument("--tcount-avg", type=float, help="average T-count per block for a total estimate")
    budget.set_defaults(func=run_budget)

    sweep = sub.add_parser("sweep", help="eps-T-count over the theta grid 2 pi k / 1000")
    sweep.add_argument("--family", choices=("crz", "givens"), default="crz")
    sweep.add_argument("--theta", type=float, nargs="+", help="explicit angles instead of the default grid")
    _add_search_flags(sweep)
    sweep.add_argument("--out", metavar="CSV")
    sweep.set_defaults(func=run_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except EpsilonRegimeError as exc:
        print(f"error: --epsilon {args.epsilon}: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except BudgetExceeded as exc:
        print(f"error: --max-m {exc.m_max}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (MatrixFormatError, CircuitFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotUnitaryError as exc:
        print(f"error: {getattr(args, 'matrix', None) or 'target'}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
