"""Sweep random admissible scaling masks through both extension methods.

For every (p, n, r) cell this records the worst unitarity deviation of the
plain Householder completion and of randomly rotated completions, and
writes one CSV row per cell.

    python3 scripts/extension_sweep.py --trials 50 --out sweep.csv
"""

import argparse
import csv
import time
from dataclasses import dataclass, field

import numpy as np

from wframe.extension import extend_algorithm_a, extend_theorem2, random_unitary_e1, verify_uep
from wframe.masks import generate_mask, random_boundary


@dataclass
class SweepConfig:
    bases: list[int] = field(default_factory=lambda: [2, 3, 5])
    orders: list[int] = field(default_factory=lambda: [1, 2, 3])
    extra: list[int] = field(default_factory=lambda: [0, 1, 2])  # r = p - 1 + extra
    trials: int = 20
    seed: int = 0
    slack: str = "deterministic"
    tight: bool = False


def run(cfg: SweepConfig):
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for p in cfg.bases:
        for n in cfg.orders:
            for extra in cfg.extra:
                r = p - 1 + extra
                # r = p - 1 only works when every polyphase row has unit norm
                tight = cfg.tight or extra == 0
                worst_a = worst_v = 0.0
                t0 = time.perf_counter()
                for _ in range(cfg.trials):
                    m0 = generate_mask(random_boundary(p, n, rng, tight=tight), p)
                    worst_a = max(worst_a, verify_uep(extend_algorithm_a(m0, r, cfg.slack, rng)).max_dev)
                    V = [random_unitary_e1(r, rng) for _ in range(p ** (n - 1))]
                    worst_v = max(worst_v, verify_uep(extend_theorem2(m0, r, V, cfg.slack, rng)).max_dev)
                dt = (time.perf_counter() - t0) / cfg.trials
                rows.append({"p": p, "n": n, "r": r, "tight": tight, "max_dev_a": worst_a, "max_dev_rotated": worst_v, "sec_per_trial": dt})
                print(f"p={p} n={n} r={r}: algorithm A {worst_a:.2e}, rotated {worst_v:.2e}, {dt * 1e3:.1f} ms/trial")
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--slack", choices=["deterministic", "random"], default="deterministic")
    ap.add_argument("--tight", action="store_true")
    ap.add_argument("--out", help="CSV output path")
    args = ap.parse_args(argv)
    cfg = SweepConfig(trials=args.trials, seed=args.seed, slack=args.slack, tight=args.tight)
    rows = run(cfg)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    main()
