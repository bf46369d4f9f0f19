"""Exact Parseval energies and tail energies for random step signals.

Builds a few verified families, analyzes random step signals against each,
and reports the relative energy error, the largest telescoping residual and
the tail-energy profile E_j.  The tail table is written as CSV for plotting.

    python3 scripts/parseval_sweep.py --signals 20 --tail-csv tails.csv
"""

import argparse
import csv
from dataclasses import dataclass

import numpy as np

from wframe.extension import extend_algorithm_a, verify_uep
from wframe.frames import analyze, approx_order_report, parseval_check, random_step
from wframe.masks import generate_mask, random_boundary


@dataclass
class ParsevalConfig:
    signals: int = 20
    max_exponent: int = 3
    seed: int = 0
    j_min: int = -1


def families(rng):
    specs = [(2, 1, 1, [1, 0]), (2, 2, 2, [1, 0.5, 0, 0.5]), (3, 1, 2, [1, 0, 0])]
    out = [(f"p{p}n{n}r{r}-fixed", extend_algorithm_a(generate_mask(b, p), r)) for p, n, r, b in specs]
    for p, n in [(2, 3), (3, 2), (5, 1)]:
        m0 = generate_mask(random_boundary(p, n, rng), p)
        out.append((f"p{p}n{n}r{p + 1}-random", extend_algorithm_a(m0, p + 1)))
    for name, fam in out:
        assert verify_uep(fam).passed, name
    return out


def run(cfg: ParsevalConfig):
    rng = np.random.default_rng(cfg.seed)
    summary, tails = [], []
    for name, fam in families(rng):
        worst_rel = worst_res = 0.0
        for i in range(cfg.signals):
            N = int(rng.integers(0, cfg.max_exponent + 1))
            M = int(rng.integers(0, cfg.max_exponent + 1))
            f = random_step(fam.p, M, N, rng)
            table = analyze(f, fam, cfg.j_min)
            rep = parseval_check(f, fam, cfg.j_min, table=table)
            worst_rel = max(worst_rel, abs(rep.total_wavelet_energy - rep.signal_energy) / rep.signal_energy)
            worst_res = max([worst_res, *rep.telescoping_residuals.values()])
            for j, e, b in approx_order_report(f, fam, cfg.j_min, table=table):
                tails.append({"family": name, "signal": i, "M": M, "N": N, "J": table.J, "j": j, "E_j": e / rep.signal_energy})
        summary.append((name, worst_rel, worst_res))
        print(f"{name:18s} relative energy error {worst_rel:.2e}  telescoping residual {worst_res:.2e}")
    return summary, tails


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--signals", type=int, default=20)
    ap.add_argument("--max-exponent", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--j-min", type=int, default=-1)
    ap.add_argument("--tail-csv", help="write normalized E_j rows here")
    args = ap.parse_args(argv)
    cfg = ParsevalConfig(args.signals, args.max_exponent, args.seed, args.j_min)
    _, tails = run(cfg)
    if args.tail_csv:
        with open(args.tail_csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(tails[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(tails)


if __name__ == "__main__":
    main()
