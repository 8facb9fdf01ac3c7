"""F1 versus anomaly ratio for rbf and the three qrbf variants.

    python3 scripts/run_benchmark.py --out results/benchmark [--quick]

Writes benchmark.csv and a manifest; prints test F1 per (model, r).
"""
import argparse
from collections import defaultdict

from qocsvm.harness import ExperimentConfig, cmd_benchmark


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results/benchmark")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rdm-mode", default="estimated", choices=("exact", "estimated"))
    ap.add_argument("--quick", action="store_true", help="r in {0.2, 0.1} on a small pool")
    args = ap.parse_args()
    cfg = ExperimentConfig(out=args.out, seed=args.seed, rdm_mode=args.rdm_mode)
    if args.quick:
        cfg = cfg.replace(synth_normal=2000, synth_anomalies=200, r_grid=(0.2, 0.1))
    res = cmd_benchmark(cfg)
    table = defaultdict(dict)
    for model, r, part, _, _, f1 in res.rows:
        if part == "test":
            table[model][r] = f1
    print("model      " + " ".join(f"r={r:<6}" for r in cfg.r_grid))
    for model, row in table.items():
        print(f"{model:10} " + " ".join(f"{row.get(r, float('nan')):8.3f}" for r in cfg.r_grid))
    return 0 if res.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
