"""Tomography error versus shot count for |+> and |T>, noiseless and with drift.

    python3 scripts/tomography_sweep.py --out results/tomography
"""
import argparse

from qocsvm.harness import ExperimentConfig, cmd_tomography


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results/tomography")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=100)
    ap.add_argument("--drift", type=float, default=1e-6, help="depolarizing drift per shot")
    args = ap.parse_args()
    cfg = ExperimentConfig(out=args.out, seed=args.seed, repeats=args.repeats, sweep_drift_rate=args.drift)
    res = cmd_tomography(cfg)
    print("state mode       shots    mean_d    std_d")
    for state, mode, shots, m, sd in res.rows:
        print(f"{state:5} {mode:9} {shots:7d} {m:9.5f} {sd:8.5f}")
    for key, slope in res.extra["slopes"].items():
        print(f"log-log slope {key}: {slope:.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
