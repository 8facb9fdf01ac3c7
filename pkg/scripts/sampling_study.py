"""Test F1 with exact RDMs versus 200-shot RDMs over 16 tomography seeds, at r = 0.2.

    python3 scripts/sampling_study.py --out results/sampling

The subsample and split stay fixed; only the tomography streams change, so the
spread measures finite-sampling noise alone.  The 10-fold CV spread is printed
next to it for scale.
"""
import argparse

from qocsvm.harness import ExperimentConfig, cmd_crossval, load_records, sampling_study


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results/sampling")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--seeds", type=int, default=16)
    ap.add_argument("--shots", type=int, default=200)
    args = ap.parse_args()
    cfg = ExperimentConfig(out=args.out, seed=args.seed, shots=args.shots, synth_normal=4000)
    records = load_records(cfg)
    summary = sampling_study(cfg, args.seeds, records).extra["summary"]
    cv = cmd_crossval(cfg.replace(variants=("cx", "ecr", "rxx")), records).extra["distributions"]
    print("model      F1 exact  mean est  sd est  max|diff|  CV sd")
    for model, s in summary.items():
        cv_sd = cv[model.split("-")[1].lower()].sigma
        print(f"{model:10} {s['f1_exact']:8.3f}  {s['f1_mean']:8.3f}  {s['f1_std']:6.3f}  {s['max_abs_diff']:9.3f}  {cv_sd:.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
