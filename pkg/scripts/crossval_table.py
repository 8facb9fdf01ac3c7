"""10-fold cross-validation at r = 0.2 with outperformance probabilities.

    python3 scripts/crossval_table.py --out results/crossval

The printed reference values come from the published table and are shown for
comparison only; the synthetic data here is not the original dataset.
"""
import argparse

from qocsvm.harness import ExperimentConfig, cmd_crossval
from qocsvm.metrics import ScoreDistribution, outperformance_probability

PUBLISHED = {"rbf": (0.757, 0.062, None), "qrbf-CX": (0.829, 0.043, 0.692),
             "qrbf-ECR": (0.847, 0.059, 0.747), "qrbf-RXX": (0.827, 0.054, 0.648)}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results/crossval")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rdm-mode", default="estimated", choices=("exact", "estimated"))
    args = ap.parse_args()
    cfg = ExperimentConfig(out=args.out, seed=args.seed, rdm_mode=args.rdm_mode, synth_normal=4000)
    res = cmd_crossval(cfg)
    print("synthetic data:")
    print("model      mu_F1  sigma_F1  Pr[qrbf > rbf]")
    for model, mu, sd, pr in res.rows:
        print(f"{model:10} {mu:.3f}  {sd:.3f}     {pr if pr == 'none' else f'{pr:.3f}'}")
    rbf = ScoreDistribution(*PUBLISHED["rbf"][:2])
    print("\npublished mu/sigma pushed through this implementation:")
    for model, (mu, sd, printed) in PUBLISHED.items():
        if printed is None:
            continue
        ours = outperformance_probability(ScoreDistribution(mu, sd), rbf)
        print(f"{model:10} printed {printed:.3f}  computed {ours:.3f}  computed^2 {ours ** 2:.3f}")
    return 0 if all(c["status"] == "ok" for c in res.cells) else 1


if __name__ == "__main__":
    raise SystemExit(main())
