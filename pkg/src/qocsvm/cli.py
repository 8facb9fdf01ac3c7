"""Command-line entry point: ``qocsvm <command> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .data import engineer, load_raw, synth_generate, write_raw
from .harness import (
    ExperimentConfig,
    _variants,
    cmd_benchmark,
    cmd_crossval,
    cmd_gridsearch,
    cmd_tomography,
    coerce,
    config_keys_help,
    load_config,
)

COMMANDS = ("benchmark", "crossval", "gridsearch", "tomography", "engineer", "synth")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qocsvm",
        description="One-class SVM fraud detection with classical and projected quantum kernels.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="config file keys (flat 'key = value', lists comma-separated) and defaults:\n"
        + config_keys_help(),
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="flat key=value config file")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--out", help="output directory")
    p.add_argument("--shots", type=int, help="tomography snapshots per sample")
    p.add_argument("--rdm-mode", choices=("exact", "estimated"))
    p.add_argument("--variant", action="append", help="cx|ecr|rxx|rbf|all; repeatable or comma-separated")
    p.add_argument("--rates-on-full", action="store_true", default=None,
                   help="fit fraud-rate encoders on the whole pool, test rows included")
    p.add_argument("--data", help="raw transaction CSV, or 'synth' for generated data")
    p.add_argument("--r", dest="r_grid", help="anomaly ratios, comma-separated")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override any config key")
    p.add_argument("--input", type=Path, help="engineer: raw CSV to transform")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    changes = {}
    for item in args.set:
        if "=" not in item:
            raise ValueError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        key = key.replace("-", "_")
        if not hasattr(cfg, key):
            raise ValueError(f"unknown config key {key!r}")
        changes[key] = coerce(key, value)
    for name in ("seed", "out", "shots", "rdm_mode", "data", "rates_on_full"):
        v = getattr(args, name)
        if v is not None:
            changes[name] = v
    if args.r_grid is not None:
        changes["r_grid"] = coerce("r_grid", args.r_grid)
    if args.variant:
        changes["variants"] = _variants(",".join(args.variant))
    return cfg.replace(**changes).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(cfg.out)

    if args.command == "synth":
        out.mkdir(parents=True, exist_ok=True)
        records = synth_generate(cfg.seed, cfg.synth_normal, cfg.synth_anomalies)
        write_raw(records, out / "synth_raw.csv")
        print(out / "synth_raw.csv")
        return 0
    if args.command == "engineer":
        src = args.input or (Path(cfg.data) if cfg.data != "synth" else None)
        if src is None:
            print("error: engineer needs --input or --data", file=sys.stderr)
            return 2
        out.mkdir(parents=True, exist_ok=True)
        engineer(load_raw(src)).to_csv(out / "engineered.csv")
        print(out / "engineered.csv")
        return 0

    run = {
        "benchmark": cmd_benchmark,
        "crossval": cmd_crossval,
        "gridsearch": cmd_gridsearch,
        "tomography": cmd_tomography,
    }[args.command]
    result = run(cfg)
    for f in result.files:
        print(out / f)
    failed = [c for c in result.cells if c.get("status") != "ok"]
    for c in failed:
        print(f"failed cell: {c}", file=sys.stderr)
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
