"""Experiment orchestration: benchmark sweep, cross-validation, grid search, tomography sweep.

Every random draw comes from a child generator keyed by (master seed, task
path), so results are fixed by the config alone and do not depend on the
order in which cells run.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .data import (
    EngineeredDataset,
    engineer,
    kfold,
    load_raw,
    split,
    standardize_fit,
    subsample_to_ratio,
    synth_generate,
)
from .featuremaps import FeatureMapSpec, build_feature_map, simulate
from .kernels import KernelMatrix, RdmSet, cross_gram, gram_matrix, load_rdms, save_rdms, squared_distances
from .metrics import (
    baseline_f1,
    confusion_counts,
    fold_statistics,
    outperformance_probability,
    precision_recall_f1,
)
from .ocsvm import fit, predict
from .quantum_state import all_rdms
from .seeding import child_rng, child_seed
from .tomography import NoiseConfig, estimate_rdms, loglog_slope, plan_shots, precision_sweep

log = logging.getLogger(__name__)

MODEL_NAMES = {"rbf": "rbf", "cx": "qrbf-CX", "ecr": "qrbf-ECR", "rxx": "qrbf-RXX"}
ALL_VARIANTS = ("rbf", "cx", "ecr", "rxx")


def _floats(text):
    return tuple(float(v) for v in str(text).split(",") if v.strip())


def _ints(text):
    return tuple(int(float(v)) for v in str(text).split(",") if v.strip())


def _variants(text):
    vals = [v.strip().lower() for v in str(text).split(",") if v.strip()]
    if "all" in vals:
        return ALL_VARIANTS
    return tuple(vals)


def _bool(text):
    if isinstance(text, bool):
        return text
    return str(text).strip().lower() in ("1", "true", "yes", "on")


@dataclass
class ExperimentConfig:
    data: str = "synth"
    synth_normal: int = 20000
    synth_anomalies: int = 1000
    variants: tuple = ALL_VARIANTS
    gamma: float = 0.1
    nu: float = 0.1
    shots: int = 200
    rdm_mode: str = "estimated"
    r_grid: tuple = (0.2, 0.1, 0.05, 0.02, 0.01)
    n_anomalies: int = 100
    test_fraction: float = 0.1
    seed: int = 0
    depolarizing_p: float = 0.0
    readout_flip_p: float = 0.0
    drift_rate: float = 0.0
    layers: int = 1
    angle_scale: float = math.pi
    rates_on_full: bool = False
    cv_r: float = 0.2
    folds: int = 10
    grid_r: float = 0.01
    grid_folds: int = 5
    gamma_grid: tuple = (1e-4, 1e-3, 1e-2, 1e-1, 1e0, 1e1)
    nu_grid: tuple = (1e-2, 1e-1, 1e0)
    shot_grid: tuple = (100, 1000, 10000, 100000)
    repeats: int = 100
    sweep_drift_rate: float = 1e-6
    workers: int = 1
    out: str = "results"

    def validate(self) -> "ExperimentConfig":
        errors = []
        if self.data != "synth" and not Path(self.data).exists():
            errors.append(f"data: no such file {self.data!r}")
        if self.synth_normal < 0 or self.synth_anomalies < 0:
            errors.append("synth_normal / synth_anomalies must be >= 0")
        bad = [v for v in self.variants if v not in ALL_VARIANTS]
        if bad or not self.variants:
            errors.append(f"variants: unknown {bad}; choose from {ALL_VARIANTS} or 'all'")
        if not self.gamma > 0:
            errors.append("gamma must be > 0")
        if not 0 < self.nu <= 1:
            errors.append("nu must lie in (0, 1]")
        if self.shots < 3:
            errors.append("shots must be >= 3")
        if self.rdm_mode not in ("exact", "estimated"):
            errors.append("rdm_mode must be 'exact' or 'estimated'")
        if not self.r_grid or any(not 0 < r <= 1 for r in self.r_grid):
            errors.append("r_grid entries must lie in (0, 1]")
        for name in ("cv_r", "grid_r"):
            if not 0 < getattr(self, name) <= 1:
                errors.append(f"{name} must lie in (0, 1]")
        if self.n_anomalies < 1:
            errors.append("n_anomalies must be >= 1")
        if not 0 < self.test_fraction < 1:
            errors.append("test_fraction must lie in (0, 1)")
        if self.seed < 0 or self.seed >= 2**64:
            errors.append("seed must be an unsigned 64-bit integer")
        try:
            NoiseConfig(self.depolarizing_p, self.readout_flip_p, self.drift_rate)
        except ValueError as exc:
            errors.append(str(exc))
        if self.layers < 1:
            errors.append("layers must be >= 1")
        if self.folds < 2 or self.grid_folds < 2:
            errors.append("folds and grid_folds must be >= 2")
        if not self.gamma_grid or any(g <= 0 for g in self.gamma_grid):
            errors.append("gamma_grid entries must be > 0")
        if not self.nu_grid or any(not 0 < n <= 1 for n in self.nu_grid):
            errors.append("nu_grid entries must lie in (0, 1]")
        if list(self.shot_grid) != sorted(self.shot_grid) or min(self.shot_grid, default=0) < 3:
            errors.append("shot_grid must be ascending with entries >= 3")
        if self.repeats < 2:
            errors.append("repeats must be >= 2")
        if self.sweep_drift_rate < 0:
            errors.append("sweep_drift_rate must be >= 0")
        if self.workers < 1:
            errors.append("workers must be >= 1")
        if errors:
            raise ValueError("invalid config: " + "; ".join(errors))
        return self

    @property
    def noise(self) -> NoiseConfig | None:
        n = NoiseConfig(self.depolarizing_p, self.readout_flip_p, self.drift_rate)
        return None if n.is_noiseless else n

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


_CONVERTERS = {
    "variants": _variants,
    "r_grid": _floats,
    "gamma_grid": _floats,
    "nu_grid": _floats,
    "shot_grid": _ints,
    "rates_on_full": _bool,
}


def config_keys_help() -> str:
    defaults = ExperimentConfig()
    return "\n".join(f"  {line}" for line in defaults.to_text().splitlines())


def parse_config_text(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Flat ``key = value`` lines; ``#`` starts a comment; lists are comma-separated."""
    cfg = base or ExperimentConfig()
    known = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    changes = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {ln}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ValueError(f"config line {ln}: unknown key {key!r}")
        changes[key] = coerce(key, value)
    return cfg.replace(**changes)


def coerce(key: str, value):
    if key in _CONVERTERS:
        return _CONVERTERS[key](value)
    default = getattr(ExperimentConfig(), key)
    if isinstance(default, bool):
        return _bool(value)
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    return str(value)


def load_config(path) -> ExperimentConfig:
    return parse_config_text(Path(path).read_text())


# --- data preparation ---------------------------------------------------------


def load_records(cfg: ExperimentConfig) -> list:
    if cfg.data == "synth":
        return synth_generate(child_seed(cfg.seed, "synth"), cfg.synth_normal, cfg.synth_anomalies)
    return load_raw(cfg.data)


@dataclass
class Prepared:
    """Subsampled, engineered and scaled data for one (r, split) cell."""

    pool_index: np.ndarray
    labels: np.ndarray
    features: np.ndarray
    train: np.ndarray
    test: np.ndarray
    seeds: dict = field(default_factory=dict)


def engineer_for_split(records, pool_index, test_positions, rates_on_full: bool) -> EngineeredDataset:
    """Fraud rates are fit on every pool record outside the test set (or on all of them)."""
    if rates_on_full:
        return engineer(records)
    held_out = set(pool_index[test_positions].tolist())
    fit_on = [i for i in range(len(records)) if i not in held_out]
    return engineer(records, rate_fit_on=fit_on)


def prepare(records, labels, cfg: ExperimentConfig, r: float, split_key: str, train=None, test=None) -> Prepared:
    sub_key = f"subsample/r={r!r}"
    pool_index = subsample_to_ratio(labels, r, cfg.n_anomalies, child_rng(cfg.seed, sub_key))
    y = labels[pool_index]
    seeds = {sub_key: child_seed(cfg.seed, sub_key)}
    if train is None:
        key = f"{split_key}/r={r!r}"
        sp = split(y, cfg.test_fraction, child_rng(cfg.seed, key))
        train, test = sp.train, sp.test
        seeds[key] = child_seed(cfg.seed, key)
    ds = engineer_for_split(records, pool_index, test, cfg.rates_on_full)
    x = ds.features[pool_index]
    scaler = standardize_fit(x[train])
    return Prepared(pool_index, y, scaler.apply(x), np.asarray(train), np.asarray(test), seeds)


# --- kernels and evaluation ---------------------------------------------------


class RdmProvider:
    """Computes 1Q-RDM sets and counts how often tomography (or exact simulation) ran."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.tomography_calls = 0

    def spec(self, variant: str, n_features: int) -> FeatureMapSpec:
        return FeatureMapSpec.for_features(
            n_features, variant.upper(), layers=self.cfg.layers, angle_scale=self.cfg.angle_scale
        )

    def states(self, variant: str, x: np.ndarray) -> list:
        spec = self.spec(variant, x.shape[1])
        return [simulate(build_feature_map(spec, row)) for row in x]

    def rdms(self, states, keys: Sequence[str], mode: str | None = None, shots: int | None = None,
             master_seed: int | None = None) -> RdmSet:
        mode = mode or self.cfg.rdm_mode
        shots = shots or self.cfg.shots
        seed = self.cfg.seed if master_seed is None else master_seed
        self.tomography_calls += len(states)
        if mode == "exact":
            return RdmSet(np.stack([all_rdms(s) for s in states]), {"mode": "exact"})
        plan = plan_shots(shots)
        noise = self.cfg.noise
        out = np.stack(
            [estimate_rdms(s, plan, noise, child_rng(seed, k)) for s, k in zip(states, keys)]
        )
        prov = {"mode": "estimated", "shots": shots, "seed": seed}
        if noise is not None:
            prov["noise"] = dataclasses.asdict(noise)
        return RdmSet(out, prov)


def sample_keys(variant: str, tag: str, pool_index) -> list:
    return [f"tomography/{variant}/{tag}/sample={int(i)}" for i in pool_index]


def scores(model, k_rows, is_anomaly) -> tuple:
    return precision_recall_f1(confusion_counts(is_anomaly, predict(model, k_rows)))


def evaluate(rows, labels, train, test, gamma: float, nu: float, kind: str) -> dict:
    """Fit on ``train`` rows and score both splits; returns {'train': (P, R, F1), 'test': ...}."""
    if kind == "qrbf":
        tr, te = rows.subset(train), rows.subset(test)
    else:
        tr, te = rows[train], rows[test]
    k_train = gram_matrix(tr, gamma, kind)
    model = fit(k_train, nu)
    k_test = cross_gram(tr, te, gamma, kind)
    return {
        "train": scores(model, k_train.values, labels[train] == 1),
        "test": scores(model, k_test, labels[test] == 1),
    }


def model_rows(provider: RdmProvider, variant: str, prep: Prepared, tag: str, **rdm_kwargs):
    if variant == "rbf":
        return prep.features, "rbf"
    states = provider.states(variant, prep.features)
    rdms = provider.rdms(states, sample_keys(variant, tag, prep.pool_index), **rdm_kwargs)
    return rdms, "qrbf"


# --- output helpers -----------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_manifest(out: Path, name: str, cfg: ExperimentConfig, cells: list, files: list, extra=None) -> Path:
    doc = {
        "command": name,
        "software_version": __version__,
        "config_hash": cfg.digest(),
        "config": cfg.to_text(),
        "master_seed": cfg.seed,
        "cells": cells,
        "files": files,
    }
    if extra:
        doc.update(extra)
    path = out / f"{name}_manifest.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True))
    return path


@dataclass
class RunResult:
    rows: list
    cells: list
    files: list
    ok: bool
    extra: dict = field(default_factory=dict)


def _out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# --- commands -----------------------------------------------------------------


def cmd_benchmark(cfg: ExperimentConfig, records=None) -> RunResult:
    cfg.validate()
    out = _out_dir(cfg)
    records = records if records is not None else load_records(cfg)
    labels = np.array([r.is_fraud for r in records])
    provider = RdmProvider(cfg)
    rows, cells, timing = [], [], {}
    for r in cfg.r_grid:
        b = baseline_f1(r)
        for part in ("train", "test"):
            rows.append(("baseline", r, part, r, 1.0, b))
        try:
            prep = prepare(records, labels, cfg, r, "split")
        except Exception as exc:  # a failed cell must not stop the sweep
            log.exception("r=%s: data preparation failed", r)
            cells.extend(
                {"variant": MODEL_NAMES[v], "r": r, "status": "error", "error": repr(exc)} for v in cfg.variants
            )
            continue
        for v in cfg.variants:
            t0 = time.perf_counter()
            cell = {"variant": MODEL_NAMES[v], "r": r, "seeds": dict(prep.seeds)}
            try:
                rows_v, kind = model_rows(provider, v, prep, f"r={r!r}")
                res = evaluate(rows_v, prep.labels, prep.train, prep.test, cfg.gamma, cfg.nu, kind)
                for part in ("train", "test"):
                    rows.append((MODEL_NAMES[v], r, part, *res[part]))
                cell["status"] = "ok"
                if kind == "qrbf":
                    cell["rdm_provenance"] = rows_v.provenance
                    cell["tomography_stream"] = f"tomography/{v}/r={r!r}/sample=<pool index>"
            except Exception as exc:
                log.exception("cell %s r=%s failed", v, r)
                cell.update(status="error", error=repr(exc))
            # wall-clock stays out of the manifest so reruns are byte-identical
            timing[f"{MODEL_NAMES[v]}/r={r!r}"] = time.perf_counter() - t0
            cells.append(cell)
    path = out / "benchmark.csv"
    write_csv(path, ("variant", "r", "split", "precision", "recall", "f1"), rows)
    ok = all(c["status"] == "ok" for c in cells)
    files = [path.name]
    write_manifest(out, "benchmark", cfg, cells, files)
    return RunResult(rows, cells, files, ok, {"seconds": timing})


def cmd_crossval(cfg: ExperimentConfig, records=None, k: int | None = None) -> RunResult:
    """Fold-wise test F1 per model at ``cv_r``; each fold serves once as the test set."""
    cfg.validate()
    k = k or cfg.folds
    out = _out_dir(cfg)
    records = records if records is not None else load_records(cfg)
    labels = np.array([r.is_fraud for r in records])
    provider = RdmProvider(cfg)
    r = cfg.cv_r
    sub_key = f"subsample/r={r!r}"
    pool_index = subsample_to_ratio(labels, r, cfg.n_anomalies, child_rng(cfg.seed, sub_key))
    fold_key = f"kfold/r={r!r}"
    folds = kfold(labels[pool_index], k, child_rng(cfg.seed, fold_key))
    seeds = {sub_key: child_seed(cfg.seed, sub_key), fold_key: child_seed(cfg.seed, fold_key)}

    f1s = {v: [] for v in cfg.variants}
    fold_rows, cells = [], []
    all_pos = np.arange(pool_index.size)
    for f, test in enumerate(folds):
        train = np.setdiff1d(all_pos, test)
        prep = prepare(records, labels, cfg, r, "unused", train=train, test=test)
        for v in cfg.variants:
            cell = {"variant": MODEL_NAMES[v], "r": r, "fold": f, "seeds": seeds}
            try:
                rows_v, kind = model_rows(provider, v, prep, f"cv/r={r!r}/fold={f}")
                res = evaluate(rows_v, prep.labels, train, test, cfg.gamma, cfg.nu, kind)
                f1s[v].append(res["test"][2])
                fold_rows.append((MODEL_NAMES[v], f, *res["test"]))
                cell["status"] = "ok"
            except Exception as exc:
                log.exception("crossval cell %s fold %d failed", v, f)
                cell.update(status="error", error=repr(exc))
            cells.append(cell)

    dists = {v: fold_statistics(s) for v, s in f1s.items() if len(s) >= 2}
    table = []
    for v in cfg.variants:
        if v not in dists:
            continue
        d = dists[v]
        if v == "rbf" or "rbf" not in dists:
            pr = "none"
        else:
            pr = outperformance_probability(d, dists["rbf"])
        table.append((MODEL_NAMES[v], d.mu, d.sigma, pr))
    p1 = out / "crossval.csv"
    write_csv(p1, ("variant", "mu_f1", "sigma_f1", "pr_qrbf_gt_rbf"), table)
    p2 = out / "crossval_folds.csv"
    write_csv(p2, ("variant", "fold", "precision", "recall", "f1"), fold_rows)
    ok = all(c["status"] == "ok" for c in cells)
    files = [p1.name, p2.name]
    write_manifest(out, "crossval", cfg, cells, files)
    return RunResult(table, cells, files, ok, {"distributions": dists, "fold_f1": f1s})


RDM_FIELDS = (
    "data", "synth_normal", "synth_anomalies", "seed", "shots", "rdm_mode", "n_anomalies", "test_fraction",
    "depolarizing_p", "readout_flip_p", "drift_rate", "layers", "angle_scale", "rates_on_full", "grid_r",
)


def rdm_fingerprint(cfg: ExperimentConfig, variant: str) -> str:
    """Hash of the config fields that determine grid-search RDMs; gamma/nu grids are not among them."""
    text = "".join(f"{k}={getattr(cfg, k)!r}\n" for k in RDM_FIELDS) + f"variant={variant}\n"
    return hashlib.sha256(text.encode()).hexdigest()


def _rdm_cache_path(out: Path, variant: str, cfg: ExperimentConfig) -> Path:
    return out / "rdm_cache" / f"{variant}_r{cfg.grid_r!r}_{cfg.rdm_mode}.json"


def cmd_gridsearch(cfg: ExperimentConfig, records=None) -> RunResult:
    """Mean CV F1 over the (gamma, nu) grid on the training split at ``grid_r``.

    qrbf RDMs of the training samples are computed once per variant and cached
    on disk; gamma and nu sweeps only reuse them.  Ties go to the smaller
    gamma, then the smaller nu.
    """
    cfg.validate()
    out = _out_dir(cfg)
    records = records if records is not None else load_records(cfg)
    labels = np.array([r.is_fraud for r in records])
    provider = RdmProvider(cfg)
    r = cfg.grid_r
    prep = prepare(records, labels, cfg, r, "split")
    train = prep.train
    y = prep.labels[train]
    fold_key = f"gridsearch/kfold/r={r!r}"
    folds = kfold(y, cfg.grid_folds, child_rng(cfg.seed, fold_key))
    seeds = dict(prep.seeds, **{fold_key: child_seed(cfg.seed, fold_key)})

    grid_rows, best_rows, cells = [], [], []
    for v in cfg.variants:
        cell = {"variant": MODEL_NAMES[v], "r": r, "seeds": seeds}
        try:
            if v == "rbf":
                d2 = squared_distances(prep.features[train], "rbf")
            else:
                cache = _rdm_cache_path(out, v, cfg)
                prov = {"mode": cfg.rdm_mode, "fingerprint": rdm_fingerprint(cfg, v)}
                if cfg.rdm_mode == "estimated":
                    prov.update(shots=cfg.shots, seed=cfg.seed)
                rdm_set = None
                if cache.exists():
                    cached = load_rdms(cache)
                    if cached.provenance.get("fingerprint") == prov["fingerprint"]:
                        rdm_set = cached
                        cell["rdm_cache"] = "hit"
                if rdm_set is None:
                    states = provider.states(v, prep.features[train])
                    rdm_set = provider.rdms(states, sample_keys(v, f"grid/r={r!r}", prep.pool_index[train]))
                    rdm_set = RdmSet(rdm_set.rdms, dict(rdm_set.provenance, **prov))
                    cache.parent.mkdir(parents=True, exist_ok=True)
                    save_rdms(rdm_set, cache)
                    cell["rdm_cache"] = "miss"
                d2 = squared_distances(rdm_set, "qrbf")
            best = None
            for gamma in sorted(cfg.gamma_grid):
                k_all = np.exp(-gamma * d2)
                for nu in sorted(cfg.nu_grid):
                    f1 = []
                    for fold in folds:
                        tr = np.setdiff1d(np.arange(y.size), fold)
                        model = fit(KernelMatrix(k_all[np.ix_(tr, tr)], gamma, "qrbf"), nu)
                        f1.append(scores(model, k_all[np.ix_(fold, tr)], y[fold] == 1)[2])
                    mean_f1 = float(np.mean(f1))
                    grid_rows.append((MODEL_NAMES[v], gamma, nu, mean_f1))
                    if best is None or mean_f1 > best[2]:
                        best = (gamma, nu, mean_f1)
            best_rows.append((MODEL_NAMES[v], *best))
            cell["status"] = "ok"
        except Exception as exc:
            log.exception("gridsearch %s failed", v)
            cell.update(status="error", error=repr(exc))
        cells.append(cell)
    p1 = out / "gridsearch.csv"
    write_csv(p1, ("variant", "gamma", "nu", "mean_f1"), grid_rows)
    p2 = out / "gridsearch_best.csv"
    write_csv(p2, ("variant", "gamma", "nu", "mean_f1"), best_rows)
    ok = all(c["status"] == "ok" for c in cells)
    files = [p1.name, p2.name]
    write_manifest(out, "gridsearch", cfg, cells, files, {"tomography_calls": provider.tomography_calls})
    return RunResult(best_rows, cells, files, ok, {"tomography_calls": provider.tomography_calls, "grid": grid_rows})


def cmd_tomography(cfg: ExperimentConfig) -> RunResult:
    """Precision sweep for |+> and |T>, noiseless and with calibration drift."""
    cfg.validate()
    out = _out_dir(cfg)
    drift = NoiseConfig(cfg.depolarizing_p, cfg.readout_flip_p, cfg.drift_rate + cfg.sweep_drift_rate)
    modes = (("noiseless", None), ("drift", drift))
    rows, cells, slopes = [], [], {}
    for state in ("plus", "T"):
        for mode, noise in modes:
            key = f"tomography/{state}/{mode}"
            sweep = precision_sweep(state, cfg.shot_grid, cfg.repeats, noise, child_rng(cfg.seed, key))
            for row in sweep:
                rows.append((state, mode, row.shots, row.mean_d, row.std_d))
            if len(sweep) >= 2:
                slopes[f"{state}/{mode}"] = loglog_slope(sweep)
            cells.append({"state": state, "mode": mode, "status": "ok", "seeds": {key: child_seed(cfg.seed, key)}})
    path = out / "tomography.csv"
    write_csv(path, ("state", "mode", "shots", "mean_d", "std_d"), rows)
    files = [path.name]
    write_manifest(out, "tomography", cfg, cells, files, {"loglog_slopes": slopes})
    return RunResult(rows, cells, files, True, {"slopes": slopes})


def sampling_study(cfg: ExperimentConfig, n_seeds: int = 16, records=None) -> RunResult:
    """Test F1 with exact RDMs versus ``cfg.shots``-shot RDMs over ``n_seeds`` tomography seeds.

    The subsample and split are fixed by ``cfg.seed``; only the tomography
    streams change between repetitions, so the spread isolates finite sampling.
    """
    cfg.validate()
    out = _out_dir(cfg)
    records = records if records is not None else load_records(cfg)
    labels = np.array([r.is_fraud for r in records])
    provider = RdmProvider(cfg)
    r = cfg.cv_r
    prep = prepare(records, labels, cfg, r, "split")
    rows, cells, summary = [], [], {}
    for v in cfg.variants:
        if v == "rbf":
            continue
        states = provider.states(v, prep.features)
        keys = sample_keys(v, f"sampling/r={r!r}", prep.pool_index)
        exact = provider.rdms(states, keys, mode="exact")
        f1_exact = evaluate(exact, prep.labels, prep.train, prep.test, cfg.gamma, cfg.nu, "qrbf")["test"][2]
        rows.append((MODEL_NAMES[v], "exact", "", f1_exact))
        f1s = []
        for s in range(n_seeds):
            seed = child_seed(cfg.seed, f"sampling/seed={s}")
            est = provider.rdms(states, keys, mode="estimated", master_seed=seed)
            f1 = evaluate(est, prep.labels, prep.train, prep.test, cfg.gamma, cfg.nu, "qrbf")["test"][2]
            f1s.append(f1)
            rows.append((MODEL_NAMES[v], "estimated", seed, f1))
        f1s = np.array(f1s)
        summary[MODEL_NAMES[v]] = {
            "f1_exact": f1_exact,
            "f1_mean": float(f1s.mean()),
            "f1_std": float(f1s.std(ddof=1)),
            "max_abs_diff": float(np.max(np.abs(f1s - f1_exact))),
            "mean_abs_diff": float(np.mean(np.abs(f1s - f1_exact))),
        }
        cells.append({"variant": MODEL_NAMES[v], "r": r, "status": "ok", "seeds": dict(prep.seeds)})
    path = out / "sampling.csv"
    write_csv(path, ("variant", "mode", "tomography_seed", "f1"), rows)
    write_manifest(out, "sampling", cfg, cells, [path.name], {"summary": summary})
    return RunResult(rows, cells, [path.name], True, {"summary": summary})
