"""Classical rbf and projected quantum rbf (qrbf) kernels.

The qrbf kernel is a Gaussian of the summed squared Frobenius distances
between per-qubit RDMs.  Flattening each RDM stack into real/imag parts makes
that sum a plain squared Euclidean distance, so both kernels share one code
path.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

RDM_SCHEMA = "qocsvm.rdmset"
RDM_SCHEMA_VERSION = 1
KINDS = ("rbf", "qrbf")
DEFAULT_GAMMA = 0.1


class SchemaError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RdmSet:
    """Per-sample 1Q-RDM stacks, ``rdms.shape == (n_samples, n_qubits, 2, 2)``."""

    rdms: np.ndarray
    provenance: dict = field(default_factory=lambda: {"mode": "exact"})

    def __post_init__(self):
        arr = np.ascontiguousarray(self.rdms, dtype=complex)
        if arr.ndim != 4 or arr.shape[2:] != (2, 2):
            raise ValueError(f"RdmSet expects shape (n, N, 2, 2), got {arr.shape}")
        object.__setattr__(self, "rdms", arr)

    @property
    def n_samples(self) -> int:
        return self.rdms.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.rdms.shape[1]

    def __len__(self):
        return self.n_samples

    def subset(self, idx) -> "RdmSet":
        return RdmSet(self.rdms[np.asarray(idx)], dict(self.provenance))

    def flat(self) -> np.ndarray:
        """Real embedding with squared Euclidean distance = summed squared Frobenius distance."""
        return self.rdms.reshape(self.n_samples, -1).view(np.float64)


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    values: np.ndarray
    gamma: float
    kind: str

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def subset(self, idx) -> "KernelMatrix":
        idx = np.asarray(idx)
        return KernelMatrix(self.values[np.ix_(idx, idx)], self.gamma, self.kind)


def _check_gamma(gamma: float):
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")


def _embed(rows, kind: str) -> np.ndarray:
    if kind not in KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}; expected one of {KINDS}")
    if kind == "qrbf":
        if not isinstance(rows, RdmSet):
            rows = RdmSet(rows)
        return rows.flat()
    x = np.asarray(rows, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"rbf rows must be a 2-d feature matrix, got shape {x.shape}")
    return x


def rbf_kernel(a, b, gamma: float = DEFAULT_GAMMA) -> float:
    _check_gamma(gamma)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"feature vectors differ in length: {a.shape} vs {b.shape}")
    return float(np.exp(-gamma * np.sum((a - b) ** 2)))


def qrbf_kernel(a, b, gamma: float = DEFAULT_GAMMA) -> float:
    """``exp(-gamma * sum_k ||rho_k(a) - rho_k(b)||_F^2)`` for two ``(N, 2, 2)`` RDM stacks."""
    _check_gamma(gamma)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"qubit count mismatch: {a.shape} vs {b.shape}")
    return float(np.exp(-gamma * np.sum(np.abs(a - b) ** 2)))


def gram_matrix(rows, gamma: float = DEFAULT_GAMMA, kind: str = "qrbf") -> KernelMatrix:
    _check_gamma(gamma)
    x = _embed(rows, kind)
    if x.shape[0] < 1:
        raise ValueError("need at least one row")
    if x.shape[0] == 1:
        return KernelMatrix(np.ones((1, 1)), gamma, kind)
    k = squareform(np.exp(-gamma * pdist(x, "sqeuclidean")))
    np.fill_diagonal(k, 1.0)
    return KernelMatrix(k, gamma, kind)


def cross_gram(train_rows, test_rows, gamma: float = DEFAULT_GAMMA, kind: str = "qrbf") -> np.ndarray:
    """Kernel values ``K[i, j] = k(test_i, train_j)``, shape ``(n_test, n_train)``."""
    _check_gamma(gamma)
    a = _embed(test_rows, kind)
    b = _embed(train_rows, kind)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"row shapes are incompatible: {a.shape[1]} vs {b.shape[1]}")
    return np.exp(-gamma * cdist(a, b, "sqeuclidean"))


def squared_distances(rows, kind: str = "qrbf") -> np.ndarray:
    """Pairwise squared distances; cache these to sweep gamma cheaply."""
    return squareform(pdist(_embed(rows, kind), "sqeuclidean"))


def save_rdms(rdm_set: RdmSet, path) -> None:
    """Write an RdmSet as JSON (default) or as ``.npz`` for large runs."""
    path = Path(path)
    meta = {
        "schema": RDM_SCHEMA,
        "schema_version": RDM_SCHEMA_VERSION,
        "n_samples": rdm_set.n_samples,
        "n_qubits": rdm_set.n_qubits,
        "provenance": rdm_set.provenance,
    }
    flat = rdm_set.rdms.reshape(rdm_set.n_samples, rdm_set.n_qubits, 4).view(np.float64)
    if path.suffix == ".npz":
        np.savez(path, meta=np.array(json.dumps(meta, sort_keys=True)), rdms=flat)
        return
    doc = dict(meta, rdms=flat.tolist())
    path.write_text(json.dumps(doc, sort_keys=True))


def _check_meta(meta: dict, path) -> None:
    if meta.get("schema") != RDM_SCHEMA or meta.get("schema_version") != RDM_SCHEMA_VERSION:
        raise SchemaError(
            f"{path}: expected schema {RDM_SCHEMA!r} version {RDM_SCHEMA_VERSION}, "
            f"found {meta.get('schema')!r} version {meta.get('schema_version')!r}"
        )


def load_rdms(path) -> RdmSet:
    path = Path(path)
    try:
        if path.suffix == ".npz":
            with np.load(path) as z:
                meta = json.loads(str(z["meta"]))
                flat = np.array(z["rdms"], dtype=np.float64)
        else:
            doc = json.loads(path.read_text())
            meta = doc
            flat = np.asarray(doc.get("rdms"), dtype=np.float64)
    except (ValueError, KeyError, TypeError) as exc:
        raise SchemaError(
            f"{path}: unreadable RDM cache, expected schema {RDM_SCHEMA!r} version {RDM_SCHEMA_VERSION}"
        ) from exc
    _check_meta(meta, path)
    n, nq = meta["n_samples"], meta["n_qubits"]
    if flat.shape != (n, nq, 8):
        raise SchemaError(f"{path}: RDM block has shape {flat.shape}, header says ({n}, {nq}, 8)")
    rdms = np.ascontiguousarray(flat).view(complex).reshape(n, nq, 2, 2)
    return RdmSet(rdms, meta["provenance"])


def save_kernel_csv(k: KernelMatrix | np.ndarray, path) -> None:
    values = k.values if isinstance(k, KernelMatrix) else np.asarray(k)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in values:
            w.writerow([repr(float(v)) for v in row])
