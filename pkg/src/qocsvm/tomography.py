"""Partial state tomography of one-qubit reduced density matrices.

Every shot measures all qubits in one shared Pauli basis.  The outcome bit
``b`` of a qubit measured after the basis change ``U`` becomes the snapshot
``3 U^dag |b><b| U - I`` and the estimate is the plain average of all
snapshots, without any PSD projection.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .featuremaps import FeatureMapCircuit, simulate
from .quantum_state import (
    BASIS_CHANGE,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    ComplexStateVector,
    all_rdms,
    frobenius_distance,
    index_to_bits,
    product_state,
    rotate_to_basis,
)
from .seeding import as_rng, child_rng

BASES = ("X", "Y", "Z")


@dataclass(frozen=True)
class ShotPlan:
    total: int
    n_x: int
    n_y: int
    n_z: int

    def __post_init__(self):
        if min(self.n_x, self.n_y, self.n_z) < 0 or self.n_x + self.n_y + self.n_z != self.total:
            raise ValueError(f"inconsistent shot plan {self}")

    @property
    def per_basis(self) -> tuple:
        return (self.n_x, self.n_y, self.n_z)


def plan_shots(total: int) -> ShotPlan:
    """Split ``total`` shots over X, Y, Z as evenly as possible.

    One leftover shot goes to Z, a second one to X.
    """
    total = int(total)
    if total < 3:
        raise ValueError(f"need at least 3 shots to cover every basis, got {total}")
    base, rem = divmod(total, 3)
    return ShotPlan(total, base + (rem >= 2), base, base + (rem >= 1))


@dataclass(frozen=True)
class SnapshotRecord:
    qubit: int
    basis: str
    outcome: int


def snapshot_matrix(basis: str, outcome: int) -> np.ndarray:
    if isinstance(basis, SnapshotRecord):
        basis, outcome = basis.basis, basis.outcome
    b = basis.upper()
    if b not in BASIS_CHANGE or outcome not in (0, 1):
        raise ValueError(f"invalid snapshot ({basis!r}, {outcome!r})")
    u = BASIS_CHANGE[b]
    ket = np.zeros((2, 1), dtype=complex)
    ket[outcome, 0] = 1.0
    return 3.0 * (u.conj().T @ ket @ ket.conj().T @ u) - np.eye(2)


def _closed_form_snapshot(pauli: np.ndarray, sign: int) -> np.ndarray:
    # 3 U^dag|b><b|U - I == (I + 3 s P) / 2 with s = +1 for outcome 0
    return 0.5 * (np.eye(2) + 3 * sign * pauli)


_SNAPSHOTS = {
    b: (_closed_form_snapshot(p, 1), _closed_form_snapshot(p, -1))
    for b, p in zip(BASES, (PAULI_X, PAULI_Y, PAULI_Z))
}


@dataclass(frozen=True)
class NoiseConfig:
    """Measurement-level noise.

    Each shot and qubit is fully depolarized with probability
    ``min(1, depolarizing_p + drift_rate * t)``, where ``t`` is the shot's
    position in the run (one time unit per shot, bases interleaved X, Y, Z).
    The recorded bit is then flipped with probability ``readout_flip_p``.
    """

    depolarizing_p: float = 0.0
    readout_flip_p: float = 0.0
    drift_rate: float = 0.0

    def __post_init__(self):
        for name in ("depolarizing_p", "readout_flip_p"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.drift_rate < 0:
            raise ValueError(f"drift_rate must be >= 0, got {self.drift_rate}")

    @property
    def is_noiseless(self) -> bool:
        return self.depolarizing_p == 0 and self.readout_flip_p == 0 and self.drift_rate == 0

    def depolarizing_at(self, times: np.ndarray) -> np.ndarray:
        return np.minimum(1.0, self.depolarizing_p + self.drift_rate * np.asarray(times, dtype=float))

    def corrupt(self, bits: np.ndarray, times: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        bits = bits.copy()
        p = self.depolarizing_at(times)[:, None]
        if np.any(p > 0):
            hit = rng.random(bits.shape) < p
            bits[hit] = rng.integers(0, 2, size=int(hit.sum()), dtype=bits.dtype)
        if self.readout_flip_p > 0:
            flip = rng.random(bits.shape) < self.readout_flip_p
            bits[flip] ^= 1
        return bits


def shot_times(plan: ShotPlan) -> tuple:
    """Run positions of every shot per basis when the bases are interleaved X, Y, Z, X, ..."""
    counts = np.array(plan.per_basis)
    rounds = int(counts.max())
    active = np.arange(rounds)[:, None] < counts[None, :]
    pos = (np.cumsum(active.ravel()) - 1).reshape(active.shape)
    return tuple(pos[:, b][active[:, b]] for b in range(3))


def _state_of(target) -> ComplexStateVector:
    if isinstance(target, ComplexStateVector):
        return target
    if isinstance(target, FeatureMapCircuit):
        return simulate(target)
    raise TypeError(f"expected a circuit or a state, got {type(target).__name__}")


def estimate_rdms(
    circuit, plan: ShotPlan, noise: NoiseConfig | None = None, rng=None
) -> np.ndarray:
    """Estimated 1Q-RDMs, shape ``(N, 2, 2)``, from ``plan.total`` snapshots per qubit.

    Snapshots are averaged within each basis and the three basis means are
    then averaged with equal weight.  For an even split this is the plain mean
    of all snapshots; for an uneven one (e.g. 200 shots) it keeps the estimator
    unbiased, where the plain mean would scale each Pauli component by
    ``3 n_b / n``.
    """
    rng = as_rng(rng)
    state = _state_of(circuit)
    n = state.num_qubits
    noisy = noise is not None and not noise.is_noiseless
    times = shot_times(plan) if noisy else None
    total = np.zeros((n, 2, 2), dtype=complex)
    used = 0
    for b, basis in enumerate(BASES):
        shots = plan.per_basis[b]
        if shots == 0:
            continue
        probs = rotate_to_basis(state, basis * n).probabilities()
        bits = index_to_bits(rng.choice(probs.size, size=shots, p=probs), n)
        if noisy:
            bits = noise.corrupt(bits, times[b], rng)
        ones = bits.sum(axis=0, dtype=np.int64)
        zeros = shots - ones
        snap0, snap1 = _SNAPSHOTS[basis]
        total += (zeros[:, None, None] * snap0 + ones[:, None, None] * snap1) / shots
        used += 1
    return total / used


def exact_rdms(circuit) -> np.ndarray:
    return all_rdms(_state_of(circuit))


def estimate_rdm_set(
    circuits: Sequence,
    plan: ShotPlan,
    noise: NoiseConfig | None,
    master_seed: int,
    keys: Iterable[str] | None = None,
    workers: int = 1,
) -> np.ndarray:
    """Estimate RDMs for many circuits; sample ``i`` draws from the child stream ``keys[i]``.

    Results do not depend on ``workers`` since each task owns its generator.
    """
    keys = list(keys) if keys is not None else [f"sample/{i}" for i in range(len(circuits))]
    if len(keys) != len(circuits):
        raise ValueError("need one key per circuit")

    def task(i):
        return estimate_rdms(circuits[i], plan, noise, child_rng(master_seed, keys[i]))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            out = list(pool.map(task, range(len(circuits))))
    else:
        out = [task(i) for i in range(len(circuits))]
    return np.stack(out)


def named_state(label: str) -> ComplexStateVector:
    label = label.lower()
    if label == "plus":
        return product_state([1, 1])
    if label == "t":
        return product_state([1, np.exp(1j * math.pi / 4)])
    raise ValueError(f"unknown state label {label!r}; expected 'plus' or 'T'")


@dataclass(frozen=True)
class SweepRow:
    shots: int
    mean_d: float
    std_d: float
    distances: tuple = ()


def precision_sweep(
    state,
    shot_grid: Sequence[int],
    repeats: int,
    noise: NoiseConfig | None = None,
    rng=None,
) -> list:
    """Mean and sample standard deviation of the tomography error per shot count.

    For more than one qubit the error is the Frobenius distance of the stacked
    RDMs, i.e. the root of the summed per-qubit squared distances.
    """
    if repeats < 2:
        raise ValueError("repeats must be >= 2")
    grid = [int(s) for s in shot_grid]
    if grid != sorted(grid):
        raise ValueError("shot_grid must be ascending")
    rng = as_rng(rng)
    st = named_state(state) if isinstance(state, str) else _state_of(state)
    exact = all_rdms(st)
    rows = []
    for shots in grid:
        plan = plan_shots(shots)
        d = np.array(
            [frobenius_distance(estimate_rdms(st, plan, noise, rng), exact) for _ in range(repeats)]
        )
        rows.append(SweepRow(shots, float(d.mean()), float(d.std(ddof=1)), tuple(d.tolist())))
    return rows


def loglog_slope(rows: Sequence[SweepRow]) -> float:
    x = np.log10([r.shots for r in rows])
    y = np.log10([r.mean_d for r in rows])
    return float(np.polyfit(x, y, 1)[0])


def rdms_to_json(rdms: np.ndarray) -> str:
    """One array of 8 reals per qubit: row-major entries, real/imag interleaved."""
    arr = np.ascontiguousarray(rdms, dtype=complex)
    flat = arr.reshape(arr.shape[0], 4).view(np.float64)
    return json.dumps(flat.tolist())


def rdms_from_json(text: str) -> np.ndarray:
    flat = np.asarray(json.loads(text), dtype=np.float64)
    if flat.ndim != 2 or flat.shape[1] != 8:
        raise ValueError("expected a list of 8-number arrays")
    return np.ascontiguousarray(flat).view(complex).reshape(-1, 2, 2)
