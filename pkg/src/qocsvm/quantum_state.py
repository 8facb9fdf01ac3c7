"""Statevector simulation primitives.

Qubit ordering is little-endian: qubit 0 is the least significant bit of the
amplitude index.  A two-qubit gate matrix acts on ``|a b>`` where ``a`` lives
on ``targets[0]`` and ``b`` on ``targets[1]`` (``a`` is the high bit of the
4x4 row index), so ``CX`` applied with ``targets=(c, t)`` uses ``c`` as control.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SQRT2 = np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
_SDG = np.diag([1, -1j]).astype(complex)
_SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)
_CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
# i (Y (x) X - X (x) I) / sqrt2, first factor on the control qubit
_ECR = np.array(
    [[0, 0, -1j, 1], [0, 0, 1, -1j], [-1j, -1, 0, 0], [-1, -1j, 0, 0]], dtype=complex
) / SQRT2

# name -> (arity, number of angles)
GATE_SIGNATURES = {
    "H": (1, 0),
    "SDG": (1, 0),
    "X": (1, 0),
    "SX": (1, 0),
    "RX": (1, 1),
    "RZ": (1, 1),
    "CX": (2, 0),
    "ECR": (2, 0),
    "RXX": (2, 1),
    "RZX": (2, 1),
}


class GateError(ValueError):
    pass


def _rot(generator: np.ndarray, angle: float) -> np.ndarray:
    # exp(-i angle/2 P) for any Pauli string P (P^2 = I)
    dim = generator.shape[0]
    half = 0.5 * angle
    return np.cos(half) * np.eye(dim, dtype=complex) - 1j * np.sin(half) * generator


def make_gate(name: str, params: Sequence[float] = ()) -> np.ndarray:
    """Return the unitary matrix of a named gate.

    ``RX``, ``RZ``, ``RXX`` and ``RZX`` take one angle in radians and follow
    ``exp(-i angle/2 P)``; the rest take none.
    """
    key = name.upper()
    if key not in GATE_SIGNATURES:
        raise GateError(f"unknown gate {name!r}; expected one of {sorted(GATE_SIGNATURES)}")
    _, n_params = GATE_SIGNATURES[key]
    params = tuple(float(p) for p in params)
    if len(params) != n_params:
        raise GateError(f"gate {key} takes {n_params} angle(s), got {len(params)}")
    if key == "H":
        return _H.copy()
    if key == "SDG":
        return _SDG.copy()
    if key == "X":
        return PAULI_X.copy()
    if key == "SX":
        return _SX.copy()
    if key == "RX":
        return _rot(PAULI_X, params[0])
    if key == "RZ":
        return _rot(PAULI_Z, params[0])
    if key == "CX":
        return _CX.copy()
    if key == "ECR":
        return _ECR.copy()
    if key == "RXX":
        return _rot(np.kron(PAULI_X, PAULI_X), params[0])
    return _rot(np.kron(PAULI_Z, PAULI_X), params[0])


def gate_arity(matrix: np.ndarray) -> int:
    dim = matrix.shape[0]
    if matrix.shape != (dim, dim) or dim not in (2, 4):
        raise GateError(f"gate matrix must be 2x2 or 4x4, got {matrix.shape}")
    return 1 if dim == 2 else 2


@dataclass(frozen=True, eq=False)
class ComplexStateVector:
    """Normalized pure state over ``num_qubits`` qubits (little-endian)."""

    amplitudes: np.ndarray
    num_qubits: int = field(default=0)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        n = self.num_qubits or int(round(np.log2(max(len(amps), 1))))
        if n < 1 or len(amps) != 2**n:
            raise ValueError(f"amplitude vector of length {len(amps)} is not 2^N for N >= 1")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state is not normalized (norm={norm!r})")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "num_qubits", n)

    def probabilities(self) -> np.ndarray:
        p = np.abs(self.amplitudes) ** 2
        return p / p.sum()


def zero_state(num_qubits: int) -> ComplexStateVector:
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[0] = 1.0
    return ComplexStateVector(amps, num_qubits)


def product_state(*qubit_states: Sequence[complex]) -> ComplexStateVector:
    """Build ``|psi_{N-1}> (x) ... (x) |psi_0>`` from per-qubit vectors given as qubit 0 first."""
    amps = np.array([1.0 + 0j])
    for vec in qubit_states:
        v = np.asarray(vec, dtype=complex)
        amps = np.kron(v / np.linalg.norm(v), amps)
    return ComplexStateVector(amps)


def _as_tensor(state: ComplexStateVector) -> np.ndarray:
    # axis a of the tensor holds qubit N-1-a
    return state.amplitudes.reshape((2,) * state.num_qubits)


def apply_gate(
    state: ComplexStateVector, targets: Sequence[int], gate: np.ndarray
) -> ComplexStateVector:
    n = state.num_qubits
    targets = tuple(int(t) for t in targets)
    gate = np.asarray(gate, dtype=complex)
    k = gate_arity(gate)
    if len(targets) != k:
        raise GateError(f"{k}-qubit gate applied to {len(targets)} target(s)")
    if len(set(targets)) != k:
        raise GateError(f"duplicate targets {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise IndexError(f"qubit index {t} out of range for {n} qubits")
    axes = [n - 1 - t for t in targets]
    psi = _as_tensor(state)
    g = gate.reshape((2,) * (2 * k))
    out = np.tensordot(g, psi, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return ComplexStateVector(out.reshape(-1), n)


@dataclass(frozen=True, eq=False)
class OneQubitRDM:
    matrix: np.ndarray
    kind: str = "exact"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"1Q-RDM must be 2x2, got {m.shape}")
        if self.kind not in ("exact", "estimated"):
            raise ValueError(f"unknown RDM kind {self.kind!r}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def partial_trace_1q(state: ComplexStateVector, qubit: int) -> OneQubitRDM:
    n = state.num_qubits
    if not 0 <= qubit < n:
        raise IndexError(f"qubit index {qubit} out of range for {n} qubits")
    psi = np.moveaxis(_as_tensor(state), n - 1 - qubit, 0).reshape(2, -1)
    rho = psi @ psi.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return OneQubitRDM(rho / np.trace(rho).real, kind="exact")


def all_rdms(state: ComplexStateVector) -> np.ndarray:
    """Stack of exact 1Q-RDMs, shape ``(N, 2, 2)``, qubit 0 first."""
    return np.stack([partial_trace_1q(state, q).matrix for q in range(state.num_qubits)])


# basis change applied before a computational-basis readout
BASIS_CHANGE = {"X": _H, "Y": _H @ _SDG, "Z": I2}


def rotate_to_basis(state: ComplexStateVector, bases: Sequence[str]) -> ComplexStateVector:
    if len(bases) != state.num_qubits:
        raise ValueError(f"need one basis per qubit ({state.num_qubits}), got {len(bases)}")
    out = state
    for q, b in enumerate(bases):
        b = b.upper()
        if b not in BASIS_CHANGE:
            raise ValueError(f"basis must be X, Y or Z, got {b!r}")
        if b != "Z":
            out = apply_gate(out, (q,), BASIS_CHANGE[b])
    return out


def index_to_bits(indices: np.ndarray, num_qubits: int) -> np.ndarray:
    """Expand basis-state indices into bit arrays, column q holding qubit q."""
    indices = np.asarray(indices)
    return ((indices[..., None] >> np.arange(num_qubits)) & 1).astype(np.int8)


def sample_bitstrings(
    state: ComplexStateVector, bases: Sequence[str], shots: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``shots`` Born-rule samples after the per-qubit basis change; shape ``(shots, N)``."""
    probs = rotate_to_basis(state, bases).probabilities()
    idx = rng.choice(probs.size, size=shots, p=probs)
    return index_to_bits(idx, state.num_qubits)


def sample_measurement(
    state: ComplexStateVector, basis_per_qubit: Sequence[str], rng: np.random.Generator
) -> np.ndarray:
    return sample_bitstrings(state, basis_per_qubit, 1, rng)[0]


def frobenius_distance(a, b) -> float:
    diff = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    return float(np.sqrt(np.sum(np.abs(diff) ** 2)))


def equal_up_to_phase(u: np.ndarray, v: np.ndarray, atol: float = 1e-12) -> bool:
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    k = np.argmax(np.abs(v))
    if abs(v.flat[k]) == 0:
        return bool(np.allclose(u, v, atol=atol, rtol=0))
    phase = u.flat[k] / v.flat[k]
    if abs(abs(phase) - 1) > 1e-9:
        return False
    return bool(np.max(np.abs(u - phase * v)) <= atol)
