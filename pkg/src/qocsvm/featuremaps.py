"""Hardware-efficient data-encoding circuits.

Each layer puts two features on every qubit (``RX`` then ``RZ``) and closes
with a nearest-neighbour entangling chain ``(0,1), (1,2), ...`` built from the
variant's two-qubit gate: ``CX``, ``ECR`` or ``RXX(pi/2)``.  CX and ECR take the
lower index as control.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .quantum_state import ComplexStateVector, all_rdms, apply_gate, make_gate, zero_state

VARIANTS = ("CX", "ECR", "RXX")

NATIVE_GATES = {
    "CX": frozenset({"X", "SX", "RZ", "CX"}),
    "ECR": frozenset({"X", "SX", "RZ", "ECR"}),
    "RXX": frozenset({"RX", "RZ", "RXX"}),
}

ENTANGLER_ANGLE = {"CX": (), "ECR": (), "RXX": (math.pi / 2,)}


class Gate(NamedTuple):
    name: str
    targets: tuple
    angles: tuple = ()

    def to_text(self) -> str:
        line = f"{self.name} {','.join(str(t) for t in self.targets)}"
        if self.angles:
            line += " " + " ".join(repr(float(a)) for a in self.angles)
        return line

    @classmethod
    def from_text(cls, line: str) -> "Gate":
        parts = line.split()
        targets = tuple(int(t) for t in parts[1].split(","))
        return cls(parts[0], targets, tuple(float(a) for a in parts[2:]))


@dataclass(frozen=True)
class FeatureMapSpec:
    variant: str
    num_qubits: int
    layers: int = 1
    angle_scale: float = math.pi

    def __post_init__(self):
        v = self.variant.upper()
        if v not in VARIANTS:
            raise ValueError(f"unknown feature-map variant {self.variant!r}; expected one of {VARIANTS}")
        object.__setattr__(self, "variant", v)
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if not math.isfinite(self.angle_scale):
            raise ValueError("angle_scale must be finite")

    @classmethod
    def for_features(cls, num_features: int, variant: str, **kwargs) -> "FeatureMapSpec":
        """Two features per qubit."""
        return cls(variant, max(1, math.ceil(num_features / 2)), **kwargs)


@dataclass(frozen=True)
class FeatureMapCircuit:
    spec: FeatureMapSpec
    gates: tuple

    def to_text(self) -> str:
        s = self.spec
        header = (
            f"# variant={s.variant} qubits={s.num_qubits} layers={s.layers} "
            f"angle_scale={float(s.angle_scale)!r}"
        )
        return "\n".join([header] + [g.to_text() for g in self.gates]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FeatureMapCircuit":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("#"):
            raise ValueError("circuit text must start with a '# variant=...' header")
        fields = dict(tok.split("=", 1) for tok in lines[0][1:].split())
        spec = FeatureMapSpec(
            fields["variant"],
            int(fields["qubits"]),
            int(fields["layers"]),
            float(fields["angle_scale"]),
        )
        return cls(spec, tuple(Gate.from_text(ln) for ln in lines[1:]))

    def depth(self) -> int:
        """Circuit depth with every gate counted as one time step."""
        frontier = [0] * self.spec.num_qubits
        for g in self.gates:
            t = max(frontier[q] for q in g.targets) + 1
            for q in g.targets:
                frontier[q] = t
        return max(frontier)


def build_feature_map(spec: FeatureMapSpec, sample: Sequence[float]) -> FeatureMapCircuit:
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("cannot encode an empty sample")
    if x.size > 2 * spec.num_qubits:
        raise ValueError(
            f"sample has {x.size} features but {spec.num_qubits} qubits hold at most {2 * spec.num_qubits}"
        )
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite values")
    padded = np.zeros(2 * spec.num_qubits)
    padded[: x.size] = x
    angles = spec.angle_scale * padded

    entangler = "RXX" if spec.variant == "RXX" else spec.variant
    gates = []
    for _ in range(spec.layers):
        for k in range(spec.num_qubits):
            gates.append(Gate("RX", (k,), (float(angles[2 * k]),)))
            gates.append(Gate("RZ", (k,), (float(angles[2 * k + 1]),)))
        for k in range(spec.num_qubits - 1):
            gates.append(Gate(entangler, (k, k + 1), ENTANGLER_ANGLE[spec.variant]))
    return FeatureMapCircuit(spec, tuple(gates))


def decompose_rx(angle: float, qubit: int = 0) -> list:
    """RX(angle) as RZ(pi/2) SX RZ(angle+pi) SX RZ(pi/2), equal up to global phase.

    Gates are listed in application order.
    """
    if not math.isfinite(angle):
        raise ValueError("angle must be finite")
    half_pi = math.pi / 2
    return [
        Gate("RZ", (qubit,), (half_pi,)),
        Gate("SX", (qubit,)),
        Gate("RZ", (qubit,), (float(angle) + math.pi,)),
        Gate("SX", (qubit,)),
        Gate("RZ", (qubit,), (half_pi,)),
    ]


def transpile_native(circuit: FeatureMapCircuit) -> FeatureMapCircuit:
    """Rewrite RX gates into {RZ, SX} for the superconducting variants; RXX circuits pass through."""
    if circuit.spec.variant == "RXX":
        return circuit
    gates = []
    for g in circuit.gates:
        if g.name == "RX":
            gates.extend(decompose_rx(g.angles[0], g.targets[0]))
        else:
            gates.append(g)
    return FeatureMapCircuit(circuit.spec, tuple(gates))


@dataclass(frozen=True)
class NativeCheck:
    ok: bool
    index: int = -1
    gate: Gate | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "native: ok"
        return f"non-native gate #{self.index}: {self.gate.to_text()}"


def validate_native(circuit: FeatureMapCircuit) -> NativeCheck:
    """Check the gate alphabet and nearest-neighbour locality; reports the first offending gate.

    RX is not native on the CX/ECR platforms, so freshly built circuits for
    those variants only pass after :func:`transpile_native`.
    """
    allowed = NATIVE_GATES[circuit.spec.variant]
    for i, g in enumerate(circuit.gates):
        if g.name not in allowed:
            return NativeCheck(False, i, g)
        if len(g.targets) == 2 and abs(g.targets[0] - g.targets[1]) != 1:
            return NativeCheck(False, i, g)
    return NativeCheck(True)


def simulate(circuit: FeatureMapCircuit) -> ComplexStateVector:
    state = zero_state(circuit.spec.num_qubits)
    cache = {}
    for g in circuit.gates:
        key = (g.name, g.angles)
        if key not in cache:
            cache[key] = make_gate(g.name, g.angles)
        state = apply_gate(state, g.targets, cache[key])
    return state


def circuit_rdms(circuit: FeatureMapCircuit) -> np.ndarray:
    return all_rdms(simulate(circuit))
