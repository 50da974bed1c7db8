"""Immutable circuit IR over the {H, CNOT} gate set, plus the three metrics
every reward function reads: depth, gate count, and interaction strength.

A CNOT may fan out to several targets from one control; such a gate counts as
``len(targets)`` two-qubit gates but occupies a single schedule layer.
Interaction strength only pairs the control with each target: two targets of
the same fan-out gate do not interact with each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels


class CircuitError(ValueError):
    """Invalid circuit construction or use."""


class ParseError(CircuitError):
    """Malformed circuit text; carries the 1-based offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Hadamard:
    wire: int


@dataclass(frozen=True)
class Cnot:
    control: int
    targets: tuple[int, ...]

    def __post_init__(self):
        targets = tuple(sorted(self.targets))
        if not targets:
            raise CircuitError("cnot needs at least one target")
        if len(set(targets)) != len(targets):
            raise CircuitError(f"duplicate cnot targets: {self.targets}")
        if self.control in targets:
            raise CircuitError(f"cnot control {self.control} is also a target")
        object.__setattr__(self, "targets", targets)


Gate = Hadamard | Cnot


def gate_wires(gate: Gate) -> tuple[int, ...]:
    """All wires touched by the gate; for a CNOT the control comes first."""
    if isinstance(gate, Hadamard):
        return (gate.wire,)
    return (gate.control, *gate.targets)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 1:
            raise CircuitError(f"n_qubits must be >= 1, got {self.n_qubits}")
        for gate in self.gates:
            for w in gate_wires(gate):
                if not 0 <= w < self.n_qubits:
                    raise CircuitError(f"wire {w} out of range for {self.n_qubits} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    @cached_property
    def _encoding(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        kinds = np.empty(len(self.gates), dtype=np.int8)
        offsets = np.empty(len(self.gates) + 1, dtype=np.int64)
        flat: list[int] = []
        offsets[0] = 0
        for g, gate in enumerate(self.gates):
            kinds[g] = kernels.KIND_H if isinstance(gate, Hadamard) else kernels.KIND_CNOT
            flat.extend(gate_wires(gate))
            offsets[g + 1] = len(flat)
        return kinds, offsets, np.asarray(flat, dtype=np.int64)

    @cached_property
    def _layers(self) -> np.ndarray:
        _, offsets, wires = self._encoding
        return kernels.asap_layers(offsets, wires, self.n_qubits)

    @cached_property
    def _pair_matrix(self) -> np.ndarray:
        kinds, offsets, wires = self._encoding
        return kernels.pair_totals(kinds, offsets, wires, self.n_qubits)

    @cached_property
    def _depth(self) -> int:
        return int(self._layers.max()) if len(self.gates) else 0

    @cached_property
    def _gate_count(self) -> int:
        total = 0
        for gate in self.gates:
            total += 1 if isinstance(gate, Hadamard) else len(gate.targets)
        return total

    @cached_property
    def _pair_total(self) -> int:
        # Sum of pair_strength over unordered pairs; matrix is symmetric.
        return int(self._pair_matrix.sum()) // 2

    @cached_property
    def wire_order(self) -> tuple[tuple[int, ...], ...]:
        """Per wire, the indices of gates touching it, in program order."""
        order: list[list[int]] = [[] for _ in range(self.n_qubits)]
        for g, gate in enumerate(self.gates):
            for w in gate_wires(gate):
                order[w].append(g)
        return tuple(tuple(seq) for seq in order)


@dataclass(frozen=True)
class Schedule:
    """ASAP layer assignment; layer indices start at 1, 0 means no layers."""

    layer_of_gate: tuple[int, ...]

    @property
    def depth(self) -> int:
        return max(self.layer_of_gate, default=0)


def schedule_asap(c: Circuit) -> Schedule:
    """Assign each gate the earliest layer after every earlier gate sharing a wire."""
    return Schedule(tuple(int(x) for x in c._layers))


def depth(c: Circuit) -> int:
    return c._depth


def gate_count(c: Circuit) -> int:
    return c._gate_count


def pair_strength(c: Circuit, a: int, b: int) -> int:
    """Number of two-qubit gates acting on the wire pair {a, b}."""
    if a == b:
        raise CircuitError(f"pair_strength needs two distinct wires, got {a} twice")
    if not (0 <= a < c.n_qubits and 0 <= b < c.n_qubits):
        raise CircuitError(f"wire pair ({a}, {b}) out of range for {c.n_qubits} qubits")
    return int(c._pair_matrix[a, b])


def interaction_strength(c: Circuit) -> float:
    """Mean pair strength over all n*(n-1)/2 unordered wire pairs (0 when n < 2)."""
    n = c.n_qubits
    if n < 2:
        return 0.0
    return c._pair_total / (n * (n - 1) // 2)


def parse_circuit(text: str | bytes) -> Circuit:
    """Parse the line-oriented circuit format (see :func:`serialize_circuit`)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n_qubits: int | None = None
    gates: list[Gate] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n_qubits is None:
            if fields[0] != "qubits" or len(fields) != 2:
                raise ParseError(line_no, "expected 'qubits <n>' header")
            try:
                n_qubits = int(fields[1])
            except ValueError:
                raise ParseError(line_no, f"bad qubit count {fields[1]!r}") from None
            if n_qubits < 1:
                raise ParseError(line_no, f"qubit count must be >= 1, got {n_qubits}")
            continue
        try:
            operands = [int(f) for f in fields[1:]]
        except ValueError:
            raise ParseError(line_no, f"non-integer operand in {line!r}") from None
        try:
            if fields[0] == "h":
                if len(operands) != 1:
                    raise CircuitError("h takes exactly one wire")
                gates.append(Hadamard(operands[0]))
            elif fields[0] == "cx":
                if len(operands) < 2:
                    raise CircuitError("cx takes a control and at least one target")
                gates.append(Cnot(operands[0], tuple(operands[1:])))
            else:
                raise CircuitError(f"unknown gate {fields[0]!r}")
            for w in gate_wires(gates[-1]):
                if not 0 <= w < n_qubits:
                    raise CircuitError(f"wire {w} out of range for {n_qubits} qubits")
        except CircuitError as exc:
            raise ParseError(line_no, str(exc)) from None
    if n_qubits is None:
        raise ParseError(1, "missing 'qubits <n>' header")
    return Circuit(n_qubits, tuple(gates))


def serialize_circuit(c: Circuit) -> str:
    """Canonical text form: ``qubits <n>`` then one gate per line, LF endings."""
    lines = [f"qubits {c.n_qubits}"]
    for gate in c.gates:
        if isinstance(gate, Hadamard):
            lines.append(f"h {gate.wire}")
        else:
            lines.append(f"cx {gate.control} " + " ".join(str(t) for t in gate.targets))
    return "\n".join(lines) + "\n"
