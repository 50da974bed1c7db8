import numpy as np
import pytest
from hypothesis import strategies as st

from qcopt.circuit import Circuit, Cnot, Hadamard


def random_circuit(rng: np.random.Generator, n_qubits: int | None = None,
                   max_gates: int = 20) -> Circuit:
    """Seeded random CNOT+H circuit, n <= 5, up to max_gates gates."""
    n = int(n_qubits) if n_qubits is not None else int(rng.integers(2, 6))
    gates = []
    for _ in range(int(rng.integers(0, max_gates + 1))):
        if n == 1 or rng.random() < 0.5:
            gates.append(Hadamard(int(rng.integers(n))))
        else:
            k = int(rng.integers(2, min(n, 3) + 1))
            wires = rng.choice(n, size=k, replace=False)
            gates.append(Cnot(int(wires[0]), tuple(int(w) for w in wires[1:])))
    return Circuit(n, tuple(gates))


@st.composite
def circuits(draw, min_qubits: int = 1, max_qubits: int = 5, max_gates: int = 20):
    n = draw(st.integers(min_qubits, max_qubits))
    hadamards = st.builds(Hadamard, st.integers(0, n - 1))
    if n >= 2:
        cnots = st.integers(0, n - 1).flatmap(
            lambda c: st.builds(
                Cnot,
                st.just(c),
                st.lists(
                    st.integers(0, n - 1).filter(lambda w: w != c),
                    min_size=1,
                    max_size=n - 1,
                    unique=True,
                ).map(tuple),
            )
        )
        gate = st.one_of(hadamards, cnots)
    else:
        gate = hadamards
    gates = draw(st.lists(gate, max_size=max_gates))
    return Circuit(n, tuple(gates))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


#: One line per acceptance criterion, filled in by tests/test_acceptance.py.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
