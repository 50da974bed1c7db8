"""Time the compiled kernels against the plain-Python/numpy fallbacks.

Under the default ``numba`` backend the module exposes both variants: the
compiled entry points (``asap_layers`` etc.) and the uncompiled originals,
so one process can time what each backend would run. With
``QOPT_BACKEND=numpy`` both columns time the fallback.

Usage::

    python3 benchmarks/kernel_benchmark.py [--repeats 5] [--qubits 12]
"""

import argparse
import timeit

import numpy as np

from qcopt import kernels
from qcopt.bench import generate_bv
from qcopt.circuit import Circuit


def _encoding(c: Circuit):
    kinds, offsets, wires = c._encoding
    return kinds, offsets, wires


def _bench(label: str, fast, slow, args_fast, args_slow, repeats: int) -> None:
    t_fast = min(timeit.repeat(lambda: fast(*args_fast), number=100, repeat=repeats)) / 100
    t_slow = min(timeit.repeat(lambda: slow(*args_slow), number=100, repeat=repeats)) / 100
    speedup = t_slow / t_fast if t_fast else float("inf")
    print(f"{label:<18} {t_fast * 1e6:>10.1f} {t_slow * 1e6:>10.1f} {speedup:>9.1f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--qubits", type=int, default=12)
    args = parser.parse_args()

    n = args.qubits
    circuit = generate_bv(n)
    kinds, offsets, wires = _encoding(circuit)
    rng = np.random.default_rng(0)
    state = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    state /= np.linalg.norm(state)

    kernels.warmup()
    print(f"backend={kernels.BACKEND}, circuit=bv{n} ({len(circuit.gates)} gates), "
          f"state dim 2^{n}")
    print(f"{'kernel':<18} {'active us':>10} {'fallback us':>11} {'speedup':>10}")
    _bench(
        "asap_layers",
        kernels.asap_layers, kernels._asap_layers_loop,
        (offsets, wires, n), (offsets, wires, n),
        args.repeats,
    )
    _bench(
        "pair_totals",
        kernels.pair_totals, kernels._pair_totals_loop,
        (kinds, offsets, wires, n), (kinds, offsets, wires, n),
        args.repeats,
    )
    _bench(
        "hadamard_inplace",
        kernels.hadamard_inplace, kernels._hadamard_numpy,
        (state, 0, n), (state.copy(), 0, n),
        args.repeats,
    )
    _bench(
        "cnot_inplace",
        kernels.cnot_inplace, kernels._cnot_numpy,
        (state, 0, n - 1, n), (state.copy(), 0, n - 1, n),
        args.repeats,
    )


if __name__ == "__main__":
    main()
