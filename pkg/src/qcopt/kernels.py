"""Numeric hot kernels: ASAP layering, pair interaction totals, statevector updates.

Two interchangeable backends:

- ``numba``: the loop kernels below compiled with ``@njit`` (default when
  numba imports cleanly).
- ``numpy``: plain Python/numpy implementations of the same functions.

Select with the environment variable ``QOPT_BACKEND`` (``numba`` or
``numpy``), read once at import time. ``benchmarks/kernel_benchmark.py``
times one backend against the other.

Encoding convention shared with :mod:`qcopt.circuit`: a circuit is three
arrays ``(kinds, offsets, wires)`` where gate ``g`` is H (``kinds[g] == 0``)
or CNOT (``kinds[g] == 1``) and touches ``wires[offsets[g]:offsets[g + 1]]``
(for a CNOT the first entry is the control). Statevector bit convention:
wire ``w`` maps to bit ``n_qubits - 1 - w`` of the basis index, so wire 0 is
the most significant bit.
"""

from __future__ import annotations

import math
import os

import numpy as np

KIND_H = 0
KIND_CNOT = 1

_SQRT2_INV = 1.0 / math.sqrt(2.0)


def _asap_layers_loop(offsets, wires, n_qubits):
    # Sequential dependency (each gate depends on the frontier left by the
    # previous ones), so the fallback is a loop too, not a vectorized form.
    n_gates = offsets.shape[0] - 1
    layers = np.zeros(n_gates, dtype=np.int64)
    frontier = np.zeros(n_qubits, dtype=np.int64)
    for g in range(n_gates):
        layer = 0
        for k in range(offsets[g], offsets[g + 1]):
            w = wires[k]
            if frontier[w] > layer:
                layer = frontier[w]
        layer += 1
        layers[g] = layer
        for k in range(offsets[g], offsets[g + 1]):
            frontier[wires[k]] = layer
    return layers


def _pair_totals_loop(kinds, offsets, wires, n_qubits):
    totals = np.zeros((n_qubits, n_qubits), dtype=np.int64)
    n_gates = offsets.shape[0] - 1
    for g in range(n_gates):
        if kinds[g] != KIND_CNOT:
            continue
        control = wires[offsets[g]]
        for k in range(offsets[g] + 1, offsets[g + 1]):
            t = wires[k]
            totals[control, t] += 1
            totals[t, control] += 1
    return totals


def _hadamard_loop(state, wire, n_qubits):
    mask = 1 << (n_qubits - 1 - wire)
    for i in range(state.shape[0]):
        if not i & mask:
            j = i | mask
            a = state[i]
            b = state[j]
            state[i] = (a + b) * _SQRT2_INV
            state[j] = (a - b) * _SQRT2_INV


def _cnot_loop(state, control, target, n_qubits):
    cmask = 1 << (n_qubits - 1 - control)
    tmask = 1 << (n_qubits - 1 - target)
    for i in range(state.shape[0]):
        if (i & cmask) and not (i & tmask):
            j = i | tmask
            state[i], state[j] = state[j], state[i]


def _hadamard_numpy(state, wire, n_qubits):
    view = state.reshape((2,) * n_qubits)
    lo = [slice(None)] * n_qubits
    hi = [slice(None)] * n_qubits
    lo[wire] = 0
    hi[wire] = 1
    lo, hi = tuple(lo), tuple(hi)
    a = view[lo].copy()
    b = view[hi]
    view[lo] = (a + b) * _SQRT2_INV
    view[hi] = (a - b) * _SQRT2_INV


def _cnot_numpy(state, control, target, n_qubits):
    view = state.reshape((2,) * n_qubits)
    i10 = [slice(None)] * n_qubits
    i11 = [slice(None)] * n_qubits
    i10[control] = i11[control] = 1
    i10[target], i11[target] = 0, 1
    i10, i11 = tuple(i10), tuple(i11)
    tmp = view[i10].copy()
    view[i10] = view[i11]
    view[i11] = tmp


def _pick_backend() -> str:
    requested = os.environ.get("QOPT_BACKEND", "numba").strip().lower()
    if requested not in ("numba", "numpy"):
        raise ValueError(f"QOPT_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba":
        try:
            import numba  # noqa: F401
        except ImportError:
            return "numpy"
    return requested


BACKEND = _pick_backend()

if BACKEND == "numba":
    from numba import njit

    asap_layers = njit(cache=True)(_asap_layers_loop)
    pair_totals = njit(cache=True)(_pair_totals_loop)
    hadamard_inplace = njit(cache=True)(_hadamard_loop)
    cnot_inplace = njit(cache=True)(_cnot_loop)
else:
    asap_layers = _asap_layers_loop
    pair_totals = _pair_totals_loop
    hadamard_inplace = _hadamard_numpy
    cnot_inplace = _cnot_numpy


def warmup() -> None:
    """Trigger JIT compilation so timings exclude the first-call cost."""
    kinds = np.array([KIND_H, KIND_CNOT], dtype=np.int8)
    offsets = np.array([0, 1, 3], dtype=np.int64)
    wires = np.array([0, 0, 1], dtype=np.int64)
    asap_layers(offsets, wires, 2)
    pair_totals(kinds, offsets, wires, 2)
    state = np.zeros(4, dtype=np.complex128)
    state[0] = 1.0
    hadamard_inplace(state, 0, 2)
    cnot_inplace(state, 0, 1, 2)
