"""Benchmark support: the hidden-string query circuit family, a dense
statevector oracle for rewrite soundness, a breadth-first minimum-depth
oracle over the rewrite graph, and the size-vs-reward comparison harness.

The query circuits use the all-ones hidden string and no ancilla
preparation, keeping the gate set to {H, CNOT}: H on every wire, a CNOT from
each data wire into the last wire, H on every wire again. Reversing every
CNOT, cancelling the Hadamard pairs, and merging the reversed CNOTs reduces
any instance to depth 3.
"""

from __future__ import annotations

import statistics
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .circuit import Circuit, Cnot, Gate, Hadamard, depth, interaction_strength
from .qlearn import AgentConfig, EpochRecord, train, with_auto_steps
from .rewards import RewardKind
from .rewrite import apply_match, find_matches

SIMULATOR_MAX_QUBITS = 12


def generate_bv(n: int) -> Circuit:
    """Unoptimized n-qubit query circuit: depth n+1, 2n H gates, n-1 CNOTs."""
    if n < 2:
        raise ValueError(f"qubits must be >= 2, got {n}")
    gates: list[Gate] = [Hadamard(w) for w in range(n)]
    gates += [Cnot(i, (n - 1,)) for i in range(n - 1)]
    gates += [Hadamard(w) for w in range(n)]
    return Circuit(n, tuple(gates))


def simulate(c: Circuit, input_basis_state: int) -> np.ndarray:
    """Dense statevector after running c on the given computational basis state.

    Wire 0 maps to the most significant bit of the amplitude index.
    """
    n = c.n_qubits
    if n > SIMULATOR_MAX_QUBITS:
        raise ValueError(f"simulator is capped at {SIMULATOR_MAX_QUBITS} qubits, got {n}")
    if not 0 <= input_basis_state < 2**n:
        raise ValueError(f"basis state {input_basis_state} out of range for {n} qubits")
    state = np.zeros(2**n, dtype=np.complex128)
    state[input_basis_state] = 1.0
    for gate in c.gates:
        if isinstance(gate, Hadamard):
            kernels.hadamard_inplace(state, gate.wire, n)
        else:
            for target in gate.targets:
                kernels.cnot_inplace(state, gate.control, target, n)
    return state


def equivalent(a: Circuit, b: Circuit, tol: float = 1e-9) -> bool:
    """Full unitary comparison: all basis-state outputs agree within tol."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    for k in range(2**a.n_qubits):
        if np.abs(simulate(a, k) - simulate(b, k)).max() > tol:
            return False
    return True


@dataclass(frozen=True)
class OracleResult:
    min_depth: int
    exhaustive: bool
    nodes_explored: int


def oracle_min_depth(c: Circuit, node_cap: int = 100_000) -> OracleResult:
    """Breadth-first search over the rewrite graph, deduplicated by gate list.

    ``exhaustive`` is only true when the frontier empties under the cap; the
    expanding reversal rule makes the reachable graph infinite for most
    CNOT-bearing circuits, so expect ``exhaustive=False`` there.
    """
    seen = {c.gates}
    frontier: deque[Circuit] = deque([c])
    best = depth(c)
    explored = 0
    while frontier and explored < node_cap:
        node = frontier.popleft()
        explored += 1
        d = depth(node)
        if d < best:
            best = d
        for m in find_matches(node):
            child = apply_match(node, m)
            if child.gates not in seen:
                seen.add(child.gates)
                frontier.append(child)
    return OracleResult(min_depth=best, exhaustive=not frontier, nodes_explored=explored)


@dataclass(frozen=True)
class SummaryRow:
    qubits: int
    reward_kind: str
    min_rew: float
    max_rew: float
    min_depth: int
    freq_min_depth: int
    max_depth: int
    freq_max_depth: int
    seed: int | None = None  # None marks a median aggregate over seeds

    def to_dict(self) -> dict:
        return asdict(self)


def summarize(records: Sequence[EpochRecord], qubits: int, kind: RewardKind,
              seed: int | None = None) -> SummaryRow:
    rewards = [r.cum_reward for r in records]
    depths = [r.final_depth for r in records]
    min_d, max_d = min(depths), max(depths)
    return SummaryRow(
        qubits=qubits,
        reward_kind=kind.value,
        min_rew=min(rewards),
        max_rew=max(rewards),
        min_depth=min_d,
        freq_min_depth=depths.count(min_d),
        max_depth=max_d,
        freq_max_depth=depths.count(max_d),
        seed=seed,
    )


def _run_one(task: tuple[int, RewardKind, int, AgentConfig]) -> tuple[int, RewardKind, int, list[EpochRecord]]:
    size, kind, seed, cfg = task
    start = generate_bv(size)
    run_cfg = with_auto_steps(replace(cfg, reward_kind=kind, seed=seed), start)
    _, records = train(start, run_cfg)
    return size, kind, seed, records


def run_experiments(
    sizes: Iterable[int],
    kinds: Iterable[RewardKind],
    cfg: AgentConfig,
    seeds: Iterable[int],
    jobs: int = 1,
) -> list[tuple[int, RewardKind, int, list[EpochRecord]]]:
    """Train every (size, kind, seed) combination; deterministic result order."""
    tasks = [
        (size, kind, seed, cfg)
        for size in sorted(sizes)
        for kind in sorted(kinds, key=lambda k: k.value)
        for seed in sorted(seeds)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, tasks))
    return [_run_one(task) for task in tasks]


def _median_row(rows: Sequence[SummaryRow]) -> SummaryRow:
    def med(values, cast):
        return cast(statistics.median(values))

    return SummaryRow(
        qubits=rows[0].qubits,
        reward_kind=rows[0].reward_kind,
        min_rew=med([r.min_rew for r in rows], float),
        max_rew=med([r.max_rew for r in rows], float),
        min_depth=med([r.min_depth for r in rows], int),
        freq_min_depth=med([r.freq_min_depth for r in rows], int),
        max_depth=med([r.max_depth for r in rows], int),
        freq_max_depth=med([r.freq_max_depth for r in rows], int),
        seed=None,
    )


def run_comparison(
    sizes: Iterable[int],
    kinds: Iterable[RewardKind],
    cfg: AgentConfig,
    seeds: Iterable[int],
    jobs: int = 1,
) -> list[SummaryRow]:
    """Per-seed summary rows plus a median aggregate per (size, kind)."""
    results = run_experiments(sizes, kinds, cfg, seeds, jobs=jobs)
    rows: list[SummaryRow] = []
    by_group: dict[tuple[int, RewardKind], list[SummaryRow]] = {}
    for size, kind, seed, records in results:
        row = summarize(records, size, kind, seed=seed)
        rows.append(row)
        by_group.setdefault((size, kind), []).append(row)
    for group in by_group.values():
        rows.append(_median_row(group))
    return rows


def moving_average(values: Sequence[float], window: int) -> np.ndarray:
    """Trailing moving average; entry i averages values[max(0, i-window+1):i+1]."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    arr = np.asarray(values, dtype=np.float64)
    csum = np.concatenate(([0.0], np.cumsum(arr)))
    idx = np.arange(len(arr))
    lo = np.maximum(idx - window + 1, 0)
    return (csum[idx + 1] - csum[lo]) / (idx + 1 - lo)


def learning_trend_ok(
    records: Sequence[EpochRecord],
    target_depth: int = 3,
    window: int = 200,
    slack_fraction: float = 0.05,
) -> bool:
    """Depth trends down and reward trends up until the target depth holds.

    Over the window from epoch 0 to the first epoch whose moving-average
    depth reaches ``target_depth`` (within 0.05), the depth moving average
    must never rise, and the reward moving average never fall, by more than
    ``slack_fraction`` of its total change (an absolute noise floor of 0.1
    depth / 0.25 reward applies).
    """
    depths = moving_average([r.final_depth for r in records], window)
    rewards = moving_average([r.cum_reward for r in records], window)
    reached = np.nonzero(depths <= target_depth + 0.05)[0]
    if len(reached) == 0:
        return False
    end = int(reached[0])
    d, rw = depths[: end + 1], rewards[: end + 1]
    depth_tol = max(slack_fraction * (d[0] - d[-1]), 0.1)
    reward_tol = max(slack_fraction * (rw[-1] - rw[0]), 0.25)
    max_rise = float(np.max(d - np.minimum.accumulate(d)))
    max_fall = float(np.max(np.maximum.accumulate(rw) - rw))
    return max_rise <= depth_tol and max_fall <= reward_tol
