"""Tabular Q-learning over rewrite decisions.

Episode protocol: each step draws one applicable rewrite uniformly at random,
encodes a compact state key from the sign of the metric deltas the rewrite
would cause, and lets the agent accept (apply) or reject it. The episode ends
when no rewrite applies or after ``max_steps`` steps; every epoch restarts
from the original circuit with the Q-table carried over.

The state key is (rule, sign Δdepth, sign Δcount, sign Δstrength) with deltas
oriented so +1 means the metric would improve; 108 keys total.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .circuit import Circuit, depth, gate_count
from .rewards import Action, RewardKind, RewardParams, reward
from .rewrite import Match, RuleId, apply_match, find_matches


class StateKey(NamedTuple):
    rule: RuleId
    d_depth: int
    d_count: int
    d_str: int


#: Sentinel next-state for the final update of an episode.
TERMINAL = None


class QTable(dict):
    """StateKey -> (q_reject, q_apply); unseen keys read as (0.0, 0.0)."""

    def __missing__(self, key: StateKey) -> tuple[float, float]:
        return (0.0, 0.0)


@dataclass(frozen=True)
class AgentConfig:
    alpha: float = 0.1
    gamma: float = 0.9
    eps0: float = 1.0
    eps_min: float = 0.05
    eps_decay_fraction: float = 0.5
    epochs: int = 8000
    max_steps: int | None = None  # None: 10 * n_qubits at train time
    seed: int = 1
    reward_kind: RewardKind = RewardKind.RPOW
    reward_params: RewardParams = field(default_factory=RewardParams)

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not 0.0 <= self.eps0 <= 1.0:
            raise ValueError(f"eps0 must lie in [0, 1], got {self.eps0}")
        if not 0.0 <= self.eps_min <= self.eps0:
            raise ValueError(f"eps_min must lie in [0, eps0], got {self.eps_min}")
        if not 0.0 < self.eps_decay_fraction <= 1.0:
            raise ValueError(
                f"eps_decay_fraction must lie in (0, 1], got {self.eps_decay_fraction}"
            )
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    steps: int
    applied: int
    cum_reward: float
    final_depth: int
    final_count: int
    final_str: float


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def _state_key(before: Circuit, after: Circuit, rule: RuleId) -> StateKey:
    # Pair totals are exact integers; comparing them avoids float noise in
    # the strength sign (both circuits share the same denominator).
    return StateKey(
        rule,
        _sign(depth(before) - depth(after)),
        _sign(gate_count(before) - gate_count(after)),
        _sign(before._pair_total - after._pair_total),
    )


def encode_state(c: Circuit, m: Match) -> StateKey:
    """State key for deciding on match m: signs of the metric improvements."""
    return _state_key(c, apply_match(c, m), m.rule)


def select_action(q: QTable, s: StateKey, epsilon: float, rng: np.random.Generator) -> Action:
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    if epsilon > 0.0 and rng.random() < epsilon:
        return Action(int(rng.integers(2)))
    q_reject, q_apply = q[s]
    return Action.APPLY if q_apply > q_reject else Action.REJECT


def q_update(
    q: QTable,
    s: StateKey,
    a: Action,
    r: float,
    s_next: StateKey | None,
    cfg: AgentConfig,
) -> QTable:
    max_next = 0.0 if s_next is TERMINAL else max(q[s_next])
    values = list(q[s])
    values[a] += cfg.alpha * (r + cfg.gamma * max_next - values[a])
    q[s] = (values[0], values[1])
    return q


def epsilon_at(epoch: int, cfg: AgentConfig) -> float:
    decay_end = cfg.eps_decay_fraction * cfg.epochs
    if decay_end <= 0 or epoch >= decay_end:
        return cfg.eps_min
    return cfg.eps0 + (cfg.eps_min - cfg.eps0) * (epoch / decay_end)


def _episode(
    start: Circuit,
    q: QTable,
    epoch: int,
    cfg: AgentConfig,
    rng: np.random.Generator,
) -> tuple[EpochRecord, Circuit]:
    from .circuit import interaction_strength

    max_steps = cfg.max_steps if cfg.max_steps is not None else 10 * start.n_qubits
    epsilon = epsilon_at(epoch, cfg)
    c = start
    pending: tuple[StateKey, Action, float] | None = None
    steps = applied = 0
    cum_reward = 0.0
    while steps < max_steps:
        matches = find_matches(c)
        if not matches:
            break
        m = matches[int(rng.integers(len(matches)))]
        after = apply_match(c, m)
        s = _state_key(c, after, m.rule)
        if pending is not None:
            q_update(q, *pending, s_next=s, cfg=cfg)
        a = select_action(q, s, epsilon, rng)
        if a is Action.APPLY:
            r = reward(cfg.reward_kind, c, after, a, cfg.reward_params)
            c = after
            applied += 1
        else:
            r = reward(cfg.reward_kind, c, c, a, cfg.reward_params)
        cum_reward += r
        steps += 1
        pending = (s, a, r)
    if pending is not None:
        q_update(q, *pending, s_next=TERMINAL, cfg=cfg)
    record = EpochRecord(
        epoch=epoch,
        steps=steps,
        applied=applied,
        cum_reward=cum_reward,
        final_depth=depth(c),
        final_count=gate_count(c),
        final_str=interaction_strength(c),
    )
    return record, c


def run_epoch(
    start: Circuit,
    q: QTable,
    epoch: int,
    cfg: AgentConfig,
    rng: np.random.Generator,
) -> tuple[QTable, EpochRecord]:
    """One episode from ``start``; mutates and returns the shared Q-table."""
    record, _ = _episode(start, q, epoch, cfg, rng)
    return q, record


def train_with_best(
    start: Circuit, cfg: AgentConfig
) -> tuple[QTable, list[EpochRecord], Circuit]:
    """Like :func:`train`, also returning the lowest-depth episode-final circuit."""
    if len(start.gates) == 0:
        raise ValueError("cannot train on an empty circuit")
    rng = np.random.default_rng(cfg.seed)
    q = QTable()
    records: list[EpochRecord] = []
    best = start
    for epoch in range(cfg.epochs):
        record, final = _episode(start, q, epoch, cfg, rng)
        records.append(record)
        if record.final_depth < depth(best):
            best = final
    return q, records, best


def train(start: Circuit, cfg: AgentConfig) -> tuple[QTable, list[EpochRecord]]:
    """Run ``cfg.epochs`` episodes sharing one Q-table and one RNG stream."""
    q, records, _ = train_with_best(start, cfg)
    return q, records


def with_auto_steps(cfg: AgentConfig, circuit: Circuit) -> AgentConfig:
    """Resolve a None max_steps to the 10-steps-per-qubit default."""
    if cfg.max_steps is not None:
        return cfg
    return replace(cfg, max_steps=10 * circuit.n_qubits)
