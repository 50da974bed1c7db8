"""Pattern matcher and applier for the four local rewrite templates.

Rules (all adjacency-based: no gate may touch an involved wire strictly
between the matched gates):

- HH_CANCEL:   h(w) h(w)                      -> (removed)
- CNOT_CANCEL: cx(c, T) cx(c, T)              -> (removed)
- CNOT_MERGE:  cx(c, T1) cx(c, T2), T1 ∩ T2 = ∅ -> cx(c, T1 ∪ T2)
- CNOT_REVERSE: cx(c, {t}) -> h(c) h(t) cx(t, {c}) h(c) h(t)

CNOT_REVERSE only fires on single-target CNOTs and only in the expanding
direction; the contracting direction is reachable compositionally (reverse
again, then cancel the Hadamard pairs).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .circuit import Circuit, Cnot, Gate, Hadamard, gate_wires


class RuleId(Enum):
    # Declaration order is the match enumeration order.
    HH_CANCEL = "hh_cancel"
    CNOT_CANCEL = "cnot_cancel"
    CNOT_MERGE = "cnot_merge"
    CNOT_REVERSE = "cnot_reverse"


_RULE_ORDER = {rule: i for i, rule in enumerate(RuleId)}


class MatchError(ValueError):
    """Match does not (or no longer does) apply to the given circuit."""


@dataclass(frozen=True)
class Match:
    rule: RuleId
    positions: tuple[int, ...]
    anchor_wires: frozenset[int]


def find_matches(c: Circuit) -> list[Match]:
    """All current matches, ordered by rule then by first gate index.

    Cached on the (immutable) circuit: reject-heavy episodes re-query the
    same circuit every step.
    """
    cached = c.__dict__.get("_matches")
    if cached is not None:
        return cached
    matches = _find_matches(c)
    c.__dict__["_matches"] = matches
    return matches


def _find_matches(c: Circuit) -> list[Match]:
    gates = c.gates
    succ: dict[tuple[int, int], int] = {}
    pred: dict[tuple[int, int], int] = {}
    for w, seq in enumerate(c.wire_order):
        for a, b in zip(seq, seq[1:]):
            succ[a, w] = b
            pred[b, w] = a

    hh: list[Match] = []
    cancel: list[Match] = []
    merge: list[Match] = []
    reverse: list[Match] = []
    for i, gate in enumerate(gates):
        if isinstance(gate, Hadamard):
            j = succ.get((i, gate.wire))
            if j is not None and isinstance(gates[j], Hadamard):
                hh.append(Match(RuleId.HH_CANCEL, (i, j), frozenset((gate.wire,))))
            continue
        if len(gate.targets) == 1:
            reverse.append(
                Match(RuleId.CNOT_REVERSE, (i,), frozenset((gate.control, gate.targets[0])))
            )
        j = succ.get((i, gate.control))
        if j is None:
            continue
        other = gates[j]
        if not isinstance(other, Cnot) or other.control != gate.control:
            continue
        if other.targets == gate.targets:
            if all(succ.get((i, t)) == j for t in gate.targets):
                wires = frozenset(gate_wires(gate))
                cancel.append(Match(RuleId.CNOT_CANCEL, (i, j), wires))
        elif not set(gate.targets) & set(other.targets):
            clear = all(
                succ.get((i, t), len(gates)) > j for t in gate.targets
            ) and all(pred.get((j, t), -1) < i for t in other.targets)
            if clear:
                wires = frozenset(gate_wires(gate)) | frozenset(other.targets)
                merge.append(Match(RuleId.CNOT_MERGE, (i, j), wires))
    # Per-list order is already by first index except hh, whose wire-major
    # scan can interleave; sort all for uniformity.
    out: list[Match] = []
    for group in (hh, cancel, merge, reverse):
        group.sort(key=lambda m: m.positions)
        out.extend(group)
    return out


def _touched_between(c: Circuit, i: int, j: int, wires: frozenset[int]) -> bool:
    for k in range(i + 1, j):
        if any(w in wires for w in gate_wires(c.gates[k])):
            return True
    return False


def _check(c: Circuit, m: Match) -> None:
    gates = c.gates
    if not all(0 <= p < len(gates) for p in m.positions):
        raise MatchError(f"positions {m.positions} out of range")
    if m.rule is RuleId.CNOT_REVERSE:
        if len(m.positions) != 1:
            raise MatchError("reverse match takes exactly one position")
        gate = gates[m.positions[0]]
        if not (isinstance(gate, Cnot) and len(gate.targets) == 1):
            raise MatchError(f"gate at {m.positions[0]} is not a single-target cnot")
        return
    if len(m.positions) != 2 or m.positions[0] >= m.positions[1]:
        raise MatchError(f"bad position pair {m.positions}")
    i, j = m.positions
    a, b = gates[i], gates[j]
    if m.rule is RuleId.HH_CANCEL:
        if not (isinstance(a, Hadamard) and isinstance(b, Hadamard) and a.wire == b.wire):
            raise MatchError("pattern is not a same-wire hadamard pair")
        involved = frozenset((a.wire,))
    else:
        if not (isinstance(a, Cnot) and isinstance(b, Cnot) and a.control == b.control):
            raise MatchError("pattern is not a cnot pair sharing a control")
        if m.rule is RuleId.CNOT_CANCEL:
            if a.targets != b.targets:
                raise MatchError("cancel needs identical target sets")
        else:
            if set(a.targets) & set(b.targets):
                raise MatchError("merge needs disjoint target sets")
        involved = frozenset(gate_wires(a)) | frozenset(gate_wires(b))
    if _touched_between(c, i, j, involved):
        raise MatchError("an intervening gate touches an involved wire")


def apply_match(c: Circuit, m: Match) -> Circuit:
    """Apply one rewrite, returning a new circuit; raises MatchError when stale."""
    _check(c, m)
    gates = c.gates
    if m.rule is RuleId.CNOT_REVERSE:
        (i,) = m.positions
        gate = gates[i]
        assert isinstance(gate, Cnot)
        ctrl, tgt = gate.control, gate.targets[0]
        replacement: tuple[Gate, ...] = (
            Hadamard(ctrl),
            Hadamard(tgt),
            Cnot(tgt, (ctrl,)),
            Hadamard(ctrl),
            Hadamard(tgt),
        )
        return Circuit(c.n_qubits, gates[:i] + replacement + gates[i + 1 :])
    i, j = m.positions
    if m.rule is RuleId.CNOT_MERGE:
        a, b = gates[i], gates[j]
        assert isinstance(a, Cnot) and isinstance(b, Cnot)
        merged = Cnot(a.control, a.targets + b.targets)
        return Circuit(c.n_qubits, gates[:i] + (merged,) + gates[i + 1 : j] + gates[j + 1 :])
    # HH_CANCEL and CNOT_CANCEL both just drop the pair.
    return Circuit(c.n_qubits, gates[:i] + gates[i + 1 : j] + gates[j + 1 :])


def tentative_metrics(c: Circuit, m: Match) -> tuple[int, int, float]:
    """(depth, gate_count, interaction_strength) of the circuit after applying m."""
    from .circuit import depth, gate_count, interaction_strength

    after = apply_match(c, m)
    return depth(after), gate_count(after), interaction_strength(after)
