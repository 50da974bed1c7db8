"""Per-step reward functions over (circuit-before, circuit-after, action).

Three kinds:

- RATIO: depth(before) / depth(after).
- FOSEL: difference of the cost q(c) = depth(c) - 0.2 * gate_count(c).
- RPOW: action cost plus (Δ interaction strength) raised to the depth ratio;
  the exponentiation is totalized through :func:`signed_pow` because a
  negative base with a real exponent has no real value.

The RPOW depth ratio is only evaluated when the interaction-strength delta is
nonzero: a zero delta contributes exactly 0 for any positive exponent, which
keeps reward evaluation total on episodes that empty the circuit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum

from .circuit import Circuit, depth, gate_count, interaction_strength


class Action(IntEnum):
    REJECT = 0
    APPLY = 1


class RewardKind(Enum):
    RATIO = "ratio"
    RPOW = "rpow"
    FOSEL = "fosel"


@dataclass(frozen=True)
class RewardParams:
    cost_c: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.cost_c <= 0.2:
            raise ValueError(f"cost_c must lie in (0, 0.2], got {self.cost_c}")


class EmptyCircuitError(ValueError):
    """Depth-0 after-circuit where a depth ratio is required."""


def ratio(before: Circuit, after: Circuit) -> float:
    d_after = depth(after)
    if d_after == 0:
        raise EmptyCircuitError("depth ratio is undefined against an empty circuit")
    return depth(before) / d_after


def fosel_cost(c: Circuit) -> float:
    return depth(c) - 0.2 * gate_count(c)


def fosel_reward(before: Circuit, after: Circuit) -> float:
    return fosel_cost(before) - fosel_cost(after)


def signed_pow(x: float, p: float) -> float:
    """sign(x) * |x|**p; odd in x, and 0 at x = 0 for any p > 0."""
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {p}")
    if x == 0:
        return 0.0
    return math.copysign(abs(x) ** p, x)


def r_pow(
    before: Circuit,
    after: Circuit,
    action: Action,
    params: RewardParams = RewardParams(),
) -> float:
    cost = params.cost_c if action is Action.APPLY else 0.0
    d_str = interaction_strength(before) - interaction_strength(after)
    if d_str == 0.0:
        return cost
    return cost + signed_pow(d_str, ratio(before, after))


def reward(
    kind: RewardKind,
    before: Circuit,
    after: Circuit,
    action: Action,
    params: RewardParams = RewardParams(),
) -> float:
    if kind is RewardKind.RATIO:
        return ratio(before, after)
    if kind is RewardKind.FOSEL:
        return fosel_reward(before, after)
    return r_pow(before, after, action, params)
