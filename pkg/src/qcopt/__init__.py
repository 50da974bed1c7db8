"""qcopt: Q-learning optimization of CNOT+Hadamard circuits via template rewrites."""

from .circuit import (
    Circuit,
    CircuitError,
    Cnot,
    Gate,
    Hadamard,
    ParseError,
    Schedule,
    depth,
    gate_count,
    interaction_strength,
    pair_strength,
    parse_circuit,
    schedule_asap,
    serialize_circuit,
)
from .rewrite import Match, MatchError, RuleId, apply_match, find_matches, tentative_metrics
from .rewards import (
    Action,
    EmptyCircuitError,
    RewardKind,
    RewardParams,
    fosel_cost,
    fosel_reward,
    r_pow,
    ratio,
    reward,
    signed_pow,
)
from .qlearn import (
    AgentConfig,
    EpochRecord,
    QTable,
    StateKey,
    TERMINAL,
    encode_state,
    epsilon_at,
    q_update,
    run_epoch,
    select_action,
    train,
    train_with_best,
)
from .bench import (
    OracleResult,
    SummaryRow,
    equivalent,
    generate_bv,
    learning_trend_ok,
    oracle_min_depth,
    run_comparison,
    run_experiments,
    simulate,
    summarize,
)

__version__ = "0.1.0"
