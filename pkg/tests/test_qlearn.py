import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcopt.bench import equivalent, generate_bv
from qcopt.circuit import Circuit, Cnot, Hadamard, depth
from qcopt.qlearn import (
    TERMINAL,
    AgentConfig,
    QTable,
    StateKey,
    encode_state,
    epsilon_at,
    q_update,
    run_epoch,
    select_action,
    train,
    train_with_best,
    with_auto_steps,
)
from qcopt.rewards import Action, RewardKind
from qcopt.rewrite import RuleId, find_matches

HH = Circuit(1, (Hadamard(0), Hadamard(0)))


def key(rule=RuleId.HH_CANCEL, d_depth=1, d_count=1, d_str=0):
    return StateKey(rule, d_depth, d_count, d_str)


class TestConfigValidation:
    def test_defaults_valid(self):
        cfg = AgentConfig()
        assert cfg.alpha == 0.1 and cfg.gamma == 0.9 and cfg.epochs == 8000

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"alpha": 0.0},
            {"alpha": 1.5},
            {"gamma": 1.0},
            {"eps0": 1.2},
            {"eps_min": 0.5, "eps0": 0.1},
            {"eps_decay_fraction": 0.0},
            {"epochs": -1},
            {"max_steps": 0},
            {"seed": -1},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            AgentConfig(**kwargs)

    def test_auto_steps(self):
        cfg = with_auto_steps(AgentConfig(), generate_bv(4))
        assert cfg.max_steps == 40
        pinned = AgentConfig(max_steps=7)
        assert with_auto_steps(pinned, generate_bv(4)) is pinned


class TestEncodeState:
    def test_hh_all_improving(self):
        s = encode_state(HH, find_matches(HH)[0])
        assert s == StateKey(RuleId.HH_CANCEL, 1, 1, 0)

    def test_bv3_reverse_worsens(self):
        c = generate_bv(3)
        m = next(m for m in find_matches(c) if m.positions == (3,))
        assert encode_state(c, m) == StateKey(RuleId.CNOT_REVERSE, -1, -1, 0)

    def test_merge_depth_only(self):
        c = Circuit(3, (Cnot(0, (1,)), Cnot(0, (2,))))
        m = next(m for m in find_matches(c) if m.rule is RuleId.CNOT_MERGE)
        assert encode_state(c, m) == StateKey(RuleId.CNOT_MERGE, 1, 0, 0)


class TestSelectAction:
    def test_greedy_argmax(self):
        q = QTable({key(): (0.5, 0.1)})
        assert select_action(q, key(), 0.0, np.random.default_rng(0)) is Action.REJECT

    def test_tie_breaks_to_reject(self):
        assert select_action(QTable(), key(), 0.0, np.random.default_rng(0)) is Action.REJECT

    def test_greedy_prefers_apply(self):
        q = QTable({key(): (0.1, 0.5)})
        assert select_action(q, key(), 0.0, np.random.default_rng(0)) is Action.APPLY

    def test_uniform_at_full_exploration(self):
        rng = np.random.default_rng(7)
        draws = [select_action(QTable(), key(), 1.0, rng) for _ in range(10000)]
        frac = sum(a is Action.APPLY for a in draws) / len(draws)
        assert 0.47 <= frac <= 0.53

    def test_epsilon_out_of_range(self):
        with pytest.raises(ValueError):
            select_action(QTable(), key(), 1.5, np.random.default_rng(0))


class TestQUpdate:
    def test_terminal_from_zero(self):
        q = q_update(QTable(), key(), Action.APPLY, 0.1, TERMINAL, AgentConfig())
        assert q[key()] == (0.0, pytest.approx(0.01))

    def test_bootstrapped(self):
        s, s2 = key(), key(rule=RuleId.CNOT_CANCEL)
        q = QTable({s: (0.0, 1.0), s2: (1.0, 0.5)})
        q_update(q, s, Action.APPLY, 8.1, s2, AgentConfig())
        assert q[s][Action.APPLY] == pytest.approx(1.8)

    def test_degenerate_overwrite(self):
        cfg = AgentConfig(alpha=1.0, gamma=0.0)
        q = QTable({key(): (3.0, -2.0)})
        q_update(q, key(), Action.REJECT, 0.25, key(), cfg)
        assert q[key()][Action.REJECT] == 0.25


class TestEpsilonSchedule:
    def test_endpoints(self):
        cfg = AgentConfig()
        assert epsilon_at(0, cfg) == cfg.eps0
        assert epsilon_at(4000, cfg) == cfg.eps_min
        assert epsilon_at(7999, cfg) == cfg.eps_min

    def test_midpoint(self):
        assert epsilon_at(2000, AgentConfig()) == pytest.approx(0.525)

    def test_zero_epochs(self):
        assert epsilon_at(0, AgentConfig(epochs=0)) == AgentConfig().eps_min


class TestRunEpoch:
    def test_greedy_fresh_table_rejects_everything(self):
        cfg = AgentConfig(eps0=0.0, eps_min=0.0, max_steps=5)
        _, rec = run_epoch(HH, QTable(), 0, cfg, np.random.default_rng(0))
        assert rec.final_depth == 2
        assert rec.applied == 0
        assert rec.steps == 5

    def test_full_exploration_reaches_empty(self):
        cfg = AgentConfig(eps0=1.0, eps_min=1.0, max_steps=10)
        _, rec = run_epoch(HH, QTable(), 0, cfg, np.random.default_rng(3))
        assert rec.final_depth == 0
        assert rec.cum_reward == pytest.approx(0.1 * rec.applied)

    def test_no_matches_terminates_immediately(self):
        c = Circuit(1, (Hadamard(0),))
        _, rec = run_epoch(c, QTable(), 0, AgentConfig(), np.random.default_rng(0))
        assert (rec.steps, rec.final_depth, rec.cum_reward) == (0, 1, 0.0)


class TestTrain:
    def test_zero_epochs(self):
        q, records = train(HH, AgentConfig(epochs=0))
        assert records == [] and q == QTable()

    def test_empty_start_rejected(self):
        with pytest.raises(ValueError):
            train(Circuit(2), AgentConfig(epochs=1))

    def test_deterministic(self):
        cfg = AgentConfig(epochs=50, seed=11)
        assert train(generate_bv(3), cfg) == train(generate_bv(3), cfg)

    def test_seed_changes_stream(self):
        base = AgentConfig(epochs=50, seed=11)
        other = AgentConfig(epochs=50, seed=12)
        c = generate_bv(3)
        assert train(c, base)[1] != train(c, other)[1]

    def test_best_circuit_equivalent_and_minimal(self):
        c = generate_bv(3)
        _, records, best = train_with_best(c, AgentConfig(epochs=300, seed=2))
        assert depth(best) == min([depth(c)] + [r.final_depth for r in records])
        assert equivalent(c, best)

    def test_cum_reward_is_apply_cost_on_bv(self):
        # BV trajectories never change the interaction strength, so every
        # accepted rewrite earns exactly the action cost under RPOW.
        _, records = train(generate_bv(3), AgentConfig(epochs=100, seed=5))
        for r in records:
            assert r.cum_reward == pytest.approx(0.1 * r.applied)

    def test_depth_growth_bound(self):
        c = generate_bv(3)
        cfg = AgentConfig(epochs=100, seed=9, max_steps=8)
        _, records = train(c, cfg)
        assert all(r.final_depth <= depth(c) + 2 * cfg.max_steps for r in records)

    def test_fosel_reward_kind_runs(self):
        _, records = train(HH, AgentConfig(epochs=5, reward_kind=RewardKind.FOSEL, max_steps=4))
        assert len(records) == 5


class TestQTableBounds:
    @given(st.integers(0, 10_000))
    @settings(max_examples=30)
    def test_bounded_by_reward_range(self, seed):
        rng = np.random.default_rng(seed)
        cfg = AgentConfig()
        q = QTable()
        r_lo, r_hi = -1.0, 1.0
        keys = [key(d_depth=d) for d in (-1, 0, 1)]
        for _ in range(200):
            s = keys[int(rng.integers(3))]
            a = Action(int(rng.integers(2)))
            r = float(rng.uniform(r_lo, r_hi))
            s_next = keys[int(rng.integers(3))] if rng.random() < 0.9 else TERMINAL
            q_update(q, s, a, r, s_next, cfg)
        bound = max(abs(r_lo), abs(r_hi)) / (1 - cfg.gamma)
        assert all(abs(v) <= bound + 1e-9 for pair in q.values() for v in pair)


class TestEpisodeSafety:
    def test_intermediate_circuits_stay_equivalent(self):
        c = generate_bv(3)
        _, _, best = train_with_best(c, AgentConfig(epochs=50, seed=4, max_steps=12))
        assert equivalent(c, best)
