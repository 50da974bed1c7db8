import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qcopt.bench import generate_bv
from qcopt.circuit import Circuit, Cnot, Hadamard, parse_circuit
from qcopt.rewards import (
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

HH = Circuit(1, (Hadamard(0), Hadamard(0)))
OPT_BV3 = parse_circuit("qubits 3\nh 0\nh 1\nh 2\ncx 2 0 1\nh 0\nh 1\nh 2\n")


class TestRatio:
    def test_identity(self):
        assert ratio(HH, HH) == 1.0

    def test_bv3_improvement(self):
        assert ratio(generate_bv(3), OPT_BV3) == pytest.approx(4 / 3)

    def test_regression(self):
        assert ratio(OPT_BV3, generate_bv(3)) == 0.75

    def test_empty_after_rejected(self):
        with pytest.raises(EmptyCircuitError):
            ratio(HH, Circuit(1))


class TestFosel:
    def test_empty_cost(self):
        assert fosel_cost(Circuit(2)) == 0.0

    def test_hh_cost(self):
        assert fosel_cost(HH) == pytest.approx(1.6)

    def test_bv3_cost(self):
        assert fosel_cost(generate_bv(3)) == pytest.approx(2.4)

    def test_identity_reward(self):
        assert fosel_reward(HH, HH) == 0.0

    def test_cancellation_reward(self):
        assert fosel_reward(HH, Circuit(1)) == pytest.approx(1.6)

    def test_merge_reward(self):
        before = Circuit(3, (Cnot(0, (1,)), Cnot(0, (2,))))
        after = Circuit(3, (Cnot(0, (1, 2)),))
        assert fosel_reward(before, after) == pytest.approx(1.0)


class TestSignedPow:
    def test_zero_base(self):
        assert signed_pow(0.0, 0.3) == 0.0

    def test_integer_power(self):
        assert signed_pow(2, 3) == 8.0

    def test_negative_base(self):
        assert signed_pow(-2, 0.5) == pytest.approx(-math.sqrt(2))

    def test_nonpositive_exponent_rejected(self):
        with pytest.raises(ValueError):
            signed_pow(1.0, 0.0)

    @given(st.floats(-10, 10, allow_nan=False), st.floats(0.01, 5))
    def test_odd_in_x(self, x, p):
        assert signed_pow(-x, p) == pytest.approx(-signed_pow(x, p))


class TestRPow:
    def test_reject_is_zero(self):
        assert r_pow(HH, HH, Action.REJECT) == 0.0

    def test_apply_with_zero_delta(self):
        assert r_pow(HH, Circuit(1), Action.APPLY) == pytest.approx(0.1)

    def test_apply_cancel_example(self):
        before = Circuit(2, (Cnot(0, (1,)), Cnot(0, (1,)), Hadamard(0)))
        after = Circuit(2, (Hadamard(0),))
        assert r_pow(before, after, Action.APPLY) == pytest.approx(8.1)

    def test_cost_parameter(self):
        params = RewardParams(cost_c=0.2)
        assert r_pow(HH, Circuit(1), Action.APPLY, params) == pytest.approx(0.2)

    def test_cost_out_of_range(self):
        for bad in (0.0, -0.1, 0.25):
            with pytest.raises(ValueError):
                RewardParams(cost_c=bad)


class TestDispatch:
    def test_ratio_identity(self):
        assert reward(RewardKind.RATIO, HH, HH, Action.REJECT) == 1.0

    def test_fosel_cancellation(self):
        assert reward(RewardKind.FOSEL, HH, Circuit(1), Action.APPLY) == pytest.approx(1.6)

    def test_rpow_with_params(self):
        got = reward(RewardKind.RPOW, HH, HH, Action.APPLY, RewardParams(cost_c=0.2))
        assert got == pytest.approx(0.2)


class TestProperties:
    @given(st.integers(2, 8))
    def test_rpow_reject_zero_on_bv(self, n):
        c = generate_bv(n)
        assert r_pow(c, c, Action.REJECT) == 0.0

    @given(st.floats(0.1, 3, allow_nan=False), st.floats(0.1, 3, allow_nan=False))
    @settings(max_examples=50)
    def test_antisymmetry_of_delta_term(self, a, b):
        assume(abs(a - b) > 1e-6)
        # The signed power of the strength delta flips sign when the
        # endpoints swap (with the exponent held fixed).
        assert signed_pow(a - b, 1.7) == pytest.approx(-signed_pow(b - a, 1.7))

    @given(st.floats(0.01, 4), st.floats(1, 3), st.floats(1, 3))
    @settings(max_examples=50)
    def test_monotone_in_exponent_for_small_gain(self, x, p1, p2):
        assume(x < 1)
        lo, hi = sorted((p1, p2))
        assert signed_pow(x, hi) <= signed_pow(x, lo) + 1e-12
