import math
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, rel_err
from fsorelay.errors import DomainError
from fsorelay.numerics import (
    ZERO,
    SignedLogValue,
    log_gamma_signed,
    log_sum_signed,
    q_function,
    sum_signed_log,
)


def slv(x: float) -> SignedLogValue:
    return SignedLogValue.from_float(x)


class TestSignedLogValue:
    def test_zero_has_minus_inf_log(self):
        assert ZERO.sign == 0 and ZERO.log_magnitude == -math.inf
        assert slv(0.0) == ZERO

    @pytest.mark.parametrize("bad", [(2, 0.0), (0, 1.0), (1, -math.inf), (1, math.nan)])
    def test_rejects_inconsistent_fields(self, bad):
        with pytest.raises(ValueError):
            SignedLogValue(*bad)

    def test_materialize_overflow(self):
        with pytest.raises(OverflowError):
            SignedLogValue(1, 710.0).materialize()

    def test_arithmetic(self):
        a, b = slv(-3.0), slv(0.5)
        assert math.isclose((a * b).materialize(), -1.5, rel_tol=1e-15)
        assert math.isclose((a / b).materialize(), -6.0, rel_tol=1e-15)
        assert (-a).materialize() == pytest.approx(3.0, rel=1e-15)
        assert (a * ZERO) == ZERO
        with pytest.raises(ZeroDivisionError):
            a / ZERO

    @given(st.sampled_from([-1, 1]), st.floats(min_value=-700.0, max_value=700.0))
    def test_round_trip(self, sign, logmag):
        v = SignedLogValue(sign, logmag)
        back = slv(v.materialize())
        assert back.sign == sign
        # exp() is correct to an ulp, log() maps that to ~eps absolute in the exponent
        assert abs(back.log_magnitude - logmag) <= 4 * sys.float_info.epsilon * max(1.0, abs(logmag))

    @given(st.floats(allow_nan=False, allow_infinity=False).filter(lambda x: x != 0.0))
    def test_float_round_trip(self, x):
        back = slv(x).materialize()
        # exp of a log of size L carries ~L ulps of relative error
        tol = 2 * sys.float_info.epsilon * (1.0 + abs(math.log(abs(x))))
        assert back == pytest.approx(x, rel=tol)


class TestLogGamma:
    @pytest.mark.parametrize("key", list(DATA["log_gamma"]))
    def test_against_mpmath(self, key):
        sign, logmag = DATA["log_gamma"][key]
        got = log_gamma_signed(float(key))
        assert got.sign == sign
        assert got.log_magnitude == pytest.approx(logmag, rel=1e-13, abs=1e-13)

    def test_trivial_values(self):
        assert log_gamma_signed(1.0) == SignedLogValue(1, 0.0)
        half = log_gamma_signed(0.5)
        assert half.sign == 1 and half.log_magnitude == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-15)

    def test_negative_half(self):
        got = log_gamma_signed(-0.5)
        assert got.sign == -1
        assert got.log_magnitude == pytest.approx(math.log(2 * math.sqrt(math.pi)), abs=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -50.0, math.nan])
    def test_poles(self, x):
        with pytest.raises(DomainError):
            log_gamma_signed(x)

    @pytest.mark.parametrize("x", [0.3, 1.7, -0.4, 5.5])
    def test_recurrence_listed_points(self, x):
        lhs = log_gamma_signed(x + 1).materialize()
        rhs = x * log_gamma_signed(x).materialize()
        assert rel_err(lhs, rhs) < 1e-10

    @given(
        st.floats(min_value=-30.0, max_value=150.0).filter(
            lambda x: abs(x - round(x)) > 1e-3 or x > 0.5
        )
    )
    def test_recurrence_property(self, x):
        # compare in the log domain so large arguments do not overflow
        lhs = log_gamma_signed(x + 1)
        rhs = slv(x) * log_gamma_signed(x)
        assert lhs.sign == rhs.sign
        assert lhs.log_magnitude == pytest.approx(rhs.log_magnitude, rel=1e-10, abs=1e-10)


class TestQFunction:
    def test_trivial(self):
        assert q_function(0.0) == 0.5
        assert q_function(math.inf) == 0.0

    def test_one(self):
        assert q_function(1.0) == pytest.approx(0.15865525393145705, rel=1e-15)

    @pytest.mark.parametrize("x,ref", [row for row in DATA["q"] if row[0] <= 37.5])
    def test_relative_accuracy(self, x, ref):
        assert rel_err(q_function(x), ref) <= 1e-12

    @pytest.mark.parametrize("x,ref", [row for row in DATA["q"] if row[0] > 37.5])
    def test_underflow_tail(self, x, ref):
        # Q(x) is subnormal or below the double range here, so relative accuracy
        # is not representable; the error is bounded by the smallest normal double
        assert abs(q_function(x) - ref) <= sys.float_info.min

    def test_array_input(self):
        xs = np.array([0.0, 1.0, 2.0])
        out = q_function(xs)
        assert out.shape == (3,) and out[0] == 0.5

    @pytest.mark.parametrize("x", [-1e-300, -1.0, math.nan])
    def test_rejects_negative(self, x):
        with pytest.raises(DomainError):
            q_function(x)

    @given(st.lists(st.floats(min_value=0.0, max_value=45.0), min_size=2, max_size=50))
    def test_monotone(self, xs):
        xs = sorted(xs)
        qs = q_function(np.array(xs))
        assert np.all(np.diff(qs) <= 0)


class TestSumSignedLog:
    def test_empty(self):
        assert sum_signed_log([]) == 0.0

    def test_exact_cancellation(self):
        assert sum_signed_log([SignedLogValue(1, math.log(2)), SignedLogValue(-1, math.log(2))]) == 0.0

    def test_term_out_of_range_overflows(self):
        big = SignedLogValue(1, math.log(1e308) + math.log(2.0))
        with pytest.raises(OverflowError):
            sum_signed_log([big])

    def test_sum_out_of_range_overflows(self):
        t = SignedLogValue(1, math.log(1e308))
        with pytest.raises(OverflowError):
            sum_signed_log([t, t])

    def test_two_1e300_is_representable(self):
        t = SignedLogValue(1, math.log(1e300))
        assert sum_signed_log([t, t]) == pytest.approx(2e300, rel=1e-13)

    def test_small_terms_survive(self):
        terms = [slv(1.0), slv(1e-17), slv(1e-17), slv(-1.0)]
        assert sum_signed_log(terms) == pytest.approx(2e-17, rel=1e-12)

    def test_zero_terms_ignored(self):
        assert sum_signed_log([ZERO, slv(3.0), ZERO]) == pytest.approx(3.0)

    @settings(max_examples=200)
    @given(
        st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=40),
        st.randoms(use_true_random=False),
    )
    def test_permutation_invariant(self, xs, rnd):
        terms = [slv(x) for x in xs]
        shuffled = terms[:]
        rnd.shuffle(shuffled)
        a, b = sum_signed_log(terms), sum_signed_log(shuffled)
        assert a == b or rel_err(a, b) <= 1e-12

    @given(st.lists(st.floats(min_value=-1e3, max_value=1e3, allow_nan=False), min_size=1, max_size=30))
    def test_log_sum_matches_linear(self, xs):
        terms = [slv(x) for x in xs]
        linear = sum_signed_log(terms)
        logged = log_sum_signed([t.sign for t in terms], [t.log_magnitude for t in terms])
        if linear == 0.0:
            assert logged == ZERO
        else:
            assert logged.materialize() == pytest.approx(linear, rel=1e-12)

    def test_log_sum_beyond_double_range(self):
        v = log_sum_signed([1, 1], [1000.0, 1000.0])
        assert v.sign == 1 and v.log_magnitude == pytest.approx(1000.0 + math.log(2.0))
