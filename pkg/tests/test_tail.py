import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pocdma.errors import DomainError
from pocdma.tail import hazard_ratio, hazard_ratio_derivative, log_two_q, q_function

# -1/mills(t) from tests/oracles.py, 40 digits
HAZARD_REF = {
    -1.0: -0.28759997093917836123,
    10.0: -10.098093233962511963,
    40.0: -40.024968847207263723,
    -30.0: -1.473646134878547519e-196,
}


def test_hazard_at_zero():
    assert hazard_ratio(0.0) == pytest.approx(-math.sqrt(2 / math.pi), rel=1e-15)


@pytest.mark.parametrize("t, ref", sorted(HAZARD_REF.items()))
def test_hazard_reference_values(t, ref):
    assert hazard_ratio(t) == pytest.approx(ref, rel=1e-13)


def test_hazard_deep_negative_tail_is_tiny_but_negative():
    h = hazard_ratio(-30.0)
    assert h < 0.0
    assert abs(h) < 1e-100


def test_hazard_large_positive_no_overflow():
    for t in (20.0, 40.0, 1e3, 1e8):
        h = hazard_ratio(t)
        assert math.isfinite(h)
        assert h == pytest.approx(-t - 1 / t, rel=3 / t**4 + 1e-15)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_hazard_rejects_non_finite(bad):
    with pytest.raises(DomainError):
        hazard_ratio(bad)


@given(st.floats(min_value=-37.0, max_value=1e4))
def test_hazard_strictly_negative_and_bounded(t):
    h = hazard_ratio(t)
    assert h < 0.0
    # phi/Q > max(t, 0) for every t
    assert -h > max(t, 0.0) or math.isclose(-h, t, rel_tol=1e-12)


@settings(max_examples=200)
@given(st.floats(min_value=-30.0, max_value=30.0))
def test_hazard_derivative_matches_central_difference(t):
    eps = 1e-5 * max(1.0, abs(t))
    fd = (hazard_ratio(t + eps) - hazard_ratio(t - eps)) / (2 * eps)
    assert hazard_ratio_derivative(t) == pytest.approx(fd, rel=1e-6, abs=1e-12)


def test_q_and_log_two_q():
    assert q_function(0.0) == 0.5
    assert log_two_q(0.0) == 0.0
    assert log_two_q(-40.0) == pytest.approx(math.log(2.0), rel=1e-15)
    # log(2 Q(10)) with Q(10) = 7.619853024160526066e-24
    assert log_two_q(10.0) == pytest.approx(math.log(2 * 7.619853024160526066e-24), rel=1e-14)
