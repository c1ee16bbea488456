"""Two-point internal geometry."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moyaldist import linalg, triple, twopoint

nonzero_lambda = st.tuples(
    st.floats(0.05, 5.0), st.floats(0.0, 2 * math.pi)
).map(lambda p: p[0] * complex(math.cos(p[1]), math.sin(p[1])))


def test_dirac_is_offdiagonal_coupling():
    lam = 1.5 - 0.7j
    t = twopoint.build_twopoint(lam)
    d = t.triple.dirac
    assert d[0, 1] == lam
    assert d[1, 0] == np.conj(lam)
    assert d[0, 0] == d[1, 1] == 0


@settings(max_examples=40, deadline=None)
@given(nonzero_lambda)
def test_distance_is_inverse_coupling(lam):
    t = twopoint.build_twopoint(lam)
    report = twopoint.twopoint_distance(t)
    assert report.value == pytest.approx(1.0 / abs(lam), rel=1e-12)
    assert report.ball_norm == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(nonzero_lambda, st.floats(-3, 3), st.floats(-3, 3))
def test_ball_norm_closed_form(lam, c1, c2):
    """||[D, diag(c1, c2)]|| = |lam| |c1 - c2|."""
    t = twopoint.build_twopoint(lam)
    got = triple.ball_norm(t.triple, triple.internal_element(c1, c2))
    assert got == pytest.approx(abs(lam) * abs(c1 - c2), abs=1e-12)


def test_phase_never_enters():
    mags = twopoint.twopoint_distance(twopoint.build_twopoint(2.0)).value
    for phi in (0.4, 1.9, -2.7):
        lam = 2.0 * complex(math.cos(phi), math.sin(phi))
        assert twopoint.twopoint_distance(twopoint.build_twopoint(lam)).value == mags


def test_zero_coupling_reports_infinite():
    t = twopoint.build_twopoint(0.0)
    assert t.warnings
    report = twopoint.twopoint_distance(t)
    assert math.isinf(report.value)
    assert report.optimal_element is None
    assert any("diverges" in w for w in report.warnings)


def test_point_states():
    for i, diag in ((1, [1.0, 0.0]), (2, [0.0, 1.0])):
        rho = twopoint.point_state(i)
        assert np.allclose(np.diag(rho.rho).real, diag)
    with pytest.raises(ValueError):
        twopoint.point_state(3)


def test_optimal_element_separates_the_points():
    t = twopoint.build_twopoint(1.3)
    report = twopoint.twopoint_distance(t)
    gap = triple.eval_state(t.triple, twopoint.point_state(1), report.optimal_element) - \
        triple.eval_state(t.triple, twopoint.point_state(2), report.optimal_element)
    assert abs(gap) == pytest.approx(report.value, rel=1e-12)
