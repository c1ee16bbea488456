"""Spectral triple mechanics: elements, ball norms, restriction, reports."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moyaldist import fock, linalg, moyal, triple


@pytest.fixture(scope="module")
def small_moyal():
    space = fock.FockSpace(n_max=12, theta=1.0)
    return space, moyal.build_moyal(space)


def test_triple_invariants_enforced():
    d = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    g = np.diag([1.0, -1.0]).astype(complex)
    t = triple.SpectralTriple(
        dirac=d, grading=g, represent=lambda a: a.operator,
        state_embed=lambda r: r.rho, hilbert_dim=2, label="toy",
    )
    assert t.hilbert_dim == 2
    with pytest.raises(ValueError):
        triple.SpectralTriple(
            dirac=d, grading=np.diag([1.0, -2.0]).astype(complex),
            represent=lambda a: a.operator, state_embed=lambda r: r.rho,
            hilbert_dim=2, label="bad grading",
        )
    with pytest.raises(ValueError):
        triple.SpectralTriple(
            dirac=d + 1j * np.eye(2), grading=g,
            represent=lambda a: a.operator, state_embed=lambda r: r.rho,
            hilbert_dim=2, label="bad dirac",
        )


def test_element_factories_and_parts():
    m = np.diag([1.0, 2.0]).astype(complex)
    a = triple.moyal_element(m)
    assert a.internal_part is None
    assert np.array_equal(a.moyal_part, m)
    c = triple.internal_element(0.5, -0.5)
    assert c.moyal_part is None
    assert c.internal_part == (0.5, -0.5)
    prod = triple.product_element(m, 1.0, 0.0)
    assert prod.is_self_adjoint
    both = triple.sum_of_products([(m, None), (None, (0.0, 1.0))])
    assert len(both.terms) == 2


@settings(max_examples=25, deadline=None)
@given(st.floats(-4.0, 4.0, allow_nan=False).filter(lambda s: abs(s) > 1e-6))
def test_ball_norm_scales_linearly(small_moyal, s):
    space, mt = small_moyal
    a = triple.moyal_element(fock.number_projector(space, 2))
    base = triple.ball_norm(mt.triple, a)
    scaled = triple.ball_norm(mt.triple, triple.moyal_element(s * fock.number_projector(space, 2)))
    assert scaled == pytest.approx(abs(s) * base, rel=1e-10)


def test_eval_state_is_algebra_trace(small_moyal):
    space, mt = small_moyal
    rng = np.random.default_rng(5)
    h = rng.standard_normal((space.dim, space.dim))
    h = (h + h.T) / 2
    rho = fock.coherent_state(space, 0.4)
    got = triple.eval_state(mt.triple, rho, triple.moyal_element(h))
    expected = np.trace(rho.rho @ h).real
    assert got == pytest.approx(expected, rel=1e-12)


def test_distance_from_element_certificate_and_violation(small_moyal):
    space, mt = small_moyal
    rho1 = fock.coherent_state(space, 0.0)
    rho2 = fock.coherent_state(space, 0.5)
    a = moyal.line_element(space, alpha=0.0)
    report = triple.distance_from_element(
        mt.triple, rho1, rho2, triple.moyal_element(a),
        certificate_norm=1.0, method="analytic",
    )
    assert report.ball_norm == 1.0
    with pytest.raises(triple.BallViolation):
        triple.distance_from_element(
            mt.triple, rho1, rho2, triple.moyal_element(2.0 * a),
            certificate_norm=2.0, method="analytic",
        )


def test_report_serialization_keys(small_moyal):
    space, mt = small_moyal
    report = moyal.moyal_distance(mt, 0.3, N=3)
    d = report.to_dict()
    assert set(d) >= {"value", "ball_norm", "method", "n_max", "warnings"}


def test_restrict_identity_fast_path(small_moyal):
    space, mt = small_moyal
    same = triple.restrict(mt.triple, np.eye(2 * space.dim, dtype=complex))
    assert same is mt.triple


def test_restrict_number_block(small_moyal):
    """Restriction by the split projector keeps the Dirac block intact."""
    space, mt = small_moyal
    proj = moyal.projector_PN(mt, 3)
    sub = triple.restrict(mt.triple, proj)
    assert sub.hilbert_dim == 7
    full_eigs = np.linalg.eigvalsh(sub.dirac)
    expected = sorted(
        [np.sqrt(2.0 * m) for m in range(4)] + [-np.sqrt(2.0 * m) for m in range(1, 4)]
    )
    assert np.abs(full_eigs - np.array(expected)).max() < 1e-12


def test_restrict_rejects_noncommuting(small_moyal):
    space, mt = small_moyal
    v = np.zeros(2 * space.dim, dtype=complex)
    v[0] = v[space.dim + 1] = 1.0 / np.sqrt(2.0)
    proj = np.outer(v, v.conj())
    with pytest.raises(triple.ProjectorNotCommuting):
        triple.restrict(mt.triple, proj, basis=v.reshape(-1, 1))


def test_projector_commutator_norm_exact(small_moyal):
    """Low-rank route agrees with the dense commutator norm."""
    space, mt = small_moyal
    rng = np.random.default_rng(9)
    cols = rng.standard_normal((2 * space.dim, 3)) + 1j * rng.standard_normal((2 * space.dim, 3))
    q, _ = np.linalg.qr(cols)
    got = triple.projector_commutator_norm(mt.triple.dirac, q)
    proj = q @ q.conj().T
    dense = np.linalg.norm(mt.triple.dirac @ proj - proj @ mt.triple.dirac, 2)
    assert got == pytest.approx(dense, rel=1e-10)


def test_gauge_rotate_moves_coupling_phase_only():
    from moyaldist import twopoint

    t2 = twopoint.build_twopoint(1.5)
    rotated = triple.gauge_rotate(t2.triple, 0.7)
    assert abs(rotated.dirac[0, 1]) == pytest.approx(1.5, rel=1e-14)
    assert abs(np.angle(rotated.dirac[0, 1])) == pytest.approx(0.7, abs=1e-14)
    before = np.linalg.eigvalsh(t2.triple.dirac)
    after = np.linalg.eigvalsh(rotated.dirac)
    assert np.abs(before - after).max() < 1e-12
