"""Doubled plane: spectrum, eigen-spinors, the three distances, M matrices."""

import math

import numpy as np
import pytest

from moyaldist import doubled, fock, linalg, triple

THETA = 1.3
LAM = 1.7 * np.exp(0.6j)


@pytest.fixture(scope="module")
def geom():
    space = fock.FockSpace(n_max=20, theta=THETA)
    return space, doubled.build_doubled(space, lam=LAM)


@pytest.fixture(scope="module")
def reference_geom():
    """theta=2, lam=1 puts kappa at exactly 1; the tabulated matrix case."""
    space = fock.FockSpace(n_max=20, theta=2.0)
    return space, doubled.build_doubled(space, lam=1.0)


def test_build_validates_coupling():
    space = fock.FockSpace(n_max=8, theta=1.0)
    with pytest.raises(ValueError):
        doubled.build_doubled(space, lam=0.0)


def test_kappa_value(geom):
    space, t = geom
    assert t.kappa == pytest.approx(2.0 / (THETA * abs(LAM) ** 2), rel=1e-15)
    assert t.coupling == pytest.approx(abs(LAM), rel=1e-15)


def test_spectrum_against_numpy(geom):
    """Restricted spectrum vs an eigvalsh reference on the same matrix."""
    space, t = geom
    proj = doubled.projector_script_PN(t, space.n_max - 1)
    idx = np.where(np.abs(np.diag(proj)) > 0.5)[0]
    sub = t.triple.dirac[np.ix_(idx, idx)]
    ref = np.sort(np.linalg.eigvalsh(sub))
    rows = doubled.spectrum_rows(t)
    got = np.sort([r["computed"] for r in rows])
    assert len(got) == len(ref)
    assert np.abs(got - ref).max() < 1e-10


def test_predicted_eigenvalue_formula(geom):
    space, t = geom
    for m in (0, 1, 5):
        expected = abs(LAM) * math.sqrt(t.kappa * m + 1.0)
        assert doubled.predicted_eigenvalue(t, m, +1) == pytest.approx(expected, rel=1e-14)
        assert doubled.predicted_eigenvalue(t, m, -1) == pytest.approx(-expected, rel=1e-14)


def test_eigenspinor_families(geom):
    space, t = geom
    spinors = doubled.doubled_eigenspinors(t, m_max=6)
    by_family = {}
    for s in spinors:
        by_family.setdefault((s.m, s.family), []).append(s)
        assert np.linalg.norm(t.triple.dirac @ s.vector - s.eigenvalue * s.vector) < 1e-12
    assert set(f for (m, f) in by_family if m == 0) == set(doubled.FAMILY_ZERO)
    assert set(f for (m, f) in by_family if m == 3) == set(doubled.FAMILY_QUAD)


def test_script_projector_postcondition(geom):
    space, t = geom
    p = doubled.projector_script_PN(t, 4)
    assert np.trace(p).real == pytest.approx(2 * (2 * 4 + 1))
    assert np.abs(p @ p - p).max() < 1e-12


def test_composite_state_purity_and_sheet(geom):
    space, t = geom
    st1 = doubled.composite_state(space, 0.3 + 0.2j, sheet=1)
    st2 = doubled.composite_state(space, 0.3 + 0.2j, sheet=2)
    for s, slot in ((st1, 0), (st2, 1)):
        rho = s.rho.rho
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-10)
        internal = np.einsum(
            "fifj->ij", rho.reshape(space.dim, 2, space.dim, 2)
        )
        expected = np.zeros(2)
        expected[slot] = 1.0
        assert np.abs(np.diag(internal).real - expected).max() < 1e-12
    with pytest.raises(ValueError):
        doubled.composite_state(space, 0.0, sheet=0)


def test_longitudinal_distance_and_rejected_branch(geom):
    space, t = geom
    z = 0.45 - 0.3j
    report = doubled.longitudinal_distance(t, z, N=3)
    assert report.value == pytest.approx(math.sqrt(2 * THETA) * abs(z), rel=1e-12)
    assert report.ball_norm <= 1.0 + 1e-8
    note = next(w for w in report.warnings if "rejected" in w)
    quoted = float(note.split("gives ")[1].split(" ")[0])
    kappa = t.kappa
    closed = 2.0 * abs(z) / (
        abs(LAM) * math.sqrt(8.0 + kappa + 4.0 * math.sqrt(1.0 + kappa))
    )
    assert quoted == pytest.approx(closed, rel=1e-9)
    assert quoted < report.value


def test_transverse_distance_all_orders(geom):
    space, t = geom
    for n in (1, 2, 4):
        report = doubled.transverse_distance(t, 0.25 - 0.4j, N=n)
        assert report.value == pytest.approx(1.0 / abs(LAM), abs=1e-10)
        assert report.method == "restricted"


def test_transverse_needs_both_spinor_blocks(geom):
    space, t = geom
    with pytest.raises(ValueError):
        doubled.transverse_distance(t, 0.1, N=0)


def test_hypotenuse_pythagoras(geom):
    space, t = geom
    z = 0.5 + 0.1j
    d_l = doubled.longitudinal_distance(t, z, N=3).value
    d_t = doubled.transverse_distance(t, z, N=3).value
    d_h = doubled.hypotenuse_distance(t, z, N=3)
    assert d_h.value == pytest.approx(math.hypot(d_l, d_t), rel=1e-12)
    assert abs(d_h.value ** 2 - d_l ** 2 - d_t ** 2) <= 1e-10 * d_h.value ** 2
    assert d_h.ball_norm <= 1.0 + 1e-8


def test_matrix_Ml_reference_point(reference_geom):
    """At theta=2, lam=1, X=1 the first pair couples with weights (2 -+ sqrt(2))/4."""
    space, t = reference_geom
    m = doubled.matrix_Ml(t, X=1.0)
    assert m.shape == (10, 10)
    assert abs(m[0, 2]) == pytest.approx((2.0 - math.sqrt(2.0)) / 4.0, rel=1e-12)
    assert abs(m[0, 3]) == pytest.approx((2.0 + math.sqrt(2.0)) / 4.0, rel=1e-12)
    closed = doubled.closed_form_Ml(t, X=1.0)
    assert np.abs(m - closed).max() < 1e-10
    top = linalg.hermitian_eig(m.conj().T @ m).eigenvalues[0]
    assert top == pytest.approx(t.kappa, rel=1e-10)


def test_matrix_Mt_is_isometry_times_coupling(geom):
    space, t = geom
    y = 0.7
    m = doubled.matrix_Mt(t, Y=y)
    target = (abs(LAM) * y) ** 2 * np.eye(10)
    assert np.abs(m.conj().T @ m - target).max() < 1e-12
    closed = doubled.closed_form_Mt(t, Y=y)
    assert np.abs(m - closed).max() < 1e-10


def test_anchored_frame_commutes_only_translated(geom):
    """The anchored Dirac commutes with the translated projector; the
    unanchored one does not once z moves away from the origin."""
    space, t = geom
    z = 0.6 + 0.2j
    proj, basis = doubled.transverse_projector(t, z, N=2)
    anchored = doubled.anchored_triple(t, z)
    good = triple.projector_commutator_norm(anchored.dirac, basis)
    bad = triple.projector_commutator_norm(t.triple.dirac, basis)
    assert good < 1e-10
    assert bad > 0.1
