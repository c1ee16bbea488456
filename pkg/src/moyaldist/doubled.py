"""Doubled quantized plane: two sheets coupled through an internal C^2 factor.

Hilbert space ordering is spinor (x) Fock (x) internal. The Dirac operator
adds the plane part acting as identity on the internal factor and the
two-point part kron(sigma3, I, D2); a gauge rotation makes the internal
coupling real positive, so kappa = 2/(theta |Lambda|^2) and the closed
forms below carry |Lambda|.

Distances split into longitudinal (same sheet, translated state),
transverse (same point, opposite sheets) and hypotenuse (both at once),
with Pythagoras holding exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import fock, linalg, triple, twopoint
from .fock import FockSpace, StateFunctional
from .moyal import E00, E01, E10, E11, I2, SIGMA3, line_element

FAMILY_ZERO = ("psi0+", "psi0-")
FAMILY_QUAD = ("psi+", "psi-", "psit+", "psit-")


@dataclass(frozen=True)
class DoubledTriple:
    space: FockSpace
    lam: complex
    kappa: float
    triple: triple.SpectralTriple

    @property
    def coupling(self) -> float:
        """Internal Dirac coupling after the gauge rotation: |lambda|."""
        return abs(self.lam)


@dataclass(frozen=True)
class DoubledEigenspinor:
    m: int
    family: str
    vector: np.ndarray
    eigenvalue: float


@dataclass(frozen=True)
class CompositeState:
    z: complex
    sheet: int
    rho: StateFunctional


def _assemble_dirac(space: FockSpace, b: np.ndarray, internal: np.ndarray) -> np.ndarray:
    coeff = np.sqrt(2.0 / space.theta)
    f = space.dim
    eye_f = np.eye(f, dtype=complex)
    plane = coeff * (linalg.kron(E01, linalg.adjoint(b), I2) + linalg.kron(E10, b, I2))
    return plane + linalg.kron(SIGMA3, eye_f, internal)


def build_doubled(space: FockSpace, lam: complex) -> DoubledTriple:
    lam = complex(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero: kappa is undefined and the sheets decouple at infinite distance")
    f = space.dim
    kappa = 2.0 / (space.theta * abs(lam) ** 2)
    dirac = _assemble_dirac(space, fock.lowering(space), twopoint.internal_dirac(lam))
    grading = linalg.kron(SIGMA3, np.eye(f, dtype=complex), SIGMA3)

    def represent(a: triple.AlgebraElement) -> np.ndarray:
        if a.operator is not None:
            op = a.operator
            if op.shape != (4 * f, 4 * f):
                raise ValueError(f"operator shape {op.shape} does not match Hilbert dimension {4 * f}")
            return op
        total = np.zeros((4 * f, 4 * f), dtype=complex)
        for moyal_part, internal in a.terms:
            mp = np.eye(f, dtype=complex) if moyal_part is None else moyal_part
            if mp.shape != (f, f):
                raise ValueError(f"plane factor shape {mp.shape} does not match Fock dimension {f}")
            ip = I2 if internal is None else np.diag([complex(internal[0]), complex(internal[1])])
            total += linalg.kron(I2, mp, ip)
        return total

    def state_embed(rho: StateFunctional) -> np.ndarray:
        if rho.rho.shape != (2 * f, 2 * f):
            raise ValueError(f"state shape {rho.rho.shape} does not match algebra dimension {2 * f}")
        return linalg.kron(I2, rho.rho) / 2.0

    st = triple.SpectralTriple(
        dirac=dirac,
        grading=grading,
        represent=represent,
        state_embed=state_embed,
        hilbert_dim=4 * f,
        label=f"doubled(theta={space.theta}, lambda={lam}, n_max={space.n_max})",
    )
    phase = cmath.phase(lam)
    if phase != 0.0:
        st = triple.gauge_rotate(st, phase)
    return DoubledTriple(space=space, lam=lam, kappa=kappa, triple=st)


def anchored_triple(t: DoubledTriple, z: complex) -> triple.SpectralTriple:
    """The triple in the frame translated to z: ladder operators shifted by z.

    The shift differs from the original Dirac operator by a spinor
    off-diagonal constant that commutes with every represented element, so
    ball norms of algebra elements are unchanged; projectors built from
    translated states commute with this operator the way the untranslated
    ones commute with the original.
    """
    z = complex(z)
    if z == 0:
        return t.triple
    space = t.space
    b_shift = fock.lowering(space) - z * np.eye(space.dim, dtype=complex)
    dirac = _assemble_dirac(space, b_shift, abs(t.lam) * np.array([[0, 1], [1, 0]], dtype=complex))
    return triple.SpectralTriple(
        dirac=dirac,
        grading=t.triple.grading,
        represent=t.triple.represent,
        state_embed=t.triple.state_embed,
        hilbert_dim=t.triple.hilbert_dim,
        label=f"{t.triple.label}|anchor z={z}",
    )


def predicted_eigenvalue(t: DoubledTriple, m: int, sign: int) -> float:
    return sign * t.coupling * np.sqrt(t.kappa * m + 1.0)


def _spinor_vec(space: FockSpace, m: int, s: int, tcomp: int) -> np.ndarray:
    """(|m>, s|m-1>) tensored with the internal vector (1, t); unnormalized."""
    up = np.array([1.0, 0.0], dtype=complex)
    down = np.array([0.0, 1.0], dtype=complex)
    internal = np.array([1.0, float(tcomp)], dtype=complex)
    v = np.kron(np.kron(up, fock.number_state(space, m)), internal)
    if m >= 1:
        v = v + s * np.kron(np.kron(down, fock.number_state(space, m - 1)), internal)
    return v


def doubled_eigenspinors(t: DoubledTriple, m_max: int) -> list[DoubledEigenspinor]:
    """Orthonormal eigen-spinors: the m=0 pair and four combinations per m >= 1.

    Each vector is an exact eigenvector of the rotated Dirac operator on the
    truncated space for m <= n_max - 1, with eigenvalue
    sign * |lambda| * sqrt(kappa m + 1).
    """
    space = t.space
    if m_max > space.n_max - 1:
        raise ValueError(f"m_max {m_max} exceeds n_max - 1 = {space.n_max - 1}")
    kappa = t.kappa
    out = []
    for sign in (1, -1):
        vec = _spinor_vec(space, 0, 1, sign) / np.sqrt(2.0)
        out.append(DoubledEigenspinor(
            m=0, family=FAMILY_ZERO[0] if sign > 0 else FAMILY_ZERO[1],
            vector=vec, eigenvalue=predicted_eigenvalue(t, 0, sign),
        ))
    for m in range(1, m_max + 1):
        r = np.sqrt(kappa * m + 1.0)
        q = np.sqrt(kappa * m)
        nm = 1.0 / (4.0 * r)
        v = {(s, tc): _spinor_vec(space, m, s, tc) for s in (1, -1) for tc in (1, -1)}
        combos = {
            "psi+": v[1, 1] + v[-1, -1] + (r - q) * v[-1, 1] - (r + q) * v[1, -1],
            "psi-": v[1, 1] + v[-1, -1] - (r + q) * v[-1, 1] + (r - q) * v[1, -1],
            "psit+": v[1, -1] + v[-1, 1] + (r + q) * v[1, 1] - (r - q) * v[-1, -1],
            "psit-": v[1, -1] + v[-1, 1] - (r - q) * v[1, 1] + (r + q) * v[-1, -1],
        }
        for family in FAMILY_QUAD:
            sign = 1 if family.endswith("+") else -1
            out.append(DoubledEigenspinor(
                m=m, family=family, vector=nm * combos[family],
                eigenvalue=predicted_eigenvalue(t, m, sign),
            ))
    return out


def _split_projector(space: FockSpace, upper: np.ndarray, lower: np.ndarray) -> np.ndarray:
    return linalg.kron(E00, upper, I2) + linalg.kron(E11, lower, I2)


def projector_script_PN(t: DoubledTriple, N: int) -> np.ndarray:
    """Spectral projector onto all eigen-spinors with m <= N, rank 2(2N+1).

    Built from the eigen-spinor dyads and checked against its split form
    diag(P_N, P_{N-1}) (x) I2, which must agree entrywise.
    """
    space = t.space
    if not 0 <= N <= space.n_max - 1:
        raise ValueError(f"N must lie in [0, n_max - 1], got {N}")
    total = np.zeros((4 * space.dim, 4 * space.dim), dtype=complex)
    for es in doubled_eigenspinors(t, N):
        total += np.outer(es.vector, es.vector.conj())
    split = _split_projector(space, fock.number_projector(space, N), fock.number_projector(space, N - 1))
    dev = np.abs(total - split).max()
    if dev > 1e-12:
        raise RuntimeError(f"eigen-spinor dyads disagree with the split projector by {dev:.3e}")
    return total


def transverse_projector(t: DoubledTriple, z: complex, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Translated projector diag(P~_N, P~_{N-1}) (x) I2 and its column basis.

    P~_k spans the first k+1 translated states anchored at z. Returns the
    projector matrix and the orthonormal columns of its range.
    """
    space = t.space
    if not 0 <= N <= space.n_max - 1:
        raise ValueError(f"N must lie in [0, n_max - 1], got {N}")
    kets = [fock.translated_basis(space, z, k) for k in range(N + 1)]
    up = np.array([1.0, 0.0], dtype=complex)
    down = np.array([0.0, 1.0], dtype=complex)
    e1 = np.array([1.0, 0.0], dtype=complex)
    e2 = np.array([0.0, 1.0], dtype=complex)
    cols = []
    for k in range(N + 1):
        for internal in (e1, e2):
            cols.append(np.kron(np.kron(up, kets[k]), internal))
    for k in range(N):
        for internal in (e1, e2):
            cols.append(np.kron(np.kron(down, kets[k]), internal))
    basis = np.array(cols).T
    proj = basis @ basis.conj().T
    return proj, basis


def composite_state(space: FockSpace, z: complex, sheet: int) -> CompositeState:
    """Pure state rho_z on one of the two sheets."""
    if sheet not in (1, 2):
        raise ValueError("sheet must be 1 or 2")
    base = fock.coherent_state(space, z)
    omega = twopoint.point_state(sheet)
    rho = linalg.kron(base.rho, omega.rho)
    purity = np.abs(rho @ rho - rho).max()
    if purity > 1e-10:
        raise ValueError(f"composite state failed the purity check by {purity:.3e}")
    return CompositeState(
        z=complex(z), sheet=sheet,
        rho=StateFunctional(rho=rho, label=f"rho_{z} (x) omega_{sheet}", warnings=list(base.warnings)),
    )


def _branch_norm_factor(kappa: float) -> float:
    return np.sqrt(8.0 + kappa + 4.0 * np.sqrt(1.0 + kappa))


def longitudinal_distance(t: DoubledTriple, z: complex, N: int) -> triple.DistanceReport:
    """Distance between rho_0 and rho_z on the same sheet: sqrt(2 theta)|z|.

    The optimal element is the plane line element times the identity
    internal pair c1 = c2 = X with X saturating X |lambda| sqrt(kappa) = 1;
    its rank-N sandwich certifies the ball. The c1 = -c2 branch tightens
    the ball to X |lambda| sqrt(8 + kappa + 4 sqrt(1 + kappa)) and is
    evaluated at N = 2, where that closed form is exact, to record why it
    yields a strictly smaller distance.
    """
    space = t.space
    if N < 2:
        raise ValueError("the sandwich certificate needs N >= 2")
    if N > space.n_max - 2:
        raise ValueError(f"N must be <= n_max - 2 = {space.n_max - 2} to stay clear of the truncation corner")
    z = complex(z)
    lam_c = t.coupling
    x_opt = 1.0 / (lam_c * np.sqrt(t.kappa))
    alpha = cmath.phase(z) if z != 0 else 0.0
    a_plane = line_element(space, alpha) / np.sqrt(space.theta / 2.0) * x_opt

    st1 = composite_state(space, 0.0, 1)
    st2 = composite_state(space, z, 1)
    warnings = list(st1.rho.warnings) + list(st2.rho.warnings)

    element = triple.product_element(a_plane, 1.0, 1.0)
    pn = fock.number_projector(space, N)
    pn1 = fock.number_projector(space, N - 1)
    certificate = triple.represented_element(
        _split_projector(space, pn @ a_plane @ pn, pn1 @ a_plane @ pn1)
    )

    x_rej = 1.0 / (lam_c * _branch_norm_factor(t.kappa))
    a_rej_plane = a_plane / x_opt * x_rej
    p2 = fock.number_projector(space, 2)
    p1 = fock.number_projector(space, 1)
    rej_sandwich = (linalg.kron(E00, p2 @ a_rej_plane @ p2, np.diag([1.0, -1.0]))
                    + linalg.kron(E11, p1 @ a_rej_plane @ p1, np.diag([1.0, -1.0])))
    rej_ball = triple.ball_norm(t.triple, triple.represented_element(rej_sandwich))
    rej_value = 2.0 * abs(z) * x_rej
    warnings.append(
        f"branch c1=-c2: saturating it gives {rej_value:.12g} (ball norm {rej_ball:.12g} at N=2), "
        f"below the c1=c2 value; branch rejected"
    )

    return triple.distance_from_element(
        t.triple, st1.rho, st2.rho, element,
        certificate=certificate,
        truncation_order=space.n_max,
        projector_rank=N,
        warnings=warnings,
    )


def transverse_distance(t: DoubledTriple, z: complex, N: int) -> triple.DistanceReport:
    """Distance between a state and its clone on the other sheet: 1/|lambda|.

    Computed on the triple restricted by the translated projector
    diag(P~_N, P~_{N-1}) (x) I2 in the frame anchored at z, where the
    projector commutes with the Dirac operator; the restricted problem is
    the two-point one, independent of z and N.
    """
    space = t.space
    if not 1 <= N <= space.n_max - 2:
        raise ValueError(f"N must lie in [1, n_max - 2], got {N}")
    z = complex(z)
    lam_c = t.coupling
    y_opt = 1.0 / lam_c
    element = triple.internal_element(y_opt, 0.0)

    st1 = composite_state(space, z, 1)
    st2 = composite_state(space, z, 2)
    warnings = list(st1.rho.warnings)

    frame = anchored_triple(t, z)
    proj, basis = transverse_projector(t, z, N)
    restricted = triple.restrict(frame, proj, basis=basis)
    report = triple.distance_from_element(
        restricted, st1.rho, st2.rho, element,
        truncation_order=space.n_max,
        projector_rank=N,
        method="restricted",
        warnings=warnings,
    )
    return report


def hypotenuse_distance(t: DoubledTriple, z: complex, N: int) -> triple.DistanceReport:
    """Distance between rho_0 on sheet 1 and rho_z on sheet 2.

    The optimal element mixes the longitudinal and transverse directions
    with weights fixed by maximizing a x + b y over the ellipse
    (lambda sqrt(kappa) x)^2 + (lambda y)^2 = 1, giving
    sqrt(2 theta |z|^2 + 1/lambda^2) and the Pythagoras equality.
    """
    space = t.space
    if N < 2:
        raise ValueError("the sandwich certificate needs N >= 2")
    if N > space.n_max - 2:
        raise ValueError(f"N must be <= n_max - 2 = {space.n_max - 2} to stay clear of the truncation corner")
    z = complex(z)
    lam_c = t.coupling
    leg_l = np.sqrt(2.0 * space.theta) * abs(z)
    leg_t = 1.0 / lam_c
    total = np.hypot(leg_l, leg_t)
    x_opt = np.sqrt(space.theta / 2.0) * leg_l / total
    y_opt = leg_t * leg_t / total

    alpha = cmath.phase(z) if z != 0 else 0.0
    a_plane = line_element(space, alpha) / np.sqrt(space.theta / 2.0) * x_opt
    element = triple.sum_of_products([(a_plane, None), (None, (0.0, y_opt))])

    st1 = composite_state(space, 0.0, 1)
    st2 = composite_state(space, z, 2)
    warnings = list(st1.rho.warnings) + list(st2.rho.warnings)

    pn = fock.number_projector(space, N)
    pn1 = fock.number_projector(space, N - 1)
    eye_f = np.eye(space.dim, dtype=complex)
    internal = np.diag([0.0, y_opt]).astype(complex)
    sandwich = (linalg.kron(E00, pn @ a_plane @ pn, I2)
                + linalg.kron(E11, pn1 @ a_plane @ pn1, I2)
                + linalg.kron(E00, pn @ eye_f @ pn, internal)
                + linalg.kron(E11, pn1 @ eye_f @ pn1, internal))
    certificate = triple.represented_element(sandwich)

    return triple.distance_from_element(
        t.triple, st1.rho, st2.rho, element,
        certificate=certificate,
        truncation_order=space.n_max,
        projector_rank=N,
        warnings=warnings,
    )


def _eigenbasis_matrix(t: DoubledTriple, element_plane: np.ndarray | None, internal: tuple | None) -> np.ndarray:
    """[D, P2 pi(a) P2] expressed in the ordered m <= 2 eigen-spinor basis."""
    space = t.space
    spinors = doubled_eigenspinors(t, 2)
    basis = np.array([es.vector for es in spinors]).T
    p2 = projector_script_PN(t, 2)
    if internal is None:
        el = triple.moyal_element(element_plane) if element_plane is not None else None
    elif element_plane is None:
        el = triple.internal_element(*internal)
    else:
        el = triple.product_element(element_plane, *internal)
    rep = t.triple.represent(el)
    comm = linalg.commutator(t.triple.dirac, p2 @ rep @ p2)
    return basis.conj().T @ comm @ basis


def matrix_Ml(t: DoubledTriple, X: float) -> np.ndarray:
    """10x10 commutator matrix of the longitudinal ansatz X(b + b') (x) I2.

    Rows and columns follow the eigen-spinor order
    (psi0+, psi0-, psi1+, psi1-, psit1+, psit1-, psi2+, psi2-, psit2+, psit2-).
    """
    a_plane = X * (fock.lowering(t.space) + fock.raising(t.space))
    return _eigenbasis_matrix(t, a_plane, (1.0, 1.0))


def matrix_Mt(t: DoubledTriple, Y: float) -> np.ndarray:
    """10x10 commutator matrix of the transverse ansatz I (x) diag(c1, c2), c1 - c2 = Y."""
    return _eigenbasis_matrix(t, None, (Y / 2.0, -Y / 2.0))


def closed_form_Ml(t: DoubledTriple, X: float) -> np.ndarray:
    """The longitudinal commutator matrix assembled from its printed coefficients."""
    kappa = t.kappa
    lam = t.coupling
    r2 = np.sqrt(2.0 * kappa + 1.0)
    r1 = np.sqrt(kappa + 1.0)
    q = np.sqrt(kappa)
    bp = lam / 4.0 * (r2 + r1)
    bm = lam / 4.0 * (r2 - r1)
    gp = 1.0 + r1
    gm = 1.0 - r1
    ep = lam / 4.0 * (np.sqrt(2.0 * kappa) * r1 + q * r2)
    em = lam / 4.0 * (np.sqrt(2.0 * kappa) * r1 - q * r2)
    eta = X * q / np.sqrt((kappa + 1.0) * (2.0 * kappa + 1.0))
    pre = X * lam / (2.0 * np.sqrt(2.0 * (kappa + 1.0)))
    d1 = pre * (1.0 + q + r1)
    d2 = pre * (1.0 + q - r1)
    d3 = pre * (1.0 - q + r1)
    d4 = pre * (1.0 - q - r1)
    z = np.zeros((10, 10), dtype=complex)
    z[0, 2:6] = [gm * d3, gp * d4, gm * d1, gp * d2]
    z[1, 2:6] = [-gp * d4, -gm * d3, -gp * d2, -gm * d1]
    z[2, 0:2] = [-gm * d3, gp * d4]
    z[3, 0:2] = [-gp * d4, gm * d3]
    z[4, 0:2] = [-gm * d1, gp * d2]
    z[5, 0:2] = [-gp * d2, gm * d1]
    z[2, 6:10] = [eta * (bm - ep), -eta * (bp + em), -eta * (bm + em), eta * (bp - ep)]
    z[3, 6:10] = [eta * (bp + em), -eta * (bm - ep), -eta * (bp - ep), eta * (bm + em)]
    z[4, 6:10] = [eta * (bm - em), -eta * (bp + ep), -eta * (bm + ep), eta * (bp - em)]
    z[5, 6:10] = [eta * (bp + ep), -eta * (bm - em), -eta * (bp - em), eta * (bm + ep)]
    z[6, 2:6] = [-eta * (bm - ep), -eta * (bp + em), -eta * (bm - em), -eta * (bp + ep)]
    z[7, 2:6] = [eta * (bp + em), eta * (bm - ep), eta * (bp + ep), eta * (bm - em)]
    z[8, 2:6] = [eta * (bm + em), eta * (bp - ep), eta * (bm + ep), eta * (bp - em)]
    z[9, 2:6] = [-eta * (bp - ep), -eta * (bm + em), -eta * (bp - em), -eta * (bm + ep)]
    return z


def closed_form_Mt(t: DoubledTriple, Y: float) -> np.ndarray:
    """Block-diagonal transverse commutator matrix: Q for m=0, R(m) within each quad."""
    lam = t.coupling
    kappa = t.kappa
    out = np.zeros((10, 10), dtype=complex)
    out[0:2, 0:2] = lam * Y * np.array([[0.0, 1.0], [-1.0, 0.0]])
    for m in (1, 2):
        s = np.sqrt(m * kappa)
        r = np.array([
            [0.0, -s, 0.0, 1.0],
            [s, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, s],
            [-1.0, 0.0, -s, 0.0],
        ])
        lo = 2 + 4 * (m - 1)
        out[lo:lo + 4, lo:lo + 4] = lam * Y / np.sqrt(m * kappa + 1.0) * r
    return out


def spectrum_rows(t: DoubledTriple) -> list[dict]:
    """Spectrum of the Dirac operator against |lambda| sqrt(kappa m + 1).

    The comparison runs on the restriction to the rank-2(2 n_max - 1)
    spectral projector with m <= n_max - 1, which cuts the single spurious
    pair the truncation corner injects into the full matrix. Rows carry
    (m, family, predicted, computed, residual) sorted by predicted value.
    """
    space = t.space
    n = space.n_max - 1
    proj = projector_script_PN(t, n)
    restricted = triple.restrict(t.triple, proj)
    dec = linalg.hermitian_eig(restricted.dirac)
    computed = np.sort(dec.eigenvalues)

    predicted = []
    for sign in (1, -1):
        predicted.append((predicted_eigenvalue(t, 0, sign), 0, FAMILY_ZERO[0] if sign > 0 else FAMILY_ZERO[1]))
    for m in range(1, n + 1):
        for family in FAMILY_QUAD:
            sign = 1 if family.endswith("+") else -1
            predicted.append((predicted_eigenvalue(t, m, sign), m, family))
    predicted.sort(key=lambda row: row[0])

    rows = []
    for (pval, m, family), cval in zip(predicted, computed):
        rows.append({
            "m": m,
            "family": family,
            "predicted": float(pval),
            "computed": float(cval),
            "residual": abs(float(cval) - float(pval)),
        })
    return rows
