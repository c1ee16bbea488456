"""Spectral triple of the quantized plane and its coherent-state distances.

The Hilbert space is a spinor doubling of the truncated Fock space. The
Dirac operator sqrt(2/theta) * [[0, b'],[b, 0]] has eigen-spinors built
from pairs of number states, and the distance between coherent states
rho_0 and rho_z comes out to sqrt(2 theta)|z|, saturated by a linear
combination of the ladder operators.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import fock, linalg, triple
from .fock import FockSpace, StateFunctional

E00 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
E01 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
E10 = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
E11 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class MoyalTriple:
    space: FockSpace
    triple: triple.SpectralTriple


@dataclass(frozen=True)
class MoyalEigenspinor:
    m: int
    sign: int
    vector: np.ndarray
    eigenvalue: float


def build_moyal(space: FockSpace) -> MoyalTriple:
    f = space.dim
    b = fock.lowering(space)
    coeff = np.sqrt(2.0 / space.theta)
    dirac = coeff * (linalg.kron(E01, linalg.adjoint(b)) + linalg.kron(E10, b))
    grading = linalg.kron(SIGMA3, np.eye(f, dtype=complex))

    def represent(a: triple.AlgebraElement) -> np.ndarray:
        if a.operator is not None:
            op = a.operator
            if op.shape != (2 * f, 2 * f):
                raise ValueError(f"operator shape {op.shape} does not match Hilbert dimension {2 * f}")
            return op
        total = np.zeros((2 * f, 2 * f), dtype=complex)
        for moyal_part, internal in a.terms:
            if internal is not None:
                raise ValueError("the plane triple carries no internal factor")
            if moyal_part is None:
                raise ValueError("empty term")
            if moyal_part.shape != (f, f):
                raise ValueError(f"element shape {moyal_part.shape} does not match Fock dimension {f}")
            total += linalg.kron(I2, moyal_part)
        return total

    def state_embed(rho: StateFunctional) -> np.ndarray:
        if rho.rho.shape != (f, f):
            raise ValueError(f"state shape {rho.rho.shape} does not match Fock dimension {f}")
        return linalg.kron(I2, rho.rho) / 2.0

    st = triple.SpectralTriple(
        dirac=dirac,
        grading=grading,
        represent=represent,
        state_embed=state_embed,
        hilbert_dim=2 * f,
        label=f"moyal(theta={space.theta}, n_max={space.n_max})",
    )
    return MoyalTriple(space=space, triple=st)


def moyal_eigenspinors(t: MoyalTriple, m_max: int) -> list[MoyalEigenspinor]:
    """Eigen-spinors (|m>, +/-|m-1>)/sqrt(2) with eigenvalues +/-sqrt(2m/theta).

    m = 0 contributes the single zero mode (|0>, 0); each m >= 1 contributes
    one pair. Exact on the truncated space for m <= n_max.
    """
    space = t.space
    if m_max > space.n_max - 1:
        raise ValueError(f"m_max {m_max} exceeds n_max - 1 = {space.n_max - 1}")
    up = np.array([1.0, 0.0], dtype=complex)
    down = np.array([0.0, 1.0], dtype=complex)
    out = [
        MoyalEigenspinor(m=0, sign=1, vector=np.kron(up, fock.number_state(space, 0)), eigenvalue=0.0)
    ]
    for m in range(1, m_max + 1):
        lam = np.sqrt(2.0 * m / space.theta)
        for sign in (1, -1):
            vec = (np.kron(up, fock.number_state(space, m))
                   + sign * np.kron(down, fock.number_state(space, m - 1))) / np.sqrt(2.0)
            out.append(MoyalEigenspinor(m=m, sign=sign, vector=vec, eigenvalue=sign * lam))
    return out


def projector_PN(t: MoyalTriple, N: int) -> np.ndarray:
    """Rank-(2N+1) spectral projector diag(P_N, P_{N-1}) of the Dirac operator."""
    space = t.space
    if not 0 <= N <= space.n_max - 1:
        raise ValueError(f"N must lie in [0, n_max - 1], got {N}")
    return (linalg.kron(E00, fock.number_projector(space, N))
            + linalg.kron(E11, fock.number_projector(space, N - 1)))


def line_element(space: FockSpace, alpha: float) -> np.ndarray:
    """sqrt(theta/2)(e^{-i alpha} b + e^{i alpha} b'), the distance-saturating direction."""
    b = fock.lowering(space)
    return np.sqrt(space.theta / 2.0) * (
        np.exp(-1j * alpha) * b + np.exp(1j * alpha) * linalg.adjoint(b)
    )


def _sandwich(t: MoyalTriple, a: np.ndarray, N: int) -> np.ndarray:
    space = t.space
    pn = fock.number_projector(space, N)
    pn1 = fock.number_projector(space, N - 1)
    return linalg.kron(E00, pn @ a @ pn) + linalg.kron(E11, pn1 @ a @ pn1)


def distance_between(t: MoyalTriple, z1: complex, z2: complex, N: int) -> triple.DistanceReport:
    """Certified distance between the coherent states at z1 and z2.

    The evaluated element is the translated line element; its projector
    sandwich at rank N supplies the ball certificate. For z1 = 0 the
    certificate is the sandwiched element itself. For z1 != 0 the sandwich
    no longer certifies (the translated projector has its own Dirac
    commutator), so the certificate is the projected ball functional
    ||P [D, pi(a)] P|| over the translated projector, which equals the
    anchored computation displaced.
    """
    space = t.space
    if N < 2:
        raise ValueError("the sandwich certificate needs N >= 2")
    if N > space.n_max - 2:
        raise ValueError(f"N must be <= n_max - 2 = {space.n_max - 2} to stay clear of the truncation corner")
    dz = complex(z2) - complex(z1)
    alpha = cmath.phase(dz) if dz != 0 else 0.0
    a_line = line_element(space, alpha)

    warnings: list[str] = []
    rho1 = fock.coherent_state(space, z1)
    rho2 = fock.coherent_state(space, z2)
    warnings.extend(rho1.warnings)
    warnings.extend(rho2.warnings)

    if z1 == 0:
        element = triple.moyal_element(a_line)
        certificate = triple.represented_element(_sandwich(t, a_line, N))
        report = triple.distance_from_element(
            t.triple, rho1, rho2, element,
            certificate=certificate,
            truncation_order=space.n_max,
            projector_rank=N,
            warnings=warnings,
        )
    else:
        u = fock.displacement(space, z1)
        a_tr = u @ a_line @ linalg.adjoint(u)
        a_tr = (a_tr + linalg.adjoint(a_tr)) / 2.0
        element = triple.moyal_element(a_tr)
        us = linalg.kron(I2, u)
        proj_tr = us @ projector_PN(t, N) @ linalg.adjoint(us)
        cert_norm = triple.projected_ball_norm(t.triple, element, proj_tr)
        warnings.append("certificate: projected ball functional over the translated rank-(2N+1) projector")
        report = triple.distance_from_element(
            t.triple, rho1, rho2, element,
            certificate_norm=cert_norm,
            truncation_order=space.n_max,
            projector_rank=N,
            warnings=warnings,
        )
    return report


def moyal_distance(t: MoyalTriple, z: complex, N: int = 4) -> triple.DistanceReport:
    """Distance from the vacuum coherent state to the one at z; equals sqrt(2 theta)|z|."""
    return distance_between(t, 0.0, z, N)
