"""Spectral triples and the Connes distance machinery.

A triple bundles the Dirac matrix, the grading, and two maps: represent()
takes an algebra element to an operator on the triple's Hilbert space, and
state_embed() takes a density matrix on the natural algebra space to a
density matrix on that same Hilbert space. Distances are reported as
certified lower bounds: the evaluation |rho1(a) - rho2(a)| of an explicit
element together with the operator norm of its Dirac commutator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import linalg
from .fock import StateFunctional

BALL_TOL = 1e-8
PROJECTOR_COMMUTATION_TOL = 1e-10


class BallViolation(RuntimeError):
    """The candidate element sits outside the Lipschitz ball."""


class ProjectorNotCommuting(RuntimeError):
    """Restriction projector fails to commute with the Dirac operator.

    Raised instead of returning a triple because the distance between
    restricted states is only preserved under exact commutation; a near miss
    silently changes the metric.
    """


@dataclass(frozen=True)
class AlgebraElement:
    """Element of the (possibly doubled) truncated algebra.

    Product terms hold a quantized-plane factor and an internal diag(c1, c2)
    factor, either of which may be None for the identity. Alternatively the
    element can wrap an operator already expressed on a triple's Hilbert
    space (projected sandwiches are of this kind: they are spinor dependent
    and have no product form).
    """

    terms: tuple = ()
    operator: np.ndarray | None = None
    form: str = "product"

    @property
    def moyal_part(self) -> np.ndarray | None:
        return self.terms[0][0] if len(self.terms) == 1 else None

    @property
    def internal_part(self) -> tuple | None:
        return self.terms[0][1] if len(self.terms) == 1 else None

    def is_self_adjoint(self, tol: float = 1e-10) -> bool:
        if self.operator is not None:
            return linalg.is_hermitian(self.operator, tol)
        for moyal_part, internal in self.terms:
            if moyal_part is not None and not linalg.is_hermitian(moyal_part, tol):
                return False
            if internal is not None and (abs(complex(internal[0]).imag) > tol or abs(complex(internal[1]).imag) > tol):
                return False
        return True


def moyal_element(a) -> AlgebraElement:
    return AlgebraElement(terms=((linalg.as_matrix(a), None),), form="moyal-only")


def internal_element(c1: complex, c2: complex) -> AlgebraElement:
    return AlgebraElement(terms=((None, (c1, c2)),), form="internal-only")


def product_element(a, c1: complex, c2: complex) -> AlgebraElement:
    return AlgebraElement(terms=((linalg.as_matrix(a), (c1, c2)),), form="product")


def sum_of_products(terms) -> AlgebraElement:
    packed = tuple(
        (None if a is None else linalg.as_matrix(a), None if c is None else (c[0], c[1]))
        for a, c in terms
    )
    return AlgebraElement(terms=packed, form="sum-of-products")


def represented_element(op, form: str = "projected") -> AlgebraElement:
    return AlgebraElement(operator=linalg.as_matrix(op), form=form)


@dataclass(frozen=True)
class SpectralTriple:
    dirac: np.ndarray
    grading: np.ndarray
    represent: Callable[[AlgebraElement], np.ndarray]
    state_embed: Callable[[StateFunctional], np.ndarray]
    hilbert_dim: int
    label: str = ""

    def __post_init__(self):
        d = linalg.as_matrix(self.dirac)
        g = linalg.as_matrix(self.grading)
        if d.shape != (self.hilbert_dim, self.hilbert_dim):
            raise ValueError(f"{self.label}: Dirac shape {d.shape} vs hilbert_dim {self.hilbert_dim}")
        if not linalg.is_hermitian(d):
            raise ValueError(f"{self.label}: Dirac operator is not Hermitian")
        if not linalg.is_hermitian(g):
            raise ValueError(f"{self.label}: grading is not Hermitian")
        eye = np.eye(self.hilbert_dim)
        if np.abs(g @ g - eye).max() > 1e-10:
            raise ValueError(f"{self.label}: grading does not square to the identity")
        if np.abs(g @ d + d @ g).max() > 1e-10:
            raise ValueError(f"{self.label}: grading does not anticommute with the Dirac operator")


@dataclass
class DistanceReport:
    """Distance value with the element and ball certificate behind it."""

    value: float
    optimal_element: AlgebraElement | None
    ball_norm: float
    truncation_order: int | None
    method: str
    projector_rank: int | None = None
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if math.isfinite(self.value) and self.ball_norm > 1.0 + BALL_TOL:
            raise BallViolation(
                f"report carries ball norm {self.ball_norm:.12f} > 1 + {BALL_TOL:.0e}"
            )

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "ball_norm": self.ball_norm,
            "method": self.method,
            "n_max": self.truncation_order,
            "N": self.projector_rank,
            "warnings": list(self.warnings),
        }


def ball_norm(t: SpectralTriple, a: AlgebraElement) -> float:
    """Operator norm of [D, pi(a)], the Lipschitz ball constraint functional."""
    return linalg.operator_norm(linalg.commutator(t.dirac, t.represent(a)))


def projected_ball_norm(t: SpectralTriple, a: AlgebraElement, proj: np.ndarray) -> float:
    """Operator norm of P [D, pi(a)] P.

    This is the ball functional of the compressed triple (P D P, P H). It is
    the right certificate for elements meant to act inside the range of a
    projector built from translated states, where sandwiching the element
    itself before commuting spoils the norm through the projector's own
    Dirac commutator.
    """
    p = linalg.as_matrix(proj)
    return linalg.operator_norm(p @ linalg.commutator(t.dirac, t.represent(a)) @ p)


def eval_state(t: SpectralTriple, rho: StateFunctional, a: AlgebraElement) -> float:
    """rho(a) = Tr(rho a) on the natural algebra space.

    Computed as Tr(embed(rho) pi(a)); for triples whose Hilbert space doubles
    the algebra space by a spinor factor, state_embed carries the 1/2 that
    undoes the diagonal doubling, so the result equals the natural trace.
    """
    return float(np.trace(t.state_embed(rho) @ t.represent(a)).real)


def distance_from_element(
    t: SpectralTriple,
    rho1: StateFunctional,
    rho2: StateFunctional,
    a: AlgebraElement,
    certificate: AlgebraElement | None = None,
    certificate_norm: float | None = None,
    truncation_order: int | None = None,
    projector_rank: int | None = None,
    method: str = "analytic",
    warnings: list[str] | None = None,
) -> DistanceReport:
    """Certified lower bound |rho1(a) - rho2(a)| on the spectral distance.

    The ball membership is certified on `certificate` (default: a itself),
    or taken from a precomputed `certificate_norm` such as the projected
    ball functional. Curated callers pass the projector-sandwiched
    restriction of `a` as the certificate and evaluate `a` directly: each
    sandwich lies in the ball with norm 1 at every rank, and the
    evaluations of the sandwiches climb to the evaluation of `a` as the
    rank grows, so the reported value is the supremum of the certified
    bounds up to state tails beyond the truncation order.
    """
    if certificate_norm is not None:
        bn = float(certificate_norm)
    else:
        bn = ball_norm(t, certificate if certificate is not None else a)
    if bn > 1.0 + BALL_TOL:
        raise BallViolation(f"ball norm {bn:.12f} exceeds 1 + {BALL_TOL:.0e}")
    value = abs(eval_state(t, rho1, a) - eval_state(t, rho2, a))
    return DistanceReport(
        value=value,
        optimal_element=certificate if certificate is not None else a,
        ball_norm=bn,
        truncation_order=truncation_order,
        method=method,
        projector_rank=projector_rank,
        warnings=list(warnings or []),
    )


def _orthonormalize(columns: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Modified Gram-Schmidt, dropping columns that lose rank."""
    out = []
    for j in range(columns.shape[1]):
        v = columns[:, j].astype(complex)
        for u in out:
            v = v - u * np.vdot(u, v)
        for u in out:  # second pass for orthogonality at working precision
            v = v - u * np.vdot(u, v)
        nrm = np.linalg.norm(v)
        if nrm > tol:
            out.append(v / nrm)
    return np.array(out).T if out else np.zeros((columns.shape[0], 0), dtype=complex)


def projector_commutator_norm(dirac: np.ndarray, basis: np.ndarray) -> float:
    """||[D, P]|| for P projecting onto the span of orthonormal columns.

    [D, P] annihilates the orthogonal complement of S = span{v_i, D v_i} and
    preserves S, so the norm is computed exactly on that compression instead
    of on the ambient space.
    """
    v = np.asarray(basis, dtype=complex)
    if v.ndim == 1:
        v = v[:, None]
    dv = dirac @ v
    w = _orthonormalize(np.hstack([v, dv]))
    p_small = (w.conj().T @ v) @ (v.conj().T @ w)
    d_small = w.conj().T @ (dirac @ w)
    return linalg.operator_norm(d_small @ p_small - p_small @ d_small)


def restrict(t: SpectralTriple, proj: np.ndarray, basis: np.ndarray | None = None) -> SpectralTriple:
    """Compress the triple onto the range of a Dirac-commuting projector.

    Distances between states supported in the projector are unchanged by the
    compression; that guarantee needs [D, proj] = 0, so a violation raises
    ProjectorNotCommuting rather than returning an uncertified triple.

    basis, when given, must hold orthonormal columns spanning the range; for
    diagonal 0/1 projectors the coordinate basis is picked automatically.
    """
    proj = linalg.as_matrix(proj)
    n = t.hilbert_dim
    if proj.shape != (n, n):
        raise ValueError(f"projector shape {proj.shape} vs Hilbert dimension {n}")
    if not linalg.is_hermitian(proj) or np.abs(proj @ proj - proj).max() > 1e-10:
        raise RuntimeError(
            "restriction operator is not an orthogonal projector; at fixed "
            "n_max this happens when truncation tails degrade a translated frame"
        )
    if np.abs(proj - np.eye(n)).max() <= 1e-12:
        return t

    if basis is not None:
        w = _orthonormalize(np.asarray(basis, dtype=complex))
        comm = projector_commutator_norm(t.dirac, w)
    else:
        offdiag = proj - np.diag(np.diag(proj))
        diag = np.diag(proj).real
        if np.abs(offdiag).max() <= 1e-12 and np.all((np.abs(diag) <= 1e-12) | (np.abs(diag - 1) <= 1e-12)):
            keep = np.where(diag > 0.5)[0]
            w = np.eye(n, dtype=complex)[:, keep]
        else:
            dec = linalg.hermitian_eig(proj)
            w = dec.eigenvectors[:, dec.eigenvalues > 0.5]
        comm = linalg.operator_norm(linalg.commutator(t.dirac, proj))
    if comm > PROJECTOR_COMMUTATION_TOL:
        raise ProjectorNotCommuting(
            f"||[D, P]|| = {comm:.3e} exceeds {PROJECTOR_COMMUTATION_TOL:.0e}; restricted distances are not certified"
        )

    wd = w.conj().T
    parent_represent = t.represent
    parent_embed = t.state_embed
    return SpectralTriple(
        dirac=wd @ t.dirac @ w,
        grading=wd @ t.grading @ w,
        represent=lambda a: wd @ parent_represent(a) @ w,
        state_embed=lambda rho: wd @ parent_embed(rho) @ w,
        hilbert_dim=w.shape[1],
        label=f"{t.label}|restricted",
    )


def gauge_rotate(t: SpectralTriple, phi: float) -> SpectralTriple:
    """Conjugate the Dirac operator by the internal phase diag(1, e^{i phi}).

    The internal component sits in the last Kronecker factor; represented
    algebra elements are internally diagonal and therefore invariant, so the
    rotation changes the Dirac coupling's phase and nothing else.
    """
    n = t.hilbert_dim
    if n % 2:
        raise ValueError("gauge rotation needs an internal two-dimensional factor")
    u = linalg.kron(np.eye(n // 2, dtype=complex), np.diag([1.0, np.exp(1j * phi)]))
    return replace(t, dirac=u @ t.dirac @ u.conj().T, label=t.label)
