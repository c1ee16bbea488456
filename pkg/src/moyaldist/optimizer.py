"""Ansatz-free numerical lower bounds on spectral distances.

The supremum over the Lipschitz ball is approximated by maximizing the
scale-invariant ratio |rho1(a) - rho2(a)| / ||[D, a]|| over a finite
Hermitian probe basis. The operator norm is not smooth where the top
singular value is degenerate (exactly the case at the optimum for these
problems), so the ascent runs on smoothed Schatten surrogates with
increasing order, each stage polished by exact renormalization. The result
is always a certified lower bound: the final element is rescaled by its
exact ball norm before evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fock, linalg, triple
from .fock import FockSpace, StateFunctional

SCHATTEN_ORDERS = (1, 2, 4, 8, 16, 32, 64)


class DegenerateProblem(RuntimeError):
    """Every probe evaluates identically on the two states."""


@dataclass
class BallProblem:
    triple: triple.SpectralTriple
    rho1: StateFunctional
    rho2: StateFunctional
    basis: list
    max_iters: int = 60
    seed: int = 42
    starts: int = 16


def hermitian_basis(dim: int) -> list[np.ndarray]:
    """Real basis of Hermitian dim x dim matrices: diagonal units, then pairs."""
    out = []
    for i in range(dim):
        m = np.zeros((dim, dim), dtype=complex)
        m[i, i] = 1.0
        out.append(m)
    for i in range(dim):
        for j in range(i + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[i, j] = m[j, i] = 1.0 / np.sqrt(2.0)
            out.append(m)
            m = np.zeros((dim, dim), dtype=complex)
            m[i, j] = -1j / np.sqrt(2.0)
            m[j, i] = 1j / np.sqrt(2.0)
            out.append(m)
    return out


def plane_probe_basis(space: FockSpace, K: int = 4) -> list[np.ndarray]:
    """Hermitian basis of the K-sandwiched corner of the truncated plane algebra."""
    if K > space.n_max:
        raise ValueError(f"probe cutoff {K} exceeds n_max {space.n_max}")
    f = space.dim
    out = []
    for h in hermitian_basis(K + 1):
        m = np.zeros((f, f), dtype=complex)
        m[: K + 1, : K + 1] = h
        out.append(m)
    return out


def _split_sandwich(space: FockSpace, K: int, op: np.ndarray, internal_dim: int) -> np.ndarray:
    """Compress op by the split projector: P_K on the upper spinor block,
    P_{K-1} on the lower. This is the representation within the projected
    triple, where the truncated supremum is known to saturate."""
    pk = fock.number_projector(space, K)
    pk1 = fock.number_projector(space, K - 1)
    eye_s = np.eye(internal_dim, dtype=complex) if internal_dim > 1 else None
    e00 = np.diag([1.0, 0.0]).astype(complex)
    e11 = np.diag([0.0, 1.0]).astype(complex)
    if eye_s is None:
        proj = linalg.kron(e00, pk) + linalg.kron(e11, pk1)
    else:
        proj = linalg.kron(e00, pk, eye_s) + linalg.kron(e11, pk1, eye_s)
    return proj @ op @ proj


def probe_elements_moyal(space: FockSpace, K: int = 4) -> list[triple.AlgebraElement]:
    """Corner basis in the projected-triple representation."""
    i2 = np.eye(2, dtype=complex)
    out = []
    for m in plane_probe_basis(space, K):
        op = _split_sandwich(space, K, linalg.kron(i2, m), internal_dim=1)
        out.append(triple.represented_element(op, form="projected"))
    return out


def probe_elements_twopoint() -> list[triple.AlgebraElement]:
    return [triple.internal_element(1.0, 0.0), triple.internal_element(0.0, 1.0)]


def probe_elements_doubled(space: FockSpace, K: int = 4) -> list[triple.AlgebraElement]:
    """Plane corner basis tensored with each internal point projector,
    in the projected-triple representation."""
    i2 = np.eye(2, dtype=complex)
    out = []
    for m in plane_probe_basis(space, K):
        for diag in ((1.0, 0.0), (0.0, 1.0)):
            raw = linalg.kron(i2, m, np.diag(diag).astype(complex))
            op = _split_sandwich(space, K, raw, internal_dim=2)
            out.append(triple.represented_element(op, form="projected"))
    return out


def _common_support_trim(mats: list[np.ndarray], rel: float = 1e-14) -> list[np.ndarray]:
    """Compress all matrices to the union of their significant rows/columns."""
    scale = max(np.abs(m).max() for m in mats)
    if scale == 0.0:
        return [m[:1, :1] for m in mats]
    keep = np.zeros(mats[0].shape[0], dtype=bool)
    for m in mats:
        mask = np.abs(m) > rel * scale
        keep |= mask.any(axis=0) | mask.any(axis=1)
    if not keep.any():
        keep[0] = True
    idx = np.where(keep)[0]
    return [m[np.ix_(idx, idx)] for m in mats]


def _schatten_and_gradient(coeffs: np.ndarray, kstack: np.ndarray, p: int):
    """Smoothed norm g_p(M) = Tr((M'M)^p)^(1/2p) for M = sum c_i K_i, with gradient."""
    m = np.tensordot(coeffs, kstack, axes=1)
    h = m.conj().T @ m
    s = max(np.trace(h).real / h.shape[0], 1e-300)
    hs = h / s
    hp1 = np.linalg.matrix_power(hs, p - 1) if p > 1 else np.eye(h.shape[0], dtype=complex)
    tr_hp = np.trace(hp1 @ hs).real
    gp = (tr_hp ** (1.0 / (2 * p))) * np.sqrt(s)
    w = hp1 @ m.conj().T
    grad = 2.0 * np.real(np.einsum("ij,kji->k", w, kstack))
    grad = gp * grad / (2.0 * tr_hp * s)
    return gp, grad


def supremum_lower_bound(p: BallProblem) -> triple.DistanceReport:
    """Best certified lower bound found by multi-start ascent over the probe span.

    Deterministic for fixed (seed, starts, max_iters). The returned ball
    norm is recomputed exactly on the final element, so the value is a
    certified member of the ball regardless of how the ascent behaved.
    """
    t = p.triple
    reps = [t.represent(a) for a in p.basis]
    for r in reps:
        comm_grading = np.abs(t.grading @ r - r @ t.grading).max()
        if comm_grading > 1e-10:
            raise ValueError(f"probe does not commute with the grading (deviation {comm_grading:.3e})")
    delta = t.state_embed(p.rho1) - t.state_embed(p.rho2)
    wvec = np.array([np.trace(delta @ r).real for r in reps])
    if np.abs(wvec).max() < 1e-14:
        raise DegenerateProblem("all probes evaluate identically on the two states")

    comms = [linalg.commutator(t.dirac, r) for r in reps]
    kstack = np.stack(_common_support_trim(comms))

    def exact_norm(coeffs: np.ndarray) -> float:
        return linalg.operator_norm(np.tensordot(coeffs, kstack, axes=1))

    nb = len(p.basis)
    rng = np.random.default_rng(p.seed)
    best_val = -np.inf
    best_coeffs = None
    for _ in range(p.starts):
        c = rng.standard_normal(nb)
        if wvec @ c < 0:
            c = -c
        g = exact_norm(c)
        if g < 1e-14:
            continue
        c = c / g
        for order in SCHATTEN_ORDERS:
            for _ in range(p.max_iters):
                gp, grad = _schatten_and_gradient(c, kstack, order)
                direction = wvec * gp - (wvec @ c) * grad
                dn = np.linalg.norm(direction)
                if dn < 1e-15:
                    break
                direction /= dn
                val = (wvec @ c) / gp
                step = 0.5
                improved = False
                while step > 1e-10:
                    cn = c + step * direction
                    gpn, _ = _schatten_and_gradient(cn, kstack, order)
                    if gpn > 1e-14:
                        cn = cn / gpn
                        if wvec @ cn > val + 1e-16:
                            c = cn
                            improved = True
                            break
                    step *= 0.5
                if not improved:
                    break
            g = exact_norm(c)
            if g > 1e-14:
                c = c / g
        g = exact_norm(c)
        if g < 1e-14:
            continue
        c = c / g
        val = wvec @ c
        if val > best_val:
            best_val = val
            best_coeffs = c

    if best_coeffs is None:
        raise DegenerateProblem("no start produced a usable ascent direction")

    element_op = sum(c * r for c, r in zip(best_coeffs, reps))
    final_norm = linalg.operator_norm(linalg.commutator(t.dirac, element_op))
    if final_norm > 1.0:
        element_op = element_op / final_norm
        best_val = best_val / final_norm
        final_norm = 1.0
    element = triple.represented_element(element_op, form="probe-combination")
    return triple.DistanceReport(
        value=float(best_val),
        optimal_element=element,
        ball_norm=float(final_norm),
        truncation_order=None,
        method="oracle",
        warnings=[f"multi-start ascent: {p.starts} starts, seed {p.seed}, {len(p.basis)} probes"],
    )


def verify_saturation(t: triple.SpectralTriple, a: triple.AlgebraElement, expected_norm: float) -> bool:
    """True when the ball norm of a matches the expected value to 1e-8."""
    return abs(triple.ball_norm(t, a) - expected_norm) <= 1e-8
