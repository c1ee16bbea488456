"""Dense complex linear algebra used by every other module.

Matrices are 2-d numpy arrays of complex128. The two nontrivial algorithms
(Hermitian eigendecomposition, matrix exponential) are implemented here
rather than taken from a LAPACK wrapper so that the certification tolerances
quoted by the distance reports are backed by algorithms whose convergence
criteria this package controls.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITICITY_TOL = 1e-10
EIG_TOL = 1e-10
EXPM_TOL = 1e-12

# Entries below this fraction of the largest magnitude are treated as
# structural zeros when trimming operator supports.
TRIM_REL = 1e-14


class ConvergenceError(RuntimeError):
    """Jacobi sweep limit reached before the off-diagonal norm converged."""


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def commutator(a, b) -> np.ndarray:
    """ab - ba for square matrices of equal dimension."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"commutator needs equal square matrices, got {a.shape}, {b.shape}")
    return a @ b - b @ a


def kron(*factors) -> np.ndarray:
    """Kronecker product of two or more matrices, left to right."""
    if len(factors) < 2:
        raise ValueError("kron needs at least two factors")
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = np.kron(out, as_matrix(f))
    return out


def is_hermitian(m, tol: float = HERMITICITY_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return float(np.abs(m - m.conj().T).max()) <= tol


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, sorted descending
    eigenvectors: np.ndarray  # orthonormal columns, eigenvectors[:, i] <-> eigenvalues[i]


def _jacobi(a: np.ndarray, max_sweeps: int, tol_factor: float):
    """Cyclic complex Jacobi on a Hermitian matrix, in place.

    Each (p, q) rotation is a unitary built from the phase of a[p, q] and the
    classic real rotation angle; columns of v accumulate the eigenvectors.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    fro = float(np.linalg.norm(a))
    if fro == 0.0 or n == 1:
        return np.diag(a).real.copy(), v
    thresh = tol_factor * fro
    converged = False
    for _ in range(max_sweeps):
        od = np.abs(a) ** 2
        od[np.diag_indices(n)] = 0.0
        if np.sqrt(od.sum()) <= thresh:
            converged = True
            break
        skip = thresh / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                phase = apq / abs(apq)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * abs(apq))
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns of the 2x2 rotation: gp = (c, -s e^{-i phi}), gq = (s e^{i phi}, c)
                gp0, gp1 = c, -s * np.conj(phase)
                gq0, gq1 = s * phase, c
                rp = np.conj(gp0) * a[p, :] + np.conj(gp1) * a[q, :]
                rq = np.conj(gq0) * a[p, :] + np.conj(gq1) * a[q, :]
                a[p, :] = rp
                a[q, :] = rq
                cp = a[:, p] * gp0 + a[:, q] * gp1
                cq = a[:, p] * gq0 + a[:, q] * gq1
                a[:, p] = cp
                a[:, q] = cq
                wp = v[:, p] * gp0 + v[:, q] * gp1
                wq = v[:, p] * gq0 + v[:, q] * gq1
                v[:, p] = wp
                v[:, q] = wq
    if not converged:
        od = np.abs(a) ** 2
        od[np.diag_indices(n)] = 0.0
        if np.sqrt(od.sum()) > thresh:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (n={n})")
    return np.diag(a).real.copy(), v


def hermitian_eig(m, max_sweeps: int = 100, tol_factor: float = 1e-13) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises ValueError if the input is not Hermitian within HERMITICITY_TOL
    and ConvergenceError if the sweep limit is exhausted.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"hermitian_eig needs a square matrix, got {m.shape}")
    if not is_hermitian(m):
        dev = float(np.abs(m - m.conj().T).max())
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    work = 0.5 * (m + m.conj().T)  # fold sub-tolerance asymmetry
    w, v = _jacobi(work, max_sweeps, tol_factor)
    order = np.argsort(w)[::-1]
    return EigenDecomposition(w[order], v[:, order])


def trim_support(m: np.ndarray, rel: float = TRIM_REL) -> np.ndarray:
    """Drop rows and columns that are zero relative to the largest entry.

    Deleting (near-)zero rows/columns leaves the nonzero singular values
    unchanged, so operator norms survive the trim; commutators of projected
    elements shrink from the full Hilbert-space dimension to their support.
    """
    m = as_matrix(m)
    amax = np.abs(m).max() if m.size else 0.0
    if amax == 0.0:
        return m[:1, :1] * 0.0
    cut = rel * amax
    rows = np.where(np.abs(m).max(axis=1) > cut)[0]
    cols = np.where(np.abs(m).max(axis=0) > cut)[0]
    if rows.size == 0 or cols.size == 0:
        return m[:1, :1] * 0.0
    return m[np.ix_(rows, cols)]


def operator_norm(m) -> float:
    """Largest singular value, via the largest eigenvalue of m^dag m.

    Routing through the Hermitian eigensolver (rather than power iteration)
    keeps the norm certified by the same residual bounds as every other
    spectral quantity here; the support trim keeps the eigensolve at the
    dimension of the operator's actual support.
    """
    m = trim_support(as_matrix(m))
    if np.abs(m).max() == 0.0:
        return 0.0
    scale = float(np.abs(m).max())
    ms = m / scale
    gram = ms.conj().T @ ms
    w, _ = _jacobi(0.5 * (gram + gram.conj().T), max_sweeps=100, tol_factor=1e-13)
    return scale * float(np.sqrt(max(w.max(), 0.0)))


def expm(m, tol: float = EXPM_TOL) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a Taylor kernel.

    The input is scaled by 2^-s until its 1-norm is at most 1/4, the series
    is summed until terms fall below tol relative to the running sum, and
    the result is squared s times.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expm needs a square matrix, got {m.shape}")
    n = m.shape[0]
    norm1 = float(np.abs(m).sum(axis=0).max()) if m.size else 0.0
    if not np.isfinite(norm1):
        raise OverflowError("expm input contains non-finite entries")
    s = 0
    while norm1 > 0.25:
        norm1 /= 2.0
        s += 1
        if s > 64:
            raise OverflowError(f"expm input norm too large to scale ({norm1:.3e} after 64 halvings)")
    a = m / (2.0**s)
    out = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 60):
        term = term @ a / k
        out = out + term
        if np.abs(term).max() <= tol * max(np.abs(out).max(), 1.0):
            break
    for _ in range(s):
        out = out @ out
    return out
