"""Truncated Fock space: ladder operators, coherent states, translations.

The space keeps states |0> .. |n_max> (dimension n_max + 1) and the
noncommutativity parameter theta. Hard truncation puts the usual artifact
into the top row of the ladder commutator; every downstream computation that
needs exactness stays on interior blocks through the projectors built here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class FockSpace:
    """Truncation order and deformation parameter of the quantized plane."""

    n_max: int
    theta: float

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError(f"n_max must be at least 2, got {self.n_max}")
        if not self.theta > 0:
            raise ValueError(f"theta must be positive, got {self.theta}")

    @property
    def dim(self) -> int:
        return self.n_max + 1


@dataclass
class StateFunctional:
    """Density matrix rho with evaluation rho(a) = Tr(rho a)."""

    rho: np.ndarray
    label: str = ""
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.rho = linalg.as_matrix(self.rho)
        if not linalg.is_hermitian(self.rho):
            raise ValueError(f"state {self.label!r}: density matrix is not Hermitian")
        tr = complex(np.trace(self.rho))
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"state {self.label!r}: trace is {tr}, expected 1")

    def validate_positive(self, tol: float = -1e-12) -> None:
        """Full positivity check; separate because it costs an eigensolve."""
        w = linalg.hermitian_eig(self.rho).eigenvalues
        if w.min() < tol:
            raise ValueError(f"state {self.label!r}: negative eigenvalue {w.min():.3e}")


def pure_state(vector, label: str = "", warnings: list[str] | None = None) -> StateFunctional:
    v = np.asarray(vector, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("cannot build a state from the zero vector")
    v = v / nrm
    return StateFunctional(np.outer(v, v.conj()), label=label, warnings=list(warnings or []))


def lowering(space: FockSpace) -> np.ndarray:
    """Ladder matrix with <m|b|n> = sqrt(n) delta_{m,n-1}."""
    return np.diag(np.sqrt(np.arange(1, space.dim, dtype=float)), k=1).astype(complex)


def raising(space: FockSpace) -> np.ndarray:
    return lowering(space).conj().T


def number_state(space: FockSpace, n: int) -> np.ndarray:
    if not 0 <= n <= space.n_max:
        raise ValueError(f"level {n} outside 0..{space.n_max}")
    v = np.zeros(space.dim, dtype=complex)
    v[n] = 1.0
    return v


def number_projector(space: FockSpace, N: int) -> np.ndarray:
    """P_N: orthogonal projector onto span{|0>, ..., |N>}; zero for N < 0."""
    p = np.zeros((space.dim, space.dim), dtype=complex)
    for n in range(min(N, space.n_max) + 1):
        p[n, n] = 1.0
    return p


def _coherent_tail(space: FockSpace, z: complex) -> float:
    x = abs(z) ** 2
    total = 0.0
    term = 1.0
    for n in range(space.dim):
        total += term
        term *= x / (n + 1)
    return max(0.0, 1.0 - math.exp(-x) * total)


def coherent_ket(space: FockSpace, z: complex) -> tuple[np.ndarray, list[str]]:
    """Truncated coherent vector, renormalized to unit norm after truncation.

    Returns the column and a (possibly empty) list of truncation warnings;
    the discarded weight only warns, a sweep over z must not abort.
    """
    c = np.zeros(space.dim, dtype=complex)
    c[0] = 1.0
    for k in range(1, space.dim):
        c[k] = c[k - 1] * z / np.sqrt(k)
    c *= np.exp(-0.5 * abs(z) ** 2)
    c /= np.linalg.norm(c)
    warnings = []
    tail = _coherent_tail(space, z)
    if tail > TAIL_TOL:
        warnings.append(f"coherent state z={z}: discarded tail weight {tail:.3e} exceeds {TAIL_TOL:.0e}")
    return c, warnings


def coherent_state(space: FockSpace, z: complex) -> StateFunctional:
    """Density matrix |z><z| of the maximally localized state at z."""
    ket, warnings = coherent_ket(space, z)
    return pure_state(ket, label=f"coherent z={z}", warnings=warnings)


def displacement(space: FockSpace, z: complex) -> np.ndarray:
    """Translation unitary exp(z b^dag - conj(z) b).

    Unitary on the bulk of the truncated space; the deviation is confined to
    the top levels and decays with the coherent tail of |z|.
    """
    b = lowering(space)
    return linalg.expm(z * b.conj().T - np.conj(z) * b)


def translated_basis(space: FockSpace, z: complex, k: int) -> np.ndarray:
    """|k~>: the k-th basis vector of the harmonic ladder centered at z.

    Built as (b^dag - conj(z))^k |z> with per-step normalization, then unit
    normalized, which fixes the global phase; agrees with displacement(z)|k>
    up to that phase.
    """
    if not 0 <= k <= space.n_max:
        raise ValueError(f"translated level {k} outside 0..{space.n_max}")
    v, _ = coherent_ket(space, z)
    op = raising(space) - np.conj(z) * np.eye(space.dim)
    for i in range(1, k + 1):
        v = op @ v / np.sqrt(i)
    nrm = np.linalg.norm(v)
    if nrm < 1e-8:
        raise ValueError(f"translated basis vector k={k} lost to truncation (norm {nrm:.1e})")
    return v / nrm
