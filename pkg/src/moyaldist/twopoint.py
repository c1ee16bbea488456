"""Two-point space: the algebra C^2 with Dirac operator antidiag(Lambda, conj(Lambda)).

The two pure states are the evaluation maps at the two points and sit at
distance 1/|Lambda|, reached by diag(1/|Lambda|, 0). Only the magnitude of
the coupling enters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg, triple
from .fock import StateFunctional

SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class TwoPointTriple:
    lam: complex
    triple: triple.SpectralTriple
    warnings: tuple = ()


def internal_dirac(lam: complex) -> np.ndarray:
    return np.array([[0.0, lam], [np.conj(lam), 0.0]], dtype=complex)


def build_twopoint(lam: complex) -> TwoPointTriple:
    lam = complex(lam)

    def represent(a: triple.AlgebraElement) -> np.ndarray:
        if a.operator is not None:
            op = a.operator
            if op.shape != (2, 2):
                raise ValueError(f"operator shape {op.shape} does not match Hilbert dimension 2")
            return op
        total = np.zeros((2, 2), dtype=complex)
        for moyal_part, internal in a.terms:
            if moyal_part is not None:
                raise ValueError("the two-point triple carries no plane factor")
            if internal is None:
                raise ValueError("empty term")
            total += np.diag([complex(internal[0]), complex(internal[1])])
        return total

    def state_embed(rho: StateFunctional) -> np.ndarray:
        if rho.rho.shape != (2, 2):
            raise ValueError(f"state shape {rho.rho.shape} does not match Hilbert dimension 2")
        return rho.rho

    st = triple.SpectralTriple(
        dirac=internal_dirac(lam),
        grading=SIGMA3.copy(),
        represent=represent,
        state_embed=state_embed,
        hilbert_dim=2,
        label=f"twopoint(lambda={lam})",
    )
    warns = ("coupling is zero: the two points are infinitely far apart",) if lam == 0 else ()
    return TwoPointTriple(lam=lam, triple=st, warnings=warns)


def point_state(index: int) -> StateFunctional:
    """Pure state of point 1 or 2: omega_i(diag(c1, c2)) = c_i."""
    if index not in (1, 2):
        raise ValueError("point index must be 1 or 2")
    rho = np.diag([1.0, 0.0]) if index == 1 else np.diag([0.0, 1.0])
    return StateFunctional(rho=rho.astype(complex), label=f"omega_{index}")


def twopoint_distance(t: TwoPointTriple) -> triple.DistanceReport:
    if t.lam == 0:
        return triple.DistanceReport(
            value=math.inf,
            optimal_element=None,
            ball_norm=0.0,
            truncation_order=None,
            method="analytic",
            warnings=["coupling is zero: every diag(c1, c2) stays in the ball, so the distance diverges"],
        )
    a = triple.internal_element(1.0 / abs(t.lam), 0.0)
    return triple.distance_from_element(
        t.triple, point_state(1), point_state(2), a,
        truncation_order=None,
        method="analytic",
    )
