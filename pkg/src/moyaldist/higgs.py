"""Inner fluctuation of the doubled-plane Dirac operator.

A one-form built from an algebra element adds a position-dependent term to
the internal coupling: the transverse distance between a state and its
clone becomes 1/|lambda (1 + alpha1 (beta2 - beta1) g)| with
g = <z~0| c |z~0> evaluated at the anchor. The conjugated copy of the
one-form acts on the opposite module factor and drops out of every
commutator with represented elements, so it is never assembled.

Only the internal (Higgs) part of the one-form is kept; the plane gauge
part is outside this module's scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import doubled, fock, linalg, triple, twopoint
from .doubled import DoubledTriple
from .moyal import E00, I2, SIGMA3

HERMITICITY_TOL = 1e-10


class NonHermitianFluctuation(RuntimeError):
    """The internal entries violate the Hermiticity constraint of the one-form."""


@dataclass(frozen=True)
class HiggsConfig:
    c_element: np.ndarray
    alpha1: complex
    alpha2: complex
    beta1: complex
    beta2: complex

    def __post_init__(self):
        c = linalg.as_matrix(self.c_element)
        if not linalg.is_hermitian(c):
            raise ValueError("c must be a Hermitian element of the truncated plane algebra")
        object.__setattr__(self, "c_element", c)

    @property
    def coupling1(self) -> complex:
        """alpha1 (beta2 - beta1), the factor multiplying g in the upper entry."""
        return complex(self.alpha1) * (complex(self.beta2) - complex(self.beta1))

    @property
    def coupling2(self) -> complex:
        return complex(self.alpha2) * (complex(self.beta1) - complex(self.beta2))


@dataclass(frozen=True)
class FluctuatedTriple:
    base: DoubledTriple
    config: HiggsConfig
    dirac_A: np.ndarray
    triple: triple.SpectralTriple

    def as_doubled(self) -> DoubledTriple:
        """View with the fluctuated Dirac operator in place of the bare one.

        With A = 0 this reruns every distance of the unfluctuated module on
        bitwise identical inputs.
        """
        return DoubledTriple(
            space=self.base.space, lam=self.base.lam, kappa=self.base.kappa, triple=self.triple,
        )


def internal_higgs(t: DoubledTriple, cfg: HiggsConfig) -> np.ndarray:
    """a2 [D2, b2] for diagonal internal entries: antidiag of the two couplings."""
    lam_c = t.coupling
    return np.array([
        [0.0, lam_c * cfg.coupling1],
        [lam_c * cfg.coupling2, 0.0],
    ], dtype=complex)


def build_one_form(t: DoubledTriple, cfg: HiggsConfig) -> np.ndarray:
    """A = sigma3 (x) c (x) a2[D2, b2] on the doubled Hilbert space."""
    c = cfg.c_element
    if c.shape != (t.space.dim, t.space.dim):
        raise ValueError(f"c shape {c.shape} does not match Fock dimension {t.space.dim}")
    return linalg.kron(SIGMA3, c, internal_higgs(t, cfg))


def fluctuate(t: DoubledTriple, cfg: HiggsConfig) -> FluctuatedTriple:
    """Dirac operator plus the Higgs one-form; rejects non-Hermitian entries.

    Hermiticity of the fluctuated operator needs the conjugate of the upper
    coupling to equal the lower one, since both multiply the same Hermitian
    plane element.
    """
    scale = max(abs(cfg.coupling1), abs(cfg.coupling2), 1.0)
    if abs(np.conj(cfg.coupling1) - cfg.coupling2) > HERMITICITY_TOL * scale:
        raise NonHermitianFluctuation(
            f"conj(alpha1 (beta2 - beta1)) = {np.conj(cfg.coupling1):.6g} differs from "
            f"alpha2 (beta1 - beta2) = {cfg.coupling2:.6g}"
        )
    a = build_one_form(t, cfg)
    dirac_a = t.triple.dirac + a
    st = triple.SpectralTriple(
        dirac=dirac_a,
        grading=t.triple.grading,
        represent=t.triple.represent,
        state_embed=t.triple.state_embed,
        hilbert_dim=t.triple.hilbert_dim,
        label=f"{t.triple.label}|fluctuated",
    )
    return FluctuatedTriple(base=t, config=cfg, dirac_A=dirac_a, triple=st)


def evaluated_g(ft: FluctuatedTriple, z: complex) -> complex:
    """g = <z~0| c |z~0> with the translated ground state anchored at z."""
    k0 = fock.translated_basis(ft.base.space, z, 0)
    return complex(np.vdot(k0, ft.config.c_element @ k0))


def fluctuated_coupling(ft: FluctuatedTriple, z: complex) -> complex:
    """lambda(x1, x2) = |lambda| (1 + alpha1 (beta2 - beta1) g) at the anchor z."""
    return ft.base.coupling * (1.0 + ft.config.coupling1 * evaluated_g(ft, z))


def _anchored_fluctuated(ft: FluctuatedTriple, z: complex) -> triple.SpectralTriple:
    base_anchor = doubled.anchored_triple(ft.base, z)
    dirac_a = base_anchor.dirac + build_one_form(ft.base, ft.config)
    return triple.SpectralTriple(
        dirac=dirac_a,
        grading=base_anchor.grading,
        represent=base_anchor.represent,
        state_embed=base_anchor.state_embed,
        hilbert_dim=base_anchor.hilbert_dim,
        label=f"{base_anchor.label}|fluctuated",
    )


def fluctuated_transverse_distance(ft: FluctuatedTriple, z: complex) -> triple.DistanceReport:
    """Transverse distance at z under the fluctuated Dirac operator.

    Restricts the anchored fluctuated triple by the rank-2 translated
    projector; the restriction exists only when c nearly commutes with the
    anchored ground-state dyad, and otherwise the restriction machinery
    raises instead of reporting an uncertified number. The restricted
    operator is the two-point one with coupling lambda(x1, x2); its
    distance is cross-checked numerically against the closed form.
    """
    space = ft.base.space
    z = complex(z)
    k0 = fock.translated_basis(space, z, 0)
    up = np.array([1.0, 0.0], dtype=complex)
    e1 = np.array([1.0, 0.0], dtype=complex)
    e2 = np.array([0.0, 1.0], dtype=complex)
    b0 = np.kron(np.kron(up, k0), e1)
    b1 = np.kron(np.kron(up, k0), e2)
    basis = np.array([b0, b1]).T
    proj = basis @ basis.conj().T

    frame = _anchored_fluctuated(ft, z)
    restricted = triple.restrict(frame, proj, basis=basis)

    lam_fluct = fluctuated_coupling(ft, z)
    lam_numeric = complex(restricted.dirac[0, 1])
    warnings = [
        f"restricted coupling {lam_numeric:.12g} vs closed form {lam_fluct:.12g}",
    ]
    if abs(lam_numeric - lam_fluct) > 1e-9 * max(1.0, abs(lam_fluct)):
        raise RuntimeError(
            f"restricted block coupling {lam_numeric} is not the closed form {lam_fluct}"
        )

    coupling_scale = abs(ft.base.coupling) * max(1.0, abs(ft.config.coupling1))
    if abs(lam_fluct) <= 1e-12 * coupling_scale:
        return triple.DistanceReport(
            value=math.inf,
            optimal_element=None,
            ball_norm=0.0,
            truncation_order=space.n_max,
            method="restricted",
            projector_rank=0,
            warnings=warnings + ["fluctuated coupling vanishes: the sheets decouple at this point"],
        )

    tp = twopoint.build_twopoint(lam_numeric)
    cross = twopoint.twopoint_distance(tp)
    value = 1.0 / abs(lam_fluct)
    if abs(cross.value - value) > 1e-9 * value:
        raise RuntimeError(
            f"restricted two-point distance {cross.value} disagrees with 1/|lambda(x1,x2)| = {value}"
        )
    return triple.DistanceReport(
        value=value,
        optimal_element=cross.optimal_element,
        ball_norm=cross.ball_norm,
        truncation_order=space.n_max,
        method="restricted",
        projector_rank=0,
        warnings=warnings,
    )


def higgs_field_sweep(ft: FluctuatedTriple, grid: list[complex]) -> list[dict]:
    """Fluctuated transverse distance per grid point; failures flagged, not dropped."""
    rows = []
    for z in grid:
        row = {"z": complex(z), "value": math.nan, "warning": ""}
        try:
            report = fluctuated_transverse_distance(ft, z)
            row["value"] = report.value
        except triple.ProjectorNotCommuting as exc:
            row["warning"] = f"restriction condition fails: {exc}"
        rows.append(row)
    return rows
