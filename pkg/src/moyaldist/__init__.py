"""Spectral distances on truncated Moyal-type geometries.

The package computes Connes-style distances between states of three
finite-dimensional spectral triples: the truncated Moyal plane, a two-point
internal space, and their product (the doubled plane). Closed-form values
are checked against saturating algebra elements whose commutator ball norms
certify optimality, and an independent numerical optimizer provides lower
bounds from below.
"""

from .fock import FockSpace, StateFunctional, coherent_state, number_projector, pure_state
from .higgs import (
    FluctuatedTriple,
    HiggsConfig,
    NonHermitianFluctuation,
    evaluated_g,
    fluctuate,
    fluctuated_coupling,
    fluctuated_transverse_distance,
    higgs_field_sweep,
)
from .linalg import ConvergenceError, hermitian_eig, operator_norm
from .moyal import MoyalTriple, build_moyal, distance_between, moyal_distance, moyal_eigenspinors, projector_PN
from .doubled import (
    CompositeState,
    DoubledTriple,
    build_doubled,
    composite_state,
    doubled_eigenspinors,
    hypotenuse_distance,
    longitudinal_distance,
    matrix_Ml,
    matrix_Mt,
    projector_script_PN,
    spectrum_rows,
    transverse_distance,
)
from .optimizer import BallProblem, DegenerateProblem, supremum_lower_bound, verify_saturation
from .triple import (
    AlgebraElement,
    BallViolation,
    DistanceReport,
    ProjectorNotCommuting,
    SpectralTriple,
    ball_norm,
    distance_from_element,
)
from .twopoint import TwoPointTriple, build_twopoint, point_state, twopoint_distance

__version__ = "1.0.0"

__all__ = [
    "AlgebraElement",
    "BallProblem",
    "BallViolation",
    "CompositeState",
    "ConvergenceError",
    "DegenerateProblem",
    "DistanceReport",
    "DoubledTriple",
    "FluctuatedTriple",
    "FockSpace",
    "HiggsConfig",
    "MoyalTriple",
    "NonHermitianFluctuation",
    "ProjectorNotCommuting",
    "SpectralTriple",
    "StateFunctional",
    "TwoPointTriple",
    "ball_norm",
    "build_doubled",
    "build_moyal",
    "build_twopoint",
    "coherent_state",
    "composite_state",
    "distance_between",
    "distance_from_element",
    "doubled_eigenspinors",
    "evaluated_g",
    "fluctuate",
    "fluctuated_coupling",
    "fluctuated_transverse_distance",
    "hermitian_eig",
    "higgs_field_sweep",
    "hypotenuse_distance",
    "longitudinal_distance",
    "matrix_Ml",
    "matrix_Mt",
    "moyal_distance",
    "moyal_eigenspinors",
    "number_projector",
    "operator_norm",
    "point_state",
    "projector_PN",
    "projector_script_PN",
    "pure_state",
    "spectrum_rows",
    "supremum_lower_bound",
    "transverse_distance",
    "twopoint_distance",
    "verify_saturation",
]
