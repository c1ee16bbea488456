"""End-to-end checks of the closed-form distance results.

Each criterion runs a self-contained computation and compares against the
analytic value at a pinned tolerance. The same runners back the test suite
and the ``verify`` subcommand, so a failure shows up identically in both.
Random draws use fixed seeds; reruns are deterministic.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import doubled as doubledmod
from . import fock
from . import higgs as higgsmod
from . import linalg
from . import moyal as moyalmod
from . import optimizer
from . import triple as triplemod
from . import twopoint as twopointmod


@dataclasses.dataclass
class CriterionResult:
    name: str
    passed: bool
    details: str


def _result(name: str, passed: bool, details: str) -> CriterionResult:
    return CriterionResult(name=name, passed=bool(passed), details=details)


def criterion_moyal_distance(theta_shift: float = 0.0) -> CriterionResult:
    """Coherent-state distance equals sqrt(2 theta)|z| and the ball saturates.

    ``theta_shift`` corrupts the expected value only; nonzero shift is the
    negative control and must make the criterion fail.
    """
    rng = np.random.default_rng(1001)
    worst_rel = 0.0
    for _ in range(20):
        theta = rng.uniform(0.5, 4.0)
        z = (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)) * 1.5 / math.sqrt(2)
        if abs(z) < 1e-3:
            z += 0.3
        space = fock.FockSpace(n_max=24, theta=theta)
        t = moyalmod.build_moyal(space)
        report = moyalmod.moyal_distance(t, z, N=4)
        expected = math.sqrt(2.0 * (theta + theta_shift)) * abs(z)
        worst_rel = max(worst_rel, abs(report.value - expected) / expected)
    theta = 1.7
    space = fock.FockSpace(n_max=24, theta=theta)
    t = moyalmod.build_moyal(space)
    worst_ball = 0.0
    for n in range(2, 9):
        report = moyalmod.moyal_distance(t, 0.6 + 0.4j, N=n)
        worst_ball = max(worst_ball, abs(report.ball_norm - 1.0))
    passed = worst_rel <= 1e-8 and worst_ball <= 1e-8
    return _result(
        "moyal coherent-state distance",
        passed,
        f"max rel error {worst_rel:.2e} over 20 draws; "
        f"max |ball-1| {worst_ball:.2e} for N in 2..8",
    )


def criterion_twopoint_distance() -> CriterionResult:
    rng = np.random.default_rng(1002)
    worst = 0.0
    worst_phase = 0.0
    for _ in range(10):
        lam = rng.uniform(0.3, 3.0) * np.exp(2j * np.pi * rng.uniform())
        t = twopointmod.build_twopoint(lam)
        report = twopointmod.twopoint_distance(t)
        expected = 1.0 / abs(lam)
        worst = max(worst, abs(report.value - expected) / expected)
        t_abs = twopointmod.build_twopoint(abs(lam))
        report_abs = twopointmod.twopoint_distance(t_abs)
        worst_phase = max(worst_phase, abs(report.value - report_abs.value))
    passed = worst <= 1e-12 and worst_phase <= 1e-12
    return _result(
        "two-point distance",
        passed,
        f"max rel error {worst:.2e}; max phase dependence {worst_phase:.2e}",
    )


def criterion_doubled_spectrum() -> CriterionResult:
    space = fock.FockSpace(n_max=40, theta=2.0)
    t = doubledmod.build_doubled(space, lam=1.0)
    rows = doubledmod.spectrum_rows(t)
    worst = max(r["residual"] for r in rows)
    counts: dict[tuple[int, int], int] = {}
    for r in rows:
        key = (r["m"], 1 if r["computed"] >= 0 else -1)
        counts[key] = counts.get(key, 0) + 1
    mult_ok = counts[(0, 1)] == 1 and counts[(0, -1)] == 1
    for m in range(1, space.n_max):
        mult_ok = mult_ok and counts.get((m, 1)) == 2 and counts.get((m, -1)) == 2
    passed = worst < 1e-10 and mult_ok
    return _result(
        "doubled Dirac spectrum",
        passed,
        f"max residual {worst:.2e} over {len(rows)} levels; "
        f"multiplicities {'match' if mult_ok else 'WRONG'}",
    )


def criterion_eigenspinors() -> CriterionResult:
    space = fock.FockSpace(n_max=20, theta=1.3)
    t = doubledmod.build_doubled(space, lam=1.7 * np.exp(0.6j))
    spinors = doubledmod.doubled_eigenspinors(t, m_max=space.n_max - 1)
    d = t.triple.dirac
    worst_res = 0.0
    vecs = []
    for s in spinors:
        worst_res = max(worst_res, float(np.linalg.norm(d @ s.vector - s.eigenvalue * s.vector)))
        vecs.append(s.vector)
    v = np.column_stack(vecs)
    gram_dev = float(np.abs(v.conj().T @ v - np.eye(v.shape[1])).max())
    worst_proj = 0.0
    for n in (1, 2, 5, 10):
        script = doubledmod.projector_script_PN(t, n)
        split = doubledmod._split_projector(
            space, fock.number_projector(space, n), fock.number_projector(space, n - 1))
        worst_proj = max(worst_proj, float(np.abs(script - split).max()))
    passed = worst_res < 1e-10 and gram_dev < 1e-12 and worst_proj < 1e-12
    return _result(
        "doubled eigen-spinors",
        passed,
        f"max eigen-residual {worst_res:.2e}; orthonormality {gram_dev:.2e}; "
        f"projector split {worst_proj:.2e}",
    )


def criterion_longitudinal_matrix() -> CriterionResult:
    space = fock.FockSpace(n_max=20, theta=2.0)
    t = doubledmod.build_doubled(space, lam=1.0)
    m_num = doubledmod.matrix_Ml(t, X=1.0)
    m_closed = doubledmod.closed_form_Ml(t, X=1.0)
    entry_dev = float(np.abs(m_num - m_closed).max())
    gram = m_num.conj().T @ m_num
    top = linalg.hermitian_eig(gram).eigenvalues[0]
    top_dev = abs(top - 1.0 * 1.0 * t.kappa)
    passed = entry_dev <= 1e-10 and top_dev <= 1e-10
    return _result(
        "longitudinal matrix closed form",
        passed,
        f"entrywise deviation {entry_dev:.2e}; top eigenvalue off by {top_dev:.2e}",
    )


def criterion_longitudinal_distance() -> CriterionResult:
    rng = np.random.default_rng(1006)
    worst = 0.0
    branch_ok = True
    branch_dev = 0.0
    for _ in range(10):
        theta = rng.uniform(0.5, 3.0)
        lam = rng.uniform(0.7, 2.5) * np.exp(2j * np.pi * rng.uniform())
        z = rng.uniform(0.2, 1.2) * np.exp(2j * np.pi * rng.uniform())
        n_small = int(rng.integers(2, 6))
        space = fock.FockSpace(n_max=24, theta=theta)
        t = doubledmod.build_doubled(space, lam=lam)
        report = doubledmod.longitudinal_distance(t, z, N=n_small)
        expected = math.sqrt(2.0 * theta) * abs(z)
        worst = max(worst, abs(report.value - expected) / expected)
        note = next(w for w in report.warnings if "branch" in w)
        rej = float(note.split("gives ")[1].split(" ")[0])
        branch_ok = branch_ok and rej < report.value
        kappa = t.kappa
        closed = 2.0 * abs(z) / (abs(lam) * math.sqrt(
            8.0 + kappa + 4.0 * math.sqrt(1.0 + kappa)))
        branch_dev = max(branch_dev, abs(rej - closed) / closed)
    passed = worst <= 1e-8 and branch_ok and branch_dev <= 1e-6
    return _result(
        "longitudinal distance",
        passed,
        f"max rel error {worst:.2e} over 10 draws; rejected branch "
        f"{'below' if branch_ok else 'NOT below'} kept branch, closed-form dev {branch_dev:.2e}",
    )


def criterion_transverse_distance() -> CriterionResult:
    space = fock.FockSpace(n_max=40, theta=1.1)
    lam = 1.6 * np.exp(0.9j)
    t = doubledmod.build_doubled(space, lam=lam)
    expected = 1.0 / abs(lam)
    worst = 0.0
    zs = [0.0, 0.5, -0.3 + 0.8j, 1.3 + 0.4j, -1.1j]
    for n in range(1, 7):
        for z in zs:
            report = doubledmod.transverse_distance(t, z, N=n)
            worst = max(worst, abs(report.value - expected))
    m_num = doubledmod.matrix_Mt(t, Y=0.7)
    gram = m_num.conj().T @ m_num
    target = abs(lam) ** 2 * 0.7 ** 2 * np.eye(10)
    gram_dev = float(np.abs(gram - target).max())
    passed = worst <= 1e-9 and gram_dev <= 1e-12
    return _result(
        "transverse distance",
        passed,
        f"max |d - 1/lam| {worst:.2e} over N in 1..6 and 5 anchors; "
        f"M_t gram deviation {gram_dev:.2e}",
    )


def criterion_hypotenuse() -> CriterionResult:
    rng = np.random.default_rng(1008)
    worst = 0.0
    worst_pyth = 0.0
    for _ in range(25):
        theta = rng.uniform(0.5, 3.0)
        lam = rng.uniform(0.7, 2.5) * np.exp(2j * np.pi * rng.uniform())
        z = rng.uniform(0.2, 1.2) * np.exp(2j * np.pi * rng.uniform())
        space = fock.FockSpace(n_max=40, theta=theta)
        t = doubledmod.build_doubled(space, lam=lam)
        d_h = doubledmod.hypotenuse_distance(t, z, N=3)
        d_l = doubledmod.longitudinal_distance(t, z, N=3)
        d_t = doubledmod.transverse_distance(t, z, N=3)
        expected = math.hypot(math.sqrt(2.0 * theta) * abs(z), 1.0 / abs(lam))
        worst = max(worst, abs(d_h.value - expected) / expected)
        resid = abs(d_h.value ** 2 - d_l.value ** 2 - d_t.value ** 2)
        worst_pyth = max(worst_pyth, resid / d_h.value ** 2)
    passed = worst <= 1e-8 and worst_pyth <= 1e-10
    return _result(
        "hypotenuse and Pythagoras",
        passed,
        f"max rel error {worst:.2e}; max Pythagoras residual {worst_pyth:.2e} "
        f"relative to d_h^2, over 25 draws",
    )


def oracle_case(
    kind: str,
    theta: float = 1.0,
    lam: complex = 2.0,
    z: complex = 0.5,
    n_max: int = 16,
    k: int = 4,
):
    """Assemble (triple, rho1, rho2, probes, analytic) for one oracle run."""
    if kind == "moyal":
        space = fock.FockSpace(n_max=n_max, theta=theta)
        t = moyalmod.build_moyal(space)
        rho1 = fock.coherent_state(space, 0.0)
        rho2 = fock.coherent_state(space, z)
        probes = optimizer.probe_elements_moyal(space, K=k)
        analytic = math.sqrt(2.0 * theta) * abs(z)
        return t.triple, rho1, rho2, probes, analytic
    if kind == "twopoint":
        t = twopointmod.build_twopoint(lam)
        probes = optimizer.probe_elements_twopoint()
        return (
            t.triple,
            twopointmod.point_state(1),
            twopointmod.point_state(2),
            probes,
            1.0 / abs(lam),
        )
    space = fock.FockSpace(n_max=n_max, theta=theta)
    t = doubledmod.build_doubled(space, lam=lam)
    probes = optimizer.probe_elements_doubled(space, K=k)
    if kind == "longitudinal":
        rho1 = doubledmod.composite_state(space, 0.0, sheet=1).rho
        rho2 = doubledmod.composite_state(space, z, sheet=1).rho
        analytic = math.sqrt(2.0 * theta) * abs(z)
    elif kind == "transverse":
        rho1 = doubledmod.composite_state(space, z, sheet=1).rho
        rho2 = doubledmod.composite_state(space, z, sheet=2).rho
        analytic = 1.0 / abs(lam)
    elif kind == "hypotenuse":
        rho1 = doubledmod.composite_state(space, 0.0, sheet=1).rho
        rho2 = doubledmod.composite_state(space, z, sheet=2).rho
        analytic = math.hypot(math.sqrt(2.0 * theta) * abs(z), 1.0 / abs(lam))
    else:
        raise ValueError(f"unknown oracle kind {kind!r}")
    return t.triple, rho1, rho2, probes, analytic


ORACLE_KINDS = ("moyal", "twopoint", "longitudinal", "transverse", "hypotenuse")

_ORACLE_PARAMS = {
    "moyal": dict(theta=1.0, z=0.5),
    "twopoint": dict(lam=1.5 + 0.5j),
    "longitudinal": dict(theta=1.0, lam=2.0, z=0.5),
    "transverse": dict(theta=1.0, lam=2.0, z=0.4),
    "hypotenuse": dict(theta=1.0, lam=2.0, z=0.5),
}


def criterion_oracle() -> CriterionResult:
    details = []
    passed = True
    for kind in ORACLE_KINDS:
        t, rho1, rho2, probes, analytic = oracle_case(kind, **_ORACLE_PARAMS[kind])
        problem = optimizer.BallProblem(
            triple=t, rho1=rho1, rho2=rho2, basis=probes, seed=42, starts=16
        )
        report = optimizer.supremum_lower_bound(problem)
        ratio = report.value / analytic
        ok = ratio >= 0.99 and report.value <= analytic * (1.0 + 1e-6)
        passed = passed and ok
        details.append(f"{kind} {100 * ratio:.2f}%")
    return _result(
        "numerical supremum lower bound",
        passed,
        "recovered " + ", ".join(details) + " of the analytic distances",
    )


def higgs_example_config(space: fock.FockSpace) -> higgsmod.HiggsConfig:
    """Projector-valued field: c = 0.45 P_30, real couplings."""
    c = 0.45 * fock.number_projector(space, 30)
    return higgsmod.HiggsConfig(
        c_element=c, alpha1=1.0, alpha2=-1.0, beta1=0.0, beta2=0.8
    )


def criterion_higgs() -> CriterionResult:
    space = fock.FockSpace(n_max=40, theta=1.4)
    lam = 1.2
    base = doubledmod.build_doubled(space, lam=lam)

    cfg0 = higgsmod.HiggsConfig(
        c_element=np.zeros((space.dim, space.dim)),
        alpha1=1.0, alpha2=-1.0, beta1=0.3, beta2=0.3,
    )
    ft0 = higgsmod.fluctuate(base, cfg0)
    z0 = 0.4 + 0.3j
    plain = doubledmod.transverse_distance(base, z0, N=2)
    rerun = doubledmod.transverse_distance(ft0.as_doubled(), z0, N=2)
    bitwise = plain.value == rerun.value and plain.ball_norm == rerun.ball_norm

    cfg = higgs_example_config(space)
    ft = higgsmod.fluctuate(base, cfg)
    worst = 0.0
    grid = [gx + 1j * gy for gx in (-1.0, 0.0, 1.0) for gy in (-1.0, 0.0, 1.0)]
    for z in grid:
        report = higgsmod.fluctuated_transverse_distance(ft, z)
        g = higgsmod.evaluated_g(ft, z)
        expected = 1.0 / abs(lam * (1.0 + cfg.coupling1 * g))
        worst = max(worst, abs(report.value - expected) / expected)

    k0 = fock.translated_basis(space, z0, 0)
    k1 = fock.translated_basis(space, z0, 1)
    c_bad = np.outer(k0, k1.conj()) + np.outer(k1, k0.conj())
    cfg_bad = higgsmod.HiggsConfig(
        c_element=c_bad, alpha1=1.0, alpha2=-1.0, beta1=0.0, beta2=0.8
    )
    ft_bad = higgsmod.fluctuate(base, cfg_bad)
    try:
        higgsmod.fluctuated_transverse_distance(ft_bad, z0)
        control_caught = False
    except triplemod.ProjectorNotCommuting:
        control_caught = True

    passed = bitwise and worst <= 1e-9 and control_caught
    return _result(
        "Higgs-fluctuated transverse distance",
        passed,
        f"zero-field rerun {'bit-for-bit' if bitwise else 'DIFFERS'}; "
        f"max rel error {worst:.2e} over 9 grid points; non-commuting control "
        f"{'raised' if control_caught else 'MISSED'}",
    )


def criterion_translation() -> CriterionResult:
    rng = np.random.default_rng(1011)
    worst = 0.0
    for _ in range(10):
        theta = rng.uniform(0.5, 2.5)
        z1 = rng.uniform(0.1, 1.0) * np.exp(2j * np.pi * rng.uniform())
        z2 = rng.uniform(0.1, 1.0) * np.exp(2j * np.pi * rng.uniform())
        if abs(z2 - z1) < 0.05:
            z2 += 0.4
        space = fock.FockSpace(n_max=40, theta=theta)
        t = moyalmod.build_moyal(space)
        report = moyalmod.distance_between(t, z1, z2, N=4)
        expected = math.sqrt(2.0 * theta) * abs(z2 - z1)
        worst = max(worst, abs(report.value - expected))
    passed = worst <= 1e-6
    return _result(
        "translation invariance",
        passed,
        f"max abs error {worst:.2e} over 10 coherent-state pairs at n_max=40",
    )


CRITERIA = (
    ("1", criterion_moyal_distance),
    ("2", criterion_twopoint_distance),
    ("3", criterion_doubled_spectrum),
    ("4", criterion_eigenspinors),
    ("5", criterion_longitudinal_matrix),
    ("6", criterion_longitudinal_distance),
    ("7", criterion_transverse_distance),
    ("8", criterion_hypotenuse),
    ("9", criterion_oracle),
    ("10", criterion_higgs),
    ("11", criterion_translation),
)


def run_all() -> list[tuple[str, CriterionResult]]:
    return [(num, fn()) for num, fn in CRITERIA]


def negative_control() -> CriterionResult:
    """Corrupt the expected value and confirm the check notices."""
    corrupted = criterion_moyal_distance(theta_shift=0.1)
    detected = not corrupted.passed
    return _result(
        "negative control",
        detected,
        "corrupted expected value was "
        + ("rejected as it should be" if detected else "ACCEPTED; checks are vacuous"),
    )
