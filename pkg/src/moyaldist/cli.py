"""Command line front end.

Subcommands mirror the library: closed-form distances as JSON reports,
spectrum and field-sweep tables as CSV with a rendered figure next to them,
plus the verification and oracle entry points. Exit code 0 means success,
1 a computational failure (ball violation, non-commuting restriction,
failed convergence), 2 a usage error.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import pathlib
import sys

import click
import numpy as np

from . import doubled as doubledmod
from . import fock
from . import higgs as higgsmod
from . import linalg
from . import moyal as moyalmod
from . import optimizer
from . import plotting
from . import triple as triplemod
from . import twopoint as twopointmod
from . import verification

def parse_complex(text: str) -> complex:
    """Read 'a+bi' notation, e.g. '1.5', '0.5-0.3i', 'i', '-2i'."""
    cleaned = text.strip().replace(" ", "")
    if not cleaned:
        raise ValueError("empty complex literal")
    if cleaned.endswith("i"):
        cleaned = cleaned[:-1] + "j"
        if cleaned == "j" or cleaned.endswith(("+j", "-j")):
            cleaned = cleaned[:-1] + "1j"
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise ValueError(f"cannot parse complex literal {text!r}") from exc


def format_complex(value: complex) -> str:
    value = complex(value)
    if value.imag == 0.0:
        return repr(value.real)
    sign = "+" if value.imag >= 0 else "-"
    return f"{value.real!r}{sign}{abs(value.imag)!r}i"


def _sanitize(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, complex):
        return format_complex(value)
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by the distance-style commands."""

    theta: float
    lam: complex
    n_max: int
    order: int

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError(f"theta must be positive, got {self.theta}")
        if self.n_max < 2:
            raise ValueError(f"n_max must be at least 2, got {self.n_max}")
        if not 0 <= self.order <= self.n_max - 2:
            raise ValueError(
                f"truncation order N={self.order} must satisfy 0 <= N <= n_max-2={self.n_max - 2}"
            )


def _run_config(theta, lam_text, lambda_phase, n_max, order) -> RunConfig:
    try:
        lam = parse_complex(lam_text) * np.exp(1j * lambda_phase)
        return RunConfig(theta=theta, lam=complex(lam), n_max=n_max, order=order)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _guarded(fn):
    try:
        return fn()
    except (
        triplemod.BallViolation,
        triplemod.ProjectorNotCommuting,
        linalg.ConvergenceError,
        RuntimeError,
    ) as exc:
        raise click.ClickException(str(exc))
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _emit(payload: dict, out: str | None):
    text = json.dumps(_sanitize(payload), indent=2)
    if out:
        pathlib.Path(out).write_text(text + "\n")
        click.echo(f"wrote {out}")
    else:
        click.echo(text)


def _report_payload(report, cfg: RunConfig, params: dict) -> dict:
    return {
        "value": report.value,
        "ball_norm": report.ball_norm,
        "method": report.method,
        "n_max": report.truncation_order,
        "N": report.projector_rank,
        "warnings": list(report.warnings),
        "params": params,
    }


@click.group()
@click.version_option(package_name="artifact", prog_name="moyaldist")
def main():
    """Spectral distances on truncated Moyal-type geometries."""


_KINDS = ("moyal", "twopoint", "longitudinal", "transverse", "hypotenuse")


@main.command()
@click.argument("kind", type=click.Choice(_KINDS))
@click.option("--theta", type=float, default=1.0, show_default=True,
              help="noncommutativity parameter")
@click.option("--lambda", "lam_text", default="1", show_default=True,
              help="internal coupling, 'a+bi' notation")
@click.option("--lambda-phase", type=float, default=0.0, show_default=True,
              help="extra phase multiplied onto the coupling (radians)")
@click.option("--z", "z_text", default="0.5", show_default=True,
              help="target point, 'a+bi' notation")
@click.option("--z-from", "z_from_text", default="0", show_default=True,
              help="source point (moyal only)")
@click.option("--n-max", type=int, default=24, show_default=True,
              help="Fock truncation level")
@click.option("-N", "--order", type=int, default=4, show_default=True,
              help="projector truncation order")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="write the JSON report here instead of stdout")
def distance(kind, theta, lam_text, lambda_phase, z_text, z_from_text, n_max, order, out):
    """Compute one spectral distance and emit a JSON report."""
    cfg = _run_config(theta, lam_text, lambda_phase, n_max, order)
    try:
        z = parse_complex(z_text)
        z_from = parse_complex(z_from_text)
    except ValueError as exc:
        raise click.UsageError(str(exc))

    def compute():
        if kind == "moyal":
            space = fock.FockSpace(n_max=cfg.n_max, theta=cfg.theta)
            t = moyalmod.build_moyal(space)
            return moyalmod.distance_between(t, z_from, z, N=cfg.order)
        if kind == "twopoint":
            return twopointmod.twopoint_distance(twopointmod.build_twopoint(cfg.lam))
        space = fock.FockSpace(n_max=cfg.n_max, theta=cfg.theta)
        t = doubledmod.build_doubled(space, lam=cfg.lam)
        fn = {
            "longitudinal": doubledmod.longitudinal_distance,
            "transverse": doubledmod.transverse_distance,
            "hypotenuse": doubledmod.hypotenuse_distance,
        }[kind]
        return fn(t, z, N=cfg.order)

    report = _guarded(compute)
    params = {
        "kind": kind,
        "theta": cfg.theta,
        "lambda": cfg.lam,
        "z": z,
        "z_from": z_from,
    }
    _emit(_report_payload(report, cfg, params), out)


@main.command()
@click.option("--theta", type=float, default=1.0, show_default=True)
@click.option("--lambda", "lam_text", default="1", show_default=True)
@click.option("--lambda-phase", type=float, default=0.0, show_default=True)
@click.option("--z", "z_text", default="0.5+0.5i", show_default=True)
@click.option("--n-max", type=int, default=24, show_default=True)
@click.option("-N", "--order", type=int, default=3, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def pythagoras(theta, lam_text, lambda_phase, z_text, n_max, order, out):
    """Check d_h^2 = d_l^2 + d_t^2 on the doubled plane."""
    cfg = _run_config(theta, lam_text, lambda_phase, n_max, order)
    try:
        z = parse_complex(z_text)
    except ValueError as exc:
        raise click.UsageError(str(exc))

    def compute():
        space = fock.FockSpace(n_max=cfg.n_max, theta=cfg.theta)
        t = doubledmod.build_doubled(space, lam=cfg.lam)
        d_l = doubledmod.longitudinal_distance(t, z, N=cfg.order)
        d_t = doubledmod.transverse_distance(t, z, N=cfg.order)
        d_h = doubledmod.hypotenuse_distance(t, z, N=cfg.order)
        return d_l, d_t, d_h

    d_l, d_t, d_h = _guarded(compute)
    residual = abs(d_h.value ** 2 - d_l.value ** 2 - d_t.value ** 2)
    tolerance = 1e-10 * d_h.value ** 2
    passes = residual <= tolerance
    payload = {
        "d_longitudinal": d_l.value,
        "d_transverse": d_t.value,
        "d_hypotenuse": d_h.value,
        "residual": residual,
        "tolerance": tolerance,
        "passes": passes,
        "n_max": cfg.n_max,
        "N": cfg.order,
        "warnings": list(d_l.warnings) + list(d_t.warnings) + list(d_h.warnings),
        "params": {"theta": cfg.theta, "lambda": cfg.lam, "z": z},
    }
    _emit(payload, out)
    click.echo(("PASS" if passes else "FAIL")
               + f" Pythagoras residual {residual:.3e} against {tolerance:.3e}")
    if not passes:
        sys.exit(1)


@main.command()
@click.option("--theta", type=float, default=2.0, show_default=True)
@click.option("--lambda", "lam_text", default="1", show_default=True)
@click.option("--lambda-phase", type=float, default=0.0, show_default=True)
@click.option("--n-max", type=int, default=24, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="spectrum.csv",
              show_default=True)
@click.option("--no-plot", is_flag=True, help="skip the rendered figure")
def spectrum(theta, lam_text, lambda_phase, n_max, out, no_plot):
    """Tabulate the doubled Dirac spectrum against the closed form."""
    cfg = _run_config(theta, lam_text, lambda_phase, n_max, 0)

    def compute():
        space = fock.FockSpace(n_max=cfg.n_max, theta=cfg.theta)
        t = doubledmod.build_doubled(space, lam=cfg.lam)
        return t, doubledmod.spectrum_rows(t)

    t, rows = _guarded(compute)
    path = pathlib.Path(out)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["m", "family", "predicted", "computed", "residual"])
        for r in rows:
            writer.writerow([r["m"], r["family"],
                             repr(r["predicted"]), repr(r["computed"]),
                             repr(r["residual"])])
    click.echo(f"wrote {path} ({len(rows)} levels)")
    if not no_plot:
        fig_path = path.with_suffix(".png")
        plotting.spectrum_figure(rows, str(fig_path), t.coupling, t.kappa)
        click.echo(f"wrote {fig_path}")
    worst = max(r["residual"] for r in rows)
    click.echo(f"max residual {worst:.3e}")


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise click.UsageError(
            f"grid spec {text!r} must be 'min:max:count'")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if count < 1:
        raise click.UsageError("grid count must be at least 1")
    return np.linspace(lo, hi, count)


def load_higgs_config(path: str, space: fock.FockSpace) -> higgsmod.HiggsConfig:
    """Read a field configuration from JSON ([re, im] pairs throughout)."""
    try:
        raw = json.loads(pathlib.Path(path).read_text())
        c_rows = raw["c_matrix"]
        c = np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in c_rows]
        )
        scalars = {
            key: complex(raw[key][0], raw[key][1])
            for key in ("alpha1", "alpha2", "beta1", "beta2")
        }
    except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"malformed field config {path!r}: {exc}")
    if c.shape != (space.dim, space.dim):
        raise click.UsageError(
            f"c_matrix is {c.shape[0]}x{c.shape[1]}, expected "
            f"{space.dim}x{space.dim} for n_max={space.n_max}")
    try:
        return higgsmod.HiggsConfig(c_element=c, **scalars)
    except ValueError as exc:
        raise click.UsageError(str(exc))


@main.command("higgs-sweep")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="field configuration JSON; default is the "
              "built-in projector example")
@click.option("--theta", type=float, default=1.4, show_default=True)
@click.option("--lambda", "lam_text", default="1.2", show_default=True)
@click.option("--lambda-phase", type=float, default=0.0, show_default=True)
@click.option("--n-max", type=int, default=40, show_default=True)
@click.option("--grid-re", default="-1:1:5", show_default=True,
              help="real grid 'min:max:count'")
@click.option("--grid-im", default="-1:1:5", show_default=True,
              help="imaginary grid 'min:max:count'")
@click.option("--out", type=click.Path(dir_okay=False), default="higgs_sweep.csv",
              show_default=True)
@click.option("--no-plot", is_flag=True, help="skip the rendered figure")
def higgs_sweep(config_path, theta, lam_text, lambda_phase, n_max, grid_re,
                grid_im, out, no_plot):
    """Sweep the fluctuated transverse distance over a grid of anchors."""
    cfg = _run_config(theta, lam_text, lambda_phase, n_max, 0)
    res = _parse_grid(grid_re)
    ims = _parse_grid(grid_im)
    space = fock.FockSpace(n_max=cfg.n_max, theta=cfg.theta)
    if config_path is None:
        field_cfg = verification.higgs_example_config(space)
    else:
        field_cfg = load_higgs_config(config_path, space)

    def compute():
        base = doubledmod.build_doubled(space, lam=cfg.lam)
        ft = higgsmod.fluctuate(base, field_cfg)
        grid = [gx + 1j * gy for gy in ims for gx in res]
        return higgsmod.higgs_field_sweep(ft, grid)

    rows = _guarded(compute)
    path = pathlib.Path(out)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["Re z", "Im z", "distance", "warning"])
        for r in rows:
            writer.writerow([repr(r["z"].real), repr(r["z"].imag),
                             repr(r["value"]), r["warning"]])
    flagged = sum(1 for r in rows if r["warning"])
    click.echo(f"wrote {path} ({len(rows)} points, {flagged} flagged)")
    if not no_plot:
        fig_path = path.with_suffix(".png")
        plotting.sweep_figure(rows, str(fig_path))
        click.echo(f"wrote {fig_path}")


@main.command()
@click.option("--negative-control", is_flag=True,
              help="also corrupt an expected value and confirm detection")
def verify(negative_control):
    """Run every closed-form check and report pass/fail per criterion."""
    failed = 0
    for num, fn in verification.CRITERIA:
        result = _guarded(fn)
        status = "PASS" if result.passed else "FAIL"
        click.echo(f"{status} criterion {num}: {result.name} ({result.details})")
        failed += 0 if result.passed else 1
    if negative_control:
        control = _guarded(verification.negative_control)
        status = "PASS" if control.passed else "FAIL"
        click.echo(f"{status} {control.name}: {control.details}")
        failed += 0 if control.passed else 1
    if failed:
        click.echo(f"{failed} check(s) failed")
        sys.exit(1)
    click.echo("all checks passed")


@main.command()
@click.argument("kind", type=click.Choice(_KINDS))
@click.option("--theta", type=float, default=1.0, show_default=True)
@click.option("--lambda", "lam_text", default="2", show_default=True)
@click.option("--lambda-phase", type=float, default=0.0, show_default=True)
@click.option("--z", "z_text", default="0.5", show_default=True)
@click.option("--n-max", type=int, default=16, show_default=True)
@click.option("--k", type=int, default=4, show_default=True,
              help="plane probe truncation")
@click.option("--starts", type=int, default=16, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def oracle(kind, theta, lam_text, lambda_phase, z_text, n_max, k, starts, seed, out):
    """Optimize the distance functional directly and compare to closed form."""
    cfg = _run_config(theta, lam_text, lambda_phase, n_max, 0)
    try:
        z = parse_complex(z_text)
    except ValueError as exc:
        raise click.UsageError(str(exc))

    def compute():
        t, rho1, rho2, probes, analytic = verification.oracle_case(
            kind, theta=cfg.theta, lam=cfg.lam, z=z, n_max=cfg.n_max, k=k
        )
        problem = optimizer.BallProblem(
            triple=t, rho1=rho1, rho2=rho2, basis=probes, seed=seed, starts=starts
        )
        return optimizer.supremum_lower_bound(problem), analytic

    report, analytic = _guarded(compute)
    payload = {
        "value": report.value,
        "ball_norm": report.ball_norm,
        "method": report.method,
        "n_max": cfg.n_max,
        "N": report.projector_rank,
        "warnings": list(report.warnings),
        "analytic": analytic,
        "ratio": report.value / analytic,
        "params": {
            "kind": kind, "theta": cfg.theta, "lambda": cfg.lam, "z": z,
            "k": k, "starts": starts, "seed": seed,
        },
    }
    _emit(payload, out)
    click.echo(f"recovered {100 * report.value / analytic:.2f}% of the analytic value")


if __name__ == "__main__":
    main()
