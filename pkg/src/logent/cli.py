"""Command-line front end.

Subcommands: entropy, feasibility, maxent, scenario, and evolve with the
three engines fd, continuum, and wigner.  Numeric output is printed at 15
significant digits; files follow the per-engine CSV/JSON formats.  Exit
codes: 0 success, 1 inadmissible state, 2 usage or configuration error.

Engine parameters can come from flags or from a flat key = value config
file with one section per engine ([fd], [continuum], [wigner]); unknown
keys are rejected.  Flags override config values.
"""
from __future__ import annotations

import configparser
import json
import math

import click
import numpy as np

from . import densities, dynamics, maxent, vectors, wigner
from .errors import DegenerateConstraintError, DomainError, LogentError

CLI_CLASS_TOL = 1e-5  # hand-typed decimals carry ~1e-6 rounding; override with --tol


def _fmt(v: float) -> str:
    return f"{v:.15g}"


def _parse_vector(text: str) -> np.ndarray:
    try:
        entries = np.array([float(tok) for tok in text.split(",") if tok.strip() != ""])
    except ValueError as exc:
        raise click.UsageError(f"cannot parse vector {text!r}: {exc}")
    if entries.size < 2:
        raise click.UsageError("need at least two comma-separated entries")
    return entries


def _normalized_vector(entries: np.ndarray) -> vectors.SignedProbVector:
    total = entries.sum()
    if total == 0.0 or not np.isfinite(total):
        raise click.UsageError(f"entries sum to {total}, cannot normalize")
    if abs(total - 1.0) > vectors.SUM_TOL:
        entries = entries / total
    try:
        return vectors.SignedProbVector(entries)
    except LogentError as exc:
        raise click.UsageError(str(exc))


def _load_section(path: str, section: str, known: dict) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise click.UsageError(f"cannot read config file {path!r}")
    if not parser.has_section(section):
        raise click.UsageError(f"config file lacks a [{section}] section")
    out = {}
    for key, raw in parser.items(section):
        if key not in known:
            raise click.UsageError(f"unknown key {key!r} in [{section}]")
        try:
            out[key] = known[key](raw)
        except ValueError as exc:
            raise click.UsageError(f"bad value for {key!r}: {exc}")
    return out


@click.group()
def main():
    """Signed probabilities, quadratic entropy, and conserving dynamics."""


# ---------------------------------------------------------------------------
# entropy


@main.command()
@click.option("--p", "pstr", default=None, help="Comma-separated entries.")
@click.option(
    "--file", "path", type=click.Path(exists=True), default=None, help="JSON array file."
)
@click.option("--tol", default=CLI_CLASS_TOL, show_default=True, help="Classification tolerance.")
@click.option("--json", "as_json", is_flag=True, help="Emit a JSON report.")
@click.pass_context
def entropy(ctx, pstr, path, tol, as_json):
    """Entropy, information, classification, and feasibility radii."""
    if (pstr is None) == (path is None):
        raise click.UsageError("provide exactly one of --p or --file")
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                entries = np.asarray(json.load(fh), dtype=float)
        except (OSError, ValueError) as exc:
            raise click.UsageError(f"cannot read vector from {path!r}: {exc}")
    else:
        entries = _parse_vector(pstr)
    vec = _normalized_vector(entries)
    cls = vectors.classify(vec, tol=tol)
    radii = vectors.feasibility_radii(vec.n)
    report = {
        "n": vec.n,
        "entropy": vec.logical_entropy,
        "information": vec.information,
        "class": cls.value,
        "r_max": radii.r_max,
        "r_pos": radii.r_pos,
        "r_min": radii.r_min,
        "negatives_possible": radii.negatives_possible,
    }
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo(f"n            = {vec.n}")
        click.echo(f"S_L          = {_fmt(vec.logical_entropy)}")
        click.echo(f"I            = {_fmt(vec.information)}")
        click.echo(f"class        = {cls.value}")
        click.echo(
            f"radii        = (r_max {_fmt(radii.r_max)}, r_pos {_fmt(radii.r_pos)}, "
            f"r_min {_fmt(radii.r_min)})"
        )
    if cls is vectors.StateClass.INADMISSIBLE:
        ctx.exit(1)


# ---------------------------------------------------------------------------
# feasibility


@main.command()
@click.option("--n", required=True, type=int, help="Number of outcomes.")
@click.option("--json", "as_json", is_flag=True)
def feasibility(n, as_json):
    """Feasibility radii for n outcomes."""
    try:
        radii = vectors.feasibility_radii(n)
    except DomainError as exc:
        raise click.UsageError(str(exc))
    if as_json:
        click.echo(
            json.dumps(
                {
                    "n": radii.n,
                    "r_max": radii.r_max,
                    "r_pos": radii.r_pos,
                    "r_min": radii.r_min,
                    "negatives_possible": radii.negatives_possible,
                }
            )
        )
    else:
        click.echo(f"r_max = {_fmt(radii.r_max)}")
        click.echo(f"r_pos = {_fmt(radii.r_pos)}")
        click.echo(f"r_min = {_fmt(radii.r_min)}")
        click.echo(f"negatives_possible = {radii.negatives_possible}")


# ---------------------------------------------------------------------------
# maxent


@main.command("maxent")
@click.option("--x", "xstr", required=True, help="Comma-separated observable values.")
@click.option("--m", "target", type=float, default=None, help="Target mean.")
@click.option("--find-max", is_flag=True, help="Report the largest admissible mean.")
@click.option("--nonnegative", is_flag=True, help="Restrict to all-nonnegative solutions.")
@click.option("--negative-branch", is_flag=True, help="Report the lower bound instead.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def maxent_cmd(ctx, xstr, target, find_max, nonnegative, negative_branch, as_json):
    """Entropy maximization under a mean-value constraint."""
    x = _parse_vector(xstr)
    if (target is None) == (not find_max):
        raise click.UsageError("provide exactly one of --m or --find-max")
    try:
        constraint = maxent.ObservableConstraint(x, target_mean=target)
    except (DegenerateConstraintError, DomainError) as exc:
        raise click.UsageError(str(exc))
    if find_max:
        if nonnegative:
            bound = maxent.max_mean_nonnegative(constraint, negative_branch=negative_branch)
        else:
            bound = maxent.max_mean(constraint, negative_branch=negative_branch)
        sol = maxent.equilibrium(maxent.ObservableConstraint(x, target_mean=bound))
        if as_json:
            click.echo(
                json.dumps({"m_max": bound, "p": list(sol.p.entries), "information": sol.information})
            )
        else:
            click.echo(f"m_max = {_fmt(bound)}")
            click.echo(f"p     = ({', '.join(_fmt(v) for v in sol.p.entries)})")
            click.echo(f"I     = {_fmt(sol.information)}")
        return
    sol = maxent.equilibrium(constraint)
    report = {
        "p": list(sol.p.entries),
        "lambda": sol.lam,
        "mu": sol.mu,
        "information": sol.information,
        "admissible": sol.admissible,
    }
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo(f"p      = ({', '.join(_fmt(v) for v in sol.p.entries)})")
        click.echo(f"lambda = {_fmt(sol.lam)}")
        click.echo(f"mu     = {_fmt(sol.mu)}")
        click.echo(f"I      = {_fmt(sol.information)}")
        click.echo(f"admissible = {sol.admissible}")
    if not sol.admissible:
        ctx.exit(1)


# ---------------------------------------------------------------------------
# scenario


@main.command()
@click.argument("name", type=click.Choice(["marbles", "die"]))
@click.option("--json", "as_json", is_flag=True)
def scenario(name, as_json):
    """Worked two-draw scenarios with signed probabilities."""
    if name == "marbles":
        p = vectors.SignedProbVector(np.array([2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0]))
        q = vectors.SignedProbVector(np.array([-1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0]))
        prob_rr = vectors.pair_outcome_probability(q, 0, 0)
        prob_bb = vectors.pair_outcome_probability(p, 1, 1)
        prob_gg = vectors.pair_outcome_probability(p, 2, 2)
        not_rr = prob_bb + prob_gg
        report = {
            "p": list(p.entries),
            "q": list(q.entries),
            "p_dot_q": vectors.scalar_product(p, q),
            "prob_q_RR": prob_rr,
            "prob_p_notR_notR": not_rr,
            "consistent": abs(prob_rr - not_rr) < 1e-12,
        }
        if as_json:
            click.echo(json.dumps(report))
        else:
            click.echo(f"bag p = ({', '.join(_fmt(v) for v in p.entries)})  [R, B, G]")
            click.echo(f"bag q = ({', '.join(_fmt(v) for v in q.entries)})  [R, B, G]")
            click.echo(f"p . q = {_fmt(report['p_dot_q'])}  (anticorrelated bags)")
            click.echo(f"Prob_q(RR)     = {_fmt(prob_rr)}")
            click.echo(f"Prob_p(~R ~R)  = {_fmt(not_rr)}")
            click.echo(
                "the two ways of computing the same pair disagree: "
                f"{_fmt(prob_rr)} != {_fmt(not_rr)}"
            )
        return
    x = np.array([-1.0, 0.0, 1.0])
    classical_m = maxent.max_mean_nonnegative(maxent.ObservableConstraint(x))
    classical = maxent.equilibrium(maxent.ObservableConstraint(x, target_mean=classical_m))
    signed_m = maxent.max_mean(maxent.ObservableConstraint(x))
    signed = maxent.equilibrium(maxent.ObservableConstraint(x, target_mean=signed_m))
    report = {
        "classical_m_max": classical_m,
        "classical_p": list(classical.p.entries),
        "classical_information": classical.information,
        "signed_m_max": signed_m,
        "signed_p": list(signed.p.entries),
        "signed_information": signed.information,
    }
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo("three-faced die, unevenness = mean of X = (-1, 0, 1)")
        click.echo(
            f"classical bound: m = {_fmt(classical_m)}, "
            f"p = ({', '.join(_fmt(v) for v in classical.p.entries)}), "
            f"I = {_fmt(classical.information)}"
        )
        click.echo(
            f"signed bound:    m = {_fmt(signed_m)}, "
            f"p = ({', '.join(_fmt(v) for v in signed.p.entries)}), "
            f"I = {_fmt(signed.information)}"
        )


# ---------------------------------------------------------------------------
# evolve


@main.group()
def evolve():
    """Run one of the evolution engines and export its data."""


_FD_KEYS = {
    "generator": str,  # cyclic3 | random
    "n": int,
    "seed": int,
    "rate": float,  # 1/time
    "p0": str,  # comma-separated entries
    "t_end": float,  # time
    "dt": float,  # time
    "output": str,
}


@evolve.command("fd")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--generator", default=None, type=click.Choice(["cyclic3", "random"]))
@click.option("--n", default=None, type=int)
@click.option("--seed", default=None, type=int)
@click.option("--rate", default=None, type=float)
@click.option("--p0", default=None, help="Comma-separated initial state.")
@click.option("--t-end", default=None, type=float)
@click.option("--dt", default=None, type=float)
@click.option("--output", default=None, type=click.Path())
def evolve_fd(config_path, generator, n, seed, rate, p0, t_end, dt, output):
    """Finite-dimensional rotation run; writes the trajectory CSV."""
    cfg = _load_section(config_path, "fd", _FD_KEYS) if config_path else {}
    for key, val in (
        ("generator", generator),
        ("n", n),
        ("seed", seed),
        ("rate", rate),
        ("p0", p0),
        ("t_end", t_end),
        ("dt", dt),
        ("output", output),
    ):
        if val is not None:
            cfg[key] = val
    kind = cfg.get("generator", "cyclic3")
    try:
        if kind == "cyclic3":
            gen = dynamics.cyclic_generator3()
            if "rate" in cfg:
                gen = dynamics.GeneratorMatrix(gen.upper, rate=cfg["rate"])
        else:
            gen = dynamics.random_generator(
                cfg.get("n", 3), cfg.get("seed", 0), rate=cfg.get("rate", 1.0)
            )
        p0_vec = _normalized_vector(_parse_vector(cfg.get("p0", "1,0,0")))
        rec = dynamics.trajectory(p0_vec, gen, cfg.get("t_end", 10.0), cfg.get("dt", 0.1))
    except LogentError as exc:
        raise click.UsageError(str(exc))
    out = cfg.get("output", "fd_trajectory.csv")
    dynamics.write_trajectory_csv(rec, out)
    click.echo(f"samples        = {len(rec.times)}")
    click.echo(f"max |sum-1|    = {_fmt(float(np.max(rec.probability_drift)))}")
    click.echo(f"max |I-I(0)|   = {_fmt(float(np.max(rec.information_drift)))}")
    click.echo(f"trajectory written to {out}")


_CONTINUUM_KEYS = {
    "n": int,
    "length": float,  # z units
    "h": float,  # z units
    "sigma": float,  # z units; default saturating h/(2 sqrt(pi))
    "center": float,  # z units
    "omega_family": str,  # constant | linear | harmonic | quartic
    "coeff": float,  # 1/time (constant, linear per z, etc.)
    "a": float,  # z units
    "t_end": float,  # time
    "samples": int,
    "output_grid": str,
    "output_diag": str,
}


def _omega_from_config(family: str, coeff: float):
    builders = {
        "constant": densities.omega_constant,
        "linear": densities.omega_linear,
        "harmonic": densities.omega_harmonic,
        "quartic": densities.omega_quartic,
    }
    if family not in builders:
        raise click.UsageError(f"unknown omega family {family!r}")
    return builders[family](coeff)


def _potential_from_omega(family: str, coeff: float, h: float) -> wigner.PotentialSpec:
    # Omega = 2 pi V / h, so V carries a factor h / (2 pi) relative to Omega.
    scale = h / (2.0 * math.pi)
    if family == "constant":
        return wigner.PotentialSpec.constant(coeff * scale)
    if family == "linear":
        return wigner.PotentialSpec.linear(coeff * scale)
    if family == "harmonic":
        if coeff < 0.0:
            raise click.UsageError("cross-check needs a nonnegative harmonic coefficient")
        # V = coeff * scale * x^2 = (1/2) mass omega^2 x^2 with mass = 1
        return wigner.PotentialSpec.harmonic(math.sqrt(2.0 * coeff * scale), mass=1.0)
    if family == "quartic":
        return wigner.PotentialSpec.quartic(coeff * scale)
    raise click.UsageError(f"unknown omega family {family!r}")


@evolve.command("continuum")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--n", default=None, type=int)
@click.option("--length", default=None, type=float)
@click.option("--h", default=None, type=float)
@click.option("--sigma", default=None, type=float)
@click.option("--center", default=None, type=float)
@click.option("--omega-family", default=None, type=click.Choice(["constant", "linear", "harmonic", "quartic"]))
@click.option("--coeff", default=None, type=float)
@click.option("--a", "offset", default=None, type=float)
@click.option("--t-end", default=None, type=float)
@click.option("--samples", default=None, type=int)
@click.option("--output-grid", default=None, type=click.Path())
@click.option("--output-diag", default=None, type=click.Path())
@click.option("--cross-check", is_flag=True, help="Compare against the momentum-only quadrature path.")
def evolve_continuum(
    config_path, n, length, h, sigma, center, omega_family, coeff, offset, t_end,
    samples, output_grid, output_diag, cross_check,
):
    """Spectral line-density run; writes final grid and diagnostics."""
    cfg = _load_section(config_path, "continuum", _CONTINUUM_KEYS) if config_path else {}
    for key, val in (
        ("n", n),
        ("length", length),
        ("h", h),
        ("sigma", sigma),
        ("center", center),
        ("omega_family", omega_family),
        ("coeff", coeff),
        ("a", offset),
        ("t_end", t_end),
        ("samples", samples),
        ("output_grid", output_grid),
        ("output_diag", output_diag),
    ):
        if val is not None:
            cfg[key] = val
    n_pts = cfg.get("n", 1024)
    length_v = cfg.get("length", 8.0)
    h_v = cfg.get("h", 1.0)
    sigma_v = cfg.get("sigma", h_v / (2.0 * math.sqrt(math.pi)))
    family = cfg.get("omega_family", "harmonic")
    coeff_v = cfg.get("coeff", 1.0)
    a_v = cfg.get("a", 0.0)
    t_end_v = cfg.get("t_end", 1.0)
    n_samples = cfg.get("samples", 100)
    try:
        f0 = densities.gaussian_density(
            n_pts, length_v, h_v, sigma_v, center=cfg.get("center", 0.0)
        )
        kern = densities.build_kernel(_omega_from_config(family, coeff_v), a_v, f0)
    except LogentError as exc:
        raise click.UsageError(str(exc))
    spectrum0 = f0.dz * np.abs(np.fft.fft(f0.values))
    rows = []
    state = f0
    for k in range(1, n_samples + 1):
        t = t_end_v * k / n_samples
        state = densities.evolve_density(f0, kern, t)
        mode_drift = float(
            np.max(np.abs(state.dz * np.abs(np.fft.fft(state.values)) - spectrum0))
        )
        rows.append((t, state.total, state.information, mode_drift))
    grid_out = cfg.get("output_grid", "continuum_final.csv")
    diag_out = cfg.get("output_diag", "continuum_diag.csv")
    densities.write_density_csv(state, grid_out)
    with open(diag_out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,sum,I,max_mode_drift\n")
        for row in rows:
            fh.write(",".join(f"{v:.14e}" for v in row) + "\n")
    sums = np.array([r[1] for r in rows])
    infos = np.array([r[2] for r in rows])
    drifts = np.array([r[3] for r in rows])
    click.echo(f"samples            = {n_samples}")
    click.echo(f"max |sum-1|        = {_fmt(float(np.max(np.abs(sums - 1.0))))}")
    click.echo(f"max |I-I(0)|       = {_fmt(float(np.max(np.abs(infos - f0.information))))}")
    click.echo(f"max mode drift     = {_fmt(float(np.max(drifts)))}")
    click.echo(f"grid written to {grid_out}, diagnostics to {diag_out}")
    if cross_check:
        potential = _potential_from_omega(family, coeff_v, h_v)
        other = wigner.delta_localized_evolve(f0, potential, a_v, t_end_v)
        linf = float(np.max(np.abs(other.values - state.values)))
        click.echo(f"cross-check Linf   = {_fmt(linf)}")


_WIGNER_KEYS = {
    "potential": str,  # free | harmonic | quartic
    "omega": float,  # 1/time (harmonic)
    "beta": float,  # energy / x^4 (quartic)
    "nx": int,
    "npts": int,
    "lx": float,  # x units
    "lp": float,  # p units
    "h": float,  # action units
    "mass": float,
    "sigma_x": float,  # x units
    "x_center": float,
    "p_center": float,
    "t_end": float,  # time
    "dt": float,  # time
    "output_snapshot": str,
    "output_diag": str,
}


@evolve.command("wigner")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--potential", default=None, type=click.Choice(["free", "harmonic", "quartic"]))
@click.option("--omega", default=None, type=float)
@click.option("--beta", default=None, type=float)
@click.option("--nx", default=None, type=int)
@click.option("--npts", default=None, type=int)
@click.option("--lx", default=None, type=float)
@click.option("--lp", default=None, type=float)
@click.option("--h", default=None, type=float)
@click.option("--mass", default=None, type=float)
@click.option("--sigma-x", default=None, type=float)
@click.option("--x-center", default=None, type=float)
@click.option("--p-center", default=None, type=float)
@click.option("--t-end", default=None, type=float)
@click.option("--dt", default=None, type=float)
@click.option("--output-snapshot", default=None, type=click.Path())
@click.option("--output-diag", default=None, type=click.Path())
@click.option(
    "--rotation-check",
    is_flag=True,
    help="For harmonic runs, compare against the analytic rigid rotation.",
)
def evolve_wigner(
    config_path, potential, omega, beta, nx, npts, lx, lp, h, mass, sigma_x,
    x_center, p_center, t_end, dt, output_snapshot, output_diag, rotation_check,
):
    """Phase-space split-step run; writes snapshot and diagnostics."""
    cfg = _load_section(config_path, "wigner", _WIGNER_KEYS) if config_path else {}
    for key, val in (
        ("potential", potential),
        ("omega", omega),
        ("beta", beta),
        ("nx", nx),
        ("npts", npts),
        ("lx", lx),
        ("lp", lp),
        ("h", h),
        ("mass", mass),
        ("sigma_x", sigma_x),
        ("x_center", x_center),
        ("p_center", p_center),
        ("t_end", t_end),
        ("dt", dt),
        ("output_snapshot", output_snapshot),
        ("output_diag", output_diag),
    ):
        if val is not None:
            cfg[key] = val
    h_v = cfg.get("h", 1.0)
    mass_v = cfg.get("mass", 1.0)
    kind = cfg.get("potential", "harmonic")
    if kind == "free":
        pot = wigner.PotentialSpec.constant(0.0)
    elif kind == "harmonic":
        pot = wigner.PotentialSpec.harmonic(cfg.get("omega", 1.0), mass=mass_v)
    else:
        pot = wigner.PotentialSpec.quartic(cfg.get("beta", 0.1))
    try:
        w0 = wigner.gaussian_pure_wigner(
            cfg.get("nx", 128),
            cfg.get("npts", 128),
            cfg.get("lx", 8.0),
            cfg.get("lp", 8.0),
            cfg.get("sigma_x", h_v / (2.0 * math.sqrt(math.pi))),
            h=h_v,
            mass=mass_v,
            x_center=cfg.get("x_center", 0.0),
            p_center=cfg.get("p_center", 0.0),
        )
        rec, final = wigner.wigner_run(w0, pot, cfg.get("t_end", 1.0), cfg.get("dt"))
    except LogentError as exc:
        raise click.UsageError(str(exc))
    snap_out = cfg.get("output_snapshot", "wigner_final.csv")
    diag_out = cfg.get("output_diag", "wigner_diag.csv")
    wigner.write_wigner_csv(final, snap_out)
    wigner.write_diagnostics_csv(rec, diag_out)
    click.echo(f"steps            = {len(rec.times) - 1}")
    click.echo(
        f"max |sum-1|      = "
        f"{_fmt(float(np.max(np.abs(rec.total_probability - rec.total_probability[0]))))}"
    )
    click.echo(
        f"max |I-I(0)|     = "
        f"{_fmt(float(np.max(np.abs(rec.information - rec.information[0]))))}"
    )
    m3 = rec.moment3
    rel = abs(m3[-1] - m3[0]) / abs(m3[0]) if m3[0] != 0.0 else float("nan")
    click.echo(f"moment3 change   = {_fmt(rel)}")
    click.echo(f"min w            = {_fmt(float(np.min(rec.min_value)))}")
    click.echo(f"snapshot written to {snap_out}, diagnostics to {diag_out}")
    if rotation_check:
        if kind != "harmonic":
            raise click.UsageError("--rotation-check requires the harmonic potential")
        om = cfg.get("omega", 1.0)
        t = cfg.get("t_end", 1.0)
        sx = cfg.get("sigma_x", h_v / (2.0 * math.sqrt(math.pi)))
        sp = h_v / (4.0 * math.pi * sx)
        xc, pc = cfg.get("x_center", 0.0), cfg.get("p_center", 0.0)
        xg = final.x[:, None]
        pg = final.p[None, :]
        cos_t, sin_t = math.cos(om * t), math.sin(om * t)
        x_back = xg * cos_t - pg / (mass_v * om) * sin_t
        p_back = pg * cos_t + mass_v * om * xg * sin_t
        ref = np.exp(
            -0.5 * ((x_back - xc) / sx) ** 2 - 0.5 * ((p_back - pc) / sp) ** 2
        ) / (2.0 * math.pi * sx * sp)
        num = math.sqrt(float(np.sum((final.values - ref) ** 2)) * final.dx * final.dp)
        den = math.sqrt(float(np.sum(ref**2)) * final.dx * final.dp)
        click.echo(f"rotation-check L2 = {_fmt(num / den)}")


if __name__ == "__main__":
    main()
