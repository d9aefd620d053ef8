"""Command-line front end.

Subcommands:

  taudelta    reduced-dynamics time series (closed form and/or integrator)
  state       state-vector evolution (fixed point or general background)
  trajectory  closed-orbit expectation trajectory with ellipse fit
  verify      run the invariant registry, exit nonzero on any failure
  figures     preset alias of `taudelta` (N^2 = 25, c = 4, mu = -b/2)

Flags: --config <path>, --out <dir>, --seed <u64>, --tol <float>, --jobs <n>.
Output directory falls back to $NLQM_OUT_DIR, then ./out.  Identical
config + seed produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import density as dn
from . import statevec_general as svg
from . import statevec_simple as sv
from . import taudelta as td
from . import verify as verify_mod
from .errors import ParameterError
from .output import write_csv, write_json, write_svg_lines, write_svg_orbit
from .params import ModelParams, derive, params_from_json

FIGURE_PRESET = {
    "params": {"a": 0.0, "b": 1.0, "mu": -0.5, "lambda": 0.0,
               "alpha1": 0.0, "alpha2": 0.0, "beta1": 0.0, "beta2": 0.0, "N": 5.0},
    "c": 4.0,
    "s_min": -2.0,
    "s_max": 2.0,
    "n_samples": 401,
    "substep": 1e-4,
    "solver": "both",
}


def _check_keys(config: dict, allowed: set, context: str) -> None:
    unknown = sorted(set(config) - allowed)
    if unknown:
        raise ParameterError(f"unknown {context} config keys: {unknown}")


def _load_config(path: str | None, default: dict | None = None) -> dict:
    if path is None:
        if default is not None:
            return json.loads(json.dumps(default))
        raise ParameterError("this command requires --config (no default preset)")
    return json.loads(Path(path).read_text())


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("NLQM_OUT_DIR") or "out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# taudelta / figures
# ---------------------------------------------------------------------------

_TAUDELTA_KEYS = {"params", "c", "s_min", "s_max", "n_samples", "substep", "solver", "label", "sweep"}


def _run_taudelta_entry(config: dict, out: Path) -> dict:
    _check_keys(config, _TAUDELTA_KEYS, "taudelta")
    params = params_from_json(config.get("params", FIGURE_PRESET["params"]))
    der = derive(params)
    c = float(config.get("c", 4.0))
    s_min = float(config.get("s_min", -2.0))
    s_max = float(config.get("s_max", 2.0))
    n_samples = int(config.get("n_samples", 401))
    substep = float(config.get("substep", 1e-3))
    solver = config.get("solver", "both" if abs(der.p + 1.0) < 1e-12 else "integrate")
    if solver not in ("closed", "integrate", "both"):
        raise ParameterError(f"unknown solver {solver!r}")
    p_is_neg1 = abs(der.p + 1.0) < 1e-12
    if solver in ("closed", "both") and not p_is_neg1:
        raise ParameterError(
            f"closed-form solver requires p = -1 (mu = -b/2); these parameters give p = {der.p:.6g}"
        )
    pot = td.PotentialSpec(c=c, p=der.p, n_norm=params.n_norm)
    s = np.linspace(s_min, s_max, n_samples)

    columns: dict = {"s": s, "t": der.t_of_s(s)}
    summary: dict = {"p": der.p, "c": c, "N_squared": params.n_norm**2}
    closed = numeric = None
    if solver in ("closed", "both"):
        closed = td.closed_symmetric(params.n_norm, c, s)
        columns.update(
            kappa_closed=closed.kappa, tau_closed=closed.tau, delta_closed=closed.delta,
            h_closed=closed.energy,
        )
        summary["h_drift_closed"] = float(np.max(np.abs(closed.energy - params.n_norm**2)))
    if solver in ("integrate", "both"):
        if closed is not None:
            init = closed.state(0)
        else:
            # start at the potential minimum with the on-shell momentum
            kappa0, v0 = td.potential_min(pot)
            if params.n_norm**2 <= v0:
                raise ParameterError("N^2 must exceed the potential minimum for libration")
            init = td.TauDeltaState(kappa0, math.sqrt(params.n_norm**2 - v0), s=s_min)
        numeric = td.integrate(init, pot, s, substep=substep)
        columns.update(
            kappa_num=numeric.kappa, tau_num=numeric.tau, delta_num=numeric.delta,
            h_num=numeric.energy, c_recovered=numeric.c_recovered,
        )
        summary["h_drift_numeric"] = numeric.energy_drift
    if solver == "both":
        gap = np.maximum(
            np.abs(closed.kappa - numeric.kappa),
            np.maximum(np.abs(closed.tau - numeric.tau), np.abs(closed.delta - numeric.delta)),
        )
        columns["gap"] = gap
        summary["max_gap"] = float(np.max(gap))

    write_csv(out / "taudelta.csv", columns)
    source = closed if closed is not None else numeric
    label = "closed form" if closed is not None else "integrated"
    for name, values in (("kappa", source.kappa), ("tau", source.tau), ("delta", source.delta)):
        series = {label: values}
        if solver == "both":
            series["integrated"] = {"kappa": numeric.kappa, "tau": numeric.tau,
                                    "delta": numeric.delta}[name]
        write_svg_lines(
            out / f"{name}.svg", s, series,
            title=f"{name}(s), N^2 = {params.n_norm**2:g}, c = {c:g}",
            x_label="s", y_label=name,
        )
    write_json(out / "summary.json", summary)
    return summary


def cmd_taudelta(args) -> int:
    config = _load_config(args.config, FIGURE_PRESET if args.command == "figures" else None)
    out = _out_dir(args)
    if "sweep" in config:
        entries = config["sweep"]
        _check_keys(config, {"sweep"}, "taudelta sweep")
        labeled = []
        for i, entry in enumerate(entries):
            label = entry.get("label", f"entry{i:03d}")
            sub = {k: v for k, v in entry.items() if k != "label"}
            labeled.append((label, sub, out / label))
        for _, _, directory in labeled:
            directory.mkdir(parents=True, exist_ok=True)
        if args.jobs and args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                futures = [
                    pool.submit(_run_taudelta_entry, sub, directory)
                    for _, sub, directory in labeled
                ]
                for future in futures:
                    future.result()
        else:
            for _, sub, directory in labeled:
                _run_taudelta_entry(sub, directory)
        return 0
    _run_taudelta_entry(config, out)
    return 0


# ---------------------------------------------------------------------------
# state
# ---------------------------------------------------------------------------

_STATE_KEYS = {"params", "energies", "mode", "t_max", "n_samples", "c", "t0", "theta0"}


def cmd_state(args) -> int:
    config = _load_config(args.config)
    _check_keys(config, _STATE_KEYS, "state")
    out = _out_dir(args)
    params = params_from_json(config["params"])
    basis = sv.EnergyBasis(tuple(config["energies"]))
    mode = config.get("mode", "fixed_point")
    n_samples = int(config.get("n_samples", 101))
    seed = args.seed if args.seed is not None else 0
    der = derive(params)

    if mode == "fixed_point":
        t_max = float(config.get("t_max", 10.0))
        fp = sv.fixed_point(params)
        mc = sv.modal_constants(params, fp)
        vp, vm = sv.build_mode_vectors(mc, basis, seed=seed)
        t_grid = np.linspace(0.0, t_max, n_samples)
        pairs = [sv.evolve_fixed_point(vp, vm, mc, params, basis, t) for t in t_grid]
        norm_sum = np.array([p.norm_psi + p.norm_phi - params.n_norm for p in pairs])
        tau_resid = np.array([p.norm_psi - p.norm_phi for p in pairs])
        gamma_resid = np.array(
            [abs(p.gamma - fp.gamma0 * cmath.exp(-1j * der.theta * p.t)) for p in pairs]
        )
        phases = np.unwrap([cmath.phase(p.gamma) for p in pairs])
        slope = np.polyfit(t_grid, phases, 1)[0] if len(t_grid) > 1 else 0.0
        report = {
            "mode": "fixed_point",
            "sigma": mc.sigma,
            "S_plus": mc.s_plus,
            "S_minus": mc.s_minus,
            "theta": der.theta,
            "gamma_phase_slope": float(slope),
            "gamma_phase_slope_residual": float(abs(slope + der.theta)),
            "max_norm_sum_residual": float(np.max(np.abs(norm_sum))),
            "max_tau_residual": float(np.max(np.abs(tau_resid))),
            "max_gamma_residual": float(np.max(gamma_resid)),
        }
    elif mode == "general":
        c = float(config.get("c", 4.0))
        t0 = float(config.get("t0", 0.0))
        theta0 = float(config.get("theta0", 0.0))
        path = svg.BackgroundPath.symmetric(params, c)
        period_t = td.symmetric_period(params.n_norm, c) / abs(der.s_slope)
        t_max = float(config.get("t_max", period_t))
        env = svg.integrate_envelope(path, params, (t0, t0 + t_max))
        psi1, psi2 = svg.solve_constraints(env, params, basis, path, t0, seed=seed, theta0=theta0)
        t_grid = np.linspace(t0, t0 + t_max, n_samples)
        pairs = [
            svg.reconstruct(env, psi1, psi2, params, basis, path, t, theta0) for t in t_grid
        ]
        rows = svg.constraint_residuals(env, psi1, psi2, params, basis, path, t_grid, theta0)
        norm_sum, tau_resid, gamma_resid = rows[:, 1], rows[:, 2], rows[:, 3]
        report = {
            "mode": "general",
            "background_period": period_t,
            "wronskian_c0": [env.wronskian_c0.real, env.wronskian_c0.imag],
            "wronskian_drift": env.wronskian_drift,
            "max_norm_sum_residual": float(np.max(np.abs(norm_sum))),
            "max_tau_residual": float(np.max(np.abs(tau_resid))),
            "max_gamma_residual": float(np.max(gamma_resid)),
        }
        tau_resid = rows[:, 2]
    else:
        raise ParameterError(f"unknown mode {mode!r}; use 'fixed_point' or 'general'")

    write_json(out / "states.json", [p.to_json_dict() for p in pairs])
    write_csv(
        out / "residuals.csv",
        {
            "t": t_grid,
            "norm_sum_resid": norm_sum,
            "tau_resid": tau_resid if mode == "general"
            else np.array([p.tau for p in pairs]),
            "gamma_resid": gamma_resid,
        },
    )
    write_json(out / "report.json", report)
    return 0


# ---------------------------------------------------------------------------
# trajectory
# ---------------------------------------------------------------------------

_TRAJ_KEYS = {"params", "energies", "position_model", "n_samples", "periods"}


def cmd_trajectory(args) -> int:
    config = _load_config(args.config)
    _check_keys(config, _TRAJ_KEYS, "trajectory")
    out = _out_dir(args)
    params = params_from_json(config["params"])
    seed = args.seed if args.seed is not None else 0
    basis = sv.EnergyBasis(tuple(config.get("energies", (0.0, 1.0, 2.0, 3.0))))
    fp = sv.fixed_point(params)
    mc = sv.modal_constants(params, fp)
    vp, vm = sv.build_mode_vectors(mc, basis, seed=seed)
    if "position_model" in config:
        pm_cfg = config["position_model"]
        _check_keys(pm_cfg, {"diag_plus", "diag_minus", "cross_re", "cross_im"}, "position_model")
        pm = dn.PositionModel(
            diag_plus=pm_cfg["diag_plus"],
            diag_minus=pm_cfg["diag_minus"],
            cross=np.asarray(pm_cfg["cross_re"], dtype=float)
            + 1j * np.asarray(pm_cfg["cross_im"], dtype=float),
        )
    else:
        rng = np.random.default_rng(seed)
        xs = [np.diag(rng.uniform(-1.0, 1.0, basis.dim)) for _ in range(3)]
        pm = dn.PositionModel.from_operators(xs, vp, vm)
    n_samples = int(config.get("n_samples", 256))
    periods = float(config.get("periods", 1.0))
    t_grid = np.linspace(0.0, periods * math.pi / mc.sigma, n_samples)
    samples = dn.trajectory_fixed_point(pm, mc, params, t_grid)
    fit = dn.ellipse_fit(samples)
    write_csv(
        out / "trajectory.csv",
        {"t": samples.t, "x1": samples.x[:, 0], "x2": samples.x[:, 1], "x3": samples.x[:, 2],
         "period": np.full_like(samples.t, math.pi / mc.sigma)},
    )
    fit_dict = fit.to_json_dict()
    fit_dict["sigma"] = mc.sigma
    if fit.degenerate:
        fit_dict["warning"] = "degenerate orbit: collinear axes, line-segment fit"
    write_json(out / "ellipse.json", fit_dict)
    rel = samples.x - fit.center[None, :]
    write_svg_orbit(
        out / "orbit.svg", rel @ fit.axis_major, rel @ fit.axis_minor,
        title=f"orbit, R1 = {fit.r1:.4g}, R2 = {fit.r2:.4g}",
    )
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    results = verify_mod.run_all(tol_override=args.tol)
    out = _out_dir(args)
    write_json(out / "verify.json", results)
    width = max(len(r["id"]) for r in results)
    for r in results:
        status = "PASS" if r["passed"] else "FAIL"
        print(f"{r['id']:<{width}}  {status}  value={r['value']:.3e}  tol={r['tol']:.1e}")
    failed = [r for r in results if not r["passed"]]
    print(f"{len(results) - len(failed)}/{len(results)} invariants passed")
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlqm",
        description="Two-state-vector nonlinear quantum dynamics toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, handler in (
        ("taudelta", cmd_taudelta),
        ("state", cmd_state),
        ("trajectory", cmd_trajectory),
        ("verify", cmd_verify),
        ("figures", cmd_taudelta),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config path")
        p.add_argument("--out", default=None, help="output directory (default $NLQM_OUT_DIR or ./out)")
        p.add_argument("--seed", type=int, default=None, help="seed for stochastic constructions")
        p.add_argument("--tol", type=float, default=None, help="tolerance override (verify)")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweep entries")
        p.set_defaults(handler=handler)
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
