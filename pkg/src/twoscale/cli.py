"""Config-driven command line for experiments and the acceptance suite.

Configurations are JSON with an explicit schema version; unknown keys are
rejected with the offending path named.  Every run writes the fully
resolved configuration (snapped carrier, actual eps) next to its outputs,
and all CSV payloads embed the configuration hash, so identical configs
reproduce identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import acceptance as acc
from .bridge import ScalingSpec, micro_macro_error
from .chain import (ChainState, default_dt, plane_wave_state, step_verlet,
                    total_energy, total_momentum)
from .expansion import (EpsLadder, extract_reduced_coefficients,
                        nls_carrier_field, twi_carrier_field,
                        verify_cancellation)
from .fields import MacroField, lowpass, random_band_limited
from .macro_pde import (PSystemState, solve_kdv, solve_nls, solve_psystem,
                        solve_threewave)
from .potentials import PotentialSpec, group_velocity, omega
from .reporting import (config_hash, save_line_figure, save_snapshot_figure,
                        write_csv, write_json)
from .resonance import Triad, best_separated_triad, build_zset, find_resonant_triads

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


# --- config loading and validation ------------------------------------------------

POTENTIAL_KEYS = {"kind": str, "alpha": float, "v2": float, "v3": float,
                  "v4": float}

FIELD_KEYS = {"type": str, "width": float, "center": float, "amplitude": float,
              "k": int, "keep": int, "phase": float, "amplitudes": list}

SCHEMAS = {
    "dispersion": {"potential": dict, "n_samples": int,
                   "require_stability": bool},
    "resonance": {"potential": dict, "n_samples": int, "tol": float,
                  "zset_radius": int, "zset_tol": float},
    "simulate-chain": {"potential": dict, "N": int, "dt": float, "steps": int,
                       "stride": int, "init": dict, "snapshots": int,
                       "require_stability": bool},
    "expand": {"reduction": str, "potential": dict, "L": float, "Ny": int,
               "Nphi": int, "eps0": float, "n_ladder": int, "c": float,
               "theta": float, "field": dict},
    "solve-pde": {"model": str, "potential": dict, "coefficients_from": str,
                  "theta": float, "c": float, "L": float, "Ny": int,
                  "tau_end": float, "n_out": int, "init": dict, "cfl": float},
    "bridge": {"reduction": str, "potential": dict, "L": float,
               "eps_ladder": list, "theta": float, "tau_end": float,
               "n_samples": int, "correction": bool, "n_macro": int,
               "keep_modes": int, "Ny": int, "init": dict},
    "acceptance": {"criteria": list},
}

DEFAULTS = {
    "dispersion": {"n_samples": 256, "require_stability": False},
    "resonance": {"n_samples": 40, "tol": 1e-10, "zset_radius": 5,
                  "zset_tol": 1e-8},
    "simulate-chain": {"dt": 0.0, "stride": 100, "snapshots": 0,
                       "require_stability": False},
    "expand": {"L": 40.0, "Ny": 512, "Nphi": 16, "eps0": 0.2, "n_ladder": 8,
               "c": float("nan"), "theta": float("nan")},
    "solve-pde": {"coefficients_from": "", "theta": float("nan"),
                  "c": float("nan"), "L": 40.0, "Ny": 512, "n_out": 16,
                  "cfl": 0.45},
    "bridge": {"L": 40.0, "theta": float("nan"), "n_samples": 5,
               "correction": False, "n_macro": 64, "keep_modes": 0, "Ny": 256},
    "acceptance": {"criteria": []},
}


def load_config(path: Path) -> dict:
    text = Path(path).read_text()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return cfg


def validate(cfg: dict, subcommand: str) -> dict:
    schema = SCHEMAS[subcommand]
    out = dict(DEFAULTS.get(subcommand, {}))
    version = cfg.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"config error at schema_version: expected {SCHEMA_VERSION}, "
            f"got {version!r}")
    for key, value in cfg.items():
        if key in ("schema_version", "seed"):
            continue
        if key not in schema:
            raise ConfigError(f"config error at {key}: unknown key for "
                              f"'{subcommand}'")
        want = schema[key]
        if want is float and isinstance(value, int):
            value = float(value)
        if not isinstance(value, want):
            raise ConfigError(f"config error at {key}: expected "
                              f"{want.__name__}, got {type(value).__name__}")
        if key == "potential":
            for pk in value:
                if pk not in POTENTIAL_KEYS:
                    raise ConfigError(f"config error at potential.{pk}: unknown key")
        if key in ("init", "field"):
            for fk in value:
                if fk not in FIELD_KEYS:
                    raise ConfigError(f"config error at {key}.{fk}: unknown key")
        out[key] = value
    out["seed"] = int(cfg.get("seed", 0))
    out["schema_version"] = SCHEMA_VERSION
    return out


def build_potential(block: dict) -> PotentialSpec:
    kind = block.get("kind", "fpu")
    v2 = float(block.get("v2", 1.0))
    v3 = float(block.get("v3", 0.0))
    v4 = float(block.get("v4", 0.0))
    if kind == "fpu":
        return PotentialSpec.fpu(v2, v3, v4)
    if kind == "kg":
        return PotentialSpec.kg(float(block.get("alpha", 1.0)), v2, v3, v4)
    raise ConfigError(f"config error at potential.kind: unknown kind {kind!r}")


def build_field_1d(block: dict, Ny: int, L: float, rng,
                   complex_valued: bool = False):
    kind = block.get("type", "gaussian")
    y = np.arange(Ny) * (L / Ny)
    amp = float(block.get("amplitude", 1.0))
    if kind == "gaussian":
        width = float(block.get("width", 4.0))
        center = float(block.get("center", L / 2.0))
        f = amp * np.exp(-((y - center) / width) ** 2)
        if not complex_valued:
            f = f - f.mean()
        f = lowpass(f.astype(complex) if complex_valued else f,
                    int(block.get("keep", Ny // 8)))
        if complex_valued and "phase" in block:
            f = f * np.exp(1j * float(block["phase"]))
        return f
    if kind == "sine":
        k = int(block.get("k", 1))
        f = amp * np.sin(2 * np.pi * k * y / L)
        return f.astype(complex) if complex_valued else f
    if kind == "constant":
        return np.full(Ny, amp, dtype=complex if complex_valued else float)
    if kind == "random":
        return random_band_limited(rng, Ny, L, kmax=int(block.get("keep", 8)),
                                   amplitude=amp, complex_valued=complex_valued)
    raise ConfigError(f"config error at init.type: unknown field type {kind!r}")


# --- subcommands ---------------------------------------------------------------------


def cmd_dispersion(cfg, out_dir: Path, meta: dict) -> dict:
    spec = build_potential(cfg["potential"])
    if cfg["require_stability"]:
        spec.require_stability()
    n = cfg["n_samples"]
    theta = (np.arange(n) + 0.5) * (2.0 * np.pi / n)
    w = omega(theta, spec)
    gv = group_velocity(theta, spec)
    write_csv(out_dir / "dispersion.csv", ["theta", "omega", "group_velocity"],
              zip(theta, w, gv), meta)
    save_line_figure(out_dir / "dispersion.png", theta,
                     {"omega": w, "group velocity": gv},
                     "theta", "frequency / speed", "dispersion relation")
    return {"rows": int(n), "omega_max": float(w.max())}


def cmd_resonance(cfg, out_dir: Path, meta: dict) -> dict:
    spec = build_potential(cfg["potential"])
    fam = find_resonant_triads(spec, n_samples=cfg["n_samples"], tol=cfg["tol"])
    rows = []
    for tri in fam.triads:
        rows.append([*tri.thetas, *tri.omegas, tri.residual])
    write_csv(out_dir / "resonance.csv",
              ["theta1", "theta2", "theta3", "omega1", "omega2", "omega3",
               "residual"], rows, meta)
    summary = {"status": fam.status, "count": len(fam.triads)}
    if fam.triads:
        tri = fam.triads[len(fam.triads) // 2]
        z = build_zset(tri.p[0], tri.p[1], spec, K=cfg["zset_radius"],
                       tol=cfg["zset_tol"])
        summary["zset"] = {
            "radius": z.radius, "members": sorted(z.members),
            "assumption_holds": z.assumption_holds,
            "degenerate": sorted(z.degenerate), "weak_ok": z.weak_ok,
            "note": "finite-radius check only; no global claim",
        }
        th1 = [t.thetas[0] for t in fam.triads]
        th2 = [t.thetas[1] for t in fam.triads]
        save_line_figure(out_dir / "resonance.png", th1, {"theta2": th2},
                         "theta1", "theta2", "resonant triad family")
    return summary


def cmd_simulate_chain(cfg, out_dir: Path, meta: dict) -> dict:
    spec = build_potential(cfg["potential"])
    if cfg["require_stability"]:
        spec.require_stability()
    rng = np.random.default_rng(cfg["seed"])
    N = cfg["N"]
    init = cfg.get("init", {"type": "plane_wave"})
    itype = init.get("type", "plane_wave")
    if itype == "plane_wave":
        st = plane_wave_state(spec, N, int(init.get("k", 1)),
                              float(init.get("amplitude", 0.1)))
    elif itype == "random":
        amp = float(init.get("amplitude", 0.1))
        st = ChainState(x=amp * rng.standard_normal(N),
                        v=amp * rng.standard_normal(N), t=0.0, spec=spec)
    else:
        raise ConfigError(f"config error at init.type: unknown type {itype!r}")
    dt = cfg["dt"] if cfg["dt"] > 0 else default_dt(spec)
    rows = [[0.0, total_energy(st), total_momentum(st)]]
    snaps = {0: st.copy()}

    def observe(k, s):
        rows.append([s.t, total_energy(s), total_momentum(s)])
        if cfg["snapshots"] and k % max(1, cfg["steps"] // cfg["snapshots"]) == 0:
            snaps[k] = s.copy()

    st = step_verlet(st, dt, cfg["steps"], observer=observe,
                     observe_stride=cfg["stride"])
    write_csv(out_dir / "timeseries.csv", ["t", "H", "P"], rows, meta)
    for k, s in snaps.items():
        write_csv(out_dir / f"snapshot_{k:08d}.csv", ["j", "x", "v"],
                  zip(range(s.N), s.x, s.v), meta)
    ts = [r[0] for r in rows]
    H0 = rows[0][1]
    save_line_figure(out_dir / "energy_drift.png", ts,
                     {"|H-H0|/H0": [abs(r[1] - H0) / max(abs(H0), 1e-300) for r in rows]},
                     "t", "relative drift", "energy conservation", logy=True)
    drift = max(abs(r[1] - H0) for r in rows) / max(abs(H0), 1e-300)
    return {"H0": H0, "relative_energy_drift": drift, "dt": dt}


def _expand_field(cfg, spec, rng):
    red = cfg["reduction"]
    L, Ny, Nphi = cfg["L"], cfg["Ny"], cfg["Nphi"]
    fblock = cfg.get("field", {})
    if red in ("we", "kdv"):
        X = build_field_1d(fblock, Ny, L, rng)
        Xt = random_band_limited(rng, Ny, L, kmax=8)
        return MacroField(X, L, companion=Xt)
    if red == "nls":
        A = build_field_1d(fblock, min(Ny, 128), L, rng, complex_valued=True)
        return nls_carrier_field(A, L, Nphi=Nphi)
    if red == "twi":
        A = [build_field_1d(fblock, min(Ny, 64), L, rng, complex_valued=True)
             * s for s in (1.0, 0.7, 0.4)]
        return twi_carrier_field(A, L, Nphi=Nphi)
    raise ConfigError(f"config error at reduction: unknown reduction {red!r}")


def cmd_expand(cfg, out_dir: Path, meta: dict) -> dict:
    spec = build_potential(cfg["potential"])
    rng = np.random.default_rng(cfg["seed"])
    red = cfg["reduction"]
    ladder = EpsLadder(cfg["eps0"], cfg["n_ladder"])
    X = _expand_field(cfg, spec, rng)
    frame = {}
    summary = {"reduction": red}
    if red == "kdv":
        c = cfg["c"] if np.isfinite(cfg["c"]) else float(np.sqrt(spec.v[2]))
        frame = {"c": c}
        summary["coefficients"] = _coeff_dict(
            extract_reduced_coefficients("kdv", spec, c=c))
    elif red == "nls":
        theta = cfg["theta"] if np.isfinite(cfg["theta"]) else np.pi / 2.0
        co = extract_reduced_coefficients("nls", spec, theta=theta)
        frame = {"c": co.c, "omega": co.omega, "theta": theta}
        summary["coefficients"] = _coeff_dict(co)
    elif red == "twi":
        tri = best_separated_triad(spec)
        co = extract_reduced_coefficients("twi", spec, triad=tri)
        frame = {"omega": tuple(co.omegas[:2]), "theta": tuple(co.thetas[:2])}
        summary["coefficients"] = _coeff_dict(co)
    rep = verify_cancellation(red, X, spec, ladder, **frame)
    from .expansion import ladder_reports
    reports = ladder_reports(red, X, spec, ladder, **frame)
    rows = []
    for name in ("K", "V", "I", "L", "E", "H"):
        for eps, r in zip(ladder.values, reports):
            rows.append([name, eps, r.value(name)])
    write_csv(out_dir / "functionals.csv", ["functional", "eps", "value"],
              rows, meta)
    summary["fits"] = {
        name: {"exponent": fit.exponent, "order": fit.order,
               "coefficient": fit.coefficient,
               "remainder_exponent": fit.remainder_exponent,
               "identically_zero": fit.zero}
        for name, fit in rep.fits.items()}
    summary["coefficient_fit"] = rep.coefficients
    summary["cancellation"] = rep.cancellation
    summary["legendre_max"] = rep.legendre_max
    summary["frame"] = {k: (list(v) if isinstance(v, tuple) else v)
                        for k, v in frame.items()}
    curves = {}
    for name in ("K", "V", "L", "H"):
        vals = np.abs([r.value(name) for r in reports])
        curves[name] = np.maximum(vals, 1e-300)
    save_line_figure(out_dir / "expansion.png", ladder.values, curves,
                     "eps", "|functional|", f"{red} expansion ladder",
                     logx=True, logy=True)
    return summary


def _coeff_dict(co) -> dict:
    out = {"reduction": co.reduction}
    for key in ("c", "dispersive", "nonlinear", "omega", "theta", "rho1",
                "rho2", "C1", "C2_factor", "C_quartic"):
        val = getattr(co, key)
        if isinstance(val, float) and np.isfinite(val):
            out[key] = val
    if co.omegas:
        out["omegas"] = list(co.omegas)
        out["thetas"] = list(co.thetas)
        out["transport"] = list(co.transport)
    return out


def _load_coefficients(cfg, spec):
    from .expansion import ReducedCoefficients
    if cfg["coefficients_from"]:
        payload = json.loads(Path(cfg["coefficients_from"]).read_text())
        block = payload.get("coefficients") \
            or payload.get("result", {}).get("coefficients") or payload
        kwargs = {k: v for k, v in block.items()
                  if k in ReducedCoefficients.__dataclass_fields__}
        for key in ("omegas", "thetas", "transport"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return ReducedCoefficients(**kwargs)
    model = cfg["model"]
    if model == "kdv":
        c = cfg["c"] if np.isfinite(cfg["c"]) else None
        return extract_reduced_coefficients("kdv", spec, c=c)
    if model == "nls":
        theta = cfg["theta"] if np.isfinite(cfg["theta"]) else np.pi / 2.0
        return extract_reduced_coefficients("nls", spec, theta=theta)
    if model == "twi":
        tri = best_separated_triad(spec)
        return extract_reduced_coefficients("twi", spec, triad=tri)
    return None


def cmd_solve_pde(cfg, out_dir: Path, meta: dict) -> dict:
    spec = build_potential(cfg["potential"])
    rng = np.random.default_rng(cfg["seed"])
    model = cfg["model"]
    L, Ny = cfg["L"], cfg["Ny"]
    init = cfg.get("init", {})
    y = np.arange(Ny) * (L / Ny)
    if model == "psystem":
        R0 = build_field_1d(init, Ny, L, rng) if init else 0.1 * np.sin(2 * np.pi * y / L)
        traj = solve_psystem(PSystemState(R=R0, W=np.zeros(Ny), L=L), spec,
                             tau_end=cfg["tau_end"], n_out=cfg["n_out"],
                             cfl=cfg["cfl"])
        inv_rows = zip(traj.taus, traj.energy, traj.mean_R)
        write_csv(out_dir / "invariants.csv", ["tau", "energy", "mean_R"],
                  inv_rows, meta)
        snap_rows = []
        for i, tau in enumerate(traj.taus):
            for m in range(Ny):
                snap_rows.append([tau, y[m], traj.R[i][m], traj.W[i][m]])
        write_csv(out_dir / "snapshots.csv", ["tau", "y", "R", "W"],
                  snap_rows, meta)
        save_snapshot_figure(out_dir / "solution.png", y,
                             {"R initial": traj.R[0], "R final": traj.R[-1]},
                             "y", "R", "p-system")
        return {"shock_time": traj.shock_time,
                "energy_onset": traj.energy_onset,
                "final_energy": float(traj.energy[-1])}
    coeffs = _load_coefficients(cfg, spec)
    if model == "kdv":
        X0 = build_field_1d(init, Ny, L, rng)
        traj = solve_kdv(X0, coeffs, L, tau_end=cfg["tau_end"], n_out=cfg["n_out"])
        write_csv(out_dir / "invariants.csv", ["tau", "mass", "momentum"],
                  zip(traj.taus, traj.mass, traj.momentum), meta)
        rows = [[tau, y[m], traj.U[i][m]]
                for i, tau in enumerate(traj.taus) for m in range(Ny)]
        write_csv(out_dir / "snapshots.csv", ["tau", "y", "U"], rows, meta)
        save_snapshot_figure(out_dir / "solution.png", y,
                             {"U initial": traj.U[0], "U final": traj.U[-1]},
                             "y", "U", "KdV strain")
        return {"mass_drift": float(np.max(np.abs(traj.mass - traj.mass[0]))),
                "momentum_drift": float(np.max(np.abs(traj.momentum - traj.momentum[0])))}
    if model == "nls":
        A0 = build_field_1d(init, Ny, L, rng, complex_valued=True)
        traj = solve_nls(A0, coeffs, L, tau_end=cfg["tau_end"], n_out=cfg["n_out"])
        write_csv(out_dir / "invariants.csv", ["tau", "mass", "hamiltonian"],
                  zip(traj.taus, traj.mass, traj.hamiltonian), meta)
        rows = [[tau, y[m], traj.A[i][m].real, traj.A[i][m].imag]
                for i, tau in enumerate(traj.taus) for m in range(Ny)]
        write_csv(out_dir / "snapshots.csv", ["tau", "y", "re_A", "im_A"],
                  rows, meta)
        save_snapshot_figure(out_dir / "solution.png", y,
                             {"|A| initial": np.abs(traj.A[0]),
                              "|A| final": np.abs(traj.A[-1])},
                             "y", "|A|", "nlS amplitude")
        return {"mass_drift": float(np.max(np.abs(traj.mass - traj.mass[0])))}
    if model == "twi":
        base = build_field_1d(init, Ny, L, rng, complex_valued=True)
        scalesA = init.get("amplitudes", [1.0, 0.7, 0.0])
        A0 = [s * base for s in scalesA]
        traj = solve_threewave(A0, coeffs, L, tau_end=cfg["tau_end"],
                               n_out=cfg["n_out"])
        write_csv(out_dir / "invariants.csv", ["tau", "invariant"],
                  zip(traj.taus, traj.invariant), meta)
        rows = []
        for i, tau in enumerate(traj.taus):
            for m in range(Ny):
                rows.append([tau, y[m]] + [np.abs(traj.A[i][n][m]) for n in range(3)])
        write_csv(out_dir / "snapshots.csv", ["tau", "y", "abs_A1", "abs_A2", "abs_A3"],
                  rows, meta)
        save_snapshot_figure(out_dir / "solution.png", y,
                             {f"|A{n + 1}| final": np.abs(traj.A[-1][n]) for n in range(3)},
                             "y", "|A_n|", "three-wave amplitudes")
        return {"invariant_drift": float(np.max(np.abs(traj.invariant - traj.invariant[0])))}
    raise ConfigError(f"config error at model: unknown model {model!r}")


def _bridge_single(cfg: dict, eps: float) -> dict:
    spec = build_potential(cfg["potential"])
    rng = np.random.default_rng(cfg["seed"])
    red = cfg["reduction"]
    L, Ny = cfg["L"], cfg["Ny"]
    init = cfg.get("init", {})
    keep = cfg["keep_modes"] or None
    if red == "kdv":
        sc = ScalingSpec.kdv(L, eps, spec, n_macro=cfg["n_macro"])
        co = extract_reduced_coefficients("kdv", spec, c=sc.c)
        macro0 = build_field_1d(init, Ny, L, rng)
    elif red == "nls":
        theta = cfg["theta"] if np.isfinite(cfg["theta"]) else np.pi / 2.0
        sc = ScalingSpec.nls(L, eps, spec, theta=theta, n_macro=cfg["n_macro"])
        co = extract_reduced_coefficients("nls", spec, theta=sc.theta)
        macro0 = build_field_1d(init, Ny, L, rng, complex_valued=True)
    elif red == "twi":
        tri = best_separated_triad(spec)
        sc = ScalingSpec.twi(L, eps, spec, tri, n_macro=cfg["n_macro"],
                             keep_modes=keep)
        tri_s = Triad.closed(sc.theta, sc.omega)
        co = extract_reduced_coefficients("twi", sc.spec, triad=tri_s)
        base = build_field_1d(init, Ny, L, rng, complex_valued=True)
        scales = init.get("amplitudes", [0.7, 0.7, 0.0])
        macro0 = [s * base for s in scales]
    elif red == "we":
        sc = ScalingSpec.we(L, eps, spec, n_macro=cfg["n_macro"])
        co = None
        R0 = build_field_1d(init, Ny, L, rng)
        macro0 = (R0, np.zeros_like(R0))
    else:
        raise ConfigError(f"config error at reduction: unknown reduction {red!r}")
    if keep:
        sc.keep_modes = keep
    rep = micro_macro_error(sc, macro0, co, tau_end=cfg["tau_end"],
                            n_samples=cfg["n_samples"],
                            correction=cfg["correction"])
    return {"eps_requested": eps, "eps": rep.eps_used,
            "taus": rep.tau_grid.tolist(), "errors": rep.error.tolist(),
            "aliasing": rep.aliasing, "refused_past_shock": rep.refused_past_shock,
            "shock_time": rep.shock_time,
            "resolved": {"N": sc.N, "theta": sc.theta if not isinstance(sc.theta, tuple) else list(sc.theta),
                         "c": sc.c, "keep_modes": sc.keep_modes}}


def cmd_bridge(cfg, out_dir: Path, meta: dict, jobs: int = 1) -> dict:
    ladder = sorted(cfg["eps_ladder"], reverse=True)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_bridge_worker, [(cfg, e) for e in ladder]))
    else:
        results = [_bridge_single(cfg, e) for e in ladder]
    results.sort(key=lambda r: -r["eps_requested"])
    finals = []
    for res in results:
        tag = f"{res['eps_requested']:g}".replace(".", "p")
        write_csv(out_dir / f"error_eps{tag}.csv", ["tau", "error"],
                  zip(res["taus"], res["errors"]), meta)
        finals.append(res["errors"][-1] if res["errors"] else float("nan"))
    ratios = [finals[i + 1] / finals[i] if finals[i] > 0 else float("nan")
              for i in range(len(finals) - 1)]
    monotone = all(a > b for a, b in zip(finals[:-1], finals[1:]))
    save_line_figure(out_dir / "bridge_errors.png",
                     results[0]["taus"],
                     {f"eps={r['eps_requested']:g}": r["errors"] for r in results
                      if len(r["errors"]) == len(results[0]["taus"])},
                     "tau", "normalized error", f"{cfg['reduction']} micro-macro",
                     logy=True)
    return {"final_errors": finals, "ratios": ratios, "monotone": monotone,
            "runs": results}


def _bridge_worker(args):
    cfg, eps = args
    return _bridge_single(cfg, eps)


def cmd_acceptance(cfg, out_dir: Path, meta: dict) -> dict:
    ids = cfg["criteria"] or None
    results = acc.run_acceptance(ids=[int(i) for i in ids] if ids else None)
    payload = {
        "criteria": [
            {"id": r.cid, "name": r.name, "passed": r.passed,
             "details": r.details, "seconds": r.seconds}
            for r in results],
        "all_passed": all(r.passed for r in results),
    }
    return payload


COMMANDS = {
    "dispersion": cmd_dispersion,
    "resonance": cmd_resonance,
    "simulate-chain": cmd_simulate_chain,
    "expand": cmd_expand,
    "solve-pde": cmd_solve_pde,
    "bridge": cmd_bridge,
    "acceptance": cmd_acceptance,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="twoscale",
        description="atomic chains, transformed functionals, and reduced models")
    parser.add_argument("subcommand", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON configuration")
    parser.add_argument("--out-dir", default="out", help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the configuration seed")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel ladder workers (bridge only)")
    args = parser.parse_args(argv)

    try:
        cfg = validate(load_config(Path(args.config)), args.subcommand)
    except (ConfigError, FileNotFoundError) as e:
        print(str(e), file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg["seed"] = args.seed

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    chash = config_hash(cfg)
    meta = {"config_hash": chash, "schema_version": SCHEMA_VERSION,
            "subcommand": args.subcommand}

    t0 = time.time()
    try:
        if args.subcommand == "bridge":
            summary = cmd_bridge(cfg, out_dir, meta, jobs=args.jobs)
        else:
            summary = COMMANDS[args.subcommand](cfg, out_dir, meta)
    except ConfigError as e:
        print(str(e), file=sys.stderr)
        return 2
    except Exception as e:
        print(f"numerical failure in {args.subcommand}: "
              f"{type(e).__name__}: {e}", file=sys.stderr)
        return 3

    write_json(out_dir / "resolved_config.json", cfg)
    write_json(out_dir / "summary.json",
               {"config_hash": chash, "subcommand": args.subcommand,
                "wall_seconds": time.time() - t0, "result": summary})
    if args.subcommand == "acceptance" and not summary.get("all_passed", True):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
