"""Command-line front end.

    twofluid speeds <state-file>
    twofluid classify <state-file>
    twofluid hugoniot <state-file> --compression R | --sweep a:b:n
    twofluid cvs-map <config-file>
    twofluid check-symmetry <state-file> [--lambda L] [--samples N]
    twofluid simulate <config-file>

Reports are deterministic JSON on stdout (or at --out); sweeps and time
series are RFC 4180 CSV. Exit codes: 0 success, 2 invalid input, 3 the
two-sided data is not a weak solution, 4 Hugoniot solver failure, 5 a
symmetrizer invariant failed, 6 CFL violation. TWOFLUID_SEED overrides the
random seed used for sampling.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys

import numpy as np

from . import __version__, admissibility, jumps, linear_energy, symmetrizer, waves
from .eos import ConvergenceError, EosParams, InadmissibleStateError, State
from .linear_energy import BackgroundState, CflViolationError, EntropyLayerProblem
from .stateio import (
    LoadedStateFile,
    StateFileError,
    csv_text,
    dumps_report,
    load_json,
    load_state_file,
    parse_eos,
    parse_state,
    _get_number,
)
from .waves import FrontSlopes

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_WEAK = 3
EXIT_SOLVER = 4
EXIT_INVARIANT = 5
EXIT_CFL = 6


def _seed(default: int = 0) -> int:
    env = os.environ.get("TWOFLUID_SEED")
    if env is None:
        return default
    try:
        return int(env)
    except ValueError as exc:
        raise StateFileError(f"TWOFLUID_SEED: expected an integer, got {env!r}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(command: str, digest: str, results: dict, warnings: list[str]) -> dict:
    return {
        "command": command,
        "input_digest": digest,
        "version": __version__,
        "results": results,
        "warnings": sorted(warnings),
    }


def _speeds_results(state: State, front: FrontSlopes, params: EosParams):
    ws = waves.wave_speeds(state, front, params)
    closed = waves.eigenvalues_closed_form(state, front, params)
    numeric = waves.eigenvalues_numeric(state, front, params)
    scale = max(float(np.max(np.abs(numeric.lambdas))), 1e-300)
    discrepancy = float(np.max(np.abs(closed.lambdas - numeric.lambdas))) / scale

    warnings = []
    H_mag = float(np.linalg.norm(state.H))
    if H_mag > 0.0 and abs(ws.c_a) <= 1e-12 * max(ws.c_A, 1.0):
        warnings.append("normal magnetic field vanishes: c_s = c_a = 0 degeneracy")
    mult = closed.multiplicities()
    if any(count > 2 for _, count in mult):
        warnings.append("eigenvalue multiplicity exceeds 2 (degenerate spectrum)")
    if params.nonstrict_convexity:
        warnings.append("gamma = 1: reduced pressure law is not strictly convex")
    results = {
        "wave_speeds": {"c": ws.c, "c_a": ws.c_a, "c_A": ws.c_A, "c_s": ws.c_s, "c_f": ws.c_f},
        "u_N": closed.u_N,
        "norm_N": front.norm_N,
        "spectrum_closed_form": list(closed.lambdas),
        "spectrum_numeric": list(numeric.lambdas),
        "max_discrepancy": discrepancy,
        "multiplicities": [[v, c] for v, c in mult],
    }
    return results, warnings


def cmd_speeds(args: argparse.Namespace) -> int:
    loaded = load_state_file(args.file, sides="one")
    results, warnings = _speeds_results(loaded.state, loaded.front, loaded.params)
    _emit(dumps_report(_report("speeds", loaded.digest, results, warnings)), args.out)
    return EXIT_OK


def _lax_to_dict(report: admissibility.LaxReport) -> dict:
    return {
        "k": report.k,
        "is_lax": report.is_lax,
        "family": report.family,
        "margins": list(report.margins) if report.margins else None,
        "flow_sign": report.flow_sign,
    }


def _cvs_to_dict(report: admissibility.CvsStabilityReport) -> dict:
    return {
        "G": report.G,
        "psi_plus": report.psi_plus,
        "psi_minus": report.psi_minus,
        "beta_plus": report.beta_plus,
        "beta_minus": report.beta_minus,
        "collinear": report.collinear,
        "degenerate": report.degenerate,
    }


def cmd_classify(args: argparse.Namespace) -> int:
    loaded = load_state_file(args.file, sides="two")
    data = jumps.DiscontinuityData(
        plus=loaded.plus, minus=loaded.minus, front=loaded.front, params=loaded.params
    )
    cls = jumps.classify(data, loaded.tolerances)
    diag = cls.diagnostics
    warnings = list(cls.warnings)
    results = {
        "kind": cls.kind.value,
        "residual": list(diag["residual"]),
        "residual_norm": diag["residual_norm"],
        "j": diag["j_plus"],
        "j_minus": diag["j_minus"],
        "jump_R": diag["jump_R"],
        "H_N": diag["H_N"],
        "jump_S": diag["jump_S"],
    }

    kind = cls.kind
    if kind in (
        jumps.DiscontinuityType.FAST_LAX_SHOCK,
        jumps.DiscontinuityType.SLOW_LAX_SHOCK,
        jumps.DiscontinuityType.NON_LAX_SHOCK,
    ):
        results["lax"] = _lax_to_dict(diag["lax"])
        results["fast_check"] = list(admissibility.fast_shock_check(data).margins)
        results["slow_check"] = list(admissibility.slow_shock_check(data).margins)
    elif kind is jumps.DiscontinuityType.CURRENT_VORTEX_SHEET:
        report = admissibility.cvs_stability(data)
        results["cvs_stability"] = _cvs_to_dict(report)
        if report.collinear:
            warnings.append("tangential fields collinear: stability condition inapplicable")
        if report.degenerate:
            warnings.append("tangential velocity jump vanishes: lower-bound margin reported")
        if not report.collinear and report.G <= 0.0:
            warnings.append("stability condition inconclusive (G <= 0)")
    elif kind is jumps.DiscontinuityType.CONTACT_DISCONTINUITY:
        passed, jump_value = admissibility.contact_rp_check(data)
        results["contact_rp"] = {"passed": passed, "jump": jump_value}
        extras = loaded.extras
        if "dPdN_plus" in extras and "dPdN_minus" in extras:
            dp = _get_number(extras, "dPdN_plus", "")
            dm = _get_number(extras, "dPdN_minus", "")
            results["rayleigh_taylor"] = {
                "passed": admissibility.rayleigh_taylor_check(dp, dm),
                "jump": dp - dm,
            }
        else:
            warnings.append(
                "normal pressure derivatives not supplied; Rayleigh-Taylor check skipped"
            )
    elif kind is jumps.DiscontinuityType.ALFVEN_DISCONTINUITY:
        results["alfven_sign"] = diag["alfven_sign"]
        results["alfven_flux_mismatch"] = diag["alfven_flux_mismatch"]
        results["alfven_checks"] = diag["alfven_checks"]

    _emit(dumps_report(_report("classify", loaded.digest, results, warnings)), args.out)
    return EXIT_NOT_WEAK if kind is jumps.DiscontinuityType.NOT_A_WEAK_SOLUTION else EXIT_OK


def _hugoniot_row(task: tuple) -> dict:
    upstream, params, r, family = task
    row: dict = {"r": r}
    try:
        down, sigma = jumps.solve_downstream(upstream, FrontSlopes(), r, params, family=family)
    except ConvergenceError as exc:
        row.update({"converged": False, "error": str(exc)})
        return row
    data = jumps.DiscontinuityData(
        plus=down, minus=upstream, front=FrontSlopes(phi_t=sigma), params=params
    )
    res = jumps.rh_residual(data)
    norm = float(np.max(np.abs(res) / jumps.residual_scales(data)))
    lax = admissibility.lax_check(data)
    row.update(
        {
            "converged": True,
            "sigma": sigma,
            "n": down.n,
            "rho": down.rho,
            "u1": down.u[0], "u2": down.u[1], "u3": down.u[2],
            "H1": down.H[0], "H2": down.H[1], "H3": down.H[2],
            "j": jumps.traces(down, FrontSlopes(phi_t=sigma), params).j,
            "residual_norm": norm,
            "lax_k": lax.k if lax.k is not None else -1,
            "is_lax": lax.is_lax,
            "family": lax.family,
            "margin_minus_lo": lax.margins[0],
            "margin_minus_hi": lax.margins[1],
            "margin_plus_lo": lax.margins[2],
            "margin_plus_hi": lax.margins[3],
        }
    )
    return row


_HUGONIOT_COLUMNS = [
    "r", "converged", "sigma", "n", "rho", "u1", "u2", "u3", "H1", "H2", "H3",
    "j", "residual_norm", "lax_k", "is_lax", "family",
    "margin_minus_lo", "margin_minus_hi", "margin_plus_lo", "margin_plus_hi",
]


def _parse_sweep(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise StateFileError(f"--sweep expects a:b:n, got {spec!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise StateFileError(f"--sweep expects numbers a:b:n, got {spec!r}") from exc
    if n < 1:
        raise StateFileError("--sweep needs at least one point")
    return np.linspace(a, b, n)


def _run_pool(worker, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


def cmd_hugoniot(args: argparse.Namespace) -> int:
    loaded = load_state_file(args.file, sides="one")
    if not loaded.front.is_planar:
        raise StateFileError("front: hugoniot solving requires a planar front")
    if (args.compression is None) == (args.sweep is None):
        raise StateFileError("provide exactly one of --compression or --sweep")

    if args.compression is not None:
        if args.compression <= 1.0:
            sys.stderr.write("compression must exceed 1\n")
            return EXIT_SOLVER
        try:
            row = _hugoniot_row((loaded.state, loaded.params, args.compression, args.family))
        except InadmissibleStateError as exc:
            raise StateFileError(f"state: {exc}") from exc
        if not row["converged"]:
            sys.stderr.write(row["error"] + "\n")
            return EXIT_SOLVER
        report = _report("hugoniot", loaded.digest, row, [])
        _emit(dumps_report(report), args.out)
        return EXIT_OK

    ratios = _parse_sweep(args.sweep)
    if np.any(ratios <= 1.0):
        sys.stderr.write("compression must exceed 1 at every sweep point\n")
        return EXIT_SOLVER
    tasks = [(loaded.state, loaded.params, float(r), args.family) for r in ratios]
    rows = _run_pool(_hugoniot_row, tasks, args.jobs)
    if args.format == "json":
        report = _report("hugoniot", loaded.digest, {"rows": rows}, [])
        _emit(dumps_report(report), args.out)
    else:
        table = [[row.get(col, "") for col in _HUGONIOT_COLUMNS] for row in rows]
        _emit(csv_text(_HUGONIOT_COLUMNS, table), args.out)
    return EXIT_OK


def _parse_axis(doc: dict, key: str, path: str) -> list[float]:
    if key not in doc:
        raise StateFileError(f"{key}: missing required field")
    value = doc[key]
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [float(value)]
    if isinstance(value, list):
        out = []
        for i, item in enumerate(value):
            if isinstance(item, bool) or not isinstance(item, (int, float)):
                raise StateFileError(f"{key}[{i}]: expected a number")
            out.append(float(item))
        if not out:
            raise StateFileError(f"{key}: empty grid axis")
        return out
    if isinstance(value, dict):
        start = _get_number(value, "start", key)
        stop = _get_number(value, "stop", key)
        count = value.get("count")
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise StateFileError(f"{key}.count: expected a positive integer")
        return [float(x) for x in np.linspace(start, stop, count)]
    raise StateFileError(f"{key}: expected a number, list, or start/stop/count object")


_CVS_COLUMNS = [
    "u_jump", "theta_H", "u_angle", "c_plus", "cA_plus", "c_minus", "cA_minus",
    "beta_plus", "beta_minus", "psi_plus", "psi_minus", "G", "collinear", "degenerate",
]


def cmd_cvs_map(args: argparse.Namespace) -> int:
    doc, digest = load_json(args.file)
    u_jumps = _parse_axis(doc, "u_jump", "u_jump")
    thetas = _parse_axis(doc, "theta_H", "theta_H")
    u_angles = _parse_axis(doc, "u_angle", "u_angle") if "u_angle" in doc else [0.0]
    speeds = {key: _parse_axis(doc, key, key) for key in ("c_plus", "cA_plus", "c_minus", "cA_minus")}
    for key, vals in speeds.items():
        if any(v < 0.0 for v in vals):
            raise StateFileError(f"{key}: speeds must be >= 0")

    rows = []
    for cp in speeds["c_plus"]:
        for cap in speeds["cA_plus"]:
            for cm in speeds["c_minus"]:
                for cam in speeds["cA_minus"]:
                    beta_p = admissibility._beta(cp, cap)
                    beta_m = admissibility._beta(cm, cam)
                    for v in u_jumps:
                        for th in thetas:
                            for ua in u_angles:
                                rep = admissibility.cvs_stability_geometry(
                                    du=v * np.array([np.cos(ua), np.sin(ua)]),
                                    H_plus=np.array([np.cos(th), np.sin(th)]),
                                    H_minus=np.array([1.0, 0.0]),
                                    beta_plus=beta_p,
                                    beta_minus=beta_m,
                                )
                                rows.append([
                                    v, th, ua, cp, cap, cm, cam,
                                    rep.beta_plus, rep.beta_minus,
                                    rep.psi_plus, rep.psi_minus, rep.G,
                                    rep.collinear, rep.degenerate,
                                ])
    _emit(csv_text(_CVS_COLUMNS, rows), args.out)
    return EXIT_OK


def cmd_check_symmetry(args: argparse.Namespace) -> int:
    loaded = load_state_file(args.file, sides="one")
    state, params = loaded.state, loaded.params
    base_bound = symmetrizer.lambda_bound(state, params)
    lam = args.lam if args.lam is not None else loaded.lam
    if lam is None:
        lam = 0.5 * base_bound

    rng = np.random.default_rng(_seed())
    states = [state]
    for _ in range(max(args.samples, 0)):
        jitter = rng.lognormal(mean=0.0, sigma=0.3, size=2)
        states.append(
            State(
                n=state.n * jitter[0],
                rho=state.rho * jitter[1],
                u=state.u + rng.normal(scale=0.5, size=3),
                H=state.H + rng.normal(scale=0.5, size=3),
            )
        )

    failures: list[dict] = []
    max_asym_A = 0.0
    max_asym_B = 0.0
    max_disc = 0.0
    for idx, st in enumerate(states):
        for axis in (1, 2, 3):
            asym = symmetrizer.max_asymmetry(symmetrizer.assemble_Aj(st, params, axis))
            max_asym_A = max(max_asym_A, asym)
            if asym != 0.0:
                failures.append({"check": f"A{axis}_symmetry", "state": idx, "value": asym})
        if not symmetrizer.is_positive_definite(symmetrizer.assemble_A0(st, params)):
            failures.append({"check": "A0_definite", "state": idx, "value": 0.0})

        bound = symmetrizer.lambda_bound(st, params)
        if not symmetrizer.is_positive_definite(symmetrizer.assemble_B0(st, 0.99 * bound, params)):
            failures.append({"check": "B0_inside_bound", "state": idx, "value": 0.99 * bound})
        if symmetrizer.is_positive_definite(symmetrizer.assemble_B0(st, 1.01 * bound, params)):
            failures.append({"check": "B0_outside_bound", "state": idx, "value": 1.01 * bound})

        lam_i = 0.7 * bound
        _, B1, B2, B3 = symmetrizer.assemble_S_and_Bj(st, lam_i, params)
        for name, B in zip(("B1", "B2", "B3"), (B1, B2, B3)):
            rel = symmetrizer.max_asymmetry(B) / max(float(np.max(np.abs(B))), 1e-300)
            max_asym_B = max(max_asym_B, rel)
            if rel > 1e-12:
                failures.append({"check": f"{name}_symmetry", "state": idx, "value": rel})

        front = FrontSlopes(0.0, rng.uniform(-2, 2), rng.uniform(-2, 2))
        closed = waves.eigenvalues_closed_form(st, front, params)
        numeric = waves.eigenvalues_numeric(st, front, params)
        scale = max(float(np.max(np.abs(numeric.lambdas))), 1e-300)
        disc = float(np.max(np.abs(closed.lambdas - numeric.lambdas))) / scale
        max_disc = max(max_disc, disc)
        if disc > 1e-10:
            failures.append({"check": "spectrum_oracle", "state": idx, "value": disc})

    warnings = []
    b0_at_lam = symmetrizer.is_positive_definite(symmetrizer.assemble_B0(state, lam, params))
    if abs(lam) >= base_bound:
        warnings.append(
            "lambda exceeds the admissibility bound: B0 indefinite as expected"
        )
    if params.nonstrict_convexity:
        warnings.append("gamma = 1: reduced pressure law is not strictly convex")

    results = {
        "states_checked": len(states),
        "lambda": lam,
        "lambda_bound": base_bound,
        "B0_definite_at_lambda": b0_at_lam,
        "max_asymmetry_A": max_asym_A,
        "max_relative_asymmetry_Bj": max_asym_B,
        "max_spectrum_discrepancy": max_disc,
        "failures": failures,
    }
    _emit(dumps_report(_report("check-symmetry", loaded.digest, results, warnings)), args.out)
    return EXIT_INVARIANT if failures else EXIT_OK


def _preset_profile(doc: dict | None, path: str):
    if doc is None:
        return None
    amplitude = _get_number(doc, "amplitude", path)
    center = _get_number(doc, "center", path)
    width = _get_number(doc, "width", path)
    if width <= 0.0:
        raise StateFileError(f"{path}.width: must be > 0")
    return lambda x: amplitude * np.exp(-(((x - center) / width) ** 2))


def _preset_source(doc: dict | None, path: str):
    profile = _preset_profile(doc, path)
    if profile is None:
        return None
    freq = _get_number(doc, "freq", path, default=0.0)
    return lambda t, x: np.cos(freq * t) * profile(x)


def _preset_pulse(doc: dict | None, path: str):
    profile = _preset_profile(doc, path)
    if profile is None:
        return None
    return lambda t: float(profile(t))


def cmd_simulate(args: argparse.Namespace) -> int:
    doc, digest = load_json(args.file)
    mode = doc.get("mode")
    if mode not in ("torus", "entropy"):
        raise StateFileError("mode: expected 'torus' or 'entropy'")
    if mode == "torus":
        return _simulate_torus(doc, digest, args)
    return _simulate_entropy(doc, digest, args)


def _simulate_torus(doc: dict, digest: str, args: argparse.Namespace) -> int:
    if "eos" not in doc:
        raise StateFileError("eos: missing required field")
    if "background" not in doc:
        raise StateFileError("background: missing required field")
    params = parse_eos(doc["eos"])
    bg_state = parse_state(doc["background"], "background")
    background = BackgroundState(bg_state, params)

    M = doc.get("grid", 16)
    if not isinstance(M, int) or isinstance(M, bool) or M < 8 or M % 2:
        raise StateFileError("grid: expected an even integer >= 8")
    T = _get_number(doc, "T", "", default=10.0)
    cfl = _get_number(doc, "cfl", "", default=0.4)
    dt = _get_number(doc, "dt", "") if doc.get("dt") is not None else None
    kmax = doc.get("kmax", 1)
    if not isinstance(kmax, int) or isinstance(kmax, bool) or kmax < 1 or kmax > M // 2 - 1:
        raise StateFileError("kmax: expected an integer in [1, grid/2 - 1]")
    families = doc.get("families", ["slow", "alfven", "middle"])
    if not isinstance(families, list) or not families or not all(
        f in linear_energy.WAVE_FAMILIES for f in families
    ):
        raise StateFileError(
            f"families: expected a non-empty list from {sorted(linear_energy.WAVE_FAMILIES)}"
        )
    amplitude = _get_number(doc, "amplitude", "", default=1.0)
    project = doc.get("project_divergence", True)
    if not isinstance(project, bool):
        raise StateFileError("project_divergence: expected a boolean")

    if doc.get("lambda") is not None:
        lam = _get_number(doc, "lambda", "")
    else:
        lam = _get_number(doc, "lambda_fraction", "", default=0.5) * background.lambda_bound

    rng = np.random.default_rng(_seed(int(doc.get("seed", 0))))
    initial = linear_energy.random_wave_field(
        background, M, rng, kmax=kmax, families=families, amplitude=amplitude
    )
    report = linear_energy.verify_conservation(
        background, initial, lam, T=T, dt=dt, cfl=cfl, project=project
    )

    if args.format == "csv":
        rows = [
            [t, I, J, IJ]
            for t, I, J, IJ in zip(
                report.times, report.I_series, report.J_series, report.IJ_series
            )
        ]
        _emit(csv_text(["t", "I", "J", "I_plus_2lambdaJ"], rows), args.out)
        return EXIT_OK

    results = {
        "mode": "torus",
        "drift_I": report.drift_I,
        "drift_J": report.drift_J,
        "drift_I_plus_2lambdaJ": report.drift_IJ,
        "lambda": report.lam,
        "lambda_bound": background.lambda_bound,
        "dt": report.dt,
        "n_steps": report.n_steps,
        "cfl": report.cfl,
        "grid": M,
        "projected": report.projected,
        "initial_divergence": report.initial_divergence,
        "I_initial": float(report.I_series[0]),
        "J_initial": float(report.J_series[0]),
    }
    warnings = []
    if not report.projected and report.initial_divergence > 1e-12:
        warnings.append("magnetic field not projected: J conservation not guaranteed")
    _emit(dumps_report(_report("simulate", digest, results, warnings)), args.out)
    return EXIT_OK


def _simulate_entropy(doc: dict, digest: str, args: argparse.Namespace) -> int:
    u1_plus = _get_number(doc, "u1_plus", "")
    u1_minus = _get_number(doc, "u1_minus", "")
    L = _get_number(doc, "L", "", default=2.0)
    dx = _get_number(doc, "dx", "")
    T = _get_number(doc, "T", "", default=1.0)
    courant = _get_number(doc, "courant", "", default=0.8)
    if doc.get("dt") is not None:
        dt = _get_number(doc, "dt", "")
    else:
        dt = courant * dx / max(u1_plus, u1_minus)

    def block(key):
        value = doc.get(key)
        if value is None:
            return None
        if not isinstance(value, dict):
            raise StateFileError(f"{key}: expected an object or null")
        return value

    try:
        problem = EntropyLayerProblem(
            u1_plus=u1_plus,
            u1_minus=u1_minus,
            L=L,
            dx=dx,
            dt=dt,
            s0_minus=_preset_profile(block("initial_minus"), "initial_minus"),
            s0_plus=_preset_profile(block("initial_plus"), "initial_plus"),
            f_minus=_preset_source(block("source_minus"), "source_minus"),
            f_plus=_preset_source(block("source_plus"), "source_plus"),
            g=_preset_pulse(block("g"), "g"),
        )
    except CflViolationError:
        raise
    except ValueError as exc:
        raise StateFileError(str(exc)) from exc
    report = linear_energy.verify_entropy_identity(problem, T)

    if args.format == "csv":
        rows = [
            [t, I, r]
            for t, I, r in zip(report.times, report.I_series, report.residual_series)
        ]
        _emit(csv_text(["t", "I", "identity_residual"], rows), args.out)
        return EXIT_OK

    results = {
        "mode": "entropy",
        "identity_residual": report.residual,
        "identity_residual_relative": report.residual_relative,
        "estimate_ratio": report.estimate_ratio,
        "I_initial": report.I_initial,
        "I_final": report.I_final,
        "boundary_integral": report.boundary_integral,
        "source_integral": report.source_integral,
        "boundary_absorption": report.boundary_absorption,
        "dx": report.dx,
        "dt": report.dt,
        "n_steps": report.n_steps,
        "outflow_trace_max": report.outflow_trace_max,
    }
    warnings = []
    if report.outflow_trace_max > 1e-8:
        warnings.append("signal reached the outflow boundary; enlarge L or shorten T")
    _emit(dumps_report(_report("simulate", digest, results, warnings)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twofluid",
        description="Desk-scale analysis of ideal compressible two-fluid MHD",
    )
    parser.add_argument("--version", action="version", version=f"twofluid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="write the payload to this path instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("speeds", help="wave speeds and both boundary-direction spectra")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=cmd_speeds)

    p = sub.add_parser("classify", help="classify a two-sided discontinuity datum")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("hugoniot", help="solve the downstream state at given compression")
    p.add_argument("file")
    p.add_argument("--compression", type=float, help="single compression ratio > 1")
    p.add_argument("--sweep", help="compression sweep a:b:n")
    p.add_argument("--family", choices=("fast", "slow"), default="fast")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
    add_common(p)
    p.set_defaults(func=cmd_hugoniot, format="csv")

    p = sub.add_parser("cvs-map", help="stability-margin table over a parameter grid")
    p.add_argument("file")
    p.add_argument("--jobs", type=int, default=1)
    add_common(p)
    p.set_defaults(func=cmd_cvs_map, format="csv")

    p = sub.add_parser("check-symmetry", help="run the symmetrizer invariant suite")
    p.add_argument("file")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--samples", type=int, default=100)
    add_common(p)
    p.set_defaults(func=cmd_check_symmetry)

    p = sub.add_parser("simulate", help="conserved-integral or entropy-layer verification")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StateFileError, InadmissibleStateError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except CflViolationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CFL
    except ConvergenceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_SOLVER


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
