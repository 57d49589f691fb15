"""Rankine-Hugoniot analysis and discontinuity classification.

A piecewise-smooth weak solution with front x1 = phi(t, x') must satisfy, at
each point of the front,

    [j1] = 0,  [j2] = 0,  [H_N] = 0,  j[u_N] + |N|^2 [q] = 0,
    j[u_tau] = H_N [H_tau],           H_N [u_tau] = j [H_tau / R],

with [g] = g(+) - g(-), mass fluxes j1 = n (u_N - phi_t), j2 = rho (...),
j = j1 + j2, and the non-orthonormal tangent pair tau1 = (phi_2, 1, 0),
tau2 = (phi_3, 0, 1). Four mutually exclusive configurations arise:

    shock wave               j != 0 and [R] != 0
    current-vortex sheet     j  = 0 and H_N  = 0
    contact discontinuity    j  = 0 and H_N != 0
    Alfven discontinuity     j != 0 and [R]  = 0  (then j = +-H_N sqrt(R))

``classify`` decides among these on floating-point data with explicit
tolerances; ``solve_downstream`` produces shock data on the compressive
branch by Newton continuation in the compression ratio.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .eos import ConvergenceError, EosParams, State, from_RS, pressure_RS
from .waves import FrontSlopes, wave_speeds

__all__ = [
    "InterfaceTraces",
    "DiscontinuityData",
    "Tolerances",
    "DiscontinuityType",
    "Classification",
    "traces",
    "rh_residual",
    "residual_scales",
    "classify",
    "solve_downstream",
    "mirror_data",
]


@dataclass(frozen=True)
class InterfaceTraces:
    """One-sided trace quantities on the front."""

    j1: float
    j2: float
    j: float
    uN: float
    HN: float
    uTau: np.ndarray  # (u . tau1, u . tau2)
    HTau: np.ndarray  # (H . tau1, H . tau2)


@dataclass
class DiscontinuityData:
    """Two one-sided states, the front slopes, and the EOS constants."""

    plus: State
    minus: State
    front: FrontSlopes
    params: EosParams

    def require_admissible(self) -> None:
        self.plus.require_admissible()
        self.minus.require_admissible()

    def jump(self, quantity: str) -> float:
        """Jump plus-minus of a scalar trace ('R', 'S', 'P', 'q')."""
        getters = {
            "R": lambda s: s.R,
            "S": lambda s: s.S,
            "P": lambda s: s.pressure(self.params),
            "q": lambda s: s.total_pressure(self.params),
        }
        g = getters[quantity]
        return g(self.plus) - g(self.minus)


def traces(state: State, front: FrontSlopes, params: EosParams) -> InterfaceTraces:
    """Mass fluxes and normal/tangential traces of one side."""
    state.require_admissible()
    N = front.normal
    uN = float(state.u @ N)
    rel = uN - front.phi_t
    return InterfaceTraces(
        j1=state.n * rel,
        j2=state.rho * rel,
        j=state.R * rel,
        uN=uN,
        HN=float(state.H @ N),
        uTau=np.array([float(state.u @ front.tau1), float(state.u @ front.tau2)]),
        HTau=np.array([float(state.H @ front.tau1), float(state.H @ front.tau2)]),
    )


def rh_residual(data: DiscontinuityData) -> np.ndarray:
    """The eight jump-condition residuals, zero exactly on weak solutions.

    Component order: [j1], [j2], [H_N], j[u_N] + |N|^2 [q], the two components
    of j[u_tau] - H_N[H_tau], and the two of H_N[u_tau] - j[H_tau/R]. The
    fluxes j and H_N entering the last five slots are the plus-side traces;
    any side mismatch shows up in the first three slots.
    """
    data.require_admissible()
    tp = traces(data.plus, data.front, data.params)
    tm = traces(data.minus, data.front, data.params)
    n2 = data.front.norm_N ** 2
    j, HN = tp.j, tp.HN

    res = np.empty(8)
    res[0] = tp.j1 - tm.j1
    res[1] = tp.j2 - tm.j2
    res[2] = tp.HN - tm.HN
    res[3] = j * (tp.uN - tm.uN) + n2 * data.jump("q")
    res[4:6] = j * (tp.uTau - tm.uTau) - HN * (tp.HTau - tm.HTau)
    res[6:8] = HN * (tp.uTau - tm.uTau) - j * (tp.HTau / data.plus.R - tm.HTau / data.minus.R)
    return res


def _reference_scales(data: DiscontinuityData) -> dict[str, float]:
    """Natural magnitudes used to nondimensionalize residuals and thresholds."""
    tp = traces(data.plus, data.front, data.params)
    tm = traces(data.minus, data.front, data.params)
    wp = wave_speeds(data.plus, data.front, data.params)
    wm = wave_speeds(data.minus, data.front, data.params)
    R_ref = max(data.plus.R, data.minus.R)
    V_ref = max(
        wp.c_f, wm.c_f,
        abs(tp.uN - data.front.phi_t), abs(tm.uN - data.front.phi_t),
    )
    H_ref = max(
        float(np.linalg.norm(data.plus.H)),
        float(np.linalg.norm(data.minus.H)),
        np.sqrt(R_ref) * V_ref,
    )
    T_ref = max(
        1.0,
        float(np.linalg.norm(data.front.tau1)),
        float(np.linalg.norm(data.front.tau2)),
    )
    return {"R": R_ref, "V": V_ref, "H": H_ref, "T": T_ref, "N2": data.front.norm_N ** 2}


def residual_scales(data: DiscontinuityData) -> np.ndarray:
    """Per-component magnitudes matching the units of ``rh_residual``."""
    s = _reference_scales(data)
    mass_flux = s["R"] * s["V"]
    momentum = max(s["N2"] * max(
        data.plus.total_pressure(data.params), data.minus.total_pressure(data.params)
    ), s["R"] * s["V"] ** 2)
    tang_mom = s["T"] * max(s["R"] * s["V"] ** 2, s["H"] ** 2)
    induction = s["T"] * s["H"] * s["V"]
    return np.array([
        mass_flux, mass_flux, s["N2"] * s["H"], momentum,
        tang_mom, tang_mom, induction, induction,
    ])


@dataclass(frozen=True)
class Tolerances:
    """Relative thresholds of the classification decision tree.

    Each value multiplies the matching natural scale from the data: rel_rh
    screens the residual norm, rel_j the mass flux, rel_R the density jump,
    and rel_H the normal magnetic trace.
    """

    rel_rh: float = 1e-8
    rel_j: float = 1e-8
    rel_R: float = 1e-8
    rel_H: float = 1e-8


class DiscontinuityType(enum.Enum):
    FAST_LAX_SHOCK = "FastLaxShock"
    SLOW_LAX_SHOCK = "SlowLaxShock"
    NON_LAX_SHOCK = "NonLaxShock"
    CURRENT_VORTEX_SHEET = "CurrentVortexSheet"
    CONTACT_DISCONTINUITY = "ContactDiscontinuity"
    ALFVEN_DISCONTINUITY = "AlfvenDiscontinuity"
    NO_DISCONTINUITY = "NoDiscontinuity"
    NOT_A_WEAK_SOLUTION = "NotAWeakSolution"


@dataclass
class Classification:
    """Discontinuity type plus the evidence that produced it."""

    kind: DiscontinuityType
    diagnostics: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


def _max_state_jump(data: DiscontinuityData, scales: dict[str, float]) -> float:
    """Largest normalized jump across all primitive components."""
    p, m = data.plus, data.minus
    R_ref, V_ref, H_ref = scales["R"], scales["V"], scales["H"]
    candidates = [
        abs(p.n - m.n) / R_ref,
        abs(p.rho - m.rho) / R_ref,
        float(np.max(np.abs(p.u - m.u))) / V_ref,
        float(np.max(np.abs(p.H - m.H))) / max(H_ref, 1e-300),
    ]
    return max(candidates)


def classify(data: DiscontinuityData, tol: Tolerances = Tolerances()) -> Classification:
    """Decide which discontinuity type the data represents.

    The decision tree checks, in order: the full residual (anything above
    tolerance is not a weak solution), a trivial jump (no discontinuity),
    the mass flux and density jump (shock or Alfven), then the normal
    magnetic trace (sheet or contact). Sub-condition outcomes and the Lax
    refinement of shocks land in the diagnostics.
    """
    data.require_admissible()
    scales = _reference_scales(data)
    res = rh_residual(data)
    res_norm = float(np.max(np.abs(res) / residual_scales(data)))

    tp = traces(data.plus, data.front, data.params)
    tm = traces(data.minus, data.front, data.params)
    jump_R = data.jump("R")
    diag: dict = {
        "residual": res,
        "residual_norm": res_norm,
        "j_plus": tp.j,
        "j_minus": tm.j,
        "jump_R": jump_R,
        "H_N": tp.HN,
        "jump_S": data.jump("S"),
    }
    warnings: list[str] = []
    if data.params.nonstrict_convexity:
        warnings.append("gamma = 1: reduced pressure law is not strictly convex")

    if res_norm > tol.rel_rh:
        return Classification(DiscontinuityType.NOT_A_WEAK_SOLUTION, diag, warnings)

    if _max_state_jump(data, scales) <= tol.rel_rh:
        return Classification(DiscontinuityType.NO_DISCONTINUITY, diag, warnings)

    flux_scale = scales["R"] * scales["V"]
    has_flux = abs(tp.j) > tol.rel_j * flux_scale
    has_R_jump = abs(jump_R) > tol.rel_R * scales["R"]

    if has_flux and has_R_jump:
        diag["entropy_continuous"] = abs(data.jump("S")) <= tol.rel_rh * max(
            data.plus.S, data.minus.S, 1.0
        )
        from .admissibility import lax_check  # deferred: admissibility imports this module

        report = lax_check(data, tol)
        diag["lax"] = report
        if report.is_lax and report.family == "fast":
            kind = DiscontinuityType.FAST_LAX_SHOCK
        elif report.is_lax and report.family == "slow":
            kind = DiscontinuityType.SLOW_LAX_SHOCK
        else:
            kind = DiscontinuityType.NON_LAX_SHOCK
        return Classification(kind, diag, warnings)

    if has_flux:
        # j != 0 with [R] = 0: Alfven branch, j = +-H_N sqrt(R)
        sqrtR = np.sqrt(data.plus.R)
        sign = 1.0 if tp.j * tp.HN >= 0.0 else -1.0
        mismatch = abs(abs(tp.j) - abs(tp.HN) * sqrtR)
        diag["alfven_sign"] = sign
        diag["alfven_flux_mismatch"] = mismatch
        checks = {
            "pressure_continuous": abs(data.jump("P")),
            "entropy_continuous": abs(data.jump("S")),
            "normal_field_continuous": abs(tp.HN - tm.HN),
            "field_magnitude_continuous": abs(
                float(data.plus.H @ data.plus.H) - float(data.minus.H @ data.minus.H)
            ),
            "velocity_field_locked": float(
                np.max(np.abs((data.plus.u - data.minus.u)
                              - (data.plus.H - data.minus.H) / sqrtR))
            ),
        }
        diag["alfven_checks"] = checks
        if mismatch > tol.rel_j * flux_scale:
            warnings.append(
                "mass flux does not match +-H_N*sqrt(R) within tolerance"
            )
        return Classification(DiscontinuityType.ALFVEN_DISCONTINUITY, diag, warnings)

    has_HN = abs(tp.HN) > tol.rel_H * scales["N2"] * scales["H"]
    if not has_HN:
        diag["cvs_checks"] = {
            "total_pressure_continuous": abs(data.jump("q")),
            "H_N_plus": abs(tp.HN),
            "H_N_minus": abs(tm.HN),
            "front_comoving_plus": abs(tp.uN - data.front.phi_t),
            "front_comoving_minus": abs(tm.uN - data.front.phi_t),
        }
        return Classification(DiscontinuityType.CURRENT_VORTEX_SHEET, diag, warnings)

    diag["contact_checks"] = {
        "pressure_continuous": abs(data.jump("P")),
        "velocity_continuous": float(np.max(np.abs(data.plus.u - data.minus.u))),
        "field_continuous": float(np.max(np.abs(data.plus.H - data.minus.H))),
        "front_comoving": abs(tp.uN - data.front.phi_t),
    }
    return Classification(DiscontinuityType.CONTACT_DISCONTINUITY, diag, warnings)


def mirror_data(data: DiscontinuityData) -> DiscontinuityData:
    """Reflect x1 -> -x1 and swap the sides.

    Useful for bringing data with flow in the -N direction to the reference
    orientation; classification is invariant under this map.
    """

    def flip(state: State) -> State:
        u = state.u.copy()
        H = state.H.copy()
        u[0] = -u[0]
        H[0] = -H[0]
        return State(n=state.n, rho=state.rho, u=u, H=H)

    front = FrontSlopes(-data.front.phi_t, -data.front.phi_2, -data.front.phi_3)
    return DiscontinuityData(
        plus=flip(data.minus), minus=flip(data.plus), front=front, params=data.params
    )


def _shock_residual(
    x: np.ndarray,
    upstream: State,
    n_down: float,
    rho_down: float,
    H1: float,
    phi_t_free: bool,
    params: EosParams,
) -> np.ndarray:
    """Six-component residual for the downstream unknowns on a planar front.

    x = (sigma, u1, u2, u3, H2, H3) of the downstream (plus) side.
    """
    sigma = x[0]
    down = State(n=n_down, rho=rho_down, u=x[1:4], H=np.array([H1, x[4], x[5]]))
    front = FrontSlopes(phi_t=sigma)
    data = DiscontinuityData(plus=down, minus=upstream, front=front, params=params)
    res = rh_residual(data)
    # [j2] and [H_N] vanish identically by construction; keep the six live ones
    return np.array([res[0], res[3], res[4], res[5], res[6], res[7]])


def _gas_dynamic_sigma(upstream: State, r: float, params: EosParams) -> float:
    """Shock speed of the zero-field compressive shock at compression r."""
    R_u = upstream.R
    S = upstream.S
    R_d = r * R_u
    dP = pressure_RS(R_d, S, params) - pressure_RS(R_u, S, params)
    j2 = dP / (1.0 / R_u - 1.0 / R_d)
    j = np.sqrt(max(j2, 0.0))
    return float(upstream.u[0] - j / R_u)


def solve_downstream(
    upstream: State,
    front: FrontSlopes,
    compression: float,
    params: EosParams,
    family: str = "fast",
    rel_tol: float = 1e-12,
    max_newton: int = 60,
    max_step: float = 0.1,
) -> tuple[State, float]:
    """Downstream state and shock speed at a given compression ratio.

    The upstream (minus) side and the planar front direction are fixed; the
    downstream side has the same entropy-like ratio and total density
    ``compression * R_up``. The six remaining unknowns (shock speed, velocity,
    tangential field) solve the jump conditions by damped Newton iteration
    with continuation in the compression ratio from 1, in steps of at most
    ``max_step``. ``family`` picks the branch seeded at the fast or slow
    characteristic.
    """
    upstream.require_admissible()
    if not front.is_planar:
        raise ValueError("solve_downstream requires a planar front")
    if compression <= 1.0:
        raise ValueError(f"compression must exceed 1, got {compression}")
    if family not in ("fast", "slow"):
        raise ValueError(f"family must be 'fast' or 'slow', got {family!r}")

    S_up = upstream.S
    R_up = upstream.R
    H1 = float(upstream.H[0])
    scale = residual_scales(
        DiscontinuityData(plus=upstream, minus=upstream,
                          front=FrontSlopes(), params=params)
    )[[0, 3, 4, 5, 6, 7]]

    # seed at the characteristic speed of the requested branch
    ws = wave_speeds(upstream, FrontSlopes(), params)
    if family == "fast":
        sigma0 = _gas_dynamic_sigma(upstream, 1.0 + min(max_step, compression - 1.0), params)
        sigma0 = min(sigma0, float(upstream.u[0]) - ws.c_f)
    else:
        sigma0 = float(upstream.u[0]) - ws.c_s
    x = np.array([sigma0, *upstream.u, upstream.H[1], upstream.H[2]])

    n_steps = max(1, int(np.ceil((compression - 1.0) / max_step)))
    ratios = 1.0 + (compression - 1.0) * np.arange(1, n_steps + 1) / n_steps

    last_norm = np.inf
    for r in ratios:
        rho_d, n_d = from_RS(r * R_up, S_up)

        def F(xv: np.ndarray) -> np.ndarray:
            return _shock_residual(xv, upstream, n_d, rho_d, H1, True, params) / scale

        f = F(x)
        last_norm = float(np.linalg.norm(f))
        for _ in range(max_newton):
            if last_norm <= rel_tol:
                break
            # forward-difference Jacobian; the system is small and smooth
            J = np.empty((6, 6))
            for k in range(6):
                h = 1e-7 * max(abs(x[k]), 1.0)
                xp = x.copy()
                xp[k] += h
                J[:, k] = (F(xp) - f) / h
            try:
                dx = np.linalg.solve(J, -f)
            except np.linalg.LinAlgError as exc:
                raise ConvergenceError(
                    f"singular Jacobian at compression {r} (residual {last_norm})"
                ) from exc
            # backtracking damping on the residual norm
            t = 1.0
            for _ in range(40):
                x_new = x + t * dx
                f_new = F(x_new)
                norm_new = float(np.linalg.norm(f_new))
                if norm_new < last_norm:
                    break
                t *= 0.5
            else:
                raise ConvergenceError(
                    f"line search stalled at compression {r} (residual {last_norm})"
                )
            x, f, last_norm = x_new, f_new, norm_new
        if last_norm > rel_tol:
            raise ConvergenceError(
                f"Newton did not converge at compression {r}: residual {last_norm}"
            )

    rho_d, n_d = from_RS(compression * R_up, S_up)
    down = State(n=n_d, rho=rho_d, u=x[1:4], H=np.array([H1, x[4], x[5]]))
    return down, float(x[0])
