"""Admissibility and stability criteria for the four discontinuity types.

Shocks are screened with the Lax k-shock inequalities built on the sorted
characteristic speeds of each side, with the fast family at the extreme
position and the slow family two slots in. Current-vortex sheets get the
sufficient stability margin

    G = |sin(psi+ - psi-)| * min(beta+/|sin psi-|, beta-/|sin psi+|) - |[u']|,

where psi+- are the angles between the tangential velocity jump and the
one-sided tangential fields and beta+- combine the sound and Alfven speeds.
G > 0 is sufficient for neutral stability; G <= 0 is *inconclusive*, never a
verdict of instability. Contact discontinuities are checked for continuity
of R*dP/dR, and the Rayleigh-Taylor sign condition is evaluated on
externally supplied normal pressure derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eos import EosParams
from .jumps import DiscontinuityData, Tolerances, _reference_scales, traces
from .waves import eigenvalues_closed_form, wave_speeds

__all__ = [
    "LaxReport",
    "ShockFamilyCheck",
    "CvsStabilityReport",
    "lax_check",
    "fast_shock_check",
    "slow_shock_check",
    "cvs_stability",
    "cvs_stability_geometry",
    "contact_rp_check",
    "rayleigh_taylor_check",
]


@dataclass(frozen=True)
class LaxReport:
    """Outcome of the Lax k-shock screening.

    ``margins`` holds the four slacks (sigma - lam_{k-1}^-, lam_k^- - sigma,
    sigma - lam_k^+, lam_{k+1}^+ - sigma) of the best k, with infinite
    sentinels at the ends of the chains; all four must be strictly positive
    for admissibility.
    """

    k: int | None
    is_lax: bool
    family: str  # "fast", "slow", or "other"
    margins: tuple[float, float, float, float] | None
    flow_sign: float  # +1 when the flow crosses in the +N direction


def lax_check(data: DiscontinuityData, tol: Tolerances = Tolerances()) -> LaxReport:
    """Find the k for which the front speed separates the characteristic fans.

    Requires shock data (nonzero mass flux). The inequalities are strict:
    a front speed meeting any eigenvalue exactly fails. Data with flow in
    the -N direction are handled by the mirror-equivalent chain, where the
    fast family sits at k = 8 and the slow family at k = 6.
    """
    data.require_admissible()
    scales = _reference_scales(data)
    j = traces(data.plus, data.front, data.params).j
    if abs(j) <= tol.rel_j * scales["R"] * scales["V"]:
        raise ValueError("Lax screening needs shock data with nonzero mass flux")

    sigma = data.front.phi_t
    lam_m = eigenvalues_closed_form(data.minus, data.front, data.params).lambdas
    lam_p = eigenvalues_closed_form(data.plus, data.front, data.params).lambdas
    minus_ext = np.concatenate(([-np.inf], lam_m, [np.inf]))
    plus_ext = np.concatenate(([-np.inf], lam_p, [np.inf]))

    best_k, best_margins, best_slack = None, None, -np.inf
    for k in range(1, 9):
        margins = (
            float(sigma - minus_ext[k - 1]),
            float(minus_ext[k] - sigma),
            float(sigma - plus_ext[k]),
            float(plus_ext[k + 1] - sigma),
        )
        slack = min(margins)
        if slack > best_slack:
            best_k, best_margins, best_slack = k, margins, slack

    is_lax = bool(best_slack > 0.0)
    sign = 1.0 if j > 0 else -1.0
    fast_k, slow_k = (1, 3) if sign > 0 else (8, 6)
    if is_lax and best_k == fast_k:
        family = "fast"
    elif is_lax and best_k == slow_k:
        family = "slow"
    else:
        family = "other"
    return LaxReport(
        k=best_k if is_lax else None,
        is_lax=is_lax,
        family=family,
        margins=best_margins,
        flow_sign=sign,
    )


@dataclass(frozen=True)
class ShockFamilyCheck:
    passed: bool
    margins: tuple[float, float, float]


def _oriented_speeds(data: DiscontinuityData):
    """Front-relative normal speeds and wave speeds of the upstream/downstream sides."""
    tp = traces(data.plus, data.front, data.params)
    tm = traces(data.minus, data.front, data.params)
    sign = 1.0 if tp.j >= 0.0 else -1.0
    d_plus = sign * (tp.uN - data.front.phi_t)
    d_minus = sign * (tm.uN - data.front.phi_t)
    wp = wave_speeds(data.plus, data.front, data.params)
    wm = wave_speeds(data.minus, data.front, data.params)
    if sign >= 0.0:  # flow crosses minus -> plus
        return (d_minus, wm), (d_plus, wp)
    return (d_plus, wp), (d_minus, wm)


def fast_shock_check(data: DiscontinuityData) -> ShockFamilyCheck:
    """Fast-family inequalities: supersonic inflow ahead, sub-fast super-Alfvenic behind.

    Margins: (d_up - c_f_up, d_down - |c_a_down|, c_f_down - d_down), all
    positive for a fast shock. Consistent with ``lax_check`` reporting the
    extreme k.
    """
    (d_up, w_up), (d_down, w_down) = _oriented_speeds(data)
    margins = (d_up - w_up.c_f, d_down - abs(w_down.c_a), w_down.c_f - d_down)
    return ShockFamilyCheck(passed=all(m > 0.0 for m in margins), margins=margins)


def slow_shock_check(data: DiscontinuityData) -> ShockFamilyCheck:
    """Slow-family inequalities: inflow between slow and Alfven, sub-slow behind.

    Margins: (d_up - c_s_up, |c_a_up| - d_up, c_s_down - d_down).
    """
    (d_up, w_up), (d_down, w_down) = _oriented_speeds(data)
    margins = (d_up - w_up.c_s, abs(w_up.c_a) - d_up, w_down.c_s - d_down)
    return ShockFamilyCheck(passed=all(m > 0.0 for m in margins), margins=margins)


@dataclass(frozen=True)
class CvsStabilityReport:
    """Stability margin of a planar current-vortex sheet.

    G > 0 is the sufficient condition; when the one-sided tangential fields
    are collinear the condition does not apply (``collinear`` set, G equal
    to -|[u']|). When the tangential velocity jump vanishes the angles are
    undefined and G falls back to the direction-independent lower bound
    (``degenerate`` set).
    """

    G: float
    psi_plus: float
    psi_minus: float
    beta_plus: float
    beta_minus: float
    collinear: bool
    degenerate: bool


def _beta(c: float, c_A: float) -> float:
    denom = np.sqrt(c * c + c_A * c_A)
    if denom == 0.0:
        return 0.0
    return float(c * c_A / denom)


def cvs_stability_geometry(
    du: np.ndarray,
    H_plus: np.ndarray,
    H_minus: np.ndarray,
    beta_plus: float,
    beta_minus: float,
    rel_tol: float = 1e-12,
) -> CvsStabilityReport:
    """Stability margin from the tangential-plane geometry alone.

    All arguments are 2-vectors in the sheet plane except the beta speeds.
    """
    du = np.asarray(du, dtype=float).reshape(2)
    H_plus = np.asarray(H_plus, dtype=float).reshape(2)
    H_minus = np.asarray(H_minus, dtype=float).reshape(2)

    def cross(a, b) -> float:
        return float(a[0] * b[1] - a[1] * b[0])

    nHp = float(np.linalg.norm(H_plus))
    nHm = float(np.linalg.norm(H_minus))
    ndu = float(np.linalg.norm(du))

    if nHp == 0.0 or nHm == 0.0:
        sin_theta = 0.0
    else:
        sin_theta = cross(H_minus, H_plus) / (nHm * nHp)
    collinear = abs(sin_theta) <= rel_tol

    if collinear:
        return CvsStabilityReport(
            G=-ndu, psi_plus=np.nan, psi_minus=np.nan,
            beta_plus=beta_plus, beta_minus=beta_minus,
            collinear=True, degenerate=ndu <= rel_tol * max(nHp, nHm, 1.0),
        )

    if ndu <= rel_tol * max(nHp, nHm, 1.0):
        # angles undefined at zero jump; use the infimum over jump directions
        return CvsStabilityReport(
            G=abs(sin_theta) * min(beta_plus, beta_minus),
            psi_plus=np.nan, psi_minus=np.nan,
            beta_plus=beta_plus, beta_minus=beta_minus,
            collinear=False, degenerate=True,
        )

    psi_plus = float(np.arctan2(cross(du, H_plus), float(du @ H_plus)))
    psi_minus = float(np.arctan2(cross(du, H_minus), float(du @ H_minus)))
    sin_p, sin_m = abs(np.sin(psi_plus)), abs(np.sin(psi_minus))
    term_plus = beta_plus / sin_m if sin_m > 0.0 else np.inf
    term_minus = beta_minus / sin_p if sin_p > 0.0 else np.inf
    G = abs(sin_theta) * min(term_plus, term_minus) - ndu
    return CvsStabilityReport(
        G=float(G), psi_plus=psi_plus, psi_minus=psi_minus,
        beta_plus=beta_plus, beta_minus=beta_minus,
        collinear=False, degenerate=False,
    )


def cvs_stability(data: DiscontinuityData) -> CvsStabilityReport:
    """Stability margin of a planar current-vortex sheet datum.

    The sheet must be planar so the tangential plane is spanned by the x2
    and x3 axes; use ``cvs_stability_geometry`` for synthetic sweeps.
    """
    data.require_admissible()
    if not data.front.is_planar:
        raise ValueError("the stability margin is defined for planar sheets")
    wp = wave_speeds(data.plus, data.front, data.params)
    wm = wave_speeds(data.minus, data.front, data.params)
    return cvs_stability_geometry(
        du=data.plus.u[1:3] - data.minus.u[1:3],
        H_plus=data.plus.H[1:3],
        H_minus=data.minus.H[1:3],
        beta_plus=_beta(wp.c, wp.c_A),
        beta_minus=_beta(wm.c, wm.c_A),
    )


def contact_rp_check(
    data: DiscontinuityData, rel_tol: float = 1e-8
) -> tuple[bool, float]:
    """Continuity of R*dP/dR across a contact datum.

    Returns (passed, jump). With equal exponents the product is gamma times
    the pressure, whose continuity is already part of the contact conditions,
    so the check passes automatically.
    """
    data.require_admissible()
    rp_plus = data.plus.R * data.plus.dP_dR(data.params)
    rp_minus = data.minus.R * data.minus.dP_dR(data.params)
    jump = rp_plus - rp_minus
    if data.params.alpha == data.params.gamma:
        return True, data.params.gamma * data.jump("P")
    return abs(jump) <= rel_tol * max(rp_plus, rp_minus), jump


def rayleigh_taylor_check(dPdN_plus: float, dPdN_minus: float) -> bool:
    """Sign condition on the jump of the normal pressure derivative.

    True iff dPdN_plus - dPdN_minus < 0 (strictly).
    """
    return (dPdN_plus - dPdN_minus) < 0.0
