"""Symmetric-system matrices and definiteness checks.

The governing equations in the unknown U = (P, u, H, S) take the symmetric
quasilinear form

    A0(U) dU/dt + sum_j Aj(U) dU/dx_j = 0,

with A0 = diag(1/(R*P_R), R, R, R, 1, 1, 1, 1) positive definite whenever
n > 0 and rho >= 0. A one-parameter family of secondary symmetrizers B0
(reducing to A0 at lambda = 0) stays positive definite for

    lambda**2 < P_R / (R*P_R + |H|**2).

The companion coefficient matrices Bj of the secondary form are rebuilt
numerically here as S*Aj plus a rank-one correction proportional to the
divergence constraint; symmetry of the result is the self-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eos import EosParams, State

__all__ = [
    "assemble_A0",
    "assemble_Aj",
    "assemble_boundary_matrix",
    "lambda_bound",
    "assemble_B0",
    "assemble_S_and_Bj",
    "check_hyperbolicity",
    "HyperbolicityReport",
    "max_asymmetry",
    "is_positive_definite",
]


def max_asymmetry(M: np.ndarray) -> float:
    """Largest absolute entry of M - M^T."""
    return float(np.max(np.abs(M - M.T)))


def is_positive_definite(M: np.ndarray, rel_tol: float = 1e-12) -> bool:
    """Symmetric positive definiteness via eigenvalues.

    The threshold scales with the matrix norm so the test stays meaningful
    right at the lambda admissibility boundary.
    """
    eigvals = np.linalg.eigvalsh(0.5 * (M + M.T))
    scale = max(np.max(np.abs(eigvals)), 1e-300)
    return bool(eigvals[0] > rel_tol * scale)


def assemble_A0(state: State, params: EosParams) -> np.ndarray:
    """Primary symmetrizer diag(1/(R*P_R), R, R, R, 1, 1, 1, 1)."""
    state.require_admissible()
    R = state.R
    P_R = state.dP_dR(params)
    return np.diag([1.0 / (R * P_R), R, R, R, 1.0, 1.0, 1.0, 1.0])


def assemble_Aj(state: State, params: EosParams, axis: int) -> np.ndarray:
    """Coefficient matrix of the x_axis derivative, axis in {1, 2, 3}.

    Layout for axis = 1 (rows/columns ordered P, u1, u2, u3, H1, H2, H3, S):

        [u1/(R*P_R)  1      0      0      0    0    0    0 ]
        [1           R*u1   0      0      0    H2   H3   0 ]
        [0           0      R*u1   0      0   -H1   0    0 ]
        [0           0      0      R*u1   0    0   -H1   0 ]
        [0           0      0      0      u1   0    0    0 ]
        [0           H2    -H1     0      0    u1   0    0 ]
        [0           H3     0     -H1     0    0    u1   0 ]
        [0           0      0      0      0    0    0    u1]

    The axis = 2, 3 matrices permute the velocity slot and the magnetic
    couplings accordingly; all three are symmetric by construction.
    """
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2, or 3, got {axis}")
    state.require_admissible()
    R = state.R
    P_R = state.dP_dR(params)
    H1, H2, H3 = state.H
    uj = float(state.u[axis - 1])

    M = np.zeros((8, 8))
    M[0, 0] = uj / (R * P_R)
    M[axis, 0] = M[0, axis] = 1.0
    for i in (1, 2, 3):
        M[i, i] = R * uj
    for i in (4, 5, 6, 7):
        M[i, i] = uj

    # magnetic coupling block between the velocity rows and the H rows
    if axis == 1:
        M[1, 5] = M[5, 1] = H2
        M[1, 6] = M[6, 1] = H3
        M[2, 5] = M[5, 2] = -H1
        M[3, 6] = M[6, 3] = -H1
    elif axis == 2:
        M[1, 4] = M[4, 1] = -H2
        M[2, 4] = M[4, 2] = H1
        M[2, 6] = M[6, 2] = H3
        M[3, 6] = M[6, 3] = -H2
    else:
        M[1, 4] = M[4, 1] = -H3
        M[2, 5] = M[5, 2] = -H3
        M[3, 4] = M[4, 3] = H1
        M[3, 5] = M[5, 3] = H2
    return M


def assemble_boundary_matrix(state: State, front, params: EosParams) -> np.ndarray:
    """Shifted coefficient matrix A1 - A0*phi_t - A2*phi_2 - A3*phi_3.

    Singular exactly when the front is characteristic; equals A1 for a
    stationary planar front.
    """
    M = assemble_Aj(state, params, 1)
    if front.phi_t != 0.0:
        M = M - front.phi_t * assemble_A0(state, params)
    if front.phi_2 != 0.0:
        M = M - front.phi_2 * assemble_Aj(state, params, 2)
    if front.phi_3 != 0.0:
        M = M - front.phi_3 * assemble_Aj(state, params, 3)
    return M


def lambda_bound(state: State, params: EosParams) -> float:
    """Admissibility bound sqrt(P_R / (R*P_R + |H|^2)) for the secondary parameter."""
    state.require_admissible()
    R = state.R
    P_R = state.dP_dR(params)
    H2 = float(state.H @ state.H)
    return float(np.sqrt(P_R / (R * P_R + H2)))


def assemble_B0(state: State, lam: float, params: EosParams) -> np.ndarray:
    """Secondary symmetrizer; reduces to A0 at lam = 0.

    Positive definite if and only if |lam| < lambda_bound(state); definiteness
    is reported by the checks, not enforced here.
    """
    state.require_admissible()
    R = state.R
    P_R = state.dP_dR(params)
    H = state.H

    B = assemble_A0(state, params)
    B[0, 1:4] = B[1:4, 0] = lam * H / P_R
    for i in (1, 2, 3):
        B[i, i + 3] = B[i + 3, i] = -R * lam
    return B


def assemble_S_and_Bj(
    state: State, lam: float, params: EosParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Left multiplier S with S*A0 = B0 and the secondary coefficient matrices.

    Each Bj is S*Aj plus the rank-one correction r * e_{H_j}^T with
    r = -lam * (1, 0, 0, 0, H1, H2, H3, 0), which absorbs the divergence
    constraint. The reconstruction is validated by its symmetry.
    """
    A0 = assemble_A0(state, params)
    B0 = assemble_B0(state, lam, params)
    S = B0 @ np.diag(1.0 / np.diag(A0))

    r = np.zeros(8)
    r[0] = -lam
    r[4:7] = -lam * state.H

    Bj = []
    for axis in (1, 2, 3):
        B = S @ assemble_Aj(state, params, axis)
        B[:, 3 + axis] += r  # column of the H_axis component
        Bj.append(B)
    return S, Bj[0], Bj[1], Bj[2]


@dataclass
class HyperbolicityReport:
    """Outcome of the definiteness checks on a single state."""

    density_bounds_ok: bool
    A0_positive_definite: bool
    lambda_margin: float | None = None
    B0_positive_definite: bool | None = None
    messages: tuple[str, ...] = ()


def check_hyperbolicity(
    state: State, params: EosParams, lam: float | None = None
) -> HyperbolicityReport:
    """Report the density bounds, A0 > 0, and (optionally) B0 > 0 for a state.

    Never raises: inadmissible states come back flagged.
    """
    messages: list[str] = []
    bounds_ok = state.is_admissible
    if not bounds_ok:
        messages.append(f"density bounds violated: n={state.n}, rho={state.rho}")
        return HyperbolicityReport(False, False, messages=tuple(messages))

    A0_pd = is_positive_definite(assemble_A0(state, params))
    if lam is None:
        return HyperbolicityReport(bounds_ok, A0_pd, messages=tuple(messages))

    bound = lambda_bound(state, params)
    margin = abs(lam) - bound
    B0_pd = is_positive_definite(assemble_B0(state, lam, params))
    if margin >= 0.0:
        messages.append(
            f"|lambda| = {abs(lam)} exceeds the admissibility bound {bound}"
        )
    return HyperbolicityReport(
        bounds_ok, A0_pd, lambda_margin=margin, B0_positive_definite=B0_pd,
        messages=tuple(messages),
    )
