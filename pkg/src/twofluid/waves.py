"""Characteristic wave speeds and the boundary-direction spectrum.

For a front x1 = phi(t, x2, x3) the relevant direction is the (non-unit)
normal N = (1, -d2 phi, -d3 phi). The coefficient matrix of that direction,
A_N = A0^{-1} (A1 - d2 phi * A2 - d3 phi * A3), has the eight real
eigenvalues

    u_N -+ c_f,  u_N -+ |c_a|,  u_N -+ c_s,  u_N (twice),

where u_N = u . N, c_a = (H . N)/sqrt(R), and the magnetosonic speeds come
from the quadratic in squared speed built on |N|*c and |N|*c_A. Scaling c
and c_A by |N| keeps u_N -+ c_{s,f} exact eigenvalues for every slope; a
planar front (|N| = 1) reproduces the familiar closed forms verbatim.

``eigenvalues_numeric`` solves the same spectrum as a symmetric-definite
generalized eigenproblem and serves as the independent oracle for the
closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .eos import EosParams, State
from .symmetrizer import assemble_A0, assemble_Aj

__all__ = [
    "FrontSlopes",
    "WaveSpeeds",
    "EigenSpectrum",
    "wave_speeds",
    "eigenvalues_closed_form",
    "eigenvalues_numeric",
]


@dataclass(frozen=True)
class FrontSlopes:
    """First derivatives of the discontinuity front x1 = phi(t, x2, x3).

    phi_t is the front speed, phi_2 and phi_3 the tangential slopes.
    """

    phi_t: float = 0.0
    phi_2: float = 0.0
    phi_3: float = 0.0

    def __post_init__(self) -> None:
        for name in ("phi_t", "phi_2", "phi_3"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"front slope {name} must be finite")

    @classmethod
    def planar(cls, phi_t: float = 0.0) -> "FrontSlopes":
        return cls(phi_t=phi_t)

    @property
    def normal(self) -> np.ndarray:
        """Non-unit normal N = (1, -phi_2, -phi_3)."""
        return np.array([1.0, -self.phi_2, -self.phi_3])

    @property
    def tau1(self) -> np.ndarray:
        return np.array([self.phi_2, 1.0, 0.0])

    @property
    def tau2(self) -> np.ndarray:
        return np.array([self.phi_3, 0.0, 1.0])

    @property
    def norm_N(self) -> float:
        return float(np.sqrt(1.0 + self.phi_2**2 + self.phi_3**2))

    @property
    def is_planar(self) -> bool:
        return self.phi_2 == 0.0 and self.phi_3 == 0.0


@dataclass(frozen=True)
class WaveSpeeds:
    """Characteristic speeds relative to the front normal.

    c and c_A are the intrinsic sound and total Alfven speeds; c_a carries
    the sign of H . N. The magnetosonic speeds c_s <= c_f include the |N|
    factor so that u_N -+ c_{s,f} are exact eigenvalues for sloped fronts.
    """

    c: float
    c_a: float
    c_A: float
    c_s: float
    c_f: float


@dataclass(frozen=True)
class EigenSpectrum:
    """Eight sorted characteristic speeds of the boundary direction."""

    lambdas: np.ndarray
    u_N: float

    def multiplicities(self, rel_tol: float = 1e-9) -> list[tuple[float, int]]:
        """Cluster the spectrum into (value, count) pairs.

        Two eigenvalues belong to one cluster when they differ by less than
        rel_tol times the spectral radius.
        """
        tol = rel_tol * max(float(np.max(np.abs(self.lambdas))), 1e-300)
        clusters: list[tuple[float, int]] = []
        start = 0
        for i in range(1, 9):
            if i == 8 or self.lambdas[i] - self.lambdas[i - 1] > tol:
                block = self.lambdas[start:i]
                clusters.append((float(np.mean(block)), len(block)))
                start = i
        return clusters


def wave_speeds(state: State, front: FrontSlopes, params: EosParams) -> WaveSpeeds:
    """Sound, Alfven, and |N|-scaled magnetosonic speeds for the front normal."""
    state.require_admissible()
    R = state.R
    c = state.sound_speed(params)
    N = front.normal
    nrm = front.norm_N
    sqrtR = np.sqrt(R)
    c_a = float(state.H @ N) / sqrtR
    c_A = float(np.linalg.norm(state.H)) / sqrtR

    b = (nrm * c) ** 2 + (nrm * c_A) ** 2
    disc = b * b - 4.0 * (nrm * c * c_a) ** 2
    disc = max(disc, 0.0)  # clip roundoff when c_a is maximal
    root = np.sqrt(disc)
    c_s = float(np.sqrt(max(0.5 * (b - root), 0.0)))
    c_f = float(np.sqrt(0.5 * (b + root)))
    return WaveSpeeds(c=c, c_a=c_a, c_A=c_A, c_s=c_s, c_f=c_f)


def eigenvalues_closed_form(
    state: State, front: FrontSlopes, params: EosParams
) -> EigenSpectrum:
    """The eight speeds u_N -+ {c_f, |c_a|, c_s} and u_N (twice), sorted."""
    ws = wave_speeds(state, front, params)
    u_N = float(state.u @ front.normal)
    ca = abs(ws.c_a)
    lams = np.array(
        [
            u_N - ws.c_f,
            u_N - ca,
            u_N - ws.c_s,
            u_N,
            u_N,
            u_N + ws.c_s,
            u_N + ca,
            u_N + ws.c_f,
        ]
    )
    return EigenSpectrum(lambdas=np.sort(lams), u_N=u_N)


def eigenvalues_numeric(
    state: State, front: FrontSlopes, params: EosParams
) -> EigenSpectrum:
    """Dense-eigensolver oracle for the boundary-direction spectrum.

    Solves (A1 - phi_2*A2 - phi_3*A3) v = lambda * A0 v as a symmetric
    generalized eigenproblem, so the eigenvalues are real by construction.
    """
    state.require_admissible()
    A0 = assemble_A0(state, params)
    M = assemble_Aj(state, params, 1)
    if front.phi_2 != 0.0:
        M = M - front.phi_2 * assemble_Aj(state, params, 2)
    if front.phi_3 != 0.0:
        M = M - front.phi_3 * assemble_Aj(state, params, 3)
    try:
        lams = scipy.linalg.eigh(M, A0, eigvals_only=True)
    except scipy.linalg.LinAlgError as exc:  # degenerate A0: inadmissible state
        raise ValueError(f"generalized eigensolve failed: {exc}") from exc
    u_N = float(state.u @ front.normal)
    return EigenSpectrum(lambdas=np.sort(lams), u_N=u_N)
