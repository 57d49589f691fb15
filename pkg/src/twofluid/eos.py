"""Equation of state and the entropy-like change of variables.

The mixture carries two densities: ``n`` for the carrier fluid and ``rho``
for the second phase. Both phases share one velocity ``u`` and one magnetic
field ``H``. The barotropic pressure law is

    P(rho, n) = rho**alpha + A * n**gamma,      alpha >= 1, gamma >= 1, A > 0.

All of the jump and symmetrization machinery works in the variables

    R = rho + n        (total density)
    S = rho / n        (entropy-like ratio, advected like an entropy)

in which the pressure becomes

    P(R, S) = (R*S/(S+1))**alpha + A*(R/(S+1))**gamma

with dP/dR > 0 whenever R > 0, so R is always recoverable from (P, S).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "EosParams",
    "State",
    "InadmissibleStateError",
    "ConvergenceError",
    "STATE_VECTOR_COMPONENTS",
    "pressure_from_densities",
    "to_RS",
    "from_RS",
    "pressure_RS",
    "dP_dR",
    "sound_speed",
    "density_from_pressure",
    "reduced_isentropic_coeffs",
]

#: Component order of the 8-vector of unknowns used throughout the package.
STATE_VECTOR_COMPONENTS = ("P", "u1", "u2", "u3", "H1", "H2", "H3", "S")


class InadmissibleStateError(ValueError):
    """Raised when a state violates n > 0, rho >= 0 (loss of hyperbolicity)."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative solve exhausts its iteration budget."""


@dataclass(frozen=True)
class EosParams:
    """Constitutive constants of the two-phase pressure law.

    Attributes
    ----------
    alpha : float
        Exponent of the particle-phase partial pressure, alpha >= 1.
    gamma : float
        Exponent of the carrier-fluid partial pressure, gamma >= 1.
    A : float
        Positive scale constant multiplying the carrier-fluid term.
    """

    alpha: float
    gamma: float
    A: float

    def __post_init__(self) -> None:
        for name in ("alpha", "gamma", "A"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"EosParams.{name} must be finite, got {value}")
        if self.alpha < 1.0:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if self.gamma < 1.0:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")
        if self.A <= 0.0:
            raise ValueError(f"A must be > 0, got {self.A}")

    @property
    def nonstrict_convexity(self) -> bool:
        """True when gamma == 1, where P(R) at fixed S need not be strictly convex."""
        return self.gamma == 1.0


def pressure_from_densities(rho: float, n: float, params: EosParams) -> float:
    """Pressure P = rho**alpha + A*n**gamma of the two-phase mixture."""
    if n <= 0.0:
        raise InadmissibleStateError(f"carrier density n must be > 0, got {n}")
    if rho < 0.0:
        raise InadmissibleStateError(f"particle density rho must be >= 0, got {rho}")
    return rho**params.alpha + params.A * n**params.gamma


def to_RS(rho: float, n: float) -> tuple[float, float]:
    """Map (rho, n) to total density R = rho + n and ratio S = rho/n."""
    if n <= 0.0:
        raise InadmissibleStateError(f"carrier density n must be > 0, got {n}")
    if rho < 0.0:
        raise InadmissibleStateError(f"particle density rho must be >= 0, got {rho}")
    return rho + n, rho / n


def from_RS(R: float, S: float) -> tuple[float, float]:
    """Invert to_RS: rho = R*S/(S+1), n = R/(S+1)."""
    if R <= 0.0:
        raise InadmissibleStateError(f"total density R must be > 0, got {R}")
    if S < 0.0:
        raise InadmissibleStateError(f"entropy-like ratio S must be >= 0, got {S}")
    n = R / (S + 1.0)
    return R * S / (S + 1.0), n


def pressure_RS(R: float, S: float, params: EosParams) -> float:
    """Pressure in (R, S) variables: (R*S/(S+1))**alpha + A*(R/(S+1))**gamma."""
    rho, n = from_RS(R, S)
    return pressure_from_densities(rho, n, params)


def dP_dR(R: float, S: float, params: EosParams) -> float:
    """Partial derivative of the pressure with respect to R at fixed S.

    dP/dR = (alpha/R)*(R*S/(S+1))**alpha + (gamma*A/R)*(R/(S+1))**gamma.
    Strictly positive for admissible (R, S); its square root plays the role
    of the sound speed.
    """
    rho, n = from_RS(R, S)
    return (params.alpha / R) * rho**params.alpha + (params.gamma * params.A / R) * n**params.gamma


def sound_speed(R: float, S: float, params: EosParams) -> float:
    """Sound speed c = sqrt(dP/dR)."""
    return float(np.sqrt(dP_dR(R, S, params)))


def density_from_pressure(
    P: float,
    S: float,
    params: EosParams,
    rel_tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Invert P(R, S) for R at fixed S.

    Uses a safeguarded Newton iteration on a bracket found by doubling and
    halving; the root is unique because dP/dR > 0. Converges to a relative
    tolerance of ``rel_tol`` in R.
    """
    if P <= 0.0:
        raise ValueError(f"pressure must be > 0, got {P}")
    if S < 0.0:
        raise InadmissibleStateError(f"entropy-like ratio S must be >= 0, got {S}")

    lo, hi = 1.0, 1.0
    for _ in range(max_iter):
        if pressure_RS(hi, S, params) >= P:
            break
        hi *= 2.0
    else:
        raise ConvergenceError(f"failed to bracket R from above for P={P}")
    for _ in range(max_iter):
        if pressure_RS(lo, S, params) <= P:
            break
        lo *= 0.5
    else:
        raise ConvergenceError(f"failed to bracket R from below for P={P}")

    R = 0.5 * (lo + hi)
    for _ in range(max_iter):
        f = pressure_RS(R, S, params) - P
        if f > 0.0:
            hi = R
        else:
            lo = R
        step = f / dP_dR(R, S, params)
        R_new = R - step
        if not (lo < R_new < hi):
            R_new = 0.5 * (lo + hi)  # Newton left the bracket; bisect
        if abs(R_new - R) <= rel_tol * R_new:
            return R_new
        R = R_new
    raise ConvergenceError(
        f"density_from_pressure did not converge in {max_iter} iterations (P={P}, S={S})"
    )


def reduced_isentropic_coeffs(S: float, params: EosParams) -> tuple[float, float]:
    """Coefficients (c1, c2) of the one-density law P(R) = c1*R**alpha + c2*R**gamma.

    At fixed S the mixture behaves like a single barotropic fluid with

        c1 = (S/(S+1))**alpha >= 0,    c2 = A*(1/(S+1))**gamma > 0.
    """
    if S < 0.0:
        raise InadmissibleStateError(f"entropy-like ratio S must be >= 0, got {S}")
    c1 = (S / (S + 1.0)) ** params.alpha
    c2 = params.A * (1.0 / (S + 1.0)) ** params.gamma
    return c1, c2


@dataclass
class State:
    """One-sided fluid state (n, rho, u, H).

    Thermodynamic derivatives require the EOS constants, so they are exposed
    as methods taking an :class:`EosParams`. The density bounds n > 0,
    rho >= 0 are *not* enforced at construction (diagnostic routines need to
    inspect inadmissible states); operations that require hyperbolicity call
    :meth:`require_admissible`.
    """

    n: float
    rho: float
    u: np.ndarray = field(default_factory=lambda: np.zeros(3))
    H: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self) -> None:
        self.n = float(self.n)
        self.rho = float(self.rho)
        self.u = np.asarray(self.u, dtype=float).reshape(3)
        self.H = np.asarray(self.H, dtype=float).reshape(3)
        if not (np.isfinite(self.n) and np.isfinite(self.rho)):
            raise ValueError("densities must be finite")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.H))):
            raise ValueError("u and H must be finite 3-vectors")

    @classmethod
    def from_RS(cls, R: float, S: float, u=(0.0, 0.0, 0.0), H=(0.0, 0.0, 0.0)) -> "State":
        rho, n = from_RS(R, S)
        return cls(n=n, rho=rho, u=np.asarray(u, dtype=float), H=np.asarray(H, dtype=float))

    @property
    def is_admissible(self) -> bool:
        return self.n > 0.0 and self.rho >= 0.0

    def require_admissible(self) -> None:
        if not self.is_admissible:
            raise InadmissibleStateError(
                f"state violates n > 0, rho >= 0 (n={self.n}, rho={self.rho})"
            )

    @property
    def R(self) -> float:
        return self.rho + self.n

    @property
    def S(self) -> float:
        self.require_admissible()
        return self.rho / self.n

    def pressure(self, params: EosParams) -> float:
        return pressure_from_densities(self.rho, self.n, params)

    def total_pressure(self, params: EosParams) -> float:
        """Total pressure q = P + |H|^2 / 2."""
        return self.pressure(params) + 0.5 * float(self.H @ self.H)

    def dP_dR(self, params: EosParams) -> float:
        self.require_admissible()
        return dP_dR(self.R, self.S, params)

    def sound_speed(self, params: EosParams) -> float:
        return float(np.sqrt(self.dP_dR(params)))

    def to_vector(self, params: EosParams) -> np.ndarray:
        """The 8-vector (P, u, H, S) in the fixed component order."""
        self.require_admissible()
        vec = np.empty(8)
        vec[0] = self.pressure(params)
        vec[1:4] = self.u
        vec[4:7] = self.H
        vec[7] = self.S
        return vec

    @classmethod
    def from_vector(cls, vec: np.ndarray, params: EosParams) -> "State":
        """Recover (n, rho, u, H) from an 8-vector (P, u, H, S)."""
        vec = np.asarray(vec, dtype=float).reshape(8)
        R = density_from_pressure(vec[0], vec[7], params)
        return cls.from_RS(R, vec[7], u=vec[1:4], H=vec[4:7])
