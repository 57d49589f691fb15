"""Numerical verification of the conserved integrals of the linearized system.

The constant-coefficient system

    A0(B) dU/dt + sum_j Aj(B) dU/dx_j = 0

around an admissible background B conserves the quadratic integrals

    I = integral( P^2/(R*P_R) + R|u|^2 + |H|^2 + S^2 )
    J = integral( (Hb . u) P / P_R - R (u . H) )

and hence I + 2*lambda*J, which is the quadratic form of the secondary
symmetrizer B0. The whole-space setting is replaced by the periodic torus
[0, 2pi)^3, where every integration-by-parts identity survives without
boundary terms. Spatial derivatives are spectral (skew-adjoint on the grid),
so the semi-discrete integrals are conserved exactly and the fully discrete
drift comes from the explicit fourth-order time integrator alone.

A separate one-dimensional two-domain transport problem checks the energy
identity of the entropy perturbation layer behind a compressive shock,
including the boundary absorption term and the a priori estimate ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
import scipy.linalg

from .eos import EosParams, State
from .symmetrizer import assemble_A0, assemble_Aj, assemble_B0, lambda_bound

__all__ = [
    "CflViolationError",
    "BackgroundState",
    "PeriodicField",
    "LinearTrajectory",
    "ConservationReport",
    "EntropyLayerProblem",
    "EntropyIdentityReport",
    "WAVE_FAMILIES",
    "symbol_eigensystem",
    "wave_packet_field",
    "random_wave_field",
    "random_field",
    "project_divergence_free",
    "divergence_max",
    "integral_I",
    "integral_J",
    "quadratic_form_B0",
    "simulate_linear",
    "verify_conservation",
    "verify_entropy_identity",
]

#: Index pairs of the sorted symbol spectrum, slowest families in the middle.
WAVE_FAMILIES = {
    "fast": (0, 7),
    "alfven": (1, 6),
    "slow": (2, 5),
    "middle": (3, 4),  # entropy and longitudinal-field modes
}


class CflViolationError(ValueError):
    """Raised when the requested time step violates the CFL restriction."""


@dataclass
class BackgroundState:
    """Constant background with its cached coefficient matrices."""

    state: State
    params: EosParams

    def __post_init__(self) -> None:
        self.state.require_admissible()
        self.R = self.state.R
        self.P_R = self.state.dP_dR(self.params)
        self.A0 = assemble_A0(self.state, self.params)
        self.A = [assemble_Aj(self.state, self.params, j) for j in (1, 2, 3)]
        self.A0inv_A = [np.diag(1.0 / np.diag(self.A0)) @ Aj for Aj in self.A]
        self.max_speed = max(
            float(np.max(np.abs(scipy.linalg.eigh(Aj, self.A0, eigvals_only=True))))
            for Aj in self.A
        )
        self.lambda_bound = lambda_bound(self.state, self.params)


@dataclass
class PeriodicField:
    """8-component field on the uniform periodic lattice of [0, 2pi)^3."""

    values: np.ndarray  # shape (M, M, M, 8)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 4 or self.values.shape[3] != 8:
            raise ValueError("field values must have shape (M, M, M, 8)")
        M = self.values.shape[0]
        if self.values.shape[:3] != (M, M, M):
            raise ValueError("grid must be cubic")
        if M < 8 or M % 2:
            raise ValueError(f"grid size must be even and >= 8, got {M}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    @property
    def M(self) -> int:
        return self.values.shape[0]

    @property
    def dx(self) -> float:
        return 2.0 * np.pi / self.M

    @classmethod
    def zeros(cls, M: int) -> "PeriodicField":
        return cls(np.zeros((M, M, M, 8)))

    def copy(self) -> "PeriodicField":
        return PeriodicField(self.values.copy())


def _grid_coordinates(M: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = np.arange(M) * (2.0 * np.pi / M)
    return np.meshgrid(x, x, x, indexing="ij")


def _wavenumbers(M: int) -> np.ndarray:
    k = np.fft.fftfreq(M, d=1.0 / M)
    k[M // 2] = 0.0  # drop the Nyquist mode to keep the derivative skew-adjoint
    return k


def _spectral_derivative(values: np.ndarray, axis: int) -> np.ndarray:
    M = values.shape[0]
    k = _wavenumbers(M)
    shape = [1, 1, 1, 1]
    shape[axis] = M
    f = np.fft.fft(values, axis=axis)
    f *= (1j * k).reshape(shape)
    return np.fft.ifft(f, axis=axis).real


def divergence_max(field: PeriodicField) -> float:
    """Largest pointwise spectral divergence of the magnetic components."""
    div = sum(_spectral_derivative(field.values[..., 4 + j : 5 + j], j)[..., 0]
              for j in range(3))
    return float(np.max(np.abs(div)))


def project_divergence_free(field: PeriodicField) -> PeriodicField:
    """Remove the longitudinal part of the magnetic components spectrally."""
    M = field.M
    k = _wavenumbers(M)
    kx, ky, kz = np.meshgrid(k, k, k, indexing="ij")
    k2 = kx**2 + ky**2 + kz**2
    k2[k2 == 0.0] = 1.0  # the mean field has no divergence; leave it alone

    out = field.values.copy()
    Hh = [np.fft.fftn(out[..., 4 + j]) for j in range(3)]
    k_dot_H = kx * Hh[0] + ky * Hh[1] + kz * Hh[2]
    for j, kj in enumerate((kx, ky, kz)):
        out[..., 4 + j] = np.fft.ifftn(Hh[j] - kj * k_dot_H / k2).real
    return PeriodicField(out)


def symbol_eigensystem(
    background: BackgroundState, k: Iterable[float]
) -> tuple[np.ndarray, np.ndarray]:
    """Frequencies and A0-orthonormal wave vectors of the Fourier symbol.

    For mode k the plane wave V[:, i] * exp(i(k.x - omega_i t)) solves the
    linear system exactly; omegas come back sorted ascending.
    """
    k = np.asarray(k, dtype=float).reshape(3)
    M = sum(kj * Aj for kj, Aj in zip(k, background.A))
    omegas, V = scipy.linalg.eigh(M, background.A0)
    return omegas, V


def wave_packet_field(
    background: BackgroundState,
    M: int,
    components: list[tuple[tuple[int, int, int], int, float, float]],
    t: float = 0.0,
) -> PeriodicField:
    """Superposition of exact plane waves, evaluated at time t.

    Each component is (k, wave_index, a, b) with k an integer wavevector,
    wave_index the position in the sorted symbol spectrum, and (a, b) the
    cosine and sine amplitudes. Evaluating at t > 0 gives the exact solution
    launched from the t = 0 field.
    """
    X, Y, Z = _grid_coordinates(M)
    out = np.zeros((M, M, M, 8))
    for kvec, index, a, b in components:
        omegas, V = symbol_eigensystem(background, kvec)
        phase = kvec[0] * X + kvec[1] * Y + kvec[2] * Z - omegas[index] * t
        out += (a * np.cos(phase) + b * np.sin(phase))[..., None] * V[:, index]
    return PeriodicField(out)


def random_wave_field(
    background: BackgroundState,
    M: int,
    rng: np.random.Generator,
    kmax: int = 1,
    families: Iterable[str] = ("slow", "alfven", "middle"),
    amplitude: float = 1.0,
) -> PeriodicField:
    """Random smooth superposition of eigenmodes from the chosen wave families.

    Only wavevectors with max-norm at most ``kmax`` participate, so the field
    is fully resolved on any admissible grid. Restricting the families keeps
    the time-integration error of the slower waves in view independently of
    the CFL-setting fast speed.
    """
    indices = sorted({i for f in families for i in WAVE_FAMILIES[f]})
    components = []
    ks = range(-kmax, kmax + 1)
    for kx in ks:
        for ky in ks:
            for kz in ks:
                k = (kx, ky, kz)
                if k == (0, 0, 0) or k < (0, 0, 0):  # one of each conjugate pair
                    continue
                for i in indices:
                    a, b = rng.normal(size=2) * amplitude
                    components.append((k, i, a, b))
    return wave_packet_field(background, M, components)


def random_field(
    M: int, rng: np.random.Generator, kmax: int = 1, amplitude: float = 1.0
) -> PeriodicField:
    """Random smooth field with independent components (no wave structure)."""
    X, Y, Z = _grid_coordinates(M)
    out = np.zeros((M, M, M, 8))
    ks = range(-kmax, kmax + 1)
    for kx in ks:
        for ky in ks:
            for kz in ks:
                if (kx, ky, kz) <= (0, 0, 0):
                    continue
                phase = kx * X + ky * Y + kz * Z
                coeffs = rng.normal(size=(2, 8)) * amplitude
                out += np.cos(phase)[..., None] * coeffs[0]
                out += np.sin(phase)[..., None] * coeffs[1]
    return PeriodicField(out)


def _integral_I_values(v: np.ndarray, dx: float, background: BackgroundState) -> float:
    w = (
        v[..., 0] ** 2 / (background.R * background.P_R)
        + background.R * np.sum(v[..., 1:4] ** 2, axis=-1)
        + np.sum(v[..., 4:7] ** 2, axis=-1)
        + v[..., 7] ** 2
    )
    return float(w.sum() * dx**3)


def _integral_J_values(v: np.ndarray, dx: float, background: BackgroundState) -> float:
    Hb = background.state.H
    w = (v[..., 1:4] @ Hb) * v[..., 0] / background.P_R - background.R * np.sum(
        v[..., 1:4] * v[..., 4:7], axis=-1
    )
    return float(w.sum() * dx**3)


def integral_I(field: PeriodicField, background: BackgroundState) -> float:
    """Discrete primary energy: node sum times cell volume."""
    return _integral_I_values(field.values, field.dx, background)


def integral_J(field: PeriodicField, background: BackgroundState) -> float:
    """Discrete cross-helicity-type integral of the linearized system."""
    return _integral_J_values(field.values, field.dx, background)


def quadratic_form_B0(
    field: PeriodicField, background: BackgroundState, lam: float
) -> float:
    """Quadrature of the secondary-symmetrizer quadratic form; equals I + 2*lambda*J."""
    B0 = assemble_B0(background.state, lam, background.params)
    v = field.values
    return float(np.einsum("xyza,ab,xyzb->", v, B0, v) * field.dx**3)


def _rhs(background: BackgroundState, values: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values)
    for axis, Mj in enumerate(background.A0inv_A):
        out -= np.einsum("ab,xyzb->xyza", Mj, _spectral_derivative(values, axis))
    return out


def _rk4_step(background: BackgroundState, values: np.ndarray, dt: float) -> np.ndarray:
    k1 = _rhs(background, values)
    k2 = _rhs(background, values + 0.5 * dt * k1)
    k3 = _rhs(background, values + 0.5 * dt * k2)
    k4 = _rhs(background, values + dt * k3)
    return values + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_cfl(background: BackgroundState, dx: float, dt: float) -> float:
    cfl = dt * background.max_speed / dx
    if cfl > 0.5 + 1e-12:
        raise CflViolationError(
            f"CFL number {cfl:.6g} exceeds 0.5 (dt={dt}, dx={dx}, "
            f"max speed {background.max_speed:.6g})"
        )
    return cfl


@dataclass
class LinearTrajectory:
    times: np.ndarray
    fields: list[PeriodicField]
    dt: float
    lam: float


def simulate_linear(
    background: BackgroundState,
    initial: PeriodicField,
    lam: float,
    dt: float,
    T: float,
    save_every: int | None = None,
) -> LinearTrajectory:
    """Advance the constant-coefficient system to time T with RK4.

    Snapshots are stored every ``save_every`` steps (by default only the
    initial and final fields). ``lam`` tags the trajectory for downstream
    energy reporting; it does not enter the dynamics.
    """
    _check_cfl(background, initial.dx, dt)
    n_steps = max(1, int(np.ceil(T / dt - 1e-12)))
    dt_eff = T / n_steps

    values = initial.values.copy()
    times = [0.0]
    fields = [PeriodicField(values.copy())]
    for step in range(1, n_steps + 1):
        values = _rk4_step(background, values, dt_eff)
        if (save_every and step % save_every == 0) or step == n_steps:
            times.append(step * dt_eff)
            fields.append(PeriodicField(values.copy()))
    return LinearTrajectory(times=np.array(times), fields=fields, dt=dt_eff, lam=lam)


@dataclass
class ConservationReport:
    """Relative drifts of the three conserved integrals over one run."""

    drift_I: float
    drift_J: float
    drift_IJ: float
    times: np.ndarray
    I_series: np.ndarray
    J_series: np.ndarray
    IJ_series: np.ndarray
    lam: float
    dt: float
    n_steps: int
    cfl: float
    projected: bool
    initial_divergence: float


def verify_conservation(
    background: BackgroundState,
    initial: PeriodicField,
    lam: float,
    T: float,
    dt: float | None = None,
    cfl: float = 0.4,
    project: bool = True,
) -> ConservationReport:
    """Run the torus simulation and measure the drift of I, J, and I + 2*lambda*J.

    The initial magnetic components are spectrally projected divergence-free
    unless ``project`` is disabled (the toggle records the observed drift of
    J without the constraint, for diagnosis).
    """
    if dt is None:
        dt = cfl * initial.dx / background.max_speed
    cfl_actual = _check_cfl(background, initial.dx, dt)

    field = project_divergence_free(initial) if project else initial.copy()
    div0 = divergence_max(field)

    n_steps = max(1, int(np.ceil(T / dt - 1e-12)))
    dt_eff = T / n_steps

    values = field.values
    dx = field.dx
    I_series = np.empty(n_steps + 1)
    J_series = np.empty(n_steps + 1)
    for step in range(n_steps + 1):
        I_series[step] = _integral_I_values(values, dx, background)
        J_series[step] = _integral_J_values(values, dx, background)
        if step < n_steps:
            values = _rk4_step(background, values, dt_eff)
    IJ_series = I_series + 2.0 * lam * J_series

    I0, J0, IJ0 = I_series[0], J_series[0], IJ_series[0]
    drift_I = float(np.max(np.abs(I_series - I0)) / I0) if I0 > 0 else 0.0
    drift_J = float(np.max(np.abs(J_series - J0)) / (abs(J0) + I0)) if I0 > 0 else 0.0
    drift_IJ = float(np.max(np.abs(IJ_series - IJ0)) / abs(IJ0)) if IJ0 != 0 else 0.0
    return ConservationReport(
        drift_I=drift_I, drift_J=drift_J, drift_IJ=drift_IJ,
        times=np.arange(n_steps + 1) * dt_eff,
        I_series=I_series, J_series=J_series, IJ_series=IJ_series,
        lam=lam, dt=dt_eff, n_steps=n_steps, cfl=cfl_actual,
        projected=project, initial_divergence=div0,
    )


@dataclass
class EntropyLayerProblem:
    """Two half-line transport equations coupled through a jump at x = 0.

    The minus domain [-L, 0] and plus domain [0, L] advect their entropy
    perturbations rightward with constant speeds u1_minus and u1_plus; the
    plus side receives the outflow trace of the minus side shifted by the
    boundary jump g(t). The compressive configuration requires both speeds
    positive with u1_plus < u1_minus.
    """

    u1_plus: float
    u1_minus: float
    L: float
    dx: float
    dt: float
    f_plus: Callable[[float, np.ndarray], np.ndarray] | None = None
    f_minus: Callable[[float, np.ndarray], np.ndarray] | None = None
    g: Callable[[float], float] | None = None
    s0_plus: Callable[[np.ndarray], np.ndarray] | None = None
    s0_minus: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self) -> None:
        if self.u1_plus <= 0.0 or self.u1_minus <= 0.0:
            raise ValueError("both advection speeds must be positive")
        if self.u1_plus - self.u1_minus >= 0.0:
            raise ValueError(
                "compressive configuration requires u1_plus < u1_minus"
            )
        if self.L <= 0.0 or self.dx <= 0.0 or self.dt <= 0.0:
            raise ValueError("L, dx, dt must be positive")
        nu = self.dt * max(self.u1_plus, self.u1_minus) / self.dx
        if nu > 1.0 + 1e-12:
            raise CflViolationError(f"upwind Courant number {nu:.6g} exceeds 1")


@dataclass
class EntropyIdentityReport:
    """Discrete residual of the layer energy identity and the estimate ratio."""

    residual: float
    residual_signed: float
    residual_relative: float
    estimate_ratio: float
    I_initial: float
    I_final: float
    boundary_integral: float
    source_integral: float
    boundary_absorption: float
    n_steps: int
    dx: float
    dt: float
    outflow_trace_max: float
    times: np.ndarray | None = None
    I_series: np.ndarray | None = None
    residual_series: np.ndarray | None = None


def verify_entropy_identity(
    problem: EntropyLayerProblem, T: float
) -> EntropyIdentityReport:
    """Integrate the layer problem and evaluate the energy identity.

    The identity balances the growth of I(t), the squared entropy content,
    against the interface flux [u1] S_minus^2 + 2 u1_plus S_minus g +
    u1_plus g^2 and the work of the sources. Its discrete residual decays
    at first order in dx for dt proportional to dx.
    """
    p = problem
    m = int(round(p.L / p.dx))
    if m < 4:
        raise ValueError("grid too coarse: need at least 4 cells per side")
    dx = p.L / m
    x_minus = -p.L + (np.arange(m) + 0.5) * dx
    x_plus = (np.arange(m) + 0.5) * dx

    S_minus = np.broadcast_to(
        np.asarray(p.s0_minus(x_minus), dtype=float), (m,)
    ).copy() if p.s0_minus else np.zeros(m)
    S_plus = np.broadcast_to(
        np.asarray(p.s0_plus(x_plus), dtype=float), (m,)
    ).copy() if p.s0_plus else np.zeros(m)

    n_steps = max(1, int(np.ceil(T / p.dt - 1e-12)))
    dt = T / n_steps
    nu_m = p.u1_minus * dt / dx
    nu_p = p.u1_plus * dt / dx

    du1 = p.u1_plus - p.u1_minus

    def boundary_integrand(t: float, s_trace: float) -> float:
        g = p.g(t) if p.g else 0.0
        return du1 * s_trace**2 + 2.0 * p.u1_plus * s_trace * g + p.u1_plus * g**2

    def energy() -> float:
        return dx * (float(S_minus @ S_minus) + float(S_plus @ S_plus))

    def source_work(t: float) -> float:
        w = 0.0
        if p.f_minus:
            w += dx * float(np.asarray(p.f_minus(t, x_minus)) @ S_minus)
        if p.f_plus:
            w += dx * float(np.asarray(p.f_plus(t, x_plus)) @ S_plus)
        return w

    I0 = energy()
    I_vals = [I0]
    boundary_vals = [boundary_integrand(0.0, S_minus[-1])]
    source_vals = [source_work(0.0)]
    trace_sq_minus = [S_minus[-1] ** 2]
    g0 = p.g(0.0) if p.g else 0.0
    trace_sq_plus = [(S_minus[-1] + g0) ** 2]
    outflow_max = abs(S_plus[-1])
    norm_sq_minus = [float(S_minus @ S_minus) * dx]
    norm_sq_plus = [float(S_plus @ S_plus) * dx]
    f_sq = [_source_norm_sq(p, 0.0, x_minus, x_plus, dx)]
    g_sq = [g0**2]

    for step in range(n_steps):
        t = step * dt
        g_t = p.g(t) if p.g else 0.0
        ghost_plus = S_minus[-1] + g_t

        new_minus = S_minus - nu_m * (S_minus - np.concatenate(([0.0], S_minus[:-1])))
        new_plus = S_plus - nu_p * (S_plus - np.concatenate(([ghost_plus], S_plus[:-1])))
        if p.f_minus:
            new_minus = new_minus + dt * np.asarray(p.f_minus(t, x_minus))
        if p.f_plus:
            new_plus = new_plus + dt * np.asarray(p.f_plus(t, x_plus))
        S_minus, S_plus = new_minus, new_plus

        t_next = (step + 1) * dt
        g_next = p.g(t_next) if p.g else 0.0
        I_vals.append(energy())
        boundary_vals.append(boundary_integrand(t_next, S_minus[-1]))
        source_vals.append(source_work(t_next))
        trace_sq_minus.append(S_minus[-1] ** 2)
        trace_sq_plus.append((S_minus[-1] + g_next) ** 2)
        norm_sq_minus.append(float(S_minus @ S_minus) * dx)
        norm_sq_plus.append(float(S_plus @ S_plus) * dx)
        f_sq.append(_source_norm_sq(p, t_next, x_minus, x_plus, dx))
        g_sq.append(g_next**2)
        outflow_max = max(outflow_max, abs(S_plus[-1]))

    I_final = energy()

    def cumulative_trapezoid(vals: list[float]) -> np.ndarray:
        arr = np.asarray(vals)
        inner = np.cumsum(0.5 * (arr[1:] + arr[:-1]) * dt)
        return np.concatenate(([0.0], inner))

    boundary_cum = cumulative_trapezoid(boundary_vals)
    source_cum = cumulative_trapezoid(source_vals)
    residual_series = np.asarray(I_vals) - boundary_cum - I0 - 2.0 * source_cum
    boundary_integral = float(boundary_cum[-1])
    source_integral = float(source_cum[-1])
    residual = I_final - boundary_integral - I0 - 2.0 * source_integral
    scale = max(I0, I_final, abs(boundary_integral), 2.0 * abs(source_integral), 1e-300)

    lhs = (
        np.sqrt(float(np.trapezoid(norm_sq_minus, dx=dt)))
        + np.sqrt(float(np.trapezoid(norm_sq_plus, dx=dt)))
        + np.sqrt(float(np.trapezoid(trace_sq_minus, dx=dt)))
        + np.sqrt(float(np.trapezoid(trace_sq_plus, dx=dt)))
    )
    rhs = (
        np.sqrt(norm_sq_minus[0]) + np.sqrt(norm_sq_plus[0])
        + np.sqrt(float(np.trapezoid([f[0] for f in f_sq], dx=dt)))
        + np.sqrt(float(np.trapezoid([f[1] for f in f_sq], dx=dt)))
        + np.sqrt(float(np.trapezoid(g_sq, dx=dt)))
    )
    ratio = float(lhs / rhs) if rhs > 0.0 else 0.0

    return EntropyIdentityReport(
        residual=abs(float(residual)),
        residual_signed=float(residual),
        residual_relative=abs(float(residual)) / scale,
        estimate_ratio=ratio,
        I_initial=I0,
        I_final=I_final,
        boundary_integral=boundary_integral,
        source_integral=source_integral,
        boundary_absorption=float(-du1 * np.trapezoid(trace_sq_minus, dx=dt)),
        n_steps=n_steps,
        dx=dx,
        dt=dt,
        outflow_trace_max=float(outflow_max),
        times=np.arange(n_steps + 1) * dt,
        I_series=np.asarray(I_vals),
        residual_series=residual_series,
    )


def _source_norm_sq(
    p: EntropyLayerProblem, t: float, x_minus: np.ndarray, x_plus: np.ndarray, dx: float
) -> tuple[float, float]:
    fm = dx * float(np.sum(np.asarray(p.f_minus(t, x_minus)) ** 2)) if p.f_minus else 0.0
    fp = dx * float(np.sum(np.asarray(p.f_plus(t, x_plus)) ** 2)) if p.f_plus else 0.0
    return fm, fp
