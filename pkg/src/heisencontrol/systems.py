"""Control systems upstairs and on the quotient charts.

The upstairs system is drift (a linear field) plus control-weighted
left-invariant fields.  When the dividing subgroup is flow-invariant
the dynamics descend to the chart; this module extracts the induced
coefficients, provides the right-hand sides of the three quotient
families, and integrates piecewise-constant-control trajectories with
a fixed-step classical Runge-Kutta scheme (reproducible, no adaptive
stepping).  Torus coordinates are wrapped to [0, 1) after every step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import AlgebraElement, GroupElement, LinearField
from .subgroups import Subgroup, circ_dist, is_invariant, project_1p


class IntegrationError(RuntimeError):
    """Trajectory left the finite range; carries the blow-up time."""

    def __init__(self, time: float):
        super().__init__(f"non-finite state at t={time:.6g}")
        self.time = time


@dataclass(frozen=True)
class ControlBox:
    """Compact box of admissible control values with 0 in its interior."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1 or not 1 <= lo.size <= 3:
            raise ValueError("control box needs matching 1..3-dim bounds")
        if not (np.all(lo < 0.0) and np.all(hi > 0.0)):
            raise ValueError("control box must contain 0 in its interior")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def interval(cls, lo: float, hi: float) -> "ControlBox":
        return cls(np.array([lo]), np.array([hi]))

    @property
    def m(self) -> int:
        return self.lower.size

    def contains(self, omega, tol: float = 0.0) -> bool:
        w = np.atleast_1d(np.asarray(omega, dtype=float))
        return (w.size == self.m and np.all(w >= self.lower - tol)
                and np.all(w <= self.upper + tol))

    def levels(self, n: int) -> np.ndarray:
        """Uniform discretization for a one-input box."""
        if self.m != 1:
            raise ValueError("levels() is defined for one-input boxes")
        return np.linspace(self.lower[0], self.upper[0], n)


@dataclass(frozen=True)
class ControlSignal:
    """Piecewise-constant control: ordered (duration, value) pieces."""

    pieces: tuple

    def __post_init__(self):
        norm = []
        for dur, val in self.pieces:
            d = float(dur)
            if not (d > 0.0 and np.isfinite(d)):
                raise ValueError("piece durations must be positive and finite")
            v = np.atleast_1d(np.asarray(val, dtype=float))
            v.flags.writeable = False
            norm.append((d, v))
        if not norm:
            raise ValueError("signal needs at least one piece")
        object.__setattr__(self, "pieces", tuple(norm))

    @classmethod
    def constant(cls, value, duration: float) -> "ControlSignal":
        return cls(((duration, value),))

    @property
    def total_duration(self) -> float:
        return sum(d for d, _ in self.pieces)

    @property
    def shortest_piece(self) -> float:
        return min(d for d, _ in self.pieces)


def _check_alpha_gamma(alpha: float, gamma: float):
    if gamma != 0.0 and alpha != 0.0:
        raise ValueError("constraint violated: alpha must be 0 when gamma != 0")


@dataclass(frozen=True)
class Sigma11Params:
    """One-input system on R x T: ds = -lam*s + w*b, dt = alpha*s^2/2 + gamma*s + w*(c + a*s)."""

    lam: float
    b: float
    a: float = 0.0
    c: float = 0.0
    alpha: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        _check_alpha_gamma(self.alpha, self.gamma)


@dataclass(frozen=True)
class Sigma10Params:
    """Three-input system on R^2 (quotient by the line subgroup with trivial lattice)."""

    lam: float
    beta: float
    alpha: float = 0.0
    gamma: float = 0.0
    a: tuple = (0.0, 0.0, 0.0)
    b: tuple = (0.0, 0.0, 0.0)
    c: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        _check_alpha_gamma(self.alpha, self.gamma)
        for name in ("a", "b", "c"):
            vals = tuple(float(x) for x in getattr(self, name))
            if len(vals) != 3:
                raise ValueError(f"{name} must have 3 entries")
            object.__setattr__(self, name, vals)


@dataclass(frozen=True)
class Sigma0pParams:
    """Three-input system on the (torus x R) x T^p chart of the discrete-line quotient."""

    p: int
    beta: float
    alpha: float = 0.0
    gamma: float = 0.0
    a: tuple = (0.0, 0.0, 0.0)
    b: tuple = (0.0, 0.0, 0.0)
    c: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.p not in (0, 1):
            raise ValueError("p must be 0 or 1")
        _check_alpha_gamma(self.alpha, self.gamma)
        for name in ("a", "b", "c"):
            vals = tuple(float(x) for x in getattr(self, name))
            if len(vals) != 3:
                raise ValueError(f"{name} must have 3 entries")
            object.__setattr__(self, name, vals)


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: times[i] maps to states[i]; states are chart rows."""

    times: np.ndarray
    states: np.ndarray
    signal: ControlSignal


# ---------------------------------------------------------------------------
# right-hand sides
# ---------------------------------------------------------------------------

def sigma_H_rhs(field: LinearField, inputs: Sequence[AlgebraElement],
                omega, g: GroupElement) -> np.ndarray:
    """Upstairs rhs: linear drift plus control-weighted invariant fields."""
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if w.size != len(inputs):
        raise ValueError(f"got {w.size} controls for {len(inputs)} input fields")
    rhs = make_sigma_H_rhs(field, inputs)
    return rhs(g.as_vector(), w)


def make_sigma_H_rhs(field: LinearField,
                     inputs: Sequence[AlgebraElement]) -> Callable:
    """Compile the upstairs rhs to a plain (state, omega) -> derivative callable."""
    A = field.A
    eta = field.eta
    trA = field.trace
    zetas = np.array([b.zeta for b in inputs])   # (m, 2)
    alphas = np.array([b.alpha for b in inputs])  # (m,)

    def rhs(state: np.ndarray, omega: np.ndarray) -> np.ndarray:
        x, y, z = state
        zw = omega @ zetas if len(zetas) else np.zeros(2)
        aw = float(omega @ alphas) if len(alphas) else 0.0
        out = np.empty(3)
        out[0] = A[0, 0] * x + A[0, 1] * y + zw[0]
        out[1] = A[1, 0] * x + A[1, 1] * y + zw[1]
        # center: <eta, v> + z trA + sum w_j (alpha_j + <v, theta zeta_j>/2)
        out[2] = (eta[0] * x + eta[1] * y + z * trA + aw
                  + 0.5 * (y * zw[0] - x * zw[1]))
        return out

    return rhs


def induced_drift_1p(p: int, field: LinearField, tol: float = 1e-9):
    """Coefficients of the drift induced on the chart of R e1 x Zp.

    Requires flow invariance of the subgroup.  Returns (lam, alpha, gamma)
    for p=1 and (lam, beta, alpha, gamma) for p=0, read off the blocks as
    lam = A[0,0], beta = A[1,1], alpha = A[0,1], gamma = eta[1].
    """
    sub = Subgroup.line_times_lattice(p)
    if not is_invariant(sub, field, tol):
        raise ValueError(f"field does not leave {sub.label} invariant")
    lam = float(field.A[0, 0])
    alpha = float(field.A[0, 1])
    gamma = float(field.eta[1])
    if p == 1:
        return lam, alpha, gamma
    return lam, float(field.A[1, 1]), alpha, gamma


def induced_invariant_1p(b: AlgebraElement) -> tuple:
    """Coefficients (a, b, c) of the invariant field induced on either 1-D chart."""
    return float(b.zeta[0]), float(b.zeta[1]), float(b.alpha)


def induced_sigma11_params(field: LinearField, b: AlgebraElement,
                           tol: float = 1e-9) -> Sigma11Params:
    """Assemble one-input chart parameters from an invariant upstairs pair."""
    lam, alpha, gamma = induced_drift_1p(1, field, tol)
    a, bb, c = induced_invariant_1p(b)
    return Sigma11Params(lam=lam, b=bb, a=a, c=c, alpha=alpha, gamma=gamma)


def sigma_11_rhs(params: Sigma11Params, omega: float, state) -> np.ndarray:
    """One-input rhs on R x T at state (s, t)."""
    s = float(state[0])
    w = float(omega)
    return np.array([
        -params.lam * s + w * params.b,
        0.5 * params.alpha * s * s + params.gamma * s + w * (params.c + params.a * s),
    ])


def sigma_10_rhs(params: Sigma10Params, omega, state) -> np.ndarray:
    """Three-input rhs on R^2 at state (s, t)."""
    w = np.asarray(omega, dtype=float)
    if w.shape != (3,):
        raise ValueError("sigma_10 takes a 3-vector control")
    s, t = float(state[0]), float(state[1])
    wa = float(w @ params.a)
    wb = float(w @ params.b)
    wc = float(w @ params.c)
    return np.array([
        params.beta * s + wb,
        (params.lam + params.beta) * t + 0.5 * params.alpha * s * s
        + params.gamma * s + wc + wa * s,
    ])


def sigma_0p_rhs(params: Sigma0pParams, omega, state) -> np.ndarray:
    """Three-input rhs on the (u, s, t) chart; u and (for p=1) t wrap downstream."""
    w = np.asarray(omega, dtype=float)
    if w.shape != (3,):
        raise ValueError("sigma_0p takes a 3-vector control")
    s, t = float(state[1]), float(state[2])
    wa = float(w @ params.a)
    wb = float(w @ params.b)
    wc = float(w @ params.c)
    pb = params.p * params.beta
    return np.array([
        params.alpha * s + wa,
        pb * s + wb,
        pb * t + 0.5 * params.alpha * s * s + params.gamma * s + wc + wa * s,
    ])


def make_induced_rhs_1p(p: int, field: LinearField,
                        inputs: Sequence[AlgebraElement],
                        tol: float = 1e-9) -> Callable:
    """Compile the m-input chart rhs induced by an invariant upstairs system."""
    coeffs = induced_drift_1p(p, field, tol)
    if p == 1:
        lam, alpha, gamma = coeffs
        beta = -lam
        t_lin = 0.0
    else:
        lam, beta, alpha, gamma = coeffs
        t_lin = lam + beta
    abc = np.array([induced_invariant_1p(b) for b in inputs])  # (m, 3)
    a_vec, b_vec, c_vec = (abc.T if len(abc) else np.zeros((3, 0)))

    def rhs(state: np.ndarray, omega: np.ndarray) -> np.ndarray:
        s, t = state
        wa = float(omega @ a_vec)
        wb = float(omega @ b_vec)
        wc = float(omega @ c_vec)
        return np.array([
            beta * s + wb,
            t_lin * t + 0.5 * alpha * s * s + gamma * s + wc + wa * s,
        ])

    return rhs


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------

def _rk4_step(rhs: Callable, state: np.ndarray, omega: np.ndarray,
              h: float) -> np.ndarray:
    k1 = rhs(state, omega)
    k2 = rhs(state + 0.5 * h * k1, omega)
    k3 = rhs(state + 0.5 * h * k2, omega)
    k4 = rhs(state + h * k3, omega)
    return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(rhs: Callable, q0, signal: ControlSignal, dt: float,
              wrap: Sequence[int] = ()) -> Trajectory:
    """Integrate a piecewise-constant-control system with fixed-step RK4.

    ``rhs(state, omega)`` must return the state derivative.  Indices in
    ``wrap`` are reduced mod 1 after every step (and on the initial
    state), so torus charts stay in [0, 1).  Raises IntegrationError as
    soon as the state stops being finite.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if dt > signal.shortest_piece + 1e-12:
        raise ValueError("dt must not exceed the shortest signal piece")
    state = np.asarray(q0, dtype=float).copy()
    for i in wrap:
        state[i] -= np.floor(state[i])
    times = [0.0]
    states = [state.copy()]
    elapsed = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for duration, omega in signal.pieces:
            n_full = int(np.floor(duration / dt + 1e-9))
            rem = duration - n_full * dt
            steps = [dt] * n_full + ([rem] if rem > 1e-9 * dt else [])
            for h in steps:
                state = _rk4_step(rhs, state, omega, h)
                for i in wrap:
                    state[i] -= np.floor(state[i])
                elapsed += h
                if not np.all(np.isfinite(state)):
                    raise IntegrationError(elapsed)
                times.append(elapsed)
                states.append(state.copy())
    return Trajectory(np.array(times), np.array(states), signal)


def sigma_R_closed_form(lam: float, b: float, s0: float, omega: float,
                        tau: float) -> float:
    """Exact solution of ds = -lam*s + b*omega from s0 after time tau."""
    if lam == 0.0:
        return s0 + b * omega * tau
    fp = b * omega / lam
    return float(np.exp(-tau * lam) * (s0 - fp) + fp)


def conjugation_residual(field: LinearField, inputs: Sequence[AlgebraElement],
                         p: int, g0: GroupElement, signal: ControlSignal,
                         dt: float = 1e-3) -> float:
    """Max chart distance between the projected upstairs flow and the induced flow.

    Both systems are integrated under the same signal; the distance is
    max(|ds|, |dt|) with the circular metric on the torus factor.  Small
    residuals certify the semiconjugacy numerically.
    """
    up_rhs = make_sigma_H_rhs(field, inputs)
    down_rhs = make_induced_rhs_1p(p, field, inputs)
    up = integrate(up_rhs, g0.as_vector(), signal, dt)
    q0 = project_1p(p, g0)
    wrap = (1,) if p == 1 else ()
    down = integrate(down_rhs, np.array([q0.s, q0.t]), signal, dt, wrap=wrap)
    worst = 0.0
    for up_state, down_state in zip(up.states, down.states):
        proj = project_1p(p, GroupElement.from_vector(up_state))
        ds = abs(proj.s - down_state[0])
        if p == 1:
            dtt = circ_dist(proj.t, down_state[1])
        else:
            dtt = abs(proj.t - down_state[1])
        worst = max(worst, ds, dtt)
    return worst
