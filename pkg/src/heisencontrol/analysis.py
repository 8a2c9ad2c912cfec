"""Controllability analysis for the one-input system on R x T.

Three layers, each checkable against the next: the algebraic rank
criterion (a polynomial condition on the parameters), a numeric rank
oracle built from iterated Lie brackets with exact polynomial
Jacobians, and a grid flood-fill estimator of reachable and control
sets that needs no closed form at all.

The estimator expands frontier cells by integrating constant-control
trajectories from cell centers and marking every substep sample; the
substep is capped by both the dwell interval and a rate bound that
keeps consecutive samples within one cell, so swept cells are never
skipped.  Backward reachability integrates the negated field with the
same controls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .systems import ControlBox, Sigma11Params

NONZERO_TOL = 1e-12
RANK_SV_TOL = 1e-9


@dataclass(frozen=True)
class IntervalSet:
    """A real interval with endpoint openness flags, or the whole line."""

    lo: float
    hi: float
    closed_lo: bool = True
    closed_hi: bool = True
    whole_line: bool = False

    def __post_init__(self):
        if not self.whole_line and self.lo > self.hi:
            raise ValueError("interval endpoints must be ordered")

    @classmethod
    def closed(cls, lo: float, hi: float) -> "IntervalSet":
        return cls(float(lo), float(hi), True, True)

    @classmethod
    def open(cls, lo: float, hi: float) -> "IntervalSet":
        return cls(float(lo), float(hi), False, False)

    @classmethod
    def real_line(cls) -> "IntervalSet":
        return cls(-math.inf, math.inf, False, False, whole_line=True)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        if self.whole_line:
            return True
        return self.lo - tol <= x <= self.hi + tol

    @property
    def width(self) -> float:
        return math.inf if self.whole_line else self.hi - self.lo


@dataclass(frozen=True)
class ControlSetDescription:
    """A control set as an interval in s, optionally crossed with the torus."""

    base: IntervalSet
    times_torus: bool


def larc_terms(params: Sigma11Params) -> tuple[float, float]:
    """The two criterion terms b(2a*lam + b*alpha) and b(b*gamma + lam*c)."""
    t1 = params.b * (2.0 * params.a * params.lam + params.b * params.alpha)
    t2 = params.b * (params.b * params.gamma + params.lam * params.c)
    return t1, t2


def larc_predicate(params: Sigma11Params, tol: float = NONZERO_TOL) -> bool:
    """Rank condition: at least one criterion term is nonzero (|.| > tol)."""
    t1, t2 = larc_terms(params)
    return abs(t1) > tol or abs(t2) > tol


# ---------------------------------------------------------------------------
# numeric rank oracle from iterated brackets
# ---------------------------------------------------------------------------

def _poly_bracket(x, y):
    """Lie bracket of planar fields whose components are polynomials in s.

    Fields are (cs, ct) coefficient arrays; the t-coordinate never enters
    the components, so brackets close within this representation:
    [X, Y] = (Ys'*Xs - Xs'*Ys, Yt'*Xs - Xt'*Ys).
    """
    xs, xt = x
    ys, yt = y
    new_s = npoly.polysub(npoly.polymul(npoly.polyder(ys), xs),
                          npoly.polymul(npoly.polyder(xs), ys))
    new_t = npoly.polysub(npoly.polymul(npoly.polyder(yt), xs),
                          npoly.polymul(npoly.polyder(xt), ys))
    return npoly.polytrim(new_s, 0.0), npoly.polytrim(new_t, 0.0)


def sigma11_poly_fields(params: Sigma11Params):
    """Drift and input fields of the one-input system as s-polynomials."""
    drift = (np.array([0.0, -params.lam]),
             np.array([0.0, params.gamma, 0.5 * params.alpha]))
    control = (np.array([params.b]), np.array([params.c, params.a]))
    return drift, control


def larc_numeric_rank(params: Sigma11Params, state, depth: int = 3,
                      sv_tol: float = RANK_SV_TOL) -> int:
    """Rank of the bracket span at a state, computed from polynomial Jacobians.

    Generates left-normed brackets of the drift and input fields up to
    word length ``depth``, evaluates all of them at the state, and counts
    singular values above ``sv_tol``.
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    gens = list(sigma11_poly_fields(params))
    collected = list(gens)
    frontier = list(gens)
    for _ in range(depth - 1):
        frontier = [_poly_bracket(w, g) for w in frontier for g in gens]
        collected.extend(frontier)
    s = float(state[0])
    rows = np.array([[npoly.polyval(s, cs), npoly.polyval(s, ct)]
                     for cs, ct in collected])
    sv = np.linalg.svd(rows, compute_uv=False)
    return int(np.sum(sv > sv_tol))


# ---------------------------------------------------------------------------
# closed-form control sets
# ---------------------------------------------------------------------------

def control_set_sigma_R(lam: float, b: float, box: ControlBox) -> IntervalSet:
    """The unique control set of ds = -lam*s + b*w over the control box.

    Scaled box (b/lam)*Omega, closed for lam > 0, open for lam < 0, and
    the whole line for lam = 0.  Requires b != 0.
    """
    if box.m != 1:
        raise ValueError("the scalar system takes a one-input box")
    if b == 0.0:
        raise ValueError("b must be nonzero")
    if lam == 0.0:
        return IntervalSet.real_line()
    ends = sorted((b / lam * box.lower[0], b / lam * box.upper[0]))
    if lam > 0.0:
        return IntervalSet.closed(ends[0], ends[1])
    return IntervalSet.open(ends[0], ends[1])


def control_set_sigma_11(params: Sigma11Params, box: ControlBox) -> ControlSetDescription:
    """The unique control set of the one-input chart system: C_sigma_R x T.

    Valid under the rank condition; rejects b = 0 and rank-deficient
    parameter sets.
    """
    if params.b == 0.0:
        raise ValueError("b must be nonzero")
    if not larc_predicate(params):
        raise ValueError("rank condition fails; no closed-form control set")
    return ControlSetDescription(control_set_sigma_R(params.lam, params.b, box),
                                 times_torus=True)


def p_polynomial(params: Sigma11Params, omega: float) -> float:
    """Torus winding rate at the rest point of control omega (lam != 0)."""
    if params.lam == 0.0:
        raise ValueError("p polynomial requires lam != 0")
    lam, b = params.lam, params.b
    quad = b / (2.0 * lam * lam) * (b * params.alpha + 2.0 * params.a * lam)
    lin = (b * params.gamma + params.c * lam) / lam
    return quad * omega * omega + lin * omega


def q_polynomial(params: Sigma11Params, s: float) -> float:
    """Torus drift rate alpha*s^2/2 + gamma*s under zero control."""
    return 0.5 * params.alpha * s * s + params.gamma * s


# ---------------------------------------------------------------------------
# grid estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridConfig:
    """Occupancy-grid geometry and expansion controls.

    ``dwell`` is the sampling interval along expansion trajectories,
    ``expansion_time`` their total length per (cell, control) pair.
    """

    s_lo: float
    s_hi: float
    s_cells: int = 200
    t_cells: int = 200
    control_levels: int = 9
    dwell: float = 0.05
    expansion_time: float = 1.0

    def __post_init__(self):
        if not self.s_lo < self.s_hi:
            raise ValueError("need s_lo < s_hi")
        if self.s_cells < 8 or self.t_cells < 8:
            raise ValueError("grid resolution must be at least 8 cells per axis")
        if self.control_levels < 2:
            raise ValueError("need at least 2 control levels")
        if self.dwell <= 0.0 or self.expansion_time <= 0.0:
            raise ValueError("dwell and expansion_time must be positive")

    @property
    def cell_width(self) -> float:
        return (self.s_hi - self.s_lo) / self.s_cells

    @property
    def cell_height(self) -> float:
        return 1.0 / self.t_cells

    def cell_of(self, s: float, t: float) -> tuple[int, int]:
        if not self.s_lo <= s < self.s_hi:
            raise ValueError(f"s={s} outside the grid window [{self.s_lo}, {self.s_hi})")
        i = min(int((s - self.s_lo) / self.cell_width), self.s_cells - 1)
        j = int((t - math.floor(t)) * self.t_cells) % self.t_cells
        return i, j


def default_grid_config(params: Sigma11Params, box: ControlBox,
                        pad: float = 1.0, fallback_halfwidth: float = 3.0,
                        **overrides) -> GridConfig:
    """Window the grid around the closed-form control set when one exists."""
    if params.b != 0.0 and params.lam != 0.0:
        c = control_set_sigma_R(params.lam, params.b, box)
        lo, hi = c.lo - pad, c.hi + pad
    else:
        lo, hi = -fallback_halfwidth, fallback_halfwidth
    return GridConfig(s_lo=lo, s_hi=hi, **overrides)


@dataclass(frozen=True)
class RegionEstimate:
    """Occupancy grid over the (s, t) chart plus run metadata."""

    config: GridConfig
    occupancy: np.ndarray
    horizon: float
    seed_state: tuple
    backward: bool = False
    escaped: bool = False
    substep: float = 0.0
    metadata: dict = dc_field(default_factory=dict)

    @property
    def occupied_count(self) -> int:
        return int(self.occupancy.sum())

    def s_support(self) -> tuple[float, float]:
        """Outer s-edges of the occupied columns."""
        cols = np.flatnonzero(self.occupancy.any(axis=1))
        if cols.size == 0:
            return math.nan, math.nan
        cfg = self.config
        return (cfg.s_lo + cols[0] * cfg.cell_width,
                cfg.s_lo + (cols[-1] + 1) * cfg.cell_width)

    def t_rows_occupied(self) -> int:
        return int(self.occupancy.any(axis=0).sum())

    def bounding_box(self) -> dict:
        lo, hi = self.s_support()
        return {"s_min": lo, "s_max": hi,
                "t_rows_occupied": self.t_rows_occupied(),
                "t_cells": self.config.t_cells}


def _sigma11_rates(params: Sigma11Params, box: ControlBox, cfg: GridConfig):
    """Worst-case |ds/dt| and |dt/dt| over the window and control box."""
    smax = max(abs(cfg.s_lo), abs(cfg.s_hi))
    wmax = max(abs(box.lower[0]), abs(box.upper[0]))
    r_s = abs(params.lam) * smax + wmax * abs(params.b)
    r_t = (0.5 * abs(params.alpha) * smax * smax + abs(params.gamma) * smax
           + wmax * (abs(params.c) + abs(params.a) * smax))
    return r_s, r_t


def reachable_grid(params: Sigma11Params, box: ControlBox, q0,
                   horizon: float, config: GridConfig | None = None,
                   backward: bool = False) -> RegionEstimate:
    """Flood-fill estimate of the chart states reachable from ``q0`` by time ``horizon``.

    Frontier cells are expanded by integrating their centers under each
    control level; every substep sample within the remaining time budget
    marks its cell.  Samples leaving the s-window are dropped and flagged.
    """
    if box.m != 1:
        raise ValueError("grid estimation takes a one-input box")
    if horizon < 0.0:
        raise ValueError("horizon must be nonnegative")
    cfg = config if config is not None else default_grid_config(params, box)
    levels = box.levels(cfg.control_levels)

    sgn = -1.0 if backward else 1.0
    lam, b, a, c = params.lam, params.b, params.a, params.c
    alpha, gamma = params.alpha, params.gamma

    def step(s, t, w, h):
        # vectorized RK4 for ds = sgn*(-lam*s + w*b), dt = sgn*(q(s) + w*(c + a*s))
        def f(si):
            return (sgn * (-lam * si + w * b),
                    sgn * (0.5 * alpha * si * si + gamma * si + w * (c + a * si)))
        k1s, k1t = f(s)
        k2s, k2t = f(s + 0.5 * h * k1s)
        k3s, k3t = f(s + 0.5 * h * k2s)
        k4s, k4t = f(s + h * k3s)
        return (s + (h / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s),
                t + (h / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t))

    r_s, r_t = _sigma11_rates(params, box, cfg)
    dt_sub = cfg.dwell
    if r_s > 0.0:
        dt_sub = min(dt_sub, cfg.cell_width / r_s)
    if r_t > 0.0:
        dt_sub = min(dt_sub, cfg.cell_height / r_t)
    dt_sub = max(dt_sub, cfg.dwell / 500.0)
    n_sub = int(math.ceil(cfg.expansion_time / dt_sub))

    n_cells = cfg.s_cells * cfg.t_cells
    occ = np.zeros(n_cells, dtype=bool)
    elapsed = np.full(n_cells, np.inf)
    i0, j0 = cfg.cell_of(float(q0[0]), float(q0[1]))
    seed_flat = i0 * cfg.t_cells + j0
    occ[seed_flat] = True
    elapsed[seed_flat] = 0.0
    escaped = False

    frontier = np.array([seed_flat])
    while frontier.size:
        cols = frontier // cfg.t_cells
        rows = frontier % cfg.t_cells
        s0 = cfg.s_lo + (cols + 0.5) * cfg.cell_width
        t0 = (rows + 0.5) * cfg.cell_height
        e0 = elapsed[frontier]
        nL = levels.size
        s = np.repeat(s0, nL)
        t = np.repeat(t0, nL)
        w = np.tile(levels, frontier.size)
        budget = horizon - np.repeat(e0, nL)
        round_new = np.zeros(n_cells, dtype=bool)
        for k in range(1, n_sub + 1):
            tk = k * dt_sub
            if not np.any(budget >= tk):
                break
            s, t = step(s, t, w, dt_sub)
            t = np.mod(t, 1.0)
            finite = np.isfinite(s) & np.isfinite(t)
            active = (budget >= tk) & finite
            inwin = (s >= cfg.s_lo) & (s < cfg.s_hi)
            if np.any(active & ~inwin):
                escaped = True
            ok = active & inwin
            if not np.any(ok):
                continue
            ii = ((s[ok] - cfg.s_lo) / cfg.cell_width).astype(np.intp)
            np.clip(ii, 0, cfg.s_cells - 1, out=ii)
            jj = (t[ok] * cfg.t_cells).astype(np.intp) % cfg.t_cells
            flat = ii * cfg.t_cells + jj
            fresh = ~occ[flat]
            if np.any(fresh):
                hit = flat[fresh]
                occ[hit] = True
                round_new[hit] = True
                np.minimum.at(elapsed, hit, (horizon - budget[ok][fresh]) + tk)
        frontier = np.flatnonzero(round_new)

    return RegionEstimate(
        config=cfg,
        occupancy=occ.reshape(cfg.s_cells, cfg.t_cells),
        horizon=float(horizon),
        seed_state=(float(q0[0]), float(q0[1])),
        backward=backward,
        escaped=escaped,
        substep=dt_sub,
        metadata={"control_levels": cfg.control_levels, "dwell": cfg.dwell,
                  "expansion_time": cfg.expansion_time, "substeps": n_sub},
    )


def control_set_estimate(params: Sigma11Params, box: ControlBox,
                         config: GridConfig | None = None,
                         horizon: float = 20.0,
                         seed_state=None) -> tuple[RegionEstimate, dict]:
    """Estimate the control set as forward-reachable AND backward-reachable cells.

    The seed defaults to the middle of the closed-form prediction when one
    exists, otherwise to the middle of the window.  Returns the grid
    intersection together with diagnostics; an empty intersection is
    reported there rather than raised.
    """
    cfg = config if config is not None else default_grid_config(params, box)
    if seed_state is None:
        if params.b != 0.0 and params.lam != 0.0:
            c = control_set_sigma_R(params.lam, params.b, box)
            seed_state = (0.5 * (c.lo + c.hi), 0.0)
        else:
            seed_state = (0.5 * (cfg.s_lo + cfg.s_hi), 0.0)
    forward = reachable_grid(params, box, seed_state, horizon, cfg, backward=False)
    backward = reachable_grid(params, box, seed_state, horizon, cfg, backward=True)
    occ = forward.occupancy & backward.occupancy
    estimate = RegionEstimate(
        config=cfg,
        occupancy=occ,
        horizon=float(horizon),
        seed_state=(float(seed_state[0]), float(seed_state[1])),
        backward=False,
        escaped=forward.escaped or backward.escaped,
        substep=forward.substep,
        metadata=dict(forward.metadata),
    )
    t_rows = estimate.t_rows_occupied()
    diagnostics = {
        "empty_intersection": not bool(occ.any()),
        "forward_escaped": forward.escaped,
        "backward_escaped": backward.escaped,
        "seed_state": estimate.seed_state,
        "t_rows_occupied": t_rows,
        "degenerate_t_band": bool(0 < t_rows <= max(3, estimate.config.t_cells // 50)),
        "larc": larc_predicate(params),
    }
    return estimate, diagnostics


def predicted_occupancy(cfg: GridConfig, interval: IntervalSet) -> np.ndarray:
    """Cells whose center lies in interval x T; reference for grid comparisons."""
    centers = cfg.s_lo + (np.arange(cfg.s_cells) + 0.5) * cfg.cell_width
    if interval.whole_line:
        cols = np.ones(cfg.s_cells, dtype=bool)
    else:
        cols = (centers >= interval.lo) & (centers <= interval.hi)
    return np.repeat(cols[:, None], cfg.t_cells, axis=1)


def symmetric_difference_cells(estimate: RegionEstimate,
                               interval: IntervalSet) -> int:
    """Cell count of the symmetric difference against interval x T."""
    return int(np.logical_xor(estimate.occupancy,
                              predicted_occupancy(estimate.config, interval)).sum())


def perimeter_cell_count(cfg: GridConfig, interval: IntervalSet) -> int:
    """Cells on the boundary of interval x T: two columns (torus rows have no boundary)."""
    return 2 * cfg.t_cells
