import numpy as np
import pytest

from heisencontrol.analysis import (
    GridConfig,
    IntervalSet,
    control_set_estimate,
    control_set_sigma_11,
    control_set_sigma_R,
    default_grid_config,
    larc_numeric_rank,
    larc_predicate,
    larc_terms,
    p_polynomial,
    perimeter_cell_count,
    predicted_occupancy,
    q_polynomial,
    reachable_grid,
    symmetric_difference_cells,
)
from heisencontrol.systems import ControlBox, Sigma11Params, sigma_11_rhs, sigma_R_closed_form

BOX = ControlBox.interval(-1.0, 1.0)


def random_params(rng) -> Sigma11Params:
    lam, b, a, c, alpha, gamma = rng.uniform(-2, 2, 6)
    if rng.random() < 0.5:
        alpha = 0.0
    else:
        gamma = 0.0
    return Sigma11Params(lam=lam, b=b, a=a, c=c, alpha=alpha, gamma=gamma)


def generic_state(rng):
    s = float(rng.choice([-1.0, 1.0]) * 10.0 ** rng.uniform(-1, 1))
    return (s, float(rng.uniform(0, 1)))


# ---------------------------------------------------------------------------
# rank condition
# ---------------------------------------------------------------------------

def test_larc_predicate_examples():
    assert larc_predicate(Sigma11Params(lam=1, b=1, a=1))
    assert not larc_predicate(Sigma11Params(lam=0.7, b=0, a=1, c=2, gamma=3))
    assert larc_predicate(Sigma11Params(lam=1, b=1, gamma=1))


def test_larc_terms_values():
    t1, t2 = larc_terms(Sigma11Params(lam=1, b=1, a=1))
    assert (t1, t2) == (2.0, 0.0)


def test_larc_numeric_rank_examples():
    good = Sigma11Params(lam=1, b=1, a=1)
    assert larc_numeric_rank(good, (0.37, 0.21)) == 2
    flat = Sigma11Params(lam=0, b=1)
    rng = np.random.default_rng(0)
    for _ in range(10):
        assert larc_numeric_rank(flat, generic_state(rng)) == 1


def test_larc_numeric_rank_rejects_shallow_depth():
    with pytest.raises(ValueError):
        larc_numeric_rank(Sigma11Params(lam=1, b=1), (1.0, 0.0), depth=1)


def test_larc_predicate_agrees_with_rank_oracle():
    rng = np.random.default_rng(1)
    checked = 0
    while checked < 100:
        params = random_params(rng)
        t1, t2 = larc_terms(params)
        if abs(t1) < 1e-10 and abs(t2) < 1e-10:
            continue
        checked += 1
        expected = 2 if larc_predicate(params) else 1
        for _ in range(10):
            assert larc_numeric_rank(params, generic_state(rng), 3) == expected


# ---------------------------------------------------------------------------
# closed-form control sets
# ---------------------------------------------------------------------------

def test_control_set_sigma_R_three_cases():
    c = control_set_sigma_R(1.0, 2.0, BOX)
    assert (c.lo, c.hi, c.closed_lo, c.closed_hi) == (-2.0, 2.0, True, True)
    c = control_set_sigma_R(-1.0, 2.0, BOX)
    assert (c.lo, c.hi, c.closed_lo, c.closed_hi) == (-2.0, 2.0, False, False)
    c = control_set_sigma_R(0.0, 1.0, BOX)
    assert c.whole_line


def test_control_set_sigma_R_rejects_degenerate():
    with pytest.raises(ValueError):
        control_set_sigma_R(1.0, 0.0, BOX)
    with pytest.raises(ValueError):
        control_set_sigma_R(1.0, 1.0, ControlBox(np.array([-1, -1]), np.array([1, 1])))


def test_control_set_sigma_11_examples():
    d = control_set_sigma_11(Sigma11Params(lam=1, b=1, a=1), BOX)
    assert d.times_torus and (d.base.lo, d.base.hi) == (-1.0, 1.0) and d.base.closed_lo
    d = control_set_sigma_11(Sigma11Params(lam=0, b=1, gamma=1), BOX)
    assert d.base.whole_line
    d = control_set_sigma_11(Sigma11Params(lam=-1, b=1, c=1), BOX)
    assert (d.base.lo, d.base.hi, d.base.closed_lo) == (-1.0, 1.0, False)


def test_control_set_sigma_11_rejects_rank_deficient():
    with pytest.raises(ValueError):
        control_set_sigma_11(Sigma11Params(lam=1, b=1), BOX)  # all criterion terms vanish
    with pytest.raises(ValueError):
        control_set_sigma_11(Sigma11Params(lam=1, b=0, a=1), BOX)


def test_p_polynomial():
    params = Sigma11Params(lam=1, b=1, a=1)
    assert p_polynomial(params, 0.0) == 0.0
    assert p_polynomial(params, 2.0) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        p_polynomial(Sigma11Params(lam=0, b=1, a=1), 1.0)
    rng = np.random.default_rng(2)
    for _ in range(50):
        params = random_params(rng)
        if params.lam == 0.0 or not larc_predicate(params):
            continue
        quad = params.b / (2 * params.lam ** 2) * (params.b * params.alpha + 2 * params.a * params.lam)
        lin = (params.b * params.gamma + params.c * params.lam) / params.lam
        assert max(abs(quad), abs(lin)) > 1e-12  # nontrivial polynomial under the rank condition


def test_q_polynomial():
    assert q_polynomial(Sigma11Params(lam=1, b=1), 0.0) == 0.0
    assert q_polynomial(Sigma11Params(lam=1, b=1, alpha=2), 3.0) == pytest.approx(9.0)
    params = Sigma11Params(lam=1, b=1, gamma=1)
    rng = np.random.default_rng(3)
    for _ in range(20):
        s = rng.uniform(-5, 5)
        assert q_polynomial(params, s) == pytest.approx(s)


# ---------------------------------------------------------------------------
# scalar-system trajectory facts used by the control-set claims
# ---------------------------------------------------------------------------

def test_positive_invariance_for_contracting_drift():
    lam, b = 1.0, 2.0
    c = control_set_sigma_R(lam, b, BOX)
    rng = np.random.default_rng(4)
    for _ in range(1000):
        s0 = rng.uniform(c.lo, c.hi)
        w = rng.uniform(-1, 1)
        tau = rng.uniform(0, 10)
        assert c.contains(sigma_R_closed_form(lam, b, s0, w, tau), tol=1e-12)


def test_no_recurrence_outside_control_set():
    lam, b = 1.0, 2.0
    hi = b / lam * BOX.upper[0]
    rng = np.random.default_rng(5)
    for _ in range(1000):
        s0 = hi + rng.uniform(0.01, 5.0)
        w = rng.uniform(-1, 1)
        tau = rng.uniform(1e-6, 10)
        assert sigma_R_closed_form(lam, b, s0, w, tau) <= s0


def test_fixed_points_of_scalar_system():
    rng = np.random.default_rng(6)
    for _ in range(100):
        lam = rng.uniform(0.1, 3.0) * rng.choice([-1.0, 1.0])
        b = rng.uniform(0.1, 3.0) * rng.choice([-1.0, 1.0])
        w = rng.uniform(-1, 1)
        params = Sigma11Params(lam=lam, b=b)
        fp = b * w / lam
        assert abs(sigma_11_rhs(params, w, (fp, 0.0))[0]) < 1e-14


# ---------------------------------------------------------------------------
# grid estimation
# ---------------------------------------------------------------------------

def test_grid_config_validation():
    with pytest.raises(ValueError):
        GridConfig(s_lo=1.0, s_hi=-1.0)
    with pytest.raises(ValueError):
        GridConfig(s_lo=-1.0, s_hi=1.0, s_cells=4)
    cfg = GridConfig(s_lo=-2.0, s_hi=2.0, s_cells=100, t_cells=50)
    assert cfg.cell_width == pytest.approx(0.04)
    assert cfg.cell_of(0.0, 0.99) == (50, 49)
    with pytest.raises(ValueError):
        cfg.cell_of(3.0, 0.0)


def test_default_grid_window_pads_closed_form():
    cfg = default_grid_config(Sigma11Params(lam=1, b=1, a=1), BOX)
    assert (cfg.s_lo, cfg.s_hi) == (-2.0, 2.0)
    cfg = default_grid_config(Sigma11Params(lam=0, b=1, gamma=1), BOX)
    assert (cfg.s_lo, cfg.s_hi) == (-3.0, 3.0)


def test_reachable_grid_zero_horizon_is_seed_only():
    params = Sigma11Params(lam=1, b=1, a=1)
    cfg = GridConfig(s_lo=-2, s_hi=2, s_cells=40, t_cells=40)
    est = reachable_grid(params, BOX, (0.0, 0.0), 1e-6, cfg)
    assert est.occupied_count == 1
    i, j = cfg.cell_of(0.0, 0.0)
    assert est.occupancy[i, j]


def test_reachable_grid_contracts_from_outside():
    # starting right of the control set, the s-support only shrinks leftward
    params = Sigma11Params(lam=1, b=1)
    cfg = GridConfig(s_lo=-6, s_hi=6, s_cells=120, t_cells=16)
    est = reachable_grid(params, BOX, (5.0, 0.0), 30.0, cfg)
    lo, hi = est.s_support()
    assert hi <= 5.0 + 2 * cfg.cell_width
    assert lo >= -1.0 - 2 * cfg.cell_width
    # t never moves for this parameter set: a single row stays occupied
    assert est.t_rows_occupied() == 1


def test_control_set_estimate_matches_closed_form_contracting():
    params = Sigma11Params(lam=1, b=1, a=1)
    cfg = GridConfig(s_lo=-2, s_hi=2, s_cells=64, t_cells=64)
    est, diag = control_set_estimate(params, BOX, cfg, horizon=20.0)
    assert not diag["empty_intersection"]
    assert diag["larc"]
    target = control_set_sigma_11(params, BOX).base
    assert symmetric_difference_cells(est, target) <= perimeter_cell_count(cfg, target)


def test_control_set_estimate_matches_closed_form_expanding():
    params = Sigma11Params(lam=-1, b=1, c=1)
    cfg = GridConfig(s_lo=-2, s_hi=2, s_cells=64, t_cells=64)
    est, diag = control_set_estimate(params, BOX, cfg, horizon=20.0)
    target = control_set_sigma_11(params, BOX).base
    assert symmetric_difference_cells(est, target) <= perimeter_cell_count(cfg, target)
    assert diag["forward_escaped"]  # the unstable drift leaves the window


def test_control_set_estimate_fills_window_when_controllable():
    params = Sigma11Params(lam=0, b=1, gamma=1)
    cfg = GridConfig(s_lo=-3, s_hi=3, s_cells=48, t_cells=48)
    est, diag = control_set_estimate(params, BOX, cfg, horizon=20.0)
    assert est.occupancy.all()
    assert not diag["degenerate_t_band"]


def test_control_set_estimate_reports_degenerate_band():
    # with a = alpha = gamma = c = 0 the torus coordinate never moves
    params = Sigma11Params(lam=1, b=1)
    cfg = GridConfig(s_lo=-2, s_hi=2, s_cells=40, t_cells=40)
    est, diag = control_set_estimate(params, BOX, cfg, horizon=10.0)
    assert not diag["larc"]
    assert diag["degenerate_t_band"]
    assert diag["t_rows_occupied"] == 1


def test_predicted_occupancy_and_difference_helpers():
    cfg = GridConfig(s_lo=-2, s_hi=2, s_cells=40, t_cells=10)
    iv = IntervalSet.closed(-1.0, 1.0)
    ref = predicted_occupancy(cfg, iv)
    assert ref.shape == (40, 10)
    assert ref.sum() == 20 * 10  # half the columns
    est, _ = control_set_estimate(Sigma11Params(lam=1, b=1, a=1), BOX, cfg, horizon=15.0)
    assert symmetric_difference_cells(est, iv) <= perimeter_cell_count(cfg, iv)
