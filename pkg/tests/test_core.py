import numpy as np
import pytest

from heisencontrol.core import (
    AlgebraElement,
    GroupAutomorphism,
    GroupElement,
    LinearField,
    apply_automorphism,
    bracket,
    derivation_apply,
    flow,
    flow_automorphism,
    flow_matrix,
    inverse,
    lambda_operator,
    left_invariant_eval,
    linear_field_eval,
    multiply,
    theta,
)


def ge(x, y, z):
    return GroupElement(np.array([float(x), float(y)]), float(z))


def ae(zx, zy, a):
    return AlgebraElement(np.array([float(zx), float(zy)]), float(a))


def taylor_expm(M, terms=30):
    """Independent oracle: scaling-and-squaring with a plain Taylor series."""
    n = M.shape[0]
    nrm = np.abs(M).sum(axis=1).max()
    s = 0
    while nrm / (2.0 ** s) > 0.25:
        s += 1
    S = M / (2.0 ** s)
    E = np.eye(n)
    term = np.eye(n)
    for k in range(1, terms + 1):
        term = term @ S / k
        E = E + term
    for _ in range(s):
        E = E @ E
    return E


def random_field(rng, scale=1.0):
    return LinearField(rng.uniform(-scale, scale, (2, 2)),
                       rng.uniform(-scale, scale, 2))


def random_element(rng, scale=2.0):
    return GroupElement(rng.uniform(-scale, scale, 2), rng.uniform(-scale, scale))


# ---------------------------------------------------------------------------
# product, inverse, bracket
# ---------------------------------------------------------------------------

def test_multiply_hand_value():
    # theta(0,1) = (-1,0), so the center picks up -1/2
    g = multiply(ge(1, 0, 0), ge(0, 1, 0))
    assert np.allclose(g.v, [1, 1])
    assert g.z == pytest.approx(-0.5, abs=1e-15)


def test_multiply_identity():
    g = multiply(GroupElement.identity(), ge(3, 4, 7))
    assert np.allclose(g.v, [3, 4]) and g.z == 7


def test_inverse_values_and_axiom():
    gi = inverse(ge(1, 2, 3))
    assert np.allclose(gi.v, [-1, -2]) and gi.z == -3
    rng = np.random.default_rng(1)
    for _ in range(100):
        g = random_element(rng)
        e = multiply(g, inverse(g))
        assert np.abs(e.as_vector()).max() < 1e-12
        gg = inverse(inverse(g))
        assert np.allclose(gg.as_vector(), g.as_vector())


def test_group_axioms():
    rng = np.random.default_rng(2)
    for _ in range(200):
        a, b, c = (random_element(rng) for _ in range(3))
        lhs = multiply(multiply(a, b), c)
        rhs = multiply(a, multiply(b, c))
        assert np.abs(lhs.as_vector() - rhs.as_vector()).max() < 1e-12
        assert np.abs(multiply(a, GroupElement.identity()).as_vector()
                      - a.as_vector()).max() < 1e-12


def test_theta_skew():
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = rng.uniform(-10, 10, 2)
        assert abs(np.dot(v, theta(v))) < 1e-12


def test_bracket_values():
    out = bracket(ae(1, 0, 0), ae(0, 1, 0))
    assert np.allclose(out.zeta, 0) and out.alpha == pytest.approx(-1.0)
    rng = np.random.default_rng(4)
    for _ in range(50):
        b = AlgebraElement(rng.uniform(-3, 3, 2), rng.uniform(-3, 3))
        self_bracket = bracket(b, b)
        assert abs(self_bracket.alpha) < 1e-12
        central = bracket(ae(0, 0, 1), b)
        assert abs(central.alpha) < 1e-12 and np.allclose(central.zeta, 0)


def test_leibniz_rule_on_basis():
    basis = [ae(1, 0, 0), ae(0, 1, 0), ae(0, 0, 1)]
    rng = np.random.default_rng(5)
    for _ in range(20):
        field = random_field(rng, 2.0)
        for b1 in basis:
            for b2 in basis:
                lhs = derivation_apply(field, bracket(b1, b2))
                r1 = bracket(derivation_apply(field, b1), b2)
                r2 = bracket(b1, derivation_apply(field, b2))
                assert abs(lhs.alpha - r1.alpha - r2.alpha) < 1e-12
                assert np.abs(lhs.zeta - r1.zeta - r2.zeta).max() < 1e-12


# ---------------------------------------------------------------------------
# vector field evaluation
# ---------------------------------------------------------------------------

def test_left_invariant_eval():
    assert np.allclose(left_invariant_eval(ae(1, 0, 0), GroupElement.identity()),
                       [1, 0, 0])
    assert np.allclose(left_invariant_eval(ae(1, 0, 0), ge(0, 2, 0)), [1, 0, 1])
    rng = np.random.default_rng(6)
    for _ in range(20):
        g = random_element(rng)
        assert np.allclose(left_invariant_eval(ae(0, 0, 0.7), g), [0, 0, 0.7])


def test_linear_field_eval():
    rng = np.random.default_rng(7)
    for _ in range(20):
        field = random_field(rng)
        assert np.allclose(linear_field_eval(field, GroupElement.identity()), 0)
    f = LinearField(np.array([[1.0, 0.0], [0.0, -1.0]]), np.zeros(2))
    assert np.allclose(linear_field_eval(f, ge(2, 3, 5)), [2, -3, 0])
    f = LinearField(np.zeros((2, 2)), np.array([0.0, 1.0]))
    assert np.allclose(linear_field_eval(f, ge(1, 2, 0)), [0, 0, 2])


# ---------------------------------------------------------------------------
# Lambda operator and the flow matrix
# ---------------------------------------------------------------------------

def test_lambda_constant_integrand():
    rng = np.random.default_rng(8)
    for _ in range(20):
        eta = rng.uniform(-3, 3, 2)
        t = rng.uniform(-4, 4)
        assert np.allclose(lambda_operator(np.zeros((2, 2)), eta, t), t * eta,
                           atol=1e-12)


def test_lambda_identity_matrix():
    out = lambda_operator(np.eye(2), np.array([1.0, 0.0]), 1.0)
    assert out[0] == pytest.approx(np.e - 1.0, abs=1e-12)
    assert out[1] == pytest.approx(0.0, abs=1e-14)


def test_lambda_derivative_matches_integrand():
    # d/dt Lambda_t = exp(t B^T) eta, checked by central differences
    rng = np.random.default_rng(9)
    h = 1e-5
    for _ in range(20):
        B = rng.uniform(-1, 1, (2, 2))
        eta = rng.uniform(-1, 1, 2)
        t = rng.uniform(-2, 2)
        fd = (lambda_operator(B, eta, t + h) - lambda_operator(B, eta, t - h)) / (2 * h)
        exact = taylor_expm(t * B.T) @ eta
        assert np.abs(fd - exact).max() < 1e-6


def test_flow_matrix_at_zero_and_spot_value():
    rng = np.random.default_rng(10)
    assert np.allclose(flow_matrix(random_field(rng), 0.0), np.eye(3), atol=1e-14)
    f = LinearField(np.zeros((2, 2)), np.array([0.0, 1.0]))
    assert np.allclose(flow_matrix(f, 1.0),
                       [[1, 0, 0], [0, 1, 0], [0, 1, 1]], atol=1e-14)


def test_flow_matrix_vs_series_exponential():
    rng = np.random.default_rng(11)
    for _ in range(300):
        field = random_field(rng, 0.5)
        t = rng.uniform(-5, 5)
        M = flow_matrix(field, t)
        ref = taylor_expm(t * field.derivation_matrix())
        assert np.abs(M - ref).max() < 1e-10


def test_flow_matrix_group_law():
    rng = np.random.default_rng(12)
    for _ in range(50):
        field = random_field(rng, 0.8)
        s, t = rng.uniform(-2, 2, 2)
        lhs = flow_matrix(field, s + t)
        rhs = flow_matrix(field, s) @ flow_matrix(field, t)
        assert np.abs(lhs - rhs).max() < 1e-9


# ---------------------------------------------------------------------------
# flow
# ---------------------------------------------------------------------------

def test_flow_zero_field_is_identity():
    rng = np.random.default_rng(13)
    for _ in range(10):
        g = random_element(rng)
        out = flow(LinearField.zero(), rng.uniform(-5, 5), g)
        assert np.allclose(out.as_vector(), g.as_vector())


def test_flow_spot_value():
    f = LinearField(np.zeros((2, 2)), np.array([0.0, 1.0]))
    out = flow(f, 1.0, ge(1, 2, 0))
    assert np.allclose(out.as_vector(), [1, 2, 2])


def test_flow_matches_matrix_action():
    rng = np.random.default_rng(14)
    for _ in range(50):
        field = random_field(rng)
        t = rng.uniform(-3, 3)
        g = random_element(rng)
        via_matrix = flow_matrix(field, t) @ g.as_vector()
        assert np.allclose(flow(field, t, g).as_vector(), via_matrix, atol=1e-12)


def test_flow_automorphism_property():
    rng = np.random.default_rng(15)
    for _ in range(1000):
        field = random_field(rng)
        t = rng.uniform(-3, 3)
        g, h = random_element(rng), random_element(rng)
        lhs = flow(field, t, multiply(g, h))
        rhs = multiply(flow(field, t, g), flow(field, t, h))
        assert np.abs(lhs.as_vector() - rhs.as_vector()).max() < 1e-9


def test_flow_derivative_is_linear_field():
    # d/dt flow at t=0 equals the field, central differences at step 1e-5
    rng = np.random.default_rng(16)
    h = 1e-5
    for _ in range(50):
        field = random_field(rng)
        g = random_element(rng)
        fd = (flow(field, h, g).as_vector() - flow(field, -h, g).as_vector()) / (2 * h)
        assert np.abs(fd - linear_field_eval(field, g)).max() < 1e-6


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------

def test_automorphism_identity_and_spot_value():
    ident = GroupAutomorphism(np.eye(2), np.zeros(2))
    g = ge(2, -3, 0.5)
    assert np.allclose(apply_automorphism(ident, g).as_vector(), g.as_vector())
    psi = GroupAutomorphism(np.eye(2), np.array([1.0, 0.0]))
    out = apply_automorphism(psi, ge(2, 0, 0))
    assert np.allclose(out.as_vector(), [2, 0, 2])


def test_automorphism_rejects_singular_block():
    with pytest.raises(ValueError):
        GroupAutomorphism(np.zeros((2, 2)), np.zeros(2))


def test_automorphism_multiplicativity():
    rng = np.random.default_rng(17)
    for _ in range(100):
        P = rng.uniform(-2, 2, (2, 2))
        if abs(np.linalg.det(P)) < 1e-3:
            continue
        psi = GroupAutomorphism(P, rng.uniform(-2, 2, 2))
        g, h = random_element(rng), random_element(rng)
        lhs = apply_automorphism(psi, multiply(g, h))
        rhs = multiply(apply_automorphism(psi, g), apply_automorphism(psi, h))
        assert np.abs(lhs.as_vector() - rhs.as_vector()).max() < 1e-10


def test_flow_as_automorphism():
    rng = np.random.default_rng(18)
    for _ in range(30):
        field = random_field(rng)
        t = rng.uniform(-2, 2)
        psi = flow_automorphism(field, t)
        g = random_element(rng)
        assert np.abs(apply_automorphism(psi, g).as_vector()
                      - flow(field, t, g).as_vector()).max() < 1e-9


def test_finiteness_validation():
    with pytest.raises(ValueError):
        GroupElement(np.array([np.nan, 0.0]), 0.0)
    with pytest.raises(ValueError):
        LinearField(np.full((2, 2), np.inf), np.zeros(2))
