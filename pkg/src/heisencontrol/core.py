"""Exact arithmetic on the 3-D Heisenberg group.

The group is realized as R^2 x R with product

    (v1, z1) * (v2, z2) = (v1 + v2, z1 + z2 + <v1, theta v2> / 2),

where theta is the counter-clockwise quarter turn (x, y) -> (-y, x).
A linear vector field is encoded by a 2x2 block ``A`` and a 2-vector
``eta``; its flow has a closed form assembled from exp(t*A), the scalar
exp(t*tr A) and the integral operator

    Lambda_t(B, eta) = int_0^t exp(s * B^T) eta ds,

which is evaluated branch-free through an augmented-block matrix
exponential, so singular ``B`` needs no special casing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm


def theta(v: np.ndarray) -> np.ndarray:
    """Quarter-turn rotation (x, y) -> (-y, x)."""
    return np.array([-v[1], v[0]])


def _as_vec2(x, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (2,):
        raise ValueError(f"{name} must be a 2-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite")
    v.flags.writeable = False
    return v


def _as_mat2(x, name: str) -> np.ndarray:
    m = np.asarray(x, dtype=float)
    if m.shape != (2, 2):
        raise ValueError(f"{name} must be a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} must be finite")
    m.flags.writeable = False
    return m


def _as_scalar(x, name: str) -> float:
    s = float(x)
    if not np.isfinite(s):
        raise ValueError(f"{name} must be finite")
    return s


@dataclass(frozen=True)
class GroupElement:
    """A point (v, z) of the group, v in R^2 and z the center coordinate."""

    v: np.ndarray
    z: float

    def __post_init__(self):
        object.__setattr__(self, "v", _as_vec2(self.v, "v"))
        object.__setattr__(self, "z", _as_scalar(self.z, "z"))

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(np.zeros(2), 0.0)

    @classmethod
    def from_vector(cls, vec) -> "GroupElement":
        vec = np.asarray(vec, dtype=float)
        return cls(vec[:2], vec[2])

    def as_vector(self) -> np.ndarray:
        """Stack as the column vector (x, y, z) used by matrix actions."""
        return np.array([self.v[0], self.v[1], self.z])


@dataclass(frozen=True)
class AlgebraElement:
    """A Lie algebra element (zeta, alpha); generates a left-invariant field."""

    zeta: np.ndarray
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "zeta", _as_vec2(self.zeta, "zeta"))
        object.__setattr__(self, "alpha", _as_scalar(self.alpha, "alpha"))


@dataclass(frozen=True)
class LinearField:
    """A linear vector field, given by the blocks of its derivation matrix.

    The derivation acts on the algebra as the 3x3 matrix
    ``[[A, 0], [eta^T, tr A]]``; the same matrix generates the flow.
    """

    A: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _as_mat2(self.A, "A"))
        object.__setattr__(self, "eta", _as_vec2(self.eta, "eta"))

    @classmethod
    def zero(cls) -> "LinearField":
        return cls(np.zeros((2, 2)), np.zeros(2))

    @property
    def trace(self) -> float:
        return float(self.A[0, 0] + self.A[1, 1])

    def derivation_matrix(self) -> np.ndarray:
        D = np.zeros((3, 3))
        D[:2, :2] = self.A
        D[2, :2] = self.eta
        D[2, 2] = self.trace
        return D


@dataclass(frozen=True)
class GroupAutomorphism:
    """Automorphism (v, z) -> (P v, <eta, v> + z det P) with P invertible."""

    P: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "P", _as_mat2(self.P, "P"))
        object.__setattr__(self, "eta", _as_vec2(self.eta, "eta"))
        if abs(np.linalg.det(self.P)) < 1e-300:
            raise ValueError("automorphism block P must be invertible")

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.P))


def multiply(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """Group product (v1+v2, z1+z2+<v1, theta v2>/2)."""
    z = g1.z + g2.z + 0.5 * float(np.dot(g1.v, theta(g2.v)))
    return GroupElement(g1.v + g2.v, z)


def inverse(g: GroupElement) -> GroupElement:
    """Group inverse (-v, -z)."""
    return GroupElement(-g.v, -g.z)


def bracket(b1: AlgebraElement, b2: AlgebraElement) -> AlgebraElement:
    """Lie bracket [(z1, a1), (z2, a2)] = (0, <z1, theta z2>)."""
    return AlgebraElement(np.zeros(2), float(np.dot(b1.zeta, theta(b2.zeta))))


def left_invariant_eval(b: AlgebraElement, g: GroupElement) -> np.ndarray:
    """Value of the left-invariant field of ``b`` at ``g``: (zeta, alpha + <v, theta zeta>/2)."""
    out = np.empty(3)
    out[:2] = b.zeta
    out[2] = b.alpha + 0.5 * float(np.dot(g.v, theta(b.zeta)))
    return out


def linear_field_eval(field: LinearField, g: GroupElement) -> np.ndarray:
    """Value of the linear field at ``g``: (A v, <eta, v> + z tr A)."""
    out = np.empty(3)
    out[:2] = field.A @ g.v
    out[2] = float(np.dot(field.eta, g.v)) + g.z * field.trace
    return out


def derivation_apply(field: LinearField, b: AlgebraElement) -> AlgebraElement:
    """Apply the derivation matrix to an algebra element."""
    return AlgebraElement(
        field.A @ b.zeta,
        float(np.dot(field.eta, b.zeta)) + b.alpha * field.trace,
    )


def lambda_operator(mat: np.ndarray, eta: np.ndarray, t: float) -> np.ndarray:
    """Evaluate int_0^t exp(s * mat^T) eta ds.

    Uses the top-right block of the exponential of the augmented matrix
    ``[[mat^T, eta], [0, 0]]``, valid for any ``mat`` including singular
    and nilpotent ones.
    """
    mat = np.asarray(mat, dtype=float)
    M = np.zeros((3, 3))
    M[:2, :2] = mat.T
    M[:2, 2] = np.asarray(eta, dtype=float)
    return expm(float(t) * M)[:2, 2].copy()


def flow_matrix(field: LinearField, t: float) -> np.ndarray:
    """The 3x3 matrix exp(t*D) of the flow at time ``t``.

    Block form: ``[[exp(tA), 0], [w^T, exp(t trA)]]`` with
    ``w = exp(t trA) * Lambda_t(A - trA*I, eta)``.
    """
    t = float(t)
    trA = field.trace
    P = expm(t * field.A)
    # The (2,2) entry equals both exp(t trA) and det(exp(tA)) exactly; taking
    # the determinant of the computed block keeps each flow an automorphism
    # matrix to rounding, which the group-law checks rely on.
    m = float(P[0, 0] * P[1, 1] - P[0, 1] * P[1, 0])
    M = np.zeros((3, 3))
    M[:2, :2] = P
    M[2, :2] = float(np.exp(t * trA)) * lambda_operator(field.A - trA * np.eye(2), field.eta, t)
    M[2, 2] = m
    return M


def flow(field: LinearField, t: float, g: GroupElement) -> GroupElement:
    """Flow the point ``g`` for time ``t`` along the linear field."""
    return GroupElement.from_vector(flow_matrix(field, t) @ g.as_vector())


def flow_automorphism(field: LinearField, t: float) -> GroupAutomorphism:
    """The time-``t`` flow as a group automorphism."""
    M = flow_matrix(field, t)
    return GroupAutomorphism(M[:2, :2], M[2, :2])


def apply_automorphism(psi: GroupAutomorphism, g: GroupElement) -> GroupElement:
    """Apply (v, z) -> (P v, <eta, v> + z det P)."""
    return GroupElement(psi.P @ g.v, float(np.dot(psi.eta, g.v)) + g.z * psi.det)
