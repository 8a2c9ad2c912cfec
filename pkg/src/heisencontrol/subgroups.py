"""Closed subgroups of the Heisenberg group and their quotient charts.

Subgroups are kept in the canonical post-isomorphism forms of the
classification (arbitrary conjugated or rescaled copies are out of
scope).  The module provides membership tests, left-coset criteria and
the projections onto the two quotient charts used downstream, plus the
flow-invariance predicate with an independent brute-force cross-check.

All mod-1 comparisons use the minimal circular distance, so the 0/1
seam never produces spurious mismatches.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import GroupElement, LinearField, flow_matrix

DEFAULT_TOL = 1e-9
DEFAULT_TIMES = (-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0)


class SubgroupFamily(Enum):
    DIM2 = "dim2"                          # (R x Zp) x R
    LATTICE_CYLINDER = "lattice_cylinder"  # Z^k x R
    LINE_TIMES_LATTICE = "line_times_lattice"  # R e1 x Zp
    DISCRETE_LINE = "discrete_line"        # Z e1 x Zp
    CENTER_LATTICE = "center_lattice"      # {0} x Z
    FULL_LATTICE = "full_lattice"          # Z^2 x (1/p) Z


class UnsupportedSubgroupError(ValueError):
    """Raised when an operation has no criterion for the given subgroup."""


@dataclass(frozen=True)
class Subgroup:
    """One canonical closed subgroup; ``param`` is p (or k for cylinders)."""

    family: SubgroupFamily
    param: int = 0

    def __post_init__(self):
        f, p = self.family, self.param
        if f in (SubgroupFamily.DIM2, SubgroupFamily.LINE_TIMES_LATTICE,
                 SubgroupFamily.DISCRETE_LINE):
            if p not in (0, 1):
                raise ValueError(f"{f.value} requires p in {{0, 1}}, got {p}")
        elif f is SubgroupFamily.LATTICE_CYLINDER:
            if p not in (0, 1, 2):
                raise ValueError(f"lattice_cylinder requires k in {{0, 1, 2}}, got {p}")
        elif f is SubgroupFamily.FULL_LATTICE:
            if p < 1:
                raise ValueError(f"full_lattice requires p >= 1, got {p}")
        elif f is SubgroupFamily.CENTER_LATTICE:
            if p != 0:
                raise ValueError("center_lattice takes no parameter")

    @classmethod
    def dim2(cls, p: int) -> "Subgroup":
        return cls(SubgroupFamily.DIM2, p)

    @classmethod
    def lattice_cylinder(cls, k: int) -> "Subgroup":
        return cls(SubgroupFamily.LATTICE_CYLINDER, k)

    @classmethod
    def line_times_lattice(cls, p: int) -> "Subgroup":
        return cls(SubgroupFamily.LINE_TIMES_LATTICE, p)

    @classmethod
    def discrete_line(cls, p: int) -> "Subgroup":
        return cls(SubgroupFamily.DISCRETE_LINE, p)

    @classmethod
    def center_lattice(cls) -> "Subgroup":
        return cls(SubgroupFamily.CENTER_LATTICE, 0)

    @classmethod
    def full_lattice(cls, p: int) -> "Subgroup":
        return cls(SubgroupFamily.FULL_LATTICE, p)

    @property
    def label(self) -> str:
        if self.family is SubgroupFamily.CENTER_LATTICE:
            return "center_lattice"
        key = "k" if self.family is SubgroupFamily.LATTICE_CYLINDER else "p"
        return f"{self.family.value}({key}={self.param})"


def is_normal(sub: Subgroup) -> bool:
    """True exactly for the normal subgroups: dim-2 kinds, lattice cylinders, center lattice."""
    return sub.family in (SubgroupFamily.DIM2, SubgroupFamily.LATTICE_CYLINDER,
                          SubgroupFamily.CENTER_LATTICE)


def dist_to_int(x: float) -> float:
    """Distance to the nearest integer."""
    return abs(x - round(x))


def circ_dist(a: float, b: float) -> float:
    """Minimal circular distance on R/Z."""
    return dist_to_int(a - b)


def frac(x: float) -> float:
    """Representative of x mod 1 in [0, 1)."""
    return float(x - np.floor(x))


def _near_zero(x: float, tol: float) -> bool:
    return abs(x) <= tol


def _near_lattice(x: float, step: float, tol: float) -> bool:
    # distance to the nearest multiple of ``step``
    return dist_to_int(x / step) * step <= tol


def contains(sub: Subgroup, g: GroupElement, tol: float = DEFAULT_TOL) -> bool:
    """Membership of ``g`` in the canonical subgroup, within ``tol`` per component."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    x, y, z = g.v[0], g.v[1], g.z
    f, p = sub.family, sub.param
    if f is SubgroupFamily.DIM2:
        return dist_to_int(y) <= tol if p == 1 else _near_zero(y, tol)
    if f is SubgroupFamily.LATTICE_CYLINDER:
        if p == 0:
            return _near_zero(x, tol) and _near_zero(y, tol)
        if p == 1:
            return dist_to_int(x) <= tol and _near_zero(y, tol)
        return dist_to_int(x) <= tol and dist_to_int(y) <= tol
    if f is SubgroupFamily.LINE_TIMES_LATTICE:
        zc = dist_to_int(z) <= tol if p == 1 else _near_zero(z, tol)
        return _near_zero(y, tol) and zc
    if f is SubgroupFamily.DISCRETE_LINE:
        zc = dist_to_int(z) <= tol if p == 1 else _near_zero(z, tol)
        return dist_to_int(x) <= tol and _near_zero(y, tol) and zc
    if f is SubgroupFamily.CENTER_LATTICE:
        return _near_zero(x, tol) and _near_zero(y, tol) and dist_to_int(z) <= tol
    # full lattice Z^2 x (1/p) Z
    return (dist_to_int(x) <= tol and dist_to_int(y) <= tol
            and _near_lattice(z, 1.0 / p, tol))


def sample_members(sub: Subgroup, n: int, rng: np.random.Generator,
                   lattice_window: int = 5, halfwidth: float = 10.0) -> list[GroupElement]:
    """Draw ``n`` members of the subgroup, plus a few canonical generators.

    Lattice coordinates are drawn from [-lattice_window, lattice_window],
    continuous coordinates uniformly from [-halfwidth, halfwidth].  The
    canonical members guarantee that every constrained coordinate slot is
    exercised regardless of the random draw.
    """
    f, p = sub.family, sub.param

    def draw():
        i = int(rng.integers(-lattice_window, lattice_window + 1))
        j = int(rng.integers(-lattice_window, lattice_window + 1))
        k = int(rng.integers(-lattice_window, lattice_window + 1))
        s = float(rng.uniform(-halfwidth, halfwidth))
        u = float(rng.uniform(-halfwidth, halfwidth))
        if f is SubgroupFamily.DIM2:
            return GroupElement(np.array([s, float(i) if p == 1 else 0.0]), u)
        if f is SubgroupFamily.LATTICE_CYLINDER:
            v = {0: (0.0, 0.0), 1: (float(i), 0.0), 2: (float(i), float(j))}[p]
            return GroupElement(np.array(v), s)
        if f is SubgroupFamily.LINE_TIMES_LATTICE:
            return GroupElement(np.array([s, 0.0]), float(i) if p == 1 else 0.0)
        if f is SubgroupFamily.DISCRETE_LINE:
            return GroupElement(np.array([float(i), 0.0]), float(j) if p == 1 else 0.0)
        if f is SubgroupFamily.CENTER_LATTICE:
            return GroupElement(np.zeros(2), float(i))
        return GroupElement(np.array([float(i), float(j)]), float(k) / p)

    canonical = {
        SubgroupFamily.DIM2: [GroupElement(np.array([1.0, float(p)]), 1.0)],
        SubgroupFamily.LATTICE_CYLINDER: [
            GroupElement(np.array([float(min(p, 1)), float(1 if p == 2 else 0)]), 1.0)],
        SubgroupFamily.LINE_TIMES_LATTICE: [
            GroupElement(np.array([1.0, 0.0]), 0.0),
            GroupElement(np.array([-3.5, 0.0]), float(p))],
        SubgroupFamily.DISCRETE_LINE: [
            GroupElement(np.array([1.0, 0.0]), 0.0),
            GroupElement(np.array([-2.0, 0.0]), float(p))],
        SubgroupFamily.CENTER_LATTICE: [GroupElement(np.zeros(2), 1.0)],
        SubgroupFamily.FULL_LATTICE: [
            GroupElement(np.array([1.0, 0.0]), 0.0),
            GroupElement(np.array([0.0, 1.0]), 1.0 / p if p else 0.0)],
    }[f]
    return canonical + [draw() for _ in range(n)]


# ---------------------------------------------------------------------------
# quotient charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientPoint0p:
    """Chart point ([u], s, t) of the quotient by Z e1 x Zp; u is mod 1, t mod 1 iff p=1."""

    u: float
    s: float
    t: float
    p: int = 1


@dataclass(frozen=True)
class QuotientPoint1p:
    """Chart point (s, t) of the quotient by R e1 x Zp; t is mod 1 iff p=1."""

    s: float
    t: float
    p: int = 1


def coset_equal_0p(p: int, g1: GroupElement, g2: GroupElement,
                   tol: float = DEFAULT_TOL) -> bool:
    """Left-coset criterion for Z e1 x Zp: [x1]=[x2] mod 1, y1=y2, [z+xy/2] match mod Zp."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    w1 = g1.z + 0.5 * g1.v[0] * g1.v[1]
    w2 = g2.z + 0.5 * g2.v[0] * g2.v[1]
    wmatch = circ_dist(w1, w2) <= tol if p == 1 else abs(w1 - w2) <= tol
    return (circ_dist(g1.v[0], g2.v[0]) <= tol
            and abs(g1.v[1] - g2.v[1]) <= tol and wmatch)


def coset_equal_1p(p: int, g1: GroupElement, g2: GroupElement,
                   tol: float = DEFAULT_TOL) -> bool:
    """Left-coset criterion for R e1 x Zp: y1=y2 and [z+xy/2] match mod Zp."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    w1 = g1.z + 0.5 * g1.v[0] * g1.v[1]
    w2 = g2.z + 0.5 * g2.v[0] * g2.v[1]
    wmatch = circ_dist(w1, w2) <= tol if p == 1 else abs(w1 - w2) <= tol
    return abs(g1.v[1] - g2.v[1]) <= tol and wmatch


def project_0p(p: int, g: GroupElement) -> QuotientPoint0p:
    """Canonical projection ((x, y), z) -> ([x], y, [z + xy/2]_p)."""
    w = g.z + 0.5 * g.v[0] * g.v[1]
    return QuotientPoint0p(frac(g.v[0]), float(g.v[1]), frac(w) if p == 1 else float(w), p)


def project_1p(p: int, g: GroupElement) -> QuotientPoint1p:
    """Canonical projection ((x, y), z) -> (y, [z + xy/2]_p)."""
    w = g.z + 0.5 * g.v[0] * g.v[1]
    return QuotientPoint1p(float(g.v[1]), frac(w) if p == 1 else float(w), p)


# ---------------------------------------------------------------------------
# flow invariance
# ---------------------------------------------------------------------------

def invariance_conditions(sub: Subgroup, field: LinearField,
                          tol: float = DEFAULT_TOL) -> list[tuple[str, float]]:
    """Residuals of the algebraic invariance conditions for the subgroup.

    Returns (condition, residual) pairs; the subgroup is declared
    invariant when every residual is within ``tol``.  Only the five
    non-normal kinds carry a criterion; the normal kinds are rejected.
    """
    A, eta = field.A, field.eta
    f, p = sub.family, sub.param
    conds: list[tuple[str, float]] = []
    if f is SubgroupFamily.FULL_LATTICE:
        conds.append(("A = 0", float(np.abs(A).max())))
        conds.append(("eta = 0", float(np.abs(eta).max())))
        return conds
    if f is SubgroupFamily.DISCRETE_LINE:
        conds.append(("A e1 = 0", float(max(abs(A[0, 0]), abs(A[1, 0])))))
        if p == 1:
            conds.append(("A e2 in R e1", abs(float(A[1, 1]))))
    elif f is SubgroupFamily.LINE_TIMES_LATTICE:
        conds.append(("A e1 in R e1", abs(float(A[1, 0]))))
        if p == 1:
            conds.append(("A e2 = -lambda e2 + alpha e1", abs(float(A[1, 1] + A[0, 0]))))
    else:
        raise UnsupportedSubgroupError(
            f"no invariance criterion for {sub.label}; the quotient is a Lie group")
    conds.append(("eta in R e2", abs(float(eta[0]))))
    if abs(float(eta[1])) > tol:
        conds.append(("alpha = 0 when eta != 0", abs(float(A[0, 1]))))
    return conds


def is_invariant(sub: Subgroup, field: LinearField, tol: float = DEFAULT_TOL) -> bool:
    """Algebraic flow-invariance predicate for the five non-normal kinds."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return all(r <= tol for _, r in invariance_conditions(sub, field, tol))


def violated_conditions(sub: Subgroup, field: LinearField,
                        tol: float = DEFAULT_TOL) -> list[str]:
    """Names of the invariance conditions exceeding ``tol``."""
    return [name for name, r in invariance_conditions(sub, field, tol) if r > tol]


def find_invariance_violation(sub: Subgroup, field: LinearField,
                              samples: int = 40,
                              times=DEFAULT_TIMES,
                              tol: float = DEFAULT_TOL,
                              seed: int = 0,
                              lattice_window: int = 5,
                              halfwidth: float = 10.0):
    """Search for a subgroup member whose flow image leaves the subgroup.

    Returns (member, t, image) for the first violation found, else None.
    A violation refutes invariance; finding none is evidence only.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    members = sample_members(sub, samples, rng, lattice_window, halfwidth)
    for t in times:
        M = flow_matrix(field, t)
        for g in members:
            img = GroupElement.from_vector(M @ g.as_vector())
            if not contains(sub, img, tol):
                return g, float(t), img
    return None


def is_invariant_bruteforce(sub: Subgroup, field: LinearField,
                            samples: int = 40,
                            times=DEFAULT_TIMES,
                            tol: float = DEFAULT_TOL,
                            seed: int = 0) -> bool:
    """Brute-force invariance check: flow sampled members and test containment."""
    return find_invariance_violation(sub, field, samples, times, tol, seed) is None
