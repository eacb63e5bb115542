"""Symmetry classes of two-body phase points.

Only four families of subgroups of the rigid motions occur as stabilizers
of a phase point:

* ``G1(x)``  - every rotation about the point x (both bodies at x, at rest),
* ``G2(y)``  - rotations about the axis through the origin with direction y,
* ``G3(x,y)``- rotations about the axis through x with direction y (x not
  on the axis), and
* ``G4``     - the identity alone.

Thirteen mutually exclusive configurations ``a1 .. a13`` decide the family
and its parameters.  Writing ``v || w`` for "collinear through the origin"
(zero vectors count as collinear) they are:

====  =========================  =============================  ============
tag   momenta                    positions                      stabilizer
====  =========================  =============================  ============
a1    p1 = p2 = 0                q1 = q2                        G1(q1)
a2    p1 = p2 = 0                q1 || q2, q1 != q2             G2(q1-q2)
a3    p1 = p2 = 0                q1 not || q2                   G3(q1, q1-q2)
a4    p1 = 0, p2 != 0            q1-q2 not || p2                G4
a5    p1 = 0, p2 != 0            q1-q2 || p2, q1 not || p2      G3(q1, p2)
a6    p1 = 0, p2 != 0            q1 || p2, q2 || p2             G2(p2)
a7    p2 = 0, p1 != 0            q1-q2 not || p1                G4
a8    p2 = 0, p1 != 0            q1-q2 || p1, q1 not || p1      G3(q1, p1)
a9    p2 = 0, p1 != 0            q1 || p1, q2 || p1             G2(p1)
a10   p1 || p2, both != 0        q1-q2 not || p1                G4
a11   p1 || p2, both != 0        q1-q2 || p1, q1 not || p1      G3(q1, p1)
a12   p1 || p2, both != 0        q1 || p1, q2 || p1             G2(p1)
a13   p1 not || p2               any                            G4
====  =========================  =============================  ============

Classification is by tolerance-based predicates, so a point within the
parallelism threshold of a more degenerate stratum resolves to that
stratum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .euclid import (
    EQ_FLOOR,
    SE3Element,
    max_err,
    random_rotation,
    rotations_about_axis,
    vec3,
)
from .momentum import EPS_PAR, PhasePoint, parallel

FINE_TAGS = tuple(f"a{i}" for i in range(1, 14))

# fine tag -> coarse family kind
FINE_TO_FAMILY = {
    "a1": "G1", "a2": "G2", "a3": "G3",
    "a4": "G4", "a5": "G3", "a6": "G2",
    "a7": "G4", "a8": "G3", "a9": "G2",
    "a10": "G4", "a11": "G3", "a12": "G2",
    "a13": "G4",
}


class DegenerateClassError(ValueError):
    """Raw class parameters do not define a valid family member."""


@dataclass(frozen=True)
class IsotropyClass:
    """Canonical stabilizer descriptor.

    ``kind`` is one of G1/G2/G3/G4.  G1 carries the fixed point ``x``;
    G2 carries the unit axis direction ``ydir`` with canonical sign;
    G3 carries ``ydir`` plus ``x_perp``, the unique axis point orthogonal
    to ``ydir``; G4 carries nothing.
    """

    kind: str
    x: np.ndarray | None = None
    ydir: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("G1", "G2", "G3", "G4"):
            raise ValueError(f"unknown family {self.kind!r}")
        if self.x is not None:
            object.__setattr__(self, "x", vec3(self.x))
        if self.ydir is not None:
            object.__setattr__(self, "ydir", vec3(self.ydir))

    def params(self) -> dict:
        """JSON-friendly canonical parameters."""
        out: dict = {"family": self.kind}
        if self.kind == "G1":
            out["x"] = self.x.tolist()
        elif self.kind == "G2":
            out["ydir"] = self.ydir.tolist()
        elif self.kind == "G3":
            out["x_perp"] = self.x.tolist()
            out["ydir"] = self.ydir.tolist()
        return out


def canonical_direction(y) -> np.ndarray:
    """Unit representative of a line direction with a deterministic sign.

    The component of largest magnitude is made positive; np.argmax breaks
    ties by taking the first (lexicographically earliest) index.
    """
    y = vec3(y)
    n = float(np.linalg.norm(y))
    if n < 1e-12:
        raise DegenerateClassError("axis direction is numerically zero")
    y = y / n
    if y[int(np.argmax(np.abs(y)))] < 0.0:
        y = -y
    return y


def canonicalize(kind: str, x=None, y=None) -> IsotropyClass:
    """Canonical representative of a raw family description.

    G2: any nonzero y on the axis line gives the same class.  G3: the pairs
    (x + mu y, nu y) all describe the same subgroup; the representative
    keeps the component of x orthogonal to the axis.  Idempotent.
    """
    if kind == "G1":
        return IsotropyClass("G1", x=vec3(x))
    if kind == "G2":
        return IsotropyClass("G2", ydir=canonical_direction(y))
    if kind == "G3":
        ydir = canonical_direction(y)
        x = vec3(x)
        x_perp = x - np.dot(x, ydir) * ydir
        if np.linalg.norm(x_perp) <= 1e-12 * max(1.0, np.linalg.norm(x)):
            raise DegenerateClassError("axis point lies on the axis (x || y)")
        return IsotropyClass("G3", x=x_perp, ydir=ydir)
    if kind == "G4":
        return IsotropyClass("G4")
    raise ValueError(f"unknown family {kind!r}")


def same_class(c1: IsotropyClass, c2: IsotropyClass, tol: float = 1e-8) -> bool:
    if c1.kind != c2.kind:
        return False
    if c1.kind == "G1":
        return max_err(c1.x, c2.x) <= tol
    if c1.kind == "G2":
        return max_err(c1.ydir, c2.ydir) <= tol
    if c1.kind == "G3":
        return max_err(c1.ydir, c2.ydir) <= tol and max_err(c1.x, c2.x) <= tol
    return True


def classify_fine(m: PhasePoint, eps: float = EPS_PAR) -> str:
    """Tag a1..a13 of the configuration class containing m."""
    ref = m.scale()
    zero = lambda v: float(np.linalg.norm(v)) <= EQ_FLOOR * max(1.0, ref)
    par = lambda v, w: parallel(v, w, eps)
    p1z, p2z = zero(m.p1), zero(m.p2)
    d = m.q1 - m.q2

    if p1z and p2z:
        if zero(d):
            return "a1"
        return "a2" if par(m.q1, m.q2) else "a3"
    if p1z:
        if not par(d, m.p2):
            return "a4"
        return "a6" if (par(m.q1, m.p2) and par(m.q2, m.p2)) else "a5"
    if p2z:
        if not par(d, m.p1):
            return "a7"
        return "a9" if (par(m.q1, m.p1) and par(m.q2, m.p1)) else "a8"
    if not par(m.p1, m.p2):
        return "a13"
    if not par(d, m.p1):
        return "a10"
    return "a12" if (par(m.q1, m.p1) and par(m.q2, m.p1)) else "a11"


def isotropy_class(m: PhasePoint, eps: float = EPS_PAR) -> IsotropyClass:
    """Canonical stabilizer of m."""
    tag = classify_fine(m, eps)
    if tag == "a1":
        return canonicalize("G1", x=m.q1)
    if tag == "a2":
        return canonicalize("G2", y=m.q1 - m.q2)
    if tag == "a3":
        return canonicalize("G3", x=m.q1, y=m.q1 - m.q2)
    if tag == "a5":
        return canonicalize("G3", x=m.q1, y=m.p2)
    if tag == "a6":
        return canonicalize("G2", y=m.p2)
    if tag in ("a8", "a11"):
        return canonicalize("G3", x=m.q1, y=m.p1)
    if tag in ("a9", "a12"):
        return canonicalize("G2", y=m.p1)
    return IsotropyClass("G4")


def isotropy_contains(cls: IsotropyClass, g: SE3Element, tol: float = 1e-9) -> bool:
    """Membership of a rigid motion in the described stabilizer."""
    if cls.kind == "G1":
        return max_err(g.a, cls.x - g.A @ cls.x) <= tol
    if cls.kind == "G2":
        return (
            max_err(g.A @ cls.ydir, cls.ydir) <= tol
            and max_err(g.a, np.zeros(3)) <= tol
        )
    if cls.kind == "G3":
        return (
            max_err(g.A @ cls.ydir, cls.ydir) <= tol
            and max_err(g.a, cls.x - g.A @ cls.x) <= tol
        )
    return max_err(g.A, np.eye(3)) <= tol and max_err(g.a, np.zeros(3)) <= tol


def conjugate_class(cls: IsotropyClass, g: SE3Element) -> IsotropyClass:
    """Stabilizer of the moved point: the class conjugated by g."""
    if cls.kind == "G1":
        return canonicalize("G1", x=g.A @ cls.x + g.a)
    if cls.kind == "G4":
        return IsotropyClass("G4")
    if cls.kind == "G2":
        new_x = g.a
    else:
        new_x = g.A @ cls.x + g.a
    new_y = g.A @ cls.ydir
    if np.linalg.norm(np.cross(new_x, new_y)) <= 1e-12 * max(1.0, np.linalg.norm(new_x)):
        return canonicalize("G2", y=new_y)
    return canonicalize("G3", x=new_x, y=new_y)


def isotropy_type_tangent(m: PhasePoint, eps: float = EPS_PAR) -> np.ndarray:
    """Orthonormal basis (12 x k) of the tangent of the stratum of m.

    The fixed-point stratum of a given x is a single point (k = 0); for an
    axial stabilizer the stratum is the 4-parameter family of collinear
    configurations along the axis (k = 4); the trivial stabilizer fills
    open sets (k = 12).
    """
    cls = isotropy_class(m, eps)
    if cls.kind == "G1":
        return np.zeros((12, 0))
    if cls.kind in ("G2", "G3"):
        basis = np.zeros((12, 4))
        for slot in range(4):
            basis[3 * slot : 3 * slot + 3, slot] = cls.ydir
        return basis
    return np.eye(12)


# --------------------------------------------------------------------------
# samplers: random points of each fine class and random stabilizer members
# --------------------------------------------------------------------------


def _coef(rng: np.random.Generator, lo: float = 0.3, hi: float = 2.0) -> float:
    """Magnitude bounded away from zero, random sign."""
    return float(rng.uniform(lo, hi) * rng.choice([-1.0, 1.0]))


def _unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _generic_vec(rng: np.random.Generator) -> np.ndarray:
    return _unit(rng) * rng.uniform(0.3, 2.0)


def _vec_not_parallel(rng: np.random.Generator, w: np.ndarray) -> np.ndarray:
    while True:
        v = _generic_vec(rng)
        c = np.linalg.norm(np.cross(v, w))
        if c > 0.1 * np.linalg.norm(v) * np.linalg.norm(w):
            return v


def sample_fine(tag: str, rng: np.random.Generator) -> PhasePoint:
    """Random phase point of the given configuration class."""
    z = np.zeros(3)
    if tag == "a1":
        x = _generic_vec(rng)
        return PhasePoint(x, x, z, z)
    if tag == "a2":
        y = _unit(rng)
        lam, beta = _coef(rng), _coef(rng)
        while abs(lam - beta) < 0.3:
            beta = _coef(rng)
        return PhasePoint(lam * y, beta * y, z, z)
    if tag == "a3":
        q1 = _generic_vec(rng)
        return PhasePoint(q1, _vec_not_parallel(rng, q1), z, z)
    if tag in ("a4", "a7"):
        p = _generic_vec(rng)
        q2 = _generic_vec(rng)
        q1 = q2 + _vec_not_parallel(rng, p)
        return PhasePoint(q1, q2, z, p) if tag == "a4" else PhasePoint(q1, q2, p, z)
    if tag in ("a5", "a8"):
        p = _generic_vec(rng)
        q1 = _vec_not_parallel(rng, p)
        q2 = q1 - _coef(rng) * p
        return PhasePoint(q1, q2, z, p) if tag == "a5" else PhasePoint(q1, q2, p, z)
    if tag in ("a6", "a9"):
        p = _generic_vec(rng)
        q1, q2 = _coef(rng) * p, _coef(rng) * p
        return PhasePoint(q1, q2, z, p) if tag == "a6" else PhasePoint(q1, q2, p, z)
    if tag == "a10":
        p1 = _generic_vec(rng)
        p2 = _coef(rng) * p1
        q2 = _generic_vec(rng)
        q1 = q2 + _vec_not_parallel(rng, p1)
        return PhasePoint(q1, q2, p1, p2)
    if tag == "a11":
        p1 = _generic_vec(rng)
        p2 = _coef(rng) * p1
        q1 = _vec_not_parallel(rng, p1)
        q2 = q1 - _coef(rng) * p1
        return PhasePoint(q1, q2, p1, p2)
    if tag == "a12":
        p1 = _generic_vec(rng)
        return PhasePoint(_coef(rng) * p1, _coef(rng) * p1, p1, _coef(rng) * p1)
    if tag == "a13":
        p1 = _generic_vec(rng)
        return PhasePoint(_generic_vec(rng), _generic_vec(rng), p1, _vec_not_parallel(rng, p1))
    raise ValueError(f"unknown fine tag {tag!r}")


def sample_members_batch(
    cls: IsotropyClass, rng: np.random.Generator, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """n random stabilizer members as stacked (n,3,3) and (n,3) arrays."""
    if cls.kind == "G4":
        return np.broadcast_to(np.eye(3), (n, 3, 3)).copy(), np.zeros((n, 3))
    if cls.kind == "G1":
        A = np.stack([random_rotation(rng) for _ in range(n)])
        a = cls.x - np.einsum("nij,j->ni", A, cls.x)
        return A, a
    A = rotations_about_axis(cls.ydir, rng.uniform(0.0, 2.0 * np.pi, size=n))
    if cls.kind == "G2":
        return A, np.zeros((n, 3))
    a = cls.x - np.einsum("nij,j->ni", A, cls.x)
    return A, a


def sample_members(
    cls: IsotropyClass, rng: np.random.Generator, n: int
) -> list[SE3Element]:
    A, a = sample_members_batch(cls, rng, n)
    return [SE3Element(A[i], a[i]) for i in range(n)]
