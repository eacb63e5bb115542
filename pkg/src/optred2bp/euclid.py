"""Rigid motions of 3-space and their action on two-body phase points.

A rigid motion is a pair ``(A, a)`` of a rotation matrix and a translation
vector acting on positions as ``x -> A x + a``.  The group law is the
semidirect product; momenta see only the rotation part.  Everything here is
a pure function on immutable data.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

# Absolute floor for equality checks; relative scaling is applied on top.
EQ_FLOOR = 1e-12
# Frobenius tolerance for A^T A = I and |det A - 1|.
ORTH_TOL = 1e-10


def vec3(x) -> np.ndarray:
    """Coerce to a finite float 3-vector."""
    v = np.asarray(x, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    return v


def max_err(a, b) -> float:
    """Largest componentwise deviation, scaled by max(1, |a|, |b|)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ref = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) / ref


def close(a, b, tol: float = EQ_FLOOR) -> bool:
    return max_err(a, b) <= tol


def hat(v) -> np.ndarray:
    """Matrix of the cross product, hat(v) @ w == v x w."""
    x, y, z = vec3(v)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def check_rotation(A: np.ndarray, tol: float = ORTH_TOL) -> np.ndarray:
    """Validate that A is a proper rotation; returns A unchanged."""
    A = np.asarray(A, dtype=float)
    if A.shape != (3, 3):
        raise ValueError(f"rotation must be 3x3, got {A.shape}")
    err = np.linalg.norm(A.T @ A - np.eye(3))
    if err > tol:
        raise ValueError(f"matrix is not orthogonal (|A^T A - I| = {err:.3e})")
    det = np.linalg.det(A)
    if abs(det - 1.0) > tol:
        raise ValueError(f"matrix is not proper (det = {det:.15g})")
    return A


def rotation_about_axis(axis, angle: float) -> np.ndarray:
    """Rotation matrix about ``axis`` by ``angle`` (Rodrigues formula).

    The axis is normalized internally; a near-zero axis is rejected.
    """
    n = vec3(axis)
    norm = np.linalg.norm(n)
    if norm < 1e-12:
        raise ValueError("rotation axis is numerically zero")
    n = n / norm
    K = hat(n)
    c, s = np.cos(angle), np.sin(angle)
    return c * np.eye(3) + s * K + (1.0 - c) * np.outer(n, n)


def rotations_about_axis(axis, angles: np.ndarray) -> np.ndarray:
    """Stack of rotation matrices about one axis, shape (n, 3, 3)."""
    n = vec3(axis)
    n = n / np.linalg.norm(n)
    K = hat(n)
    P = np.outer(n, n)
    c = np.cos(angles)[:, None, None]
    s = np.sin(angles)[:, None, None]
    return c * np.eye(3) + s * K + (1.0 - c) * P


def rotation_aligning(v, w) -> np.ndarray:
    """A rotation taking the direction of v to the direction of w."""
    a = vec3(v)
    b = vec3(w)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < 1e-12 or nb < 1e-12:
        raise ValueError("cannot align a zero vector")
    a, b = a / na, b / nb
    axis = np.cross(a, b)
    s = np.linalg.norm(axis)
    c = float(np.dot(a, b))
    if s < 1e-12:
        if c > 0.0:
            return np.eye(3)
        # antiparallel: half turn about any axis orthogonal to a
        k = int(np.argmin(np.abs(a)))
        perp = np.zeros(3)
        perp[k] = 1.0
        perp -= np.dot(perp, a) * a
        return rotation_about_axis(perp, np.pi)
    return rotation_about_axis(axis, np.arctan2(s, c))


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random rotation via QR of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 2] = -q[:, 2]
    return q


@dataclass(frozen=True)
class SE3Element:
    """Rigid motion (A, a): rotation matrix A and translation a."""

    A: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", check_rotation(self.A))
        object.__setattr__(self, "a", vec3(self.a))

    @classmethod
    def identity(cls) -> "SE3Element":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def rotation(cls, axis, angle: float) -> "SE3Element":
        return cls(rotation_about_axis(axis, angle), np.zeros(3))

    @classmethod
    def translation(cls, a) -> "SE3Element":
        return cls(np.eye(3), a)

    def __matmul__(self, other: "SE3Element") -> "SE3Element":
        return compose(self, other)

    def apply(self, x) -> np.ndarray:
        """Move a position vector: x -> A x + a."""
        return self.A @ vec3(x) + self.a


def compose(g: SE3Element, h: SE3Element) -> SE3Element:
    """Group product (A1, a1)(A2, a2) = (A1 A2, a1 + A1 a2)."""
    return SE3Element(g.A @ h.A, g.a + g.A @ h.a)


def inverse(g: SE3Element) -> SE3Element:
    """Group inverse (A, a)^-1 = (A^T, -A^T a)."""
    return SE3Element(g.A.T, -(g.A.T @ g.a))


def conjugation(a, g: SE3Element) -> SE3Element:
    """Conjugate g by the translation (I, a): (B, b) -> (B, b + a - B a)."""
    a = vec3(a)
    return SE3Element(g.A, g.a + a - g.A @ a)


def act_phase(g: SE3Element, m):
    """Cotangent-lifted action on a phase point.

    Positions are moved by the full motion, momenta only rotate:
    (q1, q2, p1, p2) -> (A q1 + a, A q2 + a, A p1, A p2).
    """
    return dataclasses.replace(
        m,
        q1=g.A @ m.q1 + g.a,
        q2=g.A @ m.q2 + g.a,
        p1=g.A @ m.p1,
        p2=g.A @ m.p2,
    )


def coadjoint(g: SE3Element, mu):
    """Coadjoint action on a momentum value: (A al - (A u) x a, A u)."""
    Aal = g.A @ mu.alpha
    Au = g.A @ mu.u
    return dataclasses.replace(mu, alpha=Aal - np.cross(Au, g.a), u=Au)
