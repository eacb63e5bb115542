"""Conserved momenta of the two-body phase space and their derivative.

The pair momentum of a phase point is ``(alpha, u)`` with angular part
``alpha = q1 x p1 + q2 x p2`` and linear part ``u = p1 + p2``.  The
derivative of the momentum loses rank exactly when all four state
vectors lie on a single line through the origin, and the part of its
kernel tangent to the symmetry stratum of the point measures the local
dimension of the joint momentum/symmetry level set (0, 3 or 6).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .euclid import EQ_FLOOR, hat, vec3

# Scale-invariant parallelism threshold: |v x w| <= EPS_PAR |v| |w|.
EPS_PAR = 1e-9
# Relative singular-value cutoff for numerical rank decisions.
RANK_REL = 1e-8


@dataclass(frozen=True)
class PhasePoint:
    """State (q1, q2, p1, p2) of two bodies: positions and momenta."""

    q1: np.ndarray
    q2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray

    def __post_init__(self):
        for name in ("q1", "q2", "p1", "p2"):
            object.__setattr__(self, name, vec3(getattr(self, name)))

    @classmethod
    def from_vector(cls, v) -> "PhasePoint":
        v = np.asarray(v, dtype=float).reshape(12)
        return cls(v[0:3], v[3:6], v[6:9], v[9:12])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.q1, self.q2, self.p1, self.p2])

    def scale(self) -> float:
        """Largest vector norm; reference magnitude for tolerances."""
        return max(
            float(np.linalg.norm(self.q1)),
            float(np.linalg.norm(self.q2)),
            float(np.linalg.norm(self.p1)),
            float(np.linalg.norm(self.p2)),
        )


@dataclass(frozen=True)
class MomentumValue:
    """Momentum pair: angular part alpha, linear part u."""

    alpha: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", vec3(self.alpha))
        object.__setattr__(self, "u", vec3(self.u))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.alpha, self.u])

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_vector()))


def momentum_map(m: PhasePoint) -> MomentumValue:
    """(alpha, u) = (q1 x p1 + q2 x p2, p1 + p2)."""
    return MomentumValue(
        np.cross(m.q1, m.p1) + np.cross(m.q2, m.p2),
        m.p1 + m.p2,
    )


def momentum_map_vec(y: np.ndarray) -> np.ndarray:
    """Momentum as a 6-vector from a flat 12-vector state; hot-path form."""
    q1, q2, p1, p2 = y[0:3], y[3:6], y[6:9], y[9:12]
    out = np.empty(6)
    out[0:3] = np.cross(q1, p1) + np.cross(q2, p2)
    out[3:6] = p1 + p2
    return out


def momentum_jacobian(m: PhasePoint) -> np.ndarray:
    """Exact 6x12 derivative of the momentum at m.

    Row blocks (alpha, u), column blocks (q1, q2, p1, p2):
    the alpha rows are ``[-hat(p1), -hat(p2), hat(q1), hat(q2)]`` and the
    u rows are ``[0, 0, I, I]``.
    """
    J = np.zeros((6, 12))
    J[0:3, 0:3] = -hat(m.p1)
    J[0:3, 3:6] = -hat(m.p2)
    J[0:3, 6:9] = hat(m.q1)
    J[0:3, 9:12] = hat(m.q2)
    J[3:6, 6:9] = np.eye(3)
    J[3:6, 9:12] = np.eye(3)
    return J


def parallel(v, w, eps: float = EPS_PAR) -> bool:
    """Scale-invariant parallelism; the zero vector is parallel to all."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    return float(np.linalg.norm(np.cross(v, w))) <= eps * float(
        np.linalg.norm(v)
    ) * float(np.linalg.norm(w))


def collinear(vectors, eps: float = EPS_PAR) -> bool:
    """True when all vectors lie on one line through the origin."""
    vs = [np.asarray(v, dtype=float) for v in vectors]
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if not parallel(vs[i], vs[j], eps):
                return False
    return True


def is_regular(m: PhasePoint, eps: float = EPS_PAR) -> bool:
    """Momentum derivative surjective at m?

    Fails exactly when q1, q2, p1, p2 are all collinear through the
    origin; agrees with a rank-6 test of the derivative.
    """
    return not collinear([m.q1, m.q2, m.p1, m.p2], eps)


def numerical_rank(M: np.ndarray, rel: float = RANK_REL) -> int:
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel * s[0]))


def kernel_basis(M: np.ndarray, rel: float = RANK_REL) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of M."""
    u, s, vt = np.linalg.svd(M)
    ncols = M.shape[1]
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rel * smax)) if smax > 0.0 else 0
    return vt[rank:].T.reshape(ncols, ncols - rank)


def intersection_dim(B1: np.ndarray, B2: np.ndarray, rel: float = RANK_REL) -> int:
    """dim(span B1 ∩ span B2) for orthonormal column bases."""
    k1, k2 = B1.shape[1], B2.shape[1]
    if k1 == 0 or k2 == 0:
        return 0
    stacked = np.hstack([B1, B2])
    return k1 + k2 - numerical_rank(stacked, rel)


def char_distribution_dim(m: PhasePoint, eps: float = EPS_PAR) -> int:
    """Dimension of ker(DJ) ∩ (tangent of the symmetry stratum) at m.

    Equals the dimension of the joint momentum/symmetry level set through
    m: 0 on the fixed-point stratum, 3 on the axial strata, 6 where only
    the identity fixes the point.  Raises near stratum boundaries where
    the classification is tolerance-ambiguous.
    """
    from .isotropy import classify_fine, isotropy_type_tangent

    tag_lo = classify_fine(m, eps=eps * 0.1)
    tag_hi = classify_fine(m, eps=eps * 10.0)
    if tag_lo != tag_hi:
        raise StratumBoundaryError(
            f"classification ambiguous near stratum boundary ({tag_lo} vs {tag_hi})"
        )
    T = isotropy_type_tangent(m, eps=eps)
    if T.shape[1] == 0:
        return 0
    K = kernel_basis(momentum_jacobian(m))
    if T.shape[1] == 12:
        return K.shape[1]
    return intersection_dim(K, T)


class StratumBoundaryError(ValueError):
    """Input sits within tolerance of two symmetry strata."""


def momentum_close(
    mu1: MomentumValue,
    mu2: MomentumValue,
    rtol: float = 1e-8,
    atol: float = 1e-10,
) -> bool:
    """Momentum equality: relative against the larger norm, floored."""
    ref = max(mu1.norm(), mu2.norm())
    tol = max(atol, rtol * ref)
    return float(np.max(np.abs(mu1.as_vector() - mu2.as_vector()))) <= tol


def is_zero_vec(v, ref: float = 0.0, floor: float = EQ_FLOOR) -> bool:
    """Zero test with absolute floor scaled by a reference magnitude."""
    return float(np.linalg.norm(v)) <= floor * max(1.0, ref)
