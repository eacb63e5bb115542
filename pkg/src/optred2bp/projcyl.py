"""Cylindrical coordinates with the horizontal angle taken modulo a half turn.

A distinguished vertical direction (the linear-momentum axis, rotated to
``e3``) fixes a pencil of vertical planes.  Each plane is spanned by the
horizontal unit vector ``beta(s) = (cos s, sin s, 0)`` with ``s in [0, pi)``
and the vertical axis; a vector in the plane is ``z beta(s) + mu u0``.
Signed ``z`` together with ``s`` modulo pi covers every horizontal vector
exactly once.
"""

from __future__ import annotations

import numpy as np

from .euclid import rotation_aligning, vec3


def beta(s: float) -> np.ndarray:
    """Horizontal unit vector at angle s."""
    return np.array([np.cos(s), np.sin(s), 0.0])


def wrap_pi(tau: float) -> float:
    """Reduce an angle to [0, pi) by subtracting whole half turns."""
    if not np.isfinite(tau):
        raise ValueError("angle must be finite")
    out = tau - np.floor(tau / np.pi) * np.pi
    # floor rounding may land exactly on pi for tiny negative inputs
    return 0.0 if out >= np.pi else float(out)


def angle_dist_pi(a: float, b: float) -> float:
    """Distance between two axis angles, modulo a half turn."""
    d = abs(wrap_pi(a) - wrap_pi(b))
    return min(d, np.pi - d)


def check_vertical(u0) -> float:
    """Require u0 along +e3 and return its magnitude."""
    u0 = vec3(u0)
    u03 = float(u0[2])
    horiz = float(np.hypot(u0[0], u0[1]))
    if u03 <= 0.0 or horiz > 1e-10 * u03:
        raise ValueError("vertical axis must point along +e3; rotate inputs first")
    return u03


def frame_rotation(u0) -> np.ndarray:
    """Rotation taking u0 to |u0| e3 (the frame all plane formulas assume)."""
    return rotation_aligning(u0, np.array([0.0, 0.0, 1.0]))


def plane_decompose(x, u0) -> tuple[float, float, float]:
    """Coefficients (z, s, mu) with x = z beta(s) + mu u0.

    Requires u0 along +e3.  A vector with zero horizontal part returns
    (0, 0, mu) by convention.
    """
    x = vec3(x)
    u03 = check_vertical(u0)
    mu = float(x[2]) / u03
    hx, hy = float(x[0]), float(x[1])
    r = float(np.hypot(hx, hy))
    if r == 0.0:
        return 0.0, 0.0, mu
    s = wrap_pi(np.arctan2(hy, hx))
    z = hx * np.cos(s) + hy * np.sin(s)
    return float(z), s, mu


def plane_compose(z: float, s: float, mu: float, u0) -> np.ndarray:
    u0 = vec3(u0)
    return z * beta(s) + mu * u0


def f_s(x, s: float, u0) -> np.ndarray:
    """Rotate the base vertical plane onto the plane at angle s.

    Linear on the (z, mu) coefficients; at s = pi it degenerates into the
    orientation-reversing map z -> -z of the base plane itself.
    """
    x = vec3(x)
    u03 = check_vertical(u0)
    if abs(float(x[1])) > 1e-10 * max(1.0, np.linalg.norm(x)):
        raise ValueError("input must lie in the base vertical plane (y = 0)")
    z = float(x[0])
    mu = float(x[2]) / u03
    if s == np.pi:
        return plane_compose(-z, 0.0, mu, u0)
    return plane_compose(z, s, mu, u0)


def chart_of(m, rho=None, eps_chart: float = 1e-10):
    """Which of the two horizontal-coefficient charts covers m.

    On the zero-angular-momentum level set of a nonzero vertical momentum
    the horizontal coefficients of the relative position and of p1 never
    vanish together; the chart excluding ``r_p = 0`` is 'Wp', the chart
    excluding the relative-position coefficient zero is 'Wq', and 'both'
    means the point is interior to both charts.
    """
    from . import optimal

    if rho is None:
        rho = optimal.label(m)
    if rho.case_id != 7:
        raise optimal.LevelSetMembershipError(
            f"chart split applies to the zero-angular-momentum labels only "
            f"(point has case {rho.case_id})"
        )
    if not optimal.level_set_contains(rho, m):
        raise optimal.LevelSetMembershipError("point is not on the level set")
    s, tau, r, mu1, mu2, lam = optimal.case7_coordinates(rho, m)
    r_q1q2 = r * np.cos(tau)
    r_p = r * np.sin(tau)
    scale = max(abs(r_q1q2), abs(r_p))
    p_zero = abs(r_p) <= eps_chart * scale
    q_zero = abs(r_q1q2) <= eps_chart * scale
    if p_zero:
        return "Wq"
    if q_zero:
        return "Wp"
    return "both"
