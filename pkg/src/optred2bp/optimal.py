"""Joint momentum/symmetry level sets of the two-body phase space.

Fixing the value of the pair momentum together with the stabilizer class
of a point singles out a connected level set.  Exactly ten families of
such level sets occur; each one gets a label holding the momentum value,
the canonical stabilizer data and a case id:

====  ==========================  =====================  ==============
case  momentum (alpha, u)         stabilizer             level-set dim
====  ==========================  =====================  ==============
1     (0, 0)                      G1(x0)                 0
2     (0, 0)                      G2(y0)                 3
3     (0, d0 y0), d0 != 0         G2(y0)                 3
4     (0, 0)                      G3(x0, y0)             3
5     (d0 x0 x y0, d0 y0)         G3(x0, y0)             3
6     (alpha0, 0), alpha0 != 0    trivial                6
7     (0, u0), u0 != 0            trivial                6
8     (d0 u0, u0), d0 != 0        trivial                6
9     alpha0 x u0 != 0, dot = 0   trivial                6
10    alpha0 x u0 != 0, dot != 0  trivial                6
====  ==========================  =====================  ==============

For each family the module provides an explicit parametrization of the
level set, the projection to reduced coordinates (invariant under the
label's symmetry group), a section of that projection, and the translation
transports relating cases 4/5/9/10 to 2/3/7/8.  Cases 7-10 use the
vertical-plane coordinates of :mod:`optred2bp.projcyl` in a frame where
the linear momentum points along e3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .euclid import (
    SE3Element,
    coadjoint,
    conjugation,
    max_err,
    rotation_about_axis,
    rotations_about_axis,
    vec3,
)
from .isotropy import (
    IsotropyClass,
    canonical_direction,
    canonicalize,
    conjugate_class,
    isotropy_class,
    same_class,
)
from .momentum import (
    EPS_PAR,
    MomentumValue,
    PhasePoint,
    momentum_close,
    momentum_map,
)
from .projcyl import beta, frame_rotation, wrap_pi

# momentum-matching tolerance for level-set membership
MU_RTOL = 1e-8
MU_ATOL = 1e-10
ISO_TOL = 1e-8

E3 = np.array([0.0, 0.0, 1.0])

REDUCED_COORD_NAMES = {
    1: (),
    2: ("x", "y"),
    3: ("delta", "gamma"),
    4: ("x", "y"),
    5: ("delta", "gamma"),
    6: ("c", "lambda"),
    7: ("nu", "r", "mu", "lambda"),
    8: ("nu", "r", "mu", "lambda"),
    9: ("nu", "r", "mu", "lambda"),
    10: ("nu", "r", "mu", "lambda"),
}


class LevelSetMembershipError(ValueError):
    """Point does not lie on the level set of the given label."""


class ParamDomainError(ValueError):
    """Parametrization or reduced-space input outside its domain."""


class InternalClassifierError(RuntimeError):
    """Momentum value and stabilizer class form an impossible combination."""


@dataclass(frozen=True)
class OptimalLabel:
    """Level-set label: case id, momentum value, canonical stabilizer.

    ``delta0`` is the vertical momentum coefficient of cases 3/5/8 (and the
    case-8 shadow coefficient of case 10); ``a_shift`` is the horizontal
    translation relating cases 9/10 back to cases 7/8; ``frame`` rotates
    the linear momentum onto e3 for cases 7-10.
    """

    case_id: int
    mu: MomentumValue
    iso: IsotropyClass
    delta0: float | None = None
    a_shift: np.ndarray | None = None
    frame: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.a_shift is not None:
            object.__setattr__(self, "a_shift", vec3(self.a_shift))

    # convenience accessors -------------------------------------------------
    @property
    def y0(self) -> np.ndarray:
        return self.iso.ydir

    @property
    def x0(self) -> np.ndarray:
        return self.iso.x if self.iso.kind == "G3" else np.zeros(3)

    @property
    def u0(self) -> np.ndarray:
        return self.mu.u

    @property
    def alpha0(self) -> np.ndarray:
        return self.mu.alpha

    @property
    def u03(self) -> float:
        return float(np.linalg.norm(self.mu.u))

    def params(self) -> dict:
        """JSON-friendly label data."""
        out = {
            "case": self.case_id,
            "alpha": self.mu.alpha.tolist(),
            "u": self.mu.u.tolist(),
            "iso": self.iso.params(),
        }
        if self.delta0 is not None:
            out["delta0"] = self.delta0
        if self.a_shift is not None:
            out["a_shift"] = self.a_shift.tolist()
        return out


@dataclass(frozen=True)
class ReducedPoint:
    """Coordinates on the reduced space of a label.

    Orders: case 1 none; cases 2/4 Cartesian ``(x, y)`` on the doubly
    covered plane; cases 3/5 ``(delta, gamma)``; case 6 ``(c, lambda)``;
    cases 7-10 ``(nu, r, mu, lambda)`` with ``nu`` an axis angle modulo pi.
    """

    case_id: int
    coords: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coords, dtype=float))
        names = REDUCED_COORD_NAMES[self.case_id]
        if c.shape != (len(names),):
            raise ValueError(
                f"case {self.case_id} expects {len(names)} coordinates, got {c.shape}"
            )
        object.__setattr__(self, "coords", c)

    def as_dict(self) -> dict:
        return {
            name: float(v)
            for name, v in zip(REDUCED_COORD_NAMES[self.case_id], self.coords)
        }


def _is_zero_mu(v: np.ndarray, ref: float) -> bool:
    return float(np.linalg.norm(v)) <= max(MU_ATOL, MU_RTOL * ref)


def label_from_parts(mu: MomentumValue, iso: IsotropyClass) -> OptimalLabel:
    """Label of the level set with the given momentum and stabilizer.

    The stored momentum is snapped onto the structural form of its case
    (e.g. the angular part of case 7 becomes exactly zero) so that
    sections reproduce it to round-off.
    """
    alpha, u = mu.alpha, mu.u
    ref = mu.norm()
    zero = np.zeros(3)

    if iso.kind == "G1":
        if not (_is_zero_mu(alpha, ref) and _is_zero_mu(u, ref)):
            raise InternalClassifierError("fixed-point stabilizer with nonzero momentum")
        return OptimalLabel(1, MomentumValue(zero, zero), iso)

    if iso.kind in ("G2", "G3"):
        if _is_zero_mu(u, ref):
            if not _is_zero_mu(alpha, ref):
                raise InternalClassifierError("axial stabilizer: u = 0 forces alpha = 0")
            case = 2 if iso.kind == "G2" else 4
            return OptimalLabel(case, MomentumValue(zero, zero), iso)
        d0 = float(np.dot(u, iso.ydir))
        if max_err(u, d0 * iso.ydir) > 1e-8:
            raise InternalClassifierError("axial stabilizer with u off the axis")
        if iso.kind == "G2":
            return OptimalLabel(3, MomentumValue(zero, d0 * iso.ydir), iso, delta0=d0)
        snapped = MomentumValue(d0 * np.cross(iso.x, iso.ydir), d0 * iso.ydir)
        return OptimalLabel(5, snapped, iso, delta0=d0)

    # trivial stabilizer: split on the momentum value
    if _is_zero_mu(u, ref):
        if _is_zero_mu(alpha, ref):
            raise InternalClassifierError("trivial stabilizer with zero momentum")
        return OptimalLabel(6, MomentumValue(alpha, zero), iso)
    F = frame_rotation(u)
    unorm2 = float(np.dot(u, u))
    if _is_zero_mu(alpha, ref):
        return OptimalLabel(7, MomentumValue(zero, u), iso, frame=F)
    dot = float(np.dot(alpha, u))
    if _is_zero_mu(np.cross(alpha, u), ref * np.linalg.norm(u)):
        d0 = dot / unorm2
        return OptimalLabel(8, MomentumValue(d0 * u, u), iso, delta0=d0, frame=F)
    a_shift = np.cross(u, alpha) / unorm2
    if abs(dot) <= max(MU_ATOL, MU_RTOL * ref) * np.linalg.norm(u):
        snapped = MomentumValue(np.cross(a_shift, u), u)
        return OptimalLabel(9, snapped, iso, a_shift=a_shift, frame=F)
    d0 = dot / unorm2
    return OptimalLabel(10, MomentumValue(alpha, u), iso, delta0=d0, a_shift=a_shift, frame=F)


def label(m: PhasePoint, eps: float = EPS_PAR) -> OptimalLabel:
    """Label of the level set through m."""
    return label_from_parts(momentum_map(m), isotropy_class(m, eps))


def labels_equal(r1: OptimalLabel, r2: OptimalLabel, tol: float = ISO_TOL) -> bool:
    return (
        r1.case_id == r2.case_id
        and momentum_close(r1.mu, r2.mu)
        and same_class(r1.iso, r2.iso, tol)
    )


def level_set_contains(
    rho: OptimalLabel,
    m: PhasePoint,
    rtol: float = MU_RTOL,
    atol: float = MU_ATOL,
    iso_tol: float = ISO_TOL,
) -> bool:
    """Is m on the level set of rho (momentum matches, same stabilizer)?"""
    if not momentum_close(momentum_map(m), rho.mu, rtol, atol):
        return False
    return same_class(isotropy_class(m), rho.iso, iso_tol)


# --------------------------------------------------------------------------
# shadow labels and frame helpers (cases 7-10)
# --------------------------------------------------------------------------


def case7_shadow(rho: OptimalLabel) -> OptimalLabel:
    """The zero-angular-momentum label a case-9 set translates back to."""
    if rho.case_id == 7:
        return rho
    if rho.case_id != 9:
        raise ValueError("shadow with zero angular momentum exists for case 9 only")
    return label_from_parts(MomentumValue(np.zeros(3), rho.mu.u), IsotropyClass("G4"))


def case8_shadow(rho: OptimalLabel) -> OptimalLabel:
    """The aligned-momentum label a case-10 set translates back to."""
    if rho.case_id == 8:
        return rho
    if rho.case_id != 10:
        raise ValueError("shadow with aligned momenta exists for case 10 only")
    return label_from_parts(
        MomentumValue(rho.delta0 * rho.mu.u, rho.mu.u), IsotropyClass("G4")
    )


def _to_frame(rho: OptimalLabel, m: PhasePoint) -> PhasePoint:
    F = rho.frame
    return PhasePoint(F @ m.q1, F @ m.q2, F @ m.p1, F @ m.p2)


def _from_frame(rho: OptimalLabel, m: PhasePoint) -> PhasePoint:
    F = rho.frame
    return PhasePoint(F.T @ m.q1, F.T @ m.q2, F.T @ m.p1, F.T @ m.p2)


def _translate(m: PhasePoint, a: np.ndarray) -> PhasePoint:
    return PhasePoint(m.q1 + a, m.q2 + a, m.p1, m.p2)


def case7_coordinates(rho: OptimalLabel, m: PhasePoint):
    """Plane coordinates (s, tau, r, mu_q1, mu_q2, lam) of a point of a
    case-7 level set.

    All four state vectors of such a point lie in one vertical plane; the
    shared plane angle s is read off the longer of the two horizontal
    reference vectors (relative position, first momentum) and the signed
    coefficients follow by projection.
    """
    if rho.case_id != 7:
        raise ValueError("plane coordinates are defined on case-7 level sets")
    mf = _to_frame(rho, m)
    u03 = rho.u03
    lam = float(mf.p1[2]) / u03
    mu1 = float(mf.q1[2]) / u03
    mu2 = float(mf.q2[2]) / u03
    hd = np.array([mf.q2[0] - mf.q1[0], mf.q2[1] - mf.q1[1]])
    hp = np.array([mf.p1[0], mf.p1[1]])
    h = hd if np.linalg.norm(hd) >= np.linalg.norm(hp) else hp
    hnorm = float(np.linalg.norm(h))
    if hnorm <= 1e-14 * max(1.0, m.scale()):
        raise LevelSetMembershipError(
            "both horizontal coefficients vanish; point is off the level set"
        )
    s = wrap_pi(float(np.arctan2(h[1], h[0])))
    b = beta(s)[:2]
    r_q1q2 = float(np.dot(hd, b))
    r_p = float(np.dot(hp, b))
    tau = float(np.arctan2(r_p, r_q1q2)) % (2.0 * np.pi)
    r = float(np.hypot(r_p, r_q1q2))
    return s, tau, r, mu1, mu2, lam


def case7_constraint_residual(rho: OptimalLabel, m: PhasePoint) -> float:
    """Residual of the closure constraint tying the horizontal coefficients.

    Zero angular momentum forces r_q1 + r_q1q2 (1 - lam) + r_p (mu2 - mu1)
    to vanish on the level set.
    """
    s, tau, r, mu1, mu2, lam = case7_coordinates(rho, m)
    mf = _to_frame(rho, m)
    b = beta(s)[:2]
    r_q1 = float(np.dot(np.array([mf.q1[0], mf.q1[1]]), b))
    r_q1q2 = r * np.cos(tau)
    r_p = r * np.sin(tau)
    return r_q1 + r_q1q2 * (1.0 - lam) + r_p * (mu2 - mu1)


def _drop_normal_components(m: PhasePoint) -> PhasePoint:
    """Project both positions onto the plane orthogonal to p1 x p2."""
    N = np.cross(m.p1, m.p2)
    n2 = float(np.dot(N, N))
    if n2 <= 0.0:
        raise LevelSetMembershipError("momenta are collinear; no normal direction")
    q1 = m.q1 - (np.dot(m.q1, N) / n2) * N
    q2 = m.q2 - (np.dot(m.q2, N) / n2) * N
    return PhasePoint(q1, q2, m.p1, m.p2)


# --------------------------------------------------------------------------
# parametrizations of the level sets
# --------------------------------------------------------------------------


def parametrize(rho: OptimalLabel, params) -> PhasePoint:
    """Point of the level set at the given parametrization values.

    Parameter tuples: case 1 ``()``; cases 2/4 ``(lam, delta, gamma)`` with
    (delta, gamma) != (0, 0); cases 3/5 ``(lam, beta, gamma)``; case 6
    ``(q2, p1, lam)`` with p1 a nonzero vector orthogonal to the angular
    momentum; cases 7-10 ``(s, tau, r, mu_q1, mu_q2, lam)`` with s in
    [0, pi), tau in [0, 2 pi), r > 0 and, for cases 8/10, sin(tau) != 0.
    """
    c = rho.case_id
    if c == 1:
        x0 = rho.iso.x
        return PhasePoint(x0, x0, np.zeros(3), np.zeros(3))

    if c in (2, 4):
        lam, delta, gamma = (float(v) for v in params)
        if delta == 0.0 and gamma == 0.0:
            raise ParamDomainError("delta and gamma cannot both vanish (cases 2/4)")
        y0, x0 = rho.y0, rho.x0
        bta = lam - delta
        return PhasePoint(
            lam * y0 + x0, bta * y0 + x0, gamma * y0, -gamma * y0
        )

    if c in (3, 5):
        lam, bta, gamma = (float(v) for v in params)
        y0, x0 = rho.y0, rho.x0
        return PhasePoint(
            lam * y0 + x0,
            bta * y0 + x0,
            gamma * y0,
            (rho.delta0 - gamma) * y0,
        )

    if c == 6:
        q2, p1, lam = params
        q2, p1, lam = vec3(q2), vec3(p1), float(lam)
        al = rho.alpha0
        pn = float(np.linalg.norm(p1))
        if pn <= 1e-12:
            raise ParamDomainError("p1 must be nonzero (case 6)")
        if abs(np.dot(p1, al)) > 1e-9 * pn * np.linalg.norm(al):
            raise ParamDomainError(
                "p1 must lie in the plane orthogonal to the angular momentum (case 6)"
            )
        v = np.cross(p1, al) / pn**2
        return PhasePoint(q2 + v + lam * p1, q2, p1, -p1)

    if c in (7, 8, 9, 10):
        s, tau, r, mu1, mu2, lam = (float(v) for v in params)
        if not (0.0 <= s < np.pi):
            raise ParamDomainError("plane angle s must lie in [0, pi)")
        if not (0.0 <= tau < 2.0 * np.pi):
            raise ParamDomainError("tau must lie in [0, 2 pi)")
        if r <= 0.0:
            raise ParamDomainError("radius r must be positive")
        r_q1q2 = r * np.cos(tau)
        r_p = r * np.sin(tau)
        if c in (8, 10) and r_p == 0.0:
            raise ParamDomainError("sin(tau) = 0 excluded (vanishing momentum coefficient)")
        u03 = rho.u03
        u0f = np.array([0.0, 0.0, u03])
        b = beta(s)
        r_q1 = -(r_q1q2 * (1.0 - lam) + r_p * (mu2 - mu1))
        q1 = r_q1 * b + mu1 * u0f
        q2 = (r_q1 + r_q1q2) * b + mu2 * u0f
        p1 = r_p * b + lam * u0f
        p2 = -r_p * b + (1.0 - lam) * u0f
        if c in (8, 10):
            # shift positions along the momentum normal (the chart map)
            d0 = rho.delta0
            N = r_p * u03 * np.array([np.sin(s), -np.cos(s), 0.0])
            q1 = q1 + (d0 * (1.0 - lam) / r_p**2) * N
            q2 = q2 - (d0 * lam / r_p**2) * N
        m = _from_frame(rho, PhasePoint(q1, q2, p1, p2))
        if c in (9, 10):
            m = _translate(m, rho.a_shift)
        return m

    raise ValueError(f"unknown case {c}")


# --------------------------------------------------------------------------
# projection to reduced coordinates and its sections
# --------------------------------------------------------------------------


def double_cover(rho: OptimalLabel, plus_pt) -> ReducedPoint:
    """Two-to-one polar map (r, phi+) -> (r, 2 phi+) of cases 2/4.

    Antipodal stage-one coordinates land on the same reduced point.
    """
    if rho.case_id not in (2, 4):
        raise ValueError("double cover applies to cases 2/4 only")
    xp, yp = (float(v) for v in plus_pt)
    r = float(np.hypot(xp, yp))
    if r == 0.0:
        raise ParamDomainError("stage-one coordinates cannot vanish")
    phi = 2.0 * float(np.arctan2(yp, xp))
    return ReducedPoint(rho.case_id, [r * np.cos(phi), r * np.sin(phi)])


def lift_double_cover(rho: OptimalLabel, pt: ReducedPoint) -> tuple[float, float]:
    """Stage-one representative with half the polar angle in [0, pi)."""
    x, y = pt.coords
    r = float(np.hypot(x, y))
    if r == 0.0:
        raise ParamDomainError("reduced point cannot vanish (cases 2/4)")
    phi = float(np.arctan2(y, x)) % (2.0 * np.pi)
    half = phi / 2.0
    return r * np.cos(half), r * np.sin(half)


def project(rho: OptimalLabel, m: PhasePoint, check: bool = True) -> ReducedPoint:
    """Reduced coordinates of a level-set point; constant on symmetry orbits."""
    if check and not level_set_contains(rho, m):
        raise LevelSetMembershipError(
            f"point is not on the level set of case {rho.case_id}"
        )
    c = rho.case_id
    if c == 1:
        return ReducedPoint(1, [])

    if c in (2, 4):
        y0 = rho.y0
        delta = float(np.dot(m.q1 - m.q2, y0))
        gamma = float(np.dot(m.p1, y0))
        return double_cover(rho, (delta, gamma))

    if c in (3, 5):
        y0 = rho.y0
        return ReducedPoint(
            c, [float(np.dot(m.q1 - m.q2, y0)), float(np.dot(m.p1, y0))]
        )

    if c == 6:
        cmag = float(np.linalg.norm(m.p1))
        if cmag <= 0.0:
            raise LevelSetMembershipError("p1 vanishes; point is off the level set")
        v = np.cross(m.p1, rho.alpha0) / cmag**2
        lam = float(np.dot(m.q1 - m.q2 - v, m.p1)) / cmag**2
        return ReducedPoint(6, [cmag, lam])

    if c in (7, 9):
        m7 = m if c == 7 else _translate(m, -rho.a_shift)
        base = rho if c == 7 else case7_shadow(rho)
        s, tau, r, mu1, mu2, lam = case7_coordinates(base, m7)
        return ReducedPoint(c, [wrap_pi(tau), r, mu2 - mu1, lam])

    if c in (8, 10):
        m8 = m if c == 8 else _translate(m, -rho.a_shift)
        base = rho if c == 8 else case8_shadow(rho)
        shadow7 = label_from_parts(
            MomentumValue(np.zeros(3), base.mu.u), IsotropyClass("G4")
        )
        mN = _drop_normal_components(m8)
        s, tau, r, mu1, mu2, lam = case7_coordinates(shadow7, mN)
        return ReducedPoint(c, [wrap_pi(tau), r, mu2 - mu1, lam])

    raise ValueError(f"unknown case {c}")


def section(rho: OptimalLabel, pt: ReducedPoint) -> PhasePoint:
    """Level-set point projecting to pt.

    Cases 2/4 use the stage-one section on a lift through the double
    cover; all other cases are global sections.
    """
    if pt.case_id != rho.case_id:
        raise ValueError("reduced point belongs to a different case")
    c = rho.case_id
    if c == 1:
        return parametrize(rho, ())
    if c in (2, 4):
        xp, yp = lift_double_cover(rho, pt)
        return parametrize(rho, (xp, xp, yp))
    if c in (3, 5):
        delta, gamma = pt.coords
        return parametrize(rho, (delta, 0.0, gamma))
    if c == 6:
        cmag, lam = pt.coords
        if cmag <= 0.0:
            raise ParamDomainError("c must be positive (case 6)")
        f = case6_frame_vector(rho.alpha0)
        return parametrize(rho, (np.zeros(3), cmag * f, lam))
    if c in (7, 8, 9, 10):
        nu, r, mu, lam = pt.coords
        if r <= 0.0:
            raise ParamDomainError("radius r must be positive")
        if not (0.0 <= nu < np.pi):
            raise ParamDomainError("nu must lie in [0, pi)")
        if c in (8, 10) and nu == 0.0:
            raise ParamDomainError("nu = 0 excluded (cases 8/10)")
        return parametrize(rho, (nu, nu, r, 0.0, mu, lam))
    raise ValueError(f"unknown case {c}")


def case6_frame_vector(alpha0) -> np.ndarray:
    """Deterministic unit vector in the plane orthogonal to alpha0.

    The normalized orthogonal projection of e1, falling back to e2 when
    alpha0 is along e1.
    """
    al = vec3(alpha0)
    n = al / np.linalg.norm(al)
    for e in (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])):
        f = e - np.dot(e, n) * n
        fn = float(np.linalg.norm(f))
        if fn > 1e-6:
            return f / fn
    raise InternalClassifierError("no frame vector found")  # pragma: no cover


# --------------------------------------------------------------------------
# transports between conjugate cases and the chart map
# --------------------------------------------------------------------------


def transport(a, rho: OptimalLabel) -> OptimalLabel:
    """Label of the translated level set: transport(a, label(m)) labels
    the translate of m by a."""
    g = SE3Element.translation(a)
    return label_from_parts(coadjoint(g, rho.mu), conjugate_class(rho.iso, g))


def chart_map_F_p(rho8: OptimalLabel, m7: PhasePoint, check: bool = True) -> PhasePoint:
    """Shift a chart-interior case-7 point onto the case-8 level set.

    Positions move along the momentum normal N = p1 x p2 by
    ``delta0 (1 - lam) / r_p^2`` and ``-delta0 lam / r_p^2``; momenta are
    untouched.  Dropping the normal components again inverts the map.
    """
    if rho8.case_id != 8:
        raise ValueError("target label must be case 8")
    shadow7 = label_from_parts(
        MomentumValue(np.zeros(3), rho8.mu.u), IsotropyClass("G4")
    )
    if check and not level_set_contains(shadow7, m7):
        raise LevelSetMembershipError("input is not on the matching case-7 level set")
    u = rho8.mu.u
    u2 = float(np.dot(u, u))
    lam = float(np.dot(m7.p1, u)) / u2
    rp2 = float(np.dot(m7.p1, m7.p1)) - lam**2 * u2
    if rp2 <= (1e-10 * max(1.0, np.linalg.norm(m7.p1))) ** 2:
        raise ParamDomainError("r_p = 0: point sits on the chart boundary")
    N = np.cross(m7.p1, m7.p2)
    t1 = rho8.delta0 * (1.0 - lam) / rp2
    t2 = -rho8.delta0 * lam / rp2
    return PhasePoint(m7.q1 + t1 * N, m7.q2 + t2 * N, m7.p1, m7.p2)


# --------------------------------------------------------------------------
# symmetry groups of the level sets
# --------------------------------------------------------------------------


def _flip_axis(y0: np.ndarray) -> np.ndarray:
    """Deterministic unit vector orthogonal to y0 (half-turn axis)."""
    k = int(np.argmin(np.abs(y0)))
    e = np.zeros(3)
    e[k] = 1.0
    perp = e - np.dot(e, y0) * y0
    return perp / np.linalg.norm(perp)


def _parallel_to(v: np.ndarray, d: np.ndarray, tol: float) -> bool:
    """Is v within tol of the line spanned by the unit vector d?"""
    resid = v - np.dot(v, d) * d
    return float(np.linalg.norm(resid)) <= tol * max(1.0, float(np.linalg.norm(v)))


@dataclass(frozen=True)
class GRhoDescriptor:
    """Membership test and sampler for the symmetry group of a label."""

    label: OptimalLabel
    description: str

    def contains(self, g: SE3Element, tol: float = 1e-9) -> bool:
        rho = self.label
        c = rho.case_id
        if c == 1:
            return max_err(g.a, rho.iso.x - g.A @ rho.iso.x) <= tol
        if c in (2, 3, 4, 5):
            y0 = rho.y0
            Ay = g.A @ y0
            keeps = max_err(Ay, y0) <= tol
            flips = max_err(Ay, -y0) <= tol
            if c in (3, 5) and not keeps:
                return False
            if not (keeps or flips):
                return False
            shift = g.a if c in (2, 3) else g.a - (rho.x0 - g.A @ rho.x0)
            return _parallel_to(shift, y0, tol)
        if c == 6:
            al = rho.alpha0
            return max_err(g.A @ al, al) <= tol
        # cases 7-10: rotations about the momentum axis and translations
        # along it, conjugated by a_shift for 9/10
        u0 = rho.u0
        udir = u0 / np.linalg.norm(u0)
        if c in (9, 10):
            g = conjugation(-rho.a_shift, g)
        if max_err(g.A @ u0, u0) > tol:
            return False
        return _parallel_to(g.a, udir, tol)

    def sample_batch(self, rng: np.random.Generator, n: int):
        """n random members as stacked (n,3,3) rotations and (n,3) shifts."""
        rho = self.label
        c = rho.case_id
        if c == 1:
            from .isotropy import sample_members_batch

            return sample_members_batch(rho.iso, rng, n)
        if c in (2, 3, 4, 5):
            y0 = rho.y0
            A = rotations_about_axis(y0, rng.uniform(0.0, 2.0 * np.pi, size=n))
            if c in (2, 4):
                B = rotation_about_axis(_flip_axis(y0), np.pi)
                flip = rng.integers(0, 2, size=n).astype(bool)
                A[flip] = A[flip] @ B
            eta = rng.normal(scale=1.5, size=n)
            a = eta[:, None] * y0
            if c in (4, 5):
                a = a + rho.x0 - np.einsum("nij,j->ni", A, rho.x0)
            return A, a
        if c == 6:
            A = rotations_about_axis(rho.alpha0, rng.uniform(0.0, 2.0 * np.pi, size=n))
            return A, rng.normal(scale=1.5, size=(n, 3))
        u0 = rho.u0
        udir = u0 / np.linalg.norm(u0)
        A = rotations_about_axis(u0, rng.uniform(0.0, 2.0 * np.pi, size=n))
        a = rng.normal(scale=1.5, size=n)[:, None] * udir
        if c in (9, 10):
            sh = rho.a_shift
            a = a + sh - np.einsum("nij,j->ni", A, sh)
        return A, a

    def sample(self, rng: np.random.Generator, n: int = 1) -> list[SE3Element]:
        A, a = self.sample_batch(rng, n)
        return [SE3Element(A[i], a[i]) for i in range(n)]

    def flip_element(self) -> SE3Element:
        """The order-two element reversing the axis (cases 2/4 only)."""
        rho = self.label
        if rho.case_id not in (2, 4):
            raise ValueError("flip element exists for cases 2/4 only")
        B = rotation_about_axis(_flip_axis(rho.y0), np.pi)
        a = np.zeros(3) if rho.case_id == 2 else rho.x0 - B @ rho.x0
        return SE3Element(B, a)


_GRHO_TEXT = {
    1: "all rotations about the fixed point",
    2: "rotations preserving the axis line (both signs) with shifts along it",
    3: "rotations about the axis with shifts along it",
    4: "rotations preserving the offset axis line with shifts along it",
    5: "rotations about the offset axis with shifts along it",
    6: "rotations about the angular momentum with arbitrary shifts",
    7: "rotations about the momentum axis with shifts along it",
    8: "rotations about the momentum axis with shifts along it",
    9: "case-7 group conjugated by the horizontal shift",
    10: "case-8 group conjugated by the horizontal shift",
}


def g_rho(rho: OptimalLabel) -> GRhoDescriptor:
    return GRhoDescriptor(rho, _GRHO_TEXT[rho.case_id])


# --------------------------------------------------------------------------
# momentum fibers as unions of level sets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FiberFamily:
    """One family in the decomposition of a momentum fiber.

    Either a single fixed label, or (zero momentum only) a family swept by
    a free stabilizer datum named in ``parameter``.
    """

    case_id: int
    label: OptimalLabel | None = None
    parameter: str | None = None

    def matches(self, rho: OptimalLabel, tol: float = ISO_TOL) -> bool:
        if rho.case_id != self.case_id:
            return False
        if self.label is None:
            return True
        return labels_equal(rho, self.label, tol)


def decompose_momentum_fiber(mu: MomentumValue) -> list[FiberFamily]:
    """Level-set families making up the momentum fiber of mu.

    Zero momentum splits into the fixed-point family, the axial family and
    the offset-axial family; every other momentum value meets at most two
    stabilizer classes.
    """
    alpha, u = mu.alpha, mu.u
    ref = mu.norm()
    g4 = IsotropyClass("G4")
    if _is_zero_mu(u, ref):
        if _is_zero_mu(alpha, ref):
            return [
                FiberFamily(1, parameter="x"),
                FiberFamily(2, parameter="[y]"),
                FiberFamily(4, parameter="[x,y]"),
            ]
        return [FiberFamily(6, label_from_parts(mu, g4))]
    if _is_zero_mu(alpha, ref):
        iso3 = canonicalize("G2", y=u)
        return [
            FiberFamily(3, label_from_parts(mu, iso3)),
            FiberFamily(7, label_from_parts(mu, g4)),
        ]
    if _is_zero_mu(np.cross(alpha, u), ref * np.linalg.norm(u)):
        return [FiberFamily(8, label_from_parts(mu, g4))]
    if abs(np.dot(alpha, u)) <= max(MU_ATOL, MU_RTOL * ref) * np.linalg.norm(u):
        a9 = np.cross(u, alpha) / float(np.dot(u, u))
        iso5 = canonicalize("G3", x=a9, y=u)
        return [
            FiberFamily(9, label_from_parts(mu, g4)),
            FiberFamily(5, label_from_parts(mu, iso5)),
        ]
    return [FiberFamily(10, label_from_parts(mu, g4))]


# --------------------------------------------------------------------------
# transporter solve: the group element moving one level-set point to another
# --------------------------------------------------------------------------


def solve_transporter(
    rho: OptimalLabel, m_from: PhasePoint, m_to: PhasePoint, tol: float = 1e-8
) -> SE3Element:
    """Group element g of the label's symmetry group with g . m_from = m_to.

    Solved in closed form per case; raises if the two points are not on a
    common orbit within tolerance.
    """
    from .euclid import act_phase

    c = rho.case_id

    def _check(g: SE3Element) -> SE3Element:
        moved = act_phase(g, m_from)
        err = max_err(moved.as_vector(), m_to.as_vector())
        if err > tol:
            raise LevelSetMembershipError(
                f"points are not on one orbit (residual {err:.3e})"
            )
        return g

    if c == 1:
        return _check(SE3Element.identity())

    if c in (2, 3, 4, 5):
        y0, x0 = rho.y0, rho.x0
        lam_f = float(np.dot(m_from.q1 - x0, y0))
        lam_t = float(np.dot(m_to.q1 - x0, y0))
        gam_f = float(np.dot(m_from.p1, y0))
        gam_t = float(np.dot(m_to.p1, y0))
        del_f = float(np.dot(m_from.q1 - m_from.q2, y0))
        del_t = float(np.dot(m_to.q1 - m_to.q2, y0))
        signs = (1.0,) if c in (3, 5) else (1.0, -1.0)
        best = None
        for sign in signs:
            eta = lam_t - sign * lam_f
            resid = abs(gam_t - sign * gam_f) + abs(del_t - sign * del_f)
            if best is None or resid < best[0]:
                best = (resid, sign, eta)
        _, sign, eta = best
        A = np.eye(3) if sign > 0 else rotation_about_axis(_flip_axis(y0), np.pi)
        a = eta * y0 + (x0 - A @ x0)
        return _check(SE3Element(A, a))

    if c == 6:
        al = rho.alpha0
        n = al / np.linalg.norm(al)
        cmag = float(np.linalg.norm(m_from.p1))
        e1 = m_from.p1 / cmag
        e2 = np.cross(n, e1)
        theta = float(np.arctan2(np.dot(m_to.p1, e2), np.dot(m_to.p1, e1)))
        A = rotation_about_axis(al, theta)
        return _check(SE3Element(A, m_to.q2 - A @ m_from.q2))

    # cases 7-10: rotate about the momentum axis and shift along it; for
    # 9/10 solve on the translated pair and conjugate, for 8/10 solve on
    # the normal-projected shadow (the chart map is equivariant).
    if c in (9, 10):
        base = case7_shadow(rho) if c == 9 else case8_shadow(rho)
        g = solve_transporter(
            base,
            _translate(m_from, -rho.a_shift),
            _translate(m_to, -rho.a_shift),
            tol=tol,
        )
        return _check(conjugation(rho.a_shift, g))
    if c == 8:
        shadow7 = label_from_parts(
            MomentumValue(np.zeros(3), rho.mu.u), IsotropyClass("G4")
        )
        g = solve_transporter(
            shadow7,
            _drop_normal_components(m_from),
            _drop_normal_components(m_to),
            tol=tol,
        )
        return _check(g)

    s_f, tau_f, *_ = case7_coordinates(rho, m_from)
    s_t, tau_t, *_ = case7_coordinates(rho, m_to)
    mf_f = _to_frame(rho, m_from)
    mf_t = _to_frame(rho, m_to)
    u03 = rho.u03
    xi = (float(mf_t.q1[2]) - float(mf_f.q1[2])) / u03
    dtau = (tau_t - tau_f) % (2.0 * np.pi)
    same_branch = min(dtau, 2.0 * np.pi - dtau) < np.pi / 2.0
    theta = (s_t - s_f) if same_branch else (s_t - s_f + np.pi)
    Af = rotation_about_axis(E3, theta)
    af = np.array([0.0, 0.0, xi * u03])
    F = rho.frame
    return _check(SE3Element(F.T @ Af @ F, F.T @ af))


# --------------------------------------------------------------------------
# random labels, parameters and reduced points (test/verification helpers)
# --------------------------------------------------------------------------


def _unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _mag(rng: np.random.Generator, lo: float = 0.3, hi: float = 2.0) -> float:
    return float(rng.uniform(lo, hi) * rng.choice([-1.0, 1.0]))


def random_label(case_id: int, rng: np.random.Generator) -> OptimalLabel:
    """Random label of the given case with order-one data."""
    zero = np.zeros(3)
    if case_id == 1:
        return label_from_parts(
            MomentumValue(zero, zero), canonicalize("G1", x=rng.normal(size=3))
        )
    if case_id in (2, 3):
        iso = canonicalize("G2", y=_unit(rng))
        if case_id == 2:
            return label_from_parts(MomentumValue(zero, zero), iso)
        return label_from_parts(MomentumValue(zero, _mag(rng) * iso.ydir), iso)
    if case_id in (4, 5):
        y = _unit(rng)
        x = _unit(rng) * rng.uniform(0.3, 2.0)
        while np.linalg.norm(np.cross(x, y)) < 0.1:
            x = _unit(rng) * rng.uniform(0.3, 2.0)
        iso = canonicalize("G3", x=x, y=y)
        if case_id == 4:
            return label_from_parts(MomentumValue(zero, zero), iso)
        d0 = _mag(rng)
        mu = MomentumValue(d0 * np.cross(iso.x, iso.ydir), d0 * iso.ydir)
        return label_from_parts(mu, iso)
    g4 = IsotropyClass("G4")
    if case_id == 6:
        return label_from_parts(
            MomentumValue(_unit(rng) * rng.uniform(0.3, 2.0), zero), g4
        )
    u = _unit(rng) * rng.uniform(0.5, 2.0)
    if case_id == 7:
        return label_from_parts(MomentumValue(zero, u), g4)
    if case_id == 8:
        return label_from_parts(MomentumValue(_mag(rng) * u, u), g4)
    w = np.cross(u, rng.normal(size=3))
    w = w / np.linalg.norm(w)
    if case_id == 9:
        return label_from_parts(MomentumValue(_mag(rng) * w, u), g4)
    if case_id == 10:
        udir = u / np.linalg.norm(u)
        alpha = _mag(rng) * w + _mag(rng) * udir
        return label_from_parts(MomentumValue(alpha, u), g4)
    raise ValueError(f"unknown case {case_id}")


def random_level_set_param(rho: OptimalLabel, rng: np.random.Generator):
    """Random parametrization tuple in the label's domain."""
    c = rho.case_id
    if c == 1:
        return ()
    if c in (2, 4):
        rr = rng.uniform(0.3, 2.0)
        phi = rng.uniform(0.0, 2.0 * np.pi)
        return (rng.uniform(-2.0, 2.0), rr * np.cos(phi), rr * np.sin(phi))
    if c in (3, 5):
        return tuple(rng.uniform(-2.0, 2.0, size=3))
    if c == 6:
        al = rho.alpha0
        n = al / np.linalg.norm(al)
        f1 = case6_frame_vector(al)
        f2 = np.cross(n, f1)
        ang = rng.uniform(0.0, 2.0 * np.pi)
        p1 = rng.uniform(0.3, 2.0) * (np.cos(ang) * f1 + np.sin(ang) * f2)
        return (rng.normal(size=3), p1, rng.uniform(-2.0, 2.0))
    s = rng.uniform(0.0, np.pi * 0.999999)
    if c in (7, 9):
        tau = rng.uniform(0.0, 2.0 * np.pi)
    else:
        # keep sin(tau) bounded away from zero
        half = rng.choice([0.0, np.pi])
        tau = half + rng.uniform(0.1, np.pi - 0.1)
    return (
        s,
        tau,
        rng.uniform(0.3, 2.0),
        rng.uniform(-2.0, 2.0),
        rng.uniform(-2.0, 2.0),
        rng.uniform(-2.0, 2.0),
    )


def random_reduced_point(rho: OptimalLabel, rng: np.random.Generator) -> ReducedPoint:
    """Random reduced point in the label's domain (away from boundaries)."""
    c = rho.case_id
    if c == 1:
        return ReducedPoint(1, [])
    if c in (2, 4):
        rr = rng.uniform(0.3, 2.0)
        phi = rng.uniform(0.0, 2.0 * np.pi)
        return ReducedPoint(c, [rr * np.cos(phi), rr * np.sin(phi)])
    if c in (3, 5):
        return ReducedPoint(c, rng.uniform(-2.0, 2.0, size=2))
    if c == 6:
        return ReducedPoint(6, [rng.uniform(0.3, 2.0), rng.uniform(-2.0, 2.0)])
    if c in (7, 9):
        nu = rng.uniform(0.0, np.pi * 0.999999)
    else:
        nu = rng.uniform(0.05, np.pi - 0.05)
    return ReducedPoint(
        c,
        [nu, rng.uniform(0.3, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)],
    )
