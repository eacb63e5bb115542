"""Reduced symplectic forms, reduced Hamiltonians and the two flows.

Each label carries a closed-form two-form on its reduced coordinates (from
the summary table of the construction) which equals the pullback of the
canonical form through the section; :func:`pullback_form_numeric` checks
that by finite differences.  Invariant Hamiltonians descend through the
section, the reduced flow follows by inverting the form, and
:func:`commutation_check` verifies that projecting the full flow
reproduces the reduced one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonians import HamiltonianSpec, numeric_gradient
from .momentum import PhasePoint
from .optimal import (
    LevelSetMembershipError,
    OptimalLabel,
    ParamDomainError,
    ReducedPoint,
    level_set_contains,
    parametrize,
    project,
    section,
)
from .projcyl import angle_dist_pi, wrap_pi


class IntegrationError(RuntimeError):
    """Fixed-point iteration of the implicit step failed to converge."""


class ChartEscapeError(RuntimeError):
    """Trajectory left the coordinate domain of its reduced chart."""

    def __init__(self, message: str, exit_time: float):
        super().__init__(f"{message} (t = {exit_time:.6g})")
        self.exit_time = exit_time


class DegenerateFormError(ValueError):
    """Reduced form is singular at the requested point."""


_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def reduced_form(rho: OptimalLabel, pt: ReducedPoint) -> np.ndarray:
    """Matrix of the reduced two-form in the case's coordinate order.

    Cases 2/4 carry half the area form of the doubly covered plane; cases
    3/5 the area form in (delta, gamma); case 6 is ``c dlam ^ dc`` in
    (c, lambda); cases 7-10 are ``-r dr ^ dnu - u03^2 dmu ^ dlam`` in
    (nu, r, mu, lambda).  Case 1 is the empty form.
    """
    c = rho.case_id
    if c == 1:
        return np.zeros((0, 0))
    if c in (2, 4):
        x, y = pt.coords
        if x == 0.0 and y == 0.0:
            raise ParamDomainError("origin excluded (cases 2/4)")
        return 0.5 * _J2.copy()
    if c in (3, 5):
        return _J2.copy()
    if c == 6:
        cmag, _ = pt.coords
        if cmag <= 0.0:
            raise ParamDomainError("c must be positive (case 6)")
        return np.array([[0.0, -cmag], [cmag, 0.0]])
    nu, r, _, _ = pt.coords
    if r <= 0.0:
        raise ParamDomainError("radius r must be positive")
    if c in (8, 10) and wrap_pi(nu) == 0.0:
        raise ParamDomainError("nu = 0 excluded (cases 8/10)")
    u2 = rho.u03 ** 2
    M = np.zeros((4, 4))
    M[0, 1] = r
    M[1, 0] = -r
    M[2, 3] = -u2
    M[3, 2] = u2
    return M


def reduced_form_plus(rho: OptimalLabel) -> np.ndarray:
    """Stage-one form of cases 2/4 in the (delta, gamma) chart."""
    if rho.case_id not in (2, 4):
        raise ValueError("stage-one form exists for cases 2/4 only")
    return _J2.copy()


def canonical_form_matrix() -> np.ndarray:
    """Canonical two-form on flat (q, p) 12-vectors."""
    omega = np.zeros((12, 12))
    omega[0:6, 6:12] = np.eye(6)
    omega[6:12, 0:6] = -np.eye(6)
    return omega


def _section_vec(rho: OptimalLabel, coords: np.ndarray) -> np.ndarray:
    """Flat section image; cases 2/4 take stage-one (delta, gamma) input."""
    c = rho.case_id
    if c in (2, 4):
        xp, yp = coords
        return parametrize(rho, (xp, xp, yp)).as_vector()
    return section(rho, ReducedPoint(c, coords)).as_vector()


def pullback_form_numeric(rho: OptimalLabel, pt, h: float = 1e-5) -> np.ndarray:
    """Finite-difference pullback of the canonical form through the section.

    ``pt`` is a ReducedPoint (or, for cases 2/4, the stage-one
    (delta, gamma) pair).  Central differences with step h build the
    section Jacobian S; the result is S^T Omega S.
    """
    if h <= 0.0:
        raise ValueError("step h must be positive")
    coords = np.asarray(pt.coords if isinstance(pt, ReducedPoint) else pt, dtype=float)
    d = coords.size
    if d == 0:
        return np.zeros((0, 0))
    S = np.empty((12, d))
    for i in range(d):
        cp = coords.copy()
        cm = coords.copy()
        cp[i] += h
        cm[i] -= h
        S[:, i] = (_section_vec(rho, cp) - _section_vec(rho, cm)) / (2.0 * h)
    omega = canonical_form_matrix()
    return S.T @ omega @ S


def reduced_hamiltonian(rho: OptimalLabel, ham: HamiltonianSpec):
    """H on reduced coordinates: the Hamiltonian through the section.

    Well defined because the Hamiltonian is constant on symmetry orbits;
    accepts a ReducedPoint or a bare coordinate array.
    """

    def H_red(pt) -> float:
        coords = np.asarray(
            pt.coords if isinstance(pt, ReducedPoint) else pt, dtype=float
        )
        if rho.case_id in (7, 8, 9, 10):
            coords = coords.copy()
            coords[0] = wrap_pi(coords[0])
        return float(ham.value(section(rho, ReducedPoint(rho.case_id, coords)).as_vector()))

    return H_red


def free_reduced_case7(rho: OptimalLabel, m1: float = 1.0, m2: float = 1.0):
    """Closed-form reduced kinetic energy on cases 7/9 with exact gradient.

    H(nu, r, mu, lam) = r^2 sin^2(nu) (1/(2 m1) + 1/(2 m2))
                        + (lam^2/m1 + (1-lam)^2/m2) u03^2 / 2.
    """
    if rho.case_id not in (7, 9):
        raise ValueError("closed form available for cases 7/9 only")
    u2 = rho.u03 ** 2
    k = 0.5 * (1.0 / m1 + 1.0 / m2)

    def H(coords):
        coords = np.asarray(
            coords.coords if isinstance(coords, ReducedPoint) else coords, dtype=float
        )
        nu, r, _, lam = coords
        return float(
            k * r**2 * np.sin(nu) ** 2
            + 0.5 * u2 * (lam**2 / m1 + (1.0 - lam) ** 2 / m2)
        )

    def grad(coords):
        nu, r, _, lam = np.asarray(coords, dtype=float)
        return np.array(
            [
                k * r**2 * np.sin(2.0 * nu),
                2.0 * k * r * np.sin(nu) ** 2,
                0.0,
                u2 * (lam / m1 - (1.0 - lam) / m2),
            ]
        )

    return H, grad


def reduced_vector_field(
    rho: OptimalLabel, H_red, pt, grad=None, h: float = 1e-6
) -> np.ndarray:
    """Hamiltonian vector field of H_red w.r.t. the reduced form.

    Solves form(X, .) = dH; the gradient comes from ``grad`` when given,
    otherwise by central differences with steps scaled by
    (1 + |coordinate|).
    """
    coords = np.asarray(pt.coords if isinstance(pt, ReducedPoint) else pt, dtype=float)
    if coords.size == 0:
        return np.zeros(0)
    dom = coords.copy()
    if rho.case_id in (7, 8, 9, 10):
        dom[0] = wrap_pi(dom[0])
    M = reduced_form(rho, ReducedPoint(rho.case_id, dom))
    if abs(np.linalg.det(M)) <= 1e-300:
        raise DegenerateFormError("reduced form is singular here")
    g = grad(coords) if grad is not None else numeric_gradient(H_red, coords, h)
    return np.linalg.solve(M.T, g)


def hamiltonian_field(ham: HamiltonianSpec):
    """Canonical vector field on flat 12-vectors: (dH/dp, -dH/dq)."""

    def field(y: np.ndarray) -> np.ndarray:
        g = ham.gradient(y)
        out = np.empty(12)
        out[0:6] = g[6:12]
        out[6:12] = -g[0:6]
        return out

    return field


@dataclass(frozen=True)
class Trajectory:
    """Sampled flow: strictly increasing times and matching states."""

    times: np.ndarray
    states: np.ndarray
    kind: str  # "phase" | "reduced" | "generic"
    meta: dict

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        s = np.asarray(self.states, dtype=float)
        if t.ndim != 1 or s.shape[0] != t.size:
            raise ValueError("times and states do not match")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", s)


def _rk4_step(field, y, h):
    k1 = field(y)
    k2 = field(y + 0.5 * h * k1)
    k3 = field(y + 0.5 * h * k2)
    k4 = field(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _midpoint_step(field, y, h, tol=1e-12, max_iter=50):
    z = y + h * field(y)
    for _ in range(max_iter):
        z_new = y + h * field(0.5 * (y + z))
        if float(np.max(np.abs(z_new - z))) <= tol:
            return z_new
        z = z_new
    raise IntegrationError("implicit midpoint iteration did not converge")


def integrate(field, y0, t_span, step: float, method: str = "rk4") -> Trajectory:
    """Fixed-step integration of an autonomous field over t_span."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    t0, t1 = float(t_span[0]), float(t_span[1])
    n = max(1, int(round((t1 - t0) / step)))
    h = (t1 - t0) / n
    stepper = {"rk4": _rk4_step, "implicit_midpoint": _midpoint_step}.get(method)
    if stepper is None:
        raise ValueError(f"unknown method {method!r}")
    y = np.asarray(y0, dtype=float).copy()
    states = np.empty((n + 1, y.size))
    states[0] = y
    for k in range(n):
        y = stepper(field, y, h)
        states[k + 1] = y
    times = t0 + h * np.arange(n + 1)
    return Trajectory(times, states, "generic", {"method": method, "step": h})


def integrate_full(
    ham: HamiltonianSpec, m0: PhasePoint, T: float, step: float, method: str = "rk4"
) -> Trajectory:
    traj = integrate(hamiltonian_field(ham), m0.as_vector(), (0.0, T), step, method)
    return Trajectory(
        traj.times, traj.states, "phase", {"method": method, "step": step, "hamiltonian": ham.name}
    )


def integrate_reduced(
    rho: OptimalLabel,
    ham: HamiltonianSpec,
    pt0: ReducedPoint,
    T: float,
    step: float,
    method: str = "rk4",
) -> Trajectory:
    """Reduced flow from pt0; uses the closed-form kinetic gradient when
    available, numeric gradients otherwise."""
    grad = None
    if ham.name == "free" and rho.case_id in (7, 9):
        H_red, grad = free_reduced_case7(rho, **ham.params)
    else:
        H_red = reduced_hamiltonian(rho, ham)

    def field(x):
        try:
            return reduced_vector_field(rho, H_red, x, grad=grad)
        except (ParamDomainError, DegenerateFormError) as exc:
            raise ChartEscapeError(str(exc), float("nan")) from exc

    traj = integrate(field, pt0.coords, (0.0, T), step, method)
    return Trajectory(
        traj.times, traj.states, "reduced", {"method": method, "step": step, "hamiltonian": ham.name}
    )


def project_trajectory(rho: OptimalLabel, traj: Trajectory) -> np.ndarray:
    """Reduced coordinates of every state of a full trajectory."""
    from .optimal import REDUCED_COORD_NAMES

    out = np.empty((traj.states.shape[0], len(REDUCED_COORD_NAMES[rho.case_id])))
    for k, y in enumerate(traj.states):
        try:
            out[k] = project(rho, PhasePoint.from_vector(y), check=False).coords
        except (LevelSetMembershipError, ParamDomainError) as exc:
            raise ChartEscapeError(str(exc), float(traj.times[k])) from exc
    return out


def reduced_distance(rho: OptimalLabel, a, b) -> float:
    """Distance of two reduced coordinate tuples; angles compared modulo pi."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0:
        return 0.0
    d = np.abs(a - b)
    if rho.case_id in (7, 8, 9, 10):
        d[0] = angle_dist_pi(float(a[0]), float(b[0]))
    return float(np.max(d))


def commutation_check(
    rho: OptimalLabel,
    ham: HamiltonianSpec,
    m0: PhasePoint,
    T: float,
    step: float,
    method: str = "rk4",
) -> float:
    """Sup distance between the projected full flow and the reduced flow.

    Integrates both systems from matching initial data and returns the
    largest reduced-coordinate deviation along the way (angle coordinates
    compared modulo pi).
    """
    if not level_set_contains(rho, m0):
        raise LevelSetMembershipError("initial point is not on the label's level set")
    full = integrate_full(ham, m0, T, step, method)
    projected = project_trajectory(rho, full)
    red = integrate_reduced(rho, ham, project(rho, m0), T, step, method)
    worst = 0.0
    for k in range(projected.shape[0]):
        worst = max(worst, reduced_distance(rho, projected[k], red.states[k]))
    return worst


def conservation_report(ham: HamiltonianSpec, traj: Trajectory) -> dict:
    """Maximal drift of the energy and of the six momentum components."""
    if traj.kind != "phase":
        raise ValueError("conservation report needs a full phase-space trajectory")
    ys = traj.states
    J = momentum_of_states(ys)
    dJ = float(np.max(np.abs(J - J[0])))
    H = np.array([ham.value(y) for y in ys])
    dH = float(np.max(np.abs(H - H[0])))
    return {"dH": dH, "dJ": dJ}


def momentum_of_states(states: np.ndarray) -> np.ndarray:
    """Six momentum components for every row of a (n, 12) state array."""
    q1, q2, p1, p2 = states[:, 0:3], states[:, 3:6], states[:, 6:9], states[:, 9:12]
    return np.hstack([np.cross(q1, p1) + np.cross(q2, p2), p1 + p2])
