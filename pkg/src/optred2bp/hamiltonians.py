"""Invariant two-body Hamiltonians and a small plugin registry.

Shipped evaluators: ``free`` (kinetic only), ``kepler`` (Newtonian
gravity) and ``pn1`` (first relativistic correction in the standard
two-point-mass form; externally sourced coefficients, used for
invariance and dynamics smoke tests only).  Evaluators act on flat
12-vectors ``(q1, q2, p1, p2)`` and must be rotation and translation
invariant; the registry checks nothing, callers can verify statistically
with :func:`check_invariance`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .euclid import SE3Element, act_phase, random_rotation
from .momentum import PhasePoint


@dataclass(frozen=True)
class HamiltonianSpec:
    """Named invariant Hamiltonian with optional exact gradient."""

    name: str
    params: dict
    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray] | None = None
    invariant: bool = field(default=True)

    def at(self, m: PhasePoint) -> float:
        return float(self.value(m.as_vector()))

    def gradient(self, y: np.ndarray) -> np.ndarray:
        if self.grad is not None:
            return self.grad(y)
        return numeric_gradient(self.value, y)


def numeric_gradient(f, y: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central differences with steps scaled by (1 + |coordinate|)."""
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    for i in range(y.size):
        hi = h * (1.0 + abs(y[i]))
        yp = y.copy()
        ym = y.copy()
        yp[i] += hi
        ym[i] -= hi
        out[i] = (f(yp) - f(ym)) / (2.0 * hi)
    return out


def free(m1: float = 1.0, m2: float = 1.0) -> HamiltonianSpec:
    """Kinetic energy of the pair."""

    def value(y):
        return float(np.dot(y[6:9], y[6:9]) / (2.0 * m1) + np.dot(y[9:12], y[9:12]) / (2.0 * m2))

    def grad(y):
        g = np.zeros(12)
        g[6:9] = y[6:9] / m1
        g[9:12] = y[9:12] / m2
        return g

    return HamiltonianSpec("free", {"m1": m1, "m2": m2}, value, grad)


def kepler(m1: float = 1.0, m2: float = 1.0, G: float = 1.0) -> HamiltonianSpec:
    """Newtonian two-body energy."""

    def value(y):
        r = float(np.linalg.norm(y[0:3] - y[3:6]))
        kin = np.dot(y[6:9], y[6:9]) / (2.0 * m1) + np.dot(y[9:12], y[9:12]) / (2.0 * m2)
        return float(kin - G * m1 * m2 / r)

    def grad(y):
        d = y[0:3] - y[3:6]
        r = float(np.linalg.norm(d))
        g = np.zeros(12)
        g[0:3] = G * m1 * m2 * d / r**3
        g[3:6] = -g[0:3]
        g[6:9] = y[6:9] / m1
        g[9:12] = y[9:12] / m2
        return g

    return HamiltonianSpec("kepler", {"m1": m1, "m2": m2, "G": G}, value, grad)


def pn1(m1: float = 1.0, m2: float = 1.0, G: float = 1.0, c: float = 10.0) -> HamiltonianSpec:
    """Newtonian energy plus the first-order relativistic correction.

    Standard two-point-mass form in a general frame; depends only on
    momentum norms, their inner product, the separation and the radial
    momentum components, hence invariant.  Gradient by central
    differences.
    """

    def value(y):
        q1, q2, p1, p2 = y[0:3], y[3:6], y[6:9], y[9:12]
        d = q1 - q2
        r = float(np.linalg.norm(d))
        n = d / r
        p1s = float(np.dot(p1, p1))
        p2s = float(np.dot(p2, p2))
        newt = p1s / (2.0 * m1) + p2s / (2.0 * m2) - G * m1 * m2 / r
        corr = (
            -(p1s**2) / (8.0 * m1**3)
            - (p2s**2) / (8.0 * m2**3)
            - (G * m1 * m2 / (2.0 * r))
            * (
                3.0 * (p1s / m1**2 + p2s / m2**2)
                - 7.0 * float(np.dot(p1, p2)) / (m1 * m2)
                - float(np.dot(n, p1)) * float(np.dot(n, p2)) / (m1 * m2)
            )
            + G**2 * m1 * m2 * (m1 + m2) / (2.0 * r**2)
        )
        return float(newt + corr / c**2)

    return HamiltonianSpec("pn1", {"m1": m1, "m2": m2, "G": G, "c": c}, value)


_REGISTRY: dict[str, Callable[..., HamiltonianSpec]] = {
    "free": free,
    "kepler": kepler,
    "pn1": pn1,
}


def register(name: str, builder: Callable[..., HamiltonianSpec]) -> None:
    """Add a Hamiltonian builder under a new name."""
    if name in _REGISTRY:
        raise ValueError(f"Hamiltonian {name!r} already registered")
    _REGISTRY[name] = builder


def make(name: str, **params) -> HamiltonianSpec:
    if name not in _REGISTRY:
        raise KeyError(
            f"unknown Hamiltonian {name!r}; available: {', '.join(sorted(_REGISTRY))}"
        )
    return _REGISTRY[name](**params)


def available() -> list[str]:
    return sorted(_REGISTRY)


def check_invariance(
    ham: HamiltonianSpec,
    rng: np.random.Generator,
    n: int = 200,
    tol: float = 1e-9,
) -> float:
    """Largest relative violation of |H(g.m) - H(m)| over random (g, m)."""
    worst = 0.0
    for _ in range(n):
        m = PhasePoint.from_vector(rng.normal(size=12))
        g = SE3Element(random_rotation(rng), rng.normal(size=3))
        h0 = ham.at(m)
        h1 = ham.at(act_phase(g, m))
        worst = max(worst, abs(h1 - h0) / (1.0 + abs(h0)))
    if worst > tol:
        raise ValueError(f"Hamiltonian {ham.name!r} is not invariant (err {worst:.3e})")
    return worst
