"""Self-contained verification suites for the whole toolkit.

Each suite draws seeded random data, checks one contract at a fixed
tolerance and returns a :class:`SuiteResult` with the observed worst
error.  The CLI ``verify`` command and the acceptance test module both
run these.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import optimal
from .euclid import SE3Element, act_phase, coadjoint, random_rotation
from .hamiltonians import free, kepler
from .isotropy import (
    FINE_TAGS,
    classify_fine,
    isotropy_class,
    sample_fine,
    sample_members_batch,
)
from .momentum import (
    MomentumValue,
    PhasePoint,
    char_distribution_dim,
    momentum_map,
)
from .optimal import (
    ReducedPoint,
    decompose_momentum_fiber,
    label,
    label_from_parts,
    level_set_contains,
    parametrize,
    project,
    section,
    transport,
)
from .reduced import (
    commutation_check,
    conservation_report,
    integrate_full,
    pullback_form_numeric,
    reduced_form,
    reduced_form_plus,
    reduced_hamiltonian,
)

CASE_DIMENSION = {1: 0, 2: 3, 3: 3, 4: 3, 5: 3, 6: 6, 7: 6, 8: 6, 9: 6, 10: 6}
SECTION_CASES = (2, 3, 4, 5, 6, 7, 8, 9, 10)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    observed: dict
    tolerances: dict
    elapsed: float
    limit_s: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": bool(self.passed),
            "observed": _plain(self.observed),
            "tolerances": _plain(self.tolerances),
            "elapsed_s": round(self.elapsed, 3),
            "runtime_limit_s": self.limit_s,
            "detail": self.detail,
        }


def _plain(obj):
    """Recursively coerce numpy scalars/containers to JSON-friendly types."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _result(name, t0, limit, ok, observed, tolerances, detail=""):
    elapsed = time.time() - t0
    return SuiteResult(
        name, bool(ok and elapsed < limit), observed, tolerances, elapsed, limit, detail
    )


def suite_equivariance(seed: int = 0, n: int = 10_000, tol: float = 1e-9) -> SuiteResult:
    """Momentum of the moved point equals the coadjointly moved momentum."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        m = PhasePoint.from_vector(rng.normal(size=12))
        g = SE3Element(random_rotation(rng), rng.normal(size=3))
        lhs = momentum_map(act_phase(g, m)).as_vector()
        rhs = coadjoint(g, momentum_map(m)).as_vector()
        ref = max(1.0, float(np.max(np.abs(rhs))))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) / ref)
    return _result(
        "equivariance", t0, 5.0, worst <= tol, {"max_rel_err": worst}, {"tol": tol}
    )


def suite_classifier(
    seed: int = 0, per_stratum: int = 1000, members: int = 100, tol: float = 1e-9
) -> SuiteResult:
    """Sampled strata classify back and their claimed stabilizers fix them."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    mislabeled = 0
    worst_fix = 0.0
    for tag in FINE_TAGS:
        for _ in range(per_stratum):
            m = sample_fine(tag, rng)
            if classify_fine(m) != tag:
                mislabeled += 1
                continue
            cls = isotropy_class(m)
            A, a = sample_members_batch(cls, rng, members)
            ref = max(1.0, m.scale())
            for orig, is_pos in ((m.q1, True), (m.q2, True), (m.p1, False), (m.p2, False)):
                moved = np.einsum("nij,j->ni", A, orig)
                if is_pos:
                    moved = moved + a
                worst_fix = max(worst_fix, float(np.max(np.abs(moved - orig))) / ref)
    ok = mislabeled == 0 and worst_fix <= tol
    return _result(
        "classifier",
        t0,
        30.0,
        ok,
        {"mislabeled": mislabeled, "max_fix_err": worst_fix},
        {"tol": tol},
    )


def suite_cases(seed: int = 0, per_case: int = 300) -> SuiteResult:
    """Labels, membership and level-set dimensions across all ten cases."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    bad_label = bad_member = bad_dim = 0
    for case in range(1, 11):
        for k in range(per_case):
            if k % 25 == 0:
                rho = optimal.random_label(case, rng)
            m = parametrize(rho, optimal.random_level_set_param(rho, rng))
            got = label(m)
            if got.case_id != case or not optimal.labels_equal(got, rho):
                bad_label += 1
                continue
            if not level_set_contains(rho, m):
                bad_member += 1
            if char_distribution_dim(m) != CASE_DIMENSION[case]:
                bad_dim += 1
    ok = bad_label == 0 and bad_member == 0 and bad_dim == 0
    return _result(
        "cases",
        t0,
        60.0,
        ok,
        {"bad_label": bad_label, "bad_member": bad_member, "bad_dim": bad_dim},
        {"dimension_table": CASE_DIMENSION},
    )


def suite_sections(
    seed: int = 0,
    per_case: int = 500,
    tol_j: float = 1e-10,
    tol_proj: float = 1e-9,
) -> SuiteResult:
    """Sections reproduce the momentum value and invert the projection."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst_j = worst_proj = 0.0
    for case in SECTION_CASES:
        rho = optimal.random_label(case, rng)
        for _ in range(per_case):
            pt = optimal.random_reduced_point(rho, rng)
            m = section(rho, pt)
            dj = np.max(np.abs(momentum_map(m).as_vector() - rho.mu.as_vector()))
            worst_j = max(worst_j, float(dj))
            back = project(rho, m)
            worst_proj = max(
                worst_proj, float(np.max(np.abs(back.coords - pt.coords)))
            )
            if case in (2, 4):
                # stage-one route: section lift composed with the double
                # cover reproduces the reduced point
                xp, yp = optimal.lift_double_cover(rho, pt)
                m_plus = parametrize(rho, (xp, xp, yp))
                covered = optimal.double_cover(rho, (xp, yp))
                worst_proj = max(
                    worst_proj,
                    float(np.max(np.abs(project(rho, m_plus).coords - covered.coords))),
                )
    ok = worst_j <= tol_j and worst_proj <= tol_proj
    return _result(
        "sections",
        t0,
        30.0,
        ok,
        {"max_momentum_err": worst_j, "max_projection_err": worst_proj},
        {"tol_j": tol_j, "tol_proj": tol_proj},
    )


def suite_forms(
    seed: int = 0, per_case: int = 200, h: float = 1e-5, tol: float = 1e-5
) -> SuiteResult:
    """Finite-difference pullbacks match the closed-form reduced two-forms."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = {}
    for case in SECTION_CASES:
        rho = optimal.random_label(case, rng)
        w = 0.0
        for _ in range(per_case):
            pt = optimal.random_reduced_point(rho, rng)
            if case in (2, 4):
                num = pullback_form_numeric(rho, pt.coords, h=h)
                ref = reduced_form_plus(rho)
            else:
                num = pullback_form_numeric(rho, pt, h=h)
                ref = reduced_form(rho, pt)
            w = max(w, float(np.max(np.abs(num - ref))))
        worst[case] = w
    ok = max(worst.values()) <= tol
    return _result(
        "forms",
        t0,
        60.0,
        ok,
        {"max_entry_err_per_case": {str(k): v for k, v in worst.items()}},
        {"tol": tol, "h": h},
        detail="case 8/10 entries check the shear-term cancellation",
    )


def suite_conjugation(seed: int = 0, per_pair: int = 500, tol: float = 1e-10) -> SuiteResult:
    """Translated level sets of cases 2/3/7/8 fill the sets of 4/5/9/10."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    failures = 0
    pairs = []
    for low in (2, 3, 7, 8):
        rho_low = optimal.random_label(low, rng)
        if low in (2, 3):
            a = rng.normal(size=3)
            while np.linalg.norm(np.cross(a, rho_low.y0)) < 0.3:
                a = rng.normal(size=3)
        else:
            a = rng.normal(size=3)
            while np.linalg.norm(np.cross(a, rho_low.u0)) < 0.3:
                a = rng.normal(size=3)
        rho_high = transport(a, rho_low)
        pairs.append((low, rho_high.case_id))
        for _ in range(per_pair):
            m = parametrize(rho_low, optimal.random_level_set_param(rho_low, rng))
            moved = act_phase(SE3Element.translation(a), m)
            if not level_set_contains(rho_high, moved, atol=tol):
                failures += 1
            m_high = parametrize(rho_high, optimal.random_level_set_param(rho_high, rng))
            back = act_phase(SE3Element.translation(-a), m_high)
            if not level_set_contains(rho_low, back, atol=tol):
                failures += 1
    expected = [(2, 4), (3, 5), (7, 9), (8, 10)]
    ok = failures == 0 and pairs == expected
    return _result(
        "conjugation",
        t0,
        10.0,
        ok,
        {"membership_failures": failures, "pairs": pairs},
        {"tol": tol},
    )


def _fiber_point(regime: str, mu: MomentumValue, rng: np.random.Generator) -> PhasePoint:
    """Random point of the momentum fiber of mu, covering all its pieces."""
    if regime == "zero":
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        kind = rng.uniform()
        if kind < 0.2:
            x = rng.normal(size=3)
            return PhasePoint(x, x, np.zeros(3), np.zeros(3))
        b = float(rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0]))
        aa = float(rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0]))
        q2 = float(rng.normal()) * d if kind < 0.5 else rng.normal(size=3)
        q1 = q2 + aa * d
        p1 = b * d if rng.uniform() < 0.8 else np.zeros(3)
        return PhasePoint(q1, q2, p1, -p1)
    if regime in ("angular", "aligned", "generic"):
        case = {"angular": 6, "aligned": 8, "generic": 10}[regime]
        rho = label_from_parts(mu, optimal.IsotropyClass("G4"))
        assert rho.case_id == case
        return parametrize(rho, optimal.random_level_set_param(rho, rng))
    if regime == "vertical":
        if rng.uniform() < 0.4:
            iso = optimal.canonicalize("G2", y=mu.u)
            rho3 = label_from_parts(mu, iso)
            return parametrize(rho3, optimal.random_level_set_param(rho3, rng))
        rho7 = label_from_parts(mu, optimal.IsotropyClass("G4"))
        return parametrize(rho7, optimal.random_level_set_param(rho7, rng))
    if regime == "orthogonal":
        u = mu.u
        a9 = np.cross(u, mu.alpha) / float(np.dot(u, u))
        base = MomentumValue(np.zeros(3), u)
        m = _fiber_point("vertical", base, rng)
        return PhasePoint(m.q1 + a9, m.q2 + a9, m.p1, m.p2)
    raise ValueError(regime)


def suite_fibers(seed: int = 0, per_regime: int = 1000) -> SuiteResult:
    """Constructed momentum-fiber points land in exactly one listed family."""
    t0 = time.time()
    rng = np.random.default_rng(seed)

    def unit(rng):
        v = rng.normal(size=3)
        return v / np.linalg.norm(v)

    u = unit(rng) * 1.3
    w = np.cross(u, unit(rng))
    w /= np.linalg.norm(w)
    regimes = {
        "zero": MomentumValue(np.zeros(3), np.zeros(3)),
        "angular": MomentumValue(unit(rng) * 0.9, np.zeros(3)),
        "vertical": MomentumValue(np.zeros(3), u),
        "aligned": MomentumValue(0.7 * u, u),
        "orthogonal": MomentumValue(1.1 * w, u),
        "generic": MomentumValue(1.1 * w + 0.6 * u / np.linalg.norm(u), u),
    }
    bad = {}
    for name, mu in regimes.items():
        families = decompose_momentum_fiber(mu)
        errors = 0
        for _ in range(per_regime):
            m = _fiber_point(name, mu, rng)
            if not np.allclose(momentum_map(m).as_vector(), mu.as_vector(), atol=1e-12):
                errors += 1
                continue
            rho = label(m)
            hits = [f for f in families if f.matches(rho)]
            if len(hits) != 1:
                errors += 1
        bad[name] = errors
    ok = all(v == 0 for v in bad.values())
    return _result(
        "fibers", t0, 20.0, ok, {"errors_per_regime": bad}, {"families": "exactly one"}
    )


def suite_dynamics(
    seed: int = 0,
    T: float = 1.0,
    step: float = 1e-3,
    tol_free: float = 1e-6,
    tol_kepler: float = 1e-4,
    tol_drift: float = 1e-8,
) -> SuiteResult:
    """Projected full flow equals reduced flow for free and Kepler motion."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    start = {
        3: ReducedPoint(3, [1.5, 0.7]),
        6: ReducedPoint(6, [1.2, 0.4]),
        7: ReducedPoint(7, [0.6, 1.4, 0.9, 0.3]),
        9: ReducedPoint(9, [0.6, 1.4, 0.9, 0.3]),
    }
    worst_free = worst_kep = worst_drift = 0.0
    for case, pt0 in start.items():
        rho = optimal.random_label(case, rng)
        m0 = section(rho, pt0)
        for ham, is_free in ((free(), True), (kepler(), False)):
            err = commutation_check(rho, ham, m0, T=T, step=step)
            if is_free:
                worst_free = max(worst_free, err)
            else:
                worst_kep = max(worst_kep, err)
            rep = conservation_report(ham, integrate_full(ham, m0, T, step))
            worst_drift = max(worst_drift, rep["dJ"])
    ok = worst_free <= tol_free and worst_kep <= tol_kepler and worst_drift <= tol_drift
    return _result(
        "dynamics",
        t0,
        30.0,
        ok,
        {
            "max_commutation_free": worst_free,
            "max_commutation_kepler": worst_kep,
            "max_momentum_drift": worst_drift,
        },
        {"tol_free": tol_free, "tol_kepler": tol_kepler, "tol_drift": tol_drift},
    )


def suite_reduced_free(seed: int = 0, n: int = 1000, tol: float = 1e-12) -> SuiteResult:
    """Section-pulled kinetic energy matches its closed form on case 7."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    rho = optimal.random_label(7, rng)
    H_red = reduced_hamiltonian(rho, free())
    u2 = rho.u03 ** 2
    worst = 0.0
    for _ in range(n):
        pt = optimal.random_reduced_point(rho, rng)
        nu, r, _, lam = pt.coords
        oracle = r**2 * np.sin(nu) ** 2 + 0.5 * (lam**2 + (1.0 - lam) ** 2) * u2
        worst = max(worst, abs(H_red(pt) - oracle))
    return _result(
        "reduced_free", t0, 1.0, worst <= tol, {"max_abs_err": worst}, {"tol": tol}
    )


SUITES = {
    "equivariance": (suite_equivariance, "tol"),
    "classifier": (suite_classifier, "tol"),
    "cases": (suite_cases, None),
    "sections": (suite_sections, "tol_proj"),
    "forms": (suite_forms, "tol"),
    "conjugation": (suite_conjugation, "tol"),
    "fibers": (suite_fibers, None),
    "dynamics": (suite_dynamics, "tol_free"),
    "reduced_free": (suite_reduced_free, "tol"),
}


def run_suites(
    names: list[str] | None = None,
    seed: int = 0,
    tolerance_overrides: dict | None = None,
) -> list[SuiteResult]:
    """Run the named suites (all by default) with one base seed.

    ``tolerance_overrides`` maps a suite name to a value for its main
    tolerance parameter.
    """
    chosen = list(SUITES) if names is None else list(names)
    results = []
    for name in chosen:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
        func, tol_kwarg = SUITES[name]
        kwargs = {"seed": seed}
        if tolerance_overrides and name in tolerance_overrides:
            if tol_kwarg is None:
                raise ValueError(f"suite {name!r} has no tolerance override")
            kwargs[tol_kwarg] = float(tolerance_overrides[name])
        results.append(func(**kwargs))
    return results
