import numpy as np
import pytest

from optred2bp.euclid import SE3Element, act_phase, coadjoint, random_rotation
from optred2bp.isotropy import FINE_TAGS, sample_fine
from optred2bp.momentum import (
    PhasePoint,
    StratumBoundaryError,
    char_distribution_dim,
    collinear,
    is_regular,
    momentum_jacobian,
    momentum_map,
    numerical_rank,
    parallel,
)


class TestMomentumMap:
    def test_rest_configuration_has_zero_momentum(self):
        x0 = np.array([0.3, -1.2, 2.0])
        mu = momentum_map(PhasePoint(x0, x0, np.zeros(3), np.zeros(3)))
        assert np.allclose(mu.alpha, 0.0)
        assert np.allclose(mu.u, 0.0)

    def test_cross_product_oracle(self):
        mu = momentum_map(PhasePoint([0, 0, 0], [1, 0, 0], [0, 1, 0], [0, -1, 0]))
        assert np.allclose(mu.alpha, [0, 0, -1])
        assert np.allclose(mu.u, [0, 0, 0])

    def test_linear_part(self):
        mu = momentum_map(PhasePoint([0, 0, 0], [0, 0, 1], [0, 0, 2], [0, 0, -1]))
        assert np.allclose(mu.alpha, [0, 0, 0])
        assert np.allclose(mu.u, [0, 0, 1])

    def test_equivariance(self, rng):
        for _ in range(1000):
            m = PhasePoint.from_vector(rng.normal(size=12))
            g = SE3Element(random_rotation(rng), rng.normal(size=3))
            lhs = momentum_map(act_phase(g, m)).as_vector()
            rhs = coadjoint(g, momentum_map(m)).as_vector()
            assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, np.max(np.abs(rhs)))


class TestJacobian:
    def test_at_origin(self):
        J = momentum_jacobian(PhasePoint.from_vector(np.zeros(12)))
        assert np.allclose(J[0:3], 0.0)
        assert np.allclose(J[3:6, 6:9], np.eye(3))
        assert np.allclose(J[3:6, 9:12], np.eye(3))
        assert np.allclose(J[3:6, 0:6], 0.0)

    def test_matches_finite_differences(self, rng):
        h = 1e-6
        for _ in range(30):
            y = rng.normal(size=12)
            J = momentum_jacobian(PhasePoint.from_vector(y))
            num = np.empty((6, 12))
            for i in range(12):
                yp, ym = y.copy(), y.copy()
                yp[i] += h
                ym[i] -= h
                fp = momentum_map(PhasePoint.from_vector(yp)).as_vector()
                fm = momentum_map(PhasePoint.from_vector(ym)).as_vector()
                num[:, i] = (fp - fm) / (2 * h)
            assert np.max(np.abs(J - num)) < 1e-6

    def test_rank_drops_on_collinear_data(self):
        m = PhasePoint([1, 0, 0], [2, 0, 0], [3, 0, 0], [4, 0, 0])
        assert numerical_rank(momentum_jacobian(m)) < 6

    def test_full_rank_when_momenta_independent(self, rng):
        for _ in range(50):
            m = PhasePoint.from_vector(rng.normal(size=12))
            if np.linalg.norm(np.cross(m.p1, m.p2)) > 1e-3:
                assert numerical_rank(momentum_jacobian(m)) == 6


class TestRegularity:
    def test_rest_point_singular(self):
        x0 = np.array([1.0, 1.0, 0.0])
        assert not is_regular(PhasePoint(x0, x0, np.zeros(3), np.zeros(3)))

    def test_independent_momenta_regular(self):
        m = PhasePoint([0, 0, 0], [1, 1, 1], [1, 0, 0], [0, 1, 0])
        assert is_regular(m)

    def test_collinear_singular(self):
        m = PhasePoint([1, 0, 0], [2, 0, 0], [0, 0, 0], [0, 0, 0])
        assert not is_regular(m)
        assert numerical_rank(momentum_jacobian(m)) < 6

    def test_agrees_with_rank_oracle(self, rng):
        # generic draws plus every stratum
        samples = [PhasePoint.from_vector(rng.normal(size=12)) for _ in range(300)]
        for tag in FINE_TAGS:
            samples.extend(sample_fine(tag, rng) for _ in range(40))
        for m in samples:
            assert is_regular(m) == (numerical_rank(momentum_jacobian(m)) == 6)

    def test_parallel_predicate(self):
        assert parallel([1, 0, 0], [2, 0, 0])
        assert parallel([0, 0, 0], [1, 2, 3])  # zero parallel to everything
        assert not parallel([1, 0, 0], [1, 1e-6, 0])
        assert collinear([[1, 0, 0], [0, 0, 0], [-2, 0, 0]])
        assert not collinear([[1, 0, 0], [0, 0, 0], [0, 1, 0]])


class TestLevelSetDimension:
    def test_rest_point(self):
        x0 = np.array([0.5, 0.5, -1.0])
        assert char_distribution_dim(PhasePoint(x0, x0, np.zeros(3), np.zeros(3))) == 0

    def test_generic_point(self, rng):
        for _ in range(20):
            m = PhasePoint.from_vector(rng.normal(size=12))
            if np.linalg.norm(np.cross(m.p1, m.p2)) > 1e-3:
                assert char_distribution_dim(m) == 6

    def test_axial_point(self):
        # collinear family with nonzero total linear momentum
        y0 = np.array([0.0, 0.0, 1.0])
        d0 = 1.0
        lam, bta, gam = 2.0, 1.0, 0.5
        m = PhasePoint(lam * y0, bta * y0, gam * y0, (d0 - gam) * y0)
        assert char_distribution_dim(m) == 3

    def test_near_boundary_raises(self):
        # relative position off-parallel from p2 by ~3e-10: between the
        # strict and loose classification thresholds
        p2 = np.array([1.0, 0.0, 0.0])
        q1 = np.array([0.4, 1.0, 0.0])
        q2 = q1 - np.array([1.0, 3e-10, 0.0])
        m = PhasePoint(q1, q2, np.zeros(3), p2)
        with pytest.raises(StratumBoundaryError):
            char_distribution_dim(m)
