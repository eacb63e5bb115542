import numpy as np
import pytest

from optred2bp.euclid import (
    SE3Element,
    act_phase,
    coadjoint,
    compose,
    conjugation,
    inverse,
    random_rotation,
    rotation_about_axis,
    rotation_aligning,
)
from optred2bp.momentum import MomentumValue, PhasePoint

EZ = np.array([0.0, 0.0, 1.0])


def rand_element(rng):
    return SE3Element(random_rotation(rng), rng.normal(size=3))


class TestRotations:
    def test_quarter_turn_about_z(self):
        R = rotation_about_axis(EZ, np.pi / 2)
        assert np.allclose(R @ [1, 0, 0], [0, 1, 0], atol=1e-15)
        assert np.allclose(R @ [0, 1, 0], [-1, 0, 0], atol=1e-15)

    def test_axis_normalized_internally(self):
        assert np.allclose(
            rotation_about_axis([0, 0, 7.5], 0.3), rotation_about_axis(EZ, 0.3)
        )

    def test_zero_axis_rejected(self):
        with pytest.raises(ValueError, match="zero"):
            rotation_about_axis([0, 0, 1e-13], 0.3)

    def test_orthogonality_enforced(self):
        with pytest.raises(ValueError, match="orthogonal"):
            SE3Element(np.eye(3) + 1e-6, np.zeros(3))
        with pytest.raises(ValueError, match="proper"):
            SE3Element(np.diag([1.0, 1.0, -1.0]), np.zeros(3))

    def test_aligning(self, rng):
        for _ in range(50):
            v, w = rng.normal(size=3), rng.normal(size=3)
            R = rotation_aligning(v, w)
            assert np.allclose(R @ (v / np.linalg.norm(v)), w / np.linalg.norm(w))
        # antiparallel special case
        R = rotation_aligning([0, 0, 1], [0, 0, -1])
        assert np.allclose(R @ [0, 0, 1], [0, 0, -1], atol=1e-15)


class TestGroupLaw:
    def test_translations_commute(self):
        a, b = np.array([1.0, 2.0, 3.0]), np.array([-0.5, 0.0, 4.0])
        g = compose(SE3Element.translation(a), SE3Element.translation(b))
        assert np.allclose(g.A, np.eye(3))
        assert np.allclose(g.a, a + b)

    def test_rotation_moves_translation(self):
        A = rotation_about_axis(EZ, np.pi / 2)
        g = compose(SE3Element(A, np.zeros(3)), SE3Element.translation([0, 1, 0]))
        assert np.allclose(g.a, A @ [0, 1, 0])

    def test_quarter_turn_squared(self):
        g = SE3Element(rotation_about_axis(EZ, np.pi / 2), [1, 0, 0])
        gg = compose(g, g)
        assert np.allclose(gg.A, rotation_about_axis(EZ, np.pi), atol=1e-15)
        assert np.allclose(gg.a, [1, 1, 0], atol=1e-15)

    def test_inverse_examples(self):
        assert np.allclose(inverse(SE3Element.translation([1, 2, 3])).a, [-1, -2, -3])
        A = rotation_about_axis([1, 1, 0], 0.7)
        assert np.allclose(inverse(SE3Element(A, np.zeros(3))).A, A.T)
        g = SE3Element(rotation_about_axis(EZ, np.pi / 2), [1, 0, 0])
        gi = inverse(g)
        assert np.allclose(gi.A, rotation_about_axis(EZ, -np.pi / 2))
        assert np.allclose(gi.a, [0, 1, 0])

    def test_inverse_property(self, rng):
        for _ in range(100):
            g = rand_element(rng)
            e = compose(g, inverse(g))
            assert np.allclose(e.A, np.eye(3), atol=1e-12)
            assert np.allclose(e.a, 0.0, atol=1e-12)

    def test_associativity(self, rng):
        for _ in range(200):
            g, h, k = (rand_element(rng) for _ in range(3))
            lhs = compose(compose(g, h), k)
            rhs = compose(g, compose(h, k))
            assert np.allclose(lhs.A, rhs.A, atol=1e-12)
            assert np.allclose(lhs.a, rhs.a, atol=1e-10)


class TestPhaseAction:
    def test_translation_moves_positions_only(self):
        m = PhasePoint([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1])
        a = np.array([2.0, -1.0, 0.5])
        out = act_phase(SE3Element.translation(a), m)
        assert np.allclose(out.q1, m.q1 + a)
        assert np.allclose(out.q2, m.q2 + a)
        assert np.allclose(out.p1, m.p1)
        assert np.allclose(out.p2, m.p2)

    def test_identity(self, rng):
        m = PhasePoint.from_vector(rng.normal(size=12))
        out = act_phase(SE3Element.identity(), m)
        assert np.allclose(out.as_vector(), m.as_vector())

    def test_quarter_turn(self):
        g = SE3Element(rotation_about_axis(EZ, np.pi / 2), np.zeros(3))
        m = PhasePoint([1, 0, 0], [0, 0, 0], [0, 1, 0], [0, 0, 1])
        out = act_phase(g, m)
        assert np.allclose(out.q1, [0, 1, 0], atol=1e-15)
        assert np.allclose(out.q2, [0, 0, 0])
        assert np.allclose(out.p1, [-1, 0, 0], atol=1e-15)
        assert np.allclose(out.p2, [0, 0, 1])

    def test_action_law(self, rng):
        for _ in range(200):
            g, h = rand_element(rng), rand_element(rng)
            m = PhasePoint.from_vector(rng.normal(size=12))
            lhs = act_phase(compose(g, h), m).as_vector()
            rhs = act_phase(g, act_phase(h, m)).as_vector()
            assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))


class TestCoadjoint:
    def test_translation_fixes_pure_angular(self):
        mu = MomentumValue([3, -1, 2], [0, 0, 0])
        out = coadjoint(SE3Element.translation([5, 5, 5]), mu)
        assert np.allclose(out.alpha, mu.alpha)
        assert np.allclose(out.u, 0.0)

    def test_translation_shears_linear_into_angular(self):
        # alpha' = -u x a for a pure linear momentum
        mu = MomentumValue([0, 0, 0], [0, 0, 1])
        out = coadjoint(SE3Element.translation([0, 1, 0]), mu)
        assert np.allclose(out.alpha, [1, 0, 0])
        assert np.allclose(out.u, [0, 0, 1])

    def test_group_law(self, rng):
        for _ in range(200):
            g, h = rand_element(rng), rand_element(rng)
            mu = MomentumValue(rng.normal(size=3), rng.normal(size=3))
            lhs = coadjoint(compose(g, h), mu).as_vector()
            rhs = coadjoint(g, coadjoint(h, mu)).as_vector()
            assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))


class TestConjugation:
    def test_zero_shift_is_identity(self, rng):
        g = rand_element(rng)
        c = conjugation(np.zeros(3), g)
        assert np.allclose(c.A, g.A)
        assert np.allclose(c.a, g.a)

    def test_translations_unchanged(self):
        g = SE3Element.translation([1, 2, 3])
        c = conjugation([5, -1, 0], g)
        assert np.allclose(c.A, np.eye(3))
        assert np.allclose(c.a, [1, 2, 3])

    def test_half_turn_example(self):
        g = SE3Element(rotation_about_axis(EZ, np.pi), np.zeros(3))
        c = conjugation([0, 1, 0], g)
        assert np.allclose(c.A, g.A)
        assert np.allclose(c.a, [0, 2, 0], atol=1e-15)

    def test_homomorphism(self, rng):
        for _ in range(200):
            a = rng.normal(size=3)
            g, h = rand_element(rng), rand_element(rng)
            lhs = conjugation(a, compose(g, h))
            rhs = compose(conjugation(a, g), conjugation(a, h))
            assert np.allclose(lhs.A, rhs.A, atol=1e-12)
            assert np.max(np.abs(lhs.a - rhs.a)) <= 1e-10 * max(1.0, np.max(np.abs(lhs.a)))

    def test_intertwines_translated_action(self, rng):
        # moving by a after acting equals acting by the conjugate after moving
        for _ in range(100):
            a = rng.normal(size=3)
            g = rand_element(rng)
            m = PhasePoint.from_vector(rng.normal(size=12))
            ta = SE3Element.translation(a)
            lhs = act_phase(ta, act_phase(g, m)).as_vector()
            rhs = act_phase(conjugation(a, g), act_phase(ta, m)).as_vector()
            assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))
