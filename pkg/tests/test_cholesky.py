from fractions import Fraction

import numpy as np
import pytest

from homcone import chordal, matrixnorm
from homcone import talgebra as ta
from homcone.cholesky import (
    MembershipStatus,
    Side,
    dual_factor,
    membership,
    primal_factor,
    reconstruct,
)
from homcone.errors import NotHermitian
from homcone.graph import Graph
from homcone.scalars import Context
from homcone.talgebra import Element, Shape

from helpers import dense_exact


EXACT = Context(exact=True)


class TestPrimalFactor:
    def test_identity(self, star_alg):
        f = primal_factor(star_alg, ta.identity(star_alg))
        assert f.t.elem == ta.identity(star_alg)
        assert f.zero_set == frozenset()

    def test_partial_identity(self, star_alg):
        x = ta.principal_identity(star_alg, {3})
        f = primal_factor(star_alg, x)
        assert f.t.elem == x
        assert f.zero_set == frozenset({3})

    def test_rank_one_restriction_has_single_column(self, star_alg):
        # pattern restriction of the all-ones rank-one matrix
        x = star_alg.element_from_dense([[1.0, 0, 1], [0, 1, 1], [1, 1, 1]])
        f = primal_factor(star_alg, x)
        assert f.zero_set == frozenset({1, 2})
        t = star_alg.element_to_dense(f.t.elem)
        assert abs(t[:, 2] - np.array([1.0, 1.0, 1.0])).max() < 1e-12
        assert abs(t[:, :2]).max() == 0

    def test_rejects_non_hermitian(self, star_alg):
        skew = Element({(1, 3): (1.0,), (3, 1): (2.0,)})
        with pytest.raises(NotHermitian):
            primal_factor(star_alg, skew)


class TestDualFactor:
    def test_worked_example(self, star_alg, x_star):
        f = dual_factor(star_alg, x_star)
        t = star_alg.element_to_dense(f.t.elem)
        assert abs(t - np.array([[1.0, 0, 0], [0, 1, 0], [1, 1, 0]])).max() < 1e-12
        assert f.zero_set == frozenset({3})

    def test_diagonal(self, star_alg):
        x = star_alg.element_from_dense([[4.0, 0, 0], [0, 1, 0], [0, 0, 9]])
        f = dual_factor(star_alg, x)
        t = star_alg.element_to_dense(f.t.elem)
        assert abs(t - np.diag([2.0, 1.0, 3.0])).max() < 1e-12
        assert f.zero_set == frozenset()

    def test_rank_one_clique_vector_fills_first_column(self, star_alg):
        # a rank-one PSD matrix lies in the pattern exactly when its support
        # is a clique; {1, 3} is one, and the factor is the single column
        x = star_alg.element_from_dense([[1.0, 0, 1], [0, 0, 0], [1, 0, 1]])
        f = dual_factor(star_alg, x)
        t = star_alg.element_to_dense(f.t.elem)
        assert sorted(f.zero_set) == [2, 3]
        assert abs(t[:, 0] - np.array([1.0, 0.0, 1.0])).max() < 1e-12

    def test_completable_point_is_not_a_dual_point(self, star_alg):
        # the pattern restriction of the all-ones matrix is completable but
        # not itself PSD, so the lower factorization must fail to reconstruct
        x = star_alg.element_from_dense([[1.0, 0, 1], [0, 1, 1], [1, 1, 1]])
        m = membership(star_alg, x, Side.DUAL)
        assert m.status is MembershipStatus.OUTSIDE


class TestMembership:
    def test_worked_example_boundary(self, star_alg, x_star):
        m = membership(star_alg, x_star, Side.DUAL)
        assert m.status is MembershipStatus.BOUNDARY
        assert m.zero_set == frozenset({3})
        assert m.residual < 1e-12

    def test_identity_interior(self, star_alg):
        assert membership(star_alg, ta.identity(star_alg), Side.PRIMAL).status is MembershipStatus.INTERIOR
        assert membership(star_alg, ta.identity(star_alg), Side.DUAL).status is MembershipStatus.INTERIOR

    def test_outside_detected(self, star_alg):
        x = star_alg.element_from_dense([[1.0, 0, 2], [0, 1, 0], [2, 0, 1]])
        # the principal block on {1,3} is indefinite, so no PSD completion exists
        assert np.linalg.eigvalsh(np.array([[1.0, 2.0], [2.0, 1.0]])).min() < 0
        m = membership(star_alg, x, Side.PRIMAL)
        assert m.status is MembershipStatus.OUTSIDE
        assert m.residual > 1e-3

    def test_interior_round_trip(self, star_alg, rng):
        for _ in range(20):
            u = ta.sample_triangular(star_alg, rng, Shape.UPPER)
            x = ta.star(star_alg, u.elem, ta.involution(star_alg, u.elem))
            assert membership(star_alg, x, Side.PRIMAL).status is MembershipStatus.INTERIOR

    def test_proper_even_outside(self, star_alg):
        x = star_alg.element_from_dense([[1.0, 0, 2], [0, 1, 0], [2, 0, 1]])
        m = membership(star_alg, x, Side.PRIMAL)
        assert ta.is_proper(star_alg, m.factor.t)

    def test_exact_worked_example(self, star_alg):
        x = star_alg.element_from_dense(dense_exact([[1, 0, 1], [0, 1, 1], [1, 1, 2]]))
        m = membership(star_alg, x, Side.DUAL, EXACT)
        assert m.status is MembershipStatus.BOUNDARY
        assert m.residual == 0.0
        t = star_alg.element_to_dense(m.factor.t.elem, exact=True)
        assert (t == np.array(dense_exact([[1, 0, 0], [0, 1, 0], [1, 1, 0]]), dtype=object)).all()


class TestUniqueness:
    @pytest.mark.parametrize("shape,side", [(Shape.UPPER, Side.PRIMAL), (Shape.LOWER, Side.DUAL)])
    def test_round_trip_float(self, star_alg, rng, shape, side):
        for k in range(25):
            zero_set = frozenset({1, 2, 3}) if k % 7 == 0 else frozenset(
                i for i in (1, 2, 3) if rng.uniform() < 0.3
            )
            t = ta.sample_triangular(star_alg, rng, shape, zero_set=zero_set)
            x = ta.star(star_alg, t.elem, ta.involution(star_alg, t.elem))
            f = primal_factor(star_alg, x) if side is Side.PRIMAL else dual_factor(star_alg, x)
            assert ta.max_component_diff(f.t.elem, t.elem) < 1e-8
            assert f.zero_set == zero_set

    def test_round_trip_exact(self, star_alg, rng):
        for _ in range(10):
            t = ta.sample_triangular(star_alg, rng, Shape.LOWER, zero_set={2}, exact=True)
            x = ta.star(star_alg, t.elem, ta.involution(star_alg, t.elem))
            f = dual_factor(star_alg, x, EXACT)
            assert f.t.elem == t.elem

    def test_round_trip_matrixnorm(self, rng):
        alg = matrixnorm.build_instance(2, 2)
        for _ in range(10):
            t = ta.sample_triangular(alg, rng, Shape.UPPER, zero_set={2})
            x = ta.star(alg, t.elem, ta.involution(alg, t.elem))
            f = primal_factor(alg, x)
            assert ta.max_component_diff(f.t.elem, t.elem) < 1e-8


class TestScaling:
    def test_factor_scales_like_square_root(self, star_alg, x_star):
        f1 = dual_factor(star_alg, x_star)
        f2 = dual_factor(star_alg, ta.scale(x_star, 4.0))
        assert ta.max_component_diff(f2.t.elem, ta.scale(f1.t.elem, 2.0)) < 1e-10


class TestDualPrimalConsistency:
    def test_dual_factor_is_primal_on_reversed_algebra(self, star_alg, rng):
        rev = ta.ReversedAlgebra(star_alg)
        for _ in range(10):
            t = ta.sample_triangular(star_alg, rng, Shape.LOWER, zero_set={1})
            x = ta.star(star_alg, t.elem, ta.involution(star_alg, t.elem))
            f_dual = dual_factor(star_alg, x)
            f_rev = primal_factor(rev, ta.reverse_element(star_alg, x))
            back = ta.reverse_element(rev, f_rev.t.elem)
            assert ta.max_component_diff(back, f_dual.t.elem) < 1e-10
            assert {4 - i for i in f_rev.zero_set} == set(f_dual.zero_set)

    def test_reconstruction_matches(self, star_alg, x_star):
        f = dual_factor(star_alg, x_star)
        assert ta.max_component_diff(reconstruct(star_alg, f), x_star) < 1e-12
