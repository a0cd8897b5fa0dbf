import math
import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reeb_stab.core import ReebVector, WeightMatrix
from reeb_stab.errors import IrrationalInput, NegativeCoefficient, NonpositiveT, StepLeavesCone, TooCloseToBoundary
from reeb_stab.hilbert import HilbertSeries, LaurentPoly, hilbert_free, quotient_principal
from reeb_stab.oracle import (
    evaluate_series,
    finite_diff_check,
    partial_sum_F,
    partial_sum_gap,
    random_direction,
    rational_approx,
    series_coefficients,
)

C3_LINE = hilbert_free([[1, 1, 1]])


class TestSeries:
    def test_binomials(self):
        assert series_coefficients(C3_LINE, ReebVector.exact([1]), 4) == [1, 3, 6, 10, 15]

    def test_conifold_squares(self, conifold_series):
        dims = series_coefficients(conifold_series, ReebVector.exact([1, 1, 1]), 10)
        assert dims == [(m + 1) ** 2 for m in range(11)]

    def test_telescoping(self):
        H = quotient_principal(hilbert_free([[1, 1]]), (1,))
        assert series_coefficients(H, ReebVector.exact([1]), 12) == [1] * 13

    def test_irrational(self):
        with pytest.raises(IrrationalInput):
            series_coefficients(C3_LINE, ReebVector.floating([1.0]), 3)

    def test_negative_detected(self):
        # 1 - 2q over (1 - q): not a Hilbert series
        H = HilbertSeries(LaurentPoly(1, {(0,): 1, (1,): -2}), ((1,),), 1, 1)
        with pytest.raises(NegativeCoefficient):
            series_coefficients(H, ReebVector.exact([1]), 3)


class TestPartialSums:
    def test_closed_form(self):
        ps = partial_sum_F(C3_LINE, ReebVector.exact([1]), F(1), 60)
        with mpmath.workdps(60):
            exact = (1 - mpmath.exp(-1)) ** -3
            assert abs(ps.value - exact) <= ps.tail_bound

    def test_half_point(self, models):
        for model in models.values():
            H = model.spec.hilbert_series()
            xi = model.reeb("integral" if "integral" in model.reeb_vectors else None)
            gap, bound = partial_sum_gap(H, xi, mpmath.log(2), 80)
            assert gap <= bound

    def test_degree_zero(self):
        ps = partial_sum_F(C3_LINE, ReebVector.exact([1]), F(1), 0)
        assert ps.value == 1
        assert mpmath.isfinite(ps.tail_bound)

    def test_nonpositive_t(self):
        with pytest.raises(NonpositiveT):
            partial_sum_F(C3_LINE, ReebVector.exact([1]), 0, 5)


class TestFiniteDiff:
    def test_c2(self):
        rec = finite_diff_check(hilbert_free([[1, 0], [0, 1]]), ReebVector.exact([1, 1]), [F(1), F(0)], 1e-4)
        assert rec.max_residual <= 1e-7
        assert 3.5 <= rec.ratio_b0 <= 4.5

    def test_zero_direction(self, conifold_series):
        rec = finite_diff_check(conifold_series, ReebVector.exact([1, 2, 2]), [F(0)] * 3, 1e-4)
        assert rec.max_residual == 0

    def test_conifold_critical(self, conifold):
        H = conifold.spec.hilbert_series()
        rec = finite_diff_check(H, conifold.reeb("symmetric"), [F(-1), F(1), F(0)], 1e-4)
        assert rec.residual_b0 <= 1e-7
        assert abs(rec.derivative_a0) < 1e-12

    def test_float_mode(self, conifold_series):
        rec = finite_diff_check(conifold_series, ReebVector.floating([1.0, 2.0, 2.0]), [0.1, -0.1, 0.05], 1e-4)
        assert rec.max_residual < 1e-6

    def test_leaves_cone(self):
        with pytest.raises(StepLeavesCone):
            finite_diff_check(C3_LINE, ReebVector.exact([F(1, 10 ** 6)]), [F(1)], 1e-4)


class TestRationalApprox:
    W = WeightMatrix(((1, 0), (0, 1)))

    def test_integers(self):
        assert rational_approx(ReebVector.floating([1.0, 1.0]), self.W, 100) == ReebVector.exact([1, 1])

    def test_golden_ratio(self):
        phi = (1 + math.sqrt(5)) / 2
        out = rational_approx(ReebVector.floating([1.0, phi]), self.W, 100)
        assert out == ReebVector.exact([1, F(144, 89)])
        # 55/34 is the best approximation only up to denominator 54
        assert abs(F(144, 89) - F(phi)) < abs(F(55, 34) - F(phi))
        assert rational_approx(ReebVector.floating([1.0, phi]), self.W, 54)[1] == F(55, 34)

    def test_boundary(self):
        with pytest.raises(TooCloseToBoundary):
            rational_approx(ReebVector.floating([1.0, 1e-9]), self.W, 100)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.integers(0, 10 ** 6))
def test_series_matches_evaluation(weights, seed):
    H = hilbert_free([weights])
    xi = ReebVector.exact([F(random.Random(seed).randint(1, 5), random.Random(seed + 1).randint(1, 3))])
    gap, bound = partial_sum_gap(H, xi, F(1, 2), 60)
    assert gap <= bound
    assert evaluate_series(H, xi, F(1, 2)) > 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_direction_scale(seed):
    xi = ReebVector.exact([F(3, 7), F(2)])
    eta = random_direction(xi, random.Random(seed))
    assert any(eta) and max(abs(c) for c in eta) <= 2
