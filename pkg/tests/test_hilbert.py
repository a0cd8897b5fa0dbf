import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reeb_stab.core import ReebVector
from reeb_stab.errors import NonMinimalGenerators, TooManyRelations, ValidationError
from reeb_stab.hilbert import (
    HilbertSeries,
    LaurentPoly,
    RelationKind,
    RingSpec,
    hilbert_ci,
    hilbert_free,
    hilbert_monomial,
    quotient_principal,
    rees_central_fiber,
)
from reeb_stab.oracle import series_coefficients

from conftest import CONIFOLD_BETA, CONIFOLD_W


def P(nvars, terms):
    return LaurentPoly(nvars, terms)


class TestLaurentPoly:
    def test_no_zero_terms(self):
        p = LaurentPoly.one_minus((1,)) + LaurentPoly.monomial((1,))
        assert p == LaurentPoly.one(1)
        assert dict(p.items()) == {(0,): 1}

    def test_product(self):
        p = LaurentPoly.one_minus((1,)) * LaurentPoly.one_minus((1,))
        assert dict(p.items()) == {(0,): 1, (1,): -2, (2,): 1}


class TestFree:
    def test_single_row(self):
        H = hilbert_free([[1, 1, 1]])
        assert H.denominators == ((1,), (1,), (1,))
        assert H.numerator == LaurentPoly.one(1)
        assert H.dimension == 3

    def test_identity(self):
        H = hilbert_free([[1, 0], [0, 1]])
        assert H.denominators == ((1, 0), (0, 1))

    def test_weights_12(self):
        assert hilbert_free([[1, 2]]).denominators == ((1,), (2,))


class TestCompleteIntersection:
    def test_conifold(self, conifold_series):
        H = conifold_series
        assert H.numerator == LaurentPoly.one_minus(CONIFOLD_BETA)
        assert len(H.denominators) == 4 and H.dimension == 3

    def test_brieskorn(self):
        for k in range(2, 7):
            H = hilbert_ci([[k, k, k, 2]], [[2 * k]])
            assert H.numerator == LaurentPoly.one_minus((2 * k,))
            assert H.denominators == ((k,), (k,), (k,), (2,))
            assert H.dimension == 3

    def test_no_relations_is_free(self):
        assert hilbert_ci([[1, 2, 3]], []) == hilbert_free([[1, 2, 3]])

    def test_too_many(self):
        with pytest.raises(TooManyRelations):
            hilbert_ci([[1, 1]], [[1], [1]])

    def test_declared_dimension_checked(self):
        with pytest.raises(ValidationError) as exc:
            RingSpec([[1, 1, 1]], RelationKind.COMPLETE_INTERSECTION, ((2,),), 3)
        assert exc.value.field == "dimension"


class TestMonomial:
    def test_principal(self):
        H = hilbert_monomial([[1, 0], [0, 1]], [(1, 0)])
        assert H.numerator == LaurentPoly.one_minus((1, 0))
        assert H.dimension == 1

    def test_product_generator(self):
        H = hilbert_monomial([[1, 0], [0, 1]], [(1, 1)])
        assert H.numerator == LaurentPoly.one_minus((1, 1))
        assert H.dimension == 1

    def test_two_generators(self):
        H = hilbert_monomial([[1, 0], [0, 1]], [(2, 0), (1, 1)])
        assert H.numerator == P(2, {(0, 0): 1, (1, 1): -1, (2, 0): -1, (2, 1): 1})

    def test_non_minimal(self):
        with pytest.raises(NonMinimalGenerators):
            hilbert_monomial([[1, 0], [0, 1]], [(1, 0), (1, 1)])


def _standard_monomials(gens, N, degree):
    counts = [0] * (degree + 1)
    for exp in itertools.product(range(degree + 1), repeat=N):
        d = sum(exp)
        if d <= degree and not any(all(e >= g for e, g in zip(exp, gen)) for gen in gens):
            counts[d] += 1
    return counts


monomial_ideals = st.lists(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2)).filter(any), min_size=1, max_size=4
)


@settings(max_examples=40, deadline=None)
@given(monomial_ideals)
def test_monomial_numerator_matches_enumeration(gens):
    gens = sorted(set(gens))
    minimal = [g for g in gens if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gens)]
    H = hilbert_monomial([[1, 0, 0], [0, 1, 0], [0, 0, 1]], minimal)
    # specialize to the total-degree grading
    num = {}
    for e, c in H.numerator.items():
        num[(sum(e),)] = num.get((sum(e),), 0) + c
    H1 = HilbertSeries(LaurentPoly(1, num), ((1,),) * 3, 1, H.dimension)
    assert series_coefficients(H1, ReebVector.exact([1]), 8) == _standard_monomials(minimal, 3, 8)


class TestQuotients:
    def test_principal_of_free(self):
        H = quotient_principal(hilbert_free([[1, 1]]), (1,))
        assert H.numerator == LaurentPoly.one_minus((1,)) and H.dimension == 1

    def test_conifold_definitional(self, conifold_series):
        H = quotient_principal(hilbert_free(CONIFOLD_W), CONIFOLD_BETA)
        assert H == conifold_series

    def test_weight_two(self):
        H = quotient_principal(hilbert_free([[1, 2]]), (2,))
        assert H.numerator == LaurentPoly.one_minus((2,))

    def test_rees_fiber_of_line(self):
        R = hilbert_free([[1]])
        C = rees_central_fiber(quotient_principal(R, (1,)), (1,))
        assert C.torus_rank == 2 and C.dimension == 1
        assert C.denominators == ((1, 0), (1, 1))
        assert C.numerator == LaurentPoly.one_minus((1, 0))
        assert C.eta == (0, 1)

    def test_rees_fiber_of_conifold(self, conifold_series):
        C = rees_central_fiber(quotient_principal(conifold_series, (1, 0, 0)), (1, 0, 0))
        assert len(C.denominators) == 5 and C.denominators[-1] == (1, 0, 0, 1)
        expected = LaurentPoly.one_minus(CONIFOLD_BETA) * LaurentPoly.one_minus((1, 0, 0))
        assert C.numerator == expected.lift()

    def test_rees_fiber_of_brieskorn(self):
        H = hilbert_ci([[5, 5, 5, 2]], [[10]])
        C = rees_central_fiber(quotient_principal(H, (2,)), (2,))
        assert C.denominators[-1] == (2, 1)
        assert C.torus_rank == 2
