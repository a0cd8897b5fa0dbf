import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reeb_stab.core import ReebVector, build_reeb_cone
from reeb_stab.errors import NonpositiveCharge, NotOnCrossSection, NotTangent
from reeb_stab.hilbert import RingSpec, hilbert_free
from reeb_stab.oracle import random_direction
from reeb_stab.stability import (
    GorensteinData,
    TestConfigSpec,
    Verdict,
    evaluate_test_config,
    futaki,
    futaki_product,
    futaki_rees,
    gorenstein_check,
    lichnerowicz_scan,
    rees_check,
)

from conftest import CONIFOLD_W, brieskorn_spec, flat_spec

C2 = hilbert_free([[1, 0], [0, 1]])
C2_G = GorensteinData((1, 1), 2)


class TestFutaki:
    def test_zero_direction(self, conifold_series):
        rep = futaki(conifold_series, ReebVector.exact([1, 2, 2]), [F(0)] * 3)
        assert rep.futaki == 0 and rep.norm_sq == 0

    def test_reeb_direction(self, conifold_series):
        xi = ReebVector.exact([1, 2, 2])
        rep = futaki(conifold_series, xi, xi)
        assert rep.futaki == 0 and rep.norm_sq == 0

    def test_c2(self):
        rep = futaki(C2, ReebVector.exact([1, 1]), [F(1), F(0)])
        assert rep.futaki == 0
        assert rep.norm_sq == F(1, 12)
        assert rep.verdict is Verdict.NONNEGATIVE

    def test_float_near_zero_flag(self):
        rep = futaki(C2, ReebVector.floating([1.0, 1.0]), [1.0, 0.0])
        assert rep.near_zero and rep.verdict is Verdict.NONNEGATIVE


class TestProduct:
    def test_conifold_symmetric(self, conifold):
        H = conifold.spec.hilbert_series()
        xi = conifold.reeb("symmetric")
        for b in conifold.gorenstein.tangent_basis():
            assert futaki_product(H, conifold.gorenstein, xi, b) == 0

    def test_c2_symmetric(self):
        assert futaki_product(C2, C2_G, ReebVector.exact([1, 1]), [1, -1]) == 0

    def test_c2_skew(self):
        val = futaki_product(C2, C2_G, ReebVector.exact([F(1, 2), F(3, 2)]), [1, -1])
        assert val == F(-8, 9)

    def test_off_section(self):
        with pytest.raises(NotOnCrossSection):
            futaki_product(C2, C2_G, ReebVector.exact([1, 2]), [1, -1])

    def test_not_tangent(self):
        with pytest.raises(NotTangent):
            futaki_product(C2, C2_G, ReebVector.exact([1, 1]), [1, 0])


class TestRees:
    def test_brieskorn_k5(self):
        H = brieskorn_spec(5).hilbert_series()
        xi = ReebVector.exact([F(3, 7)])
        a0 = futaki(H, xi, [F(0)]).coefficients.a0
        assert futaki_rees(H, xi, (2,)) == a0 * F(-1, 12)

    def test_conifold_x(self, conifold_series):
        xi = ReebVector.exact([F(3, 2)] * 3)
        chk = rees_check(conifold_series, xi, (1, 0, 0))
        assert chk.charge == F(3, 2)
        assert chk.closed_form == chk.generic == F(8, 27) * F(1, 6)

    def test_unit_charge(self):
        H = flat_spec(3).hilbert_series()
        assert futaki_rees(H, ReebVector.exact([1, 1, 1]), (1, 0, 0)) == 0

    def test_nonpositive_charge(self, conifold_series):
        with pytest.raises(NonpositiveCharge):
            futaki_rees(conifold_series, ReebVector.exact([1, 2, 2]), (0, 0, -1))

    def test_config_dispatch(self, conifold_series):
        xi = ReebVector.exact([F(3, 2)] * 3)
        rep = evaluate_test_config(conifold_series, xi, TestConfigSpec.rees((1, 0, 0)))
        assert rep.futaki == rees_check(conifold_series, xi, (1, 0, 0)).closed_form


class TestLichnerowicz:
    def test_flat(self):
        spec = flat_spec(3)
        G = GorensteinData.for_ring(spec)
        entries = lichnerowicz_scan(spec, G, ReebVector.exact([1, 1, 1]))
        assert all(e.charge == 1 and e.verdict is Verdict.NO_OBSTRUCTION for e in entries)

    def test_brieskorn_k5(self):
        spec = brieskorn_spec(5)
        entries = lichnerowicz_scan(spec, GorensteinData.for_ring(spec), [F(3, 7)], "xyzw")
        by_name = {e.coordinate: e for e in entries}
        assert by_name["w"].charge == F(6, 7)
        assert by_name["w"].verdict is Verdict.UNSTABLE
        assert by_name["w"].futaki_normalized == F(-1, 12)
        assert by_name["x"].charge == F(15, 7)

    def test_brieskorn_k3(self):
        spec = brieskorn_spec(3)
        entries = lichnerowicz_scan(spec, GorensteinData.for_ring(spec), [F(3, 5)], "xyzw")
        assert {e.coordinate: e.charge for e in entries}["w"] == F(6, 5)
        assert all(e.verdict is Verdict.NO_OBSTRUCTION for e in entries)

    def test_off_section(self):
        spec = brieskorn_spec(5)
        with pytest.raises(NotOnCrossSection):
            lichnerowicz_scan(spec, GorensteinData.for_ring(spec), [F(1)])


class TestGorenstein:
    def test_flat(self):
        spec = flat_spec(3)
        assert gorenstein_check(spec.hilbert_series(), GorensteinData.for_ring(spec), [F(1)] * 3) == 0

    def test_conifold(self, conifold):
        H = conifold.spec.hilbert_series()
        assert gorenstein_check(H, conifold.gorenstein, conifold.reeb("symmetric")) == 0

    def test_c2_skew(self):
        assert gorenstein_check(C2, C2_G, [F(1, 2), F(3, 2)]) == 0

    def test_adjunction_default(self):
        spec = RingSpec(CONIFOLD_W, data=())
        assert GorensteinData.for_ring(spec).theta == (2, 2, 0)
        assert GorensteinData.for_ring(brieskorn_spec(5)).theta == (7,)


MODEL_NAMES = ["c3", "conifold", "brieskorn-k4"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(MODEL_NAMES), st.integers(0, 10 ** 6))
def test_antisymmetry_and_norm(models, name, seed):
    model = models[name]
    H = model.spec.hilbert_series()
    rng = random.Random(seed)
    xi = build_reeb_cone(model.spec.weights).sample(rng)
    eta = random_direction(xi, rng)
    rep = futaki(H, xi, eta)
    assert futaki(H, xi, -eta).futaki == -rep.futaki
    assert rep.norm_sq >= 0


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(MODEL_NAMES), st.integers(0, 10 ** 6), st.sampled_from([F(2), F(1, 3)]))
def test_scaling(models, name, seed, lam):
    model = models[name]
    H = model.spec.hilbert_series()
    n = H.n
    rng = random.Random(seed)
    xi = build_reeb_cone(model.spec.weights).sample(rng)
    eta = random_direction(xi, rng)
    base = futaki(H, xi, eta)
    # direction scaled along with xi
    both = futaki(H, xi.scaled(lam), eta.scaled(lam))
    assert both.futaki == lam ** -n * base.futaki
    assert both.norm_sq == lam ** -(n + 1) * base.norm_sq
    # direction held fixed
    fixed = futaki(H, xi.scaled(lam), eta)
    assert fixed.futaki == lam ** -(n + 1) * base.futaki
    assert fixed.norm_sq == lam ** -(n + 3) * base.norm_sq
