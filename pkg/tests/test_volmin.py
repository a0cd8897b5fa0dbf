import random
from fractions import Fraction as F

import numpy as np
import pytest

from reeb_stab.core import ReebVector, build_reeb_cone
from reeb_stab.errors import InfeasibleStart, NotConverged
from reeb_stab.stability import GorensteinData
from reeb_stab.volmin import minimize_volume, tangent_hessian, volume_ratio

from conftest import flat_spec

TOL = 1e-10


def _slice_point(model, rng):
    G = model.gorenstein
    xi = build_reeb_cone(model.spec.weights).sample(rng)
    return xi.scaled(F(G.level) / G.value(xi))


@pytest.fixture(scope="module")
def c3():
    spec = flat_spec(3)
    return spec.hilbert_series(), GorensteinData.for_ring(spec)


def test_c3(c3):
    H, G = c3
    res = minimize_volume(H, G, ReebVector.exact([F(1, 2), F(1, 2), 2]))
    assert all(abs(x - 1) < 1e-8 for x in res.minimizer)
    assert res.volume == pytest.approx(0.5, abs=1e-12)
    assert res.exact_point == ReebVector.exact([1, 1, 1])
    assert res.exact_volume == F(1, 2)
    assert all(c == 0 for c in res.exact_certificates)


def test_conifold_from_spec_start(conifold):
    H = conifold.spec.hilbert_series()
    res = minimize_volume(H, conifold.gorenstein, conifold.reeb("start"))
    assert all(abs(c - 1.5) < 1e-8 for c in res.charges)
    assert res.volume == pytest.approx(8 / 27, abs=1e-10)
    assert res.exact_volume == F(8, 27)
    assert np.all(np.linalg.eigvalsh(tangent_hessian(H, conifold.gorenstein, res.exact_point)) > 0)


def test_start_at_optimum(conifold):
    H = conifold.spec.hilbert_series()
    res = minimize_volume(H, conifold.gorenstein, conifold.reeb("symmetric"))
    assert res.iterations == 0 and res.gradient_norm == 0
    assert res.certificates == (0, 0)


def test_monotone_descent(conifold):
    H = conifold.spec.hilbert_series()
    res = minimize_volume(H, conifold.gorenstein, conifold.reeb("start3"))
    assert all(b < a for a, b in zip(res.history, res.history[1:]))


def test_restart_invariance(conifold):
    H = conifold.spec.hilbert_series()
    points = [minimize_volume(H, conifold.gorenstein, conifold.reeb(n), tol=TOL).minimizer
              for n in ("start", "start2", "start3")]
    for p in points[1:]:
        assert max(abs(a - b) for a, b in zip(p, points[0])) < 10 * TOL


def test_convexity_spot_checks(models):
    rng = random.Random(7)
    for name in ("c3", "conifold", "c2", "brieskorn-k5"):
        model = models[name]
        H = model.spec.hilbert_series()
        for _ in range(5):
            xi = _slice_point(model, rng)
            hess = tangent_hessian(H, model.gorenstein, xi)
            if hess.size:
                assert np.all(np.linalg.eigvalsh(hess) > 0)


def test_infeasible_start(conifold):
    H = conifold.spec.hilbert_series()
    with pytest.raises(InfeasibleStart):
        minimize_volume(H, conifold.gorenstein, ReebVector.exact([1, 1, 1]))
    with pytest.raises(InfeasibleStart):
        minimize_volume(H, conifold.gorenstein, ReebVector.exact([4, -1, 1]))


def test_not_converged_carries_iterate(conifold):
    H = conifold.spec.hilbert_series()
    with pytest.raises(NotConverged) as exc:
        minimize_volume(H, conifold.gorenstein, conifold.reeb("start"), max_iter=1)
    partial = exc.value.result
    assert partial.iterations == 1
    assert partial.volume < 3 / (2 * 1 * 2 * 2 * 1)


class TestRatio:
    def test_c3(self, c3):
        assert volume_ratio(c3[0], ReebVector.exact([1, 1, 1])) == 1

    def test_conifold(self, conifold):
        H = conifold.spec.hilbert_series()
        assert volume_ratio(H, conifold.reeb("symmetric")) == F(16, 27)

    def test_weights_12(self, models):
        H = models["c2-weights-12"].spec.hilbert_series()
        assert volume_ratio(H, ReebVector.exact([1])) == F(1, 2)
