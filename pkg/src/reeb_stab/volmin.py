"""Volume minimization over the Gorenstein slice ``theta(xi) = n + 1``.

The slice is parametrized as ``xi = base + B u`` with ``B`` an integer basis of
the kernel of ``theta``; the columns of ``B`` double as the product test
configurations whose Futaki invariants certify the critical point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import Mode, ReebVector, float_to_fraction, to_float
from .errors import HessianNotPD, InfeasibleStart, NotConverged, NotOnCrossSection
from .hilbert import HilbertSeries
from .laurent import directional_a, extract_coefficients
from .stability import GorensteinData, futaki_product

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100
ARMIJO = 1e-4
CERT_DENOM = 10**6


@dataclass(frozen=True)
class VolMinResult:
    minimizer: ReebVector
    volume: object
    gradient_norm: object
    iterations: int
    certificates: tuple
    charges: tuple
    tangent_basis: tuple
    exact_point: ReebVector | None = None
    exact_volume: object = None
    exact_certificates: tuple = ()
    history: tuple = field(default=(), repr=False)


def _in_cone(H: HilbertSeries, xi: ReebVector) -> bool:
    return all(xi.pair(d) > 0 for d in H.denominators)


def _point(base: ReebVector, basis, u) -> ReebVector:
    comps = list(base)
    for b, ub in zip(basis, u):
        for i, bi in enumerate(b):
            if bi:
                comps[i] = comps[i] + bi * ub
    return ReebVector(tuple(comps), base.mode)


def volume_derivatives(H: HilbertSeries, xi: ReebVector, basis):
    """``a0``, its gradient and Hessian along ``basis`` at ``xi``.

    Mixed second derivatives come from polarization
    ``D_u D_v = (D^2_{u+v} - D^2_{u-v}) / 4``.
    """
    k = len(basis)
    jets = [directional_a(H, xi, ReebVector.coerce(b, xi.mode), depth=1)[0] for b in basis]
    a0 = jets[0].v if jets else extract_coefficients(H, xi).a0
    grad = [j.dv for j in jets]
    hess = [[None] * k for _ in range(k)]
    for i in range(k):
        hess[i][i] = jets[i].d2v
        for j in range(i + 1, k):
            plus = [x + y for x, y in zip(basis[i], basis[j])]
            minus = [x - y for x, y in zip(basis[i], basis[j])]
            dp = directional_a(H, xi, ReebVector.coerce(plus, xi.mode), depth=1)[0].d2v
            dm = directional_a(H, xi, ReebVector.coerce(minus, xi.mode), depth=1)[0].d2v
            hess[i][j] = hess[j][i] = (dp - dm) / 4
    return a0, grad, hess


def tangent_hessian(H: HilbertSeries, G: GorensteinData, xi) -> np.ndarray:
    xi = ReebVector.coerce(xi)
    G.check_on_section(xi)
    _, _, hess = volume_derivatives(H, xi, G.tangent_basis())
    return np.array([[float(v) for v in row] for row in hess])


def _section_point(H: HilbertSeries, G: GorensteinData, xi: ReebVector) -> ReebVector:
    """An exact point on the slice near ``xi``: rationalize, then rescale."""
    if xi.mode is Mode.EXACT:
        return xi
    approx = ReebVector.exact(float_to_fraction(c).limit_denominator(CERT_DENOM) for c in xi)
    val = G.value(approx)
    if val <= 0:
        raise InfeasibleStart("theta is not positive at the starting vector")
    return approx.scaled(Fraction(G.level) / val)


def _projected_norm(grad, gram_inv):
    g = np.array([float(x) for x in grad])
    return math.sqrt(max(float(g @ gram_inv @ g), 0.0))


def minimize_volume(H: HilbertSeries, G: GorensteinData, xi0, tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> VolMinResult:
    """Damped Newton iteration for ``a0`` restricted to the slice."""
    xi0 = ReebVector.coerce(xi0)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not _in_cone(H, xi0):
        raise InfeasibleStart(f"{xi0} is not inside the Reeb cone")
    try:
        G.check_on_section(xi0)
    except NotOnCrossSection as exc:
        raise InfeasibleStart(str(exc)) from exc
    basis = G.tangent_basis()
    B = np.array(basis, dtype=float).T.reshape(len(xi0), len(basis))
    gram_inv = np.linalg.inv(B.T @ B) if basis else np.zeros((0, 0))
    base = _section_point(H, G, xi0)
    if not _in_cone(H, base):
        raise InfeasibleStart("rationalized start left the Reeb cone")

    if xi0.mode is Mode.EXACT:
        a0, grad, _ = volume_derivatives(H, xi0, basis)
        if all(g == 0 for g in grad):
            certs = tuple(futaki_product(H, G, xi0, b) for b in basis)
            charges = tuple(xi0.pair(d) for d in H.denominators)
            return VolMinResult(xi0, a0, Fraction(0), 0, certs, charges, tuple(basis),
                                xi0, a0, certs, (a0,))

    base_f = base.to_float()
    u = np.zeros(len(basis))
    xi = _point(base_f, basis, [to_float(x) for x in u])
    a0, grad, hess = volume_derivatives(H, xi, basis)
    history = [a0]
    iterations = 0
    gnorm = _projected_norm(grad, gram_inv)
    while gnorm >= tol:
        if iterations >= max_iter:
            partial = _finish(H, G, base, basis, u, a0, gnorm, iterations, history)
            raise NotConverged(f"projected gradient {gnorm:.3e} after {iterations} iterations", partial)
        Hm = np.array([[float(v) for v in row] for row in hess])
        try:
            L = np.linalg.cholesky(Hm)
        except np.linalg.LinAlgError:
            raise HessianNotPD(f"tangent Hessian of the volume is not positive definite at {xi}") from None
        g = np.array([float(x) for x in grad])
        d = -np.linalg.solve(L.T, np.linalg.solve(L, g))
        slope = float(g @ d)
        step = 1.0
        while True:
            cand_u = u + step * d
            cand = _point(base_f, basis, [to_float(x) for x in cand_u])
            if _in_cone(H, cand):
                cand_a0 = extract_coefficients(H, cand).a0
                if cand_a0 <= a0 + ARMIJO * step * slope and cand_a0 < a0:
                    break
            step /= 2
            if step < 1e-16:
                partial = _finish(H, G, base, basis, u, a0, gnorm, iterations, history)
                raise NotConverged(f"line search stalled at projected gradient {gnorm:.3e}", partial)
        u = cand_u
        xi = cand
        iterations += 1
        a0, grad, hess = volume_derivatives(H, xi, basis)
        history.append(a0)
        gnorm = _projected_norm(grad, gram_inv)
    return _finish(H, G, base, basis, u, a0, gnorm, iterations, history)


def _finish(H, G, base, basis, u, a0, gnorm, iterations, history) -> VolMinResult:
    xi = _point(base.to_float(), basis, [to_float(x) for x in u])
    certs = tuple(futaki_product(H, G, xi, b) for b in basis)
    charges = tuple(xi.pair(d) for d in H.denominators)
    u_exact = [Fraction(float(x)).limit_denominator(CERT_DENOM) for x in u]
    exact_pt = _point(base, basis, u_exact)
    if _in_cone(H, exact_pt):
        exact_certs = tuple(futaki_product(H, G, exact_pt, b) for b in basis)
        exact_vol = extract_coefficients(H, exact_pt).a0
    else:
        exact_pt, exact_certs, exact_vol = None, (), None
    return VolMinResult(xi, a0, gnorm, iterations, certs, charges, tuple(basis),
                        exact_pt, exact_vol, exact_certs, tuple(history))


def volume_ratio(H: HilbertSeries, xi, n: int | None = None):
    """``a0(xi) * n!``: the volume relative to the round sphere of the same dimension."""
    n = H.n if n is None else n
    return extract_coefficients(H, xi).a0 * math.factorial(n)
