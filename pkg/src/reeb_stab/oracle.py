"""Independent checks that share no code path with the Laurent engine.

* power-series expansion of a Hilbert series along one rational grading,
* partial sums of the index character with an explicit tail bound,
* central finite differences of ``a0``/``a1`` against the derivative identities,
* continued-fraction rationalization of float Reeb vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .core import Mode, ReebVector, _as_weight_matrix, float_to_fraction, is_reeb, to_exact, to_float
from .errors import (
    IrrationalInput,
    NegativeCoefficient,
    NonpositiveT,
    StepLeavesCone,
    TooCloseToBoundary,
)
from .hilbert import HilbertSeries
from .laurent import extract_coefficients

ORACLE_DPS = 60


def integral_grading(H: HilbertSeries, xi) -> tuple[int, list[int], list[tuple[int, int]]]:
    """Scale ``xi`` so every specialized weight is an integer.

    Returns ``(scale, denominator weights, [(numerator degree, coeff)])`` where
    degree ``m`` in the integral grading corresponds to ``xi``-weight ``m / scale``.
    """
    xi = ReebVector.coerce(xi)
    if xi.mode is not Mode.EXACT:
        raise IrrationalInput("series expansion needs an exact (rational) Reeb vector")
    den_w = [xi.pair(d) for d in H.denominators]
    num_w = [(xi.pair(e), c) for e, c in H.numerator.items()]
    values = den_w + [w for w, _ in num_w]
    lcm = math.lcm(*(v.denominator for v in values))
    ints = [int(v * lcm) for v in values]
    g = math.gcd(*ints) or 1
    scale = Fraction(lcm, g)
    dens = [int(w * scale) for w in den_w]
    if any(d <= 0 for d in dens):
        raise StepLeavesCone("Reeb vector is not in the cone of the series")
    nums = [(int(w * scale), c) for w, c in num_w]
    return scale, dens, nums


def series_coefficients(H: HilbertSeries, xi, max_degree: int, check: bool = True) -> list[int]:
    """Dimensions of the graded pieces of degree ``0..max_degree`` along ``xi``."""
    _, dens, nums = integral_grading(H, xi)
    lo = min((m for m, _ in nums), default=0)
    size = max_degree - lo + 1
    coeffs = [0] * max(size, 0)
    for m, c in nums:
        if m - lo < size:
            coeffs[m - lo] += c
    for w in dens:
        for m in range(w, size):
            coeffs[m] += coeffs[m - w]
    if any(coeffs[: max(-lo, 0)]):
        raise NegativeCoefficient("series has terms of negative degree")
    out = coeffs[-lo:] if lo < 0 else [0] * lo + coeffs
    out = out[: max_degree + 1]
    if check:
        bad = [(m, c) for m, c in enumerate(out) if c < 0]
        if bad:
            m, c = bad[0]
            raise NegativeCoefficient(
                f"dim H_{m} = {c} < 0: relations are not a regular sequence or the numerator is wrong"
            )
    return out


def evaluate_series(H: HilbertSeries, xi, t):
    """The rational function at ``z = exp(-t xi)``, in high-precision mpmath."""
    with mpmath.workdps(ORACLE_DPS):
        t = mpmath.mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else mpmath.mpf(t)
        xi = [mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else mpmath.mpf(c) for c in xi]

        def weight(v):
            return mpmath.fsum(a * b for a, b in zip(v, xi))

        num = mpmath.fsum(c * mpmath.exp(-t * weight(e)) for e, c in H.numerator.items())
        den = mpmath.fprod(1 - mpmath.exp(-t * weight(d)) for d in H.denominators)
        return +(num / den)


@dataclass(frozen=True)
class PartialSum:
    value: object
    tail_bound: object
    max_degree: int


def partial_sum_F(H: HilbertSeries, xi, t, max_degree: int) -> PartialSum:
    """``sum_{m <= D} dim H_m exp(-t m / scale)`` and a bound on the omitted tail.

    Graded pieces are dominated by those of the free ring on the same integral
    weights, whose degree-``m`` count is at most ``C(m + N - 1, N - 1)``.
    """
    if t <= 0:
        raise NonpositiveT(f"t = {t} must be positive")
    xi = ReebVector.coerce(xi)
    if xi.mode is not Mode.EXACT:
        xi = ReebVector.exact(float_to_fraction(c).limit_denominator(10**9) for c in xi)
    scale, _, _ = integral_grading(H, xi)
    dims = series_coefficients(H, xi, max_degree)
    N = len(H.denominators)
    with mpmath.workdps(ORACLE_DPS):
        tt = mpmath.mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else mpmath.mpf(t)
        x = mpmath.exp(-tt / (mpmath.mpf(scale.numerator) / scale.denominator))
        value = mpmath.fsum(d * x**m for m, d in enumerate(dims))
        tail = _binomial_tail(N, x, max_degree)
        # slack for the mpmath rounding of both sides
        tail += mpmath.mpf(10) ** (-(ORACLE_DPS - 15)) * (1 + abs(value))
        return PartialSum(+value, +tail, max_degree)


def partial_sum_gap(H: HilbertSeries, xi, t, max_degree: int):
    """``(|F(t) - partial sum|, tail bound)``, both formed at oracle precision."""
    xi = ReebVector.coerce(xi)
    if xi.mode is not Mode.EXACT:
        xi = ReebVector.exact(float_to_fraction(c).limit_denominator(10**9) for c in xi)
    ps = partial_sum_F(H, xi, t, max_degree)
    ref = evaluate_series(H, xi, t)
    with mpmath.workdps(ORACLE_DPS):
        return +abs(ref - ps.value), ps.tail_bound


def random_direction(xi, rng, max_denominator: int = 8) -> ReebVector:
    """A nonzero rational direction with entries in ``[-|xi|, |xi|]`` (sup norm).

    Tying the size of the direction to ``xi`` keeps finite-difference
    residuals comparable across models of very different scale.
    """
    xi = ReebVector.coerce(xi)
    size = max(abs(float_to_fraction(c)) for c in xi)
    while True:
        u = [Fraction(rng.randint(-max_denominator, max_denominator), max_denominator) for _ in xi]
        if any(u):
            break
    eta = ReebVector.exact(size * c for c in u)
    return eta.to_float() if xi.mode is Mode.FLOAT else eta


def _binomial_tail(N: int, x, D: int):
    """Upper bound for ``sum_{m > D} C(m + N - 1, N - 1) x^m`` with ``0 < x < 1``."""
    total = mpmath.mpf(0)
    m = D + 1
    term = mpmath.binomial(m + N - 1, N - 1) * x**m
    while True:
        ratio = (m + N) * x / (m + 1)  # term(m+1)/term(m), decreasing in m
        if ratio < mpmath.mpf(1) / 2 and term < mpmath.mpf(10) ** (-ORACLE_DPS):
            return total + term / (1 - ratio)
        if ratio < 1 and m > D + 10_000:
            return total + term / (1 - ratio)
        total += term
        term *= ratio
        m += 1


@dataclass(frozen=True)
class FiniteDiffRecord:
    h: object
    residual_b0: object
    residual_b1: object
    residual_c0: object
    ratio_b0: object
    ratio_b1: object
    ratio_c0: object
    derivative_a0: object  # central difference of a0 along eta

    @property
    def max_residual(self):
        return max(self.residual_b0, self.residual_b1, self.residual_c0)


def _residuals(H, xi, eta, h, n):
    plus = extract_coefficients(H, xi + eta.scaled(h))
    minus = extract_coefficients(H, xi - eta.scaled(h))
    mid = extract_coefficients(H, xi, eta)
    d_a0 = (plus.a0 - minus.a0) / (2 * h)
    d_a1 = (plus.a1 - minus.a1) / (2 * h)
    d2_a0 = (plus.a0 - 2 * mid.a0 + minus.a0) / (h * h)
    return (
        abs(d_a0 + (n + 1) * mid.b0),
        abs(d_a1 + n * mid.b1),
        abs(d2_a0 - (n + 2) * (n + 1) * mid.c0),
        d_a0,
    )


def _ratio(big, small):
    if small == 0:
        return None if big == 0 else math.inf
    return big / small


def finite_diff_check(H: HilbertSeries, xi, eta, h) -> FiniteDiffRecord:
    """Residuals of the derivative identities at steps ``h`` and ``h/2``.

    Run in EXACT mode the differences carry no rounding, so the ratio of the
    two residuals shows the pure O(h^2) truncation decay.
    """
    xi = ReebVector.coerce(xi)
    eta = eta if isinstance(eta, ReebVector) else ReebVector.coerce(eta, xi.mode)
    if xi.mode is Mode.EXACT:
        h = Fraction(repr(h)) if isinstance(h, float) else to_exact(h)
    else:
        h = to_float(h)
    n = H.n
    for step in (h, -h):
        pt = xi + eta.scaled(step)
        if any(pt.pair(d) <= 0 for d in H.denominators):
            raise StepLeavesCone(f"xi + ({step}) eta leaves the Reeb cone")
    r1 = _residuals(H, xi, eta, h, n)
    r2 = _residuals(H, xi, eta, h / 2, n)
    return FiniteDiffRecord(
        h, r1[0], r1[1], r1[2],
        _ratio(r1[0], r2[0]), _ratio(r1[1], r2[1]), _ratio(r1[2], r2[2]),
        r1[3],
    )


def rational_approx(xi, W, denom_bound: int) -> ReebVector:
    """Best rational approximation per component, checked to stay in the cone."""
    W = _as_weight_matrix(W)
    xi = ReebVector.coerce(xi)
    radius = Fraction(1, denom_bound)
    max_w = max(abs(v) for row in W.entries for v in row)
    margin = W.N * radius * max_w
    exact = [float_to_fraction(c) for c in xi]
    for j, col in enumerate(W.columns):
        val = sum(w * c for w, c in zip(col, exact))
        if val <= margin:
            raise TooCloseToBoundary(f"l_{j + 1}(xi) = {float(val):.3g} is within the rounding margin {float(margin):.3g}")
    out = ReebVector.exact(c.limit_denominator(denom_bound) for c in exact)
    if not is_reeb(W, out):
        raise TooCloseToBoundary("rounded vector left the Reeb cone")
    return out
