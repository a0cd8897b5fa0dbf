"""Laurent expansion of the index character near t = 0.

The index character of a series ``N(z) / prod_j (1 - z^{d_j})`` at a Reeb
vector ``xi`` is ``N(e^{-t xi}) / prod_j (1 - e^{-t d_j(xi)})``. Each
denominator factor expands through the Todd series

    1 / (1 - e^{-ta}) = (1 / ta) * sum_k B+_k (ta)^k / k!

and the numerator through the exponential series. Running the same expansion
with :class:`DirJet2` scalars along ``xi + eps * eta`` yields first and
second directional derivatives of every coefficient at once.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Mode, ReebVector, as_scalar, scalar_mode
from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    MixedModeError,
    NotInCone,
    PoleOrderMismatch,
    ZeroWeight,
)
from .hilbert import HilbertSeries

FLOAT_ZERO_REL = 1e-9


class DirJet2:
    """Second-order jet ``v + dv*eps + d2v*eps^2/2`` along a fixed direction."""

    __slots__ = ("v", "dv", "d2v")

    def __init__(self, v, dv=0, d2v=0):
        self.v, self.dv, self.d2v = v, dv, d2v

    @property
    def mode(self):
        return scalar_mode(self.v)

    @staticmethod
    def lift(x) -> "DirJet2":
        return x if isinstance(x, DirJet2) else DirJet2(x, 0 * x, 0 * x)

    def __add__(self, other):
        if not isinstance(other, DirJet2):
            return DirJet2(self.v + other, self.dv, self.d2v)
        return DirJet2(self.v + other.v, self.dv + other.dv, self.d2v + other.d2v)

    __radd__ = __add__

    def __neg__(self):
        return DirJet2(-self.v, -self.dv, -self.d2v)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, DirJet2):
            return DirJet2(self.v * other, self.dv * other, self.d2v * other)
        return DirJet2(
            self.v * other.v,
            self.dv * other.v + self.v * other.dv,
            self.d2v * other.v + 2 * self.dv * other.dv + self.v * other.d2v,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "DirJet2":
        if self.v == 0:
            raise ZeroDivisionError("DirJet2 reciprocal of a jet with zero value")
        inv = 1 / self.v
        return DirJet2(inv, -self.dv * inv * inv, (2 * self.dv * self.dv * inv - self.d2v) * inv * inv)

    def __truediv__(self, other):
        if not isinstance(other, DirJet2):
            return DirJet2(self.v / other, self.dv / other, self.d2v / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        out = DirJet2(1 + 0 * self.v, 0 * self.v, 0 * self.v)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = DirJet2.lift(other)
        return self.v == other.v and self.dv == other.dv and self.d2v == other.d2v

    __hash__ = None

    def __repr__(self):
        return f"DirJet2({self.v!r}, {self.dv!r}, {self.d2v!r})"


def value_of(x):
    return x.v if isinstance(x, DirJet2) else x


def _is_zero(x, scale) -> bool:
    if isinstance(x, DirJet2):
        if isinstance(x.v, (int, Fraction)):
            return x.v == 0 and x.dv == 0 and x.d2v == 0
        x = x.v
    if isinstance(x, (int, Fraction)):
        return x == 0
    return abs(x) <= FLOAT_ZERO_REL * scale


# ---------------------------------------------------------------------------
# Bernoulli numbers, B+ convention (B+_1 = +1/2)

_bernoulli: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli_plus(k: int) -> Fraction:
    if k < len(_bernoulli):
        return _bernoulli[k]
    with _bernoulli_lock:
        table = list(_bernoulli)
        for m in range(len(table), k + 1):
            table.append(1 - sum(math.comb(m, j) * table[j] / (m - j + 1) for j in range(m)))
        if len(table) > len(_bernoulli):
            _bernoulli.extend(table[len(_bernoulli):])
    return _bernoulli[k]


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TJet:
    """Truncated Laurent series ``sum_i coeffs[i] * t^(leading_order + i)``.

    Valid up to (excluding) ``t^truncation``.
    """

    leading_order: int
    coeffs: tuple

    @property
    def truncation(self) -> int:
        return self.leading_order + len(self.coeffs)

    def coefficient(self, power: int):
        i = power - self.leading_order
        if i < 0:
            return 0
        if i >= len(self.coeffs):
            raise IndexError(f"t^{power} is beyond the truncation order {self.truncation}")
        return self.coeffs[i]

    def normalized(self, scale=None) -> "TJet":
        """Strip leading zeros (thresholded relative to ``scale`` for floats)."""
        if scale is None:
            scale = max((abs(value_of(c)) for c in self.coeffs), default=0)
        k = 0
        while k < len(self.coeffs) and _is_zero(self.coeffs[k], scale):
            k += 1
        return TJet(self.leading_order + k, self.coeffs[k:])

    def __add__(self, other: "TJet") -> "TJet":
        lo = min(self.leading_order, other.leading_order)
        hi = min(self.truncation, other.truncation)
        coeffs = []
        for p in range(lo, hi):
            a = self.coeffs[p - self.leading_order] if p >= self.leading_order else 0
            b = other.coeffs[p - other.leading_order] if p >= other.leading_order else 0
            coeffs.append(a + b)
        return TJet(lo, tuple(coeffs))

    def __mul__(self, other: "TJet") -> "TJet":
        length = min(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        coeffs = tuple(sum((a[i] * b[k - i] for i in range(1, k + 1)), a[0] * b[k]) for k in range(length))
        return TJet(self.leading_order + other.leading_order, coeffs)

    def inverse(self) -> "TJet":
        if not self.coeffs or _is_zero(self.coeffs[0], 0):
            raise ZeroDivisionError("cannot invert a jet with zero leading coefficient")
        a = self.coeffs
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, len(a)):
            acc = sum((a[i] * out[k - i] for i in range(2, k + 1)), a[1] * out[k - 1])
            out.append(-acc * inv0)
        return TJet(-self.leading_order, tuple(out))


def todd_jet(a, order: int) -> TJet:
    """Jet of ``1 / (1 - e^{-ta})``: ``order + 1`` terms starting at ``t^-1``."""
    if value_of(a) == 0:
        raise ZeroWeight("zero specialized weight: the Reeb vector lies on the cone boundary")
    inv = 1 / a
    coeffs = [inv]
    power = 1 + 0 * a
    for k in range(1, order + 1):
        coeffs.append(bernoulli_plus(k) * power / math.factorial(k))
        power = power * a
    return TJet(-1, tuple(coeffs))


def _exp_jet(terms, length: int, zero) -> TJet:
    """Jet of ``sum_c coeff_c * exp(-t * w_c)`` for ``(coeff, w)`` pairs."""
    coeffs = []
    powers = [(c, 1 + zero, w) for c, w in terms]
    for m in range(length):
        total = zero
        for idx, (c, p, w) in enumerate(powers):
            total = total + c * p
            powers[idx] = (c, p * (-w), w)
        coeffs.append(total / math.factorial(m))
    return TJet(0, tuple(coeffs))


def _pair(weight: Sequence[int], comps: Sequence):
    acc = 0 * comps[0]
    for w, x in zip(weight, comps):
        if w:
            acc = acc + w * x
    return acc


def _laurent(H: HilbertSeries, comps: Sequence, depth: int) -> TJet:
    if len(comps) != H.torus_rank:
        raise DimensionMismatch(f"Reeb vector has {len(comps)} components, torus rank is {H.torus_rank}")
    if depth < 1:
        raise ValueError("depth must be positive")
    weights = []
    for d in H.denominators:
        a = _pair(d, comps)
        v = value_of(a)
        if v == 0:
            raise ZeroWeight(f"weight {list(d)} vanishes: the Reeb vector lies on the cone boundary")
        if v < 0:
            raise NotInCone(f"weight {list(d)} is negative: the vector is outside the Reeb cone")
        weights.append(a)
    N = len(weights)
    expected_zeros = N - H.dimension
    if expected_zeros < 0:
        raise PoleOrderMismatch(f"declared dimension {H.dimension} exceeds {N} denominator factors")
    terms = [(c, _pair(e, comps)) for e, c in H.numerator.items()]
    raw = _exp_jet(terms, expected_zeros + depth, 0 * comps[0])
    num = raw.normalized()
    if not num.coeffs or num.leading_order != expected_zeros:
        realized = N - num.leading_order if num.coeffs else f"< {N - raw.truncation + 1}"
        raise PoleOrderMismatch(
            f"declared dimension {H.dimension} but the realized pole order at t = 0 is {realized}"
        )
    num = TJet(num.leading_order, num.coeffs[:depth])
    jet = num
    for a in weights:
        jet = jet * todd_jet(a, depth - 1)
    return jet


def expand_index(H: HilbertSeries, xi, depth: int = 2) -> TJet:
    """Laurent jet of the index character, ``depth`` terms from ``t^-(n+1)``."""
    xi = ReebVector.coerce(xi)
    return _laurent(H, xi.components, depth)


def a_coefficients(jet: TJet, n: int) -> list:
    """``a_i`` from a jet: coefficient of ``t^-(n+1-i)`` divided by ``(n-i)!``.

    Beyond ``i = n`` the factorial normalization is undefined; raw Laurent
    coefficients are returned there.
    """
    out = []
    for i, c in enumerate(jet.coeffs):
        out.append(c / math.factorial(n - i) if i <= n else c)
    return out


@dataclass(frozen=True)
class CharacterCoefficients:
    n: int
    a0: object
    a1: object
    b0: object = None
    b1: object = None
    c0: object = None
    higher: tuple = ()

    @property
    def mode(self) -> Mode:
        return scalar_mode(self.a0) or Mode.EXACT


def _direction(eta, xi: ReebVector) -> ReebVector:
    eta = eta if isinstance(eta, ReebVector) else ReebVector.coerce(eta, xi.mode)
    if eta.mode is not xi.mode:
        raise MixedModeError(f"direction is {eta.mode.value}, Reeb vector is {xi.mode.value}")
    if len(eta) != len(xi):
        raise DimensionMismatch(f"direction has {len(eta)} components, Reeb vector has {len(xi)}")
    return eta


def directional_a(H: HilbertSeries, xi, eta, depth: int = 2) -> list[DirJet2]:
    """``a_i`` as jets along ``xi + eps * eta``: value, D_eta and D_eta^2."""
    xi = ReebVector.coerce(xi)
    eta = _direction(eta, xi)
    zero = as_scalar(0, xi.mode)
    comps = [DirJet2(x, e, zero) for x, e in zip(xi, eta)]
    jet = _laurent(H, comps, depth)
    return [DirJet2.lift(a) for a in a_coefficients(jet, H.n)]


def extract_coefficients(H: HilbertSeries, xi, eta=None, depth: int = 2) -> CharacterCoefficients:
    xi = ReebVector.coerce(xi)
    n = H.n
    if n < 1:
        raise DimensionTooSmall(f"cone of complex dimension {H.dimension}; need n >= 1")
    depth = max(depth, 2)
    if eta is None:
        a = a_coefficients(_laurent(H, xi.components, depth), n)
        return CharacterCoefficients(n, a[0], a[1], higher=tuple(a[2:]))
    a = directional_a(H, xi, eta, depth)
    a0, a1 = a[0], a[1]
    b0 = -a0.dv / (n + 1)
    b1 = -a1.dv / n
    c0 = a0.d2v / ((n + 2) * (n + 1))
    return CharacterCoefficients(n, a0.v, a1.v, b0, b1, c0, higher=tuple(x.v for x in a[2:]))
