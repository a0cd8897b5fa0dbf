"""Exact multigraded Hilbert series for the supported ring classes.

A series is stored as ``numerator / prod_j (1 - z^{d_j})`` with an integer
Laurent polynomial numerator. Regularity of complete-intersection relations is
a caller obligation; a negative coefficient in
:func:`reeb_stab.oracle.series_coefficients` is the symptom of violating it.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .core import WeightMatrix, _as_weight_matrix
from .errors import (
    DimensionMismatch,
    NonMinimalGenerators,
    TooManyRelations,
    ValidationError,
)

Exponent = tuple[int, ...]


class LaurentPoly:
    """Finite integer combination of monomials ``z^e`` with ``e`` in ``Z^s``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, int] | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise DimensionMismatch(f"exponent {e} does not have {nvars} entries")
            if isinstance(c, bool) or int(c) != c:
                raise ValidationError("numerator", f"coefficient {c!r} is not an integer")
            if c:
                clean[e] = clean.get(e, 0) + int(c)
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        return cls(len(exponent), {tuple(exponent): coeff})

    @classmethod
    def one_minus(cls, exponent: Sequence[int]) -> "LaurentPoly":
        """The factor ``1 - z^exponent``."""
        return cls.one(len(exponent)) - cls.monomial(exponent)

    def _check(self, other):
        if other.nvars != self.nvars:
            raise DimensionMismatch(f"Laurent polynomials in {self.nvars} and {other.nvars} variables")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.nvars, out)

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        out: dict[Exponent, int] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.nvars, out)

    def shift(self, exponent: Sequence[int]) -> "LaurentPoly":
        return self * LaurentPoly.monomial(exponent)

    def lift(self, extra: int = 1) -> "LaurentPoly":
        """Embed into a lattice with ``extra`` more coordinates, padded by zero."""
        return LaurentPoly(self.nvars + extra, {e + (0,) * extra: c for e, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"z{i + 1}^{p}" if p != 1 else f"z{i + 1}" for i, p in enumerate(e) if p)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class HilbertSeries:
    numerator: LaurentPoly
    denominators: tuple[Exponent, ...]
    torus_rank: int
    dimension: int
    # induced C*-direction on a Rees central fiber, None otherwise
    eta: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        dens = tuple(tuple(int(x) for x in d) for d in self.denominators)
        object.__setattr__(self, "denominators", dens)
        if self.numerator.nvars != self.torus_rank:
            raise DimensionMismatch("numerator lattice rank differs from torus rank")
        if any(len(d) != self.torus_rank for d in dens):
            raise DimensionMismatch("denominator vector length differs from torus rank")
        if any(not any(d) for d in dens):
            raise ValidationError("denominators", "zero weight vector in denominator")

    @property
    def n(self) -> int:
        """Complex dimension of the cone minus one."""
        return self.dimension - 1

    def __str__(self):
        den = "".join(f"(1 - z^{list(d)})" for d in self.denominators)
        return f"({self.numerator}) / {den or '1'}"


class RelationKind(enum.Enum):
    FREE = "none"
    COMPLETE_INTERSECTION = "ci"
    MONOMIAL_IDEAL = "monomial"
    PRINCIPAL = "principal"
    NUMERATOR = "numerator"


@dataclass(frozen=True)
class RingSpec:
    """A ring ``C[x_1..x_N]/I`` with a diagonal torus action given by ``weights``.

    ``data`` holds relation weights (ci/principal), generator exponents
    (monomial) or an explicit :class:`LaurentPoly` numerator.
    """

    weights: WeightMatrix
    kind: RelationKind = RelationKind.FREE
    data: tuple = ()
    declared_dimension: int | None = None

    def __post_init__(self):
        W = _as_weight_matrix(self.weights)
        object.__setattr__(self, "weights", W)
        if self.kind is RelationKind.NUMERATOR:
            if not isinstance(self.data, LaurentPoly):
                raise ValidationError("relations", "numerator relation needs a LaurentPoly")
        else:
            object.__setattr__(self, "data", tuple(tuple(int(x) for x in v) for v in self.data))
        dim = self.declared_dimension
        if self.kind is RelationKind.FREE:
            if self.data:
                raise ValidationError("relations", "free ring takes no relation data")
            expected = W.N
        elif self.kind is RelationKind.COMPLETE_INTERSECTION:
            k = len(self.data)
            if k >= W.N:
                raise TooManyRelations(f"{k} relations in {W.N} variables")
            for b in self.data:
                if len(b) != W.s:
                    raise ValidationError("relations", f"relation weight {list(b)} is not of length s = {W.s}")
            expected = W.N - k
        elif self.kind is RelationKind.PRINCIPAL:
            if len(self.data) != 1 or len(self.data[0]) != W.s:
                raise ValidationError("relations", "principal relation needs exactly one weight vector of length s")
            expected = W.N - 1
        elif self.kind is RelationKind.MONOMIAL_IDEAL:
            for g in self.data:
                if len(g) != W.N or any(x < 0 for x in g):
                    raise ValidationError("relations", f"generator {list(g)} is not an exponent vector of length N = {W.N}")
            _check_minimal(self.data)
            expected = monomial_quotient_dimension(W.N, self.data)
        else:
            if self.data.nvars != W.s:
                raise ValidationError("relations", "numerator lattice rank differs from torus rank")
            expected = dim
        if dim is None:
            object.__setattr__(self, "declared_dimension", expected)
        elif dim != expected:
            raise ValidationError("dimension", f"declared dimension {dim} but the relations give {expected}")
        if self.declared_dimension is None or self.declared_dimension < 1:
            raise ValidationError("dimension", "dimension must be a positive integer")

    def hilbert_series(self) -> HilbertSeries:
        W = self.weights
        if self.kind is RelationKind.FREE:
            return hilbert_free(W)
        if self.kind in (RelationKind.COMPLETE_INTERSECTION, RelationKind.PRINCIPAL):
            return hilbert_ci(W, self.data)
        if self.kind is RelationKind.MONOMIAL_IDEAL:
            return hilbert_monomial(W, self.data)
        return HilbertSeries(self.data, W.columns, W.s, self.declared_dimension)


def hilbert_free(W) -> HilbertSeries:
    W = _as_weight_matrix(W)
    return HilbertSeries(LaurentPoly.one(W.s), W.columns, W.s, W.N)


def hilbert_ci(W, betas: Sequence[Sequence[int]]) -> HilbertSeries:
    """Koszul-complex series ``prod (1 - z^beta) / prod (1 - z^alpha_j)``."""
    W = _as_weight_matrix(W)
    betas = [tuple(b) for b in betas]
    if len(betas) >= W.N:
        raise TooManyRelations(f"{len(betas)} relations in {W.N} variables")
    num = LaurentPoly.one(W.s)
    for b in betas:
        if len(b) != W.s:
            raise DimensionMismatch(f"relation weight {list(b)} is not of length s = {W.s}")
        num = num * LaurentPoly.one_minus(b)
    return HilbertSeries(num, W.columns, W.s, W.N - len(betas))


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _check_minimal(gens):
    for a, b in itertools.permutations(gens, 2):
        if _divides(a, b):
            raise NonMinimalGenerators(f"generator {list(a)} divides {list(b)}")


def _minimalize(gens) -> frozenset:
    gens = set(gens)
    return frozenset(g for g in gens if not any(h != g and _divides(h, g) for h in gens))


def monomial_quotient_dimension(N: int, gens) -> int:
    """Largest coordinate subset containing no generator's support."""
    supports = [frozenset(i for i, e in enumerate(g) if e) for g in gens]
    if any(not s for s in supports):
        return 0
    for size in range(N, -1, -1):
        for subset in itertools.combinations(range(N), size):
            S = set(subset)
            if not any(sup <= S for sup in supports):
                return size
    return 0


def hilbert_monomial(W, gens: Sequence[Sequence[int]]) -> HilbertSeries:
    """Series of ``R/I`` for a monomial ideal by pivot splitting.

    Uses ``0 -> R/(I:x_i)(-alpha_i) -> R/I -> R/(I + x_i) -> 0`` until every
    generator is a pure power, where the quotient is a complete intersection.
    """
    W = _as_weight_matrix(W)
    gens = [tuple(int(x) for x in g) for g in gens]
    for g in gens:
        if len(g) != W.N:
            raise DimensionMismatch(f"generator {list(g)} is not of length N = {W.N}")
    _check_minimal(gens)
    cols = W.columns
    s = W.s

    @lru_cache(maxsize=None)
    def numerator(ideal: frozenset) -> LaurentPoly:
        if not ideal:
            return LaurentPoly.one(s)
        if any(not any(g) for g in ideal):
            return LaurentPoly(s)
        mixed = [g for g in ideal if sum(1 for e in g if e) > 1]
        if not mixed:
            out = LaurentPoly.one(s)
            for g in ideal:
                (i,) = [k for k, e in enumerate(g) if e]
                out = out * LaurentPoly.one_minus([g[i] * a for a in cols[i]])
            return out
        candidates = {i for g in mixed for i, e in enumerate(g) if e}
        counts = Counter(i for g in ideal for i, e in enumerate(g) if e)
        pivot = min(candidates, key=lambda i: (-counts[i], i))
        unit = tuple(int(k == pivot) for k in range(W.N))
        plus = _minimalize(list(ideal) + [unit])
        colon = _minimalize(tuple(max(e - (k == pivot), 0) for k, e in enumerate(g)) for g in ideal)
        return numerator(plus) + numerator(colon).shift(cols[pivot])

    num = numerator(frozenset(gens))
    return HilbertSeries(num, cols, s, monomial_quotient_dimension(W.N, gens))


def quotient_principal(H: HilbertSeries, alpha_f: Sequence[int]) -> HilbertSeries:
    """Series of ``R/(f)`` for a homogeneous nonzerodivisor ``f`` of weight ``alpha_f``."""
    alpha_f = tuple(alpha_f)
    if len(alpha_f) != H.torus_rank:
        raise DimensionMismatch(f"weight {list(alpha_f)} is not of length {H.torus_rank}")
    return HilbertSeries(
        H.numerator * LaurentPoly.one_minus(alpha_f), H.denominators, H.torus_rank, H.dimension - 1
    )


def rees_central_fiber(H_quotient: HilbertSeries, alpha_f: Sequence[int]) -> HilbertSeries:
    """Series of ``R/(f) (x) C[w]`` over the torus extended by one rank.

    ``w`` has weight ``(alpha_f, 1)``; the induced C*-action is the new last
    coordinate direction, recorded in ``eta``.
    """
    alpha_f = tuple(alpha_f)
    s = H_quotient.torus_rank
    if len(alpha_f) != s:
        raise DimensionMismatch(f"weight {list(alpha_f)} is not of length {s}")
    dens = tuple(d + (0,) for d in H_quotient.denominators) + (alpha_f + (1,),)
    return HilbertSeries(
        H_quotient.numerator.lift(),
        dens,
        s + 1,
        H_quotient.dimension + 1,
        eta=(0,) * s + (1,),
    )
