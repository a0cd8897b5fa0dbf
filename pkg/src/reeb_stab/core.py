"""Scalars, weight matrices, Reeb vectors and the Reeb cone.

Two arithmetic modes are supported. EXACT carries :class:`fractions.Fraction`
values and never rounds; FLOAT carries binary floats (Python ``float`` at the
default 53 bits, :mod:`mpmath` numbers when ``REEB_STAB_PRECISION`` asks for
more). Plain ``int`` is accepted by both modes since integer weights are exact
in either. Anything else that would silently promote one mode into the other
raises :class:`~reeb_stab.errors.MixedModeError`.
"""

from __future__ import annotations

import enum
import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import (
    DimensionMismatch,
    MixedModeError,
    RankDeficient,
    ValidationError,
)


class Mode(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


DEFAULT_PRECISION = 53


def float_precision() -> int:
    raw = os.environ.get("REEB_STAB_PRECISION", "")
    if not raw.strip():
        return DEFAULT_PRECISION
    bits = int(raw)
    if bits < 24:
        raise ValueError(f"REEB_STAB_PRECISION must be at least 24 bits, got {bits}")
    return bits


def to_float(x):
    """Convert ``x`` into the configured FLOAT representation."""
    bits = float_precision()
    if bits == DEFAULT_PRECISION:
        if isinstance(x, Fraction):
            return x.numerator / x.denominator
        return float(x)
    mpmath.mp.prec = bits
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def to_exact(x) -> Fraction:
    """Parse ``x`` as an exact rational; strings like ``"3/2"`` are accepted."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise MixedModeError(f"{x!r} ({type(x).__name__}) is not an exact scalar")


def float_to_fraction(x) -> Fraction:
    """Exact binary value of a float or mpmath number."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        man, exp = x.man_exp
        return Fraction(man) * Fraction(2) ** exp
    return Fraction(x)


def scalar_mode(x) -> Mode | None:
    """Mode of a scalar value; ``None`` for plain integers (valid in both modes)."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return None
    if isinstance(x, Fraction):
        return Mode.EXACT
    if isinstance(x, (float, mpmath.mpf)):
        return Mode.FLOAT
    mode = getattr(x, "mode", None)
    if isinstance(mode, Mode):
        return mode
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def as_scalar(x, mode: Mode):
    """Coerce ``x`` to ``mode``, refusing cross-mode conversions."""
    m = scalar_mode(x)
    if m is not None and m is not mode:
        raise MixedModeError(f"cannot use {m.value} value {x!r} in {mode.value} mode")
    return Fraction(x) if mode is Mode.EXACT else to_float(x)


def is_zero(x, scale=1, rel_tol: float = 1e-9) -> bool:
    """Exact zero test for rationals, relative threshold for floats."""
    if isinstance(x, (int, Fraction)):
        return x == 0
    return abs(x) <= rel_tol * abs(scale)


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def exact_rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def integer_kernel_basis(row: Sequence) -> list[tuple[int, ...]]:
    """Integer basis of ``{v : row . v = 0}`` by unimodular column reduction.

    ``row`` may hold rationals; it is cleared to a primitive integer vector
    first. Returns ``len(row) - 1`` vectors (or ``len(row)`` if row is zero).
    """
    fr = [Fraction(v) for v in row]
    s = len(fr)
    den = math.lcm(*(f.denominator for f in fr)) if fr else 1
    v = [int(f * den) for f in fr]
    basis = [[int(i == j) for i in range(s)] for j in range(s)]  # columns of U
    while sum(1 for x in v if x != 0) > 1:
        i = min((k for k in range(s) if v[k] != 0), key=lambda k: abs(v[k]))
        for j in range(s):
            if j != i and v[j] != 0:
                q = v[j] // v[i]
                v[j] -= q * v[i]
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[i])]
    nonzero = [k for k in range(s) if v[k] != 0]
    return [tuple(basis[j]) for j in range(s) if j not in nonzero]


def _fm_solve(rows: list[tuple[tuple[Fraction, ...], Fraction]], nvars: int):
    """Fourier-Motzkin feasibility for ``a . x >= b``; returns a witness or None."""
    if nvars == 0:
        return () if all(b <= 0 for _, b in rows) else None
    k = nvars - 1
    lower, upper, rest = [], [], []
    for a, b in rows:
        c = a[k]
        if c > 0:
            lower.append((a, b))
        elif c < 0:
            upper.append((a, b))
        else:
            rest.append((a[:k], b))
    reduced = set(rest)
    for al, bl in lower:
        for au, bu in upper:
            cl, cu = al[k], -au[k]
            coeffs = tuple(cu * x + cl * y for x, y in zip(al[:k], au[:k]))
            rhs = cu * bl + cl * bu
            reduced.add(_normalize(coeffs, rhs))
    sub = _fm_solve(list(reduced), k)
    if sub is None:
        return None

    def bound(a, b):
        return (b - sum(x * y for x, y in zip(a[:k], sub))) / a[k]

    lo = max((bound(a, b) for a, b in lower), default=None)
    hi = min((bound(a, b) for a, b in upper), default=None)
    if lo is None and hi is None:
        val = Fraction(0)
    elif lo is None:
        val = hi
    elif hi is None:
        val = lo
    else:
        val = (lo + hi) / 2
    return sub + (val,)


def _normalize(coeffs, rhs):
    scale = max((abs(c) for c in coeffs), default=Fraction(0))
    if scale == 0:
        return coeffs, rhs
    return tuple(c / scale for c in coeffs), rhs / scale


def strictly_feasible(functionals: Sequence[Sequence[int]], s: int):
    """Find exact ``x`` with ``f . x > 0`` for every functional, or None.

    The system is homogeneous, so strict positivity is equivalent to
    ``f . x >= 1`` which Fourier-Motzkin handles with exact pivoting.
    """
    rows = [_normalize(tuple(Fraction(v) for v in f), Fraction(1)) for f in functionals]
    witness = _fm_solve(list(set(rows)), s)
    if witness is None:
        return None
    den = math.lcm(*(w.denominator for w in witness))
    ints = [int(w * den) for w in witness]
    g = math.gcd(*ints) or 1
    return tuple(Fraction(v // g) for v in ints)


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class WeightMatrix:
    """Integer ``s x N`` matrix; column ``j`` is the torus weight of ``x_j``."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        if not rows or not rows[0]:
            raise ValidationError("weights", "matrix must be non-empty")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValidationError("weights", "rows have different lengths")
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                if isinstance(v, bool) or not isinstance(v, int):
                    raise ValidationError("weights", f"entry ({i},{j}) = {v!r} is not an integer")
        object.__setattr__(self, "entries", rows)
        if exact_rank(rows) < len(rows):
            raise RankDeficient(f"weight matrix has rank {exact_rank(rows)} < s = {len(rows)}")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "WeightMatrix":
        return cls(tuple(zip(*columns)))

    @property
    def s(self) -> int:
        return len(self.entries)

    @property
    def N(self) -> int:
        return len(self.entries[0])

    @property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.entries))

    def __repr__(self):
        return f"WeightMatrix({[list(r) for r in self.entries]})"


@dataclass(frozen=True)
class ReebVector:
    """Coordinates of a torus Lie algebra element in the fixed integral basis."""

    components: tuple
    mode: Mode

    def __post_init__(self):
        comps = tuple(as_scalar(c, self.mode) for c in self.components)
        object.__setattr__(self, "components", comps)

    @classmethod
    def exact(cls, values: Iterable) -> "ReebVector":
        return cls(tuple(to_exact(v) for v in values), Mode.EXACT)

    @classmethod
    def floating(cls, values: Iterable) -> "ReebVector":
        vals = []
        for v in values:
            if isinstance(v, str):
                v = Fraction(v) if "/" in v else float(v)
            vals.append(to_float(v))
        return cls(tuple(vals), Mode.FLOAT)

    @classmethod
    def coerce(cls, values, mode: Mode | None = None) -> "ReebVector":
        """Accept a ReebVector or a plain sequence; infers EXACT unless floats appear."""
        if isinstance(values, ReebVector):
            if mode is not None and values.mode is not mode:
                raise MixedModeError(f"expected {mode.value} vector, got {values.mode.value}")
            return values
        values = tuple(values)
        if mode is None:
            modes = {scalar_mode(v) for v in values if not isinstance(v, str)} - {None}
            if len(modes) > 1:
                raise MixedModeError("vector mixes exact and float components")
            mode = modes.pop() if modes else Mode.EXACT
        return cls.exact(values) if mode is Mode.EXACT else cls.floating(values)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def _check(self, other: "ReebVector"):
        if other.mode is not self.mode:
            raise MixedModeError(f"cannot combine {self.mode.value} and {other.mode.value} vectors")
        if len(other) != len(self):
            raise DimensionMismatch(f"vector lengths {len(self)} and {len(other)} differ")

    def __add__(self, other):
        self._check(other)
        return ReebVector(tuple(a + b for a, b in zip(self, other)), self.mode)

    def __sub__(self, other):
        self._check(other)
        return ReebVector(tuple(a - b for a, b in zip(self, other)), self.mode)

    def __neg__(self):
        return ReebVector(tuple(-a for a in self), self.mode)

    def scaled(self, lam) -> "ReebVector":
        lam = as_scalar(lam, self.mode)
        return ReebVector(tuple(lam * a for a in self), self.mode)

    def pair(self, weight: Sequence[int]):
        """Evaluate the weight ``weight`` on this vector: ``sum_i weight_i * xi_i``."""
        if len(weight) != len(self):
            raise DimensionMismatch(f"weight of length {len(weight)} against vector of length {len(self)}")
        return sum((w * x for w, x in zip(weight, self.components)), as_scalar(0, self.mode))

    def to_float(self) -> "ReebVector":
        return ReebVector(tuple(to_float(c) for c in self), Mode.FLOAT)

    def __repr__(self):
        return f"ReebVector({format_vector(self)}, {self.mode.value})"


def format_scalar(x) -> str:
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return f"{x:.17g}"
    return mpmath.nstr(x, max(17, int(float_precision() * 0.30103) + 1))


def format_vector(v) -> str:
    return "(" + ", ".join(format_scalar(c) for c in v) + ")"


@dataclass(frozen=True)
class ReebCone:
    """Open cone ``{xi : l_j(xi) > 0 for all j}`` cut out by the columns of ``W``."""

    weights: WeightMatrix
    witness: ReebVector | None

    @property
    def functionals(self) -> tuple[tuple[int, ...], ...]:
        return self.weights.columns

    @property
    def empty(self) -> bool:
        return self.witness is None

    def contains(self, xi) -> bool:
        return is_reeb(self.weights, xi)

    def sample(self, rng: random.Random | None = None, spread: int = 4) -> ReebVector:
        """Random exact interior point: the witness perturbed inside its margin."""
        if self.witness is None:
            raise ValueError("cannot sample from an empty Reeb cone")
        rng = rng or random.Random()
        s = self.weights.s
        direction = [Fraction(rng.randint(-spread, spread)) for _ in range(s)]
        worst = max((abs(sum(d * w for d, w in zip(direction, col))) for col in self.functionals), default=0)
        margin = min(self.witness.pair(col) for col in self.functionals)
        if worst == 0:
            eps = Fraction(1)
        else:
            eps = margin / worst * Fraction(rng.randint(1, 9), 10)
        scale = Fraction(rng.randint(1, 6), rng.randint(1, 6))
        pt = [scale * (w + eps * d) for w, d in zip(self.witness, direction)]
        xi = ReebVector.exact(pt)
        assert is_reeb(self.weights, xi)
        return xi


def _as_weight_matrix(W) -> WeightMatrix:
    return W if isinstance(W, WeightMatrix) else WeightMatrix(tuple(tuple(r) for r in W))


def build_reeb_cone(W) -> ReebCone:
    """Column functionals of ``W`` plus an exact interior witness (None if empty)."""
    W = _as_weight_matrix(W)
    witness = strictly_feasible(W.columns, W.s)
    return ReebCone(W, None if witness is None else ReebVector.exact(witness))


def is_reeb(W, xi) -> bool:
    W = _as_weight_matrix(W)
    xi = ReebVector.coerce(xi)
    if len(xi) != W.s:
        raise DimensionMismatch(f"Reeb vector has {len(xi)} components, torus rank is {W.s}")
    return all(xi.pair(col) > 0 for col in W.columns)


def is_rational(xi, W=None) -> bool:
    """EXACT vectors are rational by construction; FLOAT is the irrational pathway."""
    return ReebVector.coerce(xi).mode is Mode.EXACT
