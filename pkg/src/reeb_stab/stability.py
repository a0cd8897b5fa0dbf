"""Donaldson-Futaki invariants of product and Rees test configurations.

Every verdict here is about one test configuration. Nothing in this module
claims that a cone *is* K-semistable; that would require all configurations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Mode, ReebVector, as_scalar, integer_kernel_basis, to_float
from .errors import (
    ConsistencyError,
    DimensionMismatch,
    NonpositiveCharge,
    NotOnCrossSection,
    NotTangent,
    ValidationError,
)
from .hilbert import HilbertSeries, RelationKind, RingSpec, quotient_principal, rees_central_fiber
from .laurent import CharacterCoefficients, directional_a, extract_coefficients

NEAR_ZERO = 1e-9
FLOAT_AGREEMENT = 1e-8


class Verdict(enum.Enum):
    DESTABILIZING = "destabilizing"
    NONNEGATIVE = "nonnegative"
    UNSTABLE = "unstable"
    NO_OBSTRUCTION = "no obstruction"


def _close(x, y, mode: Mode, rel=FLOAT_AGREEMENT) -> bool:
    if mode is Mode.EXACT:
        return x == y
    return abs(x - y) <= rel * max(1.0, abs(x), abs(y))


@dataclass(frozen=True)
class GorensteinData:
    """Weight functional of the holomorphic volume form and its level ``n + 1``."""

    theta: tuple
    level: int

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(Fraction(v) for v in self.theta))
        if self.level < 2:
            raise ValidationError("gorenstein_level", "level n + 1 must be at least 2")

    @classmethod
    def for_ring(cls, spec: RingSpec, theta=None, level=None) -> "GorensteinData":
        """Adjunction default ``sum alpha_j - sum beta_i`` for complete intersections."""
        level = spec.declared_dimension if level is None else level
        if theta is None:
            if spec.kind not in (RelationKind.FREE, RelationKind.COMPLETE_INTERSECTION, RelationKind.PRINCIPAL):
                raise ValidationError("theta_weight", f"no default volume-form weight for {spec.kind.value} rings")
            theta = [sum(col) for col in zip(*spec.weights.columns)]
            for beta in spec.data:
                theta = [t - b for t, b in zip(theta, beta)]
        if len(theta) != spec.weights.s:
            raise ValidationError("theta_weight", f"needs {spec.weights.s} entries")
        return cls(tuple(theta), level)

    def value(self, xi: ReebVector):
        xi = ReebVector.coerce(xi)
        if len(xi) != len(self.theta):
            raise DimensionMismatch(f"vector has {len(xi)} components, theta has {len(self.theta)}")
        theta = self.theta if xi.mode is Mode.EXACT else [to_float(t) for t in self.theta]
        return sum((t * x for t, x in zip(theta, xi)), as_scalar(0, xi.mode))

    def check_on_section(self, xi: ReebVector):
        xi = ReebVector.coerce(xi)
        val = self.value(xi)
        if not _close(val, self.level, xi.mode, rel=NEAR_ZERO):
            raise NotOnCrossSection(f"theta(xi) = {val}, expected {self.level}")

    def check_tangent(self, eta: ReebVector):
        eta = ReebVector.coerce(eta)
        val = self.value(eta)
        if not _close(val, 0, eta.mode, rel=NEAR_ZERO):
            raise NotTangent(f"theta(eta) = {val}, expected 0")

    def tangent_basis(self) -> list[tuple[int, ...]]:
        return integer_kernel_basis(self.theta)


@dataclass(frozen=True)
class StabilityReport:
    futaki: object
    norm_sq: object
    coefficients: CharacterCoefficients
    verdict: Verdict
    near_zero: bool = False


def _verdict(fut, mode: Mode) -> tuple[Verdict, bool]:
    if mode is Mode.EXACT:
        return (Verdict.DESTABILIZING if fut < 0 else Verdict.NONNEGATIVE), False
    if abs(fut) < NEAR_ZERO:
        return Verdict.NONNEGATIVE, True
    return (Verdict.DESTABILIZING if fut < 0 else Verdict.NONNEGATIVE), False


def futaki(H_central: HilbertSeries, xi, eta) -> StabilityReport:
    """``Fut = (a1/a0) b0 - b1`` and ``|eta|^2 = c0 - b0^2/a0`` on the central fiber."""
    xi = ReebVector.coerce(xi)
    cc = extract_coefficients(H_central, xi, eta)
    fut = cc.a1 / cc.a0 * cc.b0 - cc.b1
    norm_sq = cc.c0 - cc.b0 * cc.b0 / cc.a0
    verdict, near = _verdict(fut, xi.mode)
    return StabilityReport(fut, norm_sq, cc, verdict, near)


def futaki_product(H: HilbertSeries, G: GorensteinData, xi, eta):
    """Half the derivative of the volume along a direction tangent to the slice.

    Cross-checked against the general invariant, which must agree whenever the
    Gorenstein relation ``a1 = n(n+1)/2 a0`` holds on the slice.
    """
    xi = ReebVector.coerce(xi)
    eta = eta if isinstance(eta, ReebVector) else ReebVector.coerce(eta, xi.mode)
    G.check_on_section(xi)
    G.check_tangent(eta)
    a0 = directional_a(H, xi, eta)[0]
    half = a0.dv / 2
    general = futaki(H, xi, eta).futaki
    if not _close(half, general, xi.mode):
        raise ConsistencyError(f"product Futaki {half} disagrees with the general invariant {general}")
    return half


def rees_closed_form(cc: CharacterCoefficients, charge):
    n = cc.n
    return -(cc.a1 / charge - n * (n + 1) * cc.a0 / 2) / (n * (n + 1))


@dataclass(frozen=True)
class ReesCheck:
    charge: object
    closed_form: object
    generic: object
    central_fiber: HilbertSeries


def rees_check(H: HilbertSeries, xi, alpha_f: Sequence[int]) -> ReesCheck:
    """Rees-deformation Futaki by closed form and on the explicit central fiber."""
    xi = ReebVector.coerce(xi)
    charge = xi.pair(alpha_f)
    if charge <= 0:
        raise NonpositiveCharge(f"alpha_f(xi) = {charge} is not positive")
    cc = extract_coefficients(H, xi)
    closed = rees_closed_form(cc, charge)
    Hc = rees_central_fiber(quotient_principal(H, alpha_f), alpha_f)
    zero = as_scalar(0, xi.mode)
    xi_ext = ReebVector(tuple(xi) + (zero,), xi.mode)
    generic = futaki(Hc, xi_ext, ReebVector.coerce(Hc.eta, xi.mode)).futaki
    if not _close(closed, generic, xi.mode):
        raise ConsistencyError(f"Rees closed form {closed} disagrees with the central-fiber value {generic}")
    return ReesCheck(charge, closed, generic, Hc)


def futaki_rees(H: HilbertSeries, xi, alpha_f: Sequence[int]):
    return rees_check(H, xi, alpha_f).closed_form


@dataclass(frozen=True)
class LichnerowiczEntry:
    coordinate: str
    charge: object
    verdict: Verdict
    futaki_normalized: object  # -(1/charge - 1)/2, the Rees invariant divided by a0
    futaki: object  # Rees invariant from a0, a1 directly


def lichnerowicz_scan(spec: RingSpec, G: GorensteinData, xi, names: Sequence[str] | None = None,
                      exclude: Sequence[int] = ()) -> list[LichnerowiczEntry]:
    """Charges of the ambient coordinates under a slice-normalized Reeb vector.

    Coordinates that vanish identically on the variety must be passed in
    ``exclude``; they are not holomorphic functions of charge ``l_j(xi)``.
    """
    xi = ReebVector.coerce(xi)
    G.check_on_section(xi)
    cols = spec.weights.columns
    names = list(names) if names else [f"x{j + 1}" for j in range(len(cols))]
    cc = extract_coefficients(spec.hilbert_series(), xi)
    out = []
    for j, col in enumerate(cols):
        if j in exclude:
            continue
        lam = xi.pair(col)
        if lam <= 0:
            raise NonpositiveCharge(f"coordinate {names[j]} has charge {lam}")
        verdict = Verdict.UNSTABLE if lam < 1 else Verdict.NO_OBSTRUCTION
        normalized = -(1 / lam - 1) / 2
        out.append(LichnerowiczEntry(names[j], lam, verdict, normalized, rees_closed_form(cc, lam)))
    return out


def gorenstein_check(H: HilbertSeries, G: GorensteinData, xi):
    """Defect ``a1 - n(n+1)/2 a0``; zero on the slice for Calabi-Yau inputs."""
    xi = ReebVector.coerce(xi)
    G.check_on_section(xi)
    cc = extract_coefficients(H, xi)
    return cc.a1 - cc.n * (cc.n + 1) * cc.a0 / 2


class ConfigKind(enum.Enum):
    PRODUCT = "product"
    REES = "rees"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class TestConfigSpec:
    """A test configuration: a torus direction, a principal ideal, or a given central fiber."""

    __test__ = False  # not a pytest class

    kind: ConfigKind
    eta: tuple = ()
    alpha_f: tuple = ()
    central_fiber: RingSpec | None = None

    @classmethod
    def product(cls, eta) -> "TestConfigSpec":
        return cls(ConfigKind.PRODUCT, eta=tuple(eta))

    @classmethod
    def rees(cls, alpha_f) -> "TestConfigSpec":
        return cls(ConfigKind.REES, alpha_f=tuple(alpha_f))

    @classmethod
    def explicit(cls, central_fiber: RingSpec, eta) -> "TestConfigSpec":
        return cls(ConfigKind.EXPLICIT, eta=tuple(eta), central_fiber=central_fiber)


def evaluate_test_config(H: HilbertSeries, xi, config: TestConfigSpec) -> StabilityReport:
    """Futaki report of ``config`` for the cone with series ``H`` at ``xi``.

    For an explicit central fiber over a larger torus, ``xi`` is padded with
    zeros: the original torus is assumed to be the leading coordinates.
    """
    xi = ReebVector.coerce(xi)
    if config.kind is ConfigKind.PRODUCT:
        return futaki(H, xi, config.eta)
    if config.kind is ConfigKind.REES:
        check = rees_check(H, xi, config.alpha_f)
        zero = as_scalar(0, xi.mode)
        xi_ext = ReebVector(tuple(xi) + (zero,), xi.mode)
        return futaki(check.central_fiber, xi_ext, ReebVector.coerce(check.central_fiber.eta, xi.mode))
    Hc = config.central_fiber.hilbert_series()
    extra = Hc.torus_rank - len(xi)
    if extra < 0:
        raise DimensionMismatch("central fiber torus is smaller than the original torus")
    zero = as_scalar(0, xi.mode)
    xi_ext = ReebVector(tuple(xi) + (zero,) * extra, xi.mode)
    return futaki(Hc, xi_ext, config.eta)
