"""Computable K-stability obstructions for affine cones with a Reeb vector field."""

from .core import Mode, ReebCone, ReebVector, WeightMatrix, build_reeb_cone, is_rational, is_reeb
from .hilbert import HilbertSeries, LaurentPoly, RelationKind, RingSpec, quotient_principal, rees_central_fiber
from .laurent import CharacterCoefficients, expand_index, extract_coefficients, todd_jet
from .model import Model, parse_model
from .oracle import finite_diff_check, partial_sum_F, rational_approx, series_coefficients
from .stability import (
    GorensteinData,
    StabilityReport,
    TestConfigSpec,
    Verdict,
    evaluate_test_config,
    futaki,
    futaki_product,
    futaki_rees,
    gorenstein_check,
    lichnerowicz_scan,
)
from .volmin import VolMinResult, minimize_volume, volume_ratio

__version__ = "0.1.0"

__all__ = [
    "CharacterCoefficients", "GorensteinData", "HilbertSeries", "LaurentPoly", "Mode", "Model",
    "ReebCone", "ReebVector", "RelationKind", "RingSpec", "StabilityReport", "TestConfigSpec",
    "Verdict", "VolMinResult", "WeightMatrix", "build_reeb_cone", "evaluate_test_config",
    "expand_index", "extract_coefficients", "finite_diff_check", "futaki", "futaki_product",
    "futaki_rees", "gorenstein_check", "is_rational", "is_reeb", "lichnerowicz_scan",
    "minimize_volume", "parse_model", "partial_sum_F", "quotient_principal", "rational_approx",
    "rees_central_fiber", "series_coefficients", "todd_jet", "volume_ratio",
]
