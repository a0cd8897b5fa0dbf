"""JSON model files and report encoding.

A model file is one JSON object::

    {
      "torus_rank": 3,
      "weights": [[...], ...],            # s rows, N columns, integers
      "relations": {"type": "ci", "weights": [[...]]}
                 | {"type": "monomial", "generators": [[...]]}
                 | {"type": "none"}
                 | {"type": "numerator", "terms": [[[exponent...], coeff], ...]},
      "dimension": 3,
      "gorenstein_level": 3,              # optional, defaults to dimension
      "theta_weight": [...],              # optional, adjunction default for ci/none
      "reeb_vectors": {"name": ["3/2", 1.5, ...]},
      "coordinates": ["x", "y", ...],     # optional
      "functions": {"name": [weight...]}, # optional, named weights for Rees tests
      "default_reeb": "name", "start": "name"
    }

Strings are exact rationals; JSON floats select FLOAT mode.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .core import Mode, ReebVector, WeightMatrix, format_scalar
from .errors import ParseError, ReebStabError, ValidationError
from .hilbert import LaurentPoly, RelationKind, RingSpec
from .stability import GorensteinData

RELATION_KINDS = {
    "none": RelationKind.FREE,
    "ci": RelationKind.COMPLETE_INTERSECTION,
    "monomial": RelationKind.MONOMIAL_IDEAL,
    "numerator": RelationKind.NUMERATOR,
}


@dataclass
class Model:
    name: str
    spec: RingSpec
    gorenstein: GorensteinData | None
    reeb_vectors: dict[str, ReebVector]
    coordinates: list[str]
    functions: dict[str, tuple[int, ...]] = field(default_factory=dict)
    default_reeb: str | None = None
    start: str | None = None

    def reeb(self, name: str | None = None) -> ReebVector:
        name = name or self.default_reeb or next(iter(self.reeb_vectors), None)
        if name is None:
            raise ValidationError("reeb_vectors", "model has no Reeb vectors")
        if name not in self.reeb_vectors:
            raise ValidationError("reeb_vectors", f"no Reeb vector named {name!r}")
        return self.reeb_vectors[name]


def shipped_models() -> list[str]:
    root = resources.files("reeb_stab") / "models"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_model_path(path) -> Path:
    p = Path(path)
    if p.exists():
        return p
    root = resources.files("reeb_stab") / "models"
    for candidate in (p.name, p.name + ".json"):
        q = root / candidate
        if q.is_file():
            return Path(str(q))
    raise ParseError(f"model file {path!s} not found (shipped models: {', '.join(shipped_models())})")


def parse_scalar(value, field_name: str):
    if isinstance(value, bool):
        raise ValidationError(field_name, f"{value!r} is not a number")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(field_name, f"{value!r} is not a rational number") from None
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValidationError(field_name, f"{value!r} is not finite")
        return value
    raise ValidationError(field_name, f"{value!r} is not a number")


def parse_vector(values, field_name: str) -> ReebVector:
    if not isinstance(values, list) or not values:
        raise ValidationError(field_name, "expected a non-empty list")
    parsed = [parse_scalar(v, field_name) for v in values]
    if any(isinstance(v, float) for v in parsed):
        return ReebVector.floating(float(v) for v in parsed)
    return ReebVector.exact(parsed)


def _int_matrix(value, field_name: str, ncols: int | None = None) -> list[list[int]]:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise ValidationError(field_name, "expected a list of integer lists")
    for i, row in enumerate(value):
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, int):
                raise ValidationError(field_name, f"entry [{i}][{j}] = {v!r} is not an integer")
        if ncols is not None and len(row) != ncols:
            raise ValidationError(field_name, f"row {i} has {len(row)} entries, expected {ncols}")
    return value


def model_from_dict(doc: dict, name: str = "model") -> Model:
    if not isinstance(doc, dict):
        raise ParseError("model must be a JSON object")
    for key in ("torus_rank", "weights", "dimension"):
        if key not in doc:
            raise ValidationError(key, "missing required field")
    s = doc["torus_rank"]
    if isinstance(s, bool) or not isinstance(s, int) or s < 1:
        raise ValidationError("torus_rank", f"{s!r} is not a positive integer")
    rows = _int_matrix(doc["weights"], "weights")
    if len(rows) != s:
        raise ValidationError("weights", f"has {len(rows)} rows but torus_rank is {s}")
    if not rows[0] or any(len(r) != len(rows[0]) for r in rows):
        raise ValidationError("weights", "rows must be non-empty and of equal length")
    W = WeightMatrix(tuple(tuple(r) for r in rows))
    dim = doc["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise ValidationError("dimension", f"{dim!r} is not an integer")

    rel = doc.get("relations", {"type": "none"})
    if not isinstance(rel, dict) or rel.get("type") not in RELATION_KINDS:
        raise ValidationError("relations", f"type must be one of {sorted(RELATION_KINDS)}")
    kind = RELATION_KINDS[rel["type"]]
    if kind is RelationKind.COMPLETE_INTERSECTION:
        data = _int_matrix(rel.get("weights"), "relations.weights", s)
    elif kind is RelationKind.MONOMIAL_IDEAL:
        data = _int_matrix(rel.get("generators"), "relations.generators", W.N)
    elif kind is RelationKind.NUMERATOR:
        terms = rel.get("terms")
        if not isinstance(terms, list):
            raise ValidationError("relations.terms", "expected a list of [exponent, coefficient] pairs")
        poly = {}
        for i, term in enumerate(terms):
            if not (isinstance(term, list) and len(term) == 2):
                raise ValidationError("relations.terms", f"term {i} is not an [exponent, coefficient] pair")
            (exp,) = _int_matrix([term[0]], "relations.terms", s)
            coeff = term[1]
            if isinstance(coeff, bool) or not isinstance(coeff, int):
                raise ValidationError("relations.terms", f"term {i} coefficient {coeff!r} is not an integer")
            poly[tuple(exp)] = poly.get(tuple(exp), 0) + coeff
        data = LaurentPoly(s, poly)
    else:
        data = ()
    spec = RingSpec(W, kind, data if isinstance(data, LaurentPoly) else tuple(map(tuple, data)), dim)

    level = doc.get("gorenstein_level")
    theta = doc.get("theta_weight")
    gorenstein = None
    if theta is not None:
        if not isinstance(theta, list) or len(theta) != s:
            raise ValidationError("theta_weight", f"expected a list of {s} numbers")
        theta = [parse_scalar(v, "theta_weight") for v in theta]
        if any(isinstance(v, float) for v in theta):
            raise ValidationError("theta_weight", "entries must be exact")
    if theta is not None or kind in (RelationKind.FREE, RelationKind.COMPLETE_INTERSECTION):
        gorenstein = GorensteinData.for_ring(spec, theta, level)

    vectors = {}
    raw_vectors = doc.get("reeb_vectors", {})
    if not isinstance(raw_vectors, dict):
        raise ValidationError("reeb_vectors", "expected an object of named vectors")
    for key, vals in raw_vectors.items():
        vec = parse_vector(vals, f"reeb_vectors.{key}")
        if len(vec) != s:
            raise ValidationError(f"reeb_vectors.{key}", f"has {len(vec)} components, torus_rank is {s}")
        vectors[key] = vec

    coords = doc.get("coordinates") or [f"x{j + 1}" for j in range(W.N)]
    if len(coords) != W.N:
        raise ValidationError("coordinates", f"expected {W.N} names")
    functions = {}
    for key, wt in (doc.get("functions") or {}).items():
        (row,) = _int_matrix([wt], f"functions.{key}", s)
        functions[key] = tuple(row)
    for key in ("default_reeb", "start"):
        if doc.get(key) is not None and doc[key] not in vectors:
            raise ValidationError(key, f"names unknown Reeb vector {doc[key]!r}")
    return Model(doc.get("name", name), spec, gorenstein, vectors, list(coords), functions,
                 doc.get("default_reeb"), doc.get("start"))


def parse_model(path) -> Model:
    p = resolve_model_path(path)
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return model_from_dict(doc, p.stem)
    except ReebStabError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{p}: {exc}") from None


# ---------------------------------------------------------------------------
# reports


def encode(value):
    """JSON-ready form: rationals become ``"p/q"`` strings, floats stay floats."""
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, ReebVector):
        return [encode(c) for c in value]
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return float(f"{value:.17g}")
    if hasattr(value, "value") and hasattr(value, "name"):  # enums
        return value.value
    try:
        return float(value)
    except (TypeError, ValueError):
        return str(value)


def decode(value):
    """Inverse of :func:`encode` for numeric content."""
    if isinstance(value, dict):
        return {k: decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [decode(v) for v in value]
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            return value
    return value


def mode_of(vec: ReebVector) -> str:
    return "exact" if vec.mode is Mode.EXACT else "float"
