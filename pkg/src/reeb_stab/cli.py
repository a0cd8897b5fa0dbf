"""``reeb-stab`` command line interface."""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import mpmath

from .core import Mode, ReebVector, build_reeb_cone, format_scalar, is_reeb
from .errors import ReebStabError, ValidationError
from .laurent import a_coefficients, expand_index, extract_coefficients
from .model import Model, encode, parse_model, parse_vector
from .oracle import finite_diff_check, partial_sum_gap, random_direction, series_coefficients
from .stability import (
    ConfigKind,
    TestConfigSpec,
    Verdict,
    evaluate_test_config,
    futaki_product,
    gorenstein_check,
    lichnerowicz_scan,
    rees_check,
)
from .volmin import DEFAULT_MAX_ITER, DEFAULT_TOL, minimize_volume, volume_ratio

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DESTABILIZED = 2

SUBCOMMANDS = ("cone", "hilbert", "expand", "futaki", "rees", "lichnerowicz", "volmin", "verify")


def _csv_vector(text: str, field: str) -> ReebVector:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    values = []
    for p in parts:
        try:
            values.append(float(p) if any(ch in p for ch in ".eE") and "/" not in p else p)
        except ValueError:
            raise ValidationError(field, f"{p!r} is not a number") from None
    return parse_vector(values, field)


def _select_mode(vec: ReebVector, args) -> ReebVector:
    if getattr(args, "float", False):
        return vec if vec.mode is Mode.FLOAT else vec.to_float()
    if getattr(args, "exact", False) and vec.mode is not Mode.EXACT:
        raise ValidationError("xi", "--exact given but the Reeb vector has float components")
    return vec


def _xi(model: Model, args, fallback: str | None = None) -> ReebVector:
    text = args.xi
    if text is None:
        vec = model.reeb(fallback)
    elif text in model.reeb_vectors:
        vec = model.reeb_vectors[text]
    else:
        vec = _csv_vector(text, "xi")
    if len(vec) != model.spec.weights.s:
        raise ValidationError("xi", f"has {len(vec)} components, torus rank is {model.spec.weights.s}")
    return _select_mode(vec, args)


def _eta(args, xi: ReebVector) -> ReebVector | None:
    if args.eta is None:
        return None
    eta = _csv_vector(args.eta, "eta")
    if xi.mode is Mode.FLOAT and eta.mode is Mode.EXACT:
        eta = eta.to_float()
    return ReebVector.coerce(eta, xi.mode)


# ---------------------------------------------------------------------------
# subcommands; each returns (report, destabilizing_found)


def cmd_cone(model: Model, args):
    cone = build_reeb_cone(model.spec.weights)
    report = {
        "model": model.name,
        "inequalities": [
            {"coordinate": name, "functional": list(col)}
            for name, col in zip(model.coordinates, cone.functionals)
        ],
        "nonempty": not cone.empty,
        "witness": cone.witness,
    }
    if model.reeb_vectors:
        report["reeb_vectors"] = {k: is_reeb(model.spec.weights, v) for k, v in model.reeb_vectors.items()}
    return report, False


def cmd_hilbert(model: Model, args):
    H = model.spec.hilbert_series()
    return {
        "model": model.name,
        "numerator": [[list(e), c] for e, c in H.numerator.items()],
        "denominators": [list(d) for d in H.denominators],
        "torus_rank": H.torus_rank,
        "dimension": H.dimension,
        "series": str(H),
    }, False


def cmd_expand(model: Model, args):
    H = model.spec.hilbert_series()
    xi = _xi(model, args)
    eta = _eta(args, xi)
    depth = max(args.depth, 2)
    jet = expand_index(H, xi, depth)
    a = a_coefficients(jet, H.n)
    report = {"model": model.name, "xi": xi, "mode": xi.mode.value, "n": H.n,
              "leading_order": jet.leading_order}
    for i, v in enumerate(a):
        report[f"a{i}"] = v
    if eta is not None:
        cc = extract_coefficients(H, xi, eta, depth)
        report.update(eta=eta, b0=cc.b0, b1=cc.b1, c0=cc.c0)
    return report, False


def cmd_futaki(model: Model, args):
    H = model.spec.hilbert_series()
    xi = _xi(model, args)
    if args.central:
        central = parse_model(args.central)
        if args.eta is None:
            raise ValidationError("eta", "an explicit central fiber needs --eta in its torus")
        eta = _csv_vector(args.eta, "eta")
        config = TestConfigSpec.explicit(central.spec, tuple(eta))
        H_used = central.spec.hilbert_series()
    else:
        eta = _eta(args, xi)
        if eta is None:
            raise ValidationError("eta", "--eta is required for a product configuration")
        config = TestConfigSpec.product(tuple(eta))
        H_used = H
    rep = evaluate_test_config(H, xi, config)
    report = {
        "model": model.name, "config": config.kind.value, "xi": xi, "eta": eta,
        "futaki": rep.futaki, "norm_sq": rep.norm_sq, "verdict": rep.verdict.value,
        "near_zero": rep.near_zero,
        "a0": rep.coefficients.a0, "a1": rep.coefficients.a1,
        "b0": rep.coefficients.b0, "b1": rep.coefficients.b1, "c0": rep.coefficients.c0,
    }
    if config.kind is ConfigKind.PRODUCT and model.gorenstein is not None:
        try:
            report["futaki_product"] = futaki_product(H_used, model.gorenstein, xi, eta)
        except ReebStabError as exc:
            report["futaki_product"] = f"n/a: {exc}"
    return report, rep.verdict is Verdict.DESTABILIZING


def cmd_rees(model: Model, args):
    H = model.spec.hilbert_series()
    xi = _xi(model, args)
    if args.function:
        if args.function not in model.functions:
            raise ValidationError("function", f"unknown function {args.function!r}; have {sorted(model.functions)}")
        alpha = model.functions[args.function]
        label = args.function
    elif args.weight:
        alpha = tuple(int(x) for x in args.weight.split(","))
        label = args.weight
    else:
        raise ValidationError("function", "give --function NAME or --weight CSV")
    check = rees_check(H, xi, alpha)
    fut = check.closed_form
    report = {
        "model": model.name, "function": label, "weight": list(alpha), "xi": xi,
        "charge": check.charge, "futaki": fut, "futaki_central_fiber": check.generic,
        "futaki_normalized": -(1 / check.charge - 1) / 2,
        "verdict": (Verdict.DESTABILIZING if fut < 0 else Verdict.NONNEGATIVE).value,
    }
    return report, fut < 0


def cmd_lichnerowicz(model: Model, args):
    if model.gorenstein is None:
        raise ValidationError("theta_weight", "model has no Gorenstein data")
    xi = _xi(model, args)
    exclude = [model.coordinates.index(c) for c in (args.exclude or "").split(",") if c]
    entries = lichnerowicz_scan(model.spec, model.gorenstein, xi, model.coordinates, exclude)
    report = {
        "model": model.name, "xi": xi,
        "coordinates": [
            {"coordinate": e.coordinate, "charge": e.charge, "verdict": e.verdict.value,
             "futaki_normalized": e.futaki_normalized, "futaki": e.futaki}
            for e in entries
        ],
    }
    return report, any(e.verdict is Verdict.UNSTABLE for e in entries)


def cmd_volmin(model: Model, args):
    if model.gorenstein is None:
        raise ValidationError("theta_weight", "model has no Gorenstein data")
    H = model.spec.hilbert_series()
    xi0 = _xi(model, args, fallback=model.start)
    res = minimize_volume(H, model.gorenstein, xi0, tol=args.tol, max_iter=args.max_iter)
    ratio = volume_ratio(H, res.exact_point) if res.exact_point is not None else volume_ratio(H, res.minimizer)
    report = {
        "model": model.name, "start": xi0,
        "minimizer": res.minimizer,
        "charges": dict(zip(model.coordinates, res.charges)),
        "volume": res.volume,
        "ratio": ratio,
        "gradient_norm": res.gradient_norm,
        "iterations": res.iterations,
        "tangent_basis": [list(b) for b in res.tangent_basis],
        "certificates": list(res.certificates),
        "exact_point": res.exact_point,
        "exact_volume": res.exact_volume,
        "exact_certificates": list(res.exact_certificates),
    }
    return report, False


def verify_tasks(model: Model, rng: random.Random):
    H = model.spec.hilbert_series()
    xi = model.reeb()
    exact_xi = xi if xi.mode is Mode.EXACT else ReebVector.exact(Fraction(c).limit_denominator(10**6) for c in xi)
    tasks = {}

    def series():
        coeffs = series_coefficients(H, exact_xi, 50)
        return {"ok": min(coeffs) >= 0, "first": coeffs[:8]}

    tasks["series_nonnegative"] = series

    def partial_sums():
        out = {}
        for t in (Fraction(1, 4), Fraction(1, 2), Fraction(1)):
            gap, bound = partial_sum_gap(H, exact_xi, t, 80)
            out[str(t)] = {"gap": float(gap), "tail_bound": float(bound), "ok": bool(gap <= bound)}
        out["ok"] = all(v["ok"] for v in out.values())
        return out

    tasks["partial_sums"] = partial_sums

    for i in range(3):
        eta = random_direction(exact_xi, rng)

        def fd(eta=eta):
            rec = finite_diff_check(H, exact_xi, eta, Fraction(1, 10**4))
            ratios = [r for r in (rec.ratio_b0, rec.ratio_b1, rec.ratio_c0) if r is not None]
            ok = rec.max_residual < Fraction(1, 10**6) and all(3.5 <= r <= 4.5 for r in ratios)
            return {"eta": eta, "max_residual": float(rec.max_residual),
                    "ratios": [None if r is None else float(r) for r in (rec.ratio_b0, rec.ratio_b1, rec.ratio_c0)],
                    "ok": ok}

        tasks[f"finite_differences_{i + 1}"] = fd

    if model.gorenstein is not None:
        G = model.gorenstein
        if G.value(exact_xi) > 0:
            normalized = exact_xi.scaled(Fraction(G.level) / G.value(exact_xi))

            def gore():
                defect = gorenstein_check(H, G, normalized)
                return {"xi": normalized, "defect": defect, "ok": defect == 0}

            tasks["gorenstein_relation"] = gore

            def rees():
                out = {}
                for name, alpha in model.functions.items():
                    chk = rees_check(H, normalized, alpha)
                    out[name] = {"closed_form": chk.closed_form, "central_fiber": chk.generic,
                                 "ok": chk.closed_form == chk.generic}
                out["ok"] = all(v["ok"] for v in out.values() if isinstance(v, dict))
                return out

            tasks["rees_consistency"] = rees
    return tasks


def cmd_verify(model: Model, args):
    tasks = verify_tasks(model, random.Random(args.seed))
    with ThreadPoolExecutor(max_workers=4) as pool:
        futures = {name: pool.submit(fn) for name, fn in tasks.items()}
        results = {}
        for name, fut in futures.items():
            try:
                results[name] = fut.result()
            except ReebStabError as exc:
                results[name] = {"ok": False, "error": f"{type(exc).__name__}: {exc}"}
    report = {"model": model.name, "checks": results, "ok": all(r.get("ok") for r in results.values())}
    if not report["ok"]:
        raise VerifyFailed(report)
    return report, False


class VerifyFailed(Exception):
    def __init__(self, report):
        super().__init__("verification failed")
        self.report = report


COMMANDS = {
    "cone": cmd_cone,
    "hilbert": cmd_hilbert,
    "expand": cmd_expand,
    "futaki": cmd_futaki,
    "rees": cmd_rees,
    "lichnerowicz": cmd_lichnerowicz,
    "volmin": cmd_volmin,
    "verify": cmd_verify,
}


def run_subcommand(name: str, model: Model, args) -> tuple[dict, bool]:
    if name not in COMMANDS:
        raise ValueError(f"unknown subcommand {name!r}")
    return COMMANDS[name](model, args)


# ---------------------------------------------------------------------------
# output


def _table_value(v) -> str:
    if isinstance(v, (list, tuple)) and all(not isinstance(x, (dict, list, tuple)) for x in v):
        return "(" + ", ".join(_table_value(x) for x in v) + ")"
    if isinstance(v, (Fraction, float, int, mpmath.mpf)) and not isinstance(v, bool):
        return format_scalar(v)
    if isinstance(v, ReebVector):
        return "(" + ", ".join(format_scalar(c) for c in v) + ")"
    return str(encode(v))


def format_table(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    width = max((len(str(k)) for k in report), default=0)
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(format_table(value, indent + 1))
        elif isinstance(value, list) and value and all(isinstance(x, dict) for x in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(pad + "  - " + ", ".join(f"{k}={_table_value(v)}" for k, v in item.items()))
        else:
            lines.append(f"{pad}{str(key).ljust(width)}  {_table_value(value)}")
    return "\n".join(lines)


def emit(report: dict, fmt: str, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        json.dump(encode(report), stream, indent=2)
        stream.write("\n")
    else:
        stream.write(format_table(report) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reeb-stab",
        description="K-stability obstructions for affine cones polarized by a Reeb vector field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("model", help="model JSON file or the name of a shipped model")
    common.add_argument("--xi", help="named Reeb vector from the model, or comma-separated components")
    common.add_argument("--eta", help="comma-separated direction")
    common.add_argument("--depth", type=int, default=2, help="number of Laurent coefficients (default 2)")
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--strict", action="store_true",
                        help="exit with status 2 when a destabilizing configuration is found")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--float", action="store_true", help="evaluate in floating point")
    mode.add_argument("--exact", action="store_true", help="require exact rational evaluation")
    helps = {
        "cone": "Reeb cone inequalities and feasibility",
        "hilbert": "multigraded Hilbert series",
        "expand": "Laurent coefficients of the index character",
        "futaki": "Futaki invariant of a product or explicit test configuration",
        "rees": "Futaki invariant of the Rees deformation of a principal ideal",
        "lichnerowicz": "charges of the coordinate functions",
        "volmin": "minimize the volume over the Gorenstein slice",
        "verify": "run the oracle suite against the model",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        if name == "futaki":
            p.add_argument("--central", help="model file describing an explicit central fiber")
        if name == "rees":
            p.add_argument("--function", help="named function weight from the model")
            p.add_argument("--weight", help="comma-separated weight of the function")
        if name == "lichnerowicz":
            p.add_argument("--exclude", help="comma-separated coordinates that vanish on the variety")
        if name == "verify":
            p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        model = parse_model(args.model)
        report, destabilized = run_subcommand(args.command, model, args)
    except VerifyFailed as exc:
        emit(exc.report, args.format)
        return EXIT_ERROR
    except (ReebStabError, ValueError, ZeroDivisionError) as exc:
        print(f"reeb-stab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    emit(report, args.format)
    if args.strict and destabilized and args.command in ("futaki", "rees", "lichnerowicz"):
        return EXIT_DESTABILIZED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
