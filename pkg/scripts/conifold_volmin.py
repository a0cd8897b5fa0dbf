"""Volume minimization on the conifold slice from random feasible starts."""

import argparse
import random
import time
from fractions import Fraction

from reeb_stab.core import build_reeb_cone, format_scalar
from reeb_stab.model import parse_model
from reeb_stab.volmin import minimize_volume, volume_ratio


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--model", default="conifold")
    parser.add_argument("--starts", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, default=1e-10)
    args = parser.parse_args()

    model = parse_model(args.model)
    H = model.spec.hilbert_series()
    G = model.gorenstein
    cone = build_reeb_cone(model.spec.weights)
    rng = random.Random(args.seed)
    for i in range(args.starts):
        xi = cone.sample(rng)
        xi0 = xi.scaled(Fraction(G.level) / G.value(xi))
        begin = time.perf_counter()
        res = minimize_volume(H, G, xi0, tol=args.tol)
        elapsed = time.perf_counter() - begin
        charges = ", ".join(f"{float(c):.10f}" for c in res.charges)
        print(f"start {i}: {[format_scalar(c) for c in xi0]}")
        print(f"  iterations {res.iterations}, {elapsed * 1000:.1f} ms, charges ({charges})")
        print(f"  volume {res.volume:.15f}, exact point {list(map(format_scalar, res.exact_point))}, "
              f"exact volume {format_scalar(res.exact_volume)}, ratio {format_scalar(volume_ratio(H, res.exact_point))}")
        print(f"  descent {[f'{v:.6f}' for v in map(float, res.history)]}")


if __name__ == "__main__":
    main()
