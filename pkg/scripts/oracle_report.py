"""Run the oracle suite on every shipped model and tabulate the outcome."""

import argparse
import json
import random

from reeb_stab.cli import verify_tasks
from reeb_stab.model import encode, parse_model, shipped_models


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="dump full reports")
    args = parser.parse_args()

    failed = 0
    for name in shipped_models():
        model = parse_model(name)
        results = {k: fn() for k, fn in verify_tasks(model, random.Random(args.seed)).items()}
        ok = all(r["ok"] for r in results.values())
        failed += not ok
        status = " ".join(f"{k}={'ok' if r['ok'] else 'FAIL'}" for k, r in results.items())
        print(f"{name:<14} {'PASS' if ok else 'FAIL'}  {status}")
        if args.json:
            print(json.dumps(encode(results), indent=2))
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
