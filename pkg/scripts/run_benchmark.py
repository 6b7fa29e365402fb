"""Seven-class benchmark: every feature set, one table.

Equivalent to ``msrcgr repro`` but prints a comparison table and, with
``--lambdas``, sweeps the L2 strength.
"""
import argparse
import json
import logging

from msrcgr.pipeline import FEATURE_SETS, run_repro


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--per-class", type=int, default=1000)
    ap.add_argument("--sets", default=",".join(FEATURE_SETS))
    ap.add_argument("--lambdas", default="1.0")
    ap.add_argument("--max-iter", type=int, default=500)
    ap.add_argument("--fast", action="store_true", help="fixed-precision CGR features")
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    sets = [s for s in args.sets.split(",") if s]
    rows = []
    print(f"{'set':>10} {'lambda':>7} {'width':>6} {'acc':>7} {'prec':>7} {'rec':>7} {'f1':>7} {'iters':>6}")
    for lam in (float(v) for v in args.lambdas.split(",")):
        res = run_repro(args.seed, args.per_class, sets, lam, args.max_iter, exact=not args.fast)
        for r in res.results.values():
            m = r.metrics
            print(f"{r.feature_set:>10} {lam:7.3g} {r.width:6d} {m.accuracy:7.4f} {m.precision:7.4f} "
                  f"{m.recall:7.4f} {m.f1:7.4f} {r.iterations:6d}")
            rows.append({"lambda": lam, **r.to_dict()})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"seed": args.seed, "per_class": args.per_class, "results": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
