"""Encode-time scaling of the fast and exact CGR feature paths.

The fast path should grow linearly in sequence length. The exact path
grows faster because coordinate denominators double at every step.
"""
import argparse
import random
import time
import timeit

from msrcgr.features import cgr_feature_vector


def best_time(fn, repeat=5, number=1):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lengths", default="1000,2000,4000,10000,20000")
    ap.add_argument("--exact-max", type=int, default=4000, help="skip exact runs above this length")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    lengths = [int(v) for v in args.lengths.split(",")]
    seq = "".join(rng.choice("ACGT") for _ in range(max(lengths)))
    cgr_feature_vector(seq[:100], exact=False)

    print(f"{'n':>7} {'fast ms':>9} {'exact ms':>10}")
    base = None
    for n in lengths:
        s = seq[:n]
        fast = best_time(lambda: cgr_feature_vector(s, exact=False), number=3)
        base = base or (n, fast)
        exact = ""
        if n <= args.exact_max:
            t0 = time.perf_counter()
            cgr_feature_vector(s)
            exact = f"{(time.perf_counter() - t0) * 1e3:10.1f}"
        print(f"{n:7d} {fast * 1e3:9.2f} {exact:>10}")
    print(f"fast-path ratio t({lengths[-1]})/t({base[0]}) = "
          f"{best_time(lambda: cgr_feature_vector(seq, exact=False), number=3) / base[1]:.2f}")


if __name__ == "__main__":
    main()
