"""Check e^C(W1+W2) = e^C(W1) + e^C(W2) and C(W1 x W2) = C(W1) + C(W2) on random pairs."""
import argparse
import math

import numpy as np

from blackwell_kit import capacity, channel_product, channel_sum, random_channel


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=50)
    ap.add_argument("--max-in", type=int, default=4)
    ap.add_argument("--max-out", type=int, default=5)
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    size = lambda: (int(rng.integers(1, args.max_in + 1)), int(rng.integers(1, args.max_out + 1)))
    worst_sum = worst_prod = 0.0
    print("pair\tshape1\tshape2\tC1\tC2\tsum_gap\tprod_gap")
    for k in range(args.pairs):
        W1, W2 = random_channel(*size(), rng), random_channel(*size(), rng)
        c1, c2 = capacity(W1, tol=args.tol).value, capacity(W2, tol=args.tol).value
        s = abs(math.exp(capacity(channel_sum(W1, W2), tol=args.tol).value) - math.exp(c1) - math.exp(c2))
        p = abs(capacity(channel_product(W1, W2), tol=args.tol).value - c1 - c2)
        worst_sum, worst_prod = max(worst_sum, s), max(worst_prod, p)
        print(f"{k}\t{W1.input_size}x{W1.output_size}\t{W2.input_size}x{W2.output_size}\t"
              f"{c1:.12g}\t{c2:.12g}\t{s:.3g}\t{p:.3g}")
    print(f"worst sum gap {worst_sum:.3g}, worst product gap {worst_prod:.3g}")


if __name__ == "__main__":
    main()
