"""TV distance between Blackwell measures versus the noisiness distance.

For BSC(delta) against BSC(delta + eps) with shrinking eps, the TV distance
stays at 1 (the atoms never coincide) while the noisiness lower bound and
the channel distance go to zero with eps.
"""
import argparse

from blackwell_kit import NoisinessBudget, bsc, channel_distance, noisiness_lower_bound, tv_class_distance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    budget = NoisinessBudget(samples=args.samples, seed=args.seed)
    print("eps\ttv_class\tnoisiness_lb\tchannel_dist")
    for k in range(1, 9):
        eps = 10.0 ** -k
        W1, W2 = bsc(args.delta), bsc(args.delta + eps)
        est = noisiness_lower_bound(W1, W2, budget)
        print(f"{eps:.0e}\t{tv_class_distance(W1, W2):.12g}\t{est.lower_bound:.12g}\t"
              f"{channel_distance(W1, W2):.12g}")


if __name__ == "__main__":
    main()
