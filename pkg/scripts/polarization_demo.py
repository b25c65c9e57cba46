"""Recursive polarization carried out on Blackwell measures.

Starting from one channel, apply the (-,*) and (+,*) convolutions ``levels``
times and print the spread of symmetric mutual information across the
``2**levels`` synthetic channels. Working on measures keeps the state small:
equivalent synthetic channels collapse to the same atoms.
"""
import argparse
import math

import numpy as np

from blackwell_kit import blackwell_measure, io, minus_convolve, mutual_information_of, plus_convolve, xor_op
from blackwell_kit.channel_core import bec, bsc


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--channel", help="channel JSON file (default: BEC(0.5))")
    ap.add_argument("--bsc", type=float, help="use BSC(delta) instead")
    ap.add_argument("--op", help="operation JSON file (default: XOR)")
    ap.add_argument("--levels", type=int, default=6)
    ap.add_argument("--atom-tol", type=float, default=1e-9)
    args = ap.parse_args()

    if args.channel:
        W = io.load_channel(args.channel)
    elif args.bsc is not None:
        W = bsc(args.bsc)
    else:
        W = bec(0.5)
    op = io.load_op(args.op) if args.op else xor_op()
    n = W.input_size
    uniform = np.full(n, 1.0 / n)
    full = math.log(n)

    layer = [blackwell_measure(W, atom_tol=args.atom_tol)]
    print("level\tchannels\tmean_I/log|X|\tfrac<0.1\tfrac>0.9\tmax_rank")
    for level in range(args.levels + 1):
        frac = np.array([mutual_information_of(uniform, mp) for mp in layer]) / full
        print(f"{level}\t{len(layer)}\t{frac.mean():.12g}\t{np.mean(frac < 0.1):.4f}\t"
              f"{np.mean(frac > 0.9):.4f}\t{max(mp.rank for mp in layer)}")
        if level == args.levels:
            break
        layer = [f(mp, mp, op) for mp in layer for f in (minus_convolve, plus_convolve)]


if __name__ == "__main__":
    main()
