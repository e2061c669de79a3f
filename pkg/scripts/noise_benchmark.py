#!/usr/bin/env python3
"""Compare the three noise estimators on the benchmark points.

Prints D from the bordered solve, from time-domain quadrature and from
Gillespie sampling, with the sampler's deviation in standard errors.
"""
import argparse
import time

from photodevice.validate import BENCHMARK_POINTS, GILLESPIE_BATCHES, noise_checks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jumps", type=float, default=2e7)
    args = ap.parse_args()
    print(f"{'z':>4} {'U':>4} {'nu':>5} {'V':>4} {'D drazin':>14} {'D quad':>14} {'D gillespie':>14} "
          f"{'sd':>5} {'SNR':>11} {'t[s]':>6}")
    for idx, point in enumerate(BENCHMARK_POINTS):
        t0 = time.perf_counter()
        dr, qu, gi = noise_checks(point, args.seed + idx, n_jumps=args.jumps, n_batches=GILLESPIE_BATCHES)
        z = abs(gi.variance_rate - dr.D) / gi.variance_stderr
        print(f"{point[0]:4.1f} {point[1]:4.1f} {point[2]:5.0f} {point[3]:4.1f} {dr.D:14.8e} {qu.D:14.8e} "
              f"{gi.variance_rate:14.8e} {z:5.2f} {dr.snr:11.4e} {time.perf_counter() - t0:6.2f}")


if __name__ == "__main__":
    main()
