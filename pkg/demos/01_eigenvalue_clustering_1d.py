#!/usr/bin/env python3
"""Eigenvalue clustering for a 1-D two-band signal.

A process whose power spectrum is the indicator of
[-0.15, -0.05] u [0.15, 0.25] has total band measure 0.2.  Sampling 256
points gives a covariance whose eigenvalues split into roughly
256 * 0.2 = 51 values near 1, a handful in transition, and the rest near
zero.  This script builds that covariance, decomposes it, and prints the
transition region.
"""

import numpy as np

from mdprolate import CubicBandUnion, cluster_counts, decompose, multiband_kernel

N = 256

union = CubicBandUnion.from_intervals([(-0.15, -0.05), (0.15, 0.25)])
print(f"band union measure : {union.measure():.3f}")
print(f"nominal dimension  : N * measure = {N * union.measure():.1f}")

kernel = multiband_kernel(N, union)
print(f"kernel trace       : {np.trace(kernel).real:.6f}")

sp = decompose(kernel)
counts = cluster_counts(sp.eigenvalues, 0.05)
print(f"eigenvalues > 0.95 : {counts.near_one}")
print(f"in [0.05, 0.95]    : {counts.middle}")
print(f"below 0.05         : {counts.near_zero}")
print(f"eigenvalues > 0.5  : {sp.count_above(0.5)}")

print("\nindex   eigenvalue   (through the transition)")
lo = max(counts.near_one - 3, 0)
hi = min(counts.near_one + counts.middle + 3, N)
for k in range(lo, hi):
    bar = "#" * int(round(40 * sp.eigenvalues[k]))
    print(f"{k:5d}   {sp.eigenvalues[k]:10.6f}   {bar}")
