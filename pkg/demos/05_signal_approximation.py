#!/usr/bin/env python3
"""Approximating random multiband signals with few atoms.

Signals drawn from the operator's covariance concentrate on the leading
eigen-tensors, so truncating the basis at p atoms loses exactly the
eigenvalue tail sum_{k >= p} lambda_k on average.  The table compares that
analytic tail with a Monte-Carlo estimate as p sweeps through the nominal
dimension M N * measure.
"""

import numpy as np

from mdprolate import (CubicBandUnion, OperatorSpec, SamplingGrid, approx_mse,
                       build_phi, materialize_cubic, orthonormalize, spectrum)

M = N = 16
bands = CubicBandUnion(centers=[[-0.15, -0.10], [0.20, 0.15]],
                       half_widths=[[0.10, 0.10], [0.10, 0.10]])
spec = OperatorSpec(grid=SamplingGrid((M, N)), bands=bands)
sp = spectrum(materialize_cubic(spec))

nominal = M * N * bands.measure()
print(f"nominal dimension M N * measure = {nominal:.1f} of {M * N}")
print(f"{'p':>4} {'empirical MSE':>14} {'analytic tail':>14} {'rel err':>9}")
for p in (5, 10, 15, 20, 25, 31, 40):
    basis = orthonormalize(build_phi(spec, p, spec_spectrum=sp))
    rep = approx_mse(basis, spec, trials=400, seed=42, spec_spectrum=sp)
    rel = (abs(rep.empirical_mean - rep.analytic_tail) / rep.analytic_tail
           if rep.analytic_tail > 1e-12 else 0.0)
    print(f"{p:4d} {rep.empirical_mean:14.6f} {rep.analytic_tail:14.6f} "
          f"{rel:9.3f}")
print("\npast the nominal dimension the residual is already tiny: that is")
print("the clustering at work.")
