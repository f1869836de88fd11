#!/usr/bin/env python3
"""How close is the cheap dictionary to the exact one?

The exact dictionary (phi) takes the leading eigen-tensors of the full
multiband operator: one M N x M N eigendecomposition.  The cheap one (psi)
glues together modulated DPSS outer products per band: a few length-M and
length-N decompositions.  With (1 +/- eps) sizing their spans nearly
coincide; the subspace angle cosine says how nearly.
"""

import numpy as np

from mdprolate import (CubicBandUnion, OperatorSpec, SamplingGrid, build_phi,
                       build_psi, materialize_cubic, orthonormalize, project,
                       spectrum, subspace_cos_theta)

M = N = 32
eps = 0.2
bands = CubicBandUnion(centers=[[-0.15, -0.10], [0.20, 0.15]],
                       half_widths=[[0.10, 0.10], [0.10, 0.10]])
spec = OperatorSpec(grid=SamplingGrid((M, N)), bands=bands)

per_band = [bands.band(i).measure() for i in range(len(bands))]
p = sum(int(np.ceil(M * N * m * (1 + eps))) for m in per_band)
q = [int(np.floor(M * N * m * (1 - eps))) for m in per_band]
print(f"sizing: {p} exact atoms vs {q} per-band surrogate atoms")

sp = spectrum(materialize_cubic(spec))
phi = build_phi(spec, p, spec_spectrum=sp)
psi = build_psi(spec, q)

cos_theta = subspace_cos_theta(phi, psi)
print(f"subspace angle cosine        : {cos_theta:.12f}")

basis = orthonormalize(phi)
worst = max(np.linalg.norm(a.tensor - project(basis, a.tensor)) ** 2
            for a in psi.atoms)
print(f"worst surrogate residual ^2  : {worst:.3e}")

gram = np.abs(psi.gram())
np.fill_diagonal(gram, 0.0)
print(f"largest cross-atom coherence : {gram.max():.3e}")
print(f"surrogate cost: {len(q)} x 1-D eigenproblems instead of one "
      f"{M * N} x {M * N} dense solve")
