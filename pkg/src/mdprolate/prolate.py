"""One-dimensional concentration kernels and their eigendecompositions.

The covariance of a unit-power multiband process sampled at n points is a
dense Hermitian matrix whose (m, n) entry is a sum of modulated sinc terms,
one per band.  Its eigenvectors for a single baseband interval are the
discrete prolate spheroidal sequences (DPSS); eigenvalues cluster sharply
near 1 and 0 with about ``2 n W`` values near 1 per band of half-width W.

Everything here is desk-scale (n up to a few thousand): kernels are built
densely and decomposed by a dense Hermitian eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bands import CubicBandUnion

__all__ = [
    "sinc_kernel",
    "multiband_kernel",
    "dpss",
    "decompose",
    "modulation_phases",
    "modulate",
    "cluster_counts",
    "ClusterCounts",
    "Spectrum1D",
    "EigensolverError",
]

# Below this |x| the ratio sin(x)/x is replaced by its limit 1; kills the
# removable singularity without a branch-visible jump.
_SINC_GUARD = 1e-8


class EigensolverError(RuntimeError):
    """Dense eigendecomposition failed; message carries the offending problem."""


def _sin_ratio(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with the limit value at the removable singularity."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SINC_GUARD
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0, np.sin(safe) / safe)


def _hermitize(a: np.ndarray) -> np.ndarray:
    # Removes last-bit roundoff asymmetry that destabilizes eigensolvers.
    return (a + a.conj().T) / 2.0


def _check_band(f_c: float, half_width: float) -> None:
    if not 0.0 < half_width <= 0.5:
        raise ValueError(f"half-width must be in (0, 1/2], got {half_width}")
    if abs(f_c) + half_width > 0.5 + 1e-12:
        raise ValueError(
            f"band [{f_c - half_width}, {f_c + half_width}] exceeds [-1/2, 1/2]")


def _raw_band_kernel(n: int, f_c: float, half_width: float) -> np.ndarray:
    idx = np.arange(n)
    diff = idx[:, None] - idx[None, :]
    base = 2.0 * half_width * _sin_ratio(2.0 * np.pi * half_width * diff)
    if f_c == 0.0:
        return base.astype(complex)
    return np.exp(2j * np.pi * f_c * diff) * base


def sinc_kernel(n: int, f_c: float, half_width: float) -> np.ndarray:
    """Covariance kernel of one band ``[f_c - W, f_c + W]``.

    Entry (m, k) is ``exp(2j pi f_c (m-k)) * sin(2 pi W (m-k)) / (pi (m-k))``
    with diagonal ``2 W``.  Returned matrix is exactly Hermitian and PSD up
    to roundoff.
    """
    if n < 1:
        raise ValueError("kernel size must be positive")
    _check_band(f_c, half_width)
    return _hermitize(_raw_band_kernel(n, f_c, half_width))


def multiband_kernel(n: int, union: CubicBandUnion) -> np.ndarray:
    """Covariance kernel of a 1-D multiband union: entrywise sum of
    modulated sinc kernels.  Trace equals ``n * union.measure()``."""
    if union.dim != 1:
        raise ValueError(f"expected a 1-D band union, got dim {union.dim}")
    acc = np.zeros((n, n), dtype=complex)
    for i in range(union.num_bands):
        acc += _raw_band_kernel(n, union.centers[i, 0], union.half_widths[i, 0])
    return _hermitize(acc)


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Deterministic sign/phase: largest-magnitude entry of each column made
    real positive."""
    lead = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[lead, np.arange(vecs.shape[1])]
    if np.iscomplexobj(vecs):
        mags = np.abs(pivots)
        safe = np.where(mags > 0, mags, 1.0)
        scale = np.where(mags > 0, np.conj(pivots) / safe, 1.0)
    else:
        scale = np.where(pivots < 0, -1.0, 1.0)
    return vecs * scale


def _descending(vals: np.ndarray, vecs: np.ndarray):
    # Stable sort preserves eigensolver order among machine-precision ties.
    order = np.argsort(-vals, kind="stable")
    return vals[order], vecs[:, order]


@dataclass(frozen=True)
class Spectrum1D:
    """Descending eigenvalues and phase-fixed eigenvectors of a kernel."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def count_above(self, threshold: float) -> int:
        return int(np.count_nonzero(self.eigenvalues > threshold))


def decompose(kernel: np.ndarray) -> Spectrum1D:
    """Full dense Hermitian eigendecomposition, descending order."""
    kernel = _hermitize(np.asarray(kernel))
    try:
        vals, vecs = np.linalg.eigh(kernel)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(
            f"eigendecomposition failed for {kernel.shape[0]}x{kernel.shape[0]} "
            f"kernel: {exc}") from exc
    vals, vecs = _descending(vals, vecs)
    return Spectrum1D(vals, _fix_phases(vecs))


def dpss(n: int, half_width: float) -> Spectrum1D:
    """Discrete prolate spheroidal sequences of length n for half-width W.

    Computed as the full eigendecomposition of the real symmetric baseband
    kernel ``sinc_kernel(n, 0, W)``; eigenvectors are real with the
    largest-magnitude entry positive.
    """
    if n < 1:
        raise ValueError("sequence length must be positive")
    _check_band(0.0, half_width)
    idx = np.arange(n)
    diff = idx[:, None] - idx[None, :]
    kernel = 2.0 * half_width * _sin_ratio(2.0 * np.pi * half_width * diff)
    kernel = (kernel + kernel.T) / 2.0
    try:
        vals, vecs = np.linalg.eigh(kernel)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"DPSS eigenproblem failed for (n={n}, W={half_width}):"
                               f" {exc}") from exc
    vals, vecs = _descending(vals, vecs)
    return Spectrum1D(vals, _fix_phases(vecs))


def modulation_phases(n: int, f_c: float) -> np.ndarray:
    """Unimodular diagonal ``exp(2j pi f_c m)``, m = 0..n-1."""
    return np.exp(2j * np.pi * f_c * np.arange(n))


def modulate(v: np.ndarray, f_c: float) -> np.ndarray:
    """Frequency-shift a vector (or the columns of a matrix) by f_c.

    Norm-preserving; maps eigenvectors of the baseband kernel to
    eigenvectors of the band-pass kernel at the same eigenvalues.
    """
    v = np.asarray(v)
    phases = modulation_phases(v.shape[0], f_c)
    if v.ndim == 1:
        return phases * v
    return phases[:, None] * v


class ClusterCounts(NamedTuple):
    near_one: int
    middle: int
    near_zero: int


def cluster_counts(eigs: np.ndarray, eps: float) -> ClusterCounts:
    """Counts of eigenvalues above ``1 - eps``, inside ``[eps, 1 - eps]``,
    and below ``eps``.

    ``eigs`` must be sorted descending; ``eps`` in (0, 1/2].  The three
    counts always sum to ``len(eigs)``.
    """
    eigs = np.asarray(eigs, dtype=float)
    if not 0.0 < eps <= 0.5:
        raise ValueError(f"eps must be in (0, 1/2], got {eps}")
    if eigs.size > 1 and np.any(np.diff(eigs) > 1e-12):
        raise ValueError("eigenvalues must be sorted descending")
    near_one = int(np.count_nonzero(eigs > 1.0 - eps))
    near_zero = int(np.count_nonzero(eigs < eps))
    return ClusterCounts(near_one, eigs.size - near_one - near_zero, near_zero)
