"""Knee-point detection on a sorted score curve.

The curve of ascending aggregate scores is convex-increasing in the
interesting case: a long flat stretch of low scores followed by a sharp
rise of near-duplicates. The knee sits where the rise begins; scores
above it are pruning candidates. Degenerate curves (flat, linear, too
short) report no knee and the caller fails open.
"""

from __future__ import annotations

import numpy as np

from .records import KneeResult

DEFAULT_SENSITIVITY = 1.0


def find_knee(scores, sensitivity: float = DEFAULT_SENSITIVITY) -> KneeResult:
    """Locate the knee of an ascending score curve.

    Normalizes the curve to the unit square, takes the difference
    between the diagonal and the normalized curve, and returns the local
    maximum of that difference that clears the sensitivity threshold
    before the difference next recovers.
    """
    y = np.sort(np.asarray(list(scores), dtype=float))
    n = y.size
    if n < 3:
        return KneeResult(cutoff=0.0, index=-1, found=False)
    span = y[-1] - y[0]
    if span <= 0.0:
        return KneeResult(cutoff=0.0, index=-1, found=False)

    x = np.linspace(0.0, 1.0, n)
    y_norm = (y - y[0]) / span
    diff = x - y_norm

    maxima = _local_maxima(diff)
    if maxima.size == 0:
        return KneeResult(cutoff=0.0, index=-1, found=False)

    step = sensitivity / (n - 1)
    next_maximum = {maxima[i]: (maxima[i + 1] if i + 1 < maxima.size else n)
                    for i in range(maxima.size)}
    for i in maxima:
        threshold = diff[i] - step
        stop = next_maximum[i]
        if np.any(diff[i + 1:stop] < threshold):
            return KneeResult(cutoff=float(y[i]), index=int(i), found=True)
    return KneeResult(cutoff=0.0, index=-1, found=False)


def _local_maxima(diff: np.ndarray) -> np.ndarray:
    """Interior indices where the difference curve peaks.

    Plateaus count once, at their left edge.
    """
    left = diff[1:-1] >= diff[:-2]
    right = diff[1:-1] > diff[2:]
    return np.flatnonzero(left & right) + 1
