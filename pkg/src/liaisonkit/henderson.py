"""Henderson moving-average trend filter.

The symmetric weights minimise the variance of third differences of the
weight sequence subject to reproducing cubic polynomials, which gives the
closed form below (filter length 2p+1, writing n = p+2):

    w_j = 315 [(n-1)^2 - j^2][n^2 - j^2][(n+1)^2 - j^2][3n^2 - 16 - 11 j^2]
          / ( 8 n (n^2-1)(4n^2-1)(4n^2-9)(4n^2-25) )

Endpoints use the truncated symmetric weights renormalised to sum to one,
which preserves constants but not cubics (interior points reproduce cubics
exactly).
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def henderson_weights(term: int = 13) -> np.ndarray:
    """Symmetric weights for an odd filter length; they sum to one."""
    if term < 5 or term % 2 == 0:
        raise ValidationError(f"Henderson term must be odd and >= 5, got {term}")
    p = (term - 1) // 2
    n = p + 2
    j = np.arange(-p, p + 1, dtype=float)
    num = (
        315.0
        * ((n - 1) ** 2 - j**2)
        * (n**2 - j**2)
        * ((n + 1) ** 2 - j**2)
        * (3 * n**2 - 16 - 11 * j**2)
    )
    den = 8.0 * n * (n**2 - 1) * (4 * n**2 - 1) * (4 * n**2 - 9) * (4 * n**2 - 25)
    return num / den


def henderson_trend(series: np.ndarray | list[float], term: int = 13) -> np.ndarray:
    """Smooth a series; asymmetric ends truncate and renormalise the weights."""
    values = np.asarray(series, dtype=float)
    if values.ndim != 1:
        raise ValidationError("henderson_trend expects a 1-d series")
    if values.size < term:
        raise ValidationError(f"series length {values.size} shorter than term {term}")
    p = (term - 1) // 2
    w = henderson_weights(term)
    n = values.size
    out = np.empty(n, dtype=float)
    for t in range(n):
        lo = max(0, t - p)
        hi = min(n, t + p + 1)
        piece = w[lo - (t - p) : hi - (t - p)]
        out[t] = float(values[lo:hi] @ piece / piece.sum())
    return out
