"""Diebold-Mariano comparison of two forecast error sequences."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..errors import ValidationError


@dataclass
class DmResult:
    statistic: float
    p_value: float
    n: int

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "p_value": self.p_value, "n": self.n}


def dm_test(errors_a, errors_b, min_n: int = 8) -> DmResult:
    """DM test on the squared-loss differential d_t = e_a^2 - e_b^2.

    One-step nowcasts mean a lag-0 long-run variance (plain variance of d).
    A negative statistic favours forecaster a.  Two-sided p-value from a
    Student-t with n-1 degrees of freedom.  When d is constant and nonzero
    the statistic degenerates to +-inf with p-value 0 (reported explicitly).
    """
    a = np.asarray(errors_a, dtype=float)
    b = np.asarray(errors_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError("error vectors must be 1-d and equal length")
    n = a.size
    if n < min_n:
        raise ValidationError(f"need at least {min_n} errors, got {n}")
    d = a**2 - b**2
    mean = float(d.mean())
    long_run_var = float(np.mean((d - mean) ** 2))  # Newey-West with lag 0
    if long_run_var == 0.0:
        if mean == 0.0:
            return DmResult(statistic=0.0, p_value=1.0, n=n)
        return DmResult(statistic=math.copysign(math.inf, mean), p_value=0.0, n=n)
    statistic = mean / math.sqrt(long_run_var / n)
    p_value = 2.0 * float(stats.t.sf(abs(statistic), df=n - 1))
    return DmResult(statistic=statistic, p_value=p_value, n=n)
