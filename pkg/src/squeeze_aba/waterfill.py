"""Floored-simplex normalization by waterfilling.

Given floors r >= 0 with total mass below 1 and positive weights x, find
the unique delta > 0 such that

    sum_i max(r_i, delta * x_i) = 1.

The resulting vector p_i = max(r_i, delta * x_i) is the renormalization of
x onto the floored simplex.  Procedure: sort indices by r_i / x_i
ascending; below the pivot the weights scale, above it the floors bind.
O(m log m) from the sort.

delta is scale-invariant in x up to the obvious factor: waterfill(r, c*x)
returns delta/c with the same p.  Callers that build x from exponentials
should shift exponents by their maximum first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import _readonly
from .errors import DimensionMismatchError, InfeasibleFloorError, NonpositiveWeightError


@dataclass(frozen=True)
class WaterfillResult:
    """delta, the floor-active mask, and the normalized vector p."""

    delta: float
    active_floor: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _readonly(self.p))
        a = np.ascontiguousarray(self.active_floor, dtype=bool)
        a.setflags(write=False)
        object.__setattr__(self, "active_floor", a)


def waterfill(r, x) -> WaterfillResult:
    """Solve sum_i max(r_i, delta x_i) = 1 for delta > 0.

    ``r`` must be nonnegative with sum < 1; ``x`` strictly positive.
    Ties in the sort key r_i / x_i are broken by original index, which
    does not change p but keeps the scan deterministic.
    """
    r = np.asarray(r, dtype=float)
    x = np.asarray(x, dtype=float)
    if r.shape != x.shape or r.ndim != 1 or r.size == 0:
        raise DimensionMismatchError(f"r and x must be equal-length vectors, got {r.shape} and {x.shape}")
    if np.any(r < 0):
        raise InfeasibleFloorError(f"floors must be nonnegative (min {r.min():.3e})")
    if r.sum() >= 1.0:
        raise InfeasibleFloorError(f"floor mass {r.sum():.15g} leaves no room to normalize")
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise NonpositiveWeightError("weights must be finite and strictly positive")

    m = r.shape[0]
    order = np.argsort(r / x, kind="stable")
    rs = r[order]
    xs = x[order]

    # prefix sums of x and suffix sums of r in sorted order; the pivot is
    # the largest k with (r_k / x_k) * sum_{j<=k} x_j + sum_{j>k} r_j <= 1
    x_prefix = np.cumsum(xs)
    r_suffix = np.concatenate([np.cumsum(rs[::-1])[::-1], [0.0]])
    feas = (rs / xs) * x_prefix + r_suffix[1:] <= 1.0
    k = int(np.nonzero(feas)[0][-1])  # feas[0] always holds: r_+ < 1

    # recompute the two sums at the pivot with fresh pairwise summation;
    # cumsum error at large m could otherwise leak into delta
    head = float(xs[: k + 1].sum())
    tail = float(rs[k + 1:].sum())
    delta = (1.0 - tail) / head

    p = np.maximum(r, delta * x)
    return WaterfillResult(float(delta), r >= delta * x, p)
