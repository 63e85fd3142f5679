"""Automatic selection of squeeze parameters.

The combined squeeze vector g ties the floor and the offset together:

    g = (1 + f_+)/(1 - r_+) * rW + f,        f = g - (1 + g_+) rW,

and 1 + g_+ equals the exponent gain lambda.  The best g never depends on
the floor: take g_j = min_i W_ij / (1 - sum_k min_i W_ik), which drives
lambda to its upper bound.  The floor r is then chosen by strategy:

    none         r = 0, f = 0, lambda = 1 (plain iteration)
    lambda-only  r = 0, f = g (exponent gain only)
    optimal-m2   binary-input channels: the unique r making both floor
                 feasibility inequalities tight
    heuristic    r = delta * q with delta at its feasibility cap, for a
                 chosen reference distribution q (default uniform)

Larger g_+ and larger r/(1 - r_+) both provably speed convergence, so
each strategy pushes its free quantities to their feasible extremes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix, uniform
from .errors import (
    DegenerateChannelError,
    DimensionMismatchError,
    NoStrictColumnError,
    NotTwoByNError,
    SqueezeConstraintError,
    ValidationError,
)
from .squeeze import CONSTRAINT_TOL, SqueezeParams, build_squeeze_params

STRATEGIES = ("none", "lambda-only", "optimal-m2", "heuristic")


@dataclass(frozen=True)
class SqueezePlan:
    """A chosen (r, g, f, lambda) bundle plus the strategy that produced it."""

    r: np.ndarray
    g: np.ndarray
    f: np.ndarray
    lam: float
    strategy: str

    def build(self, channel: ChannelMatrix) -> SqueezeParams:
        """Materialize and validate the plan against its channel."""
        return build_squeeze_params(channel, self.r, self.f)

    def to_dict(self) -> dict:
        return {
            "r": self.r.tolist(),
            "g": self.g.tolist(),
            "f": self.f.tolist(),
            "lambda": self.lam,
            "strategy": self.strategy,
        }


def lambda_upper_bound(channel: ChannelMatrix) -> float:
    """1 / (1 - sum_j min_i W_ij), the largest provably safe exponent gain."""
    if channel.all_rows_equal:
        raise DegenerateChannelError("all rows equal: the exponent-gain bound is infinite")
    overlap = float(channel.column_minima().sum())
    return 1.0 / (1.0 - overlap)


def optimal_g(channel: ChannelMatrix) -> np.ndarray:
    """Rate-optimal combined squeeze g_j = min_i W_ij / (1 - sum_k min_i W_ik)."""
    if channel.all_rows_equal:
        raise DegenerateChannelError("all rows equal: no finite optimal squeeze")
    col_min = channel.column_minima()
    return col_min / (1.0 - col_min.sum())


def optimal_r_m2(channel: ChannelMatrix) -> np.ndarray:
    """Exact rate-optimal floor for a binary-input channel.

    With a = min over columns where row 1 exceeds row 2 of
    W_2j / (W_1j - W_2j), and b symmetrically, the floor
    r = (a, b) / (1 + a + b) makes both feasibility inequalities tight.
    """
    if channel.m != 2:
        raise NotTwoByNError(f"optimal floor formula needs 2 rows, channel has {channel.m}")
    if channel.all_rows_equal:
        raise DegenerateChannelError("rows are equal: floor is unconstrained and useless")
    w1, w2 = channel.w[0], channel.w[1]
    up = w1 > w2
    dn = w2 > w1
    # For distinct stochastic rows both sets are nonempty (the rows must
    # cross); an empty set can only come from inconsistent rounding.
    if not up.any() or not dn.any():
        raise NoStrictColumnError("one row dominates the other elementwise; "
                                  "rows cannot both sum to 1")
    a = float(np.min(w2[up] / (w1 - w2)[up]))
    b = float(np.min(w1[dn] / (w2 - w1)[dn]))
    return np.array([a, b]) / (1.0 + a + b)


def heuristic_r(channel: ChannelMatrix, q) -> np.ndarray:
    """Floor along a reference distribution: r = delta q with the largest
    feasible delta = min_{i,j} W_ij / (qW)_j.

    Any zero channel entry forces delta = 0 (and r = 0).
    """
    qv = np.asarray(getattr(q, "probs", q), dtype=float)
    if qv.shape != (channel.m,):
        raise DimensionMismatchError(f"q must have length {channel.m}, got shape {qv.shape}")
    s = qv @ channel.w
    if np.any(s <= 0):
        raise ValidationError("reference distribution gives zero output mass")
    delta = float((channel.w / s[None, :]).min())
    return delta * qv


def plan(channel: ChannelMatrix, strategy: str = "heuristic", *, q=None) -> SqueezePlan:
    """Assemble (r, g, f, lambda) for the requested strategy.

    The returned plan always passes ``build_squeeze_params`` validation.
    Components of f that come out negative by rounding (tiny, from the
    tight optimal choices) are clamped to zero; material negativity
    raises.
    """
    strategy = str(strategy).lower()
    if strategy not in STRATEGIES:
        raise ValidationError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    m, n = channel.m, channel.n

    if strategy == "none":
        return SqueezePlan(np.zeros(m), np.zeros(n), np.zeros(n), 1.0, strategy)

    g = optimal_g(channel)
    lam = 1.0 + float(g.sum())
    if lam <= 1.0 + CONSTRAINT_TOL:
        warnings.warn("channel not squeezable: rows have no overlap, so the "
                      "plan reduces to the plain iteration", RuntimeWarning, stacklevel=2)

    if strategy == "lambda-only":
        r = np.zeros(m)
    elif strategy == "optimal-m2":
        r = optimal_r_m2(channel)
    else:
        r = heuristic_r(channel, uniform(m) if q is None else q)

    f = g - lam * (r @ channel.w)
    if f.min() < -CONSTRAINT_TOL:
        raise SqueezeConstraintError(
            f"strategy {strategy!r} produced a materially negative offset "
            f"(min {f.min():.3e}); the floor is infeasible for this squeeze"
        )
    f = np.maximum(f, 0.0)
    return SqueezePlan(r, g, f, lam, strategy)
