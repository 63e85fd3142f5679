"""Capacity solvers: plain Arimoto-Blahut and its squeezed accelerations.

All four methods share one loop shape.  At iterate p on the floored
simplex Omega(r), let q = (p - r)/(1 - r_+) and

    z_i = D(W_i || qW),

the per-input divergence to the current output mixture.  Then
sum_i q_i z_i is the mutual information at q (a capacity lower bound),
max_i z_i is a capacity upper bound, and the stopping rule is

    max_i z_i - sum_i q_i z_i <= epsilon.

Updates:

    aba    p'_i proportional to p_i exp(z_i)                  (r = 0)
    alg1   p'_i proportional to p_i exp(lambda z_i)           (r = 0)
    alg2   p'_i = max(r_i, delta p_i exp(lambda z_i)),  delta by waterfilling
    alg3   p'_i = max(r_i, alpha exp(c_i + sum_j W~_ij ln Phi_ji)),
           Phi_ji = p_i W~_ij / (f_j + (p W~)_j)

alg2 and alg3 are the same map expressed in different coordinates when
lambda = (1 + f_+)/(1 - r_+); alg1 is alg2 with r = 0; aba is alg1 with
lambda = 1.  Under the feasibility constraints the objective ascends
monotonically; the solver verifies this per step and treats a violation
as numerical breakdown (a warning instead under ``force=True``).

The final output is mapped back to the plain simplex:
p_hat = (p - r)/(1 - r_+).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelMatrix, Distribution, make_distribution, uniform
from .errors import (
    DimensionMismatchError,
    LambdaRangeError,
    NonInteriorStartError,
    NumericalBreakdownError,
    ValidationError,
)
from .squeeze import SqueezeParams, build_squeeze_params, lambda_bounds, params_from_r_lambda
from .waterfill import waterfill

#: per-step slack on the monotone-ascent check
MONOTONE_TOL = 1e-12

METHODS = ("aba", "alg1", "alg2", "alg3")


@dataclass(frozen=True)
class SolverConfig:
    """Stopping threshold (nats), iteration cap, optional start, tracing.

    ``initial`` always lives on the plain simplex; floored methods start
    from (1 - r_+) * initial + r.
    """

    epsilon: float = 1e-8
    max_iters: int = 1_000_000
    initial: Distribution | None = None
    record_trace: bool = True

    def __post_init__(self):
        if not (self.epsilon > 0):
            raise ValidationError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise ValidationError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True)
class IterationRecord:
    iter: int
    p: np.ndarray
    objective: float
    gap: float
    z: np.ndarray


@dataclass(frozen=True)
class SolveResult:
    """Converged input distribution and capacity bracket.

    ``capacity`` equals ``capacity_lower``, the mutual information actually
    achieved by ``p_hat``; ``capacity_upper - capacity_lower <= epsilon``
    when converged.
    """

    p_hat: Distribution
    capacity: float
    capacity_lower: float
    capacity_upper: float
    iterations: int
    converged: bool
    method: str
    params: SqueezeParams
    trace: tuple[IterationRecord, ...] = field(default=(), repr=False)


# -- shared kernels -------------------------------------------------------------


def _row_loglikes(w: np.ndarray) -> np.ndarray:
    """sum_j W_ij ln W_ij per row (negative row entropies)."""
    masked = np.where(w > 0, w, 1.0)
    return np.sum(w * np.log(masked), axis=1)


def _divergences(w: np.ndarray, row_loglikes: np.ndarray, q: np.ndarray) -> np.ndarray:
    """z_i = D(W_i || qW); raises on zero output mass under any column."""
    s = q @ w
    if np.any(s <= 0.0):
        j = int(np.argmin(s))
        raise NumericalBreakdownError(
            f"output letter {j} has zero probability under the current iterate; "
            "the divergence update is undefined there"
        )
    return row_loglikes - w @ np.log(s)


def _exp_weights(logits: np.ndarray) -> np.ndarray:
    """exp(logits) shifted by the max for overflow safety."""
    return np.exp(logits - logits.max())


def _alg3_logits(params: SqueezeParams, p: np.ndarray) -> np.ndarray:
    """c_i + sum_j W~_ij ln Phi_ji, with zero-weight terms contributing 0."""
    wt = params.w_tilde
    if np.any(p <= 0.0):
        raise NumericalBreakdownError("iterate has a zero component; ln Phi is undefined")
    denom = params.f + p @ wt
    pos = wt > 0
    log_wt = np.log(np.where(pos, wt, 1.0))
    log_denom = np.log(np.where(denom > 0, denom, 1.0))
    contrib = wt * (np.log(p)[:, None] + log_wt - log_denom[None, :])
    return params.c + np.where(pos, contrib, 0.0).sum(axis=1)


def _check_start(p: np.ndarray, r: np.ndarray | None, m: int) -> np.ndarray:
    p = np.asarray(getattr(p, "probs", p), dtype=float)
    if p.shape != (m,):
        raise DimensionMismatchError(f"start must have length {m}, got shape {p.shape}")
    if np.any(p <= 0.0):
        raise NonInteriorStartError("start must have all components strictly positive")
    if r is not None and np.any(p < r - 1e-12):
        raise NonInteriorStartError("start must dominate the floor vector elementwise")
    return p


# -- single steps (public, validated) --------------------------------------------


def aba_step(channel: ChannelMatrix, p) -> Distribution:
    """One plain Arimoto-Blahut update from an interior point of the simplex."""
    return alg1_step(channel, 1.0, p)


def alg1_step(channel: ChannelMatrix, lam: float, p, *, force: bool = False) -> Distribution:
    """One exponent-gain update p'_i proportional to p_i exp(lambda z_i).

    ``lam`` must lie in the feasible interval for the channel unless
    ``force`` is set (convergence is then no longer guaranteed).
    """
    p = _check_start(p, None, channel.m)
    lo, hi = lambda_bounds(channel, np.zeros(channel.m))
    if not force and not (1.0 - 1e-12 <= lam <= hi + 1e-12):
        raise LambdaRangeError(f"lambda = {lam:.15g} outside [1, {hi:.15g}]; pass force=True to override")
    z = _divergences(channel.w, _row_loglikes(channel.w), p)
    x = _exp_weights(np.log(p) + lam * z)
    return make_distribution(x / x.sum())


def alg2_step(channel: ChannelMatrix, params: SqueezeParams, p) -> Distribution:
    """One floored update on Omega(r) with waterfilling normalization."""
    r = params.r
    p = _check_start(p, r, channel.m)
    q = (p - r) / (1.0 - params.r_plus)
    z = _divergences(channel.w, _row_loglikes(channel.w), np.maximum(q, 0.0))
    x = _exp_weights(np.log(p) + params.lam * z)
    return make_distribution(waterfill(r, x).p, floor=r)


def alg3_step(params: SqueezeParams, p) -> Distribution:
    """One update in squeezed coordinates (same map as alg2 when
    lambda = (1 + f_+)/(1 - r_+))."""
    r = params.r
    p = _check_start(p, r, params.m)
    x = _exp_weights(_alg3_logits(params, p))
    return make_distribution(waterfill(r, x).p, floor=r)


# -- parameter resolution ---------------------------------------------------------


def _resolve_params(channel: ChannelMatrix, method: str, lam, r, f,
                    params: SqueezeParams | None, force: bool) -> SqueezeParams:
    m = channel.m
    if params is not None:
        if method not in ("alg2", "alg3"):
            raise ValidationError(f"method {method!r} does not accept prebuilt params")
        return params
    if method == "aba":
        if lam is not None or r is not None or f is not None:
            raise ValidationError("method 'aba' takes no squeeze parameters")
        return build_squeeze_params(channel, np.zeros(m), np.zeros(channel.n))
    if method == "alg1":
        if r is not None or f is not None:
            raise ValidationError("method 'alg1' takes only lambda")
        if lam is None:
            lam = lambda_bounds(channel, np.zeros(m))[1]
        return params_from_r_lambda(channel, np.zeros(m), lam, force=force)
    if method == "alg2":
        if r is None:
            raise ValidationError("method 'alg2' requires the floor vector r")
        if f is not None:
            raise ValidationError("method 'alg2' takes (r, lambda); use 'alg3' for (r, f)")
        if lam is None:
            lam = lambda_bounds(channel, r)[1]
        return params_from_r_lambda(channel, r, lam, force=force)
    if method == "alg3":
        if r is None:
            raise ValidationError("method 'alg3' requires the floor vector r")
        if f is None and lam is not None:
            return params_from_r_lambda(channel, r, lam, force=force)
        if f is None:
            raise ValidationError("method 'alg3' requires the offset vector f (or lambda)")
        return build_squeeze_params(channel, r, f, force=force)
    raise ValidationError(f"unknown method {method!r}; expected one of {METHODS}")


def _degenerate_result(channel: ChannelMatrix, method: str, params: SqueezeParams) -> SolveResult:
    # all rows equal: capacity is 0 and any input achieves it; report uniform
    m = channel.m
    p_hat = uniform(m)
    z = np.zeros(m)
    rec = (IterationRecord(0, p_hat.probs.copy(), 0.0, 0.0, z),)
    return SolveResult(p_hat, 0.0, 0.0, 0.0, 0, True, method, params, rec)


# -- the solver -------------------------------------------------------------------


def solve(channel: ChannelMatrix, method: str = "aba", *, lam=None, r=None, f=None,
          params: SqueezeParams | None = None, config: SolverConfig | None = None,
          force: bool = False) -> SolveResult:
    """Iterate the chosen method until the capacity gap drops below epsilon.

    method: "aba" | "alg1" (needs lambda, defaults to its upper bound) |
    "alg2" (needs r; lambda defaults to its upper bound) | "alg3" (needs
    r and f, or r and lambda, or prebuilt ``params``).

    Returns a SolveResult whose ``converged`` flag is False if the
    iteration cap was reached first (not an exception).
    """
    method = str(method).lower()
    config = config or SolverConfig()
    sp = _resolve_params(channel, method, lam, r, f, params, force)
    if channel.all_rows_equal:
        return _degenerate_result(channel, method, sp)
    forced = force or not sp.feasible

    m = channel.m
    rvec = sp.r if method in ("alg2", "alg3") else None
    start = config.initial if config.initial is not None else uniform(m)
    q0 = _check_start(start, None, m)
    if rvec is not None:
        p = (1.0 - sp.r_plus) * q0 + rvec
    else:
        p = q0.copy()

    w = channel.w
    row_ll = _row_loglikes(w)
    scale = 1.0 - sp.r_plus if rvec is not None else 1.0

    trace: list[IterationRecord] = []
    prev_objective = -np.inf
    converged = False
    iterations = config.max_iters
    z = np.zeros(m)
    objective = 0.0
    gap = 0.0

    for t in range(config.max_iters + 1):
        q = (p - rvec) / scale if rvec is not None else p
        q = np.maximum(q, 0.0)
        z = _divergences(w, row_ll, q)
        objective = float(q @ z)
        gap = float(z.max() - objective)

        if objective < prev_objective - MONOTONE_TOL:
            msg = (f"objective decreased from {prev_objective:.17g} to {objective:.17g} "
                   f"at iteration {t}")
            if forced:
                warnings.warn(msg, RuntimeWarning, stacklevel=2)
            else:
                raise NumericalBreakdownError(msg + "; monotone ascent lost")
        prev_objective = max(prev_objective, objective)

        if config.record_trace:
            trace.append(IterationRecord(t, p.copy(), objective, gap, z.copy()))

        if gap <= config.epsilon:
            converged = True
            iterations = t
            break
        if t == config.max_iters:
            break

        if method == "alg3":
            x = _exp_weights(_alg3_logits(sp, p))
        else:
            x = _exp_weights(np.log(p) + sp.lam * z)
        if rvec is None:
            p = x / x.sum()
        else:
            p = waterfill(rvec, x).p

    q_final = np.maximum((p - rvec) / scale, 0.0) if rvec is not None else p
    p_hat = make_distribution(q_final / q_final.sum())
    lower = objective
    upper = float(z.max())
    return SolveResult(p_hat, lower, lower, upper, iterations, converged,
                       method, sp, tuple(trace))


def trace_csv_rows(result: SolveResult):
    """Yield CSV lines for a solve trace: iter, objective, gap, bounds, p."""
    m = result.p_hat.m
    header = "iter,objective_nats,gap_nats,lower_nats,upper_nats," + \
        ",".join(f"p_{i + 1}" for i in range(m))
    yield header
    for rec in result.trace:
        cells = [str(rec.iter), f"{rec.objective:.17g}", f"{rec.gap:.17g}",
                 f"{rec.objective:.17g}", f"{rec.objective + rec.gap:.17g}"]
        cells.extend(f"{v:.17g}" for v in rec.p)
        yield ",".join(cells)


def write_trace_csv(result: SolveResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in trace_csv_rows(result):
            fh.write(line + "\n")
