"""Asymptotic convergence-rate analysis at an interior fixed point.

Near a fixed point p* of the iteration map M, errors contract linearly:
p_next - p* is approximately (p - p*) R(p*), where R(p*) is the Jacobian

    R(p*) = I_m - W~ Psi,    Psi_ji = Phi_ji(p*) + p*_i Phi_j0(p*),

with Phi the posterior matrix of the update.  The global rate is the
spectral radius of R(p*) restricted to the zero-sum subspace
Gamma = {gamma : gamma 1 = 0}; iteration errors live in Gamma, and the
restriction drops only the trivial direction.  Smaller is faster.

Two independent routes compute the global rate:

  * spectral route: Psi = D_s^{-1} W*^T D_{p*} gives
    R = I - (1 + f_+) K + L with K = W* D_s^{-1} W*^T D_{p*} and L a
    rank-one term that vanishes on Gamma.  D^{1/2} K D^{-1/2} is symmetric
    positive semidefinite with eigenvalues in [0, 1], so a cyclic Jacobi
    sweep on it yields the whole spectrum; the rate is the largest
    1 - (1 + f_+) mu over the nontrivial eigenvalues mu.

  * power route: power iteration directly on R with a zero-sum start,
    using the D_{p*}^{-1}-weighted Rayleigh quotient (R restricted to
    Gamma is self-adjoint under that inner product).

The report carries both values; they agree to numerical accuracy.  Useful
facts that follow and are exposed as comparison records: the rate is
affine in the total offset mass (rate(r, f) = (1 + f_+) rate(r, 0) - f_+),
it never increases when the offset or the scaled floor grows, and the
plain iteration's rate is at least the row-overlap mass sum_j min_i W_ij.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix, Distribution, make_distribution
from .errors import (
    BoundaryFixedPointError,
    DimensionMismatchError,
    EigensolverConvergenceError,
    NotAFixedPointError,
    SqueezeConstraintError,
)
from .solvers import alg3_step
from .squeeze import CONSTRAINT_TOL, SqueezeParams, build_squeeze_params

#: default tolerance on one-step displacement when certifying a fixed point
FIXED_POINT_TOL = 1e-7

#: minimum clearance above the floor for the local rate formula to apply
INTERIOR_MARGIN = 1e-9


# -- symmetric eigensolver --------------------------------------------------------


def jacobi_eigh(a, *, off_tol: float = 1e-13, max_sweeps: int = 100):
    """Eigendecomposition of a small dense symmetric matrix by cyclic Jacobi.

    Sweeps Givens rotations over all (p, q) pairs until the off-diagonal
    Frobenius norm drops below ``off_tol``.  Returns (eigenvalues
    ascending, eigenvectors as columns), like ``numpy.linalg.eigh``.
    """
    A = np.array(a, dtype=float)
    n = A.shape[0]
    if A.ndim != 2 or A.shape != (n, n):
        raise DimensionMismatchError(f"expected a square matrix, got shape {A.shape}")
    if not np.allclose(A, A.T, atol=1e-10):
        raise DimensionMismatchError("matrix is not symmetric")
    A = (A + A.T) / 2.0
    V = np.eye(n)

    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.tril(A, -1) ** 2))
        if off < off_tol:
            order = np.argsort(np.diag(A))
            return np.diag(A)[order].copy(), V[:, order].copy()
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                sign = 1.0 if tau >= 0 else -1.0
                t = sign / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
                col_p = V[:, p].copy()
                col_q = V[:, q].copy()
                V[:, p] = c * col_p - s * col_q
                V[:, q] = s * col_p + c * col_q
    raise EigensolverConvergenceError(
        f"off-diagonal norm still {off:.3e} after {max_sweeps} sweeps"
    )


def power_rate(R: np.ndarray, p_star: np.ndarray, *, max_iters: int = 10_000,
               tol: float = 1e-10) -> float:
    """Spectral radius of R on the zero-sum subspace by left power iteration.

    Start vector is the first difference direction e_1 - e_2 (already
    zero-sum); each iterate is re-centered to stay in Gamma.  The estimate
    is the Rayleigh quotient weighted by 1/p*, under which the restricted
    map is self-adjoint.
    """
    m = R.shape[0]
    dinv = 1.0 / np.asarray(p_star, dtype=float)
    gamma = np.zeros(m)
    gamma[0], gamma[1] = 1.0, -1.0
    gamma /= np.linalg.norm(gamma)
    est = np.inf
    for _ in range(max_iters):
        y = gamma @ R
        y = y - y.mean()
        norm = np.linalg.norm(y)
        if norm < 1e-300:
            return 0.0
        y /= norm
        new = float((y @ R) @ (dinv * y) / (y @ (dinv * y)))
        if abs(new - est) <= tol:
            est = new
            break
        est = new
        gamma = y
    return max(float(est), 0.0)


# -- the rate report ----------------------------------------------------------------


@dataclass(frozen=True)
class RateReport:
    """Local rate data at a certified interior fixed point.

    ``gamma_spectrum`` is the spectrum of R restricted to the zero-sum
    subspace (the raw matrix R is also included); ``rate_r0`` is the
    global rate the same floor would give with a zero offset, and
    ``aba_lower_bound`` is the row-overlap mass that lower-bounds the
    plain iteration's rate.
    """

    p_star: Distribution
    R: np.ndarray
    global_rate: float
    global_rate_power: float
    Psi: np.ndarray
    s: np.ndarray
    rate_r0: float
    aba_lower_bound: float
    f_plus: float
    gamma_spectrum: np.ndarray

    def to_dict(self) -> dict:
        return {
            "p_star": self.p_star.probs.tolist(),
            "R": [float(v) for v in self.R.ravel()],
            "global_rate": self.global_rate,
            "global_rate_power": self.global_rate_power,
            "rate_r0": self.rate_r0,
            "aba_lower_bound": self.aba_lower_bound,
            "shift_identity_residual": self.shift_identity_residual(),
            "gamma_spectrum": self.gamma_spectrum.tolist(),
        }

    def shift_identity_residual(self) -> float:
        """|rate - [(1 + f_+) rate_r0 - f_+]|, the affine-identity check."""
        return abs(self.global_rate - ((1.0 + self.f_plus) * self.rate_r0 - self.f_plus))


def fixed_point_on_floor(params: SqueezeParams, p_hat) -> Distribution:
    """Map the plain-simplex optimizer p_hat to Omega(r): (1 - r_+) p_hat + r."""
    q = np.asarray(getattr(p_hat, "probs", p_hat), dtype=float)
    return make_distribution((1.0 - params.r_plus) * q + params.r, floor=params.r)


def iteration_jacobian(params: SqueezeParams, p) -> tuple[np.ndarray, np.ndarray]:
    """(R, Psi) at the point p: R(p) = I - W~ Psi(p).

    R is the exact error-contraction matrix at a fixed point and a
    first-order approximation of it nearby.
    """
    p = np.asarray(getattr(p, "probs", p), dtype=float)
    wt = params.w_tilde
    denom = params.f + p @ wt
    safe = np.where(denom > 0, denom, 1.0)
    phi = (wt * p[:, None]).T / safe[:, None]
    phi0 = np.where(denom > 0, params.f / safe, 0.0)
    psi = phi + np.outer(phi0, p)
    return np.eye(params.m) - wt @ psi, psi


def polish_fixed_point(params: SqueezeParams, p, *, tol: float = 1e-14,
                       max_rounds: int = 50) -> np.ndarray:
    """Newton-refine a near-fixed point of the iteration map to ~machine precision.

    Solves M(p) - p = 0 with the analytic Jacobian; one-step displacement
    ends below ``tol`` (or as small as the map's own roundoff allows).
    Needed because plain iteration stalls when the contraction factor is
    close to 1: the solver then cannot push the fixed-point error far
    below gap/(1 - rate) on its own.
    """
    p = np.asarray(getattr(p, "probs", p), dtype=float).copy()
    eye = np.eye(params.m)
    best, best_disp = p.copy(), np.inf
    for _ in range(max_rounds):
        g = alg3_step(params, p).probs - p
        disp = float(np.abs(g).max())
        if disp < best_disp:
            best, best_disp = p.copy(), disp
        if disp <= tol:
            return p
        R, _ = iteration_jacobian(params, p)
        try:
            delta = np.linalg.solve((eye - R).T, g)
        except np.linalg.LinAlgError:
            break
        delta = delta - delta.mean()
        step = 1.0
        while step > 1e-4:
            cand = p + step * delta
            if np.all(cand > params.r):
                p = cand / cand.sum()
                break
            step /= 2.0
        else:
            p = alg3_step(params, p).probs
    return best


def matrix_rate(params: SqueezeParams, p_star, *,
                fixed_point_tol: float = FIXED_POINT_TOL,
                interior_margin: float = INTERIOR_MARGIN) -> RateReport:
    """Build the full RateReport at a fixed point p* on Omega(r).

    Raises BoundaryFixedPointError when p* does not clear the floor by
    ``interior_margin`` (the formula only holds at interior fixed points)
    and NotAFixedPointError when one iteration step moves p* by more than
    ``fixed_point_tol``.
    """
    m, n = params.m, params.n
    p = np.asarray(getattr(p_star, "probs", p_star), dtype=float)
    if p.shape != (m,):
        raise DimensionMismatchError(f"p_star must have length {m}, got shape {p.shape}")
    if np.any(p <= params.r + interior_margin):
        i = int(np.argmin(p - params.r))
        raise BoundaryFixedPointError(
            f"component {i} of p* is within {interior_margin:g} of its floor; "
            "the local rate formula does not apply at boundary fixed points"
        )
    moved = alg3_step(params, p).probs
    disp = float(np.abs(moved - p).max())
    if disp > fixed_point_tol:
        raise NotAFixedPointError(
            f"one step moves p* by {disp:.3e} (> {fixed_point_tol:g}); "
            "run the solver to a tighter gap first"
        )

    R, psi = iteration_jacobian(params, p)

    s = p @ params.w_star
    half = np.sqrt(p)
    B = params.w_star * half[:, None]
    M = (B / s[None, :]) @ B.T
    M = (M + M.T) / 2.0
    mu, vecs = jacobi_eigh(M)

    u = half / np.linalg.norm(half)
    trivial = int(np.argmax(np.abs(vecs.T @ u)))
    keep = np.ones(m, dtype=bool)
    keep[trivial] = False
    d_gamma = 1.0 - (1.0 + params.f_plus) * mu[keep]
    d_gamma.sort()

    global_rate = max(float(d_gamma.max()), 0.0) if d_gamma.size else 0.0
    rate_r0 = max(float((1.0 - mu[keep]).max()), 0.0) if d_gamma.size else 0.0
    rate_power = power_rate(R, p)

    return RateReport(
        p_star=make_distribution(p, floor=params.r),
        R=R,
        global_rate=global_rate,
        global_rate_power=rate_power,
        Psi=psi,
        s=s,
        rate_r0=rate_r0,
        aba_lower_bound=float(params.channel.column_minima().sum()),
        f_plus=params.f_plus,
        gamma_spectrum=d_gamma,
    )


# -- comparison records --------------------------------------------------------------


def offset_from_g(channel: ChannelMatrix, g, r) -> np.ndarray:
    """Recover the output offset f = g - (1 + g_+) rW for a combined squeeze g."""
    g = np.asarray(g, dtype=float)
    r = np.asarray(r, dtype=float)
    f = g - (1.0 + g.sum()) * (r @ channel.w)
    if f.min() < -CONSTRAINT_TOL:
        raise SqueezeConstraintError(
            f"combined squeeze g is infeasible at this floor (min offset {f.min():.3e})"
        )
    return np.maximum(f, 0.0)


@dataclass(frozen=True)
class ShiftRateComparison:
    """Global rates for two offsets at the same floor, with the affine check."""

    rate: float
    rate_alt: float
    f_plus: float
    f_alt_plus: float
    affine_residual: float
    affine_residual_alt: float
    ordering_ok: bool


def compare_shift_rates(channel: ChannelMatrix, r, f, f_alt, p_hat) -> ShiftRateComparison:
    """Rates at (r, f) and (r, f_alt) sharing the optimizer p_hat.

    The rate is affine in the offset mass, so the larger of f_+ and
    f_alt_+ can never give the slower rate; ``ordering_ok`` records that.
    """
    pr = build_squeeze_params(channel, r, f)
    pa = build_squeeze_params(channel, r, f_alt)
    p_star = fixed_point_on_floor(pr, p_hat)
    rep = matrix_rate(pr, p_star)
    rep_alt = matrix_rate(pa, p_star)
    if pr.f_plus >= pa.f_plus:
        ordering = rep.global_rate <= rep_alt.global_rate + 1e-9
    else:
        ordering = rep_alt.global_rate <= rep.global_rate + 1e-9
    return ShiftRateComparison(
        rate=rep.global_rate,
        rate_alt=rep_alt.global_rate,
        f_plus=pr.f_plus,
        f_alt_plus=pa.f_plus,
        affine_residual=rep.shift_identity_residual(),
        affine_residual_alt=rep_alt.shift_identity_residual(),
        ordering_ok=bool(ordering),
    )


@dataclass(frozen=True)
class OverlapBoundRecord:
    """Plain-iteration rate against the row-overlap lower bound."""

    rate: float
    overlap: float
    margin: float
    ok: bool


def overlap_rate_bound(channel: ChannelMatrix, p_hat) -> OverlapBoundRecord:
    """Check rate(0, 0) >= sum_j min_i W_ij at the optimizer p_hat."""
    params = build_squeeze_params(channel, np.zeros(channel.m), np.zeros(channel.n))
    rep = matrix_rate(params, fixed_point_on_floor(params, p_hat))
    overlap = rep.aba_lower_bound
    margin = rep.global_rate - overlap
    return OverlapBoundRecord(rep.global_rate, overlap, margin, bool(margin >= -1e-9))


@dataclass(frozen=True)
class FloorRateComparison:
    """Global rates for two floors at the same combined squeeze g."""

    rate: float
    rate_alt: float
    ok: bool


def compare_floor_rates(channel: ChannelMatrix, g, r, r_alt, p_hat) -> FloorRateComparison:
    """Rates at floors r and r_alt under a fixed combined squeeze g.

    Requires r/(1 - r_+) >= r_alt/(1 - r_alt_+) elementwise; the larger
    scaled floor can never be slower, and ``ok`` records that.
    """
    r = np.asarray(r, dtype=float)
    r_alt = np.asarray(r_alt, dtype=float)
    scaled = r / (1.0 - r.sum())
    scaled_alt = r_alt / (1.0 - r_alt.sum())
    if np.any(scaled < scaled_alt - 1e-12):
        raise DimensionMismatchError(
            "floor comparison requires r/(1 - r_+) >= r_alt/(1 - r_alt_+) elementwise"
        )
    pr = build_squeeze_params(channel, r, offset_from_g(channel, g, r))
    pa = build_squeeze_params(channel, r_alt, offset_from_g(channel, g, r_alt))
    rep = matrix_rate(pr, fixed_point_on_floor(pr, p_hat))
    rep_alt = matrix_rate(pa, fixed_point_on_floor(pa, p_hat))
    return FloorRateComparison(
        rate=rep.global_rate,
        rate_alt=rep_alt.global_rate,
        ok=bool(rep.global_rate <= rep_alt.global_rate + 1e-9),
    )
