"""Information-theoretic primitives in natural-log units (nats).

Conventions used throughout: ``0 * log 0 = 0`` and ``0 * log(0/a) = 0`` for
any ``a >= 0``; a genuinely unsupported ratio (q_i > 0 against s_i = 0)
yields ``+inf``.  Inputs are nonnegative weight vectors and need not sum
to 1.  Conversion to bits is a presentation concern: divide by ``LN2``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, NegativeEntryError

LN2 = float(np.log(2.0))


def _as_weights(q, name: str) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.ndim != 1:
        raise DimensionMismatchError(f"{name} must be a 1-d vector, got shape {q.shape}")
    if np.any(q < 0):
        raise NegativeEntryError(f"{name} has a negative entry (min {q.min():.3e})")
    return q


def entropy(q) -> float:
    """Shannon entropy -sum q_i ln q_i of a nonnegative weight vector."""
    q = _as_weights(q, "q")
    pos = q > 0
    return float(-np.sum(q[pos] * np.log(q[pos])))


def kl_divergence(q, s) -> float:
    """Relative entropy sum q_i ln(q_i / s_i); +inf if q puts mass where s has none."""
    q = _as_weights(q, "q")
    s = _as_weights(s, "s")
    if q.shape != s.shape:
        raise DimensionMismatchError(f"length mismatch: {q.shape[0]} vs {s.shape[0]}")
    pos = q > 0
    if np.any(s[pos] == 0):
        return float("inf")
    return float(np.sum(q[pos] * np.log(q[pos] / s[pos])))


def mutual_information(channel, p) -> float:
    """Mutual information sum_i p_i D(W_i || pW) for input distribution p.

    ``channel`` is a ChannelMatrix or a row-stochastic array; ``p`` is a
    Distribution or a length-m vector.  Always finite for a channel with
    no identically-zero column.
    """
    w = np.asarray(getattr(channel, "w", channel), dtype=float)
    pv = np.asarray(getattr(p, "probs", p), dtype=float)
    if w.ndim != 2 or pv.shape[0] != w.shape[0]:
        raise DimensionMismatchError(
            f"channel is {getattr(w, 'shape', None)}, p has length {pv.shape[0]}"
        )
    s = pv @ w
    total = 0.0
    for i in np.nonzero(pv > 0)[0]:
        total += pv[i] * kl_divergence(w[i], s)
    return float(total)


def generalized_objective(v, f, c, p) -> float:
    """Shifted capacity objective H(pV + f) + sum_i p_i (c_i - H(V_i)) - H(f).

    With f = 0 and c = 0 this is exactly ``mutual_information(v, p)``.
    """
    w = np.asarray(getattr(v, "w", v), dtype=float)
    f = _as_weights(f, "f")
    c = np.asarray(c, dtype=float)
    pv = np.asarray(getattr(p, "probs", p), dtype=float)
    m, n = w.shape
    if f.shape[0] != n or c.shape[0] != m or pv.shape[0] != m:
        raise DimensionMismatchError(
            f"inconsistent shapes: V {w.shape}, f {f.shape}, c {c.shape}, p {pv.shape}"
        )
    row_ent = np.array([entropy(w[i]) for i in range(m)])
    return float(entropy(pv @ w + f) + pv @ (c - row_ent) - entropy(f))


def generalized_objective_kl_form(v, f, c, p) -> float:
    """Equivalent divergence form of :func:`generalized_objective`.

    Computes sum_i p_i (D(V_i || f + pV) + c_i) + D(f || f + pV).  Kept as
    an independent cross-check of the entropy form; the two agree to
    roundoff on valid inputs.
    """
    w = np.asarray(getattr(v, "w", v), dtype=float)
    f = _as_weights(f, "f")
    c = np.asarray(c, dtype=float)
    pv = np.asarray(getattr(p, "probs", p), dtype=float)
    mix = f + pv @ w
    total = kl_divergence(f, mix)
    for i in range(w.shape[0]):
        if pv[i] != 0:
            total += pv[i] * (kl_divergence(w[i], mix) + c[i])
    return float(total)


def nats_to_bits(x: float) -> float:
    return x / LN2
