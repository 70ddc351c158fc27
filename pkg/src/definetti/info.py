"""Elementary information measures on finite probability vectors, in nats."""

from __future__ import annotations

import math

import numpy as np

PMF_TOL = 1e-12
CLAMP_TOL = 1e-12


class AbsoluteContinuityViolation(ValueError):
    """``P(x) > 0`` where ``Q(x) = 0``; the relative entropy is infinite."""


class InternalConsistencyError(ArithmeticError):
    """A quantity that is nonnegative by theorem came out clearly negative."""


def clamp_nonnegative(value: float, what: str = "value") -> float:
    if value < 0.0:
        if value < -CLAMP_TOL:
            raise InternalConsistencyError(f"{what} = {value!r} is below -{CLAMP_TOL}")
        return 0.0
    return value


def _pmf(p, name: str) -> np.ndarray:
    a = np.asarray(p, dtype=np.float64)
    if a.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has negative or non-finite entries")
    total = math.fsum(a)
    if abs(total - 1.0) > PMF_TOL:
        raise ValueError(f"{name} sums to {total!r}, not 1")
    return a


def _pair(P, Q):
    P = _pmf(P, "P")
    Q = _pmf(Q, "Q")
    if P.shape != Q.shape:
        raise ValueError(f"P and Q live on different index sets: {P.shape} vs {Q.shape}")
    return P, Q


def binary_entropy(p: float) -> float:
    """``h(p) = -p log p - (1-p) log(1-p)`` with ``0 log 0 = 0``."""
    if not -PMF_TOL <= p <= 1.0 + PMF_TOL:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log1p(-p)


def relative_entropy(P, Q) -> float:
    """Kullback-Leibler divergence ``D(P || Q)``.

    Zero-mass terms of ``P`` are skipped. Raises
    :class:`AbsoluteContinuityViolation` if ``P`` charges a point ``Q`` does not.
    """
    P, Q = _pair(P, Q)
    support = P > 0
    bad = support & (Q == 0)
    if np.any(bad):
        idx = int(np.flatnonzero(bad)[0])
        raise AbsoluteContinuityViolation(f"P[{idx}] = {P[idx]!r} but Q[{idx}] = 0")
    p = P[support]
    d = math.fsum(p * (np.log(p) - np.log(Q[support])))
    return clamp_nonnegative(d, "relative entropy")


def total_variation(P, Q) -> float:
    """``sum |P - Q|``, i.e. twice the largest event discrepancy; in ``[0, 2]``."""
    P, Q = _pair(P, Q)
    return math.fsum(np.abs(P - Q))


def entropy_difference_bound(p: float, q: float) -> float:
    """Upper bound ``|p - q| * max(|logit p|, |logit q|)`` on ``|h(p) - h(q)|``.

    Only defined for interior points; the logit diverges at 0 and 1.
    """
    for name, x in (("p", p), ("q", q)):
        if not 0.0 < x < 1.0:
            raise ValueError(f"{name} must lie strictly inside (0, 1), got {x!r}")
    lp = abs(math.log1p(-p) - math.log(p))
    lq = abs(math.log1p(-q) - math.log(q))
    return abs(p - q) * max(lp, lq)
