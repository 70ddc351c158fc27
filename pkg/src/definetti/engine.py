"""Exact finite de Finetti quantities for a count distribution.

Everything works on weight classes: the marginal of the first ``k``
coordinates, the Bernoulli mixture built from the empirical-frequency
measure, their divergence and distance, the conditional mutual information
between one coordinate and a block given the total count, and the explicit
bounds these quantities satisfy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .combinatorics import hypergeometric_pmf, log_binomial, log_factorials
from .info import AbsoluteContinuityViolation, clamp_nonnegative
from .types import BoundReport, CountPMF, MixingMeasure, WeightClassPMF

__all__ = [
    "log_binomial",
    "hypergeometric_pmf",
    "marginal_weight_pmf",
    "mixing_measure",
    "mixture_weight_pmf",
    "divergence_to_mixture",
    "tv_to_mixture",
    "divergence_and_tv",
    "conditional_mutual_information",
    "conditional_divergence",
    "cmi_table",
    "conditional_divergence_table",
    "BoundValues",
    "bound_values",
    "LemmaTerms",
    "lemma_term_bounds",
    "bound_report",
]

LEMMA_TOL = 1e-12


def _check_k(pi: CountPMF, k: int) -> None:
    if not 1 <= k <= pi.n:
        raise ValueError(f"k must lie in [1, {pi.n}], got {k}")


def _normalize_logs(logp: np.ndarray, k: int) -> np.ndarray:
    # weight-class totals can drift from 1 by a few ulp; remove it in log domain
    lf = log_factorials(k)
    s = np.arange(k + 1)
    lc = lf[k] - lf[s] - lf[k - s]
    with np.errstate(invalid="ignore"):
        total = math.fsum(np.exp(lc + logp))
    return logp - math.log(total)


def _weight_pmf(logp: np.ndarray, k: int) -> WeightClassPMF:
    logp = _normalize_logs(logp, k)
    return WeightClassPMF(k, np.exp(logp), logp)


def _log_pmfs(pi: CountPMF, k: int):
    logq = kernels.log_marginal(pi.mass, k, log_factorials(pi.n))
    logm = kernels.log_mixture(pi.mass, k)
    return logq, logm


def marginal_weight_pmf(pi: CountPMF, k: int) -> WeightClassPMF:
    """Law of the first ``k`` coordinates:
    ``perseq[s] = sum_l pi[l] C(n-k, l-s) / C(n, l)``."""
    _check_k(pi, k)
    return _weight_pmf(kernels.log_marginal(pi.mass, k, log_factorials(pi.n)), k)


def mixing_measure(pi: CountPMF) -> MixingMeasure:
    """Law of the empirical frequency ``N / n``: atom ``pi[l]`` at ``l / n``."""
    return MixingMeasure(pi.n, pi.mass)


def mixture_weight_pmf(mu: MixingMeasure, k: int) -> WeightClassPMF:
    """Bernoulli mixture ``perseq[s] = sum_l mu[l] p_l^s (1-p_l)^(k-s)``, ``0^0 = 1``."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return _weight_pmf(kernels.log_mixture(mu.atoms, k), k)


def divergence_and_tv(pi: CountPMF, k: int) -> tuple[float, float]:
    """Both :func:`divergence_to_mixture` and :func:`tv_to_mixture` from one pass."""
    _check_k(pi, k)
    logq, logm = _log_pmfs(pi, k)
    d, tv = kernels.divergence_tv(logq, logm, log_factorials(k))
    if math.isinf(d):
        s = int(np.flatnonzero((logq > -np.inf) & (logm == -np.inf))[0])
        raise AbsoluteContinuityViolation(f"marginal charges weight {s} but the mixture does not")
    return clamp_nonnegative(float(d), "divergence"), float(tv)


def divergence_to_mixture(pi: CountPMF, k: int) -> float:
    """Relative entropy between the ``k``-marginal of ``pi`` and its de Finetti mixture."""
    return divergence_and_tv(pi, k)[0]


def tv_to_mixture(pi: CountPMF, k: int) -> float:
    """Total variation (L1 convention, range ``[0, 2]``) between the same pair."""
    return divergence_and_tv(pi, k)[1]


def _check_nell(n: int, ell: int) -> None:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 <= ell <= n:
        raise ValueError(f"ell must lie in [0, {n}], got {ell}")


def conditional_mutual_information(n: int, ell: int, i: int, k: int) -> float:
    """``I(X_i ; X_{i+1..k} | N = ell)`` for a uniform weight-``ell`` sequence.

    Uses ``h(ell/n) - E[h((ell - J) / (n - m))]`` with ``J`` hypergeometric on
    ``m = k - i`` draws. Depends on ``(i, k)`` only through ``m``.
    """
    _check_nell(n, ell)
    if not 1 <= i < k <= n:
        raise ValueError(f"need 1 <= i < k <= n, got i={i}, k={k}, n={n}")
    if ell == 0 or ell == n:
        return 0.0
    v = kernels.cmi(n, ell, k - i, log_factorials(n))
    return clamp_nonnegative(float(v), "conditional mutual information")


def conditional_divergence(n: int, ell: int, k: int) -> float:
    """``D(law of X_1..k given N = ell || Bernoulli(ell/n)^k)``."""
    _check_nell(n, ell)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if ell == 0 or ell == n:
        return 0.0
    v = kernels.cond_div(n, ell, k, log_factorials(n))
    return clamp_nonnegative(float(v), "conditional divergence")


def _clamp_table(t: np.ndarray, what: str) -> np.ndarray:
    worst = float(t.min()) if t.size else 0.0
    if worst < -LEMMA_TOL:
        clamp_nonnegative(worst, what)
    return np.maximum(t, 0.0)


def cmi_table(n: int) -> np.ndarray:
    """Array ``T[ell, m]`` of conditional MI for block length ``m = k - i``.

    Shape ``(n + 1, n)``; column ``m = 0`` is zero. ``T[ell, k - i]`` equals
    ``conditional_mutual_information(n, ell, i, k)``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return _clamp_table(kernels.cmi_table(n, log_factorials(n)), "conditional mutual information")


def conditional_divergence_table(n: int) -> np.ndarray:
    """Array ``T[ell, k]`` of :func:`conditional_divergence`; shape ``(n + 1, n + 1)``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return _clamp_table(kernels.cond_div_table(n, log_factorials(n)), "conditional divergence")


class BoundValues(NamedTuple):
    theorem_bound: float
    lemma_bound: float
    pinsker_tv_bound: float


def bound_values(n: int, k: int) -> BoundValues:
    """``5k^2 log n/(n-k)``, ``5k log n/(n-k)`` and ``k sqrt(10 log n/(n-k))``.

    All three are ``inf`` at ``k = n``.
    """
    if n < 2:
        raise ValueError(f"bounds require n >= 2, got n={n}")
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if k == n:
        return BoundValues(math.inf, math.inf, math.inf)
    logn = math.log(n)
    return BoundValues(
        5.0 * k * k * logn / (n - k),
        5.0 * k * logn / (n - k),
        k * math.sqrt(10.0 * logn / (n - k)),
    )


@dataclass(frozen=True)
class LemmaTerms:
    interior_term: float
    collision_term: float
    boundary_term: float
    total: float


def lemma_term_bounds(n: int, ell: int, i: int, k: int) -> LemmaTerms:
    """Three-term bound on the conditional MI, valid for ``k <= n/2``.

    interior: the Lipschitz estimate on the non-degenerate range of the
    block count; collision: Markov bound ``k/n`` on the block holding every
    one; boundary: entropy of ``ell/n`` when ``ell > n - k``.
    """
    if not 1 <= ell <= n - 1:
        raise ValueError(f"ell must lie in [1, {n - 1}], got {ell}")
    if not 1 <= i <= k - 1:
        raise ValueError(f"i must lie in [1, {k - 1}], got {i}")
    if 2 * k > n:
        raise ValueError(f"decomposition requires k <= n/2, got k={k}, n={n}")
    logn = math.log(n)
    m = k - i
    interior = 2.0 * ell * m * logn / (n * (n - m))
    collision = k / n
    boundary = 2.0 * k * logn / (n - k)
    return LemmaTerms(interior, collision, boundary, interior + collision + boundary)


def bound_report(pi: CountPMF, k: int) -> BoundReport:
    d, tv = divergence_and_tv(pi, k)
    b = bound_values(pi.n, k)
    ratio = 0.0 if math.isinf(b.theorem_bound) else d / b.theorem_bound
    return BoundReport(pi.n, k, d, tv, b.theorem_bound, b.pinsker_tv_bound, ratio)
