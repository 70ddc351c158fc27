"""Pure-numpy kernels, vectorized over the inner index.

Used when numba is unavailable or ``DEFINETTI_BACKEND=numpy``. Results agree
with the compiled kernels to rounding (pairwise vs. compensated summation).
"""

import math

import numpy as np
from scipy.special import logsumexp


def binary_entropy(p):
    p = np.asarray(p, dtype=np.float64)
    inside = (p > 0.0) & (p < 1.0)
    q = np.where(inside, p, 0.5)
    out = np.where(inside, -q * np.log(q) - (1.0 - q) * np.log1p(-q), 0.0)
    return out if out.ndim else float(out)


def _log_binom(lf, a, b):
    """Elementwise log C(a, b); -inf outside 0 <= b <= a."""
    a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
    ok = (b >= 0) & (b <= a) & (a >= 0)
    aa = np.where(ok, a, 0)
    bb = np.where(ok, b, 0)
    return np.where(ok, lf[aa] - lf[bb] - lf[aa - bb], -np.inf)


def log_marginal(mass, k, lf):
    n = mass.shape[0] - 1
    ell = np.arange(n + 1)
    s = np.arange(k + 1)[:, None]
    with np.errstate(divide="ignore"):
        terms = np.log(mass) + _log_binom(lf, n - k, ell - s) - _log_binom(lf, n, ell)
        return logsumexp(terms, axis=1)


def log_mixture(atoms, k):
    n = atoms.shape[0] - 1
    ell = np.arange(n + 1)
    s = np.arange(k + 1)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = np.log(ell) - math.log(n)
        log1mp = np.log(n - ell) - math.log(n)
        terms = (np.log(atoms)
                 + np.where(s == 0, 0.0, s * logp)
                 + np.where(s == k, 0.0, (k - s) * log1mp))
        return logsumexp(terms, axis=1)


def divergence_tv(logq, logm, lf):
    k = logq.shape[0] - 1
    lc = _log_binom(lf, k, np.arange(k + 1))
    has_q = logq > -np.inf
    if np.any(has_q & (logm == -np.inf)):
        return np.inf, np.nan
    qv = np.exp(lc + logq)
    mv = np.exp(lc + logm)
    d = math.fsum(qv[has_q] * (logq[has_q] - logm[has_q]))
    tv = math.fsum(np.abs(qv - mv))
    return d, tv


def _cmi_rows(n, ells, m, lf):
    """Conditional MI for a vector of ``ells`` at fixed block length ``m``."""
    ell = np.asarray(ells)[:, None]
    j = np.arange(m + 1)[None, :]
    w = np.exp(_log_binom(lf, ell, j) + _log_binom(lf, n - ell, m - j)
               - _log_binom(lf, n, m))
    inner = binary_entropy((ell - j) / (n - m))
    out = binary_entropy(ell[:, 0] / n) - np.sum(w * inner, axis=1)
    degenerate = (ell[:, 0] == 0) | (ell[:, 0] == n)
    return np.where(degenerate, 0.0, out)


def cmi(n, ell, m, lf):
    if ell == 0 or ell == n or m == 0:
        return 0.0
    return float(_cmi_rows(n, [ell], m, lf)[0])


def cmi_table(n, lf):
    out = np.zeros((n + 1, n))
    ells = np.arange(n + 1)
    for m in range(1, n):
        out[:, m] = _cmi_rows(n, ells, m, lf)
    return out


def _cond_div_rows(n, ells, k, lf):
    ell = np.asarray(ells)[:, None]
    s = np.arange(k + 1)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        lq = _log_binom(lf, n - k, ell - s) - _log_binom(lf, n, ell)
        w = np.exp(_log_binom(lf, k, s) + lq)
        logp = np.log(ell) - math.log(n)
        log1mp = np.log(n - ell) - math.log(n)
        terms = w * (lq - s * logp - (k - s) * log1mp)
    terms = np.where(w > 0.0, terms, 0.0)
    out = np.sum(terms, axis=1)
    degenerate = (ell[:, 0] == 0) | (ell[:, 0] == n)
    return np.where(degenerate, 0.0, out)


def cond_div(n, ell, k, lf):
    if ell == 0 or ell == n:
        return 0.0
    return float(_cond_div_rows(n, [ell], k, lf)[0])


def cond_div_table(n, lf):
    out = np.zeros((n + 1, n + 1))
    ells = np.arange(n + 1)
    for k in range(1, n + 1):
        out[:, k] = _cond_div_rows(n, ells, k, lf)
    return out
