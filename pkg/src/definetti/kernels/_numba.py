"""Numba-compiled kernels. Signatures mirror ``_numpy`` exactly."""

import math

import numpy as np
from numba import njit

_jit = njit(cache=True, nogil=True)


@_jit
def binary_entropy(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log1p(-p)


@_jit
def _log_binom(lf, a, b):
    return lf[a] - lf[b] - lf[a - b]


@_jit
def _neumaier(total, comp, term):
    t = total + term
    if abs(total) >= abs(term):
        comp += (total - t) + term
    else:
        comp += (term - t) + total
    return t, comp


@_jit
def _logsumexp(buf):
    peak = -np.inf
    for v in buf:
        if v > peak:
            peak = v
    if peak == -np.inf:
        return -np.inf
    acc = 0.0
    comp = 0.0
    for v in buf:
        if v > -np.inf:
            acc, comp = _neumaier(acc, comp, math.exp(v - peak))
    return peak + math.log(acc + comp)


@_jit
def log_marginal(mass, k, lf):
    n = mass.shape[0] - 1
    out = np.full(k + 1, -np.inf)
    buf = np.empty(n + 1)
    for s in range(k + 1):
        for ell in range(n + 1):
            if mass[ell] > 0.0 and s <= ell <= n - k + s:
                buf[ell] = (math.log(mass[ell]) + _log_binom(lf, n - k, ell - s)
                            - _log_binom(lf, n, ell))
            else:
                buf[ell] = -np.inf
        out[s] = _logsumexp(buf)
    return out


@_jit
def log_mixture(atoms, k):
    n = atoms.shape[0] - 1
    logn = math.log(n)
    out = np.full(k + 1, -np.inf)
    buf = np.empty(n + 1)
    for s in range(k + 1):
        for ell in range(n + 1):
            v = -np.inf
            if atoms[ell] > 0.0:
                v = math.log(atoms[ell])
                if s > 0:
                    if ell == 0:
                        v = -np.inf
                    else:
                        v += s * (math.log(ell) - logn)
                if k > s and v > -np.inf:
                    if ell == n:
                        v = -np.inf
                    else:
                        v += (k - s) * (math.log(n - ell) - logn)
            buf[ell] = v
        out[s] = _logsumexp(buf)
    return out


@_jit
def divergence_tv(logq, logm, lf):
    k = logq.shape[0] - 1
    d = 0.0
    dc = 0.0
    tv = 0.0
    tc = 0.0
    for s in range(k + 1):
        lc = _log_binom(lf, k, s)
        if logq[s] > -np.inf:
            if logm[s] == -np.inf:
                return np.inf, np.nan
            d, dc = _neumaier(d, dc, math.exp(lc + logq[s]) * (logq[s] - logm[s]))
        qv = math.exp(lc + logq[s]) if logq[s] > -np.inf else 0.0
        mv = math.exp(lc + logm[s]) if logm[s] > -np.inf else 0.0
        tv, tc = _neumaier(tv, tc, abs(qv - mv))
    return d + dc, tv + tc


@_jit
def cmi(n, ell, m, lf):
    if ell == 0 or ell == n or m == 0:
        return 0.0
    lnm = _log_binom(lf, n, m)
    acc = binary_entropy(ell / n)
    comp = 0.0
    lo = max(0, m - (n - ell))
    hi = min(m, ell)
    for j in range(lo, hi + 1):
        w = math.exp(_log_binom(lf, ell, j) + _log_binom(lf, n - ell, m - j) - lnm)
        acc, comp = _neumaier(acc, comp, -w * binary_entropy((ell - j) / (n - m)))
    return acc + comp


@_jit
def cmi_table(n, lf):
    out = np.zeros((n + 1, n))
    for ell in range(1, n):
        for m in range(1, n):
            out[ell, m] = cmi(n, ell, m, lf)
    return out


@_jit
def cond_div(n, ell, k, lf):
    if ell == 0 or ell == n:
        return 0.0
    logp = math.log(ell) - math.log(n)
    log1mp = math.log(n - ell) - math.log(n)
    lnl = _log_binom(lf, n, ell)
    acc = 0.0
    comp = 0.0
    for s in range(max(0, ell - (n - k)), min(k, ell) + 1):
        lq = _log_binom(lf, n - k, ell - s) - lnl
        w = math.exp(_log_binom(lf, k, s) + lq)
        acc, comp = _neumaier(acc, comp, w * (lq - s * logp - (k - s) * log1mp))
    return acc + comp


@_jit
def cond_div_table(n, lf):
    out = np.zeros((n + 1, n + 1))
    for ell in range(1, n):
        for k in range(1, n + 1):
            out[ell, k] = cond_div(n, ell, k, lf)
    return out
