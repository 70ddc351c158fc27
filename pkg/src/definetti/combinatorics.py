"""Log-domain binomial coefficients backed by a shared log-factorial table.

The table holds ``log(j!)`` for ``j = 0..size-1`` as compensated prefix sums of
``log(j)``, so every entry is within about one ulp of the true value and is
bit-reproducible. It grows (to the next power of two) on demand; growth swaps
in a new read-only array under a lock, so readers never observe a partial
table.
"""

from __future__ import annotations

import math
import threading

import numpy as np

_INITIAL_SIZE = 4096
_lock = threading.Lock()
_table: np.ndarray | None = None


def _build(size: int) -> np.ndarray:
    out = np.empty(size, dtype=np.float64)
    total = 0.0
    comp = 0.0
    out[0] = 0.0
    for j in range(1, size):
        # Neumaier summation
        term = math.log(j)
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        out[j] = total + comp
    out.setflags(write=False)
    return out


def log_factorials(upto: int = 0) -> np.ndarray:
    """Return the read-only table of ``log(j!)``, covering at least ``0..upto``."""
    global _table
    table = _table
    if table is not None and table.shape[0] > upto:
        return table
    with _lock:
        table = _table
        if table is None or table.shape[0] <= upto:
            size = max(_INITIAL_SIZE, 1 << int(upto + 1).bit_length())
            table = _build(size)
            _table = table
    return table


def log_binomial(a: int, b: int) -> float:
    """``log C(a, b)``; ``-inf`` when ``b < 0`` or ``b > a``."""
    if a < 0:
        raise ValueError(f"a must be nonnegative, got {a}")
    if b < 0 or b > a:
        return -math.inf
    lf = log_factorials(a)
    return float(lf[a] - lf[b] - lf[a - b])


def hypergeometric_pmf(j: int, n: int, ell: int, m: int) -> float:
    """Probability that ``m`` fixed positions of a uniform weight-``ell``
    length-``n`` binary sequence contain exactly ``j`` ones."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 <= ell <= n:
        raise ValueError(f"ell must lie in [0, {n}], got {ell}")
    if not 0 <= m <= n:
        raise ValueError(f"m must lie in [0, {n}], got {m}")
    if j < max(0, m - (n - ell)) or j > min(m, ell):
        return 0.0
    logp = log_binomial(ell, j) + log_binomial(n - ell, m - j) - log_binomial(n, m)
    return math.exp(logp)
