"""Exhaustive-enumeration ground truth over ``{0,1}^n`` for small ``n``.

Nothing here touches the engine or the kernels. Sequences are bitmasks with
coordinate ``X_{j+1}`` stored in bit ``j``; binomials come from
:func:`math.comb`; mutual information is computed as
``D(P_XY || P_X P_Y)`` rather than as an entropy difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .info import relative_entropy
from .types import CountPMF

MAX_N = 20


def _popcount(size: int) -> np.ndarray:
    x = np.arange(size, dtype=np.int64)
    w = np.zeros(size, dtype=np.int64)
    while np.any(x):
        w += x & 1
        x >>= 1
    return w


@dataclass(frozen=True)
class JointTable:
    """Dense law of ``(X_1, ..., X_n)`` indexed by bitmask."""

    n: int
    probs: np.ndarray = field(repr=False)

    def weights(self) -> np.ndarray:
        return _popcount(1 << self.n)

    def as_tensor(self) -> np.ndarray:
        """View with one axis per coordinate; axis ``j`` is ``X_{j+1}``."""
        # C order puts the highest bit first, so reverse the axes
        t = self.probs.reshape((2,) * self.n)
        return t.transpose(tuple(range(self.n - 1, -1, -1)))

    def is_exchangeable(self, tol: float = 1e-15) -> bool:
        t = self.as_tensor()
        for a in range(self.n - 1):
            if np.max(np.abs(t - np.swapaxes(t, a, a + 1))) > tol:
                return False
        return True


def enumerate_joint(pi: CountPMF) -> JointTable:
    """Spread ``pi[w]`` uniformly over the ``C(n, w)`` strings of weight ``w``."""
    n = pi.n
    if n > MAX_N:
        raise ValueError(f"oracle enumeration is capped at n <= {MAX_N}, got {n}")
    counts = np.array([math.comb(n, w) for w in range(n + 1)], dtype=np.float64)
    probs = (pi.mass / counts)[_popcount(1 << n)]
    probs.setflags(write=False)
    return JointTable(n, probs)


def oracle_marginal(joint: JointTable, coords) -> np.ndarray:
    """Law of ``(X_c for c in coords)``; ``coords`` are 1-based positions.

    Output index bit ``j`` is the value of ``X_{coords[j]}``.
    """
    coords = [int(c) for c in coords]
    if len(set(coords)) != len(coords):
        raise ValueError("coords must be distinct")
    if any(not 1 <= c <= joint.n for c in coords):
        raise ValueError(f"coords must lie in [1, {joint.n}]")
    t = joint.as_tensor()
    axes = [c - 1 for c in coords]
    rest = tuple(a for a in range(joint.n) if a not in axes)
    m = t.sum(axis=rest) if rest else t
    # remaining axes are in increasing position order; reorder to coords order
    kept = sorted(axes)
    m = np.transpose(m, [kept.index(a) for a in axes])
    # back to bitmask layout: last coord is the highest bit
    m = np.transpose(m, tuple(range(len(axes) - 1, -1, -1)))
    return np.ascontiguousarray(m).reshape(-1)


def oracle_conditional_mi(joint: JointTable, i: int, k: int, ell: int) -> float:
    """``I(X_i ; X_{i+1..k} | N = ell)`` from the conditioned dense table."""
    if not 1 <= i < k <= joint.n:
        raise ValueError(f"need 1 <= i < k <= n, got i={i}, k={k}")
    w = joint.weights()
    sel = w == ell
    p_event = math.fsum(joint.probs[sel])
    if p_event == 0.0:
        raise ValueError(f"P(N = {ell}) = 0; conditioning is undefined")
    cond = JointTable(joint.n, np.where(sel, joint.probs, 0.0) / p_event)
    # bit 0 <-> X_i, bits 1.. <-> X_{i+1..k}
    pxy = oracle_marginal(cond, range(i, k + 1)).reshape(-1, 2)  # [y, x]
    px = pxy.sum(axis=0)
    py = pxy.sum(axis=1)
    prod = np.outer(py, px)
    return relative_entropy(pxy.reshape(-1), prod.reshape(-1))


def oracle_mixture(pi: CountPMF, k: int) -> np.ndarray:
    """Dense ``2^k`` vector of ``sum_l pi[l] p^w (1-p)^(k-w)``, ``p = l/n``."""
    if k > MAX_N:
        raise ValueError(f"k must be <= {MAX_N}")
    w = _popcount(1 << k)[:, None]
    p = (np.arange(pi.n + 1) / pi.n)[None, :]
    # numpy defines 0.0 ** 0 == 1.0
    return (p ** w * (1.0 - p) ** (k - w)) @ pi.mass


def oracle_divergence(pi: CountPMF, k: int) -> float:
    joint = enumerate_joint(pi)
    q = oracle_marginal(joint, range(1, k + 1))
    return relative_entropy(q, oracle_mixture(pi, k))


def oracle_tv(pi: CountPMF, k: int) -> float:
    joint = enumerate_joint(pi)
    q = oracle_marginal(joint, range(1, k + 1))
    return math.fsum(np.abs(q - oracle_mixture(pi, k)))


def oracle_conditional_divergence(n: int, ell: int, k: int) -> float:
    """``D(law of X_1..k given N = ell || Bernoulli(ell/n)^k)`` by enumeration."""
    mass = np.zeros(n + 1)
    mass[ell] = 1.0
    joint = enumerate_joint(CountPMF(n, mass))
    q = oracle_marginal(joint, range(1, k + 1))
    p = ell / n
    w = _popcount(1 << k)
    return relative_entropy(q, p ** w * (1.0 - p) ** (k - w))
