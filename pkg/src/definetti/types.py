"""Canonical representations of exchangeable binary laws and their marginals.

An exchangeable law on ``{0,1}^n`` is fully described by the distribution of
its number of ones (a :class:`CountPMF`); mass is uniform inside each weight
class. Marginals on ``k`` coordinates are stored per weight class as well
(:class:`WeightClassPMF`), which compresses ``2^k`` sequence probabilities
into ``k + 1`` numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import log_factorials

SUM_TOL = 1e-9
NEG_TOL = 1e-15
CLASS_SUM_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def _renormalize(mass: np.ndarray) -> np.ndarray:
    mass = mass / math.fsum(mass)
    # push the residual into the largest entry until the exact sum is 1.0
    top = int(np.argmax(mass))
    for _ in range(4):
        r = 1.0 - math.fsum(mass)
        if r == 0.0:
            break
        mass[top] += r
    return mass


@dataclass(frozen=True)
class CountPMF:
    """Law of the number of ones ``N`` in an exchangeable binary vector of length ``n``.

    ``mass[ell] = P(N = ell)``. Build instances with :func:`make_count_pmf`,
    which validates and renormalizes; the constructor only checks shape.
    """

    n: int
    mass: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "mass", _frozen(self.mass))
        if self.mass.shape != (self.n + 1,):
            raise ValueError(f"mass must have length n+1={self.n + 1}, got shape {self.mass.shape}")

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "mass": [float(x) for x in self.mass]})

    @classmethod
    def from_json(cls, text: str) -> "CountPMF":
        obj = json.loads(text)
        try:
            return make_count_pmf(obj["n"], obj["mass"])
        except KeyError as exc:
            raise ValueError(f"CountPMF JSON is missing field {exc.args[0]!r}") from None


def make_count_pmf(n: int, raw) -> CountPMF:
    """Validate ``raw`` as a count distribution on ``{0..n}`` and normalize it.

    Entries down to ``-1e-15`` are treated as rounding noise and clamped to 0.
    Raises ``ValueError`` on wrong length, genuinely negative entries, or a
    total that is off from 1 by more than ``1e-9``.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    mass = np.array(raw, dtype=np.float64)
    if mass.shape != (n + 1,):
        raise ValueError(f"expected {n + 1} entries for n={n}, got shape {mass.shape}")
    if not np.all(np.isfinite(mass)):
        raise ValueError("mass contains non-finite entries")
    if np.any(mass < -NEG_TOL):
        worst = int(np.argmin(mass))
        raise ValueError(f"mass[{worst}] = {mass[worst]!r} is negative")
    total = math.fsum(mass)
    if abs(total - 1.0) > SUM_TOL:
        raise ValueError(f"mass sums to {total!r}, deviating from 1 by {abs(total - 1.0):.3g}")
    mass = np.clip(mass, 0.0, None)
    return CountPMF(int(n), _renormalize(mass))


@dataclass(frozen=True)
class MixingMeasure:
    """Atomic probability measure on the grid ``{0, 1/n, ..., 1}``."""

    n: int
    atoms: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", _frozen(self.atoms))
        if self.atoms.shape != (self.n + 1,):
            raise ValueError(f"atoms must have length n+1={self.n + 1}")
        if np.any(self.atoms < 0):
            raise ValueError("atoms must be nonnegative")

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.n + 1) / self.n

    def mean(self) -> float:
        return math.fsum(self.atoms * self.grid)


@dataclass(frozen=True)
class WeightClassPMF:
    """Law on ``{0,1}^k`` that is constant on weight classes.

    ``perseq[s]`` is the probability of any single string with ``s`` ones.
    ``log_perseq`` carries the same values in log domain; it is what the
    divergence code consumes, so entries that underflow in ``perseq`` lose
    nothing there.
    """

    k: int
    perseq: np.ndarray = field(repr=False)
    log_perseq: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "perseq", _frozen(self.perseq))
        if self.perseq.shape != (self.k + 1,):
            raise ValueError(f"perseq must have length k+1={self.k + 1}")
        if np.any(self.perseq < 0):
            raise ValueError("perseq must be nonnegative")
        if self.log_perseq is None:
            with np.errstate(divide="ignore"):
                lp = np.log(self.perseq)
        else:
            lp = self.log_perseq
        object.__setattr__(self, "log_perseq", _frozen(lp))
        total = math.fsum(self.class_probs())
        if abs(total - 1.0) > CLASS_SUM_TOL:
            raise ValueError(f"weight classes sum to {total!r}, not 1")

    def log_multiplicities(self) -> np.ndarray:
        lf = log_factorials(self.k)
        s = np.arange(self.k + 1)
        return lf[self.k] - lf[s] - lf[self.k - s]

    def class_probs(self) -> np.ndarray:
        """``P(weight = s) = C(k, s) * perseq[s]``."""
        with np.errstate(invalid="ignore"):
            return np.exp(self.log_multiplicities() + self.log_perseq)

    def sequence_probs(self) -> np.ndarray:
        """Dense vector over all ``2^k`` strings, indexed by bitmask (k <= 20)."""
        if self.k > 20:
            raise ValueError("dense expansion limited to k <= 20")
        weights = np.array([bin(x).count("1") for x in range(1 << self.k)])
        return self.perseq[weights]


@dataclass(frozen=True)
class BoundReport:
    """Divergence, total variation and the corresponding bounds for one ``(pi, k)``."""

    n: int
    k: int
    divergence_nats: float
    tv: float
    theorem_bound: float
    pinsker_tv_bound: float
    ratio: float

    @property
    def holds(self) -> bool:
        return (self.divergence_nats <= self.theorem_bound
                and self.tv <= min(2.0, self.pinsker_tv_bound))
