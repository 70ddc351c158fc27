"""Named exchangeable families used as the test bank.

``random_dirichlet`` draws i.i.d. standard exponentials from numpy's PCG64
generator seeded with the 64-bit ``seed`` and normalizes them, i.e. a flat
Dirichlet sample on the count simplex.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import log_factorials
from .types import CountPMF, make_count_pmf

KINDS = ("iid", "point_mass", "polya", "uniform_counts", "random_dirichlet")
_PARAMS = {
    "iid": {"p"},
    "point_mass": {"ell", "frac"},
    "polya": {"a", "b"},
    "uniform_counts": set(),
    "random_dirichlet": set(),
}


@dataclass(frozen=True)
class FamilySpec:
    """A family kind plus its parameters.

    ``point_mass`` takes either an absolute ``ell`` or a ``frac`` giving
    ``ell = floor(frac * n)``, so one spec can be swept across ``n``.
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        extra = set(self.params) - _PARAMS[self.kind]
        if extra:
            raise ValueError(f"{self.kind}: unknown params {sorted(extra)}")
        p = self.params
        if self.kind == "iid":
            if "p" not in p or not 0.0 <= p["p"] <= 1.0:
                raise ValueError("iid: p must lie in [0, 1]")
        elif self.kind == "point_mass":
            if len(p) != 1:
                raise ValueError("point_mass: give exactly one of ell, frac")
            if "frac" in p and not 0.0 <= p["frac"] <= 1.0:
                raise ValueError("point_mass: frac must lie in [0, 1]")
            if "ell" in p and (int(p["ell"]) != p["ell"] or p["ell"] < 0):
                raise ValueError("point_mass: ell must be a nonnegative integer")
        elif self.kind == "polya":
            if not (p.get("a", 0) > 0 and p.get("b", 0) > 0):
                raise ValueError("polya: urn weights a and b must be > 0")
        elif self.kind == "random_dirichlet":
            if self.seed is None or not 0 <= self.seed < 2**64:
                raise ValueError("random_dirichlet: seed must be a 64-bit unsigned integer")

    @property
    def label(self) -> str:
        parts = [f"{k}={self.params[k]:g}" for k in sorted(self.params)]
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        return f"{self.kind}({','.join(parts)})"

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "params": dict(self.params)}
        if self.seed is not None:
            d["seed"] = self.seed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "FamilySpec":
        if "kind" not in d:
            raise ValueError("family spec is missing 'kind'")
        seed = d.get("seed")
        return cls(d["kind"], dict(d.get("params", {})), None if seed is None else int(seed))

    @classmethod
    def from_json(cls, text: str) -> "FamilySpec":
        return cls.from_dict(json.loads(text))


def iid(p: float) -> FamilySpec:
    return FamilySpec("iid", {"p": p})


def point_mass(ell: int | None = None, *, frac: float | None = None) -> FamilySpec:
    if (ell is None) == (frac is None):
        raise ValueError("give exactly one of ell, frac")
    return FamilySpec("point_mass", {"ell": ell} if frac is None else {"frac": frac})


def polya(a: float, b: float) -> FamilySpec:
    return FamilySpec("polya", {"a": a, "b": b})


def uniform_counts() -> FamilySpec:
    return FamilySpec("uniform_counts")


def random_dirichlet(seed: int) -> FamilySpec:
    return FamilySpec("random_dirichlet", seed=seed)


def _binomial_counts(n: int, p: float) -> np.ndarray:
    mass = np.zeros(n + 1)
    if p == 0.0:
        mass[0] = 1.0
        return mass
    if p == 1.0:
        mass[n] = 1.0
        return mass
    lf = log_factorials(n)
    ell = np.arange(n + 1)
    logc = lf[n] - lf[ell] - lf[n - ell]
    return np.exp(logc + ell * math.log(p) + (n - ell) * math.log1p(-p))


def _log_beta(x: float, y: float) -> float:
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def _beta_binomial(n: int, a: float, b: float) -> np.ndarray:
    lf = log_factorials(n)
    base = _log_beta(a, b)
    out = np.empty(n + 1)
    for ell in range(n + 1):
        logc = lf[n] - lf[ell] - lf[n - ell]
        out[ell] = math.exp(logc + _log_beta(a + ell, b + n - ell) - base)
    return out


def generate(spec: FamilySpec, n: int) -> CountPMF:
    """Count distribution of ``spec`` at sequence length ``n``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    kind, p = spec.kind, spec.params
    if kind == "iid":
        mass = _binomial_counts(n, float(p["p"]))
    elif kind == "point_mass":
        ell = int(p["ell"]) if "ell" in p else int(math.floor(p["frac"] * n))
        if ell > n:
            raise ValueError(f"point_mass: ell={ell} exceeds n={n}")
        mass = np.zeros(n + 1)
        mass[ell] = 1.0
    elif kind == "polya":
        mass = _beta_binomial(n, float(p["a"]), float(p["b"]))
    elif kind == "uniform_counts":
        mass = np.full(n + 1, 1.0 / (n + 1))
    else:
        rng = np.random.default_rng(spec.seed)
        draws = rng.standard_exponential(n + 1)
        mass = draws / math.fsum(draws)
    return make_count_pmf(n, mass)
