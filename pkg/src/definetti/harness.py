"""Batch experiments: bound sweeps, oracle verification, rate and convergence studies.

Each ``run_*`` function is pure with respect to its arguments and returns
plain data; :mod:`definetti.cli` handles parsing and output.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import engine, oracle
from .families import FamilySpec, generate, iid, point_mass, polya, random_dirichlet, uniform_counts
from .info import relative_entropy
from .types import BoundReport

SWEEP_COLUMNS = ("family", "n", "k", "divergence_nats", "tv", "theorem_bound",
                 "pinsker_tv_bound", "ratio")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


def threads() -> int:
    raw = os.environ.get("DEFINETTI_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        v = int(raw)
    except ValueError:
        raise ConfigError(f"DEFINETTI_THREADS must be an integer, got {raw!r}") from None
    if v < 1:
        raise ConfigError("DEFINETTI_THREADS must be >= 1")
    return v


def _pmap(fn, items):
    items = list(items)
    workers = min(threads(), len(items)) if items else 1
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------- config

@dataclass(frozen=True)
class KRule:
    kind: str = "all"  # all | list | fractions
    values: tuple = ()

    def resolve(self, n: int) -> list[int]:
        if self.kind == "all":
            return list(range(1, n))
        if self.kind == "list":
            bad = [k for k in self.values if not 1 <= k <= n]
            if bad:
                raise ConfigError(f"k: values {bad} outside [1, {n}] for n={n}")
            return sorted(set(self.values))
        return sorted({max(1, math.floor(f * n)) for f in self.values})

    @classmethod
    def parse(cls, raw) -> "KRule":
        if raw is None or raw == "all":
            return cls()
        if isinstance(raw, dict):
            if set(raw) != {"fractions"}:
                raise ConfigError("k: object form must be {\"fractions\": [...]}")
            return cls._fractions(raw["fractions"])
        if isinstance(raw, str):
            if raw.startswith("frac:"):
                return cls._fractions(_float_list(raw[5:], "k"))
            raw = _int_list(raw, "k")
        if isinstance(raw, int):
            raw = [raw]
        try:
            vals = tuple(int(v) for v in raw)
        except (TypeError, ValueError):
            raise ConfigError(f"k: cannot parse {raw!r}") from None
        if not vals:
            raise ConfigError("k: empty list")
        return cls("list", vals)

    @classmethod
    def _fractions(cls, vals) -> "KRule":
        vals = tuple(float(v) for v in vals)
        if not vals or any(not 0.0 < f < 1.0 for f in vals):
            raise ConfigError("k: fractions must be nonempty and lie in (0, 1)")
        return cls("fractions", vals)


def _int_list(raw, name: str) -> list[int]:
    if isinstance(raw, str):
        raw = [x for x in raw.replace(" ", "").split(",") if x]
    try:
        return [int(x) for x in raw]
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected a list of integers, got {raw!r}") from None


def _float_list(raw, name: str) -> list[float]:
    if isinstance(raw, str):
        raw = [x for x in raw.replace(" ", "").split(",") if x]
    try:
        return [float(x) for x in raw]
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected a list of numbers, got {raw!r}") from None


def parse_family(raw) -> FamilySpec:
    """Accepts a FamilySpec dict or ``kind[:key=value,...]``, e.g. ``iid:p=0.3``."""
    try:
        if isinstance(raw, FamilySpec):
            return raw
        if isinstance(raw, dict):
            return FamilySpec.from_dict(raw)
        kind, _, rest = str(raw).partition(":")
        params, seed = {}, None
        for item in filter(None, rest.split(",")):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"expected key=value, got {item!r}")
            num = float(val)
            num = int(num) if num.is_integer() and "." not in val else num
            if key == "seed":
                seed = int(val)
            else:
                params[key] = num
        return FamilySpec(kind, params, seed)
    except ValueError as exc:
        raise ConfigError(f"family: {exc}") from None


@dataclass(frozen=True)
class SweepConfig:
    families: tuple[FamilySpec, ...]
    n_grid: tuple[int, ...]
    k_rule: KRule = field(default_factory=KRule)
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if not self.families:
            raise ConfigError("families: at least one family is required")
        if not self.n_grid:
            raise ConfigError("n_grid: must be nonempty")
        if any(n < 2 for n in self.n_grid):
            raise ConfigError("n_grid: every n must be >= 2")
        if list(self.n_grid) != sorted(set(self.n_grid)):
            raise ConfigError("n_grid: must be sorted ascending without duplicates")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format: must be csv or json, got {self.format!r}")
        for n in self.n_grid:
            self.k_rule.resolve(n)

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        unknown = set(d) - {"families", "n_grid", "k", "output_path", "format"}
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        fams = d.get("families") or []
        if isinstance(fams, (str, dict)):
            fams = [fams]
        return cls(
            families=tuple(parse_family(f) for f in fams),
            n_grid=tuple(_int_list(d.get("n_grid", []), "n_grid")),
            k_rule=KRule.parse(d.get("k", "all")),
            output_path=d.get("output_path"),
            format=d.get("format", "csv"),
        )


# ---------------------------------------------------------------- sweep

@dataclass(frozen=True)
class SweepRow:
    family: str
    report: BoundReport

    def as_dict(self) -> dict:
        return {"family": self.family, **asdict(self.report)}


@dataclass
class SweepResult:
    rows: list[SweepRow]

    @property
    def violations(self) -> list[SweepRow]:
        return [r for r in self.rows if not r.report.divergence_nats <= r.report.theorem_bound]


def run_sweep(config: SweepConfig) -> SweepResult:
    cells = [(fam, n) for fam in config.families for n in config.n_grid]

    def cell(item):
        fam, n = item
        pi = generate(fam, n)
        return [SweepRow(fam.label, engine.bound_report(pi, k)) for k in config.k_rule.resolve(n)]

    rows = [r for chunk in _pmap(cell, cells) for r in chunk]
    rows.sort(key=lambda r: (r.family, r.report.n, r.report.k))
    return SweepResult(rows)


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def to_csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def to_json(rows: list[dict], **extra) -> str:
    payload = {**{k: _jsonable(v) for k, v in extra.items()},
               "rows": [{k: _jsonable(v) for k, v in r.items()} for r in rows]}
    return json.dumps(payload, indent=1, allow_nan=False) + "\n"


# ---------------------------------------------------------------- verify

def named_bank() -> list[FamilySpec]:
    """The named families every acceptance sweep runs over."""
    return [iid(0.3), iid(0.5), point_mass(frac=0.5), polya(1, 1), polya(2, 5), uniform_counts()]


def family_bank(n_random: int = 10, base_seed: int = 0) -> list[FamilySpec]:
    return named_bank() + [random_dirichlet(base_seed + s) for s in range(n_random)]


@dataclass
class SuiteResult:
    name: str
    tolerance: float
    max_deviation: float = 0.0
    cases: int = 0

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def record(self, dev: float) -> None:
        self.cases += 1
        if not dev <= self.max_deviation:  # also propagates nan
            self.max_deviation = dev if not math.isnan(dev) else math.inf


def oracle_suites(max_n: int, seeds: int) -> list[SuiteResult]:
    marg = SuiteResult("oracle-marginal", 1e-12)
    div = SuiteResult("oracle-divergence", 1e-9)
    tv = SuiteResult("oracle-tv", 1e-10)
    mi = SuiteResult("oracle-conditional-mi", 1e-10)
    cd = SuiteResult("oracle-conditional-divergence", 1e-10)
    for n in range(2, max_n + 1):
        for fam in family_bank(seeds):
            pi = generate(fam, n)
            joint = oracle.enumerate_joint(pi)
            for k in range(1, n + 1):
                q = oracle.oracle_marginal(joint, range(1, k + 1))
                eng = engine.marginal_weight_pmf(pi, k).sequence_probs()
                marg.record(float(np.max(np.abs(q - eng))))
                mix = oracle.oracle_mixture(pi, k)
                d, t = engine.divergence_and_tv(pi, k)
                div.record(abs(d - relative_entropy(q, mix)))
                tv.record(abs(t - math.fsum(np.abs(q - mix))))
        # conditional quantities do not depend on pi; uniform counts charge every ell
        joint = oracle.enumerate_joint(generate(uniform_counts(), n))
        table = engine.cmi_table(n)
        cdt = engine.conditional_divergence_table(n)
        for ell in range(n + 1):
            for k in range(2, n + 1):
                pairs = range(1, k) if n <= 12 else sorted({1, k - 1})
                for i in pairs:
                    mi.record(abs(table[ell, k - i] - oracle.oracle_conditional_mi(joint, i, k, ell)))
            for k in range(1, n + 1):
                cd.record(abs(cdt[ell, k] - oracle.oracle_conditional_divergence(n, ell, k)))
    return [marg, div, tv, mi, cd]


def chain_rule_suite(ns) -> SuiteResult:
    res = SuiteResult("chain-rule", 1e-10)
    for n in ns:
        cmi = engine.cmi_table(n)
        cdt = engine.conditional_divergence_table(n)
        # sum_{i=1}^{k-1} I(X_i; X_{i+1..k}) = sum_{m=1}^{k-1} T[:, m]
        partial = np.concatenate([np.zeros((n + 1, 1)), np.cumsum(cmi, axis=1)], axis=1)
        dev = np.abs(cdt[:, 1:] - partial[:, 1:n + 1])
        res.cases += dev.size
        res.max_deviation = max(res.max_deviation, float(dev.max()))
    return res


def convexity_suite(ns, bank) -> SuiteResult:
    res = SuiteResult("convexity-step", 1e-10)
    for n in ns:
        cdt = engine.conditional_divergence_table(n)
        for fam in bank:
            pi = generate(fam, n)
            for k in range(1, n + 1):
                rhs = math.fsum(pi.mass * cdt[:, k])
                res.record(max(0.0, engine.divergence_to_mixture(pi, k) - rhs))
    return res


def eq4_suite(ns) -> SuiteResult:
    """MI <= three-term total <= lemma bound for k <= n/2; deviation is the worst excess."""
    res = SuiteResult("eq4-domination", 1e-12)
    for n in ns:
        cmi = engine.cmi_table(n)
        logn = math.log(n)
        ell = np.arange(1, n)[:, None]
        for k in range(2, n // 2 + 1):
            i = np.arange(1, k)[None, :]
            m = k - i
            interior = 2.0 * ell * m * logn / (n * (n - m))
            total = interior + k / n + 2.0 * k * logn / (n - k)
            mi = cmi[1:n, k - i[0]]
            lemma = engine.bound_values(n, k).lemma_bound
            excess = max(float(np.max(mi - total)), float(np.max(total)) - lemma, 0.0)
            res.cases += mi.size
            res.max_deviation = max(res.max_deviation, excess)
    return res


def run_verify(max_n: int, seeds: int) -> list[SuiteResult]:
    if not 1 <= max_n <= oracle.MAX_N:
        raise ConfigError(f"max_n: must lie in [1, {oracle.MAX_N}], got {max_n}")
    if seeds < 0:
        raise ConfigError("seeds: must be >= 0")
    ns = range(2, max_n + 1)
    suites = oracle_suites(max_n, seeds)
    suites.append(chain_rule_suite(ns))
    suites.append(convexity_suite(ns, family_bank(seeds)))
    suites.append(eq4_suite(ns))
    return suites


# ---------------------------------------------------------------- rate / converge / extremal

@dataclass
class RateResult:
    family: str
    k: int
    rows: list[dict]
    slope: float | None
    note: str = ""


def run_rate(spec: FamilySpec, k: int, n_grid) -> RateResult:
    n_grid = list(n_grid)
    if not n_grid:
        raise ConfigError("n_grid: must be nonempty")
    if k < 1 or any(n <= k for n in n_grid):
        raise ConfigError(f"k: need 1 <= k < min(n_grid), got k={k}")
    tvs = _pmap(lambda n: engine.tv_to_mixture(generate(spec, n), k), n_grid)
    rows = [{"n": n, "k": k, "tv": t} for n, t in zip(n_grid, tvs)]
    if len(n_grid) < 2:
        return RateResult(spec.label, k, rows, None, "need at least two grid points for a slope")
    if any(t <= 0.0 for t in tvs):
        return RateResult(spec.label, k, rows, None, "degenerate fit: some TV values are 0")
    slope = float(np.polyfit(np.log(n_grid), np.log(tvs), 1)[0])
    return RateResult(spec.label, k, rows, slope)


def run_converge(a: float, b: float, k: int, n_grid) -> list[dict]:
    n_grid = list(n_grid)
    if not (a > 0 and b > 0):
        raise ConfigError("a, b: urn weights must be > 0")
    if not n_grid or n_grid != sorted(set(n_grid)):
        raise ConfigError("n_grid: must be nonempty, ascending, without duplicates")
    if not 1 <= k < n_grid[0]:
        raise ConfigError(f"k: need 1 <= k < min(n_grid), got k={k}")
    spec = polya(a, b)

    def one(n):
        pi = generate(spec, n)
        return {"n": n, "k": k, "divergence_nats": engine.divergence_to_mixture(pi, k),
                "theorem_bound": engine.bound_values(n, k).theorem_bound}

    return _pmap(one, n_grid)


@dataclass
class ExtremalResult:
    n: int
    k: int
    argmax: str
    ratio: float
    divergence_nats: float
    theorem_bound: float

    @property
    def gap(self) -> float:
        return self.theorem_bound - self.divergence_nats


def run_extremal(n: int, k: int, seeds: int = 32, base_seed: int = 0) -> ExtremalResult:
    if n < 2 or not 1 <= k < n:
        raise ConfigError(f"need n >= 2 and 1 <= k < n, got n={n}, k={k}")
    cands = [point_mass(ell) for ell in range(n + 1)]
    cands += [random_dirichlet(base_seed + s) for s in range(seeds)]
    reports = _pmap(lambda fam: engine.bound_report(generate(fam, n), k), cands)
    best = max(range(len(cands)), key=lambda j: (reports[j].ratio, -j))
    r = reports[best]
    return ExtremalResult(n, k, cands[best].label, r.ratio, r.divergence_nats, r.theorem_bound)
