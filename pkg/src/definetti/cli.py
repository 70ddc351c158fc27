"""Command-line entry point: ``definetti {sweep,verify,rate,converge,extremal}``.

Exit codes: 0 success, 1 an inequality or verification suite failed,
2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .harness import ConfigError

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 1, 2


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="definetti", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, fmt=True):
        sp.add_argument("--config", metavar="PATH", help="JSON file; explicit flags override it")
        if fmt:
            sp.add_argument("--format", choices=("csv", "json"), default=None)
            sp.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    sp = sub.add_parser("sweep", help="evaluate divergence and bounds over families x n x k")
    common(sp)
    sp.add_argument("--family", action="append", help="e.g. iid:p=0.3, point_mass:frac=0.5, "
                    "polya:a=1,b=1, uniform_counts, random_dirichlet:seed=7 (repeatable)")
    sp.add_argument("--n-grid", help="comma-separated n values")
    sp.add_argument("--k", help="'all', comma-separated ints, or frac:0.25,0.5")
    sp.add_argument("--seed", type=int, help="seed for random_dirichlet families given without one")

    sp = sub.add_parser("verify", help="engine vs. brute-force oracle and proof-step identities")
    common(sp, fmt=False)
    sp.add_argument("--max-n", type=int)
    sp.add_argument("--seeds", type=int, help="number of random Dirichlet instances")

    sp = sub.add_parser("rate", help="log-log slope of TV against n")
    common(sp)
    sp.add_argument("--family")
    sp.add_argument("--k", type=int)
    sp.add_argument("--n-grid")
    sp.add_argument("--seed", type=int)

    sp = sub.add_parser("converge", help="divergence along a Polya urn as n grows")
    common(sp)
    sp.add_argument("--a", type=float)
    sp.add_argument("--b", type=float)
    sp.add_argument("--k", type=int)
    sp.add_argument("--n-grid")

    sp = sub.add_parser("extremal", help="largest divergence/bound ratio over point masses and random laws")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--seeds", type=int)
    sp.add_argument("--seed", type=int, help="first random Dirichlet seed")
    return p


_DEFAULTS = {
    "verify": {"max_n": 10, "seeds": 5},
    "rate": {"family": "iid:p=0.3", "k": 4, "n_grid": "32,64,128,256,512,1024"},
    "converge": {"a": 1.0, "b": 1.0, "k": 3, "n_grid": "8,16,32,64,128,256,512"},
    "extremal": {"seeds": 32, "seed": 0},
}


def _merge_config(args) -> dict:
    opts = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: {args.config} is not valid JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config: top level must be a JSON object")
    merged = dict(_DEFAULTS.get(args.command, {}))
    merged.update(cfg)
    merged.update({k: v for k, v in opts.items() if v is not None})
    return merged


def _family_with_seed(raw, seed):
    fam = raw
    if seed is not None and isinstance(raw, str) and raw.split(":")[0] == "random_dirichlet" \
            and "seed=" not in raw:
        fam = f"random_dirichlet:seed={seed}"
    return harness.parse_family(fam)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"output: cannot write {path}: {exc.strerror}") from None


def _require(opts: dict, *names):
    missing = [n for n in names if opts.get(n) is None]
    if missing:
        raise ConfigError(f"{missing[0]}: required")


def _cmd_sweep(opts) -> int:
    fams = opts.get("families") or opts.get("family") or []
    if isinstance(fams, (str, dict)):
        fams = [fams]
    seed = opts.get("seed")
    config = harness.SweepConfig(
        families=tuple(_family_with_seed(f, seed) for f in fams),
        n_grid=tuple(harness._int_list(opts.get("n_grid") or [], "n_grid")),
        k_rule=harness.KRule.parse(opts.get("k", "all")),
        output_path=opts.get("out") or opts.get("output_path"),
        format=opts.get("format") or "csv",
    )
    result = harness.run_sweep(config)
    rows = [r.as_dict() for r in result.rows]
    if config.format == "csv":
        text = harness.to_csv(rows, harness.SWEEP_COLUMNS)
    else:
        text = harness.to_json(rows, violations=len(result.violations))
    _emit(text, config.output_path)
    for r in result.violations:
        print(f"violation: {r.family} n={r.report.n} k={r.report.k} "
              f"D={r.report.divergence_nats!r} > {r.report.theorem_bound!r}", file=sys.stderr)
    return EXIT_VIOLATION if result.violations else EXIT_OK


def _cmd_verify(opts) -> int:
    suites = harness.run_verify(int(opts["max_n"]), int(opts["seeds"]))
    width = max(len(s.name) for s in suites)
    for s in suites:
        status = "PASS" if s.passed else "FAIL"
        print(f"{status}  {s.name:<{width}}  max_dev={s.max_deviation:.3e}  "
              f"tol={s.tolerance:.0e}  cases={s.cases}")
    return EXIT_OK if all(s.passed for s in suites) else EXIT_VIOLATION


def _cmd_rate(opts) -> int:
    fam = _family_with_seed(opts["family"], opts.get("seed"))
    res = harness.run_rate(fam, int(opts["k"]), harness._int_list(opts["n_grid"], "n_grid"))
    if (opts.get("format") or "csv") == "csv":
        text = harness.to_csv(res.rows, ("n", "k", "tv"))
        text += f"# slope={'' if res.slope is None else format(res.slope, '.17g')}\n"
    else:
        text = harness.to_json(res.rows, family=res.family, slope=res.slope, note=res.note)
    _emit(text, opts.get("out"))
    if res.note:
        print(res.note, file=sys.stderr)
    return EXIT_OK


def _cmd_converge(opts) -> int:
    rows = harness.run_converge(float(opts["a"]), float(opts["b"]), int(opts["k"]),
                                harness._int_list(opts["n_grid"], "n_grid"))
    if (opts.get("format") or "csv") == "csv":
        text = harness.to_csv(rows, ("n", "k", "divergence_nats", "theorem_bound"))
    else:
        text = harness.to_json(rows)
    _emit(text, opts.get("out"))
    bad = [r for r in rows if not r["divergence_nats"] <= r["theorem_bound"]]
    return EXIT_VIOLATION if bad else EXIT_OK


def _cmd_extremal(opts) -> int:
    _require(opts, "n", "k")
    res = harness.run_extremal(int(opts["n"]), int(opts["k"]), int(opts["seeds"]), int(opts["seed"]))
    row = {"n": res.n, "k": res.k, "argmax": res.argmax, "ratio": res.ratio,
           "divergence_nats": res.divergence_nats, "theorem_bound": res.theorem_bound,
           "gap": res.gap}
    if (opts.get("format") or "csv") == "csv":
        text = harness.to_csv([row], tuple(row))
    else:
        text = harness.to_json([row])
    _emit(text, opts.get("out"))
    return EXIT_OK if res.ratio <= 1.0 else EXIT_VIOLATION


_COMMANDS = {
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "rate": _cmd_rate,
    "converge": _cmd_converge,
    "extremal": _cmd_extremal,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](_merge_config(args))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
