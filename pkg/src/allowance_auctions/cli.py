"""Command-line harness: run, certify, bench and generate.

Exit codes: 0 success / certified, 1 invalid input or configuration,
2 certification or bound failure, 3 unexpected runtime error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import instance_io
from .generators import GenerationError, parse_generator_spec
from .mechanisms import MECHANISMS, NEEDS_EPSILON, get_mechanism
from .model import DUMMY, ValidationError, allowance_utility, optimal_welfare, social_welfare
from .rng import instance_rng, make_rng, trial_seed
from .verification import (
    PreconditionError,
    certify_instance,
    check_allocation_monotonicity,
    check_unit_price_monotonicity,
    empirical_ratio,
    exact_concentration_matching,
    exact_concentration_sum,
    mc_concentration_matching,
    mc_concentration_sum,
)
from .verification.lemmas import equal_numbers, zipf_numbers

EXIT_OK, EXIT_INVALID, EXIT_FAILED, EXIT_RUNTIME = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse's own exit code 2 would collide with "certification failed"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- formatting

def _fmt(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    if x is None:
        return "-"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def _csv_cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def _table(rows: list[dict]) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[_fmt(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def render(rows: list[dict], summary: dict, fmt: str) -> str:
    """One report in the chosen format.

    CSV carries a ``record`` column so per-row and summary records share one
    stable header; empty cells mean "not applicable".
    """
    if fmt == "json":
        return json.dumps(_jsonable({"rows": rows, "summary": summary}), indent=2) + "\n"
    if fmt == "csv":
        cols = ["record"] + list(dict.fromkeys([c for r in rows for c in r] + list(summary)))
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({"record": "row", **{k: _csv_cell(v) for k, v in r.items()}})
        w.writerow({"record": "summary", **{k: _csv_cell(v) for k, v in summary.items()}})
        return buf.getvalue()
    out = _table(rows)
    width = max((len(k) for k in summary), default=0)
    out += "".join(f"{k.ljust(width)}  {_fmt(v)}\n" for k, v in summary.items())
    return out


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------ configuration

def _mechanism(args):
    if args.mechanism in NEEDS_EPSILON and args.epsilon is None:
        raise ConfigError(f"mechanism {args.mechanism} requires --epsilon")
    if args.mechanism == "uniform_price" and args.beta is None and args.rho is None:
        raise ConfigError("uniform_price requires --beta or --rho")
    return get_mechanism(args.mechanism, args.epsilon, args.beta, args.rho, args.payment_rule)


def _instances(args, count: int):
    """``count`` instances: the file repeated, or fresh generator draws."""
    if bool(args.instance) == bool(args.generate):
        raise ConfigError("give exactly one of --instance or --generate")
    if args.instance:
        inst = instance_io.load(args.instance)
        return [inst] * count
    make = parse_generator_spec(args.generate)
    return [make(instance_rng(args.seed, t)) for t in range(count)]


def _params(args) -> str:
    parts = []
    for key in ("epsilon", "beta", "rho"):
        val = getattr(args, key, None)
        if val is not None:
            parts.append(f"{key}={_fmt(float(val))}")
    return ";".join(parts)


# ----------------------------------------------------------------- commands

def cmd_run(args) -> int:
    mech = _mechanism(args)
    inst = _instances(args, 1)[0]
    seed = trial_seed(args.seed, 0)
    out = mech.run(inst, seed)
    rows = []
    for i in range(inst.n):
        slot = int(out.assignment[i])
        ctr = out.ctr_of(inst, i)
        pay = float(out.payments[i])
        rows.append({
            "bidder": i,
            "value": float(inst.values[i]),
            "allowance": float(inst.allowances[i]),
            "bid": float(inst.bids[i]),
            "slot": None if slot == DUMMY else slot + 1,
            "ctr": ctr,
            "payment": pay,
            "utility": allowance_utility(float(inst.values[i]), float(inst.allowances[i]), ctr, pay),
        })
    report = optimal_welfare(inst, out)
    alg = social_welfare(inst, out)
    summary = {
        "mechanism": mech.name,
        "params": _params(args),
        "seed": args.seed,
        "branch": out.branch,
        "alg": alg,
        "opt": report.optimal_welfare,
        "ratio": alg / report.optimal_welfare if report.optimal_welfare > 0 else float("nan"),
        "rho_observed": report.rho_observed,
    }
    _emit(render(rows, summary, args.format), args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    mech = _mechanism(args)
    rows = []
    worst = None
    mono_ok = True
    for t, inst in enumerate(_instances(args, args.trials)):
        seed = trial_seed(args.seed, t) if mech.randomized else None
        for rep in certify_instance(mech, inst, seed, grid_fill=args.grid_fill):
            row = {"instance": t, **rep.as_row()}
            if args.monotonicity:
                alloc = check_allocation_monotonicity(mech, inst, rep.bidder, seed=seed)
                unit = check_unit_price_monotonicity(mech, inst, rep.bidder, seed=seed)
                row["allocation_monotone"] = alloc.passed
                row["unit_price_monotone"] = unit.passed
                mono_ok = mono_ok and alloc.passed and unit.passed
            rows.append(row)
            if worst is None or rep.gain > worst[1].gain:
                worst = (t, rep)
    certified = all(r["certified"] for r in rows)
    ok = certified and mono_ok
    summary = {
        "mechanism": mech.name,
        "params": _params(args),
        "seed": args.seed,
        "instances": args.trials,
        "bidders": len(rows),
        "certified": sum(bool(r["certified"]) for r in rows),
        "max_gain": worst[1].gain if worst else 0.0,
        "verdict": "CERTIFIED" if ok else "NOT TRUTHFUL",
    }
    if not certified:
        t, rep = worst
        summary["witness"] = (f"instance {t} bidder {rep.bidder} bids {_fmt(rep.best_bid)} "
                              f"(utility {_fmt(rep.best_utility)} vs {_fmt(rep.truthful_utility)})")
    elif not mono_ok:
        summary["verdict"] = "MONOTONICITY VIOLATED"
    _emit(render(rows, summary, args.format), args.out)
    return EXIT_OK if ok else EXIT_FAILED


def _numbers(spec: str) -> np.ndarray:
    """``equal:200``, ``zipf:200[:exponent]`` or a comma list of numbers."""
    name, _, rest = spec.partition(":")
    try:
        if name == "equal":
            return equal_numbers(int(rest))
        if name == "zipf":
            ell, _, expo = rest.partition(":")
            return zipf_numbers(int(ell), float(expo) if expo else 0.3)
        return np.array([float(x) for x in spec.split(",")])
    except ValueError as exc:
        raise ConfigError(f"bad --numbers spec {spec!r}: {exc}") from exc


def _bench_lemma(args) -> tuple[list, dict]:
    w = _numbers(args.numbers)
    rng = make_rng(trial_seed(args.seed, 0))
    start = time.perf_counter()
    if args.lemma == "sum":
        res = mc_concentration_sum(w, args.trials, rng, check_precondition=not args.no_precondition)
        exact = exact_concentration_sum(w) if len(w) <= 16 else None
        params = f"ell={len(w)}"
    else:
        if args.rho is None:
            raise ConfigError("--lemma matching requires --rho")
        res = mc_concentration_matching(w, args.rho, args.trials, rng,
                                        check_precondition=not args.no_precondition)
        exact = exact_concentration_matching(w, args.rho) if len(w) <= 16 else None
        params = f"ell={len(w)};rho={_fmt(float(args.rho))}"
    row = {
        "lemma": args.lemma,
        "params": params,
        "trials": res.trials,
        "frequency": res.frequency,
        "stderr": res.stderr,
        "bound": res.bound,
        "threshold": res.bound - 3 * res.bound_stderr,
        "precondition": res.precondition_ok,
        "exact": exact,
        "pass": res.passed,
    }
    if args.timing:
        row["runtime"] = time.perf_counter() - start
    return [row], {"verdict": "PASS" if res.passed else "FAIL"}


def _bench_ratio(args) -> tuple[list, dict]:
    mech = _mechanism(args)
    if bool(args.instance) == bool(args.generate):
        raise ConfigError("give exactly one of --instance or --generate")
    source = instance_io.load(args.instance) if args.instance else parse_generator_spec(args.generate)
    start = time.perf_counter()
    stats = empirical_ratio(mech, source, args.trials, args.seed)
    stat_row = stats.as_row()
    del stat_row["mechanism"]
    row = {"mechanism": mech.name, "params": _params(args), **stat_row}
    if args.timing:
        row["runtime"] = time.perf_counter() - start
    return [row], {"verdict": "PASS" if stats.passed else "FAIL"}


def cmd_bench(args) -> int:
    rows, summary = _bench_lemma(args) if args.lemma else _bench_ratio(args)
    _emit(render(rows, summary, args.format), args.out)
    return EXIT_OK if summary["verdict"] == "PASS" else EXIT_FAILED


def cmd_generate(args) -> int:
    if not args.generate:
        raise ConfigError("generate needs --generate <spec>")
    inst = parse_generator_spec(args.generate)(instance_rng(args.seed, 0))
    inst.metadata.setdefault("generator", args.generate)
    inst.metadata.setdefault("seed", args.seed)
    _emit(instance_io.dumps(inst), args.out)
    return EXIT_OK


# ------------------------------------------------------------------- parser

def _common(p: argparse.ArgumentParser, mechanism: bool = True) -> None:
    if mechanism:
        p.add_argument("--mechanism", choices=MECHANISMS + ("vcg_mock",))
        p.add_argument("--epsilon", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--rho", type=float)
        p.add_argument("--payment-rule", choices=("corrected", "literal"), default="corrected",
                       help="payment rule of the public and single-slot auctions")
        p.add_argument("--instance", help="instance JSON file")
    p.add_argument("--generate", help="generator spec, e.g. 'random:n_max=8,k_max=4'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="allowance-auctions", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run one mechanism on one instance")
    _common(p)
    p.set_defaults(func=cmd_run, trials=1)

    p = sub.add_parser("certify", help="search for profitable misreports")
    _common(p)
    p.add_argument("--trials", type=int, default=1, help="number of generated instances")
    p.add_argument("--grid-fill", type=int, default=16)
    p.add_argument("--monotonicity", action="store_true",
                   help="also sweep allocation and unit-price monotonicity")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("bench", help="approximation ratio or lemma frequency")
    _common(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--lemma", choices=("sum", "matching"))
    p.add_argument("--numbers", default="equal:200")
    p.add_argument("--no-precondition", action="store_true",
                   help="run the lemma check even when the dominance premise fails")
    p.add_argument("--timing", action="store_true",
                   help="add a wall-clock runtime column (output no longer reproducible)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("generate", help="write a generated instance file")
    _common(p, mechanism=False)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "mechanism", "x") is None and not getattr(args, "lemma", None):
        parser.error("--mechanism is required")
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be positive")
    try:
        return args.func(args)
    except (ConfigError, ValidationError, GenerationError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - reported as a runtime failure
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
