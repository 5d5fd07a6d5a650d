"""Command-line surface: verifications, function evaluation, experiments.

Four machine-oriented output shapes: theorem and experiment reports as
versioned JSON, function tables and curves as CSV, and a Markdown digest
aggregated from saved JSON.  Every run is deterministic for a fixed set of
inputs, independent of the thread-count hint.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import experiments, theorems
from .experiments import SmoothWeight
from .primes import PrimeTable, sieve_primes
from .reports import ExperimentReport, markdown_summary, to_json
from .sieve_functions import (BuchstabTable, SieveFunctionTable, buchstab_w,
                              build_buchstab_table, build_sieve_tables,
                              eval_F, eval_f, selberg_sigma2)

FUNCTION_NAMES = ("F", "f", "w", "sigma2", "gamma_theta")
EXPERIMENT_NAMES = ("q-ell", "q-ell-u", "phi", "phi-coprime", "a-d", "bv",
                    "wolke", "chebyshev", "bt", "weil", "square-sieve",
                    "weighted", "almost-prime", "gpf", "dartyge")

DEFAULTS = {
    "X": 10000, "ell": 5, "u": 11.2, "theta0": 0.9926, "vartheta": 0.847,
    "theta": 0.55, "alpha": 1.0 / 12.0, "beta": 0.622, "r": 4, "k": 1,
    "z": 10.0, "d": 1, "a": 1, "L": 4, "p": 3, "q": 5, "m": 1,
    "weight": "sharp", "epsilon0": 0.1, "table_step": 1e-4,
    "beta_step": 1e-3, "step": 0.01,
}

_CONFIG_COERCE = {
    "X": int, "ell": int, "r": int, "k": int, "d": int, "a": int, "L": int,
    "p": int, "q": int, "m": int, "max_pq": int, "threads": int,
    "u": float, "theta0": float, "vartheta": float, "theta": float,
    "alpha": float, "beta": float, "z": float, "epsilon0": float,
    "table_step": float, "beta_step": float, "step": float,
    "min": float, "max": float,
    "weight": str, "out": str,
}


class ConfigError(ValueError):
    """Bad key or unparsable value in a config file."""


def _load_config(path: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_COERCE:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            entries[key] = value
    return entries


def _apply_config(args: argparse.Namespace, config: dict[str, str]) -> None:
    """Fill unset options from the config file; flags always win."""
    for key, raw in config.items():
        if not hasattr(args, key) or getattr(args, key) is not None:
            continue
        try:
            setattr(args, key, _CONFIG_COERCE[key](raw))
        except ValueError as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from exc


def _apply_defaults(args: argparse.Namespace) -> None:
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


_PRIME_TABLE: PrimeTable | None = None


def _prime_table(limit: int) -> PrimeTable:
    global _PRIME_TABLE
    if _PRIME_TABLE is None or _PRIME_TABLE.limit < limit:
        _PRIME_TABLE = sieve_primes(limit)
    return _PRIME_TABLE


def _function_tables(step: float) -> tuple[SieveFunctionTable, BuchstabTable]:
    return build_sieve_tables(step=step), build_buchstab_table(step=step)


# ---------------------------------------------------------------------------
# verify

def _cmd_verify(args: argparse.Namespace) -> int:
    reports = []
    targets = ("thm1", "thm2", "thm3") if args.target == "all" \
        else (args.target,)
    for target in targets:
        if target == "thm2":
            reports.append(theorems.theorem2_integral(args.vartheta))
        elif target == "thm1":
            ftable, _ = _function_tables(args.table_step)
            delta = min(theorems.solve_delta(), args.beta)
            params = theorems.WeightedSieveParams(
                alpha=args.alpha, beta=args.beta, delta=delta, r=args.r)
            reports.append(theorems.compute_C(params, ftable))
        else:
            ftable, wtable = _function_tables(args.table_step)
            reports.append(theorems.dartyge_margin(args.u, args.theta0,
                                                   ftable, wtable))
    payload = reports[0] if len(reports) == 1 else reports
    _emit(to_json(payload), args.out)
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# functions

def _function_value(name: str, x: float | Fraction,
                    step: float) -> float:
    if name == "sigma2":
        return selberg_sigma2(float(x))
    if name == "gamma_theta":
        return float(theorems.gamma_theta(x))
    ftable, wtable = _function_tables(step)
    if name == "F":
        return eval_F(float(x), ftable)
    if name == "f":
        return eval_f(float(x), ftable)
    return buchstab_w(float(x), wtable)


_TABLE_RANGES = {"F": (1.0, 12.0), "f": (0.5, 12.0), "w": (1.0, 12.0),
                 "sigma2": (0.1, 2.0), "gamma_theta": (0.5, 0.94)}


def _cmd_functions(args: argparse.Namespace) -> int:
    if args.action == "eval":
        x = Fraction(args.x) if args.name == "gamma_theta" else float(args.x)
        value = _function_value(args.name, x, args.table_step)
        _emit(f"{value:.17g}\n", args.out)
        return 0
    lo_default, hi_default = _TABLE_RANGES[args.name]
    lo = lo_default if args.min is None else args.min
    hi = hi_default if args.max is None else args.max
    if not (hi > lo and args.step > 0):
        raise ValueError(f"bad table range [{lo}, {hi}] at step {args.step}")
    count = int(math.floor((hi - lo) / args.step + 1e-9)) + 1
    lines = ["x,value"]
    for i in range(count):
        x = lo + i * args.step
        value = _function_value(args.name, x, args.table_step)
        lines.append(f"{x:.6f},{value:.17g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# empirical

def _scalar_report(name: str, params: dict, value: float,
                   extra: dict | None = None) -> ExperimentReport:
    aggregates = {"value": value}
    if extra:
        aggregates.update(extra)
    return ExperimentReport(name=name, params=params, aggregates=aggregates)


def _run_experiment(args: argparse.Namespace):
    """Returns (report, hard_invariants_ok)."""
    w = SmoothWeight(mode=args.weight, epsilon0=args.epsilon0)
    name = args.experiment
    if name == "weil":
        if args.max_pq is not None:
            report = experiments.weil_exhaustive(args.max_pq)
            return report, report.counters["violations"] == 0
        report = experiments.weil_sum_check(args.p, args.q, args.m)
        ok = bool(report.counters["degenerate"]
                  or report.counters["bound_holds"])
        return report, ok

    table = _prime_table(max(2 * args.X, 10 ** 5))
    X = args.X
    if name == "q-ell":
        value = experiments.Q_ell(X, args.ell, w, table)
        params = {"X": X, "ell": args.ell, "weight": args.weight}
        if args.oracle:
            brute = experiments.Q_ell_brute(X, args.ell, w, table)
            report = ExperimentReport(
                name="q_ell", params=params, aggregates={"value": value},
                residuals={"fast_vs_brute": abs(value - brute)})
            return report, report.residuals["fast_vs_brute"] == 0.0
        return _scalar_report("q_ell", params, value), True
    if name == "q-ell-u":
        value = experiments.Q_ell_u(X, args.ell, args.u, w, table)
        return _scalar_report("q_ell_u", {"X": X, "ell": args.ell,
                                          "u": args.u,
                                          "weight": args.weight}, value), True
    if name == "phi":
        value = experiments.phi_sifted(X, args.z, args.d, args.a, w, table)
        return _scalar_report("phi_sifted", {"X": X, "z": args.z,
                                             "d": args.d, "a": args.a,
                                             "weight": args.weight}, value), \
            True
    if name == "phi-coprime":
        value = experiments.phi_sifted_coprime(X, args.z, args.d, w, table)
        return _scalar_report("phi_sifted_coprime",
                              {"X": X, "z": args.z, "d": args.d,
                               "weight": args.weight}, value), True
    if name == "a-d":
        value = experiments.A_d_count(X, args.ell, args.d, w, table)
        r_d = experiments.r_d_error(X, args.ell, args.d, w, table)
        return _scalar_report("a_d_count", {"X": X, "ell": args.ell,
                                            "d": args.d,
                                            "weight": args.weight},
                              value, {"r_d": r_d}), True
    if name == "bv":
        return experiments.bv_error_average(X, args.k, w, table), True
    if name == "wolke":
        return experiments.wolke_error_average(X, args.z, args.k, w,
                                               table), True
    if name == "chebyshev":
        report = experiments.chebyshev_decomposition(X, args.vartheta, w,
                                                     table)
        return report, report.residuals["identity_rel"] <= 1e-9
    if name == "bt":
        return experiments.bt_exception_count(X, args.theta, w, table), True
    if name == "square-sieve":
        count = experiments.square_sieve_count(X, args.L, table)
        report = ExperimentReport(name="square_sieve_count",
                                  params={"X": X, "L": args.L},
                                  counters={"count": count})
        return report, True
    if name == "weighted":
        delta = min(theorems.solve_delta(), args.beta)
        params = theorems.WeightedSieveParams(
            alpha=args.alpha, beta=args.beta, delta=delta, r=args.r)
        report = experiments.weighted_sieve_experiment(X, params, w, table)
        ok = (report.residuals["psi_identity_rel"] <= 1e-9
              and report.counters["weight_bound_violations"] == 0)
        return report, ok
    if name == "almost-prime":
        return experiments.almost_prime_survey(X, args.r, table, w), True
    if name == "gpf":
        return experiments.gpf_survey(X, args.vartheta, table), True
    return experiments.dartyge_survey(X, args.u, table), True


def _cmd_empirical(args: argparse.Namespace) -> int:
    report, ok = _run_experiment(args)
    _emit(to_json(report), args.out)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# plot-data and report

def _cmd_plot_data(args: argparse.Namespace) -> int:
    ftable, _ = _function_tables(args.table_step)
    beta_star, _c_star, curve = theorems.optimize_beta(
        args.r, args.alpha, ftable, step=args.beta_step,
        threads=args.threads)
    lines = ["beta,C,is_max"]
    for beta, c in curve:
        lines.append(f"{beta:.6f},{c:.17g},{int(beta == beta_star)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    payloads = []
    for path in args.files:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        if data.get("schema") != 1:
            raise ValueError(f"{path}: missing or unsupported schema tag")
        if "reports" in data:
            payloads.extend(data["reports"])
        else:
            payloads.append({k: v for k, v in data.items() if k != "schema"})
    _emit(markdown_summary(payloads), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser assembly

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sievekit",
        description="Verified sieve constants and window experiments for "
                    "quadratic values at prime arguments.")
    parser.add_argument("--config", help="key = value parameter file")
    parser.add_argument("--out", help="write output to this path")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker hint (default SIEVEKIT_THREADS or 1)")

    # The same flags are accepted after the subcommand; SUPPRESS keeps an
    # absent trailing flag from clobbering a value parsed at the front.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run theorem verifications",
                            parents=[common])
    verify.add_argument("target", choices=("thm1", "thm2", "thm3", "all"))
    for flag, kind in (("--vartheta", float), ("--u", float),
                       ("--theta0", float), ("--alpha", float),
                       ("--beta", float)):
        verify.add_argument(flag, type=kind, default=None)
    verify.add_argument("--r", type=int, default=None)
    verify.add_argument("--table-step", dest="table_step", type=float,
                        default=None)

    func = sub.add_parser("functions", help="evaluate or dump sieve functions")
    fsub = func.add_subparsers(dest="action", required=True)
    feval = fsub.add_parser("eval", parents=[common])
    feval.add_argument("name", choices=FUNCTION_NAMES)
    feval.add_argument("x")
    feval.add_argument("--table-step", dest="table_step", type=float,
                       default=None)
    ftab = fsub.add_parser("table", parents=[common])
    ftab.add_argument("name", choices=FUNCTION_NAMES)
    ftab.add_argument("--min", type=float, default=None)
    ftab.add_argument("--max", type=float, default=None)
    ftab.add_argument("--step", type=float, default=None)
    ftab.add_argument("--table-step", dest="table_step", type=float,
                      default=None)

    emp = sub.add_parser("empirical", help="run a window experiment",
                         parents=[common])
    emp.add_argument("experiment", choices=EXPERIMENT_NAMES)
    emp.add_argument("--X", type=int, default=None)
    for flag in ("--ell", "--k", "--d", "--a", "--L", "--p", "--q", "--m",
                 "--r"):
        emp.add_argument(flag, type=int, default=None)
    for flag in ("--u", "--z", "--theta", "--vartheta", "--alpha", "--beta",
                 "--epsilon0"):
        emp.add_argument(flag, type=float, default=None)
    emp.add_argument("--weight", choices=("sharp", "bump", "plateau"),
                     default=None)
    emp.add_argument("--oracle", action="store_true",
                     help="also run the brute-force path and compare")
    emp.add_argument("--max-pq", dest="max_pq", type=int, default=None,
                     help="weil only: exhaustive scan over pq up to this")

    plot = sub.add_parser("plot-data", help="emit curve data as CSV",
                          parents=[common])
    plot.add_argument("curve", choices=("c-beta",))
    plot.add_argument("--r", type=int, default=None)
    plot.add_argument("--alpha", type=float, default=None)
    plot.add_argument("--beta-step", dest="beta_step", type=float,
                      default=None)
    plot.add_argument("--table-step", dest="table_step", type=float,
                      default=None)

    rep = sub.add_parser("report", help="aggregate JSON reports to Markdown",
                         parents=[common])
    rep.add_argument("files", nargs="+")
    return parser


_DISPATCH = {"verify": _cmd_verify, "functions": _cmd_functions,
             "empirical": _cmd_empirical, "plot-data": _cmd_plot_data,
             "report": _cmd_report}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if args.config:
            _apply_config(args, _load_config(args.config))
        _apply_defaults(args)
        return _DISPATCH[args.command](args)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
