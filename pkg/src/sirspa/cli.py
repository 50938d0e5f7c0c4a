"""Command-line front end: outage curves, ergodic capacity, method comparison.

Exit codes: 0 ok, 1 config error, 2 numerical failure, 3 comparison bound
exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import replace

from . import analysis
from .analysis import (
    OutageResult,
    ergodic_capacity,
    monte_carlo_capacity,
    outage_curve,
)
from .composite import build_composite
from .config import RunConfig, load_config
from .exceptions import ConfigError, SirspaError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_COMPARE = 3

OUTAGE_HEADER = ("curve,q_db,q_linear,method,p_out,t_hat,iterations,"
                 "near_mean,clamped,error_estimate")
CAPACITY_HEADER = "curve,capacity_bits,method,error_estimate"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _outage_row(label: str, r: OutageResult) -> str:
    return ",".join([
        label, _fmt(r.q_db), _fmt(r.q_linear), r.method, _fmt(r.p_out),
        _fmt(r.t_hat), _fmt(r.iterations), _fmt(r.near_mean),
        _fmt(r.clamped), _fmt(r.error_estimate),
    ])


def _write_lines(path: str | None, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _run_curves(cfg: RunConfig) -> dict[str, dict[str, list[OutageResult]]]:
    """label -> method -> per-grid-point results. Failed points are retried
    once with a larger numerical budget before being reported."""
    out: dict[str, dict[str, list[OutageResult]]] = {}
    retry_quad = replace(cfg.quadrature, max_panels=cfg.quadrature.max_panels * 4,
                         rel_tol=max(cfg.quadrature.rel_tol, 1e-7))
    retry_solver = replace(cfg.solver, max_iter=cfg.solver.max_iter * 4)
    for curve in cfg.curves:
        per_method = {}
        for method in cfg.methods:
            results = outage_curve(curve.template, cfg.grid, method,
                                   cfg.solver, cfg.quadrature, cfg.monte_carlo)
            if any(r.error for r in results):
                retried = outage_curve(curve.template, cfg.grid, method,
                                       retry_solver, retry_quad, cfg.monte_carlo)
                results = [rr if r.error else r for r, rr in zip(results, retried)]
            per_method[method] = results
        out[curve.label] = per_method
    return out


def _max_cross_deviation(per_method: dict[str, list[OutageResult]]):
    methods = sorted(per_method)
    worst = None
    for i, m1 in enumerate(methods):
        for m2 in methods[i + 1:]:
            for r1, r2 in zip(per_method[m1], per_method[m2]):
                if r1.error or r2.error:
                    continue
                dev = abs(r1.p_out - r2.p_out)
                if worst is None or dev > worst[0]:
                    worst = (dev, m1, m2, r1.q_db)
    return worst


def cmd_outage(cfg: RunConfig) -> int:
    by_curve = _run_curves(cfg)
    lines = [OUTAGE_HEADER]
    failed = []
    for label, per_method in by_curve.items():
        for method in cfg.methods:
            for r in per_method[method]:
                lines.append(_outage_row(label, r))
                if r.error:
                    failed.append((label, method, r.q_db, r.error))
    _write_lines(cfg.output_path, lines)
    worst = None
    for per_method in by_curve.values():
        w = _max_cross_deviation(per_method)
        if w and (worst is None or w[0] > worst[0]):
            worst = w
    if worst:
        print(f"max cross-method deviation: {worst[0]:.6g} "
              f"({worst[1]} vs {worst[2]} at q_db={worst[3]:g})")
    if failed:
        for label, method, q_db, err in failed:
            print(f"FAILED {label} {method} q_db={q_db:g}: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_capacity(cfg: RunConfig) -> int:
    lines = [CAPACITY_HEADER]
    code = EXIT_OK
    for curve in cfg.curves:
        for method in cfg.methods:
            try:
                if method == "monte_carlo":
                    cap, err = monte_carlo_capacity(curve.template, cfg.monte_carlo)
                elif method in ("spa", "gil_pelaez"):
                    cap, err = ergodic_capacity(curve.template, method,
                                                cfg.solver, cfg.quadrature)
                else:
                    continue  # closed_form has no capacity counterpart
            except SirspaError as exc:
                print(f"FAILED {curve.label} {method}: {exc}", file=sys.stderr)
                code = EXIT_NUMERICAL
                continue
            lines.append(",".join([curve.label, _fmt(cap), method, _fmt(err)]))
            print(f"{curve.label} {method}: {cap:.6f} bits/s/Hz")
    _write_lines(cfg.output_path, lines)
    return code


def _in_breakdown(template, q_linear: float) -> bool:
    c = build_composite(replace(template, threshold_q=q_linear))
    return abs(c.mean) < 0.05 * math.sqrt(c.variance)


def cmd_compare(cfg: RunConfig) -> int:
    if len(cfg.methods) < 2:
        print("compare needs at least 2 methods", file=sys.stderr)
        return EXIT_CONFIG
    by_curve = _run_curves(cfg)
    for per_method in by_curve.values():
        for method, results in per_method.items():
            for r in results:
                if r.error:
                    print(f"FAILED {method} q_db={r.q_db:g}: {r.error}",
                          file=sys.stderr)
                    return EXIT_NUMERICAL
    methods = list(cfg.methods)
    exceeded = False
    print("curve,method_a,method_b,max_abs_dev,mean_abs_dev,bound,ok")
    for curve in cfg.curves:
        per_method = by_curve[curve.label]
        for i, m1 in enumerate(methods):
            for m2 in methods[i + 1:]:
                devs, bounds = [], []
                for r1, r2 in zip(per_method[m1], per_method[m2]):
                    devs.append(abs(r1.p_out - r2.p_out))
                    pair_bound = cfg.compare.bounds.get(
                        f"{m1},{m2}", cfg.compare.bounds.get(
                            f"{m2},{m1}", cfg.compare.default_bound))
                    if _in_breakdown(curve.template, r1.q_linear):
                        pair_bound = max(pair_bound, cfg.compare.breakdown_bound)
                    if "monte_carlo" in (m1, m2):
                        se = (r1.error_estimate if m1 == "monte_carlo"
                              else r2.error_estimate) or 0.0
                        pair_bound = max(pair_bound, cfg.compare.mc_std_errors * se)
                    bounds.append(pair_bound)
                ok = all(d <= b for d, b in zip(devs, bounds))
                if not ok:
                    exceeded = True
                print(",".join([
                    curve.label, m1, m2, _fmt(max(devs)),
                    _fmt(sum(devs) / len(devs)), _fmt(min(bounds)),
                    "true" if ok else "false",
                ]))
    return EXIT_COMPARE if exceeded else EXIT_OK


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if args.output is not None:
        cfg = dataclasses.replace(cfg, output_path=args.output)
    if args.format is not None:
        cfg = dataclasses.replace(cfg, output_format=args.format)
    if args.seed is not None:
        cfg = dataclasses.replace(
            cfg, monte_carlo=replace(cfg.monte_carlo, seed=args.seed))
    if args.method is not None:
        methods = tuple(m.strip() for m in args.method.split(",") if m.strip())
        unknown = [m for m in methods if m not in analysis.METHODS]
        if unknown:
            raise ConfigError(f"unknown method(s) {unknown}")
        cfg = dataclasses.replace(cfg, methods=methods)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sirspa",
        description="SIR/SINR outage probability via saddlepoint approximation")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("outage", "outage probability over a threshold grid"),
        ("capacity", "ergodic capacity per scenario"),
        ("compare", "cross-method deviation report"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="JSON run configuration")
        p.add_argument("--output", help="output file path (default from config)")
        p.add_argument("--format", choices=["csv"], help="output format")
        p.add_argument("--seed", type=int, help="Monte Carlo seed override")
        p.add_argument("--method", help="comma-separated method override")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = _apply_overrides(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "outage":
            return cmd_outage(cfg)
        if args.command == "capacity":
            return cmd_capacity(cfg)
        return cmd_compare(cfg)
    except SirspaError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
