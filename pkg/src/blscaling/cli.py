"""Command-line interface.

Exit status: 0 success, 1 partial (some files or runs failed), 2 fatal.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .core import BLScalingError, VelocityProfile
from .diagnostics import format_table
from .fitting import fit_log_law
from .io import DATA_DIR_ENV, DEFAULT_GLOB, Catalog, load_catalog, read_profile, sort_profiles, write_profile
from .pipeline import LogLawWindow, PipelineConfig, run_pipeline
from .report import ALL_OUTPUTS, dumps_report, emit_outputs, gamma_ensemble_text, result_to_dict, table_csv
from .scaling import collapse_profile, pooled_rms
from .synth import SynthSpec, generate_ensemble

log = logging.getLogger("blscaling")

EXIT_OK, EXIT_PARTIAL, EXIT_FATAL = 0, 1, 2


def g6(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    return "nan" if math.isnan(v) else f"{v:.6g}"


def _columns(text: str):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two comma-separated column indices, e.g. 0,2")
    return a, b


def _window(text: str) -> LogLawWindow:
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected M1,M0 such as 50,0.15")
    return LogLawWindow(a, b)


def load_inputs(args) -> Catalog:
    inputs = list(args.inputs)
    if not inputs:
        env = os.environ.get(DATA_DIR_ENV)
        if not env:
            raise BLScalingError(f"no input given and {DATA_DIR_ENV} is unset")
        inputs = [env]
    parse_kwargs = {"columns": args.columns}
    if args.raw:
        parse_kwargs["raw"] = True
    profiles: list[VelocityProfile] = []
    failures: list[tuple[str, str]] = []
    for item in inputs:
        path = Path(item)
        try:
            if path.is_dir():
                cat = load_catalog(path, args.glob, **parse_kwargs)
                profiles += cat.profiles
                failures += cat.failures
            else:
                profiles.append(read_profile(path, **parse_kwargs))
        except (BLScalingError, OSError) as exc:
            log.warning("%s: %s", path, exc)
            failures.append((str(path), str(exc)))
    if not profiles:
        raise BLScalingError("no parseable profiles")
    return Catalog(sort_profiles(profiles), failures)


def load_config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    if getattr(args, "window", None):
        cfg = PipelineConfig(**{**cfg.__dict__, "log_law_windows": tuple(args.window)})
    return cfg


def emit_rows(header: Sequence[str], rows: list[list], fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        json.dump([dict(zip(header, r)) for r in rows], out, indent=2, allow_nan=False,
                  default=str)
        out.write("\n")
        return
    cells = [[g6(v) if not isinstance(v, str) else v for v in r] for r in rows]
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(cells)
        return
    allrows = [list(header)] + cells
    widths = [max(len(r[i]) for r in allrows) for i in range(len(header))]
    for r in allrows:
        out.write("  ".join(c.rjust(w) for c, w in zip(r, widths)) + "\n")


def _json_num(v):
    if v is None or isinstance(v, (str, bool)):
        return v
    v = float(v)
    return v if math.isfinite(v) else None


def cmd_fit(args) -> int:
    cat = load_inputs(args)
    cfg = load_config(args)
    res = run_pipeline(cat, cfg)
    header = ["run_id", "re_theta", "status", "alpha", "A", "beta", "B", "breakpoint_y_plus"]
    rows = []
    for r in res.reports:
        t = r.two_layer
        rows.append([r.run_id, r.re_theta, r.status]
                    + ([t.region1.exponent, t.region1.prefactor, t.region2.exponent,
                        t.region2.prefactor, t.breakpoint_y_plus] if t else [None] * 5))
    if args.format == "json":
        rows = [[_json_num(v) for v in row] for row in rows]
    emit_rows(header, rows, args.format)
    return EXIT_PARTIAL if res.partial else EXIT_OK


def cmd_table(args) -> int:
    cat = load_inputs(args)
    cfg = load_config(args)
    res = run_pipeline(cat, cfg)
    if args.format == "csv":
        sys.stdout.write(table_csv(res))
    elif args.format == "json":
        sys.stdout.write(json.dumps(result_to_dict(res)["table"], indent=2) + "\n")
    else:
        sys.stdout.write(format_table(res.table))
        bad = res.inconsistent_runs()
        if bad:
            sys.stdout.write(f"Delta > {cfg.delta_threshold:.0%} at Re_theta > "
                             f"{cfg.re_theta_consistency_min:g}: {', '.join(bad)}\n")
    if args.output_dir:
        emit_outputs(res, cat.profiles, args.output_dir, ["table"], cfg)
    return EXIT_PARTIAL if res.partial else EXIT_OK


def cmd_collapse(args) -> int:
    cat = load_inputs(args)
    cfg = load_config(args)
    res = run_pipeline(cat, cfg)
    by_id = {p.run_id: p for p in cat.profiles}
    collapses, rows = [], []
    for r in res.reports:
        if r.two_layer is None or r.effective is None:
            rows.append([r.run_id, r.re_theta, None, None, r.status])
            continue
        ln_re = args.ln_re if args.ln_re is not None else r.effective.ln_re
        c = collapse_profile(by_id[r.run_id], r.two_layer.region1.window, ln_re)
        r.collapse = c
        collapses.append(c)
        rows.append([r.run_id, r.re_theta, ln_re, c.rms_off_bisectrix, r.status])
    emit_rows(["run_id", "re_theta", "ln_re", "rms_off_bisectrix", "status"], rows, args.format)
    if collapses and args.format == "text":
        sys.stdout.write(f"pooled rms = {g6(pooled_rms(collapses))}\n")
    if args.output_dir:
        emit_outputs(res, cat.profiles, args.output_dir, ["collapse"], cfg)
    return EXIT_PARTIAL if res.partial else EXIT_OK


def cmd_gamma(args) -> int:
    cat = load_inputs(args)
    cfg = load_config(args)
    res = run_pipeline(cat, cfg)
    rows = []
    for r in res.reports:
        v1, v2 = r.gamma_region1, r.gamma_region2
        rows.append([r.run_id, r.re_theta,
                     v1.verdict if v1 else "-", v1.mean if v1 else None, v1.stddev if v1 else None,
                     v2.verdict if v2 else "-", v2.mean if v2 else None, v2.stddev if v2 else None])
    emit_rows(["run_id", "re_theta", "region1", "gamma1_mean", "gamma1_std",
               "region2", "gamma2_mean", "gamma2_std"], rows, args.format)
    if args.output_dir and len(cat.profiles) >= 2:
        text = gamma_ensemble_text(cat.profiles, res.reports)
        if text is not None:
            out = Path(args.output_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / "gamma_ensemble.dat").write_text(text)
    return EXIT_PARTIAL if res.partial else EXIT_OK


def cmd_loglaw(args) -> int:
    cat = load_inputs(args)
    cfg = load_config(args)
    header = ["run_id", "re_theta"]
    for w in cfg.log_law_windows:
        header += [f"kappa[{w.label}]", f"B[{w.label}]"]
    rows, failed = [], False
    for p in cat.profiles:
        row = [p.run_id, p.re_theta]
        for w in cfg.log_law_windows:
            try:
                f = fit_log_law(p, w.m1, w.m0, cfg.delta_fraction)
                row += [f.kappa, f.b_const]
            except BLScalingError as exc:
                log.warning("%s %s: %s", p.run_id, w.label, exc)
                failed = True
                row += [None, None]
        rows.append(row)
    if args.format == "json":
        rows = [[_json_num(v) for v in row] for row in rows]
    emit_rows(header, rows, args.format)
    return EXIT_PARTIAL if failed or cat.failures else EXIT_OK


def cmd_synth(args) -> int:
    if not args.output_dir:
        raise BLScalingError("synth needs --output-dir")
    if args.ln_re_range:
        lo, hi, n = args.ln_re_range
        ln_res = np.linspace(lo, hi, int(n)).tolist()
    else:
        ln_res = args.ln_re or [9.4, 11.33, 12.51]
    specs = []
    for i, lr in enumerate(ln_res):
        beta = args.beta if args.beta is not None else 1.5 / lr + args.beta_gap
        specs.append(SynthSpec(
            ln_re=lr, breakpoint_y_plus=args.breakpoint, beta=beta,
            y_plus_min=args.y_min, y_plus_max=args.y_max, n_points=args.n_points,
            noise_rel_sigma=args.noise, seed=args.seed + i, include_sublayer=args.sublayer,
        ))
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for p in generate_ensemble(specs):
        path = write_profile(p, out / f"{p.run_id}.dat")
        sys.stdout.write(f"{path}\n")
    return EXIT_OK


def cmd_report(args) -> int:
    cat = load_inputs(args)
    cfg = load_config(args)
    res = run_pipeline(cat, cfg)
    outdir = args.output_dir or "blscaling-out"
    kinds = args.outputs.split(",") if args.outputs else ALL_OUTPUTS
    paths = emit_outputs(res, cat.profiles, outdir, kinds, cfg)
    if args.format == "json":
        sys.stdout.write(dumps_report(res, cfg))
    else:
        sys.stdout.write(format_table(res.table))
        n_ok = sum(r.status == "ok" for r in res.reports)
        sys.stdout.write(f"{n_ok}/{len(res.reports)} runs fitted, {len(res.failures)} unreadable files, "
                         f"{len(paths)} files written to {outdir}\n")
    return EXIT_PARTIAL if res.partial else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON pipeline configuration file")
    common.add_argument("-o", "--output-dir", help="directory for emitted files")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("inputs", nargs="*", help=f"profile files or directories (default ${DATA_DIR_ENV})")
    data.add_argument("--glob", default=DEFAULT_GLOB, help="file pattern inside directories")
    data.add_argument("--columns", type=_columns, default=(0, 1), metavar="IY,IU",
                      help="0-based columns holding y and U")
    data.add_argument("--raw", action="store_true", help="columns are y, U in physical units")
    data.add_argument("--window", type=_window, action="append", metavar="M1,M0",
                      help="log-law fit window (repeatable)")

    parser = argparse.ArgumentParser(prog="blscaling", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("fit", parents=[common, data], help="two-layer power-law fits").set_defaults(func=cmd_fit)
    sub.add_parser("table", parents=[common, data], help="summary table").set_defaults(func=cmd_table)
    p = sub.add_parser("collapse", parents=[common, data], help="psi collapse")
    p.add_argument("--ln-re", type=float, help="use this ln Re for every run")
    p.set_defaults(func=cmd_collapse)
    sub.add_parser("gamma", parents=[common, data], help="diagnostic function").set_defaults(func=cmd_gamma)
    sub.add_parser("loglaw", parents=[common, data], help="log-law fits").set_defaults(func=cmd_loglaw)
    p = sub.add_parser("report", parents=[common, data], help="full pipeline and all outputs")
    p.add_argument("--outputs", help=f"comma-separated subset of {','.join(ALL_OUTPUTS)}")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("synth", parents=[common], help="write synthetic profiles")
    p.add_argument("--ln-re", type=float, nargs="+")
    p.add_argument("--ln-re-range", type=float, nargs=3, metavar=("LO", "HI", "N"))
    p.add_argument("--breakpoint", type=float, default=300.0)
    p.add_argument("--beta", type=float, help="region-II exponent (default alpha + --beta-gap)")
    p.add_argument("--beta-gap", type=float, default=0.06)
    p.add_argument("--y-min", type=float, default=1.0)
    p.add_argument("--y-max", type=float, default=1.0e4)
    p.add_argument("--n-points", type=int, default=200)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sublayer", action="store_true")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (BLScalingError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
