"""Machine-readable report and plot-data column files.

Column files (``*.dat``, ``table.csv``) and ``report.json`` carry full
double precision; only ``table.txt`` and console output are rounded.
Everything written is a pure function of the inputs, so reruns produce
identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .core import BLScalingError, FitWindow, VelocityProfile
from .diagnostics import TABLE_HEADER, format_table, gamma_ensemble_average
from .pipeline import PipelineConfig, PipelineResult, RunReport

SCHEMA_NAME = "blscaling.report"
SCHEMA_VERSION = 1
ALL_OUTPUTS = ("profiles", "collapse", "kappa", "gamma", "table", "json")


def _num(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def _fmt(v) -> str:
    return repr(float(v))


def _window(w: Optional[FitWindow]):
    return None if w is None else {"lo_y_plus": _num(w.lo_y_plus), "hi_y_plus": _num(w.hi_y_plus)}


def _power(fit):
    return {
        "exponent": _num(fit.exponent),
        "prefactor": _num(fit.prefactor),
        "exponent_stderr": _num(fit.exponent_stderr),
        "prefactor_rel_stderr": _num(fit.prefactor_rel_stderr),
        "rms_log_residual": _num(fit.rms_log_residual),
        "n_points": fit.n_points,
        "window": _window(fit.window),
    }


def report_to_dict(rep: RunReport) -> dict:
    two = rep.two_layer
    ns = rep.no_structure
    eff = rep.effective
    out = {
        "run_id": rep.run_id,
        "re_theta": _num(rep.re_theta),
        "status": rep.status,
        "window": _window(rep.window),
        "two_layer": None
        if two is None
        else {
            "region1": _power(two.region1),
            "region2": _power(two.region2),
            "breakpoint_y_plus": _num(two.breakpoint_y_plus),
            "total_sse_log": _num(two.total_sse_log),
        },
        "no_structure": None
        if ns is None
        else {
            "reason": ns.reason,
            "best_breakpoint_y_plus": _num(ns.best_breakpoint_y_plus),
            "slope_gap": _num(ns.slope_gap),
        },
        "effective_reynolds": None
        if eff is None
        else {
            "ln_re1": _num(eff.ln_re1),
            "ln_re2": _num(eff.ln_re2),
            "ln_re": _num(eff.ln_re),
            "delta": _num(eff.delta),
            "lambda_scale": _num(eff.lambda_scale),
        },
        "consistent": rep.consistent,
        "collapse": None
        if rep.collapse is None
        else {
            "rms_off_bisectrix": _num(rep.collapse.rms_off_bisectrix),
            "n_points": int(rep.collapse.points.shape[0]),
            "n_excluded": rep.collapse.n_excluded,
        },
        "gamma": {},
        "log_law": {},
        "errors": list(rep.errors),
    }
    for key, v in (("region1", rep.gamma_region1), ("region2", rep.gamma_region2)):
        out["gamma"][key] = None if v is None else {
            "verdict": v.verdict,
            "mean": _num(v.mean),
            "stddev": _num(v.stddev),
            "n_points": v.n_points,
        }
    for label, f in rep.log_law.items():
        out["log_law"][label] = None if f is None else {
            "kappa": _num(f.kappa),
            "b_const": _num(f.b_const),
            "m1": _num(f.m1),
            "m0": _num(f.m0),
            "rms_residual": _num(f.rms_residual),
            "kappa_stderr": _num(f.kappa_stderr),
            "n_points": f.n_points,
        }
    return out


def config_to_dict(cfg: PipelineConfig) -> dict:
    return {
        "fit": asdict(cfg.fit),
        "log_law_windows": [[w.m1, w.m0] for w in cfg.log_law_windows],
        "delta_fraction": cfg.delta_fraction,
        "gamma_tol": cfg.gamma_tol,
        "delta_threshold": cfg.delta_threshold,
        "re_theta_consistency_min": cfg.re_theta_consistency_min,
    }


def result_to_dict(result: PipelineResult, cfg: Optional[PipelineConfig] = None) -> dict:
    return {
        "schema": SCHEMA_NAME,
        "version": SCHEMA_VERSION,
        "config": None if cfg is None else config_to_dict(cfg),
        "runs": [report_to_dict(r) for r in result.reports],
        "table": [{k: (_num(v) if k != "run_id" else v) for k, v in asdict(row).items()} for row in result.table],
        "inconsistent_runs": result.inconsistent_runs(),
        "failures": [{"path": p, "error": e} for p, e in result.failures],
    }


def dumps_report(result: PipelineResult, cfg: Optional[PipelineConfig] = None) -> str:
    return json.dumps(result_to_dict(result, cfg), indent=2, sort_keys=True, allow_nan=False) + "\n"


def table_csv(result: PipelineResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("run_id",) + TABLE_HEADER)
    for r in result.table:
        w.writerow(
            [r.run_id]
            + [_fmt(v) for v in (r.re_theta, r.alpha, r.a_coef, r.beta, r.b_coef,
                                 r.ln_re1, r.ln_re2, r.ln_re, r.delta_percent)]
        )
    return buf.getvalue()


def safe_name(run_id: str) -> str:
    return re.sub(r"[^\w.-]", "_", run_id) or "run"


def profile_plot_text(profile: VelocityProfile, rep: Optional[RunReport]) -> str:
    """Base-10 log-log columns: data and both fitted lines at every sample."""
    lg_y = np.log10(profile.y_plus)
    lg_u = np.log10(profile.u_plus)
    lines = [f"# run_id = {profile.run_id}", f"# re_theta = {_fmt(profile.re_theta)}"]
    two = rep.two_layer if rep is not None else None
    if two is not None:
        f1, f2 = two.region1, two.region2
        lines += [
            f"# region1: alpha = {_fmt(f1.exponent)}  A = {_fmt(f1.prefactor)}  lg A = {_fmt(math.log10(f1.prefactor))}",
            f"# region2: beta = {_fmt(f2.exponent)}  B = {_fmt(f2.prefactor)}  lg B = {_fmt(math.log10(f2.prefactor))}",
            f"# breakpoint_y_plus = {_fmt(two.breakpoint_y_plus)}",
        ]
        fit1 = np.log10(f1.prefactor) + f1.exponent * lg_y
        fit2 = np.log10(f2.prefactor) + f2.exponent * lg_y
    else:
        fit1 = fit2 = np.full(lg_y.shape, np.nan)
    lines.append("# lg_y_plus lg_u_plus lg_fit_region1 lg_fit_region2")
    lines += [" ".join(_fmt(v) for v in row) for row in zip(lg_y, lg_u, fit1, fit2)]
    return "\n".join(lines) + "\n"


def collapse_text(reports: Iterable[RunReport]) -> str:
    lines = ["# pooled collapse: run_id ln_y_plus psi"]
    for rep in reports:
        if rep.collapse is None:
            continue
        lines += [f"{rep.run_id} {_fmt(x)} {_fmt(p)}" for x, p in rep.collapse.points]
    return "\n".join(lines) + "\n"


def kappa_text(reports: Sequence[RunReport], cfg: PipelineConfig) -> str:
    labels = [w.label for w in cfg.log_law_windows]
    lines = ["# run_id re_theta " + " ".join(f"kappa[{l}]" for l in labels)]
    for rep in reports:
        vals = []
        for l in labels:
            f = rep.log_law.get(l)
            vals.append("nan" if f is None else _fmt(f.kappa))
        lines.append(f"{rep.run_id} {_fmt(rep.re_theta)} " + " ".join(vals))
    return "\n".join(lines) + "\n"


def gamma_ensemble_text(profiles: Sequence[VelocityProfile], reports: Sequence[RunReport]) -> Optional[str]:
    by_id = {r.run_id: r for r in reports}
    windows = []
    for p in profiles:
        rep = by_id.get(p.run_id)
        windows.append(rep.window if rep is not None else None)
    try:
        ens = gamma_ensemble_average(profiles, windows=windows)
    except BLScalingError:
        return None
    lines = ["# y_plus_lo y_plus_hi mean_gamma run_count"]
    for lo, hi, g, c in zip(ens.bin_edges[:-1], ens.bin_edges[1:], ens.mean_gamma, ens.run_count_per_bin):
        lines.append(f"{_fmt(lo)} {_fmt(hi)} {_fmt(g)} {int(c)}")
    return "\n".join(lines) + "\n"


def emit_outputs(
    result: PipelineResult,
    profiles: Sequence[VelocityProfile],
    outdir: Union[str, Path],
    kinds: Iterable[str] = ALL_OUTPUTS,
    cfg: PipelineConfig = PipelineConfig(),
) -> list[Path]:
    """Write the requested outputs below ``outdir`` and return their paths.

    ``profiles/<run>.dat``  lg y+, lg U+ and both fitted lines
    ``collapse.dat``        pooled ln y+ and psi
    ``kappa.dat``           log-law kappa per run for each window
    ``gamma_ensemble.dat``  bin-averaged diagnostic function
    ``table.csv``/``.txt``  summary table
    ``report.json``         full report
    """
    kinds = set(kinds)
    unknown = kinds - set(ALL_OUTPUTS)
    if unknown:
        raise ValueError(f"unknown output kinds: {', '.join(sorted(unknown))}")
    if not result.reports:
        raise ValueError("nothing to emit")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def put(name: str, text: str):
        path = outdir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        written.append(path)

    by_id = {r.run_id: r for r in result.reports}
    if "profiles" in kinds:
        for p in profiles:
            put(f"profiles/{safe_name(p.run_id)}.dat", profile_plot_text(p, by_id.get(p.run_id)))
    if "collapse" in kinds:
        put("collapse.dat", collapse_text(result.reports))
    if "kappa" in kinds:
        put("kappa.dat", kappa_text(result.reports, cfg))
    if "gamma" in kinds and len(profiles) >= 2:
        text = gamma_ensemble_text(profiles, result.reports)
        if text is not None:
            put("gamma_ensemble.dat", text)
    if "table" in kinds:
        put("table.csv", table_csv(result))
        put("table.txt", format_table(result.table))
    if "json" in kinds:
        put("report.json", dumps_report(result, cfg))
    return written
