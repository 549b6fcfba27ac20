"""Per-run analysis chain and catalog-level aggregation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

from .core import (
    BLScalingError,
    CollapseResult,
    EffectiveReynolds,
    FitWindow,
    LogLawFit,
    NoTwoLayerStructure,
    TwoLayerFit,
    VelocityProfile,
)
from .diagnostics import ConstancyVerdict, TableRow, build_table, constancy_check, gamma_series
from .fitting import FitConfig, fit_log_law, fit_two_layer, select_intermediate_window
from .scaling import (
    DELTA_THRESHOLD,
    RE_THETA_CONSISTENCY_MIN,
    collapse_profile,
    effective_reynolds,
    length_scale,
    solve_ln_re,
)


@dataclass(frozen=True)
class LogLawWindow:
    m1: float
    m0: float

    @property
    def label(self) -> str:
        return f"M1={self.m1:g},M0={self.m0:g}"


DEFAULT_LOG_LAW_WINDOWS = (LogLawWindow(50.0, 0.15), LogLawWindow(200.0, 0.15))


@dataclass(frozen=True)
class PipelineConfig:
    fit: FitConfig = FitConfig()
    log_law_windows: tuple[LogLawWindow, ...] = DEFAULT_LOG_LAW_WINDOWS
    delta_fraction: float = 0.95
    gamma_tol: float = 0.05
    delta_threshold: float = DELTA_THRESHOLD
    re_theta_consistency_min: float = RE_THETA_CONSISTENCY_MIN

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        """Build from a flat/nested mapping such as a JSON config file.

        Keys: ``fit`` (FitConfig fields), ``log_law_windows`` (list of
        ``[m1, m0]``), and the scalar fields of this class.
        """
        data = dict(data)
        known = {"fit", "log_law_windows", "delta_fraction", "gamma_tol", "delta_threshold",
                 "re_theta_consistency_min"}
        unknown = set(data) - known
        if unknown:
            raise BLScalingError(f"unknown config keys: {', '.join(sorted(unknown))}")
        kwargs = {}
        if "fit" in data:
            kwargs["fit"] = FitConfig(**data.pop("fit"))
        if "log_law_windows" in data:
            kwargs["log_law_windows"] = tuple(LogLawWindow(float(a), float(b)) for a, b in data.pop("log_law_windows"))
        kwargs.update(data)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "PipelineConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class RunReport:
    run_id: str
    re_theta: float
    status: str = "ok"  # ok | no-two-layer | failed
    window: Optional[FitWindow] = None
    two_layer: Optional[TwoLayerFit] = None
    no_structure: Optional[NoTwoLayerStructure] = None
    effective: Optional[EffectiveReynolds] = None
    consistent: Optional[bool] = None
    collapse: Optional[CollapseResult] = None
    gamma_region1: Optional[ConstancyVerdict] = None
    gamma_region2: Optional[ConstancyVerdict] = None
    log_law: dict[str, Optional[LogLawFit]] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)


@dataclass
class PipelineResult:
    reports: list[RunReport]
    table: list[TableRow]
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return bool(self.failures) or any(r.status == "failed" or r.errors for r in self.reports)

    def inconsistent_runs(self) -> list[str]:
        return [r.run_id for r in self.reports if r.consistent is False]


def analyze_profile(profile: VelocityProfile, cfg: PipelineConfig = PipelineConfig()) -> RunReport:
    """Window, two-layer fit, inversion, collapse, Gamma checks and log-law fits for one run.

    Stage failures are recorded in the report; nothing raises.
    """
    rep = RunReport(profile.run_id, profile.re_theta)

    for w in cfg.log_law_windows:
        try:
            rep.log_law[w.label] = fit_log_law(profile, w.m1, w.m0, cfg.delta_fraction)
        except BLScalingError as exc:
            rep.log_law[w.label] = None
            rep.errors.append(f"log law {w.label}: {exc}")

    try:
        rep.window = select_intermediate_window(profile, cfg.fit)
        result = fit_two_layer(profile, rep.window, cfg.fit)
    except BLScalingError as exc:
        rep.status = "failed"
        rep.errors.append(f"two-layer fit: {exc}")
        return rep
    if isinstance(result, NoTwoLayerStructure):
        rep.status = "no-two-layer"
        rep.no_structure = result
        return rep
    rep.two_layer = result

    try:
        eff = effective_reynolds(*solve_ln_re(result.region1))
    except BLScalingError as exc:
        rep.status = "failed"
        rep.errors.append(f"inversion: {exc}")
        return rep
    if profile.u_inf is not None and profile.nu is not None:
        eff = replace(eff, lambda_scale=length_scale(eff, profile.u_inf, profile.nu))
    rep.effective = eff
    if profile.re_theta > cfg.re_theta_consistency_min:
        rep.consistent = eff.delta <= cfg.delta_threshold

    try:
        rep.collapse = collapse_profile(profile, result.region1.window, eff.ln_re)
    except BLScalingError as exc:
        rep.errors.append(f"collapse: {exc}")

    gs = gamma_series(profile)
    for attr, fit in (("gamma_region1", result.region1), ("gamma_region2", result.region2)):
        try:
            setattr(rep, attr, constancy_check(gs, fit.window, cfg.gamma_tol))
        except BLScalingError as exc:
            rep.errors.append(f"{attr}: {exc}")
    return rep


def run_pipeline(
    catalog: Sequence[VelocityProfile], cfg: PipelineConfig = PipelineConfig()
) -> PipelineResult:
    """Analyze every run and aggregate the summary table (ordered by Re_theta)."""
    profiles = list(catalog)
    if not profiles:
        raise BLScalingError("empty catalog")
    profiles.sort(key=lambda p: (p.re_theta, p.run_id))
    reports = [analyze_profile(p, cfg) for p in profiles]
    table = build_table(
        (r.re_theta, r.two_layer, r.effective, r.run_id)
        for r in reports
        if r.two_layer is not None and r.effective is not None
    )
    failures = list(getattr(catalog, "failures", []))
    return PipelineResult(reports, table, failures)
