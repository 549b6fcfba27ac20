"""Least-squares fits: intermediate window, power laws, two-layer split, log law."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple, Union

import numpy as np
from scipy import stats

from .core import (
    DegenerateAbscissaError,
    DegenerateFitError,
    DomainError,
    FitWindow,
    InsufficientDataError,
    LogLawFit,
    NoTwoLayerStructure,
    PowerLawFit,
    TwoLayerFit,
    VelocityProfile,
)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# slopes this small are roundoff on constant data
ZERO_SLOPE = 1e-12


@dataclass(frozen=True)
class FitConfig:
    """Knobs for window selection and the two-layer split.

    ``curvature_significance`` rejects a split when a segment's local slope
    drifts by more than ``min_slope_gap`` across it and a quadratic term is
    significant at that level (``None`` disables the check).  This is what
    tells a smoothly curving profile, such as a log law, from two straight
    layers.
    """

    sublayer_cutoff_y_plus: float = 30.0
    wake_cutoff_velocity_fraction: float = 0.95
    min_points_per_segment: int = 5
    min_slope_gap: float = 0.005
    breakpoint_search: Literal["exhaustive", "golden-section"] = "exhaustive"
    curvature_significance: float | None = 1e-3

    def __post_init__(self):
        if not 0 < self.wake_cutoff_velocity_fraction < 1:
            raise DomainError("wake_cutoff_velocity_fraction must lie in (0, 1)")
        if self.min_points_per_segment < 3:
            raise DomainError("min_points_per_segment must be >= 3")
        if not self.sublayer_cutoff_y_plus > 0:
            raise DomainError("sublayer_cutoff_y_plus must be positive")
        if self.min_slope_gap < 0:
            raise DomainError("min_slope_gap must be non-negative")
        if self.breakpoint_search not in ("exhaustive", "golden-section"):
            raise DomainError(f"unknown breakpoint_search {self.breakpoint_search!r}")


class OLSResult(NamedTuple):
    slope: float
    intercept: float
    slope_stderr: float
    intercept_stderr: float
    sse: float
    n: int


def ols(x: np.ndarray, y: np.ndarray) -> OLSResult:
    """Straight-line least squares with centred sums.

    Standard errors use the unbiased residual variance ``sse / (n - 2)``;
    they are NaN for ``n == 2``.
    """
    n = x.size
    if n < 2:
        raise InsufficientDataError(f"need at least 2 points, got {n}")
    xm = x.mean()
    ym = y.mean()
    dx = x - xm
    dy = y - ym
    sxx = float(dx @ dx)
    if np.ptp(x) == 0 or sxx <= 0:
        raise DegenerateAbscissaError("zero variance in abscissa")
    slope = float(dx @ dy) / sxx
    intercept = float(ym - slope * xm)
    resid = dy - slope * dx
    sse = float(resid @ resid)
    if n > 2:
        s2 = sse / (n - 2)
        slope_se = math.sqrt(s2 / sxx)
        intercept_se = math.sqrt(s2 * (1.0 / n + xm * xm / sxx))
    else:
        slope_se = intercept_se = float("nan")
    return OLSResult(slope, intercept, slope_se, intercept_se, sse, n)


def select_intermediate_window(profile: VelocityProfile, cfg: FitConfig = FitConfig()) -> FitWindow:
    """Window between the viscous sublayer and the free stream.

    Keeps samples with ``y+ >= sublayer_cutoff_y_plus`` and
    ``U+ <= wake_cutoff_velocity_fraction * max(U+)``; the window runs from
    the first to the last of them.
    """
    y, u = profile.y_plus, profile.u_plus
    keep = (y >= cfg.sublayer_cutoff_y_plus) & (u <= cfg.wake_cutoff_velocity_fraction * u.max())
    need = 2 * cfg.min_points_per_segment
    if np.count_nonzero(keep) < 2:
        raise InsufficientDataError(f"{profile.run_id}: no intermediate region found")
    lo = float(y[keep][0])
    hi = float(y[keep][-1])
    n_in = int(np.count_nonzero((y >= lo) & (y <= hi)))
    if n_in < need:
        raise InsufficientDataError(
            f"{profile.run_id}: {n_in} samples in intermediate window, need {need}"
        )
    return FitWindow(lo, hi)


def _log_window(profile: VelocityProfile, window: FitWindow):
    m = window.mask(profile.y_plus)
    return np.log(profile.y_plus[m]), np.log(profile.u_plus[m])


def _power_law_from_ols(res: OLSResult, window: FitWindow) -> PowerLawFit:
    return PowerLawFit(
        exponent=res.slope,
        prefactor=math.exp(res.intercept),
        exponent_stderr=res.slope_stderr,
        prefactor_rel_stderr=res.intercept_stderr,
        rms_log_residual=math.sqrt(res.sse / res.n),
        n_points=res.n,
        window=window,
    )


def fit_power_law(profile: VelocityProfile, window: FitWindow) -> PowerLawFit:
    """OLS of ``ln U+`` on ``ln y+`` over the samples inside ``window``.

    Raises
    ------
    InsufficientDataError
        Fewer than 3 samples in the window.
    DegenerateAbscissaError
        All in-window ``y+`` coincide.
    DegenerateFitError
        The fitted exponent falls outside ``(0, 1)``.
    """
    lx, ly = _log_window(profile, window)
    if lx.size < 3:
        raise InsufficientDataError(
            f"{profile.run_id}: {lx.size} samples in window [{window.lo_y_plus:.6g}, "
            f"{window.hi_y_plus:.6g}], need 3"
        )
    res = ols(lx, ly)
    if abs(res.slope) <= ZERO_SLOPE:
        raise DegenerateFitError(f"{profile.run_id}: zero exponent (constant velocity)")
    return _power_law_from_ols(res, window)


def _split_sse(x: np.ndarray, y: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """Total SSE of independent line fits on ``[0, k)`` and ``[k, n)`` for each k."""
    # centre globally to limit cancellation in the running sums
    x = x - x.mean()
    y = y - y.mean()
    zero = np.zeros(1)
    cx = np.concatenate([zero, np.cumsum(x)])
    cy = np.concatenate([zero, np.cumsum(y)])
    cxx = np.concatenate([zero, np.cumsum(x * x)])
    cyy = np.concatenate([zero, np.cumsum(y * y)])
    cxy = np.concatenate([zero, np.cumsum(x * y)])
    n = x.size

    def seg(a, b):
        m = (b - a).astype(float)
        sx = cx[b] - cx[a]
        sy = cy[b] - cy[a]
        sxx = cxx[b] - cxx[a] - sx * sx / m
        syy = cyy[b] - cyy[a] - sy * sy / m
        sxy = cxy[b] - cxy[a] - sx * sy / m
        return np.maximum(syy - sxy * sxy / sxx, 0.0)

    ks = np.asarray(ks, dtype=int)
    return seg(np.zeros_like(ks), ks) + seg(ks, np.full_like(ks, n))


def _exhaustive_split(x, y, lo, hi) -> int:
    ks = np.arange(lo, hi + 1)
    sse = _split_sse(x, y, ks)
    return int(ks[np.argmin(sse)])  # first minimum -> smaller y+


def _golden_split(x, y, lo, hi, refine: int | None = None) -> int:
    """Golden-section search over the split index, finished by a local scan.

    Noise makes the SSE curve slightly ragged near its minimum, so the final
    scan covers ``refine`` indices either side of the converged bracket.
    """
    f = lambda k: float(_split_sse(x, y, np.array([k]))[0])  # noqa: E731
    a, b = lo, hi
    c = int(round(b - GOLDEN * (b - a)))
    d = int(round(a + GOLDEN * (b - a)))
    fc, fd = f(c), f(d)
    while b - a > 4:
        if fc <= fd:
            b = d
            d, fd = c, fc
            c = int(round(b - GOLDEN * (b - a)))
            if c >= d:
                c = d - 1
            fc = f(c)
        else:
            a = c
            c, fc = d, fd
            d = int(round(a + GOLDEN * (b - a)))
            if d <= c:
                d = c + 1
            fd = f(d)
    if refine is None:
        refine = max(5, (hi - lo) // 10)
    return _exhaustive_split(x, y, max(lo, a - refine), min(hi, b + refine))


def segment_slope_drift(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Change of local slope across a segment from a quadratic fit, and its p-value.

    For ``y = a + b x + c x**2`` the slope drifts by ``2 c (max x - min x)``;
    the p-value is the two-sided t-test of ``c = 0``.
    """
    n = x.size
    if n < 4:
        return 0.0, 1.0
    dx = x - x.mean()
    design = np.column_stack([np.ones(n), dx, dx * dx])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 3:
        return 0.0, 1.0
    resid = y - design @ coef
    s2 = float(resid @ resid) / (n - 3)
    cov = s2 * np.linalg.inv(design.T @ design)
    drift = 2.0 * coef[2] * float(np.ptp(x))
    se = math.sqrt(cov[2, 2])
    if se == 0.0:
        return float(drift), 0.0 if coef[2] != 0 else 1.0
    pval = 2.0 * stats.t.sf(abs(coef[2]) / se, n - 3)
    return float(drift), float(pval)


def fit_two_layer(
    profile: VelocityProfile, window: FitWindow, cfg: FitConfig = FitConfig()
) -> Union[TwoLayerFit, NoTwoLayerStructure]:
    """Split the window into two power-law layers at the SSE-optimal sample.

    Region I takes samples ``[0, k)`` of the window, region II ``[k, n)``;
    both are independent OLS fits in ``(ln y+, ln U+)``.  The reported
    breakpoint is where the two fitted lines intersect, clipped to the gap
    between the last region-I and first region-II sample.

    Returns ``NoTwoLayerStructure`` when the best split fails the slope-gap,
    curvature or exponent-range checks.
    """
    m = cfg.min_points_per_segment
    mask = window.mask(profile.y_plus)
    y = profile.y_plus[mask]
    lx, ly = np.log(y), np.log(profile.u_plus[mask])
    n = lx.size
    if n < 2 * m:
        raise InsufficientDataError(f"{profile.run_id}: {n} samples in window, need {2 * m}")

    if cfg.breakpoint_search == "exhaustive":
        k = _exhaustive_split(lx, ly, m, n - m)
    else:
        k = _golden_split(lx, ly, m, n - m)

    r1 = ols(lx[:k], ly[:k])
    r2 = ols(lx[k:], ly[k:])
    if r1.slope != r2.slope:
        ln_bp = (r2.intercept - r1.intercept) / (r1.slope - r2.slope)
        ln_bp = min(max(ln_bp, lx[k - 1]), lx[k])
    else:
        ln_bp = 0.5 * (lx[k - 1] + lx[k])
    bp = float(np.clip(math.exp(ln_bp), y[k - 1], y[k]))

    gap = r2.slope - r1.slope
    if abs(gap) < cfg.min_slope_gap:
        return NoTwoLayerStructure(
            profile.run_id, f"slope gap {abs(gap):.3g} below {cfg.min_slope_gap:g}", bp, gap
        )
    if cfg.curvature_significance is not None:
        for name, sx, sy in (("region I", lx[:k], ly[:k]), ("region II", lx[k:], ly[k:])):
            drift, pval = segment_slope_drift(sx, sy)
            if abs(drift) > cfg.min_slope_gap and pval < cfg.curvature_significance:
                return NoTwoLayerStructure(
                    profile.run_id,
                    f"{name} is curved: slope drifts by {drift:.3g} (p = {pval:.2g})",
                    bp,
                    gap,
                )
    try:
        fit1 = _power_law_from_ols(r1, FitWindow(float(y[0]), float(y[k - 1])))
        fit2 = _power_law_from_ols(r2, FitWindow(float(y[k]), float(y[-1])))
    except DegenerateFitError as exc:
        return NoTwoLayerStructure(profile.run_id, str(exc), bp, gap)
    return TwoLayerFit(fit1, fit2, bp, r1.sse + r2.sse)


def delta_thickness_y_plus(profile: VelocityProfile, fraction: float = 0.95) -> float:
    """Smallest ``y+`` where ``U+`` first reaches ``fraction * max(U+)``."""
    if not 0 < fraction <= 1:
        raise DomainError("fraction must lie in (0, 1]")
    u = profile.u_plus
    idx = int(np.argmax(u >= fraction * u.max()))
    return float(profile.y_plus[idx])


def fit_log_law(
    profile: VelocityProfile, m1: float, m0: float, delta_fraction: float = 0.95
) -> LogLawFit:
    """OLS of ``U+`` on ``ln y+`` for ``y+ >= m1`` and ``y+ <= m0 * delta``.

    ``delta`` is the thickness from :func:`delta_thickness_y_plus` at
    ``delta_fraction`` (99% is the usual alternative).
    """
    if not m1 > 0:
        raise DomainError("m1 must be positive")
    if not 0 < m0 < 1:
        raise DomainError("m0 must lie in (0, 1)")
    hi = m0 * delta_thickness_y_plus(profile, delta_fraction)
    if hi <= m1:
        raise InsufficientDataError(
            f"{profile.run_id}: empty log-law window [{m1:.6g}, {hi:.6g}]"
        )
    window = FitWindow(m1, hi)
    mask = window.mask(profile.y_plus)
    if np.count_nonzero(mask) < 3:
        raise InsufficientDataError(
            f"{profile.run_id}: {np.count_nonzero(mask)} samples in log-law window, need 3"
        )
    res = ols(np.log(profile.y_plus[mask]), profile.u_plus[mask])
    if not res.slope > 0:
        raise DegenerateFitError(f"{profile.run_id}: non-positive log-law slope")
    return LogLawFit(
        kappa=1.0 / res.slope,
        b_const=res.intercept,
        m1=m1,
        m0=m0,
        rms_residual=math.sqrt(res.sse / res.n),
        n_points=res.n,
        kappa_stderr=res.slope_stderr / res.slope**2,
        window=window,
    )
