"""Diagnostic function, its ensemble average, constancy checks, and the summary table."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .core import (
    BLScalingError,
    EffectiveReynolds,
    FitWindow,
    GammaSeries,
    InsufficientDataError,
    TwoLayerFit,
    VelocityProfile,
)

DEFAULT_BINS_PER_DECADE = 20


def gamma_series(profile: VelocityProfile) -> GammaSeries:
    """Logarithmic slope ``d ln U+ / d ln y+`` at every sample.

    Interior points use the second-order centred difference on the
    non-uniform ``ln y+`` grid (exact wherever ``ln U+`` is linear in
    ``ln y+``).  The two one-sided endpoint values go to ``endpoints``.
    """
    if len(profile) < 3:
        raise InsufficientDataError(f"{profile.run_id}: gamma needs at least 3 samples")
    lx = np.log(profile.y_plus)
    ly = np.log(profile.u_plus)
    g = np.gradient(ly, lx, edge_order=1)
    y = profile.y_plus
    interior = np.column_stack([y[1:-1], g[1:-1]])
    ends = np.array([[y[0], g[0]], [y[-1], g[-1]]])
    return GammaSeries(interior, ends)


@dataclass(frozen=True)
class GammaEnsemble:
    bin_edges: np.ndarray
    mean_gamma: np.ndarray  # NaN where run_count_per_bin == 0
    run_count_per_bin: np.ndarray

    @property
    def bin_centers(self) -> np.ndarray:
        return np.sqrt(self.bin_edges[:-1] * self.bin_edges[1:])

    def populated(self):
        """``(centers, mean_gamma)`` restricted to bins holding at least one run."""
        ok = self.run_count_per_bin > 0
        return self.bin_centers[ok], self.mean_gamma[ok]


def log_bin_edges(lo: float, hi: float, bins_per_decade: int = DEFAULT_BINS_PER_DECADE) -> np.ndarray:
    """Edges on the decade-aligned log grid covering ``[lo, hi]``."""
    if not 0 < lo <= hi:
        raise BLScalingError("need 0 < lo <= hi for log bins")
    k0 = math.floor(math.log10(lo) * bins_per_decade + 1e-9)
    k1 = math.ceil(math.log10(hi) * bins_per_decade - 1e-9)
    if k1 <= k0:
        k1 = k0 + 1
    return 10.0 ** (np.arange(k0, k1 + 1) / bins_per_decade)


def gamma_ensemble_average(
    profiles: Sequence[VelocityProfile],
    bins_per_decade: int = DEFAULT_BINS_PER_DECADE,
    windows: Optional[Sequence[Optional[FitWindow]]] = None,
    bin_edges: Optional[np.ndarray] = None,
) -> GammaEnsemble:
    """Average the interior diagnostic function of several runs in log-uniform y+ bins.

    Each run first averages its own points inside a bin; the bin value is
    the plain mean of those per-run averages, so a run counts once per bin
    regardless of its sampling density.  ``windows`` optionally restricts
    each run to a sub-range of y+.
    """
    if len(profiles) < 2:
        raise InsufficientDataError("ensemble average needs at least 2 profiles")
    if windows is not None and len(windows) != len(profiles):
        raise BLScalingError("windows must match profiles one to one")

    series = []
    for i, p in enumerate(profiles):
        gs = gamma_series(p)
        y, g = gs.y_plus, gs.gamma
        if windows is not None and windows[i] is not None:
            m = windows[i].mask(y)
            y, g = y[m], g[m]
        series.append((y, g))

    if bin_edges is None:
        occupied = [y for y, _ in series if y.size]
        if not occupied:
            raise BLScalingError("no gamma points to bin")
        lo = min(y[0] for y in occupied)
        hi = max(y[-1] for y in occupied)
        bin_edges = log_bin_edges(lo, hi, bins_per_decade)
    edges = np.asarray(bin_edges, dtype=float)
    if edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise BLScalingError("bin edges must be strictly increasing")

    nb = edges.size - 1
    total = np.zeros(nb)
    count = np.zeros(nb, dtype=int)
    for y, g in series:
        idx = np.searchsorted(edges, y, side="right") - 1
        idx[y == edges[-1]] = nb - 1
        ok = (idx >= 0) & (idx < nb)
        if not ok.any():
            continue
        sums = np.bincount(idx[ok], weights=g[ok], minlength=nb)
        hits = np.bincount(idx[ok], minlength=nb)
        has = hits > 0
        total[has] += sums[has] / hits[has]
        count[has] += 1
    mean = np.full(nb, np.nan)
    mean[count > 0] = total[count > 0] / count[count > 0]
    return GammaEnsemble(edges, mean, count)


class ConstancyVerdict(NamedTuple):
    constant: bool
    mean: float
    stddev: float
    n_points: int

    @property
    def verdict(self) -> str:
        return "constant" if self.constant else "varying"


def constancy_check(series: GammaSeries, window: FitWindow, tol: float = 0.05) -> ConstancyVerdict:
    """Constant iff the in-window ``stddev / |mean|`` of Gamma is at most ``tol``.

    Only interior points are considered; stddev is the population value.
    """
    m = window.mask(series.y_plus)
    g = series.gamma[m]
    if g.size < 3:
        raise InsufficientDataError(f"constancy check needs 3 in-window points, got {g.size}")
    mean = float(g.mean())
    sd = float(g.std())
    constant = mean != 0 and sd / abs(mean) <= tol
    return ConstancyVerdict(bool(constant), mean, sd, int(g.size))


@dataclass(frozen=True)
class TableRow:
    re_theta: float
    alpha: float
    a_coef: float
    beta: float
    b_coef: float
    ln_re1: float
    ln_re2: float
    ln_re: float
    delta_percent: float
    run_id: str = ""


TABLE_HEADER = ("Re_theta", "alpha", "A", "beta", "B", "ln(Re1)", "ln(Re2)", "ln(Re)", "Delta,%")


def build_table(results: Iterable[tuple[float, TwoLayerFit, EffectiveReynolds] | tuple]) -> list[TableRow]:
    """One row per run, sorted by Re_theta.

    ``results`` yields ``(re_theta, two_layer, effective)`` or
    ``(re_theta, two_layer, effective, run_id)``.
    """
    rows = []
    for item in results:
        re_theta, two, eff = item[:3]
        run_id = item[3] if len(item) > 3 else ""
        rows.append(
            TableRow(
                re_theta=float(re_theta),
                alpha=two.region1.exponent,
                a_coef=two.region1.prefactor,
                beta=two.region2.exponent,
                b_coef=two.region2.prefactor,
                ln_re1=eff.ln_re1,
                ln_re2=eff.ln_re2,
                ln_re=eff.ln_re,
                delta_percent=100.0 * eff.delta,
                run_id=run_id,
            )
        )
    rows.sort(key=lambda r: (r.re_theta, r.run_id))
    return rows


def _row_cells(row: TableRow) -> list[str]:
    return [
        f"{row.re_theta:,.0f}",
        f"{row.alpha:.3f}",
        f"{row.a_coef:.2f}",
        f"{row.beta:.3f}",
        f"{row.b_coef:.2f}",
        f"{row.ln_re1:.2f}",
        f"{row.ln_re2:.2f}",
        f"{row.ln_re:.2f}",
        f"{row.delta_percent:.1f}",
    ]


def format_table(rows: Sequence[TableRow]) -> str:
    """Aligned text rendering with the customary rounding (Delta to one decimal)."""
    cells = [list(TABLE_HEADER)] + [_row_cells(r) for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(TABLE_HEADER))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(line, widths)) for line in cells]
    return "\n".join(lines) + "\n"
