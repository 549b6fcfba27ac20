"""Effective Reynolds number from a region-I fit, length scale, psi collapse."""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from .core import (
    SQRT3,
    BLScalingError,
    CollapseResult,
    DomainError,
    EffectiveReynolds,
    FitWindow,
    MetadataRequiredError,
    PowerLawFit,
    VelocityProfile,
    _psi_array,
    alpha_from_ln_re,
)

# runs above this Re_theta are expected to satisfy delta <= DELTA_THRESHOLD
RE_THETA_CONSISTENCY_MIN = 10_000.0
DELTA_THRESHOLD = 0.03


class NonphysicalPrefactorError(BLScalingError, ValueError):
    """Region-I prefactor at or below 5/2 gives ln Re1 <= 0."""


class CollapseError(BLScalingError):
    pass


def solve_ln_re(fit: PowerLawFit) -> Tuple[float, float]:
    """Invert a region-I fit into ``(ln Re1, ln Re2)``.

    ``ln Re1`` solves ``ln Re / sqrt(3) + 5/2 = A`` and ``ln Re2`` solves
    ``3 / (2 ln Re) = alpha``.
    """
    if not fit.exponent > 0:
        raise DomainError("exponent must be positive")
    if fit.prefactor <= 2.5:
        raise NonphysicalPrefactorError(
            f"prefactor {fit.prefactor:.6g} <= 5/2 gives non-positive ln Re1"
        )
    return SQRT3 * (fit.prefactor - 2.5), 1.5 / fit.exponent


def effective_reynolds(
    ln_re1: float, ln_re2: float, lambda_scale: Optional[float] = None
) -> EffectiveReynolds:
    """Geometric-mean Reynolds number and the relative mismatch ``delta``.

    ``delta = |ln Re2 - ln Re1| / ln Re``; the absolute value makes it
    symmetric in the two inversions.
    """
    if not (ln_re1 > 0 and ln_re2 > 0):
        raise DomainError(f"ln Re1, ln Re2 must be positive, got {ln_re1!r}, {ln_re2!r}")
    ln_re = (ln_re1 + ln_re2) / 2
    delta = abs(ln_re2 - ln_re1) / ln_re
    return EffectiveReynolds(ln_re1, ln_re2, ln_re, delta, lambda_scale)


def length_scale(eff: EffectiveReynolds, u_inf: Optional[float], nu: Optional[float]) -> float:
    """``Lambda = Re * nu / U`` in the units of ``nu / u_inf``."""
    if u_inf is None or nu is None:
        missing = [n for n, v in (("u_inf", u_inf), ("nu", nu)) if v is None]
        raise MetadataRequiredError(f"length scale needs {', '.join(missing)}")
    if not (u_inf > 0 and nu > 0):
        raise DomainError("u_inf and nu must be positive")
    return math.exp(eff.ln_re) * nu / u_inf


def profile_length_scale(eff: EffectiveReynolds, profile: VelocityProfile) -> float:
    try:
        return length_scale(eff, profile.u_inf, profile.nu)
    except MetadataRequiredError as exc:
        raise MetadataRequiredError(f"{profile.run_id}: {exc}") from None


def is_consistent(eff: EffectiveReynolds, re_theta: float) -> Optional[bool]:
    """Whether a run meets the ``delta <= 3%`` rule; ``None`` below Re_theta 10,000."""
    if re_theta <= RE_THETA_CONSISTENCY_MIN:
        return None
    return eff.delta <= DELTA_THRESHOLD


def collapse_profile(profile: VelocityProfile, window: FitWindow, ln_re: float) -> CollapseResult:
    """Map in-window samples to ``(ln y+, psi)`` with ``alpha = 3 / (2 ln Re)``.

    Samples where psi is undefined are dropped and counted.
    """
    if not ln_re > 0:
        raise DomainError("ln_re must be positive")
    mask = window.mask(profile.y_plus)
    ln_y = np.log(profile.y_plus[mask])
    psi = _psi_array(profile.u_plus[mask], alpha_from_ln_re(ln_re))
    ok = np.isfinite(psi)
    if not ok.any():
        raise CollapseError(f"{profile.run_id}: psi undefined at every in-window sample")
    pts = np.column_stack([ln_y[ok], psi[ok]])
    rms = float(np.sqrt(np.mean((pts[:, 1] - pts[:, 0]) ** 2)))
    return CollapseResult(pts, rms, int(np.count_nonzero(~ok)))


def pooled_rms(results) -> float:
    """RMS of ``psi - ln y+`` over the points of several collapses."""
    pts = np.concatenate([r.points for r in results])
    return float(np.sqrt(np.mean((pts[:, 1] - pts[:, 0]) ** 2)))
