"""Synthetic two-layer profiles with known ground truth.

Region I follows the Reynolds-number-dependent scaling law, region II a
second power law joined continuously at the breakpoint.  The optional
sublayer blend is test scaffolding, not a physical model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .core import (
    DomainError,
    VelocityProfile,
    alpha_from_ln_re,
    prefactor_from_ln_re,
)

# (ln Re, Re_theta) pairs from the three reference runs; used only to give
# synthetic runs a plausible Re_theta label
_REFERENCE_RUNS = ((9.4, 2532.0), (11.33, 14207.0), (12.51, 26612.0))
_slope, _intercept = np.polyfit(
    [r[0] for r in _REFERENCE_RUNS], [math.log(r[1]) for r in _REFERENCE_RUNS], 1
)

SUBLAYER_LINEAR_TOP = 5.0
SUBLAYER_BLEND_TOP = 30.0


def nominal_re_theta(ln_re: float) -> float:
    """Re_theta label for a synthetic run, log-linear in ln Re."""
    return float(math.exp(_slope * ln_re + _intercept))


@dataclass(frozen=True)
class SynthSpec:
    ln_re: float
    breakpoint_y_plus: float = 300.0
    beta: float = 0.2
    y_plus_min: float = 30.0
    y_plus_max: float = 1.0e4
    n_points: int = 200
    noise_rel_sigma: float = 0.0
    seed: int = 0
    include_sublayer: bool = False
    run_id: Optional[str] = None
    re_theta: Optional[float] = None

    def __post_init__(self):
        if not self.ln_re > 0:
            raise DomainError("ln_re must be positive")
        if not (0 < self.y_plus_min < self.breakpoint_y_plus < self.y_plus_max):
            raise DomainError("need 0 < y_plus_min < breakpoint_y_plus < y_plus_max")
        if self.n_points < 20:
            raise DomainError("n_points must be >= 20")
        if self.noise_rel_sigma < 0:
            raise DomainError("noise_rel_sigma must be non-negative")
        if not 0 < self.beta < 1:
            raise DomainError("beta must lie in (0, 1)")
        if self.include_sublayer and self.breakpoint_y_plus <= SUBLAYER_BLEND_TOP:
            raise DomainError("breakpoint must lie above the sublayer blend")

    @property
    def alpha(self) -> float:
        return alpha_from_ln_re(self.ln_re)

    @property
    def a_coef(self) -> float:
        return prefactor_from_ln_re(self.ln_re)

    @property
    def b_coef(self) -> float:
        """Region-II prefactor making the profile continuous at the breakpoint."""
        return self.a_coef * self.breakpoint_y_plus ** (self.alpha - self.beta)

    def grid(self) -> np.ndarray:
        return np.geomspace(self.y_plus_min, self.y_plus_max, self.n_points)


def composite_u_plus(spec: SynthSpec, y_plus: np.ndarray) -> np.ndarray:
    """Noiseless two-layer velocity (plus the sublayer blend if requested)."""
    y = np.asarray(y_plus, dtype=float)
    u = np.where(
        y <= spec.breakpoint_y_plus,
        spec.a_coef * y**spec.alpha,
        spec.b_coef * y**spec.beta,
    )
    if spec.include_sublayer:
        lo, hi = SUBLAYER_LINEAR_TOP, SUBLAYER_BLEND_TOP
        ln_u_hi = math.log(spec.a_coef * hi**spec.alpha)
        t = (np.log(y) - math.log(lo)) / (math.log(hi) - math.log(lo))
        blend = np.exp((1 - t) * math.log(lo) + t * ln_u_hi)
        u = np.where(y < lo, y, np.where(y < hi, blend, u))
    return u


def generate_profile(spec: SynthSpec) -> VelocityProfile:
    """Sample ``spec`` on its log-uniform grid.

    Noise is multiplicative lognormal, ``U+ * exp(sigma * N(0, 1))``, drawn
    from ``numpy.random.default_rng(seed)``.
    """
    y = spec.grid()
    u = composite_u_plus(spec, y)
    if spec.noise_rel_sigma > 0:
        rng = np.random.default_rng(spec.seed)
        u = u * np.exp(spec.noise_rel_sigma * rng.standard_normal(y.size))
    return VelocityProfile(
        run_id=spec.run_id or f"synth-lnre{spec.ln_re:.6g}-s{spec.seed}",
        re_theta=spec.re_theta if spec.re_theta is not None else nominal_re_theta(spec.ln_re),
        y_plus=y,
        u_plus=u,
    )


def generate_ensemble(specs: Sequence[SynthSpec]) -> list[VelocityProfile]:
    """Generate one profile per spec; unnamed specs get ``synth-NNN`` ids."""
    out = []
    for i, spec in enumerate(specs):
        if spec.run_id is None:
            spec = replace(spec, run_id=f"synth-{i:03d}")
        out.append(generate_profile(spec))
    return out
