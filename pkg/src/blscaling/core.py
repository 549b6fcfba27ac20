"""Domain types and pure evaluators for wall-unit velocity profiles.

All stored fits use natural logarithms; base-10 coordinates only appear
in emitted plot data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

SQRT3 = math.sqrt(3.0)

# slack on the free-stream ceiling max(U+) <= U_inf / u_tau
FREE_STREAM_SLACK = 0.02


class BLScalingError(Exception):
    """Base class for all package errors."""


class DomainError(BLScalingError, ValueError):
    """An argument lies outside the domain of a formula."""


class ProfileError(BLScalingError, ValueError):
    """A velocity profile violates its invariants."""


class InsufficientDataError(BLScalingError):
    """Too few samples to carry out a fit."""


class DegenerateFitError(BLScalingError):
    """A fit produced parameters outside their admissible range."""


class DegenerateAbscissaError(DegenerateFitError):
    """All abscissae inside the fit window coincide."""


class MetadataRequiredError(BLScalingError):
    """An operation needs profile metadata that is absent."""


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class VelocityProfile:
    """One experimental run in wall units.

    ``y_plus`` and ``u_plus`` are stored as read-only float arrays.
    """

    run_id: str
    re_theta: float
    y_plus: np.ndarray
    u_plus: np.ndarray
    u_inf: Optional[float] = None
    u_tau: Optional[float] = None
    nu: Optional[float] = None

    def __post_init__(self):
        y = _frozen_array(self.y_plus)
        u = _frozen_array(self.u_plus)
        object.__setattr__(self, "y_plus", y)
        object.__setattr__(self, "u_plus", u)

        if y.ndim != 1 or u.ndim != 1 or y.shape != u.shape:
            raise ProfileError(f"{self.run_id}: y_plus and u_plus must be 1-D of equal length")
        if y.size == 0:
            raise ProfileError(f"{self.run_id}: samples nonempty")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(u))):
            raise ProfileError(f"{self.run_id}: non-finite sample")
        if np.any(y <= 0) or np.any(u <= 0):
            raise ProfileError(f"{self.run_id}: every y+ and U+ must be positive")
        if np.any(np.diff(y) <= 0):
            raise ProfileError(f"{self.run_id}: y+ must be strictly increasing")
        if not (self.re_theta > 0 and math.isfinite(self.re_theta)):
            raise ProfileError(f"{self.run_id}: re_theta must be positive")
        for name in ("u_inf", "u_tau", "nu"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ProfileError(f"{self.run_id}: {name} must be positive when given")
        if self.u_inf is not None and self.u_tau is not None:
            ceiling = self.u_inf / self.u_tau * (1.0 + FREE_STREAM_SLACK)
            if u.max() > ceiling:
                raise ProfileError(
                    f"{self.run_id}: max U+ = {u.max():.6g} exceeds free-stream ceiling {ceiling:.6g}"
                )

    def __len__(self):
        return self.y_plus.size

    @property
    def samples(self) -> list[Tuple[float, float]]:
        return list(zip(self.y_plus.tolist(), self.u_plus.tolist()))

    def __eq__(self, other):
        if not isinstance(other, VelocityProfile):
            return NotImplemented
        return (
            self.run_id == other.run_id
            and self.re_theta == other.re_theta
            and self.u_inf == other.u_inf
            and self.u_tau == other.u_tau
            and self.nu == other.nu
            and np.array_equal(self.y_plus, other.y_plus)
            and np.array_equal(self.u_plus, other.u_plus)
        )

    __hash__ = None


@dataclass(frozen=True)
class FitWindow:
    """Closed interval ``[lo_y_plus, hi_y_plus]`` of wall distances."""

    lo_y_plus: float
    hi_y_plus: float

    def __post_init__(self):
        if not (0 < self.lo_y_plus < self.hi_y_plus):
            raise DomainError(f"invalid window [{self.lo_y_plus}, {self.hi_y_plus}]")

    def mask(self, y_plus: np.ndarray) -> np.ndarray:
        return (y_plus >= self.lo_y_plus) & (y_plus <= self.hi_y_plus)

    def count(self, profile: VelocityProfile) -> int:
        return int(np.count_nonzero(self.mask(profile.y_plus)))


@dataclass(frozen=True)
class PowerLawFit:
    """``U+ = prefactor * (y+)**exponent`` fitted in log-log coordinates."""

    exponent: float
    prefactor: float
    exponent_stderr: float
    prefactor_rel_stderr: float
    rms_log_residual: float
    n_points: int
    window: FitWindow

    def __post_init__(self):
        if not self.prefactor > 0:
            raise DegenerateFitError(f"prefactor {self.prefactor} must be positive")
        if not 0 < self.exponent < 1:
            raise DegenerateFitError(f"exponent {self.exponent} outside (0, 1)")
        if self.n_points < 3:
            raise InsufficientDataError("power-law fit needs at least 3 points")

    def __call__(self, y_plus):
        return self.prefactor * np.asarray(y_plus, dtype=float) ** self.exponent


@dataclass(frozen=True)
class TwoLayerFit:
    region1: PowerLawFit
    region2: PowerLawFit
    breakpoint_y_plus: float
    total_sse_log: float


@dataclass(frozen=True)
class NoTwoLayerStructure:
    """Outcome of a two-layer fit whose best split is not a genuine break.

    This is a result, not an error: the profile is adequately described by
    a single straight line in the fit coordinates (or no admissible split
    exists).
    """

    run_id: str
    reason: str
    best_breakpoint_y_plus: Optional[float] = None
    slope_gap: Optional[float] = None


@dataclass(frozen=True)
class EffectiveReynolds:
    ln_re1: float
    ln_re2: float
    ln_re: float
    delta: float
    lambda_scale: Optional[float] = None


@dataclass(frozen=True)
class LogLawFit:
    """``U+ = ln(y+) / kappa + b_const`` fitted in semilog coordinates."""

    kappa: float
    b_const: float
    m1: float
    m0: float
    rms_residual: float
    n_points: int
    kappa_stderr: float = float("nan")
    window: Optional[FitWindow] = None

    def __post_init__(self):
        if not self.kappa > 0:
            raise DegenerateFitError(f"kappa {self.kappa} must be positive")
        if self.n_points < 3:
            raise InsufficientDataError("log-law fit needs at least 3 points")


@dataclass(frozen=True)
class CollapseResult:
    points: np.ndarray  # shape (n, 2): ln y+, psi
    rms_off_bisectrix: float
    n_excluded: int

    @property
    def ln_y_plus(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def psi(self) -> np.ndarray:
        return self.points[:, 1]


@dataclass(frozen=True)
class GammaSeries:
    """Diagnostic function at interior samples.

    The one-sided endpoint estimates are kept apart in ``endpoints`` and
    never enter constancy checks.
    """

    points: np.ndarray  # shape (n - 2, 2): y+, gamma
    endpoints: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))

    @property
    def y_plus(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def gamma(self) -> np.ndarray:
        return self.points[:, 1]


def alpha_from_ln_re(ln_re):
    """Region-I exponent ``3 / (2 ln Re)``."""
    return 1.5 / ln_re


def prefactor_from_ln_re(ln_re):
    """Region-I prefactor ``ln Re / sqrt(3) + 5/2``."""
    return ln_re / SQRT3 + 2.5


def predict_scaling_law(y_plus, ln_re):
    """Evaluate the Reynolds-number-dependent scaling law.

    Parameters
    ----------
    y_plus : float or array_like
        Wall distance in wall units, strictly positive.
    ln_re : float
        Natural log of the effective Reynolds number, strictly positive.

    Returns
    -------
    float or numpy.ndarray
        ``(ln_re / sqrt(3) + 5/2) * y_plus ** (3 / (2 ln_re))``.
    """
    if not (np.isscalar(ln_re) and ln_re > 0):
        raise DomainError(f"ln_re must be a positive scalar, got {ln_re!r}")
    y = np.asarray(y_plus, dtype=float)
    if np.any(~(y > 0)):
        raise DomainError("y_plus must be positive")
    u = prefactor_from_ln_re(ln_re) * y ** alpha_from_ln_re(ln_re)
    return float(u) if u.ndim == 0 else u


def _psi_array(u_plus: np.ndarray, alpha: float) -> np.ndarray:
    # NaN where the log argument is not positive
    arg = 2.0 * alpha * u_plus / (SQRT3 + 5.0 * alpha)
    out = np.full(arg.shape, np.nan)
    ok = arg > 0
    out[ok] = np.log(arg[ok]) / alpha
    return out


def psi_transform(u_plus, alpha):
    """Map velocities onto the universal coordinate ``psi``.

    ``psi = ln(2 alpha U+ / (sqrt(3) + 5 alpha)) / alpha``; for data that obey
    the scaling law with ``alpha = 3 / (2 ln Re)`` this equals ``ln y+``.

    Non-positive velocities raise ``DomainError``.  Array input returns NaN
    (the undefined marker) wherever the logarithm's argument is not positive.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    u = np.asarray(u_plus, dtype=float)
    if u.ndim == 0:
        if not u > 0:
            raise DomainError(f"u_plus must be positive, got {u_plus!r}")
        return float(_psi_array(u.reshape(1), alpha)[0])
    return _psi_array(u, alpha)
