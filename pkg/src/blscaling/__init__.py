"""Two-layer scaling-law analysis of turbulent boundary-layer velocity profiles."""

__version__ = "0.1.0"

from .core import (
    BLScalingError,
    CollapseResult,
    DegenerateAbscissaError,
    DegenerateFitError,
    DomainError,
    EffectiveReynolds,
    FitWindow,
    GammaSeries,
    InsufficientDataError,
    LogLawFit,
    MetadataRequiredError,
    NoTwoLayerStructure,
    PowerLawFit,
    ProfileError,
    TwoLayerFit,
    VelocityProfile,
    predict_scaling_law,
    psi_transform,
)
from .diagnostics import (
    ConstancyVerdict,
    GammaEnsemble,
    TableRow,
    build_table,
    constancy_check,
    format_table,
    gamma_ensemble_average,
    gamma_series,
)
from .fitting import (
    FitConfig,
    fit_log_law,
    fit_power_law,
    fit_two_layer,
    select_intermediate_window,
)
from .io import Catalog, ParseError, format_profile, load_catalog, parse_profile, read_profile, write_profile
from .pipeline import PipelineConfig, PipelineResult, RunReport, analyze_profile, run_pipeline
from .report import emit_outputs
from .scaling import (
    NonphysicalPrefactorError,
    collapse_profile,
    effective_reynolds,
    length_scale,
    solve_ln_re,
)
from .synth import SynthSpec, generate_ensemble, generate_profile

__all__ = [
    "BLScalingError",
    "Catalog",
    "CollapseResult",
    "ConstancyVerdict",
    "DegenerateAbscissaError",
    "DegenerateFitError",
    "DomainError",
    "EffectiveReynolds",
    "FitConfig",
    "FitWindow",
    "GammaEnsemble",
    "GammaSeries",
    "InsufficientDataError",
    "LogLawFit",
    "MetadataRequiredError",
    "NoTwoLayerStructure",
    "NonphysicalPrefactorError",
    "ParseError",
    "PipelineConfig",
    "PipelineResult",
    "PowerLawFit",
    "ProfileError",
    "RunReport",
    "SynthSpec",
    "TableRow",
    "TwoLayerFit",
    "VelocityProfile",
    "analyze_profile",
    "build_table",
    "collapse_profile",
    "constancy_check",
    "effective_reynolds",
    "emit_outputs",
    "fit_log_law",
    "fit_power_law",
    "fit_two_layer",
    "format_profile",
    "format_table",
    "gamma_ensemble_average",
    "gamma_series",
    "generate_ensemble",
    "generate_profile",
    "length_scale",
    "load_catalog",
    "parse_profile",
    "predict_scaling_law",
    "psi_transform",
    "read_profile",
    "run_pipeline",
    "select_intermediate_window",
    "solve_ln_re",
    "write_profile",
]
