"""Heralded squeezed cat states from two squeezed vacua, a beam splitter and photon counting."""

from .compare import (
    MethodResult,
    SweepSpec,
    conventional_ps_success,
    gps_success,
    homodyne_method_success,
    sweep,
)
from .errors import (
    ConditionViolated,
    DegenerateState,
    DomainError,
    GPSError,
    NearConditionWarning,
    NonConverged,
    NoSolution,
    TruncationError,
    ZeroProbability,
)
from .gaussian import (
    BeamSplitter,
    SigmaMatrix,
    SqueezerPair,
    build_sigma,
    build_sigma_inverse,
    db_to_r,
    gps_sigma,
    output_squeezing,
    r_to_db,
    solve_reflectance,
)
from .herald import HeraldOutcome, prob_closed
from .targets import CatTarget, best_cat_fit, fidelity

__all__ = [
    "BeamSplitter", "CatTarget", "ConditionViolated", "DegenerateState", "DomainError", "GPSError",
    "HeraldOutcome", "MethodResult", "NearConditionWarning", "NoSolution", "NonConverged", "SigmaMatrix",
    "SqueezerPair", "SweepSpec", "TruncationError", "ZeroProbability", "best_cat_fit", "build_sigma",
    "build_sigma_inverse", "conventional_ps_success", "db_to_r", "fidelity", "gps_sigma", "gps_success",
    "homodyne_method_success", "output_squeezing", "prob_closed", "r_to_db", "solve_reflectance",
    "sweep",
]
