"""Exact information-theoretic analysis of boolean functions on the
hypercube under the binary symmetric channel."""

from .hypercube import (
    BooleanFunction,
    DomainError,
    FourierSpectrum,
    NoiseParameter,
    RealFunction,
    apply_noise,
    complement_point,
    even_odd_parts,
    inverse_wht,
    wht,
)
from .info import (
    ConjectureGapResult,
    InternalConsistencyError,
    MutualInformationResult,
    binary_entropy,
    capacity_series,
    channel_capacity,
    conjecture_gap,
    ent,
    lambda_entropy_bound,
    mutual_information,
)
from .checks import (
    FourthMomentReport,
    Lemma13Terms,
    SlopeCheckResult,
    SubcubeFit,
    first_level_deficit,
    fourth_moment_report,
    lemma13_slope_check,
    lemma13_terms,
    lemma41_check,
    nearest_subcube,
    pointwise_log_identity,
    quartic_bound_check,
    variance_identity_check,
)
from .search import (
    CanonicalOrbit,
    SearchTrace,
    VerificationReport,
    canonicalize,
    hill_climb,
    orbit_members,
    verify_exhaustive,
    verify_sampled,
)
from .families import (
    constant,
    dictator,
    majority,
    parity,
    parse_function_spec,
    random_function,
    subcube_indicator,
)
from .suites import run_check_suite

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
