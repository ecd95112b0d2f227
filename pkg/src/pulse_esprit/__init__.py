"""Blind super-resolution of pulse streams from multi-snapshot Fourier data.

Locations of S overlapping pulses of unknown shape are recovered from noisy
Fourier samples on shifted sub-array grids via the rotation between the two
signal-subspace blocks; gains and amplitudes follow by alternating least
squares. The theory module evaluates the deterministic and high-probability
matching-distance bounds, and the experiments module reproduces the published
Monte Carlo studies at configurable scale.
"""

from .errors import (
    BelowThreshold,
    CardinalityMismatch,
    ConfigError,
    DegenerateM,
    DimensionMismatch,
    EigenFailure,
    EmptySelection,
    IllConditionedSubarray,
    InvalidM,
    InvalidProbability,
    MissingField,
    MissingTilde,
    NegativeSigma,
    PulseEspritError,
    RankDeficient,
    RecoverableTrialError,
    SchemaError,
    TooFewLocations,
    UnboundedSupport,
    UnknownPreset,
    UnsupportedShape,
    ZeroGain,
    ZeroSignal,
)
from .esprit import EstimationResult, esprit_locate, estimate_gains, solve
from .experiments import (
    CSV_COLUMNS,
    SweepConfig,
    TrialPoint,
    TrialRecord,
    build_points,
    point_locations,
    preset,
    preset_names,
    read_records,
    run_sweep,
    run_trial,
    trial_seed,
    verify_bounds,
)
from .metrics import (
    SpectralStats,
    dynamic_range,
    matching_distance,
    min_separation,
    pic_violation,
    vandermonde_stats,
)
from .signal_model import (
    Dirac,
    GroundTruth,
    MeasurementSet,
    PulseShape,
    Sinc,
    Tabulated,
    TruncatedCosineSquared,
    add_awgn,
    build_system,
    fourier_value,
    parse_pulse,
    sigma_from_snr,
    steering_matrix,
    synthesize,
)
from .subarrays import (
    SubArrayPair,
    max_overlap_design,
    random_doublet_design,
    rotation_invariance_residual,
    select_rows,
)
from .subspace import (
    SubspaceEstimate,
    empirical_covariance,
    oracle_subspace,
    signal_subspace,
    subspace_distance,
)
from .theory import (
    PropConditionCheck,
    TheoryContext,
    bernstein_pic_limit,
    check_prop_condition,
    davis_kahan_bound,
    davis_kahan_condition,
    moitra_kappa_bound,
    moitra_sigma_lower,
    prop1_bound,
    sigmaU1_lower,
    thm1_bound,
    thm2_bound,
)

__version__ = "0.1.0"
