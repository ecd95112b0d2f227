"""Exception taxonomy.

Every failure mode that callers are expected to branch on gets its own class.
The Monte Carlo driver catches RecoverableTrialError subclasses and records
their class name in the error_code column instead of aborting a sweep; the
remaining classes indicate caller mistakes (bad config, bad schema) and
propagate.
"""


class PulseEspritError(Exception):
    """Base class for all package-specific errors."""


# --- caller / configuration errors -------------------------------------------

class ConfigError(PulseEspritError):
    """Unknown or malformed configuration key, section, or value."""


class SchemaError(PulseEspritError):
    """A file does not match its documented column schema."""


class UnknownPreset(ConfigError):
    """Requested experiment preset name does not exist."""


class MissingField(PulseEspritError):
    """A theory-context field required by a bound evaluator is unset."""


class MissingTilde(MissingField):
    """Doublet-design bound requested without pool (tilde) quantities."""


class UnsupportedShape(PulseEspritError):
    """Pulse shape cannot be evaluated (bad table, quadrature failure)."""


class UnboundedSupport(PulseEspritError):
    """Operation requires a time-limited pulse (e.g. smoothness limits)."""


class InvalidM(ConfigError):
    """Sub-array size below the minimum for the requested design."""


class InvalidProbability(ConfigError):
    """Doublet selection probability M/M_tilde outside (0, 1]."""


class NegativeSigma(ConfigError):
    """Noise level must be nonnegative."""


class ZeroSignal(PulseEspritError):
    """SNR is undefined for an all-zero measurement matrix."""


class DimensionMismatch(PulseEspritError):
    """Array shapes inconsistent with the sub-array pair or each other."""


class CardinalityMismatch(DimensionMismatch):
    """Matching distance needs equally sized location sets."""


class TooFewLocations(PulseEspritError):
    """Separation undefined for fewer than two locations."""


class BelowThreshold(PulseEspritError):
    """Conditioning bound requires M > 1/Delta + 1."""


class DegenerateM(PulseEspritError):
    """Error bound degenerates: 1 - 2 rho^2 S / M <= 0."""


# --- recoverable per-trial failures -------------------------------------------

class RecoverableTrialError(PulseEspritError):
    """Failures a sweep records per trial instead of raising."""


class EmptySelection(RecoverableTrialError):
    """Random doublet selection came back empty 100 times in a row."""


class RankDeficient(RecoverableTrialError):
    """Matrix numerically rank-deficient where full column rank is needed."""


class IllConditionedSubarray(RecoverableTrialError):
    """sigma_S of the first sub-array block is numerically zero."""


class EigenFailure(RecoverableTrialError):
    """Eigenvalue or singular value iteration did not converge."""


class ZeroGain(PulseEspritError):
    """Gain dynamic range undefined: some |G(w)| is exactly zero."""
