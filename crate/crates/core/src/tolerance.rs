//! Every numerical threshold used by the library and its acceptance checks.
//!
//! Keep ad-hoc literals out of the modules; add a constant here instead.

/// Maximum deviation of Σ|ψ_j|² from 1 for a valid state.
pub const STATE_NORM: f64 = 1e-12;

/// Entrywise tolerance on M†M = I.
pub const UNITARITY: f64 = 1e-10;

/// Negative probabilities down to this value are round-off and clamp to 0.
pub const NEGATIVE_PROBABILITY: f64 = 1e-12;

/// Maximum deviation of Σ p_j from 1.
pub const PROBABILITY_SUM: f64 = 1e-10;

/// Probabilities below this are exact zeros in the entropy.
pub const ENTROPY_ZERO: f64 = 1e-15;

/// Cross-basis overlaps must equal 1/d to this precision.
pub const UNBIASEDNESS: f64 = 1e-10;

/// Columnwise agreement for the d = 5 generating relations C = U·B etc.
pub const GENERATING_RELATION: f64 = 1e-12;

/// Residual accepted for the Fourier identities.
pub const FOURIER_IDENTITY: f64 = 1e-10;

/// Probability-vector agreement when matching triplets under automorphisms.
pub const AUTOMORPHISM_MATCH: f64 = 1e-9;

/// Closeness of a certified minimum to a class bound when classifying.
pub const CLASS_BOUND: f64 = 1e-3;

/// Agreement between a minimum and its re-parametrized re-run, in units of
/// the optimizer's function tolerance.
pub const CROSS_CHECK_FACTOR: f64 = 10.0;

/// Slack for the two-decimal rounding of the tabulated optimal states.
pub const TABLE_ROUNDING_SLACK: f64 = 2e-2;

/// Matching tolerance when relating tabulated states to each other.
pub const TABLE_RELATION: f64 = 1e-2;

/// POVM completeness Σ_γ π^γ = I.
pub const POVM_COMPLETENESS: f64 = 1e-8;

/// Smallest admissible POVM eigenvalue.
pub const POVM_POSITIVITY: f64 = -1e-10;

/// Hermiticity of POVM elements.
pub const POVM_HERMITICITY: f64 = 1e-10;

/// Bound-safety slack for bounds known exactly (2 log₂ 5, log₂ 5).
pub const EXACT_BOUND_SLACK: f64 = 1e-9;

/// Bound-safety slack for the numerically known S2 bound (five decimals).
pub const NUMERIC_BOUND_SLACK: f64 = 1e-3;

/// Closeness of a certified variance-sum minimum to its class bound, which
/// is only known to three figures.
pub const VARIANCE_CLASS_BOUND: f64 = 1e-2;
