//! Error type shared by all engines.

use alloc::string::String;
use alloc::vec::Vec;

/// Errors produced by the geometry engines.
///
/// Numerical degeneracies that the underlying theory excludes by hypothesis
/// (null intermediate vectors, null curve segments, ambiguous osculating
/// order) are reported as errors rather than silently absorbed, so callers
/// can distinguish "the hypothesis fails here" from "the computation failed".
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeoError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("intermediate vector {index} is numerically null (|<w,w>|/|w|^2 = {value:.3e})")]
    NullIntermediate { index: usize, value: f64 },

    #[error("input vectors dependent within tolerance at position {index}")]
    RankDeficient { index: usize },

    #[error("parameter {value} too close to the domain boundary for an order-{order} stencil")]
    EvaluationDomain { value: f64, order: usize },

    #[error("immersion singular at the probed point (tangent rank {got} < {expected})")]
    ImmersionSingular { expected: usize, got: usize },

    #[error("induced metric index {got} does not match the declared index {expected}")]
    IndexMismatch { expected: usize, got: usize },

    #[error("curve tangent is numerically null near t = {t}")]
    NullSegment { t: f64 },

    #[error("osculating order ambiguous: curvature {value:.3e} falls in the dead band")]
    OrderAmbiguous { value: f64 },

    #[error("osculating order varies across samples: {observed:?}")]
    InconsistentOrder { observed: Vec<usize> },

    #[error("vector has a tangential component above tolerance ({value:.3e})")]
    NotNormal { value: f64 },

    #[error("trajectory left the chart domain at t = {t}")]
    LeftDomain { t: f64 },

    #[error("continuation stalled at step {step}: corrector failed with step halving exhausted")]
    ContinuationStall { step: usize },

    #[error("normal section tangent degenerated to null at s = {s}")]
    NullSection { s: f64 },

    #[error("normal section is not a geodesic (tangential acceleration {value:.3e})")]
    NotGeodesicSection { value: f64 },

    #[error("invalid geometry: {reason}")]
    InvalidGeometry { reason: String },

    #[error("unknown catalog entry '{name}'")]
    UnknownGeometry { name: String },

    #[error("numerical solver failed: {reason}")]
    SolverFailure { reason: String },
}
