use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tensor violates {symmetry} symmetry (max deviation {deviation:e}, tolerance {tolerance:e})")]
    SymmetryViolation {
        symmetry: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    #[error("field tensor is not antisymmetric (max |F + F^T| = {0:e})")]
    NotAntisymmetric(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("normal must be a unit spacelike vector, got n.n = {0}")]
    NonUnitNormal(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate metric: 1 + xi = {0:e} is not positive")]
    DegenerateMetric(f64),

    #[error("effective metric cannot be normalized and inverted: {0}")]
    NonInvertibleMetric(&'static str),

    #[error("degenerate light cone: 1 + xi cos^2(theta) = {0:e} is not positive")]
    DegenerateCone(f64),

    #[error("degenerate polarization normalization N(theta) = {0:e}")]
    DegenerateNormalization(f64),

    #[error("no propagating mode along direction {direction:?}: leading Fresnel coefficient {leading:e} below {threshold:e}")]
    OmegaDegenerate {
        direction: [f64; 3],
        leading: f64,
        threshold: f64,
    },

    #[error("determinant lacks the omega^2 factor: low coefficients ({c0:e}, {c1:e}) exceed {threshold:e}")]
    MissingOmegaSquaredFactor { c0: f64, c1: f64, threshold: f64 },

    #[error("direction {direction:?} has fewer than two real non-negative phase speeds")]
    NonPropagating { direction: [f64; 3] },

    #[error("metric fit needs at least 10 directions, got {0}")]
    FitUnderdetermined(usize),

    #[error("null-cone data is not described by a single quadratic form (residual rms {0:e})")]
    FitInconsistent(f64),

    #[error("singular denominator: {0}")]
    SingularDenominator(&'static str),

    #[error("tetrad construction failed: {0}")]
    Tetrad(&'static str),
}
