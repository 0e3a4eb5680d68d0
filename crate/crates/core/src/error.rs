use thiserror::Error;

use crate::charts::ChartId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("octonion is not invertible: |a|^2 = {norm_sqr:e}")]
    ZeroDivisor { norm_sqr: f64 },

    #[error("frame is not admissible: {which} = {value:e} exceeds tolerance {tol:e}")]
    OrthogonalityViolation {
        which: &'static str,
        value: f64,
        tol: f64,
    },

    #[error("x -> r x r^-1 is not an automorphism: {reason} (residual {residual:e})")]
    NotInnerAutomorphism { reason: &'static str, residual: f64 },

    #[error("point lies on the excluded pole of chart {chart:?} (margin {margin:e})")]
    PoleSingularity { chart: ChartId, margin: f64 },

    #[error(
        "no translator with real part 1/2 reaches this point: 1 + 2 x2 = {discriminant:e} < 0"
    )]
    NoRealSolution { discriminant: f64 },

    #[error("point is not on the equator: x2 = {x2:e}")]
    NotOnEquator { x2: f64 },

    #[error("vector is not tangent at the base point (residual {residual:e})")]
    TangencyViolation { residual: f64 },

    #[error("base point of the automorphism is outside chart {chart:?}")]
    ChartViolation { chart: ChartId },

    #[error("matrix is not in SU(3): unitarity residual {unitarity:e}, |det - 1| = {det:e}")]
    NonUnitary { unitarity: f64, det: f64 },

    #[error("reconstructed automorphism does not reproduce the matrix (max entry difference {residual:e})")]
    ColumnMismatch { residual: f64 },

    #[error("expected a unit vector, got norm {norm}")]
    NotUnit { norm: f64 },

    #[error("expected a purely imaginary octonion orthogonal to i ({what})")]
    DomainViolation { what: &'static str },

    #[error("Jacobian is singular at preimage {preimage:?}: det = {det:e}")]
    SingularJacobian { preimage: [f64; 6], det: f64 },

    #[error("root polishing did not converge from seed {seed:?} (residual {residual:e})")]
    NoConvergence { seed: [f64; 6], residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
