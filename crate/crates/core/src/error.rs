use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("complex dimension must be at least 2, got {0}")]
    ComplexDim(usize),

    #[error("vector is not a valid point of the model (form value {0})")]
    NotAPoint(f64),

    #[error("tangent vectors are based at different points")]
    BaseMismatch,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate chart: smallest tangent singular value {sigma:.3e}")]
    DegenerateChart { sigma: f64 },

    #[error("noisy derivative: shape operator asymmetry {asymmetry:.3e} exceeds threshold")]
    NoisyDerivative { asymmetry: f64 },

    #[error("point is not Hopf: defect {defect:.3e} above tolerance {tol:.1e}")]
    NotHopf { defect: f64, tol: f64 },

    #[error("radius {radius} is focal (within {guard:.0e} of a cotangent pole)")]
    FocalDegeneracy { radius: f64, guard: f64 },

    #[error("singular point: |grad f| = {grad_norm:.3e}")]
    SingularPoint { grad_norm: f64 },

    #[error("point is off the variety: |f| = {residual:.3e}")]
    OffVariety { residual: f64 },

    #[error("parameter {value} outside the domain [{lo}, {hi}] on axis {axis}")]
    OutOfDomain {
        axis: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, GeomError>;
