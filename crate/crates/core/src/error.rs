use crate::scheme::MonotonicityReport;

/// Errors produced anywhere in the solver library.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain length must be positive, got {0}")]
    NonPositiveLength(f64),

    #[error("need at least 4 knots on the coarse grid, got {0}")]
    TooFewNodes(usize),

    #[error("offset fraction must lie strictly inside (0, 1), got {0}")]
    OffsetOutOfRange(f64),

    #[error("diffusion coefficient must be positive, got {0}")]
    NonPositiveDiffusion(f64),

    #[error("convection coefficient must be nonzero")]
    ZeroConvection,

    #[error("reaction bound violated: time step {rho} exceeds 1/A = {bound}")]
    ReactionBoundExceeded { rho: f64, bound: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("node arrays do not interleave strictly at interval {0}")]
    BrokenInterleaving(usize),

    #[error("grid nodes must increase strictly (violated at index {0})")]
    NotIncreasing(usize),

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("time step must be positive, got {0}")]
    NonPositiveTimeStep(f64),

    #[error("spatial step must be positive, got {0}")]
    NonPositiveSpatialStep(f64),

    #[error("final time {t_end} is shorter than one time step {rho}")]
    HorizonTooShort { t_end: f64, rho: f64 },

    #[error("tridiagonal pivot at row {index} is zero or denormal ({pivot:e})")]
    SingularPivot { index: usize, pivot: f64 },

    #[error("dense elimination found no usable pivot in column {0}")]
    SingularMatrix(usize),

    #[error("quadratic elimination degenerates on interval {interval} (zero bracket denominator)")]
    DegenerateElimination { interval: usize },

    #[error("uniform assembly requires constant diffusion, convection and reaction fields")]
    NonConstantCoefficients,

    #[error("uniform assembly requires a uniform dual grid")]
    NonUniformGrid,

    #[error(
        "scheme is not monotone at these parameters (alpha = {}, beta = {}, gamma = {}); \
         increase rho past the reported thresholds or relax strict mode",
        report.alpha, report.beta, report.gamma
    )]
    NotMonotone { report: Box<MonotonicityReport> },

    #[error("assembled row {row} violates the monotone sign pattern")]
    NonMonotoneRow { row: usize },

    #[error("non-finite value produced at step {step}")]
    NonFinite { step: usize },

    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("convergence study needs at least 2 levels, got {0}")]
    TooFewLevels(usize),

    #[error("problem has no exact solution attached")]
    MissingExactSolution,
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
