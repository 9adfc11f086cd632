use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient index {needed} requested but only {available} coefficients are available")]
    TruncationExceeded { needed: usize, available: usize },

    #[error("coefficient lists differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Padé approximant [{p}/{q}] does not exist at center {center}: |D| = {abs:.3e} (threshold {threshold:.3e})", abs = value.norm())]
    PadeNotExist {
        p: usize,
        q: usize,
        center: Complex64,
        value: Complex64,
        threshold: f64,
    },

    #[error("denominator degenerates at the center: |B(center)| = {0:.3e}")]
    DegenerateDenominator(f64),

    #[error("evaluation too close to a pole at z = {z}: |B(z)| = {denominator:.3e}")]
    PoleProximity { z: Complex64, denominator: f64 },

    #[error("stated degrees ({stated_p}, {stated_q}) do not match actual degrees ({actual_p:?}, {actual_q:?})")]
    DegreeMismatch {
        stated_p: usize,
        stated_q: usize,
        actual_p: Option<usize>,
        actual_q: Option<usize>,
    },

    #[error("compact specification has no primitives")]
    EmptySpec,

    #[error("exhausting set is empty: {0}")]
    EmptyResult(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("index sequence exhausted: no pair with p > {min_degree} (largest p is {max_p})")]
    IndexExhausted { min_degree: usize, max_p: usize },

    #[error("least-squares basis collapsed at degree {degree} (condition estimate {condition:.3e})")]
    IllConditioned { degree: usize, condition: f64 },

    #[error("need at least {needed} fit points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("polynomial fit did not reach {bound:.3e}: best residual {residual:.3e} at degree {degree}")]
    FitFailed { degree: usize, residual: f64, bound: f64 },

    #[error("no admissible perturbation found for (p, q) = ({p}, {q}): {reason}")]
    PerturbationFailed { p: usize, q: usize, reason: String },

    #[error("the compact set K contains the origin")]
    OriginInK,

    #[error("compact sets overlap: min distance {distance:.3e} between {left} and {right}")]
    Overlap {
        left: &'static str,
        right: &'static str,
        distance: f64,
    },

    #[error("evaluation failed at z = {point}: {source}")]
    AtPoint {
        point: Complex64,
        #[source]
        source: Box<Error>,
    },

    #[error("requirement {index} failed: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Strips `AtPoint` and `Step` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } | Error::Step { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn at(self, point: Complex64) -> Error {
        match self {
            e @ (Error::PoleProximity { .. } | Error::AtPoint { .. }) => e,
            e => Error::AtPoint {
                point,
                source: Box::new(e),
            },
        }
    }
}
