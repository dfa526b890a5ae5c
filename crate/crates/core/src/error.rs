use thiserror::Error;

use crate::expr::ExprError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parameter {value} lies outside [0, 1]")]
    ParameterOutOfRange { value: f64 },

    #[error("pole {re}{im:+}i lies within {distance:e} of the integration interval")]
    PoleTooClose { re: f64, im: f64, distance: f64 },

    #[error("moment system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("loop {loop_index} is not closed (gap {gap:e}, tolerance {tolerance:e})")]
    OpenLoop {
        loop_index: usize,
        gap: f64,
        tolerance: f64,
    },

    #[error("curve {curve}: {source}")]
    Curve {
        curve: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("patch {patch}: {source}")]
    Patch {
        patch: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("solid is not marked closed; volume rules need a closed boundary")]
    NotClosed,

    #[error("integrand is not finite ({value}) at node {index} ({point})")]
    NonFiniteIntegrand {
        index: usize,
        point: String,
        value: f64,
    },

    #[error("results still change by {change:e} between orders {order} and {}", 2 * order)]
    NotConverged { change: f64, order: usize },

    #[error("least-squares residual {residual:e} exceeds {limit:e}")]
    Residual { residual: f64, limit: f64 },

    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn in_curve(self, curve: usize) -> Error {
        Error::Curve {
            curve,
            source: Box::new(self),
        }
    }

    pub(crate) fn in_patch(self, patch: usize) -> Error {
        Error::Patch {
            patch,
            source: Box::new(self),
        }
    }

    /// True for failures of the numerics (conditioning, non-finite values)
    /// as opposed to malformed input.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::IllConditioned { .. }
            | Error::NonFiniteIntegrand { .. }
            | Error::Residual { .. }
            | Error::NotConverged { .. }
            | Error::PoleTooClose { .. } => true,
            Error::Curve { source, .. } | Error::Patch { source, .. } => source.is_numeric(),
            Error::Expr(e) => e.is_domain(),
            _ => false,
        }
    }
}
