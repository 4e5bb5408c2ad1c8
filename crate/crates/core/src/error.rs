use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("zero-norm input cannot be normalized")]
    ZeroNorm,

    #[error("componentwise product of the inputs vanishes")]
    ZeroOverlap,

    #[error("degenerate measurement: no outcome has probability >= {threshold:e}")]
    DegenerateMeasurement { threshold: f64 },

    #[error("map is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("measurement operators are not complete (max deviation {deviation:e})")]
    IncompleteMeasurement { deviation: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
