use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid viewing conditions: {0}")]
    InvalidViewingConditions(String),

    /// The inverse appearance model has no solution for the requested point.
    #[error("inverse color appearance model undefined: {0}")]
    Math(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// No lightness in [0, 100] yields a displayable color for this hue/chroma.
    #[error("point {index} (a'={ap:.4}, b'={bp:.4}) is outside the sRGB gamut at every lightness")]
    InfeasiblePoint { index: usize, ap: f64, bp: f64 },

    #[error(
        "no straight J' line fits within the valid lightness bounds ({detail}); \
         use the fit-original linearization instead"
    )]
    NoFeasibleLine { detail: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown colormap '{name}'; registered maps: {}", available.join(", "))]
    UnknownColormap { name: String, available: Vec<String> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("image: {0}")]
    Image(#[from] image::ImageError),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
