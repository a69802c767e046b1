use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid configuration: {field} = {value} ({reason})")]
    InvalidConfig { field: &'static str, value: f64, reason: &'static str },

    #[error("config error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular mode: eigenvector undefined at omega = 0")]
    SingularMode,

    #[error("degenerate mode: omega_n^2 = 3 makes the first-order friction shift singular")]
    DegenerateMode,

    #[error("excitation energy is defined only for real (oscillatory) mode frequencies, got {0}")]
    ComplexFrequency(num_complex::Complex64),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
