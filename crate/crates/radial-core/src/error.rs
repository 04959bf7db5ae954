use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("profiles live on different mass parameters ({0} vs {1})")]
    MassMismatch(f64, f64),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("field format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
