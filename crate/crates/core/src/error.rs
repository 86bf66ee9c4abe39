use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of an operation (zero vector, n < 2, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The curve's jets lose rank where full rank is required.
    #[error("curve is degenerate at t = {t}: {detail}")]
    Degenerate { t: f64, detail: String },

    /// A numerical decision could not be made reliably.
    #[error("precision error: {0}")]
    Precision(String),

    /// A geometric precondition failed (typically a non-convex input).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Root count and ambient dimension have different parity, so the point
    /// sits (numerically) on the discriminant.
    #[error("point lies on the discriminant: {0}")]
    OnDiscriminant(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn degenerate(t: f64, detail: impl Into<String>) -> Self {
        Error::Degenerate {
            t,
            detail: detail.into(),
        }
    }

    /// True for errors that a caller can usually cure by perturbing the input.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Precision(_) | Error::OnDiscriminant(_))
    }
}
