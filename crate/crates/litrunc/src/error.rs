use thiserror::Error;

/// Crate-wide error type.
///
/// Exit-code mapping for the CLI: `Domain`/`NoRoot`/`NoSignChange`/
/// `Quadrature` are domain errors (1), `ResourceLimit` is 2, `Io`/`Parse`
/// are I/O errors (3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {place}: {message}")]
    Domain { place: &'static str, message: String },

    #[error("resource limit: {message} (configured maximum {limit})")]
    ResourceLimit { message: String, limit: u64 },

    #[error(
        "quadrature did not converge: requested relative tolerance {requested:.3e}, \
         achieved {achieved:.3e} after {evaluations} evaluations"
    )]
    Quadrature {
        requested: f64,
        achieved: f64,
        evaluations: usize,
    },

    #[error("no root: {message}")]
    NoRoot { message: String },

    #[error(
        "no sign change on [{lo}, {hi}]: f(lo) = {f_lo:.6e}, f(hi) = {f_hi:.6e}"
    )]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("cache file corrupt at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(place: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            place,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
