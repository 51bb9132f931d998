use thiserror::Error;

/// Errors raised by evaluators and verification drivers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("degenerate Meijer-G parameters: {0}")]
    Degenerate(String),
    #[error("series cancellation horizon exceeded (ratio {ratio:.3e}); partial value {partial_re:.6e}{partial_im:+.6e}i")]
    Horizon {
        ratio: f64,
        partial_re: f64,
        partial_im: f64,
    },
    #[error("contour integrand has only polynomial decay: {0}")]
    PolynomialDecay(String),
    #[error("memory budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
