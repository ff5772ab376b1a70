//! Error type shared by every module of the crate.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the symbolic engines and the numerics.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Construction-time parameter validation failed.
    InvalidParams(String),
    /// A scalar series hit its term budget before the tail dropped below
    /// tolerance. Carries the partial sum and the magnitude of the last term.
    SeriesDivergence {
        terms: usize,
        partial: (f64, f64),
        last_term: f64,
    },
    /// A polynomial power exceeded the hard cap of the coefficient ring.
    PowerOverflow { power: u64 },
    /// The Fock ladder would need the square root of a negative box number.
    NotUnitarizable { level: usize, value: f64 },
    /// Argument outside the operation's domain (e.g. binomial with k > n).
    Domain(String),
    /// An integrand tail stayed above tolerance at the largest allowed cutoff.
    QuadratureTail { cutoff: f64, tail: f64 },
    /// A pairing expansion has support outside the requested window.
    WindowInsufficient {
        index: (u32, u32, u32),
        magnitude: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::SeriesDivergence {
                terms,
                partial,
                last_term,
            } => write!(
                f,
                "series did not converge within {terms} terms (partial sum {}+{}i, last term magnitude {:e})",
                partial.0, partial.1, last_term
            ),
            Error::PowerOverflow { power } => {
                write!(f, "polynomial power {power} exceeds the ring cap")
            }
            Error::NotUnitarizable { level, value } => write!(
                f,
                "box number ({level}) = {value} < 0: Fock representation is not unitarizable at these parameters"
            ),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::QuadratureTail { cutoff, tail } => write!(
                f,
                "integrand tail {tail:e} above tolerance at maximum cutoff {cutoff}"
            ),
            Error::WindowInsufficient { index, magnitude } => write!(
                f,
                "expansion support {magnitude:e} at index {index:?} outside the pairing window"
            ),
        }
    }
}

impl core::error::Error for Error {}
