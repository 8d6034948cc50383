use core::fmt;

/// Errors reported by the library.
///
/// Precondition failures on distortion arguments are split into
/// [`Error::OutOfRange`] (the value lies outside the admissible interval)
/// and [`Error::AboveThreshold`] (the SNR condition fails), so callers can
/// tell the two apart.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter record violates one of its invariants.
    InvalidParameter(&'static str),
    /// Mixing coefficients whose quadratic form vanishes.
    DegenerateCoefficients,
    /// A distortion (or other scalar) argument outside its admissible interval.
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    /// `P/N1` exceeds the threshold at the requested distortion.
    AboveThreshold { d1: f64, snr: f64, threshold: f64 },
    /// A square root or logarithm received an argument outside its domain.
    Domain(&'static str),
    /// The converse functional is undefined because `eta <= 0`.
    BoundUndefined { eta: f64 },
    /// A numerical invariant that the formulas guarantee did not hold.
    Internal(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => f.write_str(msg),
            Error::DegenerateCoefficients => {
                f.write_str("degenerate coefficients: alpha^2 + 2*alpha*beta*rho + beta^2 = 0")
            }
            Error::OutOfRange {
                what,
                value,
                lo,
                hi,
            } => {
                write!(f, "{what} = {value} is outside [{lo}, {hi}]")
            }
            Error::AboveThreshold { d1, snr, threshold } => write!(
                f,
                "P/N1 = {snr} exceeds the threshold {threshold} at d1 = {d1}"
            ),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::BoundUndefined { eta } => {
                write!(f, "converse bound undefined: eta = {eta} is not positive")
            }
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
