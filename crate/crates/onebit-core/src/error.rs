use core::fmt;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of the function.
    Domain { what: &'static str, value: f64 },
    /// Argument inside the domain but beyond the supported evaluation range.
    Range { what: &'static str, value: f64, limit: f64 },
    /// A probe input of zero where a nonzero one is required.
    ZeroInput,
    /// Two sequences that must have equal length do not.
    LengthMismatch { expected: usize, found: usize },
    /// Quantizer or channel kinds that cannot be combined.
    KindMismatch(&'static str),
    /// Malformed input distribution.
    InvalidInput(&'static str),
    /// Malformed grid argument.
    InvalidGrid(&'static str),
    /// Adaptive quadrature hit its subdivision limit.
    Quadrature { estimate: f64, error: f64 },
    /// Monte Carlo trial count that is zero or too large to index.
    TrialCount(u64),
    /// Degenerate channel with no capacity formula.
    DegenerateChannel,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::Range { what, value, limit } => {
                write!(f, "{what} = {value} exceeds supported range {limit}")
            }
            Error::ZeroInput => f.write_str("probe input must be nonzero"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::KindMismatch(msg) => write!(f, "kind mismatch: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input distribution: {msg}"),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::Quadrature { estimate, error } => {
                write!(f, "quadrature did not converge: estimate {estimate}, error {error}")
            }
            Error::TrialCount(n) => write!(f, "invalid trial count {n}"),
            Error::DegenerateChannel => f.write_str("degenerate channel: crossover sum is one"),
        }
    }
}

impl core::error::Error for Error {}
