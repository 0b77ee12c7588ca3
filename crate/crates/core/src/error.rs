use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A band plan without bands.
    EmptyPlan,
    InvalidPlan(String),
    /// Channel spacing does not exceed the symbol rate.
    ChannelOverlap { spacing_ghz: f64, symbol_rate_gbd: f64 },
    OutOfRange {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    /// A tabulated input failed validation at `row` (0-based data row).
    InvalidTable { row: usize, reason: &'static str },
    TooFewPoints { found: usize, required: usize },
    InvalidParameter { name: &'static str, reason: String },
    NotConverged { iterations: usize, residual: f64 },
    /// The integrator produced a negative or non-finite power.
    NegativePower { z_km: f64, wave: usize },
    MismatchedProfiles,
    ZeroInput(&'static str),
    ZeroThroughput,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the Raman boundary-value solver, as opposed to
    /// input validation problems.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Error::NotConverged { .. } | Error::NegativePower { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyPlan => write!(f, "band plan has no bands"),
            Error::InvalidPlan(msg) => write!(f, "invalid band plan: {msg}"),
            Error::ChannelOverlap {
                spacing_ghz,
                symbol_rate_gbd,
            } => write!(
                f,
                "channel spacing {spacing_ghz} GHz must exceed the symbol rate {symbol_rate_gbd} GBd"
            ),
            Error::OutOfRange {
                quantity,
                value,
                min,
                max,
            } => write!(f, "{quantity} = {value} outside supported range [{min}, {max}]"),
            Error::InvalidTable { row, reason } => write!(f, "row {row}: {reason}"),
            Error::TooFewPoints { found, required } => {
                write!(f, "table has {found} rows, at least {required} required")
            }
            Error::InvalidParameter { name, reason } => write!(f, "{name}: {reason}"),
            Error::NotConverged {
                iterations,
                residual,
            } => write!(
                f,
                "Raman boundary iteration did not converge after {iterations} iterations (residual {residual:e})"
            ),
            Error::NegativePower { z_km, wave } => write!(
                f,
                "integrator step-size fault: wave {wave} went negative at z = {z_km:.3} km"
            ),
            Error::MismatchedProfiles => write!(f, "power profiles do not share a grid"),
            Error::ZeroInput(what) => write!(f, "{what} is zero"),
            Error::ZeroThroughput => write!(f, "throughput is zero"),
        }
    }
}

impl core::error::Error for Error {}
