use thiserror::Error;

use crate::series::Exponent;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scale mismatch: 1/{left} vs 1/{right} (rescale first)")]
    ScaleMismatch { left: u32, right: u32 },

    #[error("exponent {exponent} is not on the lattice 1/{scale}")]
    OffLattice { exponent: Exponent, scale: u32 },

    #[error("leading coefficient {0} is not a unit")]
    NonUnit(String),

    #[error("the zero series has no inverse")]
    ZeroSeries,

    #[error("lattice index {index} lies beyond the truncation order {trunc}")]
    BeyondTruncation { index: i64, trunc: i64 },

    #[error("operation requires integer exponents, found scale 1/{0}")]
    NotIntegral(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no stabilization by depth {depth_cap}; consecutive convergents agree through lattice index {best_order}")]
    NoStabilization { depth_cap: usize, best_order: i64 },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("could not reach truncation order {0}")]
    PrecisionNotReached(i64),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
