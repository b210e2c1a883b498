//! Exact q-series verification engine.
//!
//! The crate expands theta functions, q-Pochhammer products, Entry-12 style
//! continued fractions, Andrews–Bressoud dissections and colored-partition
//! generating functions as truncated Laurent series with big-integer
//! coefficients, and checks identities between them coefficient by
//! coefficient.

pub mod cf_identities;
pub mod cfrac;
pub mod dissection;
pub mod error;
pub mod partitions;
pub mod series;
pub mod theta;
pub mod verifier;

pub use error::{Error, Result};
pub use series::{exponent, Agreement, Exponent, LatticeSeries, Polynomial, SeriesRecord, Witness};
pub use theta::{PochhammerSpec, SignedMonomial};
