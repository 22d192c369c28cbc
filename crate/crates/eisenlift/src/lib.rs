//! Exact q-expansions of level-N Eisenstein series, the modular-symbol
//! decomposition of cycles on Y₁(N), and the closed-form theta lift that sends
//! those cycles to weight-two Eisenstein series.
//!
//! Everything is exact: rationals are arbitrary precision and the coefficient
//! field of every series is Q(ζ_N) in a canonical power basis, so identities
//! are checked by plain equality.
//!
//! ```
//! use eisenlift::eisenstein::expand_g;
//!
//! let g = expand_g(1, 1, 5, 5).unwrap();
//! assert_eq!(g.to_string(), "3/10 + q + q^2 + q^3");
//! ```

pub mod eisenstein;
pub mod exactcore;
pub mod modsym;
pub mod qseries;
pub mod realquad;
pub mod thetalift;

mod error;
mod wire;

pub use error::{Error, Result};
pub use exactcore::{CycElem, Rat};
pub use modsym::{Cusp, MatZ};
pub use qseries::QSeries;
