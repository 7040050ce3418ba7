//! Exact stem/slice function calculus over Clifford algebras R_m (m odd).
//!
//! The crate provides:
//! - exact Clifford arithmetic ([`clifford`]),
//! - stem polynomials in n complexified variables and the induced slice
//!   functions ([`stem`], [`slice`]),
//! - iterated Laplace and Dirac operators with closed-form coefficient
//!   tables ([`harmonic`]),
//! - classical, slice, and simultaneous Almansi-type decompositions and the
//!   higher-order Fueter map ([`almansi`]),
//! - an independent finite-difference oracle for cross-checking symbolic
//!   results at rational sample points ([`oracle`]).
//!
//! All symbolic computation is exact over arbitrary-precision rationals;
//! floating point enters only through the numeric oracle.

#![forbid(unsafe_code)]

pub mod error;
pub mod scalar;
pub mod clifford;
pub mod stem;
pub mod slice;
pub mod harmonic;
pub mod almansi;
pub mod oracle;
pub mod expr;
pub mod jsonio;
pub mod battery;
pub mod verify;

pub use clifford::{format_blade, gamma, parse_blade, Multivector, ParavectorParts};
pub use error::{Error, Result};
pub use scalar::{rat_from_str, rat_to_str, Rat, Scalar};
pub use slice::{Point, SliceFunction};
pub use stem::{LaurentPoly, Monomial, StemPolynomial};
