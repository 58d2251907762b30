//! Exact polynomial arithmetic and identity certificates.

pub mod poly;
pub mod ratfunc;
pub mod univariate;
pub mod verify;

pub use poly::{q, qr, Monomial, Poly};
pub use ratfunc::RatFunc;
pub use univariate::{Qt, UPoly};
pub use verify::{Certificate, CoverSource, Evidence, RationalMap, Relation, VerifyError};
