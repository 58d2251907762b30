//! Verification workbench for the modular Calabi-Yau threefolds of level 8.

pub mod catalog;
pub mod count;
pub mod elliptic;
pub mod euler;
pub mod ff;
pub mod modform;
pub mod symbolic;

pub use ff::{FieldError, PrimeField};
pub use symbolic::{Poly, Qt, RatFunc, UPoly};
