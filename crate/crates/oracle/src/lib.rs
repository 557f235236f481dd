//! Independent reference values for the linklab special functions and
//! closed forms.
//!
//! Everything here is computed from integral representations or exact
//! recursions using only `std` floating point primitives, so it can be used
//! to check an implementation without sharing any of its code paths.

pub mod quadrature;
pub mod reference;
pub mod stats;

pub use quadrature::GaussLegendre;
