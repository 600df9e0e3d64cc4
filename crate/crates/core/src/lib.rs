//! Invariants of the Klein four group acting on modular representations in
//! characteristic two.

pub mod coeff;
pub mod construct;
pub mod error;
pub mod gb;
pub mod oracle;
pub mod poly;
pub mod rep;
pub mod sagbi;

pub use coeff::{FieldDescriptor, Scalar};
pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Ring, VariableList};
pub use rep::{GroupElement, RepKind, Representation};
