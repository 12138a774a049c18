//! Root multiplicities of polynomials over idylls, hyperfields and their
//! tropical extensions.
//!
//! The library is generic over an exact [`Scalar`](scalar::Scalar) type.
//! The aliases at the crate root fix it to arbitrary-precision rationals.

pub mod algebra;
pub mod demo;
pub mod error;
pub mod extension;
pub mod gen;
pub mod mult;
pub mod newton;
pub mod oag;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod text;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rat = num_rational::BigRational;
pub type Rat64 = num_rational::Rational64;

pub type Idyll = algebra::Idyll<Rat>;
pub type Elem = algebra::Elem<Rat>;
pub type FormalSum = algebra::FormalSum<Rat>;
pub type SumSet = algebra::SumSet<Rat>;
pub type OagValue = oag::OagValue<Rat>;
pub type Extension = extension::Extension<Rat>;
pub type Polynomial = poly::Polynomial<Rat>;
pub type NewtonPolygon = newton::NewtonPolygon<Rat>;
