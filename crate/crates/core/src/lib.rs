//! Evolution (squaring) operators of commutative algebras over binary fields.
//!
//! In characteristic 2 the map `V(x) = x²` is additive and Frobenius
//! semilinear, so after restriction of scalars to `F_2` it is an ordinary
//! linear map. Everything here — periodicity profiles, train polynomials,
//! canonical forms, the weighted (baric) variants — is computed exactly from
//! that linear picture and cross-checked against direct iteration.

pub mod algebra;
pub mod baric;
pub mod bits;
pub mod canonical;
pub mod corpus;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod fmatrix;
pub mod generators;
pub mod numtheory;
pub mod par;
pub mod poly2;
pub mod polyf;

pub use algebra::{Algebra, SemilinearOperator, Vector};
pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use poly2::Poly2;
pub use polyf::PolyF;
