//! Exact arithmetic over a word-size prime field.

pub mod field;
pub mod matrix;
pub mod monomials;
pub mod poly;
pub mod univar;

pub use field::{Elem, PrimeField};
pub use matrix::{AffineSolution, Echelon, MatrixF};
pub use monomials::MonomialBasis;
pub use poly::Poly;
pub use univar::UniPoly;
