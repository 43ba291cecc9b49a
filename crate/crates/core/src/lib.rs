//! Exact computational algebra for adic completions of finitely presented
//! modules over Euclidean domains.
//!
//! Modules are cokernels of presentation matrices whose columns are the
//! relations: a presentation `A: R^m -> R^n` describes `R^n / A R^m`.

pub mod adic;
pub mod cech;
pub mod certifier;
pub mod corpus;
pub mod error;
pub mod fpmod;
pub mod matrix;
pub mod ring;
pub mod towers;

pub use error::{AlgebraError, LiteralError};
pub use matrix::{kernel, smith_normal_form, solve, ExactMatrix, SnfResult};
pub use ring::{euclid_gcd, gcd, parse_element, part_split, radical_compare, Bezout, RadicalOrder, Ring, RingElement};
