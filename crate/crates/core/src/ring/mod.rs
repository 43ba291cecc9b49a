//! Exact arithmetic in the supported Euclidean domains: Z, F_p[t] and Q[t].

mod element;
mod euclid;
mod parse;
pub(crate) mod poly;

pub use element::{Ring, RingElement};
pub(crate) use euclid::{coprime_part, split_parts, supported_part};
pub use euclid::{
    euclid_gcd, gcd, gcd_all, in_radical, lcm, part_split, radical_compare, radical_exponent, Bezout, RadicalOrder,
};
pub use parse::parse_element;
