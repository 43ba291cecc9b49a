use serde::Serialize;

use super::RingElement;
use crate::error::AlgebraError;

/// Bézout data `g = u*a + v*b` with `g` unit-normalized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bezout {
    pub gcd: RingElement,
    pub u: RingElement,
    pub v: RingElement,
}

/// Extended Euclidean algorithm.
pub fn euclid_gcd(a: &RingElement, b: &RingElement) -> Result<Bezout, AlgebraError> {
    if a.ring() != b.ring() {
        return Err(AlgebraError::RingMismatch(a.ring(), b.ring()));
    }
    Ok(extended_gcd(a, b))
}

pub(crate) fn extended_gcd(a: &RingElement, b: &RingElement) -> Bezout {
    let ring = a.ring();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (ring.one(), ring.zero());
    let (mut t0, mut t1) = (ring.zero(), ring.one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &(&q * &s1);
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &(&q * &t1);
        t0 = std::mem::replace(&mut t1, t);
    }
    let unit = r0.normalizing_unit();
    Bezout { gcd: &r0 * &unit, u: &s0 * &unit, v: &t0 * &unit }
}

/// Unit-normalized gcd. Panics on ring mismatch.
pub fn gcd(a: &RingElement, b: &RingElement) -> RingElement {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.div_rem(&y).1;
        x = std::mem::replace(&mut y, r);
    }
    x.normalized()
}

/// Gcd of a list (zero for the empty list).
pub fn gcd_all<'a>(ring: super::Ring, items: impl IntoIterator<Item = &'a RingElement>) -> RingElement {
    items.into_iter().fold(ring.zero(), |acc, x| gcd(&acc, x))
}

/// Unit-normalized lcm; zero if either argument is zero.
pub fn lcm(a: &RingElement, b: &RingElement) -> RingElement {
    if a.is_zero() || b.is_zero() {
        return a.ring().zero();
    }
    let g = gcd(a, b);
    (a * &b.div_exact(&g).expect("gcd divides")).normalized()
}

/// Splits `d` into the part supported on the primes of `g` and the part
/// coprime to `g`, both unit-normalized.
pub fn part_split(d: &RingElement, g: &RingElement) -> Result<(RingElement, RingElement), AlgebraError> {
    if d.ring() != g.ring() {
        return Err(AlgebraError::RingMismatch(d.ring(), g.ring()));
    }
    if d.is_zero() || g.is_zero() {
        return Err(AlgebraError::ZeroInput("part_split"));
    }
    Ok(split_parts(d, g))
}

/// `part_split` extended to `g = 0`, whose support is every prime: the whole
/// of `d` is then the supported part. `d` must be nonzero.
pub(crate) fn split_parts(d: &RingElement, g: &RingElement) -> (RingElement, RingElement) {
    debug_assert!(!d.is_zero());
    let ring = d.ring();
    if g.is_zero() {
        return (d.normalized(), ring.one());
    }
    let mut inside = ring.one();
    let mut outside = d.normalized();
    loop {
        let h = gcd(&outside, g);
        if h.is_unit() {
            break;
        }
        outside = outside.div_exact(&h).expect("gcd divides");
        inside = &inside * &h;
    }
    (inside.normalized(), outside.normalized())
}

/// The part of `d` supported on the primes of `g` (zero stays zero).
pub(crate) fn supported_part(d: &RingElement, g: &RingElement) -> RingElement {
    if d.is_zero() {
        return d.clone();
    }
    split_parts(d, g).0
}

/// The part of `d` coprime to `g` (zero stays zero).
pub(crate) fn coprime_part(d: &RingElement, g: &RingElement) -> RingElement {
    if d.is_zero() {
        return d.clone();
    }
    split_parts(d, g).1
}

/// Containment relation between the prime supports of two nonzero elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RadicalOrder {
    Equal,
    SupportOfAInB,
    SupportOfBInA,
    Incomparable,
}

/// Compares prime supports by iterated gcd stripping, without factoring.
pub fn radical_compare(a: &RingElement, b: &RingElement) -> Result<RadicalOrder, AlgebraError> {
    if a.ring() != b.ring() {
        return Err(AlgebraError::RingMismatch(a.ring(), b.ring()));
    }
    if a.is_zero() || b.is_zero() {
        return Err(AlgebraError::ZeroInput("radical_compare"));
    }
    let a_in_b = split_parts(a, b).1.is_unit();
    let b_in_a = split_parts(b, a).1.is_unit();
    Ok(match (a_in_b, b_in_a) {
        (true, true) => RadicalOrder::Equal,
        (true, false) => RadicalOrder::SupportOfAInB,
        (false, true) => RadicalOrder::SupportOfBInA,
        (false, false) => RadicalOrder::Incomparable,
    })
}

/// Whether `x` lies in the radical of the principal ideal `(g)`.
///
/// Over a domain `Rad(0) = 0`, and every element is in the radical of the
/// unit ideal.
pub fn in_radical(x: &RingElement, g: &RingElement) -> bool {
    if g.is_zero() {
        return x.is_zero();
    }
    if g.is_unit() || x.is_zero() {
        return true;
    }
    split_parts(g, x).1.is_unit()
}

/// Smallest `k` with `x^k` divisible by `g`, or `None` if `x` is not in the
/// radical of `(g)`.
pub fn radical_exponent(x: &RingElement, g: &RingElement) -> Option<u32> {
    if !in_radical(x, g) {
        return None;
    }
    if g.is_unit() {
        return Some(0);
    }
    if x.is_zero() {
        return Some(1);
    }
    // Each prime of g divides x, so k never exceeds the size of g.
    let bound = g.size_bound() as u32 + 1;
    let mut power = x.ring().one();
    for k in 0..=bound {
        if power.is_divisible_by(g) {
            return Some(k);
        }
        power = &power * x;
    }
    unreachable!("radical exponent exceeded its bound")
}
