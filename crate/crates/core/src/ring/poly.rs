//! Dense univariate polynomial arithmetic over an exact coefficient field.
//!
//! Coefficients are stored little-endian (index `i` holds the coefficient of
//! `t^i`) with no trailing zeros, so the zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Exact field arithmetic for polynomial coefficients. `Ctx` carries the
/// modulus for prime fields and is `()` for the rationals.
pub(crate) trait Coeff: Clone + PartialEq {
    type Ctx: Copy;

    fn zero(ctx: Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self, ctx: Self::Ctx) -> Self;
    fn sub(&self, other: &Self, ctx: Self::Ctx) -> Self;
    fn mul(&self, other: &Self, ctx: Self::Ctx) -> Self;
    fn neg(&self, ctx: Self::Ctx) -> Self;
    fn inv(&self, ctx: Self::Ctx) -> Self;
}

impl Coeff for u32 {
    type Ctx = u32;

    fn zero(_: u32) -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, other: &Self, p: u32) -> Self {
        ((*self as u64 + *other as u64) % p as u64) as u32
    }
    fn sub(&self, other: &Self, p: u32) -> Self {
        ((*self as u64 + p as u64 - *other as u64) % p as u64) as u32
    }
    fn mul(&self, other: &Self, p: u32) -> Self {
        ((*self as u64 * *other as u64) % p as u64) as u32
    }
    fn neg(&self, p: u32) -> Self {
        if *self == 0 {
            0
        } else {
            p - *self
        }
    }
    fn inv(&self, p: u32) -> Self {
        assert!(*self != 0, "inverse of zero in F_{p}");
        pow_mod(*self, p - 2, p)
    }
}

pub(crate) fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let m = p as u64;
    let mut acc = 1u64 % m;
    let mut b = base as u64 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u32
}

impl Coeff for BigRational {
    type Ctx = ();

    fn zero(_: ()) -> Self {
        <BigRational as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self, _: ()) -> Self {
        self + other
    }
    fn sub(&self, other: &Self, _: ()) -> Self {
        self - other
    }
    fn mul(&self, other: &Self, _: ()) -> Self {
        self * other
    }
    fn neg(&self, _: ()) -> Self {
        -self
    }
    fn inv(&self, _: ()) -> Self {
        self.recip()
    }
}

pub(crate) fn trim<C: Coeff>(mut v: Vec<C>) -> Vec<C> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub(crate) fn add<C: Coeff>(a: &[C], b: &[C], ctx: C::Ctx) -> Vec<C> {
    let n = a.len().max(b.len());
    let zero = C::zero(ctx);
    let out = (0..n).map(|i| a.get(i).unwrap_or(&zero).add(b.get(i).unwrap_or(&zero), ctx)).collect();
    trim(out)
}

pub(crate) fn sub<C: Coeff>(a: &[C], b: &[C], ctx: C::Ctx) -> Vec<C> {
    let n = a.len().max(b.len());
    let zero = C::zero(ctx);
    let out = (0..n).map(|i| a.get(i).unwrap_or(&zero).sub(b.get(i).unwrap_or(&zero), ctx)).collect();
    trim(out)
}

pub(crate) fn neg<C: Coeff>(a: &[C], ctx: C::Ctx) -> Vec<C> {
    a.iter().map(|c| c.neg(ctx)).collect()
}

pub(crate) fn mul<C: Coeff>(a: &[C], b: &[C], ctx: C::Ctx) -> Vec<C> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y, ctx), ctx);
        }
    }
    trim(out)
}

/// Polynomial long division. Panics if `b` is zero.
pub(crate) fn div_rem<C: Coeff>(a: &[C], b: &[C], ctx: C::Ctx) -> (Vec<C>, Vec<C>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lead_inv = b.last().unwrap().inv(ctx);
    let mut rem = a.to_vec();
    let mut quot = vec![C::zero(ctx); a.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap().mul(&lead_inv, ctx);
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] = rem[shift + j].sub(&c.mul(bj, ctx), ctx);
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub(crate) fn rational_from_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
