use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::poly;
use crate::error::AlgebraError;

/// One of the supported Euclidean domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    /// `F_p[t]` for a prime `p < 2^31`.
    PolyOverPrimeField(u32),
    PolyOverRationals,
}

impl Ring {
    /// `F_p[t]`, checking that `p` is a prime below `2^31`.
    pub fn poly_over_prime_field(p: u32) -> Result<Ring, AlgebraError> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Ring::PolyOverPrimeField(p))
    }

    pub fn zero(self) -> RingElement {
        let value = match self {
            Ring::Integers => Value::Int(BigInt::zero()),
            Ring::PolyOverPrimeField(_) => Value::Fp(Vec::new()),
            Ring::PolyOverRationals => Value::Q(Vec::new()),
        };
        RingElement { ring: self, value }
    }

    pub fn one(self) -> RingElement {
        self.from_i64(1)
    }

    /// The image of an integer in this ring.
    pub fn from_i64(self, n: i64) -> RingElement {
        let value = match self {
            Ring::Integers => Value::Int(BigInt::from(n)),
            Ring::PolyOverPrimeField(p) => {
                let c = n.rem_euclid(p as i64) as u32;
                Value::Fp(poly::trim(vec![c]))
            }
            Ring::PolyOverRationals => Value::Q(poly::trim(vec![poly::rational_from_int(n)])),
        };
        RingElement { ring: self, value }
    }

    pub fn from_bigint(self, n: BigInt) -> RingElement {
        match self {
            Ring::Integers => RingElement { ring: self, value: Value::Int(n) },
            Ring::PolyOverPrimeField(p) => {
                let c = n.mod_floor(&BigInt::from(p));
                let c = u32::try_from(c).expect("reduced residue fits in u32");
                RingElement { ring: self, value: Value::Fp(poly::trim(vec![c])) }
            }
            Ring::PolyOverRationals => {
                RingElement { ring: self, value: Value::Q(poly::trim(vec![BigRational::from_integer(n)])) }
            }
        }
    }

    /// The polynomial variable `t`; `None` over the integers.
    pub fn variable(self) -> Option<RingElement> {
        self.monomial_coeff(1)
    }

    fn monomial_coeff(self, degree: usize) -> Option<RingElement> {
        let value = match self {
            Ring::Integers => return None,
            Ring::PolyOverPrimeField(p) => {
                let mut c = vec![0u32; degree + 1];
                c[degree] = 1 % p;
                Value::Fp(c)
            }
            Ring::PolyOverRationals => {
                let mut c = vec![BigRational::zero(); degree + 1];
                c[degree] = BigRational::one();
                Value::Q(c)
            }
        };
        Some(RingElement { ring: self, value })
    }

    /// Polynomial from little-endian integer coefficients, reduced mod `p`
    /// where applicable. Over Z only constant lists are accepted.
    pub fn poly_from_coeffs(self, coeffs: &[i64]) -> Option<RingElement> {
        match self {
            Ring::Integers => match coeffs {
                [] => Some(self.zero()),
                [c] => Some(self.from_i64(*c)),
                _ => None,
            },
            Ring::PolyOverPrimeField(p) => Some(RingElement {
                ring: self,
                value: Value::Fp(poly::trim(coeffs.iter().map(|c| c.rem_euclid(p as i64) as u32).collect())),
            }),
            Ring::PolyOverRationals => Some(RingElement {
                ring: self,
                value: Value::Q(poly::trim(coeffs.iter().map(|&c| poly::rational_from_int(c)).collect())),
            }),
        }
    }

    pub fn is_polynomial(self) -> bool {
        !matches!(self, Ring::Integers)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::PolyOverPrimeField(p) => write!(f, "F_{p}[t]"),
            Ring::PolyOverRationals => write!(f, "Q[t]"),
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Int(BigInt),
    Fp(Vec<u32>),
    Q(Vec<BigRational>),
}

/// An element of one of the supported rings.
///
/// Arithmetic operators panic when the operands live in different rings;
/// checked entry points such as [`crate::euclid_gcd`] report
/// [`AlgebraError::RingMismatch`] instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Ring,
    value: Value,
}

impl RingElement {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Int(n) => n.is_zero(),
            Value::Fp(c) => c.is_empty(),
            Value::Q(c) => c.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    pub fn is_unit(&self) -> bool {
        match &self.value {
            Value::Int(n) => n.abs().is_one(),
            Value::Fp(c) => c.len() == 1,
            Value::Q(c) => c.len() == 1,
        }
    }

    /// Polynomial degree; `None` for zero and for integers.
    pub fn degree(&self) -> Option<usize> {
        match &self.value {
            Value::Int(_) => None,
            Value::Fp(c) => c.len().checked_sub(1),
            Value::Q(c) => c.len().checked_sub(1),
        }
    }

    pub fn as_bigint(&self) -> Option<&BigInt> {
        match &self.value {
            Value::Int(n) => Some(n),
            _ => None,
        }
    }

    /// Compares Euclidean sizes: absolute value over Z, degree over k[t].
    /// Zero is the smallest element.
    pub fn cmp_size(&self, other: &RingElement) -> Ordering {
        match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => a.magnitude().cmp(b.magnitude()),
            (Value::Fp(a), Value::Fp(b)) => a.len().cmp(&b.len()),
            (Value::Q(a), Value::Q(b)) => a.len().cmp(&b.len()),
            _ => panic!("{}", mismatch(self.ring, other.ring)),
        }
    }

    /// A bound on the Euclidean size, used for termination bounds: bit
    /// length over Z, degree over k[t].
    pub fn size_bound(&self) -> u64 {
        match &self.value {
            Value::Int(n) => n.bits(),
            Value::Fp(c) => c.len().saturating_sub(1) as u64,
            Value::Q(c) => c.len().saturating_sub(1) as u64,
        }
    }

    /// The unit `u` such that `u * self` is unit-normalized (1 for zero).
    pub fn normalizing_unit(&self) -> RingElement {
        match &self.value {
            Value::Int(n) => self.ring.from_i64(if n.sign() == Sign::Minus { -1 } else { 1 }),
            Value::Fp(c) => match c.last() {
                None => self.ring.one(),
                Some(lead) => {
                    let p = match self.ring {
                        Ring::PolyOverPrimeField(p) => p,
                        _ => unreachable!(),
                    };
                    RingElement { ring: self.ring, value: Value::Fp(vec![poly::Coeff::inv(lead, p)]) }
                }
            },
            Value::Q(c) => match c.last() {
                None => self.ring.one(),
                Some(lead) => RingElement { ring: self.ring, value: Value::Q(vec![lead.recip()]) },
            },
        }
    }

    /// Canonical associate: positive over Z, monic over k[t], zero stays zero.
    pub fn normalized(&self) -> RingElement {
        if self.is_zero() {
            return self.clone();
        }
        self * &self.normalizing_unit()
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalized()
    }

    /// Inverse of a unit; `None` otherwise.
    pub fn unit_inverse(&self) -> Option<RingElement> {
        if !self.is_unit() {
            return None;
        }
        Some(match &self.value {
            Value::Int(_) => self.clone(),
            _ => self.normalizing_unit(),
        })
    }

    /// Euclidean division `self = q * divisor + r` with `r` smaller than
    /// `divisor`. Panics on a zero divisor or ring mismatch.
    pub fn div_rem(&self, divisor: &RingElement) -> (RingElement, RingElement) {
        assert!(!divisor.is_zero(), "division by zero in {}", self.ring);
        let ring = self.same_ring(divisor);
        match (&self.value, &divisor.value) {
            (Value::Int(a), Value::Int(b)) => {
                let (q, r) = a.div_rem(b);
                (RingElement { ring, value: Value::Int(q) }, RingElement { ring, value: Value::Int(r) })
            }
            (Value::Fp(a), Value::Fp(b)) => {
                let p = match ring {
                    Ring::PolyOverPrimeField(p) => p,
                    _ => unreachable!(),
                };
                let (q, r) = poly::div_rem(a, b, p);
                (RingElement { ring, value: Value::Fp(q) }, RingElement { ring, value: Value::Fp(r) })
            }
            (Value::Q(a), Value::Q(b)) => {
                let (q, r) = poly::div_rem(a, b, ());
                (RingElement { ring, value: Value::Q(q) }, RingElement { ring, value: Value::Q(r) })
            }
            _ => unreachable!(),
        }
    }

    /// Whether `divisor` divides `self` (zero divides only zero).
    pub fn is_divisible_by(&self, divisor: &RingElement) -> bool {
        if divisor.is_zero() {
            return self.is_zero();
        }
        self.div_rem(divisor).1.is_zero()
    }

    /// Exact quotient `self / divisor`, or `None` when it does not exist.
    pub fn div_exact(&self, divisor: &RingElement) -> Option<RingElement> {
        if divisor.is_zero() {
            return self.is_zero().then(|| self.clone());
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn pow(&self, exp: u32) -> RingElement {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn same_ring(&self, other: &RingElement) -> Ring {
        assert!(self.ring == other.ring, "{}", mismatch(self.ring, other.ring));
        self.ring
    }

    fn fp_modulus(&self) -> u32 {
        match self.ring {
            Ring::PolyOverPrimeField(p) => p,
            _ => unreachable!(),
        }
    }

    /// Little-endian coefficients over `F_p` (`None` in other rings).
    pub fn fp_coeffs(&self) -> Option<&[u32]> {
        match &self.value {
            Value::Fp(c) => Some(c),
            _ => None,
        }
    }

    /// Little-endian coefficients over `Q` (`None` in other rings).
    pub fn rational_coeffs(&self) -> Option<&[BigRational]> {
        match &self.value {
            Value::Q(c) => Some(c),
            _ => None,
        }
    }

    pub(crate) fn from_rational_coeffs(coeffs: Vec<BigRational>) -> RingElement {
        RingElement { ring: Ring::PolyOverRationals, value: Value::Q(poly::trim(coeffs)) }
    }

    pub(crate) fn from_fp_coeffs(p: u32, coeffs: Vec<u32>) -> RingElement {
        RingElement {
            ring: Ring::PolyOverPrimeField(p),
            value: Value::Fp(poly::trim(coeffs.into_iter().map(|c| c % p).collect())),
        }
    }
}

fn mismatch(a: Ring, b: Ring) -> String {
    format!("ring mismatch: {a} vs {b}")
}

impl Add for &RingElement {
    type Output = RingElement;

    fn add(self, rhs: &RingElement) -> RingElement {
        let ring = self.same_ring(rhs);
        let value = match (&self.value, &rhs.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a + b),
            (Value::Fp(a), Value::Fp(b)) => Value::Fp(poly::add(a, b, self.fp_modulus())),
            (Value::Q(a), Value::Q(b)) => Value::Q(poly::add(a, b, ())),
            _ => unreachable!(),
        };
        RingElement { ring, value }
    }
}

impl Sub for &RingElement {
    type Output = RingElement;

    fn sub(self, rhs: &RingElement) -> RingElement {
        let ring = self.same_ring(rhs);
        let value = match (&self.value, &rhs.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a - b),
            (Value::Fp(a), Value::Fp(b)) => Value::Fp(poly::sub(a, b, self.fp_modulus())),
            (Value::Q(a), Value::Q(b)) => Value::Q(poly::sub(a, b, ())),
            _ => unreachable!(),
        };
        RingElement { ring, value }
    }
}

impl Mul for &RingElement {
    type Output = RingElement;

    fn mul(self, rhs: &RingElement) -> RingElement {
        let ring = self.same_ring(rhs);
        let value = match (&self.value, &rhs.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a * b),
            (Value::Fp(a), Value::Fp(b)) => Value::Fp(poly::mul(a, b, self.fp_modulus())),
            (Value::Q(a), Value::Q(b)) => Value::Q(poly::mul(a, b, ())),
            _ => unreachable!(),
        };
        RingElement { ring, value }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        let value = match &self.value {
            Value::Int(a) => Value::Int(-a),
            Value::Fp(a) => Value::Fp(poly::neg(a, self.fp_modulus())),
            Value::Q(a) => Value::Q(poly::neg(a, ())),
        };
        RingElement { ring: self.ring, value }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Int(n) => write!(f, "{n}"),
            Value::Fp(c) => {
                let terms: Vec<(bool, String, usize)> = c
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, x)| **x != 0)
                    .map(|(i, x)| (false, x.to_string(), i))
                    .collect();
                write_terms(f, &terms)
            }
            Value::Q(c) => {
                let terms: Vec<(bool, String, usize)> = c
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| (x.is_negative(), x.abs().to_string(), i))
                    .collect();
                write_terms(f, &terms)
            }
        }
    }
}

/// Writes `(negative, |coefficient|, degree)` terms in descending degree as
/// `3*t^2 - 1/2*t + 4`.
fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(bool, String, usize)]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (negative, coeff, deg)) in terms.iter().enumerate() {
        match (k, negative) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let mono = match deg {
            0 => String::new(),
            1 => "t".to_string(),
            d => format!("t^{d}"),
        };
        if *deg == 0 {
            write!(f, "{coeff}")?;
        } else if coeff == "1" {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{coeff}*{mono}")?;
        }
    }
    Ok(())
}

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
