//! Element literal grammar.
//!
//! Integers are optionally signed decimal strings. Polynomials are sums of
//! terms such as `3*t^2 - 1/2*t + 4`; the coefficient may be omitted, `^`
//! gives exponents and `/` appears only inside rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Ring, RingElement};
use crate::error::LiteralError;

pub fn parse_element(ring: Ring, text: &str) -> Result<RingElement, LiteralError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty element literal"));
    }
    let mut acc: Vec<BigRational> = Vec::new();
    let mut first = true;
    loop {
        p.skip_ws();
        let mut negative = false;
        match p.peek() {
            Some(b'+') => p.pos += 1,
            Some(b'-') => {
                p.pos += 1;
                negative = true;
            }
            Some(_) if first => {}
            Some(_) => return Err(p.error("expected '+' or '-'")),
            None => break,
        }
        first = false;
        p.skip_ws();
        let (coeff, degree) = p.term(ring)?;
        let coeff = if negative { -coeff } else { coeff };
        if acc.len() <= degree {
            acc.resize(degree + 1, BigRational::zero());
        }
        acc[degree] += coeff;
        p.skip_ws();
        if p.at_end() {
            break;
        }
    }
    build(ring, acc).map_err(|m| LiteralError { offset: 0, message: m })
}

fn build(ring: Ring, coeffs: Vec<BigRational>) -> Result<RingElement, String> {
    match ring {
        Ring::Integers => {
            if coeffs.len() > 1 && coeffs[1..].iter().any(|c| !c.is_zero()) {
                return Err("polynomial literal in Z".into());
            }
            let c = coeffs.into_iter().next().unwrap_or_else(BigRational::zero);
            if !c.is_integer() {
                return Err("fraction literal in Z".into());
            }
            Ok(ring.from_bigint(c.to_integer()))
        }
        Ring::PolyOverPrimeField(p) => {
            let modulus = BigInt::from(p);
            let mut out = Vec::with_capacity(coeffs.len());
            for c in coeffs {
                let num = reduce(c.numer(), &modulus);
                let den = reduce(c.denom(), &modulus);
                if den == 0 {
                    return Err(format!("denominator {} is not invertible mod {p}", c.denom()));
                }
                out.push(((num as u64 * super::poly::pow_mod(den, p - 2, p) as u64) % p as u64) as u32);
            }
            Ok(RingElement::from_fp_coeffs(p, out))
        }
        Ring::PolyOverRationals => Ok(RingElement::from_rational_coeffs(coeffs)),
    }
}

fn reduce(n: &BigInt, m: &BigInt) -> u32 {
    let r = ((n % m) + m) % m;
    u32::try_from(r).expect("residue fits")
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> LiteralError {
        LiteralError { offset: self.pos, message: message.to_string() }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    /// `coeff`, `coeff*t^k`, `t^k`, or `coeff t` (the `*` is optional).
    fn term(&mut self, ring: Ring) -> Result<(BigRational, usize), LiteralError> {
        let coeff = match self.digits() {
            Some(num) => {
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.digits().ok_or_else(|| self.error("expected denominator"))?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    Some(BigRational::new(num, den))
                } else {
                    Some(BigRational::from_integer(num))
                }
            }
            None => None,
        };
        self.skip_ws();
        let mut saw_star = false;
        if coeff.is_some() && self.peek() == Some(b'*') {
            self.pos += 1;
            self.skip_ws();
            saw_star = true;
        }
        if self.peek() == Some(b't') {
            if !ring.is_polynomial() {
                return Err(self.error("variable 't' in an integer literal"));
            }
            self.pos += 1;
            self.skip_ws();
            let mut degree = 1usize;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                self.skip_ws();
                let e = self.digits().ok_or_else(|| self.error("expected exponent"))?;
                degree = usize::try_from(e).map_err(|_| self.error("exponent too large"))?;
                if degree > 1 << 16 {
                    return Err(self.error("exponent too large"));
                }
            }
            return Ok((coeff.unwrap_or_else(BigRational::one), degree));
        }
        if saw_star {
            return Err(self.error("expected 't' after '*'"));
        }
        match coeff {
            Some(c) => Ok((c, 0)),
            None => Err(self.error("expected a number or 't'")),
        }
    }
}
