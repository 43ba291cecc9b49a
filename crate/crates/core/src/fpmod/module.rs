use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::AlgebraError;
use crate::matrix::{diagonal_invariants, ExactMatrix};
use crate::ring::{gcd_all, Ring, RingElement};

/// Canonical isomorphism invariants `R^r ⊕ R/(d_1) ⊕ … ⊕ R/(d_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Invariants {
    pub free_rank: usize,
    pub invariant_factors: Vec<RingElement>,
}

/// A finitely presented module: the cokernel of its presentation matrix,
/// whose columns are relations among the generators (rows).
///
/// The invariants are computed eagerly by Smith normal form.
#[derive(Clone, Debug)]
pub struct FPModule {
    presentation: ExactMatrix,
    invariants: Invariants,
}

impl FPModule {
    pub fn new(presentation: ExactMatrix) -> Self {
        let diag = diagonal_invariants(&presentation);
        let free_rank = presentation.rows() - diag.len();
        let invariant_factors = diag.into_iter().filter(|d| !d.is_unit()).collect();
        FPModule { presentation, invariants: Invariants { free_rank, invariant_factors } }
    }

    /// Builds `R^free_rank ⊕ ⊕ R/(d)` with a diagonal presentation. The
    /// factors may be in any order; zeros add free rank and units vanish.
    pub fn from_invariants(ring: Ring, free_rank: usize, factors: &[RingElement]) -> Self {
        let k = factors.len();
        let raw = FPModule::new(ExactMatrix::diagonal(ring, k, k, factors));
        let chain = raw.invariants.invariant_factors;
        let free_rank = free_rank + raw.invariants.free_rank;
        let n = chain.len() + free_rank;
        let presentation = ExactMatrix::diagonal(ring, n, chain.len(), &chain);
        FPModule { presentation, invariants: Invariants { free_rank, invariant_factors: chain } }
    }

    /// Direct sum of cyclic modules `R/(d)`; `d = 0` gives a free summand.
    pub fn from_cyclic(ring: Ring, summands: &[RingElement]) -> Self {
        Self::from_invariants(ring, 0, summands)
    }

    pub fn zero(ring: Ring) -> Self {
        Self::from_invariants(ring, 0, &[])
    }

    pub fn free(ring: Ring, rank: usize) -> Self {
        Self::from_invariants(ring, rank, &[])
    }

    pub fn cyclic(d: &RingElement) -> Self {
        Self::from_invariants(d.ring(), 0, std::slice::from_ref(d))
    }

    pub fn ring(&self) -> Ring {
        self.presentation.ring()
    }

    pub fn presentation(&self) -> &ExactMatrix {
        &self.presentation
    }

    /// Number of generators of the presentation.
    pub fn generators(&self) -> usize {
        self.presentation.rows()
    }

    pub fn free_rank(&self) -> usize {
        self.invariants.free_rank
    }

    pub fn invariant_factors(&self) -> &[RingElement] {
        &self.invariants.invariant_factors
    }

    pub fn invariants(&self) -> &Invariants {
        &self.invariants
    }

    pub fn is_zero(&self) -> bool {
        self.invariants.free_rank == 0 && self.invariants.invariant_factors.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.invariants.free_rank == 0
    }

    pub fn is_isomorphic(&self, other: &FPModule) -> bool {
        self.ring() == other.ring() && self.invariants == other.invariants
    }

    /// Cyclic summands of the canonical decomposition; free summands are
    /// listed as `0` after the torsion factors.
    pub fn cyclic_summands(&self) -> Vec<RingElement> {
        let mut out = self.invariants.invariant_factors.clone();
        out.extend(std::iter::repeat_n(self.ring().zero(), self.invariants.free_rank));
        out
    }

    /// The same module with its diagonal canonical presentation.
    pub fn canonical(&self) -> FPModule {
        Self::from_invariants(self.ring(), self.free_rank(), self.invariant_factors())
    }

    /// Annihilator generator of the torsion part (the last invariant factor).
    pub fn exponent(&self) -> RingElement {
        if !self.is_torsion() {
            return self.ring().zero();
        }
        self.invariants.invariant_factors.last().cloned().unwrap_or_else(|| self.ring().one())
    }

    pub fn direct_sum(&self, other: &FPModule) -> Result<FPModule, AlgebraError> {
        if self.ring() != other.ring() {
            return Err(AlgebraError::RingMismatch(self.ring(), other.ring()));
        }
        Ok(FPModule::new(self.presentation.block_diag(&other.presentation)))
    }

    /// `M/g^α M` where `g` is the reduced generator of `ideal`.
    pub fn quotient_by_power(&self, ideal: &Ideal, alpha: u32) -> Result<FPModule, AlgebraError> {
        if alpha == 0 {
            return Err(AlgebraError::Precondition("quotient_by_power needs α ≥ 1".into()));
        }
        if ideal.ring() != self.ring() {
            return Err(AlgebraError::RingMismatch(self.ring(), ideal.ring()));
        }
        Ok(self.quotient_by_element(&ideal.reduced().pow(alpha)))
    }

    /// `M/cM`.
    pub fn quotient_by_element(&self, c: &RingElement) -> FPModule {
        let n = self.generators();
        let scalar = ExactMatrix::identity(self.ring(), n).scaled(c);
        FPModule::new(self.presentation.hstack(&scalar))
    }
}

impl Serialize for FPModule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.invariants.serialize(s)
    }
}

impl fmt::Display for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ring = self.ring();
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank() {
            0 => {}
            1 => parts.push(ring.to_string()),
            r => parts.push(format!("{ring}^{r}")),
        }
        for d in self.invariant_factors() {
            if ring.is_polynomial() {
                parts.push(format!("{ring}/({d})"));
            } else {
                parts.push(format!("{ring}/{d}"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// An ideal given by generators, together with its principal generator
/// `g = gcd(generators)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ideal {
    #[serde(skip)]
    ring: Ring,
    generators: Vec<RingElement>,
    reduced: RingElement,
}

impl Ideal {
    pub fn new(ring: Ring, generators: Vec<RingElement>) -> Result<Self, AlgebraError> {
        if let Some(bad) = generators.iter().find(|g| g.ring() != ring) {
            return Err(AlgebraError::RingMismatch(ring, bad.ring()));
        }
        let reduced = gcd_all(ring, &generators);
        Ok(Ideal { ring, generators, reduced })
    }

    pub fn principal(g: &RingElement) -> Self {
        Ideal { ring: g.ring(), generators: vec![g.clone()], reduced: g.normalized() }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    /// The unit-normalized generator of the ideal (may be 0 or 1).
    pub fn reduced(&self) -> &RingElement {
        &self.reduced
    }

    pub fn is_zero(&self) -> bool {
        self.reduced.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.reduced.is_unit()
    }

    /// Neither zero nor the whole ring.
    pub fn is_proper_nonzero(&self) -> bool {
        !self.is_zero() && !self.is_unit()
    }

    /// Whether `self ⊆ other`, i.e. `other.g` divides `self.g`.
    pub fn is_contained_in(&self, other: &Ideal) -> bool {
        self.reduced.is_divisible_by(&other.reduced)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> RingElement {
        Ring::Integers.from_i64(n)
    }

    #[test]
    fn invariants_examples() {
        let r = Ring::Integers;
        let m = FPModule::new(ExactMatrix::from_i64_rows(r, &[&[2, 0], &[0, 12]]));
        assert_eq!(m.free_rank(), 0);
        assert_eq!(m.invariant_factors(), &[z(2), z(12)]);

        let free = FPModule::new(ExactMatrix::zeros(r, 2, 0));
        assert_eq!((free.free_rank(), free.invariant_factors().len()), (2, 0));

        let m = FPModule::new(ExactMatrix::from_i64_rows(r, &[&[2, 1], &[0, 3]]));
        assert_eq!(m.invariants(), &Invariants { free_rank: 0, invariant_factors: vec![z(6)] });
    }

    #[test]
    fn from_invariants_normalizes() {
        let m = FPModule::from_invariants(Ring::Integers, 1, &[z(3), z(-2), z(1), z(0)]);
        assert_eq!(m.free_rank(), 2);
        assert_eq!(m.invariant_factors(), &[z(6)]);
        assert!(m.is_isomorphic(&FPModule::new(m.presentation().clone())));
        assert_eq!(m.to_string(), "Z^2 + Z/6");
    }

    #[test]
    fn quotient_by_power_examples() {
        let r = Ring::Integers;
        let two = Ideal::principal(&z(2));
        let q = FPModule::free(r, 1).quotient_by_power(&two, 3).unwrap();
        assert!(q.is_isomorphic(&FPModule::cyclic(&z(8))));
        let q = FPModule::cyclic(&z(12)).quotient_by_power(&two, 4).unwrap();
        assert!(q.is_isomorphic(&FPModule::cyclic(&z(4))));

        let f5 = Ring::PolyOverPrimeField(5);
        let t = f5.variable().unwrap();
        let q = FPModule::free(f5, 1).quotient_by_power(&Ideal::principal(&t), 2).unwrap();
        assert!(q.is_isomorphic(&FPModule::cyclic(&t.pow(2))));
        assert!(FPModule::free(r, 1).quotient_by_power(&two, 0).is_err());
    }

    #[test]
    fn ideal_reduces_generators() {
        let i = Ideal::new(Ring::Integers, vec![z(4), z(6)]).unwrap();
        assert_eq!(i.reduced(), &z(2));
        assert_eq!(i.generators(), &[z(4), z(6)]);
        let zero = Ideal::new(Ring::Integers, vec![]).unwrap();
        assert!(zero.is_zero());
    }
}
