//! Seeded random instances: modules with scrambled presentations, ideals
//! and element systems built from a few small primes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cech::ElementSystem;
use crate::fpmod::{FPModule, Ideal};
use crate::matrix::ExactMatrix;
use crate::ring::{Ring, RingElement};

/// The prime elements instances are built from.
pub fn primes(ring: Ring) -> Vec<RingElement> {
    match ring {
        Ring::Integers => [2, 3, 5].iter().map(|&p| ring.from_i64(p)).collect(),
        _ => [&[0, 1][..], &[1, 1], &[2, 0, 1]]
            .iter()
            .map(|c| ring.poly_from_coeffs(c).expect("polynomial ring"))
            .collect(),
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub module: FPModule,
    pub ideal: Ideal,
    pub system: ElementSystem,
}

pub struct Generator {
    ring: Ring,
    primes: Vec<RingElement>,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(ring: Ring, seed: u64) -> Self {
        Generator { ring, primes: primes(ring), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    fn product(&mut self, support: &[usize], min: u32, max: u32) -> RingElement {
        let mut out = self.ring.one();
        for &i in support {
            let e = self.rng.gen_range(min..=max);
            out = &out * &self.primes[i].pow(e);
        }
        out
    }

    /// Random product of the primes with exponents at most `max`.
    pub fn element(&mut self, max: u32) -> RingElement {
        let all: Vec<usize> = (0..self.primes.len()).collect();
        self.product(&all, 0, max)
    }

    /// A nonempty random subset of prime indices.
    pub fn support(&mut self) -> Vec<usize> {
        loop {
            let s: Vec<usize> = (0..self.primes.len()).filter(|_| self.rng.gen_bool(0.5)).collect();
            if !s.is_empty() {
                return s;
            }
        }
    }

    fn small_scalar(&mut self) -> RingElement {
        match self.ring {
            Ring::Integers => self.ring.from_i64(*[-2, -1, 1, 2].choose(&mut self.rng).unwrap()),
            _ => {
                let c: Vec<i64> = (0..2).map(|_| self.rng.gen_range(-2..=2)).collect();
                self.ring.poly_from_coeffs(&c).expect("polynomial ring")
            }
        }
    }

    /// Product of a few elementary matrices.
    fn unimodular(&mut self, n: usize) -> ExactMatrix {
        let mut u = ExactMatrix::identity(self.ring, n);
        if n < 2 {
            return u;
        }
        for _ in 0..n {
            let i = self.rng.gen_range(0..n);
            let mut j = self.rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let q = self.small_scalar();
            for c in 0..n {
                let v = u.get(i, c) + &(&q * u.get(j, c));
                u.set(i, c, v);
            }
        }
        u
    }

    /// Free rank `≤ max_free`, at most `max_factors` torsion factors with
    /// exponents `≤ max_exp`, behind a scrambled presentation.
    pub fn module(&mut self, max_free: usize, max_factors: usize, max_exp: u32) -> FPModule {
        let free = self.rng.gen_range(0..=max_free);
        let k = self.rng.gen_range(0..=max_factors);
        let factors: Vec<RingElement> = (0..k).map(|_| self.element(max_exp)).collect();
        self.scramble(free, &factors)
    }

    /// A presentation of `R^free ⊕ ⊕ R/(d)` with random unimodular changes
    /// of generators and relations.
    pub fn scramble(&mut self, free: usize, factors: &[RingElement]) -> FPModule {
        let n = free + factors.len();
        let mut diag = factors.to_vec();
        diag.extend(std::iter::repeat_n(self.ring.zero(), free));
        let d = ExactMatrix::diagonal(self.ring, n, factors.len(), &diag[..factors.len()]);
        let p = self.unimodular(n);
        let q = self.unimodular(factors.len());
        let mut a = &(&p * &d) * &q;
        if factors.len() >= 2 && self.rng.gen_bool(0.3) {
            // A redundant relation: sum of the first two.
            let extra: Vec<RingElement> = (0..n).map(|i| a.get(i, 0) + a.get(i, 1)).collect();
            a = a.hstack(&ExactMatrix::from_columns(self.ring, n, &[extra]));
        }
        FPModule::new(a)
    }

    /// A proper nonzero ideal, possibly with redundant generators.
    pub fn ideal(&mut self) -> Ideal {
        let support = self.support();
        let g = self.product(&support, 1, 2);
        let mut gens = vec![g.clone()];
        if self.rng.gen_bool(0.3) {
            gens.push(&g * &self.small_scalar());
        }
        Ideal::new(self.ring, gens).expect("nonempty generators")
    }

    /// A system of one to three elements with the same radical as `ideal`.
    pub fn system(&mut self, ideal: &Ideal) -> ElementSystem {
        let support: Vec<usize> =
            (0..self.primes.len()).filter(|&i| ideal.reduced().is_divisible_by(&self.primes[i])).collect();
        let first = self.product(&support, 1, 2);
        let r = self.rng.gen_range(1..=3);
        let mut xs = vec![first.clone()];
        for _ in 1..r {
            let extra = self.element(1);
            xs.push(&(&first * &self.product(&support, 0, 1)) * &extra);
        }
        xs.shuffle(&mut self.rng);
        ElementSystem::new(self.ring, xs).expect("nonempty")
    }

    /// A module supported in `V(I)`: torsion on the primes of the ideal.
    pub fn supported_module(&mut self, ideal: &Ideal, max_factors: usize, max_exp: u32) -> FPModule {
        let support: Vec<usize> =
            (0..self.primes.len()).filter(|&i| ideal.reduced().is_divisible_by(&self.primes[i])).collect();
        let k = self.rng.gen_range(0..=max_factors);
        let factors: Vec<RingElement> = (0..k).map(|_| self.product(&support, 0, max_exp)).collect();
        self.scramble(0, &factors)
    }

    pub fn instance(&mut self) -> Instance {
        let module = self.module(3, 4, 3);
        let ideal = self.ideal();
        let system = self.system(&ideal);
        Instance { module, ideal, system }
    }

    /// Uniform integer in `range`, for callers that need extra choices.
    pub fn pick(&mut self, range: std::ops::RangeInclusive<usize>) -> usize {
        self.rng.gen_range(range)
    }
}

/// `count` instances alternating between `Z` and `F_5[t]`.
pub fn instances(count: usize, seed: u64) -> Vec<Instance> {
    let f5 = Ring::poly_over_prime_field(5).expect("5 is prime");
    let mut gens = [Generator::new(Ring::Integers, seed), Generator::new(f5, seed.wrapping_add(1))];
    (0..count).map(|i| gens[i % 2].instance()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{radical_compare, RadicalOrder};

    #[test]
    fn deterministic_and_well_formed() {
        let a = instances(40, 3);
        let b = instances(40, 3);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.module.presentation(), y.module.presentation());
            assert_eq!(x.system, y.system);
        }
        for inst in &a {
            assert!(inst.module.free_rank() <= 3);
            assert!(inst.module.invariant_factors().len() <= 4);
            assert!(inst.ideal.is_proper_nonzero());
            let order = radical_compare(&inst.system.generator(), inst.ideal.reduced()).unwrap();
            assert_eq!(order, RadicalOrder::Equal);
        }
    }

    #[test]
    fn scrambling_preserves_invariants() {
        let mut g = Generator::new(Ring::Integers, 9);
        let factors = [Ring::Integers.from_i64(2), Ring::Integers.from_i64(12)];
        for _ in 0..20 {
            let m = g.scramble(2, &factors);
            assert!(m.is_isomorphic(&FPModule::from_invariants(Ring::Integers, 2, &factors)));
        }
    }

    #[test]
    fn supported_modules_are_supported() {
        let mut g = Generator::new(Ring::poly_over_prime_field(5).unwrap(), 4);
        for _ in 0..20 {
            let i = g.ideal();
            assert!(crate::fpmod::support_in_v(&g.supported_module(&i, 3, 3), &i));
        }
    }
}
