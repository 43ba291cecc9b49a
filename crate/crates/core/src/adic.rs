//! Adic separatedness, completion, the natural map `τ: M → M̂`, derived
//! completion and Hom/Ext with completed coefficients.
//!
//! Completions are described by invariants only. `R̂` (the `(g)`-adic
//! completion of `R`) is not finitely generated over `R`, so a
//! [`CompletedModule`] records how many copies of `R̂` it contains plus its
//! `g`-primary torsion, which is already complete.

use std::fmt;

use serde::Serialize;

use crate::error::AlgebraError;
use crate::fpmod::{support_in_v, FPModule, Ideal};
use crate::matrix::{smith_normal_form, solve_columns};
use crate::ring::{gcd, split_parts, Ring, RingElement};

/// `R̂^s ⊕ ⊕ R/(c_j)` for the `(g)`-adic completion `R̂`.
///
/// When `g = 0` the completion of `R` is `R` itself; when `g` is a unit the
/// completion of everything is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletedModule {
    #[serde(rename = "ideal")]
    generator: RingElement,
    completed_free_rank: usize,
    torsion_factors: Vec<RingElement>,
}

impl CompletedModule {
    /// Normalizes the torsion to an invariant-factor chain; each factor must
    /// be supported on the primes of `g`.
    pub fn new(ideal: &Ideal, completed_free_rank: usize, torsion: &[RingElement]) -> Result<Self, AlgebraError> {
        let g = ideal.reduced();
        let t = FPModule::from_cyclic(ideal.ring(), torsion);
        if t.free_rank() > 0 {
            return Err(AlgebraError::Precondition("torsion factors must be nonzero".into()));
        }
        if g.is_unit() && (completed_free_rank > 0 || !t.is_zero()) {
            return Err(AlgebraError::Precondition("completion at the unit ideal is zero".into()));
        }
        if !g.is_zero() && t.invariant_factors().iter().any(|d| !split_parts(d, g).1.is_unit()) {
            return Err(AlgebraError::Precondition(format!("torsion factor not supported on ({g})")));
        }
        Ok(CompletedModule {
            generator: g.clone(),
            completed_free_rank,
            torsion_factors: t.invariant_factors().to_vec(),
        })
    }

    /// Reads a diagonalized complex over `R̂`: a zero entry contributes a copy
    /// of `R̂`, a nonzero `d` contributes `R̂/dR̂ ≅ R/(g-part of d)`.
    fn from_cyclic_over_completion(ideal: &Ideal, summands: &[RingElement]) -> Self {
        let g = ideal.reduced();
        if g.is_unit() {
            return Self::zero(ideal);
        }
        let free = summands.iter().filter(|d| d.is_zero()).count();
        let torsion: Vec<RingElement> = summands.iter().filter(|d| !d.is_zero()).map(|d| split_parts(d, g).0).collect();
        Self::new(ideal, free, &torsion).expect("g-parts are g-primary")
    }

    pub fn zero(ideal: &Ideal) -> Self {
        CompletedModule { generator: ideal.reduced().clone(), completed_free_rank: 0, torsion_factors: vec![] }
    }

    pub fn ring(&self) -> Ring {
        self.generator.ring()
    }

    /// Reduced generator of the ideal the completion is taken at.
    pub fn generator(&self) -> &RingElement {
        &self.generator
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::principal(&self.generator)
    }

    pub fn completed_free_rank(&self) -> usize {
        self.completed_free_rank
    }

    pub fn torsion_factors(&self) -> &[RingElement] {
        &self.torsion_factors
    }

    pub fn torsion(&self) -> FPModule {
        FPModule::from_invariants(self.ring(), 0, &self.torsion_factors)
    }

    pub fn is_zero(&self) -> bool {
        self.completed_free_rank == 0 && self.torsion_factors.is_empty()
    }

    /// The module itself when it is finitely generated over `R`: no copies
    /// of `R̂`, or `g = 0` where `R̂ = R`.
    pub fn as_fp_module(&self) -> Option<FPModule> {
        if self.completed_free_rank == 0 || self.generator.is_zero() {
            Some(FPModule::from_invariants(self.ring(), self.completed_free_rank, &self.torsion_factors))
        } else {
            None
        }
    }

    /// `N / g^α N` as a finitely presented module.
    pub fn truncation(&self, alpha: u32) -> FPModule {
        let ring = self.ring();
        let ga = self.generator.pow(alpha);
        let mut summands: Vec<RingElement> = vec![ga.clone(); self.completed_free_rank];
        summands.extend(self.torsion_factors.iter().map(|c| gcd(c, &ga)));
        FPModule::from_cyclic(ring, &summands)
    }

    pub fn is_isomorphic(&self, other: &CompletedModule) -> bool {
        self == other
    }

    pub fn direct_sum(&self, other: &CompletedModule) -> CompletedModule {
        assert_eq!(self.generator, other.generator, "completions at different ideals");
        let mut t = self.torsion_factors.clone();
        t.extend(other.torsion_factors.iter().cloned());
        CompletedModule::new(&self.ideal(), self.completed_free_rank + other.completed_free_rank, &t)
            .expect("summands are g-primary")
    }
}

impl fmt::Display for CompletedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.completed_free_rank > 0 {
            let base = format!("completion({}, ({}))", self.ring(), self.generator);
            parts.push(if self.completed_free_rank == 1 {
                base
            } else {
                format!("{base}^{}", self.completed_free_rank)
            });
        }
        let t = self.torsion();
        if !t.is_zero() {
            parts.push(t.to_string());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The natural map `τ: M → M̂`: its kernel `∩ g^α M`, and the number `r` of
/// copies of `R̂/R` in its cokernel.
#[derive(Clone, Debug, Serialize)]
pub struct TauVerdict {
    pub kernel: FPModule,
    pub cokernel_rank: usize,
    pub is_iso: bool,
}

fn check_ring(m: &FPModule, ideal: &Ideal) -> Result<(), AlgebraError> {
    if m.ring() != ideal.ring() {
        return Err(AlgebraError::RingMismatch(m.ring(), ideal.ring()));
    }
    Ok(())
}

/// Whether `∩_α g^α M = 0`, with that intersection.
pub fn is_separated(m: &FPModule, ideal: &Ideal) -> Result<(bool, FPModule), AlgebraError> {
    check_ring(m, ideal)?;
    let g = ideal.reduced();
    let ring = m.ring();
    let kernel = if g.is_zero() {
        FPModule::zero(ring)
    } else if g.is_unit() {
        m.clone()
    } else {
        let coprime: Vec<RingElement> = m.invariant_factors().iter().map(|d| split_parts(d, g).1).collect();
        FPModule::from_cyclic(ring, &coprime)
    };
    Ok((kernel.is_zero(), kernel))
}

/// The completion `M̂` and the verdict on `τ`.
pub fn complete(m: &FPModule, ideal: &Ideal) -> Result<(CompletedModule, TauVerdict), AlgebraError> {
    let (_, kernel) = is_separated(m, ideal)?;
    let g = ideal.reduced();
    if g.is_zero() {
        let completion = CompletedModule::new(ideal, m.free_rank(), m.invariant_factors())?;
        return Ok((completion, TauVerdict { kernel, cokernel_rank: 0, is_iso: true }));
    }
    if g.is_unit() {
        let is_iso = kernel.is_zero();
        return Ok((CompletedModule::zero(ideal), TauVerdict { kernel, cokernel_rank: 0, is_iso }));
    }
    let completion = CompletedModule::from_cyclic_over_completion(ideal, &m.cyclic_summands());
    let cokernel_rank = m.free_rank();
    let is_iso = kernel.is_zero() && cokernel_rank == 0;
    Ok((completion, TauVerdict { kernel, cokernel_rank, is_iso }))
}

/// Whether `τ: M → M̂` is an isomorphism.
pub fn is_complete(m: &FPModule, ideal: &Ideal) -> Result<bool, AlgebraError> {
    Ok(complete(m, ideal)?.1.is_iso)
}

/// `[Λ₀(M), Λ₁(M)]`: homology of the completed free resolution
/// `R̂^k → R̂^m → R̂^n` built from the presentation of `M`.
pub fn derived_completion(m: &FPModule, ideal: &Ideal) -> Result<[CompletedModule; 2], AlgebraError> {
    check_ring(m, ideal)?;
    let a = m.presentation();
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let diag = snf.s.main_diagonal();

    // Λ₀: U A V = S, and U, V stay invertible over R̂.
    let mut summands: Vec<RingElement> = diag[..rank].to_vec();
    summands.extend(std::iter::repeat_n(m.ring().zero(), a.rows() - rank));
    let lambda0 = CompletedModule::from_cyclic_over_completion(ideal, &summands);

    // Λ₁: ker(Â) is spanned by the last m - rank columns of V; the syzygies
    // of A give the incoming boundaries.
    let kernel_basis = snf.v.select_cols(&(rank..a.cols()).collect::<Vec<_>>());
    let syzygies = crate::matrix::kernel(a);
    let coords = solve_columns(&kernel_basis, &syzygies).expect("syzygies lie in the kernel");
    let inner = smith_normal_form(&coords);
    let inner_rank = inner.rank();
    let mut summands: Vec<RingElement> = inner.s.main_diagonal()[..inner_rank].to_vec();
    summands.extend(std::iter::repeat_n(m.ring().zero(), coords.rows() - inner_rank));
    let lambda1 = CompletedModule::from_cyclic_over_completion(ideal, &summands);
    Ok([lambda0, lambda1])
}

/// `(Hom(X, N), Ext¹(X, N))` for a completed module `N`, from a
/// diagonalized free resolution of `X`.
pub fn hom_ext_completed(
    x: &FPModule,
    n: &CompletedModule,
) -> Result<(CompletedModule, CompletedModule), AlgebraError> {
    if x.ring() != n.ring() {
        return Err(AlgebraError::RingMismatch(x.ring(), n.ring()));
    }
    let ideal = n.ideal();
    let g = n.generator();
    let snf = smith_normal_form(x.presentation());
    let rank = snf.rank();
    let diag = snf.s.main_diagonal();
    let free_gens = x.generators() - rank;

    let mut hom = CompletedModule::zero(&ideal);
    let mut ext = CompletedModule::zero(&ideal);
    for _ in 0..free_gens {
        hom = hom.direct_sum(n);
    }
    let r_hat_is_r = g.is_zero();
    for d in diag[..rank].iter().filter(|d| !d.is_unit()) {
        // R̂ has no d-torsion (d ≠ 0 and R̂ is flat over R).
        let mut h_t: Vec<RingElement> = Vec::new();
        let mut e_t: Vec<RingElement> = Vec::new();
        for c in n.torsion_factors() {
            h_t.push(gcd(d, c));
            e_t.push(gcd(d, c));
        }
        let ext_free_part: Vec<RingElement> =
            (0..n.completed_free_rank()).map(|_| if r_hat_is_r { d.clone() } else { split_parts(d, g).0 }).collect();
        e_t.extend(ext_free_part);
        hom = hom.direct_sum(&CompletedModule::new(&ideal, 0, &h_t)?);
        ext = ext.direct_sum(&CompletedModule::new(&ideal, 0, &e_t)?);
    }
    Ok((hom, ext))
}

/// `(Hom(X, N), Ext¹(X, N))` for `X` supported in `V(I)`; both are then
/// finitely generated.
pub fn ext_into_completed(x: &FPModule, n: &CompletedModule) -> Result<(FPModule, FPModule), AlgebraError> {
    if !support_in_v(x, &n.ideal()) {
        return Err(AlgebraError::Precondition(format!("Supp X is not contained in V(({}))", n.generator())));
    }
    let (hom, ext) = hom_ext_completed(x, n)?;
    let fg = |c: CompletedModule| c.as_fp_module().expect("torsion coefficients");
    Ok((fg(hom), fg(ext)))
}

/// Compares `M/g^α M` with `M̂/g^α M̂`.
pub fn verify_quotient_identity(m: &FPModule, ideal: &Ideal, alpha: u32) -> Result<bool, AlgebraError> {
    let lhs = m.quotient_by_power(ideal, alpha)?;
    let (completion, _) = complete(m, ideal)?;
    Ok(lhs.is_isomorphic(&completion.truncation(alpha)))
}
