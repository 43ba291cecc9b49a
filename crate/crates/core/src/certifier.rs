//! Instance-level checks of the completeness criteria: the single-element
//! test, the four-way equivalence for an ideal, and the vanishing and
//! transfer statements against completions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adic::{complete, ext_into_completed, hom_ext_completed, is_separated, CompletedModule};
use crate::cech::{flat_test_validate, ElementSystem, FlatTestModule};
use crate::error::AlgebraError;
use crate::fpmod::{ext1, ext1_via_resolution, hom, hom_via_resolution, support_in_v, FPModule, Ideal, ModuleMap};
use crate::ring::{radical_compare, RadicalOrder, Ring, RingElement};
use crate::towers::{
    check_lemma_4_2, localization_against_completed, multiplication_limits, torsion_stabilization_index, Lemma42Source,
    Lim1, LimValue, SymbolicLocalization, Tower, DEFAULT_DEPTH,
};

#[derive(Clone, Debug, Serialize)]
pub struct SingleElementReport {
    pub x: RingElement,
    /// `0 :_M x^α` is constant from `α = β` on.
    pub beta: usize,
    pub hom: FPModule,
    pub ext1: Lim1,
    pub hom_vanishes: bool,
    pub ext1_vanishes: bool,
    pub complete_x: bool,
    pub consistent: bool,
}

fn annihilator_chain(m: &FPModule, x: &RingElement, alpha: usize) -> FPModule {
    ModuleMap::scalar(m, &x.pow(alpha as u32)).kernel().module
}

/// First `β` with `0 :_M x^β = 0 :_M x^{β+1}`, checked on explicit kernels.
fn kernel_stabilization(m: &FPModule, x: &RingElement) -> usize {
    let predicted = if x.is_unit() || m.is_zero() {
        0
    } else if x.is_zero() {
        1
    } else {
        torsion_stabilization_index(m, x)
    };
    let at = |a| annihilator_chain(m, x, a);
    debug_assert!(at(predicted).is_isomorphic(&at(predicted + 1)));
    debug_assert!(predicted == 0 || !at(predicted - 1).is_isomorphic(&at(predicted)));
    predicted
}

/// `M` is `x`-adically complete exactly when `Hom(R_x, M)` and
/// `Ext¹(R_x, M)` vanish.
pub fn certify_single(m: &FPModule, x: &RingElement) -> Result<SingleElementReport, AlgebraError> {
    if m.ring() != x.ring() {
        return Err(AlgebraError::RingMismatch(m.ring(), x.ring()));
    }
    let beta = kernel_stabilization(m, x);
    let limits = multiplication_limits(m, x);
    let hom = limits.lim.as_fp_module().expect("finitely generated");
    let complete_x = crate::adic::is_complete(m, &Ideal::principal(x))?;
    let (hom_vanishes, ext1_vanishes) = (hom.is_zero(), limits.lim1.is_zero());
    Ok(SingleElementReport {
        x: x.clone(),
        beta,
        hom,
        ext1: limits.lim1,
        hom_vanishes,
        ext1_vanishes,
        complete_x,
        consistent: complete_x == (hom_vanishes && ext1_vanishes),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatTestEntry {
    pub summands: Vec<RingElement>,
    pub valid: bool,
    pub hom: FPModule,
    pub ext1: Lim1,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleEntry {
    pub y: RingElement,
    pub hom: FPModule,
    pub ext1: Lim1,
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemEntry {
    pub system: ElementSystem,
    pub per_summand: Vec<Lim1>,
    pub ext1: Lim1,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifierReport {
    pub module: FPModule,
    pub ideal: RingElement,
    pub separated: bool,
    pub separation_kernel: FPModule,
    pub complete: bool,
    pub cond_ii: Vec<FlatTestEntry>,
    pub cond_iii: Vec<SampleEntry>,
    pub cond_iv: SystemEntry,
    pub consistent: bool,
    pub explanation: Option<String>,
}

/// `(Hom(⊕ R_{x_i}, M), Ext¹(⊕ R_{x_i}, M))` summand by summand.
fn against_localizations(m: &FPModule, xs: &[RingElement]) -> (FPModule, Vec<Lim1>) {
    let ring = m.ring();
    let mut hom = FPModule::zero(ring);
    let mut ext = Vec::new();
    for x in xs {
        let v = multiplication_limits(m, x);
        hom = hom.direct_sum(&v.lim.as_fp_module().expect("finitely generated")).expect("same ring");
        ext.push(v.lim1);
    }
    (hom.canonical(), ext)
}

fn combine(verdicts: &[Lim1]) -> Lim1 {
    verdicts.iter().find(|v| !v.is_zero()).cloned().unwrap_or(Lim1::Zero)
}

/// A nonzero multiplier drawn from a small box of the ring.
fn random_multiplier(ring: Ring, rng: &mut ChaCha8Rng) -> RingElement {
    loop {
        let e = match ring {
            Ring::Integers => ring.from_i64(rng.gen_range(-9..=9)),
            _ => {
                let degree = rng.gen_range(0..=2);
                let coeffs: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-4..=4)).collect();
                ring.poly_from_coeffs(&coeffs).expect("polynomial ring")
            }
        };
        if !e.is_zero() {
            return e;
        }
    }
}

/// `g`, `g²`, then `g·r` for seeded random `r`, `max(count, 2)` in all.
pub fn sample_ideal_elements(ideal: &Ideal, count: usize, seed: u64) -> Vec<RingElement> {
    let g = ideal.reduced();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![g.clone(), g * g];
    while out.len() < count {
        out.push(g * &random_multiplier(ideal.ring(), &mut rng));
    }
    out
}

fn radicals_equal(a: &RingElement, b: &RingElement) -> Result<bool, AlgebraError> {
    if a.is_zero() || b.is_zero() {
        return Ok(a.is_zero() && b.is_zero());
    }
    Ok(radical_compare(a, b)? == RadicalOrder::Equal)
}

/// Evaluates conditions (i) to (iv) of the completeness criterion for
/// `M`, `I` and a system `x⃗` with `Rad(x⃗) = Rad I`.
pub fn certify_theorem_1_1(
    m: &FPModule,
    ideal: &Ideal,
    system: &ElementSystem,
    samples: usize,
    seed: u64,
) -> Result<CertifierReport, AlgebraError> {
    let ring = m.ring();
    if ideal.ring() != ring || system.ring() != ring {
        return Err(AlgebraError::RingMismatch(ring, if ideal.ring() != ring { ideal.ring() } else { system.ring() }));
    }
    let g = ideal.reduced();
    if !radicals_equal(&system.generator(), g)? {
        return Err(AlgebraError::Precondition(format!("Rad({}) differs from Rad({g})", system.generator())));
    }
    let (separated, separation_kernel) = is_separated(m, ideal)?;
    let complete = crate::adic::is_complete(m, ideal)?;
    let ys = sample_ideal_elements(ideal, samples, seed);

    let cond_iii: Vec<SampleEntry> = ys
        .iter()
        .map(|y| {
            let v = multiplication_limits(m, y);
            SampleEntry { y: y.clone(), hom: v.lim.as_fp_module().expect("finitely generated"), ext1: v.lim1 }
        })
        .collect();

    let (_, per_summand) = against_localizations(m, system.elements());
    let cond_iv = SystemEntry { system: system.clone(), ext1: combine(&per_summand), per_summand };

    let mut families: Vec<Vec<RingElement>> = ys.iter().map(|y| vec![y.clone()]).collect();
    families.push(system.elements().to_vec());
    let cond_ii: Vec<FlatTestEntry> = families
        .into_iter()
        .map(|xs| {
            let f = FlatTestModule { summands: xs.iter().map(SymbolicLocalization::new).collect() };
            let (hom, ext) = against_localizations(m, &xs);
            FlatTestEntry { valid: flat_test_validate(&f, ideal), summands: xs, hom, ext1: combine(&ext) }
        })
        .collect();

    let ii = cond_ii.iter().all(|e| e.hom.is_zero() && e.ext1.is_zero());
    let iii = cond_iii.iter().all(|e| e.ext1.is_zero());
    let iv = cond_iv.ext1.is_zero();
    let families_valid = cond_ii.iter().all(|e| e.valid);
    let (consistent, explanation) = if separated {
        (families_valid && complete == ii && complete == iii && complete == iv, None)
    } else {
        let hom_seen = cond_iii.iter().any(|e| !e.hom.is_zero());
        let text = format!(
            "M is not ({g})-separated: the kernel of M -> M^ is {separation_kernel}, so Hom(R_y, M) != 0 \
             for y in I and the Ext^1 conditions alone do not decide completeness"
        );
        (families_valid && !complete && !separation_kernel.is_zero() && hom_seen, Some(text))
    };
    Ok(CertifierReport {
        module: m.canonical(),
        ideal: g.clone(),
        separated,
        separation_kernel,
        complete,
        cond_ii,
        cond_iii,
        cond_iv,
        consistent,
        explanation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm31Entry {
    pub x: RingElement,
    pub hom: LimValue,
    pub ext1: Lim1,
    /// Explicit tower check at the default depth, when `I` is nonzero.
    pub oracle_pass: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm31Report {
    pub completion: CompletedModule,
    pub entries: Vec<Thm31Entry>,
    pub pass: bool,
}

/// `Hom(F, M̂)` and `Ext¹(F, M̂)` vanish for a flat test module `F`.
pub fn verify_thm_3_1(m: &FPModule, ideal: &Ideal, f: &FlatTestModule) -> Result<Thm31Report, AlgebraError> {
    if !flat_test_validate(f, ideal) {
        return Err(AlgebraError::Precondition(format!("some summand of F is not in Rad({})", ideal.reduced())));
    }
    let (completion, _) = complete(m, ideal)?;
    let tower = Tower::completion(m, ideal)?;
    let mut entries = Vec::new();
    for s in &f.summands {
        let (hom, ext1) = localization_against_completed(&s.x, &completion);
        let oracle_pass = if ideal.is_zero() {
            None
        } else {
            let source = Lemma42Source::Localization(s.clone());
            Some(check_lemma_4_2(&source, &tower, DEFAULT_DEPTH)?.pass)
        };
        entries.push(Thm31Entry { x: s.x.clone(), hom, ext1, oracle_pass });
    }
    let pass = entries.iter().all(|e| e.hom.is_zero() && e.ext1.is_zero() && e.oracle_pass != Some(false));
    Ok(Thm31Report { completion, entries, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm33Report {
    pub hom_m: FPModule,
    pub ext1_m: FPModule,
    pub hom_completed: FPModule,
    pub ext1_completed: FPModule,
    /// Statement (b): both degrees agree, and the two fpmod routes agree.
    pub transfer: bool,
    /// `Hom` and `Ext¹` of `X` into `ker τ`.
    pub kernel_piece_zero: bool,
    /// `Hom` and `Ext¹` of `X` into `(R̂/R)^r`.
    pub cokernel_piece_zero: bool,
    pub pass: bool,
}

/// `Ext^i(X, M) → Ext^i(X, M̂)` is an isomorphism for `X` supported in `V(I)`.
pub fn verify_thm_3_3(x: &FPModule, m: &FPModule, ideal: &Ideal) -> Result<Thm33Report, AlgebraError> {
    if x.ring() != m.ring() || ideal.ring() != m.ring() {
        return Err(AlgebraError::RingMismatch(x.ring(), m.ring()));
    }
    if !support_in_v(x, ideal) {
        return Err(AlgebraError::Precondition(format!("Supp X is not contained in V(({}))", ideal.reduced())));
    }
    let ring = m.ring();
    let (completion, tau) = complete(m, ideal)?;
    let hom_m = hom(x, m)?;
    let ext1_m = ext1(x, m)?;
    let routes_agree = hom_via_resolution(x, m)?.module.is_isomorphic(&hom_m)
        && ext1_via_resolution(x, m)?.module.is_isomorphic(&ext1_m);
    let (hom_completed, ext1_completed) = if ideal.is_unit() {
        (FPModule::zero(ring), FPModule::zero(ring))
    } else {
        ext_into_completed(x, &completion)?
    };
    let transfer = routes_agree && hom_m.is_isomorphic(&hom_completed) && ext1_m.is_isomorphic(&ext1_completed);

    let kernel_piece_zero = hom(x, &tau.kernel)?.is_zero() && ext1(x, &tau.kernel)?.is_zero();

    // From 0 → R^r → R̂^r → (R̂/R)^r → 0: Hom(X, R̂^r) = 0 and
    // Ext¹(X, R^r) ≅ Ext¹(X, R̂^r) force both groups into (R̂/R)^r to vanish.
    let r = tau.cokernel_rank;
    let cokernel_piece_zero = if r == 0 || ideal.is_zero() {
        true
    } else {
        let free_hat = CompletedModule::new(ideal, r, &[])?;
        let (h, e) = hom_ext_completed(x, &free_hat)?;
        let e_free = ext1(x, &FPModule::free(ring, r))?;
        h.is_zero() && e.as_fp_module().is_some_and(|e| e.is_isomorphic(&e_free))
    };
    Ok(Thm33Report {
        pass: transfer && kernel_piece_zero && cokernel_piece_zero,
        hom_m,
        ext1_m,
        hom_completed,
        ext1_completed,
        transfer,
        kernel_piece_zero,
        cokernel_piece_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> RingElement {
        Ring::Integers.from_i64(n)
    }

    fn cyc(n: i64) -> FPModule {
        FPModule::cyclic(&z(n))
    }

    fn two() -> Ideal {
        Ideal::principal(&z(2))
    }

    fn sys(xs: &[i64]) -> ElementSystem {
        ElementSystem::new(Ring::Integers, xs.iter().map(|&n| z(n)).collect()).unwrap()
    }

    #[test]
    fn single_element_examples() {
        let r = certify_single(&cyc(8), &z(2)).unwrap();
        assert_eq!(r.beta, 3);
        assert!(r.hom_vanishes && r.ext1_vanishes && r.complete_x && r.consistent);
        let r = certify_single(&FPModule::free(Ring::Integers, 1), &z(2)).unwrap();
        assert!(r.hom_vanishes && !r.ext1_vanishes && !r.complete_x && r.consistent);
        let r = certify_single(&cyc(3), &z(2)).unwrap();
        assert!(!r.hom_vanishes && r.ext1_vanishes && !r.complete_x && r.consistent);
    }

    #[test]
    fn theorem_1_1_examples() {
        let r = certify_theorem_1_1(&cyc(8), &two(), &sys(&[2]), 5, 0).unwrap();
        assert!(r.complete && r.consistent);
        assert!(r.cond_iii.iter().all(|e| e.ext1.is_zero()));
        assert_eq!(r.cond_iii.len(), 5);

        let r = certify_theorem_1_1(&FPModule::free(Ring::Integers, 1), &two(), &sys(&[2]), 5, 0).unwrap();
        assert!(!r.complete && r.consistent);
        assert!(r.cond_iii.iter().all(|e| !e.ext1.is_zero()));

        let r = certify_theorem_1_1(&cyc(12), &two(), &sys(&[2]), 5, 0).unwrap();
        assert!(!r.separated && !r.complete && r.consistent);
        assert!(r.separation_kernel.is_isomorphic(&cyc(3)));
        assert!(r.cond_iv.ext1.is_zero());
        assert!(r.cond_iii[0].hom.is_isomorphic(&cyc(3)));
        assert!(r.explanation.is_some());

        assert!(matches!(certify_theorem_1_1(&cyc(8), &two(), &sys(&[3]), 5, 0), Err(AlgebraError::Precondition(_))));
    }

    #[test]
    fn single_and_full_agree() {
        for m in [cyc(8), cyc(12), FPModule::from_invariants(Ring::Integers, 1, &[z(4)])] {
            let a = certify_single(&m, &z(2)).unwrap();
            let b = certify_theorem_1_1(&m, &two(), &sys(&[2]), 3, 7).unwrap();
            assert_eq!(a.complete_x, b.complete);
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let a = sample_ideal_elements(&Ideal::principal(&z(6)), 6, 11);
        let b = sample_ideal_elements(&Ideal::principal(&z(6)), 6, 11);
        assert_eq!(a, b);
        assert_eq!(a[0], z(6));
        assert_eq!(a[1], z(36));
        assert!(a.iter().all(|y| y.is_divisible_by(&z(6))));
    }

    #[test]
    fn theorem_3_1_examples() {
        let f = |x: i64| FlatTestModule { summands: vec![SymbolicLocalization::new(&z(x))] };
        let r = verify_thm_3_1(&FPModule::free(Ring::Integers, 1), &two(), &f(2)).unwrap();
        assert!(r.pass);
        assert_eq!(r.entries[0].oracle_pass, Some(true));
        let r = verify_thm_3_1(&cyc(12), &two(), &f(2)).unwrap();
        assert!(r.pass);
        assert!(r.completion.as_fp_module().unwrap().is_isomorphic(&cyc(4)));
        assert!(matches!(verify_thm_3_1(&cyc(12), &two(), &f(3)), Err(AlgebraError::Precondition(_))));
    }

    #[test]
    fn theorem_3_3_examples() {
        let r = verify_thm_3_3(&cyc(4), &FPModule::free(Ring::Integers, 1), &two()).unwrap();
        assert!(r.pass && r.hom_m.is_zero() && r.ext1_m.is_isomorphic(&cyc(4)));
        let r = verify_thm_3_3(&cyc(4), &cyc(12), &two()).unwrap();
        assert!(r.pass && r.hom_m.is_isomorphic(&cyc(4)) && r.ext1_completed.is_isomorphic(&cyc(4)));
        let r = verify_thm_3_3(&FPModule::zero(Ring::Integers), &cyc(12), &two()).unwrap();
        assert!(r.pass && r.hom_m.is_zero() && r.ext1_m.is_zero());
        assert!(verify_thm_3_3(&cyc(3), &cyc(12), &two()).is_err());
    }
}
