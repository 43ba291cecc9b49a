//! Hom, Ext¹, tensor and Tor₁ of finitely presented modules.
//!
//! The plain functions use the cyclic decomposition and the PID rules
//! `Hom(R/a, R/b) = R/(a, b)` and friends. The `*_via_resolution`
//! variants compute the same groups from the presentation matrices alone
//! and serve as an independent route.

use crate::error::AlgebraError;
use crate::matrix::{kernel, ExactMatrix};
use crate::ring::{gcd, split_parts, Ring, RingElement};

use super::subquotient::{homology, Subquotient};
use super::{FPModule, Ideal};

fn same_ring(m: &FPModule, n: &FPModule) -> Result<Ring, AlgebraError> {
    if m.ring() != n.ring() {
        return Err(AlgebraError::RingMismatch(m.ring(), n.ring()));
    }
    Ok(m.ring())
}

/// Applies a rule to each pair of cyclic summands; `None` means the pair
/// contributes nothing.
fn by_summands(
    m: &FPModule,
    n: &FPModule,
    rule: impl Fn(&RingElement, &RingElement) -> Option<RingElement>,
) -> Result<FPModule, AlgebraError> {
    let ring = same_ring(m, n)?;
    let mut factors = Vec::new();
    for a in m.cyclic_summands() {
        for b in n.cyclic_summands() {
            if let Some(d) = rule(&a, &b) {
                factors.push(d);
            }
        }
    }
    Ok(FPModule::from_cyclic(ring, &factors))
}

/// `Hom(M, N)`.
pub fn hom(m: &FPModule, n: &FPModule) -> Result<FPModule, AlgebraError> {
    // Hom(R/a, R) = 0 for a ≠ 0; otherwise R/(a, b), reading R/(0) as R.
    by_summands(m, n, |a, b| (a.is_zero() || !b.is_zero()).then(|| gcd(a, b)))
}

/// `Ext¹(M, N)`; `Ext^i` vanishes for `i ≥ 2` over a PID.
pub fn ext1(m: &FPModule, n: &FPModule) -> Result<FPModule, AlgebraError> {
    by_summands(m, n, |a, b| (!a.is_zero()).then(|| gcd(a, b)))
}

/// `M ⊗ N`.
pub fn tensor(m: &FPModule, n: &FPModule) -> Result<FPModule, AlgebraError> {
    by_summands(m, n, |a, b| Some(gcd(a, b)))
}

/// `Tor₁(M, N)`.
pub fn tor1(m: &FPModule, n: &FPModule) -> Result<FPModule, AlgebraError> {
    by_summands(m, n, |a, b| (!a.is_zero() && !b.is_zero()).then(|| gcd(a, b)))
}

/// `Hom(M, N)` as the kernel of `Hom(R^n, N) → Hom(R^m, N)` induced by the
/// presentation `R^m → R^n` of `M`. Elements of `N^n` are written as `n`
/// consecutive blocks of coordinates on the generators of `N`.
pub fn hom_via_resolution(m: &FPModule, n: &FPModule) -> Result<Subquotient, AlgebraError> {
    let ring = same_ring(m, n)?;
    let (a, b) = (m.presentation(), n.presentation());
    let p = n.generators();
    let d0 = a.transpose().kron_identity(p);
    let incoming = ExactMatrix::zeros(ring, p * a.rows(), 0);
    Ok(homology(&incoming, &d0, &b.repeat_diag(a.rows()), &b.repeat_diag(a.cols())))
}

/// `Ext¹(M, N)` as the cohomology of `Hom(P, N)` at `Hom(R^m, N)` for the
/// free resolution `R^k → R^m → R^n → M` built from the presentation.
pub fn ext1_via_resolution(m: &FPModule, n: &FPModule) -> Result<Subquotient, AlgebraError> {
    same_ring(m, n)?;
    let (a, b) = (m.presentation(), n.presentation());
    let p = n.generators();
    let syz = kernel(a);
    let d0 = a.transpose().kron_identity(p);
    let d1 = syz.transpose().kron_identity(p);
    Ok(homology(&d0, &d1, &b.repeat_diag(a.cols()), &b.repeat_diag(syz.cols())))
}

/// `Tor₁(M, N)` as the homology of `P ⊗ N` at `R^m ⊗ N`.
pub fn tor1_via_resolution(m: &FPModule, n: &FPModule) -> Result<Subquotient, AlgebraError> {
    same_ring(m, n)?;
    let (a, b) = (m.presentation(), n.presentation());
    let p = n.generators();
    let syz = kernel(a);
    Ok(homology(&syz.kron_identity(p), &a.kron_identity(p), &b.repeat_diag(a.cols()), &b.repeat_diag(a.rows())))
}

/// `M ⊗ N` as the cokernel of `[A ⊗ 1 | 1 ⊗ B]`.
pub fn tensor_via_presentation(m: &FPModule, n: &FPModule) -> Result<FPModule, AlgebraError> {
    same_ring(m, n)?;
    let (a, b) = (m.presentation(), n.presentation());
    let left = a.kron_identity(n.generators());
    let right = b.repeat_diag(m.generators());
    Ok(FPModule::new(left.hstack(&right)))
}

/// Whether `X` is killed by a power of the reduced generator `g` of `I`,
/// i.e. `Supp X ⊆ V(I)`.
pub fn support_in_v(x: &FPModule, ideal: &Ideal) -> bool {
    let g = ideal.reduced();
    if g.is_zero() {
        return true;
    }
    if g.is_unit() {
        return x.is_zero();
    }
    x.is_torsion() && x.invariant_factors().iter().all(|d| split_parts(d, g).1.is_unit())
}
