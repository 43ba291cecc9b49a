//! Koszul and Čech complexes of a finite system of elements, local
//! cohomology verdicts and flat test modules built from localizations.

use std::fmt;

use serde::Serialize;

use crate::error::AlgebraError;
use crate::fpmod::{homology, FPModule, Ideal, ModuleMap};
use crate::matrix::ExactMatrix;
use crate::ring::{gcd_all, in_radical, radical_compare, supported_part, RadicalOrder, Ring, RingElement};
use crate::towers::{torsion_stabilization_index, SymbolicLocalization};

/// Largest system size handled by the complexes.
pub const MAX_SYSTEM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementSystem {
    #[serde(skip)]
    ring: Ring,
    elements: Vec<RingElement>,
}

impl ElementSystem {
    pub fn new(ring: Ring, elements: Vec<RingElement>) -> Result<Self, AlgebraError> {
        if elements.is_empty() {
            return Err(AlgebraError::ZeroInput("an element system needs at least one element"));
        }
        if let Some(e) = elements.iter().find(|e| e.ring() != ring) {
            return Err(AlgebraError::RingMismatch(ring, e.ring()));
        }
        Ok(ElementSystem { ring, elements })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn elements(&self) -> &[RingElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `gcd(x⃗)`, the reduced generator of the ideal the system generates.
    pub fn generator(&self) -> RingElement {
        gcd_all(self.ring, &self.elements)
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::principal(&self.generator())
    }
}

impl fmt::Display for ElementSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Subsets of `0..r` of size `k`, in lexicographic order.
fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn walk(start: usize, r: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..r {
            current.push(i);
            walk(i + 1, r, k, current, out);
            current.pop();
        }
    }
    walk(0, r, k, &mut current, &mut out);
    out
}

fn sign(negative: bool, ring: Ring) -> RingElement {
    ring.from_i64(if negative { -1 } else { 1 })
}

/// Koszul differential `Λ^k → Λ^{k-1}` on the elements `y`:
/// `e_S ↦ Σ_j (-1)^j y_{s_j} e_{S ∖ s_j}`.
fn koszul_differential(ring: Ring, y: &[RingElement], k: usize) -> ExactMatrix {
    let r = y.len();
    let rows = subsets(r, k - 1);
    let cols = subsets(r, k);
    let mut d = ExactMatrix::zeros(ring, rows.len(), cols.len());
    for (c, s) in cols.iter().enumerate() {
        for (j, &i) in s.iter().enumerate() {
            let face: Vec<usize> = s.iter().copied().filter(|&t| t != i).collect();
            let row = rows.iter().position(|t| *t == face).expect("face is a subset");
            d.set(row, c, &sign(j % 2 == 1, ring) * &y[i]);
        }
    }
    d
}

fn check_size(system: &ElementSystem) -> Result<(), AlgebraError> {
    if system.len() > MAX_SYSTEM {
        return Err(AlgebraError::Unsupported(format!(
            "systems of more than {MAX_SYSTEM} elements (got {})",
            system.len()
        )));
    }
    Ok(())
}

/// `H_0, …, H_r` of the Koszul complex on `x_i^{n_i}` with coefficients in `M`.
pub fn koszul_homology(system: &ElementSystem, exponents: &[u32], m: &FPModule) -> Result<Vec<FPModule>, AlgebraError> {
    check_size(system)?;
    let ring = system.ring();
    if m.ring() != ring {
        return Err(AlgebraError::RingMismatch(ring, m.ring()));
    }
    if exponents.len() != system.len() {
        return Err(AlgebraError::Dimension(format!("{} exponents for {} elements", exponents.len(), system.len())));
    }
    if exponents.contains(&0) {
        return Err(AlgebraError::Precondition("Koszul exponents must be at least 1".into()));
    }
    let y: Vec<RingElement> = system.elements().iter().zip(exponents).map(|(x, &n)| x.pow(n)).collect();
    let r = y.len();
    let p = m.generators();
    let a = m.presentation();
    let rank = |k: usize| subsets(r, k).len();
    // d[k] : K_k ⊗ M → K_{k-1} ⊗ M on covers, for k = 1..=r.
    let d: Vec<ExactMatrix> = (1..=r).map(|k| koszul_differential(ring, &y, k).kron_identity(p)).collect();
    let mut out = Vec::with_capacity(r + 1);
    for k in 0..=r {
        let cover = rank(k) * p;
        let outgoing = if k == 0 { ExactMatrix::zeros(ring, 0, cover) } else { d[k - 1].clone() };
        let incoming = if k == r { ExactMatrix::zeros(ring, cover, 0) } else { d[k].clone() };
        let target_rels = if k == 0 { ExactMatrix::zeros(ring, 0, 0) } else { a.repeat_diag(rank(k - 1)) };
        let h = homology(&incoming, &outgoing, &a.repeat_diag(rank(k)), &target_rels);
        out.push(h.module.canonical());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CohomologyVerdict {
    Zero,
    NonZero { rank: usize },
}

impl CohomologyVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, CohomologyVerdict::Zero)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalCohomologyVerdict {
    pub h0: FPModule,
    /// Degrees `1..=r`.
    pub higher: Vec<CohomologyVerdict>,
}

impl LocalCohomologyVerdict {
    pub fn same_as(&self, other: &LocalCohomologyVerdict) -> bool {
        let trim = |v: &[CohomologyVerdict]| {
            let last = v.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
            v[..last].to_vec()
        };
        self.h0.is_isomorphic(&other.h0) && trim(&self.higher) == trim(&other.higher)
    }
}

/// `H^i_I(M)` for `I = (x⃗)`, by classification over the PID.
pub fn local_cohomology(m: &FPModule, system: &ElementSystem) -> Result<LocalCohomologyVerdict, AlgebraError> {
    let ring = system.ring();
    if m.ring() != ring {
        return Err(AlgebraError::RingMismatch(ring, m.ring()));
    }
    let g = system.generator();
    let mut higher = vec![CohomologyVerdict::Zero; system.len()];
    let h0 = if g.is_unit() {
        FPModule::zero(ring)
    } else if g.is_zero() {
        m.canonical()
    } else {
        if m.free_rank() > 0 {
            higher[0] = CohomologyVerdict::NonZero { rank: m.free_rank() };
        }
        let parts: Vec<RingElement> = m.invariant_factors().iter().map(|d| supported_part(d, &g)).collect();
        FPModule::from_cyclic(ring, &parts)
    };
    Ok(LocalCohomologyVerdict { h0, higher })
}

/// `⋃_n (0 :_M g^n)`, read off once the kernels stop growing.
pub fn h0_by_kernels(m: &FPModule, system: &ElementSystem) -> Result<FPModule, AlgebraError> {
    let ring = system.ring();
    if m.ring() != ring {
        return Err(AlgebraError::RingMismatch(ring, m.ring()));
    }
    let g = system.generator();
    if g.is_unit() {
        return Ok(FPModule::zero(ring));
    }
    if g.is_zero() {
        // g^n = 0 kills everything for n ≥ 1.
        return Ok(ModuleMap::scalar(m, &g).kernel().module.canonical());
    }
    let bound = torsion_stabilization_index(m, &g) as u32;
    let at = |n: u32| ModuleMap::scalar(m, &g.pow(n)).kernel().module;
    let (k, next) = (at(bound.max(1)), at(bound.max(1) + 1));
    if !k.is_isomorphic(&next) {
        return Err(AlgebraError::Precondition(format!("kernels of ({g})^n still growing past n = {bound}")));
    }
    Ok(k.canonical())
}

#[derive(Clone, Debug, Serialize)]
pub struct CechTerm {
    pub subset: Vec<usize>,
    pub localization: SymbolicLocalization,
}

/// The Čech complex `0 → R → ⊕ R_{x_i} → ⊕ R_{x_i x_j} → … → 0`.
#[derive(Clone, Debug, Serialize)]
pub struct CechComplex {
    pub system: ElementSystem,
    /// `terms[k]` lists the `k`-subsets.
    pub terms: Vec<Vec<CechTerm>>,
    /// `differentials[k] : Č^k → Č^{k+1}`, signed incidence matrices.
    pub differentials: Vec<ExactMatrix>,
}

impl CechComplex {
    pub fn new(system: &ElementSystem) -> Result<Self, AlgebraError> {
        check_size(system)?;
        let ring = system.ring();
        let r = system.len();
        let terms: Vec<Vec<CechTerm>> = (0..=r)
            .map(|k| {
                subsets(r, k)
                    .into_iter()
                    .map(|s| {
                        let x = s.iter().fold(ring.one(), |acc, &i| &acc * &system.elements()[i]);
                        CechTerm { subset: s, localization: SymbolicLocalization::new(&x) }
                    })
                    .collect()
            })
            .collect();
        let differentials = (0..r)
            .map(|k| {
                let (src, dst) = (&terms[k], &terms[k + 1]);
                let mut d = ExactMatrix::zeros(ring, dst.len(), src.len());
                for (c, t) in src.iter().enumerate() {
                    for i in (0..r).filter(|i| !t.subset.contains(i)) {
                        let mut s = t.subset.clone();
                        s.push(i);
                        s.sort_unstable();
                        let row = dst.iter().position(|u| u.subset == s).expect("superset is a term");
                        let before = t.subset.iter().filter(|&&j| j < i).count();
                        d.set(row, c, sign(before % 2 == 1, ring));
                    }
                }
                d
            })
            .collect();
        Ok(CechComplex { system: system.clone(), terms, differentials })
    }

    pub fn ring(&self) -> Ring {
        self.system.ring()
    }

    pub fn d_squared_zero(&self) -> bool {
        self.differentials.windows(2).all(|w| (&w[1] * &w[0]).is_zero())
    }

    /// The incidence pattern is the transposed Koszul differential on `(1, …, 1)`.
    pub fn matches_koszul(&self) -> bool {
        let ring = self.ring();
        let ones = vec![ring.one(); self.system.len()];
        self.differentials.iter().enumerate().all(|(k, d)| *d == koszul_differential(ring, &ones, k + 1).transpose())
    }

    /// `D_x`: the terms in degrees `≥ 1`, shifted down by one.
    pub fn global_part(&self) -> (Vec<Vec<CechTerm>>, Vec<ExactMatrix>) {
        (self.terms[1..].to_vec(), self.differentials[1..].to_vec())
    }

    /// Degreewise exactness of `0 → D_x[-1] → Č_x → R → 0`: in degree 0 the
    /// augmentation `Č^0 = R_1 → R` is an isomorphism and `D_x[-1]` vanishes;
    /// in degree `k ≥ 1` the inclusion `D^{k-1} → Č^k` is the identity on
    /// the same summands, compatible with the differentials.
    pub fn degreewise_exact(&self) -> bool {
        let (d_terms, d_diffs) = self.global_part();
        let augmentation =
            self.terms[0].len() == 1 && self.terms[0][0].subset.is_empty() && self.terms[0][0].localization.is_free();
        let same_terms = d_terms
            .iter()
            .zip(&self.terms[1..])
            .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(s, t)| s.subset == t.subset));
        let same_maps = d_diffs.iter().zip(&self.differentials[1..]).all(|(a, b)| a == b);
        augmentation && same_terms && same_maps && d_terms.len() + 1 == self.terms.len()
    }

    /// `H^i(Č_x ⊗ M)`.
    pub fn cohomology(&self, m: &FPModule) -> Result<LocalCohomologyVerdict, AlgebraError> {
        local_cohomology(m, &self.system)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RadicalInvariance {
    pub equal: bool,
    pub alpha: u32,
    /// Smallest `c` with `gcd(x⃗)^c ∈ (y_1^α, …, y_r^α)`.
    pub cofinality_witness: u32,
}

/// Local cohomology along two systems with the same radical agrees.
pub fn radical_invariance_check(
    x: &ElementSystem,
    y: &ElementSystem,
    m: &FPModule,
    alpha: u32,
) -> Result<RadicalInvariance, AlgebraError> {
    if x.ring() != y.ring() {
        return Err(AlgebraError::RingMismatch(x.ring(), y.ring()));
    }
    let (gx, gy) = (x.generator(), y.generator());
    let order = if gx.is_zero() || gy.is_zero() {
        if gx.is_zero() && gy.is_zero() {
            RadicalOrder::Equal
        } else {
            RadicalOrder::Incomparable
        }
    } else {
        radical_compare(&gx, &gy)?
    };
    if order != RadicalOrder::Equal {
        return Err(AlgebraError::Precondition(format!("Rad({gx}) and Rad({gy}) differ")));
    }
    let equal = local_cohomology(m, x)?.same_as(&local_cohomology(m, y)?);
    let target = gcd_all(y.ring(), &y.elements().iter().map(|e| e.pow(alpha)).collect::<Vec<_>>());
    let mut c = 0u32;
    let mut power = x.ring().one();
    while !power.is_divisible_by(&target) {
        power = &power * &gx;
        c += 1;
        assert!(c as u64 <= target.size_bound() + 2, "radicals were checked equal");
    }
    Ok(RadicalInvariance { equal, alpha, cofinality_witness: c })
}

/// `F = ⊕ R_{x_i}`.
#[derive(Clone, Debug, Serialize)]
pub struct FlatTestModule {
    pub summands: Vec<SymbolicLocalization>,
}

impl FlatTestModule {
    pub fn from_system(system: &ElementSystem) -> Self {
        FlatTestModule { summands: system.elements().iter().map(SymbolicLocalization::new).collect() }
    }

    /// Whether `F ⊗ X = 0`: `R_x ⊗ R/(d) = 0` exactly when `x ∈ Rad(d)`.
    pub fn tensor_vanishes(&self, x: &FPModule) -> bool {
        self.summands
            .iter()
            .all(|s| s.is_zero() || (x.free_rank() == 0 && x.invariant_factors().iter().all(|d| in_radical(&s.x, d))))
    }
}

/// `F ⊗ R/I = 0`, i.e. every `x_i ∈ Rad I`.
pub fn flat_test_validate(f: &FlatTestModule, ideal: &Ideal) -> bool {
    f.summands.iter().all(|s| in_radical(&s.x, ideal.reduced()))
}
