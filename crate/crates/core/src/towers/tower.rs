use std::fmt;

use serde::Serialize;

use crate::adic::{complete, CompletedModule};
use crate::error::AlgebraError;
use crate::fpmod::{spans, FPModule, Ideal, ModuleMap};
use crate::matrix::ExactMatrix;
use crate::ring::{coprime_part, split_parts, Ring, RingElement};

/// An inverse system indexed by `α = 1, 2, …` with transitions
/// `M_{α+1} → M_α`.
#[derive(Clone, Debug)]
pub enum Tower {
    /// Every level is `M`, every transition is multiplication by `x`.
    Multiplication { module: FPModule, x: RingElement },
    /// Levels `M/g^α M` with the natural surjections.
    Completion { module: FPModule, ideal: Ideal },
    /// Finitely many levels; `maps[i]` goes from `levels[i + 1]` to `levels[i]`.
    ExplicitFinite { levels: Vec<FPModule>, maps: Vec<ModuleMap> },
}

impl Tower {
    pub fn multiplication(module: &FPModule, x: &RingElement) -> Result<Self, AlgebraError> {
        if module.ring() != x.ring() {
            return Err(AlgebraError::RingMismatch(module.ring(), x.ring()));
        }
        Ok(Tower::Multiplication { module: module.canonical(), x: x.clone() })
    }

    pub fn completion(module: &FPModule, ideal: &Ideal) -> Result<Self, AlgebraError> {
        if module.ring() != ideal.ring() {
            return Err(AlgebraError::RingMismatch(module.ring(), ideal.ring()));
        }
        Ok(Tower::Completion { module: module.canonical(), ideal: ideal.clone() })
    }

    pub fn explicit(levels: Vec<FPModule>, maps: Vec<ModuleMap>) -> Result<Self, AlgebraError> {
        if levels.is_empty() || maps.len() + 1 != levels.len() {
            return Err(AlgebraError::Dimension("an explicit tower needs one map per adjacent pair".into()));
        }
        for (i, f) in maps.iter().enumerate() {
            if f.source().generators() != levels[i + 1].generators()
                || f.target().generators() != levels[i].generators()
            {
                return Err(AlgebraError::Dimension(format!("map {i} does not match its levels")));
            }
        }
        Ok(Tower::ExplicitFinite { levels, maps })
    }

    pub fn ring(&self) -> Ring {
        match self {
            Tower::Multiplication { module, .. } | Tower::Completion { module, .. } => module.ring(),
            Tower::ExplicitFinite { levels, .. } => levels[0].ring(),
        }
    }

    /// Number of levels available, `None` when unbounded.
    pub fn len(&self) -> Option<usize> {
        match self {
            Tower::ExplicitFinite { levels, .. } => Some(levels.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Level `α ≥ 1`.
    pub fn level(&self, alpha: usize) -> FPModule {
        assert!(alpha >= 1);
        match self {
            Tower::Multiplication { module, .. } => module.clone(),
            Tower::Completion { module, ideal } => module.quotient_by_element(&ideal.reduced().pow(alpha as u32)),
            Tower::ExplicitFinite { levels, .. } => levels[alpha - 1].clone(),
        }
    }

    /// The transition matrix `M_{α+1} → M_α` on generators.
    pub fn transition(&self, alpha: usize) -> ExactMatrix {
        assert!(alpha >= 1);
        match self {
            Tower::Multiplication { module, x } => ExactMatrix::identity(module.ring(), module.generators()).scaled(x),
            Tower::Completion { module, .. } => ExactMatrix::identity(module.ring(), module.generators()),
            Tower::ExplicitFinite { maps, .. } => maps[alpha - 1].matrix().clone(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Tower::Multiplication { .. } => "multiplication",
            Tower::Completion { .. } => "completion",
            Tower::ExplicitFinite { .. } => "explicit-finite",
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tower::Multiplication { module, x } => write!(f, "{{{module}, {x}}}"),
            Tower::Completion { module, ideal } => write!(f, "{{{module} / ({})^a}}", ideal.reduced()),
            Tower::ExplicitFinite { levels, .. } => write!(f, "explicit tower of {} levels", levels.len()),
        }
    }
}

/// The localization `R_x` as an `R`-module, kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicLocalization {
    #[serde(skip)]
    pub ring: Ring,
    pub x: RingElement,
}

impl SymbolicLocalization {
    pub fn new(x: &RingElement) -> Self {
        SymbolicLocalization { ring: x.ring(), x: x.clone() }
    }

    /// `R_0 = 0`.
    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    /// `R_x = R` for a unit `x`.
    pub fn is_free(&self) -> bool {
        self.x.is_unit()
    }
}

impl fmt::Display for SymbolicLocalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_({})", self.ring, self.x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonStabilization {
    PositiveFreeRank(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MLVerdict {
    StabilizesAt(usize),
    NeverStabilizes { reason: NonStabilization },
}

/// Why the image chain of a tower does or does not stabilize.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MLCertificate {
    pub verdict: MLVerdict,
    pub bound_used: usize,
}

impl MLCertificate {
    pub fn stabilizes(&self) -> bool {
        matches!(self.verdict, MLVerdict::StabilizesAt(_))
    }
}

/// `lim¹` is reported as a verdict: when nonzero it is not finitely generated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lim1 {
    Zero,
    NonZero { free_rank_witness: usize },
}

impl Lim1 {
    pub fn is_zero(&self) -> bool {
        matches!(self, Lim1::Zero)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimValue {
    Module(FPModule),
    Completed(CompletedModule),
}

impl LimValue {
    pub fn is_zero(&self) -> bool {
        match self {
            LimValue::Module(m) => m.is_zero(),
            LimValue::Completed(c) => c.is_zero(),
        }
    }

    /// The limit as a finitely generated module, when it is one.
    pub fn as_fp_module(&self) -> Option<FPModule> {
        match self {
            LimValue::Module(m) => Some(m.clone()),
            LimValue::Completed(c) => c.as_fp_module(),
        }
    }
}

impl fmt::Display for LimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimValue::Module(m) => write!(f, "{m}"),
            LimValue::Completed(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimVerdict {
    pub lim: LimValue,
    pub lim1: Lim1,
}

/// Smallest `k` with `a | x^k`, for `a` supported on the primes of `x`.
pub(crate) fn adic_length(a: &RingElement, x: &RingElement) -> usize {
    if a.is_unit() {
        return 0;
    }
    let mut k = 0;
    let mut power = x.ring().one();
    while !power.is_divisible_by(a) {
        power = &power * x;
        k += 1;
        assert!(k <= 4 * a.size_bound() as usize + 4, "{a} is not supported on the primes of {x}");
    }
    k
}

/// Stabilization index of `0 :_M x^α` and of `x^α M` on the torsion of `M`:
/// the largest `x`-adic length of the `x`-parts of the invariant factors.
pub(crate) fn torsion_stabilization_index(module: &FPModule, x: &RingElement) -> usize {
    module.invariant_factors().iter().map(|d| adic_length(&split_parts(d, x).0, x)).max().unwrap_or(0)
}

fn submodule_equal(module: &FPModule, a: &ExactMatrix, b: &ExactMatrix) -> bool {
    let rel = module.presentation();
    spans(a, rel, b) && spans(b, rel, a)
}

/// Mittag-Leffler certificate for multiplication and completion towers.
pub fn ml_certificate(tower: &Tower) -> Result<MLCertificate, AlgebraError> {
    match tower {
        Tower::Completion { .. } => Ok(MLCertificate { verdict: MLVerdict::StabilizesAt(0), bound_used: 0 }),
        Tower::Multiplication { module, x } => {
            if module.is_zero() || x.is_unit() {
                return Ok(MLCertificate { verdict: MLVerdict::StabilizesAt(0), bound_used: 0 });
            }
            if x.is_zero() {
                return Ok(MLCertificate { verdict: MLVerdict::StabilizesAt(1), bound_used: 1 });
            }
            let bound = 1 + torsion_stabilization_index(module, x);
            if module.free_rank() > 0 {
                return Ok(MLCertificate {
                    verdict: MLVerdict::NeverStabilizes {
                        reason: NonStabilization::PositiveFreeRank(module.free_rank()),
                    },
                    bound_used: bound,
                });
            }
            let n = module.generators();
            let image = |alpha: usize| ExactMatrix::identity(module.ring(), n).scaled(&x.pow(alpha as u32));
            for alpha in 0..=bound {
                if submodule_equal(module, &image(alpha), &image(alpha + 1)) {
                    debug_assert!(submodule_equal(module, &image(alpha + 1), &image(alpha + 2)));
                    return Ok(MLCertificate { verdict: MLVerdict::StabilizesAt(alpha), bound_used: bound });
                }
            }
            unreachable!("image chain of a torsion module failed to stabilize within its bound")
        }
        Tower::ExplicitFinite { .. } => {
            Err(AlgebraError::Unsupported(format!("ML certificate for a {} tower", tower.kind())))
        }
    }
}

/// `lim` and `lim¹` of multiplication and completion towers by structure.
///
/// For `{M, x}` these are `Hom(R_x, M)` and `Ext¹(R_x, M)`; higher
/// `Ext^i(R_x, M)` vanish.
pub fn limits_closed_form(tower: &Tower) -> Result<LimVerdict, AlgebraError> {
    match tower {
        Tower::Multiplication { module, x } => Ok(multiplication_limits(module, x)),
        Tower::Completion { module, ideal } => {
            let (completion, _) = complete(module, ideal)?;
            Ok(LimVerdict { lim: LimValue::Completed(completion), lim1: Lim1::Zero })
        }
        Tower::ExplicitFinite { .. } => {
            Err(AlgebraError::Unsupported(format!("closed-form limits of a {} tower", tower.kind())))
        }
    }
}

pub(crate) fn multiplication_limits(module: &FPModule, x: &RingElement) -> LimVerdict {
    let ring = module.ring();
    if x.is_unit() {
        return LimVerdict { lim: LimValue::Module(module.canonical()), lim1: Lim1::Zero };
    }
    if x.is_zero() {
        return LimVerdict { lim: LimValue::Module(FPModule::zero(ring)), lim1: Lim1::Zero };
    }
    // The x-divisible part: the x-coprime parts of the torsion.
    let coprime: Vec<RingElement> = module.invariant_factors().iter().map(|d| coprime_part(d, x)).collect();
    let lim = FPModule::from_cyclic(ring, &coprime);
    let lim1 = match module.free_rank() {
        0 => Lim1::Zero,
        r => Lim1::NonZero { free_rank_witness: r },
    };
    LimVerdict { lim: LimValue::Module(lim), lim1 }
}

/// `(Hom(R_x, N), Ext¹(R_x, N))` for a completed module `N`.
///
/// On `R̂ = ∏_{p | g} R̂_p` the factors with `p | x` are `x`-adically
/// complete and contribute nothing; on the others `x` acts invertibly, so
/// `Hom` keeps them and `Ext¹` vanishes. When `g = 0` the completion is `N`
/// itself and the multiplication-tower closed form applies.
pub fn localization_against_completed(x: &RingElement, n: &CompletedModule) -> (LimValue, Lim1) {
    let g = n.generator();
    if g.is_zero() {
        let m = n.as_fp_module().expect("R̂ = R when g = 0");
        let v = multiplication_limits(&m, x);
        return (v.lim, v.lim1);
    }
    if x.is_zero() {
        return (LimValue::Completed(CompletedModule::zero(&n.ideal())), Lim1::Zero);
    }
    let untouched = coprime_part(g, x);
    let torsion: Vec<RingElement> = n.torsion_factors().iter().map(|c| coprime_part(c, x)).collect();
    let ideal = Ideal::principal(&untouched);
    let free = if untouched.is_unit() { 0 } else { n.completed_free_rank() };
    let hom = CompletedModule::new(&ideal, free, &torsion).expect("x-coprime parts stay supported on g");
    (LimValue::Completed(hom), Lim1::Zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> RingElement {
        Ring::Integers.from_i64(n)
    }

    fn mul_tower(m: FPModule, x: i64) -> Tower {
        Tower::multiplication(&m, &z(x)).unwrap()
    }

    #[test]
    fn ml_examples() {
        let c = ml_certificate(&mul_tower(FPModule::cyclic(&z(12)), 2)).unwrap();
        assert_eq!(c.verdict, MLVerdict::StabilizesAt(2));
        assert_eq!(c.bound_used, 3);
        let c = ml_certificate(&mul_tower(FPModule::free(Ring::Integers, 1), 2)).unwrap();
        assert_eq!(c.verdict, MLVerdict::NeverStabilizes { reason: NonStabilization::PositiveFreeRank(1) });
        let c = ml_certificate(&mul_tower(FPModule::from_invariants(Ring::Integers, 2, &[z(9)]), -1)).unwrap();
        assert_eq!(c.verdict, MLVerdict::StabilizesAt(0));
        let t = Tower::completion(&FPModule::free(Ring::Integers, 1), &Ideal::principal(&z(2))).unwrap();
        assert!(ml_certificate(&t).unwrap().stabilizes());
    }

    #[test]
    fn closed_form_examples() {
        let v = limits_closed_form(&mul_tower(FPModule::cyclic(&z(12)), 2)).unwrap();
        assert!(v.lim.as_fp_module().unwrap().is_isomorphic(&FPModule::cyclic(&z(3))));
        assert_eq!(v.lim1, Lim1::Zero);

        let v = limits_closed_form(&mul_tower(FPModule::free(Ring::Integers, 1), 2)).unwrap();
        assert!(v.lim.is_zero());
        assert_eq!(v.lim1, Lim1::NonZero { free_rank_witness: 1 });

        let v = limits_closed_form(&mul_tower(FPModule::cyclic(&z(8)), 2)).unwrap();
        assert!(v.lim.is_zero());
        assert_eq!(v.lim1, Lim1::Zero);
    }

    #[test]
    fn localization_against_completion() {
        let m = FPModule::from_invariants(Ring::Integers, 1, &[z(4)]);
        let (c, _) = complete(&m, &Ideal::principal(&z(6))).unwrap();
        // Z^ at 6 is Z_2 x Z_3; inverting 2 kills the 2-adic factor.
        let (hom, ext) = localization_against_completed(&z(2), &c);
        match hom {
            LimValue::Completed(h) => {
                assert_eq!(h.generator(), &z(3));
                assert_eq!(h.completed_free_rank(), 1);
                assert!(h.torsion_factors().is_empty());
            }
            _ => panic!("expected a completed module"),
        }
        assert!(ext.is_zero());
        let (hom, ext) = localization_against_completed(&z(6), &c);
        assert!(hom.is_zero() && ext.is_zero());
    }
}
