//! Brute-force truncation oracle: inverse limits of the first few levels of
//! a tower, computed as compatible tuples inside `⊕ M_α`.

use serde::Serialize;

use crate::error::AlgebraError;
use crate::fpmod::{spans, FPModule, Subquotient};
use crate::matrix::ExactMatrix;

use super::tower::{limits_closed_form, ml_certificate, Lim1, LimVerdict, MLCertificate};
use super::Tower;

/// Image of `M_{d}` in `M_1` compared with the image of `M_{d-1}`.
#[derive(Clone, Debug, Serialize)]
pub struct DescentStep {
    pub level: usize,
    pub quotient: FPModule,
    pub strict: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncatedLimit {
    pub depth: usize,
    pub lim_approx: FPModule,
    pub descent_log: Vec<DescentStep>,
    /// Image of the deepest level in each of the first `depth / 2` levels.
    pub stable_images: Vec<FPModule>,
    pub stabilized: bool,
}

impl TruncatedLimit {
    /// Every step of the descent log is strict.
    pub fn strict_descent(&self) -> bool {
        !self.descent_log.is_empty() && self.descent_log.iter().all(|s| s.strict)
    }
}

struct Levels {
    relations: Vec<ExactMatrix>,
    transitions: Vec<ExactMatrix>,
}

impl Levels {
    fn take(tower: &Tower, count: usize) -> Self {
        let relations = (1..=count).map(|a| tower.level(a).presentation().clone()).collect();
        let transitions = (1..count).map(|a| tower.transition(a)).collect();
        Levels { relations, transitions }
    }

    fn sizes(&self) -> Vec<usize> {
        self.relations.iter().map(|r| r.rows()).collect()
    }

    /// Cover map `M_to → M_from`, composing transitions.
    fn composite(&self, from: usize, to: usize) -> ExactMatrix {
        let ring = self.relations[0].ring();
        let mut c = ExactMatrix::identity(ring, self.relations[from - 1].rows());
        for a in from..to {
            c = &c * &self.transitions[a - 1];
        }
        c
    }

    fn block_relations(&self, count: usize) -> ExactMatrix {
        let ring = self.relations[0].ring();
        self.relations[..count].iter().fold(ExactMatrix::zeros(ring, 0, 0), |acc, r| acc.block_diag(r))
    }

    /// Compatible tuples over the first `count` levels, projected onto the
    /// first `head` levels. A finite tower has its top level as limit, so
    /// the tuples are the images of the top cover.
    fn compatible_tuples(&self, count: usize, head: usize) -> ExactMatrix {
        (2..=head).fold(self.composite(1, count), |acc, a| acc.vstack(&self.composite(a, count)))
    }
}

/// Compatible-tuple inverse limit of the first `depth` levels.
///
/// The approximation is the projection of the depth-`D` tuples onto the
/// first `k = ⌊D/2⌋` levels. It is reported stabilized when dropping the
/// last level does not change that projection and the projection is
/// already faithful on the first `k - 1` levels.
pub fn limits_truncated(tower: &Tower, depth: usize) -> Result<TruncatedLimit, AlgebraError> {
    if depth < 2 {
        return Err(AlgebraError::Precondition(format!("oracle depth must be at least 2, got {depth}")));
    }
    let available = tower.len().unwrap_or(usize::MAX);
    let depth = depth.min(available);
    if depth < 2 {
        return Err(AlgebraError::Precondition("tower has fewer than two levels".into()));
    }
    let log_depth = if available > depth { depth + 1 } else { depth };
    let levels = Levels::take(tower, log_depth);
    let sizes = levels.sizes();
    let k = (depth / 2).max(1);
    let shorter: usize = sizes[..k - 1].iter().sum();
    let rels_k = levels.block_relations(k);

    let p_full = levels.compatible_tuples(depth, k);
    let approx = Subquotient::new(p_full.clone(), rels_k.clone());
    let same = spans(&p_full, &rels_k, &levels.compatible_tuples(depth - 1, k));

    // The projection onto the shorter window is onto its image; finitely
    // generated modules are Hopfian, so it is injective iff the two agree.
    let faithful = if k == 1 {
        approx.module.is_zero()
    } else {
        let image = Subquotient::new(p_full.select_rows(0..shorter), levels.block_relations(k - 1)).module;
        image.is_isomorphic(&approx.module)
    };

    let rels_1 = &levels.relations[0];
    let mut descent_log = Vec::new();
    let mut previous = levels.composite(1, 1);
    for d in 2..=log_depth {
        let image = levels.composite(1, d);
        let step = Subquotient::new(previous.clone(), image.hstack(rels_1)).module;
        descent_log.push(DescentStep { level: d, strict: !step.is_zero(), quotient: step });
        previous = image;
    }

    let stable_images =
        (1..=k).map(|a| Subquotient::new(levels.composite(a, depth), levels.relations[a - 1].clone()).module).collect();

    Ok(TruncatedLimit {
        depth,
        lim_approx: approx.module.canonical(),
        descent_log,
        stable_images,
        stabilized: same && faithful,
    })
}

/// Closed-form limits of one tower held against the truncation oracle.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub tower: String,
    pub closed: LimVerdict,
    pub oracle: TruncatedLimit,
    pub ml: MLCertificate,
    /// Only decided when the oracle stabilized.
    pub lim_agrees: Option<bool>,
    /// Only decided when the closed form claims `lim¹ ≠ 0`.
    pub lim1_justified: Option<bool>,
    pub ml_consistent: bool,
    pub pass: bool,
}

/// Compares `limits_closed_form` with `limits_truncated` at `depth`. A
/// nonzero `lim¹` needs strict descent at every logged step and a positive
/// free rank witness.
pub fn oracle_crosscheck(tower: &Tower, depth: usize) -> Result<CrossCheck, AlgebraError> {
    let closed = limits_closed_form(tower)?;
    let oracle = limits_truncated(tower, depth)?;
    let ml = ml_certificate(tower)?;
    let lim_agrees =
        oracle.stabilized.then(|| closed.lim.as_fp_module().is_some_and(|m| m.is_isomorphic(&oracle.lim_approx)));
    let lim1_justified = match &closed.lim1 {
        Lim1::NonZero { free_rank_witness } => {
            Some(oracle.strict_descent() && oracle.descent_log.len() == oracle.depth && *free_rank_witness > 0)
        }
        Lim1::Zero => None,
    };
    let ml_consistent = closed.lim1.is_zero() == ml.stabilizes();
    let pass = lim_agrees != Some(false) && lim1_justified != Some(false) && ml_consistent;
    Ok(CrossCheck { tower: tower.to_string(), closed, oracle, ml, lim_agrees, lim1_justified, ml_consistent, pass })
}
