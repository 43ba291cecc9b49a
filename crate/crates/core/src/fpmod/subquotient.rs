use crate::matrix::{kernel, smith_normal_form, solve_columns, ExactMatrix};

use super::FPModule;

/// The module `(span G + span D) / span D` inside a free ambient module,
/// where the columns of `G` generate and the columns of `D` are killed.
///
/// Generator `j` of `module` is the class of column `j` of `generators`, so
/// maps between subquotients can be written on these generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub module: FPModule,
    pub generators: ExactMatrix,
    pub relations: ExactMatrix,
}

impl Subquotient {
    pub fn new(generators: ExactMatrix, relations: ExactMatrix) -> Self {
        assert_eq!(generators.rows(), relations.rows(), "subquotient ambient mismatch");
        let k = generators.cols();
        let syz = kernel(&generators.hstack(&relations));
        let presentation = syz.select_rows(0..k);
        Subquotient { module: FPModule::new(presentation), generators, relations }
    }

    /// Coordinates of ambient vectors (columns of `vectors`) on the
    /// generators, modulo the relations; `None` if some vector lies outside.
    pub fn coordinates(&self, vectors: &ExactMatrix) -> Option<ExactMatrix> {
        let k = self.generators.cols();
        let full = solve_columns(&self.generators.hstack(&self.relations), vectors)?;
        Some(full.select_rows(0..k))
    }

    /// The same subquotient on a minimal generating set, one generator per
    /// cyclic summand.
    pub fn minimal(&self) -> Subquotient {
        let ring = self.generators.ring();
        let p = self.module.presentation();
        let snf = smith_normal_form(p);
        let n = p.rows();
        let u_inv = solve_columns(&snf.u, &ExactMatrix::identity(ring, n)).expect("unimodular");
        let keep: Vec<usize> = (0..n).filter(|&i| i >= p.cols() || !snf.s.get(i, i).is_unit()).collect();
        let basis = &self.generators * &u_inv;
        let cols: Vec<Vec<_>> = keep.iter().map(|&i| basis.column(i)).collect();
        Subquotient::new(ExactMatrix::from_columns(ring, self.generators.rows(), &cols), self.relations.clone())
    }
}

/// Generators of `{ y : map * y ∈ span(target_relations) }`.
pub(crate) fn preimage_of_relations(map: &ExactMatrix, target_relations: &ExactMatrix) -> ExactMatrix {
    let n = map.cols();
    kernel(&map.hstack(target_relations)).select_rows(0..n)
}

/// `ker(outgoing) / im(incoming)` on the middle term of a complex of
/// presented modules, all written on free covers.
pub(crate) fn homology(
    incoming: &ExactMatrix,
    outgoing: &ExactMatrix,
    middle_relations: &ExactMatrix,
    outgoing_relations: &ExactMatrix,
) -> Subquotient {
    let cycles = preimage_of_relations(outgoing, outgoing_relations);
    let boundaries = incoming.hstack(middle_relations);
    Subquotient::new(cycles, boundaries)
}

/// Whether every column of `vectors` lies in `span(generators) + span(relations)`.
pub(crate) fn spans(generators: &ExactMatrix, relations: &ExactMatrix, vectors: &ExactMatrix) -> bool {
    solve_columns(&generators.hstack(relations), vectors).is_some()
}
