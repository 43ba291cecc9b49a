use crate::error::AlgebraError;
use crate::matrix::ExactMatrix;
use crate::ring::RingElement;

use super::subquotient::{preimage_of_relations, spans, Subquotient};
use super::FPModule;

/// A homomorphism of presented modules, written as a matrix from the
/// source generators to the target generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FPModule,
    target: FPModule,
    matrix: ExactMatrix,
}

impl ModuleMap {
    /// Checks that the matrix sends source relations into the target
    /// relation module.
    pub fn new(source: FPModule, target: FPModule, matrix: ExactMatrix) -> Result<Self, AlgebraError> {
        if source.ring() != target.ring() || matrix.ring() != source.ring() {
            return Err(AlgebraError::RingMismatch(source.ring(), target.ring()));
        }
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(AlgebraError::Dimension(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        let images = &matrix * source.presentation();
        let empty = ExactMatrix::zeros(target.ring(), target.generators(), 0);
        if !spans(target.presentation(), &empty, &images) {
            return Err(AlgebraError::IllDefinedMap("a source relation does not map into the target relations".into()));
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: FPModule, target: FPModule, matrix: ExactMatrix) -> Self {
        ModuleMap { source, target, matrix }
    }

    /// Multiplication by `c` on `module`.
    pub fn scalar(module: &FPModule, c: &RingElement) -> Self {
        let n = module.generators();
        let matrix = ExactMatrix::identity(module.ring(), n).scaled(c);
        ModuleMap::new_unchecked(module.clone(), module.clone(), matrix)
    }

    pub fn identity(module: &FPModule) -> Self {
        Self::scalar(module, &module.ring().one())
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap, AlgebraError> {
        if other.source.generators() != self.target.generators() {
            return Err(AlgebraError::Dimension("maps are not composable".into()));
        }
        let matrix = other.matrix.checked_mul(&self.matrix)?;
        Ok(ModuleMap::new_unchecked(self.source.clone(), other.target.clone(), matrix))
    }

    pub fn kernel(&self) -> Subquotient {
        let gens = preimage_of_relations(&self.matrix, self.target.presentation());
        Subquotient::new(gens, self.source.presentation().clone())
    }

    pub fn image(&self) -> Subquotient {
        Subquotient::new(self.matrix.clone(), self.target.presentation().clone())
    }

    pub fn cokernel(&self) -> FPModule {
        FPModule::new(self.target.presentation().hstack(&self.matrix))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().module.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    pub fn is_zero(&self) -> bool {
        let empty = ExactMatrix::zeros(self.target.ring(), self.target.generators(), 0);
        spans(self.target.presentation(), &empty, &self.matrix)
    }
}
