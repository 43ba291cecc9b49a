//! Finitely presented modules over the supported rings, with maps, Hom,
//! Ext¹, tensor and Tor₁.

mod functors;
mod map;
mod module;
mod subquotient;

pub use functors::{
    ext1, ext1_via_resolution, hom, hom_via_resolution, support_in_v, tensor, tensor_via_presentation, tor1,
    tor1_via_resolution,
};
pub use map::ModuleMap;
pub use module::{FPModule, Ideal, Invariants};
pub use subquotient::Subquotient;
pub(crate) use subquotient::{homology, spans};
