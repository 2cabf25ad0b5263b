//! Projective resolutions and Ext over `F_p[x]/(x^m)`, and an independent
//! Ext computation for diagrams through the category algebra.

mod oracle;
mod resolution;

pub use oracle::{functor_to_algebra_module, oracle_ext, CategoryAlgebraModule};
pub use resolution::{
    ext_objects, ext_with_resolution, lift_chain_map, projective_cover, spliced_resolution, syzygy, ExtComputation,
    ProjectiveCover, Resolution, ResolutionCache,
};
