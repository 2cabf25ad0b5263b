//! Functors into `R`-modules, natural systems on the factorization category,
//! the restriction/induction adjunction and the Hom and Ext systems built from
//! a pair of diagrams.

mod constructions;
mod file;
mod functor;
mod module;
mod systems;

pub use constructions::{
    adjoint_restrict, adjoint_transpose, cokernel, concentrated, counit, is_natural, kernel, lambda, lambda_map,
    LambdaLayout, NatTrans,
};
pub use file::{Coefficient, DiagramFile, ModuleEntry};
pub use functor::{
    check_functor, codomain_system, pullback_bimodule, restrict, DiagramFunctor, Functor, FunctorReport,
    FunctorViolation, NaturalSystem, ObFamily,
};
pub use module::{CoeffAlgebra, HomSpace, RModule};
pub use systems::{ext_natural_system, ext_natural_systems, hom_bimodule, hom_natural_system, ExtSystems, HomSystem};
