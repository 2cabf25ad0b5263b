use std::sync::Arc;

use super::functor::{DiagramFunctor, ObFamily};
use super::module::RModule;
use crate::error::{Error, Result};
use crate::exactalg::{FpMatrix, Subquotient, Subspace};
use crate::fincat::{check_size, FinCat};

/// Components `η_c: F(c) → G(c)`, one per object.
pub type NatTrans = Vec<FpMatrix>;

/// Offsets of the summands of `Λ(D)(c)`: summand `u: c_0 → c` starts at
/// `offsets[u]` inside `Λ(D)(cod u)`.
#[derive(Clone, Debug)]
pub struct LambdaLayout {
    pub dims: Vec<usize>,
    pub offsets: Vec<usize>,
}

impl LambdaLayout {
    pub fn new(base: &FinCat, value_dims: &[usize]) -> Self {
        let mut dims = vec![0; base.num_objects()];
        let mut offsets = vec![0; base.num_morphisms()];
        for u in 0..base.num_morphisms() {
            let c = base.cod(u);
            offsets[u] = dims[c];
            dims[c] += value_dims[base.dom(u)];
        }
        LambdaLayout { dims, offsets }
    }
}

/// `Λ(D)(c) = ⊕_{u: c_0 → c} D(c_0)`, summands in morphism order.
pub fn lambda(family: &ObFamily) -> Result<DiagramFunctor> {
    let base = &family.base;
    check_size("lambda", base)?;
    let p = family.alg.p;
    let value_dims: Vec<usize> = family.modules.iter().map(RModule::dim).collect();
    let layout = LambdaLayout::new(base, &value_dims);
    let modules = (0..base.num_objects())
        .map(|c| {
            let parts: Vec<&RModule> = base.morphisms_into(c).map(|u| &family.modules[base.dom(u)]).collect();
            RModule::direct_sum(family.alg, &parts)
        })
        .collect();
    let maps = (0..base.num_morphisms())
        .map(|g| {
            let (c, c2) = (base.dom(g), base.cod(g));
            let mut m = FpMatrix::zeros(p, layout.dims[c2], layout.dims[c]);
            for u in base.morphisms_into(c) {
                let gu = base.comp(g, u);
                m.add_identity_block(layout.offsets[gu], layout.offsets[u], value_dims[base.dom(u)], 1);
            }
            m
        })
        .collect();
    DiagramFunctor::new(base.clone(), family.alg, modules, maps)
}

/// `Λ(ψ)` for a family of maps `ψ_c: D(c) → D'(c)`.
pub fn lambda_map(source: &ObFamily, target: &ObFamily, components: &[FpMatrix]) -> NatTrans {
    let base = &source.base;
    let p = source.alg.p;
    let src = LambdaLayout::new(base, &source.modules.iter().map(RModule::dim).collect::<Vec<_>>());
    let tgt = LambdaLayout::new(base, &target.modules.iter().map(RModule::dim).collect::<Vec<_>>());
    (0..base.num_objects())
        .map(|c| {
            let mut m = FpMatrix::zeros(p, tgt.dims[c], src.dims[c]);
            for u in base.morphisms_into(c) {
                m.add_block(tgt.offsets[u], src.offsets[u], &components[base.dom(u)], 1);
            }
            m
        })
        .collect()
}

/// The counit `ε_F: ΛO(F) → F`; the `u`-summand at `c` maps by `F(u)`.
pub fn counit(functor: &DiagramFunctor) -> NatTrans {
    let base = functor.base();
    let p = functor.alg().p;
    let layout = LambdaLayout::new(base, &functor.dims());
    (0..base.num_objects())
        .map(|c| {
            let mut m = FpMatrix::zeros(p, functor.module(c).dim(), layout.dims[c]);
            for u in base.morphisms_into(c) {
                m.add_block(0, layout.offsets[u], functor.map(u), 1);
            }
            m
        })
        .collect()
}

/// The map `Λ(D) → F` adjoint to a family `φ_c: D(c) → F(c)`.
pub fn adjoint_transpose(family: &ObFamily, functor: &DiagramFunctor, phi: &[FpMatrix]) -> NatTrans {
    let base = &family.base;
    let p = family.alg.p;
    let layout = LambdaLayout::new(base, &family.modules.iter().map(RModule::dim).collect::<Vec<_>>());
    (0..base.num_objects())
        .map(|c| {
            let mut m = FpMatrix::zeros(p, functor.module(c).dim(), layout.dims[c]);
            for u in base.morphisms_into(c) {
                m.add_block(0, layout.offsets[u], &functor.map(u).mul(&phi[base.dom(u)]), 1);
            }
            m
        })
        .collect()
}

/// The family `D(c) → F(c)` adjoint to `η: Λ(D) → F`, read off the identity summands.
pub fn adjoint_restrict(family: &ObFamily, eta: &[FpMatrix]) -> Vec<FpMatrix> {
    let base = &family.base;
    let layout = LambdaLayout::new(base, &family.modules.iter().map(RModule::dim).collect::<Vec<_>>());
    (0..base.num_objects())
        .map(|c| {
            let start = layout.offsets[base.identity(c)];
            let width = family.modules[c].dim();
            eta[c].submatrix(0..eta[c].rows(), start..start + width)
        })
        .collect()
}

/// Whether `η: F → G` is natural and objectwise `R`-linear.
pub fn is_natural(source: &DiagramFunctor, target: &DiagramFunctor, eta: &[FpMatrix]) -> bool {
    let base = source.base();
    if eta.len() != base.num_objects() {
        return false;
    }
    for c in 0..base.num_objects() {
        if !source.module(c).is_hom_to(target.module(c), &eta[c]) {
            return false;
        }
    }
    (0..base.num_morphisms()).all(|f| {
        let (a, b) = (base.dom(f), base.cod(f));
        target.map(f).mul(&eta[a]) == eta[b].mul(source.map(f))
    })
}

/// The objectwise kernel of `η: F → G` with its inclusion into `F`.
pub fn kernel(source: &DiagramFunctor, eta: &[FpMatrix]) -> Result<(DiagramFunctor, NatTrans)> {
    let base = source.base();
    let inclusions: Vec<FpMatrix> = eta.iter().map(FpMatrix::kernel).collect();
    let modules = (0..base.num_objects())
        .map(|c| source.module(c).submodule(&inclusions[c]))
        .collect::<Result<Vec<_>>>()?;
    let maps = (0..base.num_morphisms())
        .map(|f| {
            let image = source.map(f).mul(&inclusions[base.dom(f)]);
            inclusions[base.cod(f)]
                .solve_many(&image)
                .ok_or_else(|| Error::Internal("kernel is not a subfunctor; map is not natural".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((DiagramFunctor::new(base.clone(), source.alg(), modules, maps)?, inclusions))
}

/// The objectwise cokernel of `η: F → G` with its projection from `G`.
pub fn cokernel(target: &DiagramFunctor, eta: &[FpMatrix]) -> Result<(DiagramFunctor, NatTrans)> {
    let base = target.base();
    let p = target.alg().p;
    let mut projections = Vec::with_capacity(base.num_objects());
    let mut sections = Vec::with_capacity(base.num_objects());
    for (c, e) in eta.iter().enumerate() {
        let d = target.module(c).dim();
        let q = Subquotient::new(Subspace::full(p, d), Subspace::column_span(e))?;
        let columns: Vec<Vec<u32>> = (0..d)
            .map(|j| {
                let mut v = vec![0; d];
                v[j] = 1;
                q.class_coords(&v).expect("every vector is a cycle")
            })
            .collect();
        projections.push(FpMatrix::from_columns(p, q.dim(), &columns));
        sections.push(FpMatrix::from_columns(p, d, &q.section()));
    }
    let modules = (0..base.num_objects())
        .map(|c| {
            let x = projections[c].mul(target.module(c).x()).mul(&sections[c]);
            RModule::new(target.alg(), x)
        })
        .collect::<Result<Vec<_>>>()?;
    let maps = (0..base.num_morphisms())
        .map(|f| projections[base.cod(f)].mul(target.map(f)).mul(&sections[base.dom(f)]))
        .collect();
    Ok((DiagramFunctor::new(base.clone(), target.alg(), modules, maps)?, projections))
}

/// The family concentrated at `c`: `D(c) = module`, zero elsewhere.
pub fn concentrated(base: Arc<FinCat>, c: usize, module: RModule) -> ObFamily {
    let alg = module.alg();
    let modules = (0..base.num_objects())
        .map(|o| if o == c { module.clone() } else { RModule::zero(alg) })
        .collect();
    ObFamily { base, alg, modules }
}
