use std::sync::Arc;

use super::functor::{DiagramFunctor, Functor, NaturalSystem};
use super::module::HomSpace;
use crate::error::Result;
use crate::exactalg::{FpMatrix, Ring};
use crate::fincat::{Factorization, FinCat};
use crate::homalg::{ext_with_resolution, lift_chain_map, ExtComputation, ResolutionCache};

/// `α ↦ Hom_R(F(dom α), G(cod α))` together with the chosen bases.
#[derive(Clone, Debug)]
pub struct HomSystem {
    pub system: NaturalSystem<FpMatrix>,
    spaces: Vec<HomSpace>,
    objects: usize,
}

impl HomSystem {
    pub fn new(factorization: Arc<Factorization>, f: &DiagramFunctor, g: &DiagramFunctor) -> Result<Self> {
        f.compatible_with(g)?;
        let base = f.base().clone();
        let n = base.num_objects();
        let spaces: Vec<HomSpace> = (0..n * n)
            .map(|i| HomSpace::new(f.module(i / n), g.module(i % n)))
            .collect();
        let ring = Ring::PrimeField(f.alg().p);
        let b = base.clone();
        let system = NaturalSystem::from_fn(
            base,
            factorization,
            ring,
            |h| spaces[b.dom(h) * n + b.cod(h)].dim(),
            |h, u, v| {
                let src = &spaces[b.dom(h) * n + b.cod(h)];
                let tgt = &spaces[b.dom(u) * n + b.cod(v)];
                src.induced(tgt, |phi| g.map(v).mul(phi).mul(f.map(u)))
            },
        )?;
        Ok(HomSystem {
            system,
            spaces,
            objects: n,
        })
    }

    pub fn space(&self, a: usize, b: usize) -> &HomSpace {
        &self.spaces[a * self.objects + b]
    }

    /// Componentwise precomposition `Hom(F(a), G(b)) → Hom(F'(a), G(b))` with
    /// `η: F' → F`, one matrix per object of the factorization category.
    pub fn precompose(&self, other: &HomSystem, eta: &[FpMatrix]) -> Vec<FpMatrix> {
        let base = self.system.base();
        (0..base.num_morphisms())
            .map(|h| {
                let (a, b) = (base.dom(h), base.cod(h));
                self.space(a, b).induced(other.space(a, b), |phi| phi.mul(&eta[a]))
            })
            .collect()
    }
}

pub fn hom_natural_system(f: &DiagramFunctor, g: &DiagramFunctor) -> Result<NaturalSystem<FpMatrix>> {
    f.compatible_with(g)?;
    let factorization = Arc::new(f.base().factorization()?);
    Ok(HomSystem::new(factorization, f, g)?.system)
}

/// The bimodule `(a, b) ↦ Hom_R(F(a), G(b))` on `ℂ^op × ℂ`.
pub fn hom_bimodule(f: &DiagramFunctor, g: &DiagramFunctor) -> Result<(Arc<FinCat>, Functor<FpMatrix>)> {
    f.compatible_with(g)?;
    let base = f.base();
    let n = base.num_objects();
    let nm = base.num_morphisms();
    let product = Arc::new(FinCat::product(&base.opposite(), base));
    let spaces: Vec<HomSpace> = (0..n * n)
        .map(|i| HomSpace::new(f.module(i / n), g.module(i % n)))
        .collect();
    let functor = Functor::from_fn(
        product.clone(),
        Ring::PrimeField(f.alg().p),
        |o| spaces[o].dim(),
        |m| {
            let (u, v) = (m / nm, m % nm);
            // u is read in ℂ: F(u) runs from cod u (in ℂ^op, dom) back to dom u.
            let src = &spaces[base.cod(u) * n + base.dom(v)];
            let tgt = &spaces[base.dom(u) * n + base.cod(v)];
            src.induced(tgt, |phi| g.map(v).mul(phi).mul(f.map(u)))
        },
    )?;
    Ok((product, functor))
}

/// Ext systems `α ↦ Ext^q_R(F(dom α), G(cod α))` for `q ≤ max_degree`, with
/// the action induced through lifted chain maps.
#[derive(Debug)]
pub struct ExtSystems {
    pub systems: Vec<NaturalSystem<FpMatrix>>,
    pub computations: Vec<ExtComputation>,
}

pub fn ext_natural_systems(
    f: &DiagramFunctor,
    g: &DiagramFunctor,
    max_degree: usize,
    cache: &ResolutionCache,
) -> Result<ExtSystems> {
    f.compatible_with(g)?;
    let base = f.base().clone();
    let factorization = Arc::new(base.factorization()?);
    let n = base.num_objects();
    let resolutions: Vec<_> = (0..n).map(|a| cache.get(f.module(a), max_degree + 1)).collect();
    let computations: Vec<ExtComputation> = (0..n * n)
        .map(|i| ext_with_resolution(resolutions[i / n].clone(), g.module(i % n), max_degree))
        .collect();
    let lifts = (0..base.num_morphisms())
        .map(|u| lift_chain_map(&resolutions[base.dom(u)], &resolutions[base.cod(u)], f.map(u), max_degree))
        .collect::<Result<Vec<_>>>()?;
    let ring = Ring::PrimeField(f.alg().p);
    let mut systems = Vec::with_capacity(max_degree + 1);
    for q in 0..=max_degree {
        let system = if q == 0 {
            HomSystem::new(factorization.clone(), f, g)?.system
        } else {
            let b = base.clone();
            NaturalSystem::from_fn(
                base.clone(),
                factorization.clone(),
                ring,
                |h| computations[b.dom(h) * n + b.cod(h)].dim(q),
                |h, u, v| {
                    let src = &computations[b.dom(h) * n + b.cod(h)];
                    let tgt = &computations[b.dom(u) * n + b.cod(v)];
                    src.induced(tgt, q, &lifts[u][q], g.map(v))
                },
            )?
        };
        systems.push(system);
    }
    Ok(ExtSystems { systems, computations })
}

/// `α ↦ Ext^q_R(F(dom α), G(cod α))`; `q = 0` is [`hom_natural_system`].
pub fn ext_natural_system(f: &DiagramFunctor, g: &DiagramFunctor, q: usize) -> Result<NaturalSystem<FpMatrix>> {
    let cache = ResolutionCache::new();
    Ok(ext_natural_systems(f, g, q, &cache)?.systems.swap_remove(q))
}

#[cfg(test)]
mod tests {
    use super::super::functor::pullback_bimodule;
    use super::super::module::{CoeffAlgebra, RModule};
    use super::*;
    use crate::fincat::examples::{arrow, cyclic_group, terminal};

    #[test]
    fn hom_system_on_terminal() {
        let alg = CoeffAlgebra::field(3).unwrap();
        let f = DiagramFunctor::constant(Arc::new(terminal()), RModule::trivial(alg, 1));
        let h = hom_natural_system(&f, &f).unwrap();
        assert_eq!(h.dim(0), 1);
        assert!(h.functor().map(0).is_identity());
    }

    #[test]
    fn hom_system_on_arrow_is_functorial() {
        let alg = CoeffAlgebra::field(2).unwrap();
        let base = Arc::new(arrow());
        let f = DiagramFunctor::constant(base.clone(), RModule::trivial(alg, 1));
        let h = hom_natural_system(&f, &f).unwrap();
        assert!(h.check().is_valid());
        let (id_a, fm) = (base.identity(0), base.morphism_index("f").unwrap());
        assert!(h.action(id_a, id_a, fm).is_identity());
        for o in 0..3 {
            assert_eq!(h.dim(o), 1);
        }
    }

    #[test]
    fn pulled_back_hom_bimodule_is_the_hom_system() {
        let alg = CoeffAlgebra::new(2, 2).unwrap();
        let base = Arc::new(cyclic_group(2));
        let f = DiagramFunctor::constant(base.clone(), RModule::free(alg, 1));
        let (product, bimodule) = hom_bimodule(&f, &f).unwrap();
        assert!(bimodule.check().is_valid());
        assert_eq!(product.num_objects(), 1);
        let fact = Arc::new(base.factorization().unwrap());
        let pulled = pullback_bimodule(base.clone(), fact.clone(), &bimodule).unwrap();
        let direct = HomSystem::new(fact, &f, &f).unwrap().system;
        assert_eq!(pulled.functor().maps(), direct.functor().maps());
    }

    #[test]
    fn ext_systems_of_k_over_dual_numbers() {
        let alg = CoeffAlgebra::new(2, 2).unwrap();
        let base = Arc::new(arrow());
        let k = DiagramFunctor::constant(base, RModule::trivial(alg, 1));
        let cache = ResolutionCache::new();
        let ext = ext_natural_systems(&k, &k, 3, &cache).unwrap();
        for system in &ext.systems {
            assert!(system.check().is_valid());
            for o in 0..3 {
                assert_eq!(system.dim(o), 1);
            }
        }
    }

    #[test]
    fn ext_over_a_field_is_zero_in_positive_degrees() {
        let alg = CoeffAlgebra::field(5).unwrap();
        let base = Arc::new(cyclic_group(2));
        let f = DiagramFunctor::constant(base, RModule::trivial(alg, 2));
        let e1 = ext_natural_system(&f, &f, 1).unwrap();
        assert_eq!(e1.dim(0), 0);
        let e0 = ext_natural_system(&f, &f, 0).unwrap();
        assert_eq!(e0.functor().maps(), hom_natural_system(&f, &f).unwrap().functor().maps());
    }
}
