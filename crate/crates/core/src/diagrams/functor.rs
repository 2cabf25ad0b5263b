use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::module::{CoeffAlgebra, RModule};
use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, FpMatrix, Ring};
use crate::fincat::{Factorization, FinCat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorViolation {
    Identity { object: String },
    Composition { g: String, f: String },
    NotLinear { morphism: String },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::Identity { object } => write!(out, "identity of '{object}' is not sent to the identity"),
            FunctorViolation::Composition { g, f } => write!(out, "functoriality fails at ({g}, {f})"),
            FunctorViolation::NotLinear { morphism } => write!(out, "map of '{morphism}' does not commute with x"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FunctorReport {
    pub violations: Vec<FunctorViolation>,
}

impl FunctorReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A functor from a finite category to free modules over `Z` or to `F_p`-spaces,
/// with a matrix per morphism.
#[derive(Clone, Debug, PartialEq)]
pub struct Functor<M> {
    category: Arc<FinCat>,
    ring: Ring,
    dims: Vec<usize>,
    maps: Vec<M>,
}

impl<M: ExactMatrix> Functor<M> {
    /// Checks sizes only; functoriality is [`Functor::check`].
    pub fn new(category: Arc<FinCat>, ring: Ring, dims: Vec<usize>, maps: Vec<M>) -> Result<Self> {
        if dims.len() != category.num_objects() || maps.len() != category.num_morphisms() {
            return Err(Error::InvalidDiagram("functor data does not match the category".into()));
        }
        for (f, m) in maps.iter().enumerate() {
            if m.nrows() != dims[category.cod(f)] || m.ncols() != dims[category.dom(f)] {
                return Err(Error::DimensionMismatch(format!(
                    "matrix of '{}' is {}x{}, expected {}x{}",
                    category.morphism(f).name,
                    m.nrows(),
                    m.ncols(),
                    dims[category.cod(f)],
                    dims[category.dom(f)]
                )));
            }
            if m.ring() != ring && m.nrows() * m.ncols() > 0 {
                return Err(Error::InvalidDiagram("matrices over mixed rings".into()));
            }
        }
        Ok(Functor {
            category,
            ring,
            dims,
            maps,
        })
    }

    pub fn from_fn(
        category: Arc<FinCat>,
        ring: Ring,
        dims: impl Fn(usize) -> usize,
        map: impl Fn(usize) -> M,
    ) -> Result<Self> {
        let d = (0..category.num_objects()).map(dims).collect();
        let maps = (0..category.num_morphisms()).map(map).collect();
        Self::new(category, ring, d, maps)
    }

    /// Value `Z^dim` (or `F_p^dim`) at every object, identities everywhere.
    pub fn constant(category: Arc<FinCat>, ring: Ring, dim: usize) -> Self {
        let maps = (0..category.num_morphisms())
            .map(|_| M::identity_like(ring, dim))
            .collect();
        Functor {
            dims: vec![dim; category.num_objects()],
            category,
            ring,
            maps,
        }
    }

    pub fn zero(category: Arc<FinCat>, ring: Ring) -> Self {
        Self::constant(category, ring, 0)
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.category
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self, c: usize) -> usize {
        self.dims[c]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn map(&self, f: usize) -> &M {
        &self.maps[f]
    }

    pub fn maps(&self) -> &[M] {
        &self.maps
    }

    pub fn check(&self) -> FunctorReport {
        let cat = &self.category;
        let mut violations = Vec::new();
        for c in 0..cat.num_objects() {
            let id = &self.maps[cat.identity(c)];
            if *id != M::identity_like(self.ring, self.dims[c]) {
                violations.push(FunctorViolation::Identity {
                    object: cat.objects()[c].clone(),
                });
            }
        }
        for g in 0..cat.num_morphisms() {
            for f in 0..cat.num_morphisms() {
                if let Some(gf) = cat.compose(g, f) {
                    if self.maps[g].product(&self.maps[f]) != self.maps[gf] {
                        violations.push(FunctorViolation::Composition {
                            g: cat.morphism(g).name.clone(),
                            f: cat.morphism(f).name.clone(),
                        });
                    }
                }
            }
        }
        FunctorReport { violations }
    }

    /// Precomposition with a functor `source → self.category`.
    pub fn pullback(&self, source: Arc<FinCat>, object_map: &[usize], morphism_map: &[usize]) -> Result<Self> {
        Self::new(
            source,
            self.ring,
            object_map.iter().map(|&c| self.dims[c]).collect(),
            morphism_map.iter().map(|&f| self.maps[f].clone()).collect(),
        )
    }
}

/// A functor on the factorization category of `base`.
#[derive(Clone, Debug)]
pub struct NaturalSystem<M> {
    base: Arc<FinCat>,
    factorization: Arc<Factorization>,
    functor: Functor<M>,
}

impl<M: ExactMatrix> NaturalSystem<M> {
    pub fn new(base: Arc<FinCat>, factorization: Arc<Factorization>, functor: Functor<M>) -> Result<Self> {
        if !Arc::ptr_eq(functor.category(), &factorization.category) && **functor.category() != *factorization.category {
            return Err(Error::IncompatibleBase);
        }
        Ok(NaturalSystem {
            base,
            factorization,
            functor,
        })
    }

    /// Builds the system from values `D(f)` and actions `D(α, β): D(f) → D(β∘f∘α)`.
    pub fn from_fn(
        base: Arc<FinCat>,
        factorization: Arc<Factorization>,
        ring: Ring,
        dims: impl Fn(usize) -> usize,
        action: impl Fn(usize, usize, usize) -> M,
    ) -> Result<Self> {
        let cat = factorization.category.clone();
        let functor = Functor::from_fn(cat.clone(), ring, dims, |m| {
            let (alpha, beta) = factorization.pair(m);
            action(cat.dom(m), alpha, beta)
        })?;
        Ok(NaturalSystem {
            base,
            factorization,
            functor,
        })
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn factorization(&self) -> &Arc<Factorization> {
        &self.factorization
    }

    pub fn functor(&self) -> &Functor<M> {
        &self.functor
    }

    pub fn ring(&self) -> Ring {
        self.functor.ring
    }

    pub fn dim(&self, f: usize) -> usize {
        self.functor.dims[f]
    }

    /// `D(α, β)` on `D(f)`.
    pub fn action(&self, f: usize, alpha: usize, beta: usize) -> &M {
        let m = self
            .factorization
            .morphism(f, alpha, beta)
            .expect("(α, β) is not composable with f");
        &self.functor.maps[m]
    }

    pub fn check(&self) -> FunctorReport {
        self.functor.check()
    }
}

/// Pulls a bimodule `B: ℂ^op × ℂ → Ab` back along `(dom, cod)`.
pub fn pullback_bimodule<M: ExactMatrix>(
    base: Arc<FinCat>,
    factorization: Arc<Factorization>,
    bimodule: &Functor<M>,
) -> Result<NaturalSystem<M>> {
    let cat = factorization.category.clone();
    let functor = bimodule.pullback(cat, &factorization.dom_cod.object_map, &factorization.dom_cod.morphism_map)?;
    NaturalSystem::new(base, factorization, functor)
}

/// The natural system `α ↦ F(cod α)` obtained from a functor on the base.
pub fn codomain_system<M: ExactMatrix>(
    base: Arc<FinCat>,
    factorization: Arc<Factorization>,
    functor: &Functor<M>,
) -> Result<NaturalSystem<M>> {
    let b = base.clone();
    NaturalSystem::from_fn(
        base,
        factorization,
        functor.ring,
        |f| functor.dims[b.cod(f)],
        |_, _, beta| functor.maps[beta].clone(),
    )
}

/// A functor `ℂ → Mod_R` with `R = F_p[x]/(x^m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramFunctor {
    base: Arc<FinCat>,
    alg: CoeffAlgebra,
    modules: Vec<RModule>,
    maps: Vec<FpMatrix>,
}

impl DiagramFunctor {
    /// Checks sizes and primes only; see [`check_functor`] for the laws.
    pub fn new(base: Arc<FinCat>, alg: CoeffAlgebra, modules: Vec<RModule>, maps: Vec<FpMatrix>) -> Result<Self> {
        if modules.len() != base.num_objects() || maps.len() != base.num_morphisms() {
            return Err(Error::InvalidDiagram("diagram data does not match the category".into()));
        }
        if modules.iter().any(|m| m.alg() != alg) || maps.iter().any(|m| m.prime() != alg.p) {
            return Err(Error::InvalidDiagram("values over mixed coefficients".into()));
        }
        for (f, m) in maps.iter().enumerate() {
            let (d, c) = (base.dom(f), base.cod(f));
            if m.rows() != modules[c].dim() || m.cols() != modules[d].dim() {
                return Err(Error::DimensionMismatch(format!(
                    "matrix of '{}' is {}x{}, expected {}x{}",
                    base.morphism(f).name,
                    m.rows(),
                    m.cols(),
                    modules[c].dim(),
                    modules[d].dim()
                )));
            }
        }
        Ok(DiagramFunctor {
            base,
            alg,
            modules,
            maps,
        })
    }

    pub fn constant(base: Arc<FinCat>, module: RModule) -> Self {
        let alg = module.alg();
        let maps = (0..base.num_morphisms())
            .map(|_| FpMatrix::identity(alg.p, module.dim()))
            .collect();
        DiagramFunctor {
            modules: vec![module; base.num_objects()],
            base,
            alg,
            maps,
        }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn alg(&self) -> CoeffAlgebra {
        self.alg
    }

    pub fn module(&self, c: usize) -> &RModule {
        &self.modules[c]
    }

    pub fn modules(&self) -> &[RModule] {
        &self.modules
    }

    pub fn map(&self, f: usize) -> &FpMatrix {
        &self.maps[f]
    }

    pub fn maps(&self) -> &[FpMatrix] {
        &self.maps
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modules.iter().map(RModule::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.modules.iter().map(RModule::dim).sum()
    }

    /// The underlying functor to `F_p`-spaces.
    pub fn underlying(&self) -> Functor<FpMatrix> {
        Functor {
            category: self.base.clone(),
            ring: Ring::PrimeField(self.alg.p),
            dims: self.dims(),
            maps: self.maps.clone(),
        }
    }

    pub fn compatible_with(&self, other: &DiagramFunctor) -> Result<()> {
        if self.alg != other.alg || *self.base != *other.base {
            return Err(Error::IncompatibleBase);
        }
        Ok(())
    }

    /// Replaces the base by an isomorphic copy: morphism `f` of the old base
    /// becomes morphism `perm[f]` of `base`, objects keep their indices.
    pub fn transport(&self, base: Arc<FinCat>, perm: &[usize]) -> Result<Self> {
        let mut maps = vec![FpMatrix::zeros(self.alg.p, 0, 0); self.maps.len()];
        for (f, m) in self.maps.iter().enumerate() {
            maps[perm[f]] = m.clone();
        }
        Self::new(base, self.alg, self.modules.clone(), maps)
    }
}

/// Every violated identity, composition or `R`-linearity instance of `F`.
pub fn check_functor(functor: &DiagramFunctor) -> FunctorReport {
    let mut report = functor.underlying().check();
    let cat = &functor.base;
    for f in 0..cat.num_morphisms() {
        let (d, c) = (cat.dom(f), cat.cod(f));
        if !functor.modules[d].is_hom_to(&functor.modules[c], &functor.maps[f]) {
            report.violations.push(FunctorViolation::NotLinear {
                morphism: cat.morphism(f).name.clone(),
            });
        }
    }
    report
}

/// A family of `R`-modules indexed by the objects of `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObFamily {
    pub base: Arc<FinCat>,
    pub alg: CoeffAlgebra,
    pub modules: Vec<RModule>,
}

impl ObFamily {
    pub fn new(base: Arc<FinCat>, alg: CoeffAlgebra, modules: Vec<RModule>) -> Result<Self> {
        if modules.len() != base.num_objects() || modules.iter().any(|m| m.alg() != alg) {
            return Err(Error::InvalidDiagram("family does not match the category".into()));
        }
        Ok(ObFamily { base, alg, modules })
    }
}

/// `O(F)`: forget the morphism data.
pub fn restrict(functor: &DiagramFunctor) -> ObFamily {
    ObFamily {
        base: functor.base.clone(),
        alg: functor.alg,
        modules: functor.modules.clone(),
    }
}
