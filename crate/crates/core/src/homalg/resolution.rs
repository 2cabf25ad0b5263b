use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::diagrams::{CoeffAlgebra, HomSpace, RModule};
use crate::error::{Error, Result};
use crate::exactalg::{FpMatrix, Subquotient, Subspace};

/// A minimal epimorphism `π: R^s → A`, `s = dim A/xA`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub free: RModule,
    pub map: FpMatrix,
}

impl ProjectiveCover {
    pub fn rank(&self) -> usize {
        self.free.free_rank().expect("cover is free")
    }
}

/// Generators are standard basis vectors completing `im x` to a spanning set,
/// taken in index order.
pub fn projective_cover(a: &RModule) -> ProjectiveCover {
    let alg = a.alg();
    let d = a.dim();
    let mut span = Subspace::column_span(a.x());
    let mut generators = Vec::new();
    for j in 0..d {
        let mut e = vec![0u32; d];
        e[j] = 1;
        if !span.contains(&e) {
            span = span.sum(&Subspace::span(alg.p, d, [e.as_slice()]));
            generators.push(e);
        }
    }
    let free = RModule::free(alg, generators.len());
    let mut columns = Vec::with_capacity(free.dim());
    for g in generators {
        let mut v = g;
        for _ in 0..alg.m {
            let next = a.x().mul_vec(&v);
            columns.push(v);
            v = next;
        }
    }
    ProjectiveCover {
        map: FpMatrix::from_columns(alg.p, d, &columns),
        free,
    }
}

/// `Ω(A) = ker(π_A)` and its inclusion `ω_A: Ω(A) → P(A)`.
pub fn syzygy(a: &RModule) -> (RModule, FpMatrix) {
    let cover = projective_cover(a);
    let inclusion = cover.map.kernel();
    let omega = cover
        .free
        .submodule(&inclusion)
        .expect("kernel of an R-linear map is a submodule");
    (omega, inclusion)
}

/// The spliced resolution `... → P(ΩA) → P(A) → A`.
#[derive(Clone, Debug)]
pub struct Resolution {
    module: RModule,
    terms: Vec<RModule>,
    augmentation: FpMatrix,
    /// `differentials[q - 1] = d_q: P_q → P_{q-1}`.
    differentials: Vec<FpMatrix>,
    syzygies: Vec<RModule>,
}

impl Resolution {
    pub fn module(&self) -> &RModule {
        &self.module
    }

    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, q: usize) -> &RModule {
        &self.terms[q]
    }

    pub fn rank(&self, q: usize) -> usize {
        self.terms[q].free_rank().expect("resolution terms are free")
    }

    pub fn augmentation(&self) -> &FpMatrix {
        &self.augmentation
    }

    /// `d_q: P_q → P_{q-1}` for `q ≥ 1`.
    pub fn differential(&self, q: usize) -> &FpMatrix {
        &self.differentials[q - 1]
    }

    /// `Ω^q(A)`; `Ω^0(A) = A`.
    pub fn syzygy(&self, q: usize) -> &RModule {
        &self.syzygies[q]
    }

    /// The map into `P_{q-1}` (or `A` for `q = 0`).
    fn boundary(&self, q: usize) -> &FpMatrix {
        if q == 0 {
            &self.augmentation
        } else {
            &self.differentials[q - 1]
        }
    }

    /// Rank conditions: `π` onto, `d_q ∘ d_{q+1} = 0`, and exactness at every `P_q`, `q < length`.
    pub fn is_exact(&self) -> bool {
        if self.augmentation.rank() != self.module.dim() {
            return false;
        }
        let len = self.length();
        (0..len).all(|q| {
            let out = self.boundary(q);
            let inc = self.boundary(q + 1);
            out.mul(inc).is_zero() && out.rank() + inc.rank() == self.terms[q].dim()
        })
    }
}

pub fn spliced_resolution(a: &RModule, length: usize) -> Resolution {
    let mut terms = Vec::with_capacity(length + 1);
    let mut differentials = Vec::with_capacity(length);
    let mut syzygies = vec![a.clone()];
    let mut augmentation = None;
    let mut previous_inclusion: Option<FpMatrix> = None;
    for q in 0..=length {
        let cover = projective_cover(&syzygies[q]);
        match previous_inclusion.take() {
            None => augmentation = Some(cover.map.clone()),
            Some(inc) => differentials.push(inc.mul(&cover.map)),
        }
        let inclusion = cover.map.kernel();
        let omega = cover
            .free
            .submodule(&inclusion)
            .expect("kernel of an R-linear map is a submodule");
        terms.push(cover.free);
        syzygies.push(omega);
        previous_inclusion = Some(inclusion);
    }
    Resolution {
        module: a.clone(),
        terms,
        augmentation: augmentation.expect("length ≥ 0"),
        differentials,
        syzygies,
    }
}

/// Resolutions shared across a computation, keyed by module and length.
#[derive(Debug, Default)]
pub struct ResolutionCache {
    store: Mutex<HashMap<(CoeffAlgebra, usize, Vec<u32>, usize), Arc<Resolution>>>,
}

impl ResolutionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, a: &RModule, length: usize) -> Arc<Resolution> {
        let key = (a.alg(), a.dim(), a.x().to_rows().concat(), length);
        if let Some(r) = self.store.lock().expect("cache lock").get(&key) {
            return r.clone();
        }
        let r = Arc::new(spliced_resolution(a, length));
        self.store.lock().expect("cache lock").entry(key).or_insert(r).clone()
    }
}

/// Lifts `f: A' → A` to `ũ_q: P_q(A') → P_q(A)`, `q ≤ length`, taking the first
/// solution of each linear system on generators and extending `R`-linearly.
pub fn lift_chain_map(from: &Resolution, to: &Resolution, f: &FpMatrix, length: usize) -> Result<Vec<FpMatrix>> {
    let alg = from.module.alg();
    let m = alg.m;
    let mut lifts: Vec<FpMatrix> = Vec::with_capacity(length + 1);
    for q in 0..=length {
        let src = &from.terms[q];
        let tgt = &to.terms[q];
        let rank = from.rank(q);
        let mut columns = Vec::with_capacity(src.dim());
        for g in 0..rank {
            let mut e = vec![0u32; src.dim()];
            e[g * m] = 1;
            let image = if q == 0 {
                f.mul_vec(&from.augmentation.mul_vec(&e))
            } else {
                lifts[q - 1].mul_vec(&from.differentials[q - 1].mul_vec(&e))
            };
            let mut y = to
                .boundary(q)
                .solve(&image)
                .ok_or_else(|| Error::Internal(format!("chain map does not lift in degree {q}")))?;
            for _ in 0..m {
                let next = tgt.x().mul_vec(&y);
                columns.push(y);
                y = next;
            }
        }
        lifts.push(FpMatrix::from_columns(alg.p, tgt.dim(), &columns));
    }
    Ok(lifts)
}

/// `Ext^q_R(A, B)` for `q ≤ max_degree` from `Hom_R(P_*(A), B)`.
#[derive(Clone, Debug)]
pub struct ExtComputation {
    resolution: Arc<Resolution>,
    target: RModule,
    homs: Vec<HomSpace>,
    coboundaries: Vec<FpMatrix>,
    groups: Vec<Subquotient>,
}

impl ExtComputation {
    pub fn max_degree(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn dim(&self, q: usize) -> usize {
        self.groups[q].dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.groups.iter().map(Subquotient::dim).collect()
    }

    pub fn resolution(&self) -> &Arc<Resolution> {
        &self.resolution
    }

    pub fn target(&self) -> &RModule {
        &self.target
    }

    /// `δ^q: Hom(P_q, B) → Hom(P_{q+1}, B)` in the free-hom bases.
    pub fn coboundary(&self, q: usize) -> &FpMatrix {
        &self.coboundaries[q]
    }

    /// Cocycles `P_q → B` representing a basis of `Ext^q`.
    pub fn representatives(&self, q: usize) -> Vec<FpMatrix> {
        self.groups[q]
            .section()
            .iter()
            .map(|v| combine(&self.homs[q], v))
            .collect()
    }

    /// Class of a cocycle `P_q → B` in the representative basis.
    pub fn class_of(&self, q: usize, cocycle: &FpMatrix) -> Option<Vec<u32>> {
        let v = self.homs[q].coords(cocycle)?;
        self.groups[q].class_coords(&v)
    }

    /// Map `Ext^q(A, B) → Ext^q(A', B')` induced by a lift `ũ_q` of `A' → A`
    /// and by `g: B → B'`; `self` is `(A, B)`, `other` is `(A', B')`.
    pub fn induced(&self, other: &ExtComputation, q: usize, lift: &FpMatrix, g: &FpMatrix) -> FpMatrix {
        let columns: Vec<Vec<u32>> = self
            .representatives(q)
            .iter()
            .map(|phi| {
                other
                    .class_of(q, &g.mul(phi).mul(lift))
                    .expect("induced cochain is a cocycle")
            })
            .collect();
        FpMatrix::from_columns(self.target.prime(), other.dim(q), &columns)
    }
}

fn combine(space: &HomSpace, coords: &[u32]) -> FpMatrix {
    let mut phi = FpMatrix::zeros(space.prime(), space.target_dim(), space.source_dim());
    for (i, &c) in coords.iter().enumerate() {
        if c != 0 {
            phi = phi.add(&space.element(i).scale(c));
        }
    }
    phi
}

pub fn ext_objects(a: &RModule, b: &RModule, max_degree: usize) -> ExtComputation {
    ext_with_resolution(Arc::new(spliced_resolution(a, max_degree + 1)), b, max_degree)
}

/// Ext from a stored resolution of length at least `max_degree + 1`.
pub fn ext_with_resolution(resolution: Arc<Resolution>, b: &RModule, max_degree: usize) -> ExtComputation {
    assert!(resolution.length() > max_degree);
    let p = b.prime();
    let homs: Vec<HomSpace> = (0..=max_degree + 1)
        .map(|q| HomSpace::new(resolution.term(q), b))
        .collect();
    let coboundaries: Vec<FpMatrix> = (0..=max_degree)
        .map(|q| {
            let d = resolution.differential(q + 1);
            homs[q].induced(&homs[q + 1], |phi| phi.mul(d))
        })
        .collect();
    let groups = (0..=max_degree)
        .map(|q| {
            let cycles = Subspace::column_span(&coboundaries[q].kernel());
            let boundaries = if q == 0 {
                Subspace::zero(p, homs[0].dim())
            } else {
                Subspace::column_span(&coboundaries[q - 1])
            };
            Subquotient::new(cycles, boundaries).expect("δ∘δ = 0 on a resolution")
        })
        .collect();
    ExtComputation {
        resolution,
        target: b.clone(),
        homs,
        coboundaries,
        groups,
    }
}
