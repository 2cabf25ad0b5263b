//! Seeded random categories and diagrams. Categories come from classes that
//! are associative by construction: posets (optionally with an adjoined
//! bottom), cyclic monoids, and small groups.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagrams::{
    adjoint_transpose, cokernel, lambda, CoeffAlgebra, DiagramFunctor, Functor, ObFamily, RModule,
};
use crate::error::Result;
use crate::exactalg::{FpMatrix, IntMatrix, Ring};
use crate::fincat::examples::{cyclic_group, cyclic_monoid, poset, terminal};
use crate::fincat::FinCat;
use crate::specseq::{resolve_functor_within, total_dimension};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_objects: usize,
    /// Non-identity morphisms.
    pub max_arrows: usize,
    pub p: u32,
    pub m: usize,
    /// Rank bound for the free summands that generate a random diagram.
    pub max_rank: usize,
    /// Instances are redrawn until `dim Tot^{degree+1}` of their double
    /// complex is at most `max_total_dim`.
    pub degree: usize,
    pub max_total_dim: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_objects: 3,
            max_arrows: 4,
            p: 2,
            m: 2,
            max_rank: 1,
            degree: 3,
            max_total_dim: 2000,
        }
    }
}

/// A random partial order on `n` elements with at most `max_arrows` strict
/// relations; with `bottom`, element `x0` lies below all others.
pub fn random_poset(rng: &mut InstanceRng, n: usize, max_arrows: usize, bottom: bool) -> FinCat {
    let offset = usize::from(bottom);
    let total = n + offset;
    let budget = max_arrows.saturating_sub(if bottom { n } else { 0 });
    let mut density = 0.6;
    let le = loop {
        let mut le: Vec<Vec<bool>> = (0..total).map(|i| (0..total).map(|j| i == j).collect()).collect();
        let order: Vec<usize> = {
            let mut v: Vec<usize> = (offset..total).collect();
            v.shuffle(rng);
            v
        };
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(density) {
                    le[order[a]][order[b]] = true;
                }
            }
        }
        for k in 0..total {
            for i in 0..total {
                for j in 0..total {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        let strict = (offset..total)
            .flat_map(|i| (offset..total).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && le[i][j])
            .count();
        if strict <= budget {
            if bottom {
                for row in le.iter_mut().take(1) {
                    row.iter_mut().for_each(|v| *v = true);
                }
            }
            break le;
        }
        density *= 0.7;
    };
    poset(&le).expect("transitively closed relation")
}

/// A one-object category: a cyclic group or monoid, or the Klein four-group,
/// with at most `max_elements` elements.
pub fn random_monoid(rng: &mut InstanceRng, max_elements: usize) -> FinCat {
    let max = max_elements.clamp(2, 4);
    match rng.gen_range(0..3) {
        0 => cyclic_group(rng.gen_range(2..=max)),
        1 => {
            let order = rng.gen_range(2..=max);
            let index = rng.gen_range(1..order);
            cyclic_monoid(index, order - index)
        }
        _ if max == 4 => FinCat::product(&cyclic_group(2), &cyclic_group(2)),
        _ => cyclic_group(max),
    }
}

pub fn random_category(rng: &mut InstanceRng, bounds: &Bounds) -> FinCat {
    let max = bounds.max_objects.max(1);
    let objects = if max > 1 && rng.gen_bool(0.85) { rng.gen_range(2..=max) } else { rng.gen_range(1..=max) };
    if bounds.max_arrows >= 1 && rng.gen_bool(0.3) {
        random_monoid(rng, bounds.max_arrows + 1)
    } else {
        random_poset(rng, objects, bounds.max_arrows, false)
    }
}

fn random_vector(rng: &mut InstanceRng, p: u32, len: usize) -> Vec<u32> {
    (0..len).map(|_| rng.gen_range(0..p)).collect()
}

/// A cokernel of a random map `Λ(D') → Λ(D)` with `D_c ∈ {0, k, R^s}` and `D'` free,
/// or `Λ(D)` itself.
pub fn random_diagram(rng: &mut InstanceRng, base: &Arc<FinCat>, alg: CoeffAlgebra, max_rank: usize) -> Result<DiagramFunctor> {
    let n = base.num_objects();
    let modules: Vec<RModule> = (0..n)
        .map(|_| match rng.gen_range(0..4) {
            0 => RModule::zero(alg),
            1 => RModule::trivial(alg, 1),
            _ => RModule::free(alg, rng.gen_range(1..=max_rank.max(1))),
        })
        .collect();
    let family = ObFamily::new(base.clone(), alg, modules)?;
    let top = lambda(&family)?;
    if rng.gen_bool(0.25) {
        return Ok(top);
    }
    let relations: Vec<RModule> = (0..n)
        .map(|c| {
            let rank = if top.module(c).dim() == 0 { 0 } else { rng.gen_range(0..=1) };
            RModule::free(alg, rank)
        })
        .collect();
    let generators: Vec<FpMatrix> = (0..n)
        .map(|c| {
            let target = top.module(c);
            let rank = relations[c].free_rank().unwrap_or(0);
            let mut phi = FpMatrix::zeros(alg.p, target.dim(), rank * alg.m);
            for g in 0..rank {
                let mut v = random_vector(rng, alg.p, target.dim());
                for k in 0..alg.m {
                    for (i, &x) in v.iter().enumerate() {
                        phi.set(i, g * alg.m + k, x);
                    }
                    v = target.x().mul_vec(&v);
                }
            }
            phi
        })
        .collect();
    let relations = ObFamily::new(base.clone(), alg, relations)?;
    let eta = adjoint_transpose(&relations, &top, &generators);
    Ok(cokernel(&top, &eta)?.0)
}

/// Any `F_p`-linear representation of `a → b` (so `m = 1` only is `R`-linear in general).
pub fn random_arrow_diagram(rng: &mut InstanceRng, base: &Arc<FinCat>, alg: CoeffAlgebra, max_dim: usize) -> Result<DiagramFunctor> {
    let dims = [rng.gen_range(0..=max_dim), rng.gen_range(0..=max_dim)];
    let modules = dims.iter().map(|&d| RModule::trivial(alg, d)).collect();
    let maps = (0..base.num_morphisms())
        .map(|f| {
            let (a, b) = (base.dom(f), base.cod(f));
            if base.is_identity(f) {
                FpMatrix::identity(alg.p, dims[a])
            } else {
                FpMatrix::from_fn(alg.p, dims[b], dims[a], |_, _| rng.gen_range(0..alg.p) as i64)
            }
        })
        .collect();
    DiagramFunctor::new(base.clone(), alg, modules, maps)
}

/// A `Z`-valued functor: `Λ` of a family of free groups, or, on a poset, the
/// pullback of a random chain of integer matrices along the height function.
pub fn random_int_functor(rng: &mut InstanceRng, base: &Arc<FinCat>) -> Result<Functor<IntMatrix>> {
    let is_poset = (0..base.num_objects()).all(|a| (0..base.num_objects()).all(|b| base.hom(a, b).count() <= 1))
        && (0..base.num_morphisms()).all(|f| base.is_identity(f) || base.dom(f) != base.cod(f));
    if is_poset && rng.gen_bool(0.6) {
        chain_pullback(rng, base)
    } else {
        int_lambda(rng, base)
    }
}

fn chain_pullback(rng: &mut InstanceRng, base: &Arc<FinCat>) -> Result<Functor<IntMatrix>> {
    let n = base.num_objects();
    // Longest chain below each object; strictly increasing along non-identities.
    let mut height = vec![0usize; n];
    for _ in 0..n {
        for f in 0..base.num_morphisms() {
            if !base.is_identity(f) {
                height[base.cod(f)] = height[base.cod(f)].max(height[base.dom(f)] + 1);
            }
        }
    }
    let levels = height.iter().max().copied().unwrap_or(0) + 1;
    let dims: Vec<usize> = (0..levels).map(|_| rng.gen_range(0..=2)).collect();
    let steps: Vec<IntMatrix> = (0..levels.saturating_sub(1))
        .map(|i| {
            let rows: Vec<Vec<i64>> = (0..dims[i + 1])
                .map(|_| (0..dims[i]).map(|_| rng.gen_range(-3..=3)).collect())
                .collect();
            let mut m = IntMatrix::zeros(dims[i + 1], dims[i]);
            for (r, row) in rows.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    m.set(r, c, v.into());
                }
            }
            m
        })
        .collect();
    let transport = |from: usize, to: usize| {
        (from..to).fold(IntMatrix::identity(dims[from]), |acc, i| steps[i].mul(&acc))
    };
    Functor::from_fn(
        base.clone(),
        Ring::Integers,
        |c| dims[height[c]],
        |f| transport(height[base.dom(f)], height[base.cod(f)]),
    )
}

fn int_lambda(rng: &mut InstanceRng, base: &Arc<FinCat>) -> Result<Functor<IntMatrix>> {
    let ranks: Vec<usize> = (0..base.num_objects()).map(|_| rng.gen_range(0..=1)).collect();
    let mut dims = vec![0; base.num_objects()];
    let mut offsets = vec![0; base.num_morphisms()];
    for u in 0..base.num_morphisms() {
        offsets[u] = dims[base.cod(u)];
        dims[base.cod(u)] += ranks[base.dom(u)];
    }
    Functor::from_fn(base.clone(), Ring::Integers, |c| dims[c], |g| {
        let (c, c2) = (base.dom(g), base.cod(g));
        let mut m = IntMatrix::zeros(dims[c2], dims[c]);
        for u in base.morphisms_into(c) {
            m.add_identity_block(offsets[base.comp(g, u)], offsets[u], ranks[base.dom(u)], 1);
        }
        m
    })
}

const MAX_DRAWS: usize = 200;

/// A reproducible category with two nonzero diagrams over `F_p[x]/(x^m)`
/// whose double complex is nonzero and within the size budget.
pub fn random_instance(seed: u64, bounds: &Bounds) -> Result<(Arc<FinCat>, DiagramFunctor, DiagramFunctor)> {
    let mut rng = rng(seed);
    let alg = CoeffAlgebra::new(bounds.p, bounds.m)?;
    for _ in 0..MAX_DRAWS {
        let base = Arc::new(random_category(&mut rng, bounds));
        let f = random_diagram(&mut rng, &base, alg, bounds.max_rank)?;
        let g = random_diagram(&mut rng, &base, alg, bounds.max_rank)?;
        if f.total_dim() == 0 || g.total_dim() == 0 {
            continue;
        }
        // Terms larger than the budget make the resolution itself the bottleneck.
        let Some(resolution) = resolve_functor_within(&f, bounds.degree + 1, bounds.max_total_dim)? else {
            continue;
        };
        let size = total_dimension(&f, &g, &resolution, bounds.degree + 1)?;
        if size > 0 && size <= bounds.max_total_dim {
            return Ok((base, f, g));
        }
    }
    let base = Arc::new(terminal());
    let k = DiagramFunctor::constant(base.clone(), RModule::trivial(alg, 1));
    Ok((base, k.clone(), k))
}
