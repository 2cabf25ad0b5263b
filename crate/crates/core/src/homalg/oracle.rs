//! Ext in the diagram category computed as module Ext over the category
//! algebra `A = R ⊗ kℂ`, using the normalized bar resolution relative to the
//! semisimple subalgebra `E` spanned by the identities.

use std::collections::HashMap;

use crate::diagrams::DiagramFunctor;
use crate::error::{Error, Result};
use crate::exactalg::FpMatrix;
use crate::fincat::FinCat;

/// `⊕_c F(c)` with the actions of every morphism and of `x`.
#[derive(Clone, Debug)]
pub struct CategoryAlgebraModule {
    pub p: u32,
    pub m: usize,
    /// `F(c)` occupies `offsets[c]..offsets[c + 1]`.
    pub offsets: Vec<usize>,
    pub morphism_actions: Vec<FpMatrix>,
    pub x_action: FpMatrix,
}

impl CategoryAlgebraModule {
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn object_dim(&self, c: usize) -> usize {
        self.offsets[c + 1] - self.offsets[c]
    }

    /// Action of the basis element `x^k f`, restricted to `F(dom f) → F(cod f)`.
    pub fn basis_action(&self, cat: &FinCat, k: usize, f: usize) -> FpMatrix {
        let full = self.morphism_actions[f].mul(&self.x_action.pow(k as u32));
        let (a, b) = (cat.dom(f), cat.cod(f));
        full.submatrix(self.offsets[b]..self.offsets[b + 1], self.offsets[a]..self.offsets[a + 1])
    }

    /// Violations of `g·(f·v) = (g∘f)·v`, `e_c` idempotence, `fg = 0` off the
    /// composable pairs, `x^m = 0` and `x f = f x`.
    pub fn check(&self, cat: &FinCat) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.dim();
        let zero = FpMatrix::zeros(self.p, n, n);
        for g in 0..cat.num_morphisms() {
            let ag = &self.morphism_actions[g];
            if ag.mul(&self.x_action) != self.x_action.mul(ag) {
                out.push(format!("x does not commute with {}", cat.morphism(g).name));
            }
            for f in 0..cat.num_morphisms() {
                let expected = match cat.compose(g, f) {
                    Some(gf) => &self.morphism_actions[gf],
                    None => &zero,
                };
                if &ag.mul(&self.morphism_actions[f]) != expected {
                    out.push(format!("product {}·{}", cat.morphism(g).name, cat.morphism(f).name));
                }
            }
        }
        if !self.x_action.pow(self.m as u32).is_zero() {
            out.push("x^m acts nontrivially".into());
        }
        out
    }
}

pub fn functor_to_algebra_module(functor: &DiagramFunctor) -> CategoryAlgebraModule {
    let cat = functor.base();
    let alg = functor.alg();
    let mut offsets = vec![0];
    for c in 0..cat.num_objects() {
        offsets.push(offsets[c] + functor.module(c).dim());
    }
    let n = offsets[cat.num_objects()];
    let morphism_actions = (0..cat.num_morphisms())
        .map(|f| {
            let mut a = FpMatrix::zeros(alg.p, n, n);
            a.add_block(offsets[cat.cod(f)], offsets[cat.dom(f)], functor.map(f), 1);
            a
        })
        .collect();
    let mut x_action = FpMatrix::zeros(alg.p, n, n);
    for c in 0..cat.num_objects() {
        x_action.add_block(offsets[c], offsets[c], functor.module(c).x(), 1);
    }
    CategoryAlgebraModule {
        p: alg.p,
        m: alg.m,
        offsets,
        morphism_actions,
        x_action,
    }
}

/// Chains `(λ_1, ..., λ_n)` of basis elements of `A/E` with `λ_i λ_{i+1}`
/// composable, stored as indices into the basis list.
struct BarChains {
    chains: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

/// `dim Ext^n_A(M, N)` for `n ≤ max_degree`.
pub fn oracle_ext(f: &DiagramFunctor, g: &DiagramFunctor, max_degree: usize) -> Result<Vec<usize>> {
    if f.base().as_ref() != g.base().as_ref() || f.alg() != g.alg() {
        return Err(Error::IncompatibleBase);
    }
    let cat = f.base().as_ref();
    let (p, m) = (f.alg().p, f.alg().m);
    let source = functor_to_algebra_module(f);
    let target = functor_to_algebra_module(g);

    // Basis of A/E: x^k f except the identities with k = 0.
    let basis: Vec<(usize, usize)> = (0..cat.num_morphisms())
        .flat_map(|mor| (0..m).map(move |k| (k, mor)))
        .filter(|&(k, mor)| !(k == 0 && cat.is_identity(mor)))
        .collect();
    let basis_index: HashMap<(usize, usize), usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let on_source: Vec<FpMatrix> = basis.iter().map(|&(k, mor)| source.basis_action(cat, k, mor)).collect();
    let on_target: Vec<FpMatrix> = basis.iter().map(|&(k, mor)| target.basis_action(cat, k, mor)).collect();

    // Product in A projected to A/E; `None` when it vanishes there.
    let product = |a: usize, b: usize| -> Option<usize> {
        let ((ka, fa), (kb, fb)) = (basis[a], basis[b]);
        if ka + kb >= m {
            return None;
        }
        let comp = cat.compose(fa, fb)?;
        basis_index.get(&(ka + kb, comp)).copied()
    };

    let mut levels: Vec<BarChains> = Vec::with_capacity(max_degree + 2);
    let objects: Vec<Vec<usize>> = (0..cat.num_objects()).map(|c| vec![c]).collect();
    levels.push(BarChains {
        index: objects.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect(),
        chains: objects,
    });
    let basis_ref = &basis;
    for n in 1..=max_degree + 1 {
        let chains: Vec<Vec<usize>> = if n == 1 {
            (0..basis.len()).map(|b| vec![b]).collect()
        } else {
            levels[n - 1]
                .chains
                .iter()
                .flat_map(|chain| {
                    let last = basis_ref[*chain.last().unwrap()].1;
                    (0..basis_ref.len())
                        .filter(move |&b| cat.cod(basis_ref[b].1) == cat.dom(last))
                        .map(move |b| {
                            let mut c = chain.clone();
                            c.push(b);
                            c
                        })
                })
                .collect()
        };
        let index = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        levels.push(BarChains { chains, index });
    }

    // A cochain on a chain is a map M(dom λ_n) → N(cod λ_1), vectorized row-major.
    let ends = |n: usize, chain: &[usize]| -> (usize, usize) {
        if n == 0 {
            (chain[0], chain[0])
        } else {
            (cat.dom(basis[chain[n - 1]].1), cat.cod(basis[chain[0]].1))
        }
    };
    let block = |n: usize, chain: &[usize]| {
        let (s, t) = ends(n, chain);
        source.object_dim(s) * target.object_dim(t)
    };
    let offsets: Vec<Vec<usize>> = levels
        .iter()
        .enumerate()
        .map(|(n, level)| {
            let mut acc = 0;
            let mut v: Vec<usize> = level
                .chains
                .iter()
                .map(|c| {
                    let o = acc;
                    acc += block(n, c);
                    o
                })
                .collect();
            v.push(acc);
            v
        })
        .collect();
    let dims: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();

    let mut ranks = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let mut delta = FpMatrix::zeros(p, dims[n + 1], dims[n]);
        for (ri, sigma) in levels[n + 1].chains.iter().enumerate() {
            let row = offsets[n + 1][ri];
            let (s, t) = ends(n + 1, sigma);
            let (ds, dt) = (source.object_dim(s), target.object_dim(t));

            // λ_1 · φ(λ_2, ..., λ_{n+1})
            let face: Vec<usize> = if n == 0 { vec![cat.dom(basis[sigma[0]].1)] } else { sigma[1..].to_vec() };
            let col = offsets[n][levels[n].index[&face]];
            let a = &on_target[sigma[0]];
            let mid = a.cols();
            for i in 0..dt {
                for k in 0..mid {
                    let v = a.get(i, k);
                    if v != 0 {
                        for j in 0..ds {
                            delta.add_at(row + i * ds + j, col + k * ds + j, v);
                        }
                    }
                }
            }

            // Σ (-1)^i φ(..., λ_i λ_{i+1}, ...)
            for i in 1..=n {
                let Some(prod) = product(sigma[i - 1], sigma[i]) else {
                    continue;
                };
                let mut face = sigma[..i - 1].to_vec();
                face.push(prod);
                face.extend_from_slice(&sigma[i + 1..]);
                let col = offsets[n][levels[n].index[&face]];
                let sign = if i % 2 == 0 { 1 } else { p - 1 };
                for e in 0..ds * dt {
                    delta.add_at(row + e, col + e, sign);
                }
            }

            // (-1)^{n+1} φ(λ_1, ..., λ_n) ∘ λ_{n+1}
            let face: Vec<usize> = if n == 0 { vec![cat.cod(basis[sigma[0]].1)] } else { sigma[..n].to_vec() };
            let col = offsets[n][levels[n].index[&face]];
            let b = &on_source[sigma[n]];
            let mid = b.rows();
            let sign = if (n + 1) % 2 == 0 { 1 } else { p - 1 };
            for i in 0..dt {
                for k in 0..mid {
                    for j in 0..ds {
                        let v = b.get(k, j);
                        if v != 0 {
                            delta.add_at(row + i * ds + j, col + i * mid + k, (v as u64 * sign as u64 % p as u64) as u32);
                        }
                    }
                }
            }
        }
        ranks.push(delta.rank());
    }
    Ok((0..=max_degree)
        .map(|n| dims[n] - ranks[n] - if n == 0 { 0 } else { ranks[n - 1] })
        .collect())
}
