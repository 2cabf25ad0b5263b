use std::sync::Arc;

use super::resolution::FunctorResolution;
use crate::cohomology::{block_offsets, bw_complex_to_degree, CochainComplex};
use crate::diagrams::{DiagramFunctor, HomSpace, HomSystem};
use crate::error::{Error, Result};
use crate::exactalg::FpMatrix;
use crate::fincat::{check_size, Nerve};

/// `K^{p,q}` = Baues–Wirsching `p`-cochains with coefficients in
/// `α ↦ Hom_R(F_q(dom α), G(cod α))`.
///
/// Only cells with `p ≤ P`, `q ≤ Q` and `p + q ≤ min(P, Q)` are built; every
/// total degree up to `min(P, Q)` is then complete.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    p: u32,
    p_max: usize,
    q_max: usize,
    /// `rows[q]` is the horizontal complex `K^{*,q}`.
    rows: Vec<CochainComplex<FpMatrix>>,
    /// `vertical[q][p]: K^{p,q} → K^{p,q+1}`, without the sign `(−1)^p`.
    vertical: Vec<Vec<FpMatrix>>,
}

impl DoubleComplex {
    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    /// Highest total degree whose summands are all present.
    pub fn complete_degree(&self) -> usize {
        self.p_max.min(self.q_max)
    }

    pub fn contains(&self, p: usize, q: usize) -> bool {
        q <= self.q_max && p <= self.p_max && p + q <= self.complete_degree()
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        if self.contains(p, q) {
            self.rows[q].dim(p)
        } else {
            0
        }
    }

    /// `d_h: K^{p,q} → K^{p+1,q}`.
    pub fn horizontal(&self, p: usize, q: usize) -> &FpMatrix {
        self.rows[q].differential(p)
    }

    /// `d_v: K^{p,q} → K^{p,q+1}`, unsigned.
    pub fn vertical(&self, p: usize, q: usize) -> &FpMatrix {
        &self.vertical[q][p]
    }

    /// Rows and columns are complexes and the squares commute, so
    /// `d_h + (−1)^p d_v` squares to zero.
    pub fn is_well_formed(&self) -> bool {
        let top = self.complete_degree();
        for q in 0..=top {
            if !self.rows[q].squares_to_zero() {
                return false;
            }
        }
        for q in 0..=top {
            for p in 0..=top - q {
                if self.contains(p + 1, q + 1)
                    && self.horizontal(p, q + 1).mul(self.vertical(p, q))
                        != self.vertical(p + 1, q).mul(self.horizontal(p, q))
                {
                    return false;
                }
                if self.contains(p, q + 2) && !self.vertical(p, q + 1).mul(self.vertical(p, q)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Summand dimensions of `Tot^n`, ordered by increasing `p`.
    pub fn total_dims(&self, n: usize) -> Vec<(usize, usize, usize)> {
        (0..=n)
            .filter(|&p| self.contains(p, n - p))
            .map(|p| (p, n - p, self.dim(p, n - p)))
            .collect()
    }

    /// `D = d_h + (−1)^p d_v: Tot^n → Tot^{n+1}` for `n < complete_degree()`.
    pub fn total_differential(&self, n: usize) -> FpMatrix {
        let src = self.total_dims(n);
        let tgt = self.total_dims(n + 1);
        let offset = |cells: &[(usize, usize, usize)], p: usize| {
            cells.iter().take_while(|c| c.0 < p).map(|c| c.2).sum::<usize>()
        };
        let rows: usize = tgt.iter().map(|c| c.2).sum();
        let cols: usize = src.iter().map(|c| c.2).sum();
        let mut d = FpMatrix::zeros(self.p, rows, cols);
        for &(p, q, _) in &src {
            let col = offset(&src, p);
            if self.contains(p + 1, q) {
                d.add_block(offset(&tgt, p + 1), col, self.horizontal(p, q), 1);
            }
            if self.contains(p, q + 1) {
                let sign = if p % 2 == 0 { 1 } else { -1 };
                d.add_block(offset(&tgt, p), col, self.vertical(p, q), sign);
            }
        }
        d
    }
}

/// The double complex of `Hom(F_*, G)` over `ℂ` with `P = p_max` and `Q` the
/// resolution length.
pub fn build_double_complex(
    f: &DiagramFunctor,
    g: &DiagramFunctor,
    resolution: &FunctorResolution,
    p_max: usize,
) -> Result<DoubleComplex> {
    f.compatible_with(g)?;
    if resolution.target() != f {
        return Err(Error::InvalidDiagram("resolution does not resolve the first diagram".into()));
    }
    if p_max == 0 {
        return Err(Error::InvalidDiagram("horizontal bound must be at least 1".into()));
    }
    let base = f.base().clone();
    check_size("double complex", &base)?;
    let q_max = resolution.length();
    let top = p_max.min(q_max);
    let factorization = Arc::new(base.factorization()?);
    let systems = (0..=top)
        .map(|q| HomSystem::new(factorization.clone(), resolution.term(q), g))
        .collect::<Result<Vec<_>>>()?;
    let rows = (0..=top)
        .map(|q| bw_complex_to_degree(&systems[q].system, top - q))
        .collect::<Result<Vec<_>>>()?;
    let p = f.alg().p;
    let mut vertical = Vec::with_capacity(top);
    for q in 0..top {
        // Componentwise precomposition with d_q, per object of ℂ′.
        let pre = systems[q].precompose(&systems[q + 1], resolution.differential(q));
        let mut per_p = Vec::with_capacity(top - q);
        for deg in 0..top - q {
            let chains = rows[q].chains(deg);
            let src = block_offsets(chains, |c| systems[q].system.dim(c.composite(&base)));
            let tgt = block_offsets(chains, |c| systems[q + 1].system.dim(c.composite(&base)));
            let mut v = FpMatrix::zeros(p, rows[q + 1].dim(deg), rows[q].dim(deg));
            for (i, chain) in chains.iter().enumerate() {
                v.add_block(tgt[i], src[i], &pre[chain.composite(&base)], 1);
            }
            per_p.push(v);
        }
        vertical.push(per_p);
    }
    let dc = DoubleComplex {
        p,
        p_max,
        q_max,
        rows,
        vertical,
    };
    if !dc.is_well_formed() {
        return Err(Error::Internal("double complex squares do not commute".into()));
    }
    Ok(dc)
}

/// `dim Tot^n` of the double complex `build_double_complex` would produce,
/// computed from the nerve and the Hom dimensions alone.
pub fn total_dimension(f: &DiagramFunctor, g: &DiagramFunctor, resolution: &FunctorResolution, n: usize) -> Result<usize> {
    f.compatible_with(g)?;
    let base = f.base();
    check_size("double complex", base)?;
    let objects = base.num_objects();
    let nerve = Nerve::new(base, n);
    let mut total = 0;
    for q in 0..=n.min(resolution.length()) {
        let term = resolution.term(q);
        let hom: Vec<usize> = (0..objects * objects)
            .map(|i| HomSpace::new(term.module(i / objects), g.module(i % objects)).dim())
            .collect();
        total += nerve
            .chains(n - q)
            .iter()
            .map(|c| {
                let h = c.composite(base);
                hom[base.dom(h) * objects + base.cod(h)]
            })
            .sum::<usize>();
    }
    Ok(total)
}
