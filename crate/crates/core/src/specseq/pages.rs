use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use super::double::DoubleComplex;
use crate::error::Result;
use crate::exactalg::{FpMatrix, Subquotient, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Filtration {
    /// By the horizontal degree `p`; `E_2^{p,q} = H^p(ℂ, Ext^q)`.
    Column,
    /// By the resolution degree `q`; pages are indexed `(q, p)`.
    Row,
}

/// A cochain complex `Tot^0 → ... → Tot^L` over `F_p` with a decreasing
/// filtration given by a degree on each coordinate.
#[derive(Debug)]
pub struct FilteredComplex {
    p: u32,
    /// `filtration[n][i]`: filtration degree of coordinate `i` of `Tot^n`.
    filtration: Vec<Vec<usize>>,
    /// `differentials[n]: Tot^n → Tot^{n+1}`, `n < L`.
    differentials: Vec<FpMatrix>,
    cycles: Mutex<HashMap<(usize, usize, usize), Subspace>>,
}

impl Clone for FilteredComplex {
    fn clone(&self) -> Self {
        FilteredComplex::new(self.p, self.filtration.clone(), self.differentials.clone())
    }
}

impl FilteredComplex {
    pub fn new(p: u32, filtration: Vec<Vec<usize>>, differentials: Vec<FpMatrix>) -> Self {
        assert_eq!(filtration.len(), differentials.len() + 1, "one filtration per degree");
        FilteredComplex {
            p,
            filtration,
            differentials,
            cycles: Mutex::default(),
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn filtration(&self, n: usize) -> &[usize] {
        &self.filtration[n]
    }

    pub fn differential(&self, n: usize) -> &FpMatrix {
        &self.differentials[n]
    }

    pub fn from_double_complex(dc: &DoubleComplex, filtration: Filtration) -> Self {
        let top = dc.complete_degree();
        let filtration = (0..=top)
            .map(|n| {
                dc.total_dims(n)
                    .into_iter()
                    .flat_map(|(p, q, d)| {
                        let s = match filtration {
                            Filtration::Column => p,
                            Filtration::Row => q,
                        };
                        std::iter::repeat(s).take(d)
                    })
                    .collect()
            })
            .collect();
        let differentials = (0..top).map(|n| dc.total_differential(n)).collect();
        FilteredComplex::new(dc.prime(), filtration, differentials)
    }

    /// `L`: the top degree with a stored space.
    pub fn top(&self) -> usize {
        self.filtration.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.filtration[n].len()
    }

    /// `{x ∈ F^low Tot^n : D x ∈ F^high Tot^{n+1}}`, for `n < L`.
    fn z(&self, n: usize, low: usize, high: usize) -> Subspace {
        // Normalize the bounds so that equal subspaces share a cache entry.
        let low = if self.filtration[n].iter().all(|&s| s >= low) { 0 } else { low };
        let high = if self.filtration[n + 1].iter().all(|&s| s < high) { usize::MAX } else { high };
        let key = (n, low, high);
        if let Some(z) = self.cycles.lock().expect("cache lock").get(&key) {
            return z.clone();
        }
        let z = self.compute_z(n, low, high);
        self.cycles.lock().expect("cache lock").insert(key, z.clone());
        z
    }

    fn compute_z(&self, n: usize, low: usize, high: usize) -> Subspace {
        let cols: Vec<usize> = (0..self.dim(n)).filter(|&i| self.filtration[n][i] >= low).collect();
        let rows: Vec<usize> = (0..self.dim(n + 1))
            .filter(|&i| self.filtration[n + 1][i] < high)
            .collect();
        let kernel = self.differentials[n].select(&rows, &cols).kernel();
        let vectors: Vec<Vec<u32>> = (0..kernel.cols())
            .map(|k| {
                let mut v = vec![0; self.dim(n)];
                for (j, &c) in cols.iter().enumerate() {
                    v[c] = kernel.get(j, k);
                }
                v
            })
            .collect();
        Subspace::span(self.p, self.dim(n), vectors.iter().map(Vec::as_slice))
    }

    fn boundaries_of(&self, n: usize, source: &Subspace) -> Subspace {
        let d = &self.differentials[n];
        let images: Vec<Vec<u32>> = source.basis().iter().map(|v| d.mul_vec(v)).collect();
        Subspace::span(self.p, self.dim(n + 1), images.iter().map(Vec::as_slice))
    }

    /// `E_r^{s, n-s} = Z_r^s / (Z_{r-1}^{s+1} + D Z_{r-1}^{s-r+1})` for `r ≥ 1`, `n < L`.
    pub fn term(&self, r: usize, s: usize, n: usize) -> Result<Subquotient> {
        let cycles = self.z(n, s, s + r);
        let mut boundaries = self.z(n, s + 1, s + r);
        if n > 0 {
            let low = (s + 1).saturating_sub(r);
            boundaries = boundaries.sum(&self.boundaries_of(n - 1, &self.z(n - 1, low, s)));
        }
        Subquotient::new(cycles, boundaries)
    }

    /// `d_r: E_r^{s,n-s} → E_r^{s+r,n+1-s-r}` on the chosen sections.
    pub fn page_differential(&self, source: &Subquotient, target: &Subquotient, n: usize) -> FpMatrix {
        let columns: Vec<Vec<u32>> = source
            .section()
            .iter()
            .map(|x| {
                target
                    .class_coords(&self.differentials[n].mul_vec(x))
                    .expect("D x is a cycle of the target page")
            })
            .collect();
        FpMatrix::from_columns(self.p, target.dim(), &columns)
    }

    /// `dim H^n` for `n < L`.
    pub fn cohomology_dim(&self, n: usize) -> usize {
        let rank_out = self.differentials[n].rank();
        let rank_in = if n == 0 { 0 } else { self.differentials[n - 1].rank() };
        self.dim(n) - rank_out - rank_in
    }

    /// `dim F^s H^n` for `s = 0..=n + 1`.
    pub fn filtration_dims(&self, n: usize) -> Vec<usize> {
        let image = if n == 0 {
            Subspace::zero(self.p, self.dim(0))
        } else {
            Subspace::column_span(&self.differentials[n - 1])
        };
        (0..=n + 1)
            .map(|s| self.z(n, s, usize::MAX).sum(&image).dim() - image.dim())
            .collect()
    }
}

/// Page `E_r` on the window of total degrees `≤ max_total`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralSequencePage {
    pub r: usize,
    /// `dims[s][t]` for `s + t ≤ max_total`.
    pub dims: Vec<Vec<usize>>,
    /// `d_r` out of `(s, t)`, when its target lies in the window.
    #[serde(skip)]
    pub differentials: Vec<((usize, usize), FpMatrix)>,
    /// `stable[s][t]`: `r > max(s, t + 1)`, so `E_r^{s,t} = E_∞^{s,t}`.
    pub stable: Vec<Vec<bool>>,
}

impl SpectralSequencePage {
    pub fn dim(&self, s: usize, t: usize) -> usize {
        self.dims.get(s).and_then(|row| row.get(t)).copied().unwrap_or(0)
    }

    pub fn differential(&self, s: usize, t: usize) -> Option<&FpMatrix> {
        self.differentials.iter().find(|(k, _)| *k == (s, t)).map(|(_, m)| m)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSequence {
    pub filtration: Filtration,
    pub max_total: usize,
    /// `E_1, E_2, ...` up to the first page that is stable everywhere.
    pub pages: Vec<SpectralSequencePage>,
    /// `E_∞^{s,t} = E_{max(s,t+1)+1}^{s,t}`.
    pub e_infinity: Vec<Vec<usize>>,
    /// `dim H^n(Tot)`.
    pub total: Vec<usize>,
    /// `dim F^s H^n(Tot)`.
    pub filtration_dims: Vec<Vec<usize>>,
    /// `d_r ∘ d_r = 0` and `E_{r+1} = H(E_r, d_r)` wherever both maps are known.
    pub consistent: bool,
}

impl SpectralSequence {
    pub fn page(&self, r: usize) -> &SpectralSequencePage {
        &self.pages[r - 1]
    }
}

/// The spectral sequence of `dc` for total degrees `n < min(P, Q)`.
pub fn spectral_sequence(dc: &DoubleComplex, filtration: Filtration) -> Result<SpectralSequence> {
    let complex = FilteredComplex::from_double_complex(dc, filtration);
    filtered_spectral_sequence(&complex, filtration)
}

pub fn filtered_spectral_sequence(complex: &FilteredComplex, filtration: Filtration) -> Result<SpectralSequence> {
    let max_total = complex.top() - 1;
    let last_page = max_total + 2;
    let mut pages: Vec<SpectralSequencePage> = Vec::with_capacity(last_page);
    let mut consistent = true;
    for r in 1..=last_page {
        let mut dims = Vec::with_capacity(max_total + 1);
        let mut stable = Vec::with_capacity(max_total + 1);
        let mut terms: Vec<Vec<Subquotient>> = Vec::with_capacity(max_total + 1);
        for s in 0..=max_total {
            let row: Vec<Subquotient> = (0..=max_total - s)
                .map(|t| complex.term(r, s, s + t))
                .collect::<Result<_>>()?;
            dims.push(row.iter().map(Subquotient::dim).collect());
            stable.push((0..=max_total - s).map(|t| r > s.max(t + 1)).collect());
            terms.push(row);
        }
        let mut differentials = Vec::new();
        for s in 0..=max_total {
            for t in 0..=max_total - s {
                // Target (s + r, t + 1 - r), total degree s + t + 1.
                if t + 1 < r || s + t + 1 > max_total {
                    continue;
                }
                let target = &terms[s + r][t + 1 - r];
                let d = complex.page_differential(&terms[s][t], target, s + t);
                differentials.push(((s, t), d));
            }
        }
        let page = SpectralSequencePage {
            r,
            dims,
            differentials,
            stable,
        };
        if let Some(prev) = pages.last() {
            consistent &= next_page_matches(prev, &page, max_total);
        }
        pages.push(page);
    }
    let e_infinity: Vec<Vec<usize>> = (0..=max_total)
        .map(|s| (0..=max_total - s).map(|t| pages[s.max(t + 1)].dim(s, t)).collect())
        .collect();
    let total: Vec<usize> = (0..=max_total).map(|n| complex.cohomology_dim(n)).collect();
    let filtration_dims: Vec<Vec<usize>> = (0..=max_total).map(|n| complex.filtration_dims(n)).collect();
    Ok(SpectralSequence {
        filtration,
        max_total,
        pages,
        e_infinity,
        total,
        filtration_dims,
        consistent,
    })
}

/// `d_r d_r = 0`, and `dim E_{r+1} = dim E_r − rank(out) − rank(in)` where both are known.
fn next_page_matches(prev: &SpectralSequencePage, next: &SpectralSequencePage, max_total: usize) -> bool {
    let r = prev.r;
    for s in 0..=max_total {
        for t in 0..=max_total - s {
            let outgoing = prev.differential(s, t);
            let incoming_source = (s >= r && t + r >= 1).then(|| (s - r, t + r - 1));
            let incoming = incoming_source.and_then(|(a, b)| prev.differential(a, b));
            if let (Some(o), Some(i)) = (outgoing, incoming) {
                if !o.mul(i).is_zero() {
                    return false;
                }
            }
            let out_known = outgoing.is_some() || t + 1 < r;
            let in_known = incoming.is_some() || incoming_source.is_none();
            if out_known && in_known {
                let rank_out = outgoing.map_or(0, FpMatrix::rank);
                let rank_in = incoming.map_or(0, FpMatrix::rank);
                if next.dim(s, t) + rank_out + rank_in != prev.dim(s, t) {
                    return false;
                }
            }
        }
    }
    true
}
