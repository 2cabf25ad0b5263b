use serde::Serialize;

use super::double::build_double_complex;
use super::pages::{spectral_sequence, Filtration, SpectralSequence};
use super::resolution::resolve_functor;
use crate::cohomology::bw_cohomology;
use crate::diagrams::{ext_natural_systems, DiagramFile, DiagramFunctor};
use crate::error::{Error, Result};
use crate::exactalg::Matrix;
use crate::fincat::CategoryFile;
use crate::homalg::{oracle_ext, ResolutionCache};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    /// Column-filtration `E_2` equals `H^p(ℂ, Ext^q(F(dom), G(cod)))`.
    pub e2_match: Verdict,
    /// Row-filtration `E_2^{s,t} = 0` for `t > 0`.
    pub row_degeneration: Verdict,
    /// `Σ_{p+q=n} dim E_∞^{p,q} = dim Ext^n` (bar-resolution oracle) `= dim H^n(Tot)`.
    pub abutment: Verdict,
    pub overall: Verdict,
}

/// Inputs and total differentials of a failed verification.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub category: CategoryFile,
    pub f: DiagramFile,
    pub g: DiagramFile,
    pub total_differentials: Vec<Matrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub degree: usize,
    /// Column-filtration `E_2^{p,q}`, `p + q ≤ N`, indexed `[p][q]`.
    #[serde(rename = "E2")]
    pub e2: Vec<Vec<usize>>,
    /// `dim H^p(ℂ, Ext^q)` through the Ext natural systems.
    #[serde(rename = "E2_from_ext_systems")]
    pub e2_expected: Vec<Vec<usize>>,
    /// Column-filtration `E_∞^{p,q}`.
    #[serde(rename = "Einf")]
    pub e_infinity: Vec<Vec<usize>>,
    /// Row-filtration `E_2^{s,t}`, `s` the resolution degree.
    #[serde(rename = "E2_row")]
    pub row_e2: Vec<Vec<usize>>,
    pub ext_oracle: Vec<usize>,
    pub tot: Vec<usize>,
    pub verdicts: Verdicts,
    /// Cells `(p, q)` with `p + q ≤ N` whose value a differential from
    /// outside the truncation window could change.
    pub truncation_affected: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip)]
    pub column: SpectralSequence,
    #[serde(skip)]
    pub row: SpectralSequence,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdicts.overall.passed()
    }
}

/// Checks the spectral sequence `lim^p_{ℂ′} Ext^q(F(dom α), G(cod α)) ⟹ Ext^{p+q}(F, G)`
/// in total degrees `≤ degree`.
pub fn verify_theorem(f: &DiagramFunctor, g: &DiagramFunctor, degree: usize) -> Result<VerificationReport> {
    if degree == 0 {
        return Err(Error::InvalidDiagram("verification degree must be at least 1".into()));
    }
    f.compatible_with(g)?;
    let bound = degree + 1;
    let resolution = resolve_functor(f, bound)?;
    let dc = build_double_complex(f, g, &resolution, bound)?;
    let column = spectral_sequence(&dc, Filtration::Column)?;
    let row = spectral_sequence(&dc, Filtration::Row)?;

    let cache = ResolutionCache::new();
    let ext = ext_natural_systems(f, g, degree, &cache)?;
    let mut e2_expected = vec![Vec::new(); degree + 1];
    for (q, system) in ext.systems.iter().enumerate() {
        let h = bw_cohomology(system, degree - q)?;
        for (p, group) in h.groups.iter().enumerate().take(degree - q + 1) {
            e2_expected[p].push(group.rank());
        }
    }
    let ext_oracle = oracle_ext(f, g, degree)?;

    let e2 = column.page(2).dims.clone();
    let row_e2 = row.page(2).dims.clone();
    let complete = dc.complete_degree();
    let truncation_affected: Vec<(usize, usize)> = (0..=degree)
        .flat_map(|p| (0..=degree - p).map(move |q| (p, q)))
        .filter(|&(p, q)| p + q + 1 > complete)
        .collect();
    let affected = |p: usize, q: usize| truncation_affected.contains(&(p, q));

    let e2_match = (0..=degree).all(|p| (0..=degree - p).all(|q| affected(p, q) || e2[p][q] == e2_expected[p][q]));
    let row_degeneration =
        (0..=degree).all(|s| (1..=degree - s).all(|t| affected(s, t) || row_e2[s][t] == 0));
    let abutment = (0..=degree).all(|n| {
        if (0..=n).any(|p| affected(p, n - p)) {
            return true;
        }
        let col_sum: usize = (0..=n).map(|p| column.e_infinity[p][n - p]).sum();
        let row_sum: usize = (0..=n).map(|s| row.e_infinity[s][n - s]).sum();
        col_sum == ext_oracle[n] && row_sum == ext_oracle[n] && column.total[n] == ext_oracle[n]
    });
    let ok = e2_match && row_degeneration && abutment && column.consistent && row.consistent;
    let verdicts = Verdicts {
        e2_match: Verdict::of(e2_match),
        row_degeneration: Verdict::of(row_degeneration),
        abutment: Verdict::of(abutment),
        overall: Verdict::of(ok),
    };
    let counterexample = (!ok).then(|| Counterexample {
        category: CategoryFile::from_category(f.base()),
        f: DiagramFile::from_functor(f),
        g: DiagramFile::from_functor(g),
        total_differentials: (0..complete).map(|n| Matrix::Fp(dc.total_differential(n))).collect(),
    });
    Ok(VerificationReport {
        degree,
        tot: column.total.clone(),
        e2,
        e2_expected,
        e_infinity: column.e_infinity.clone(),
        row_e2,
        ext_oracle,
        verdicts,
        truncation_affected,
        counterexample,
        column,
        row,
    })
}
