//! Batch front-end shared by the `catext` binary and the tests.

mod random;
mod render;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};

pub use random::{
    random_arrow_diagram, random_category, random_diagram, random_instance, random_int_functor, random_monoid,
    random_poset, rng, Bounds, InstanceRng,
};
pub use render::render_table;

use crate::cohomology::{bw_cohomology, hochschild_mitchell_cohomology, limit_cohomology, CohomologyResult};
use crate::diagrams::{
    check_functor, codomain_system, hom_bimodule, hom_natural_system, Coefficient, DiagramFile, DiagramFunctor, Functor,
};
use crate::error::{Error, Result};
use crate::exactalg::{IntMatrix, Ring};
use crate::fincat::{CategoryFile, FinCat};
use crate::homalg::oracle_ext;
use crate::specseq::{
    build_double_complex, resolve_functor, spectral_sequence, verify_theorem, FilteredComplex, Filtration,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Limits,
    Bw,
    HochschildMitchell,
    Ext,
    Specseq,
    Verify,
    RandomSuite,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Validate,
        Command::Limits,
        Command::Bw,
        Command::HochschildMitchell,
        Command::Ext,
        Command::Specseq,
        Command::Verify,
        Command::RandomSuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Limits => "limits",
            Command::Bw => "bw",
            Command::HochschildMitchell => "hochschild-mitchell",
            Command::Ext => "ext",
            Command::Specseq => "specseq",
            Command::Verify => "verify",
            Command::RandomSuite => "random-suite",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Table,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            _ => Err(format!("unknown format '{s}', expected json or table")),
        }
    }
}

/// Parses `p,m` (or `p` alone, meaning `m = 1`) or `Z`.
pub fn parse_coefficient(s: &str) -> Result<Coefficient> {
    let s = s.trim();
    if s == "Z" {
        return Ok(Coefficient::Integers);
    }
    let bad = || Error::Parse {
        location: "--coeff".into(),
        message: format!("expected 'p,m' or 'Z', found '{s}'"),
    };
    let mut parts = s.split(',').map(str::trim);
    let p = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
    let m = match parts.next() {
        Some(x) => x.parse().map_err(|_| bad())?,
        None => 1,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Coefficient::Algebra(crate::diagrams::CoeffAlgebra::new(p, m)?))
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub diagram_f: Option<PathBuf>,
    pub diagram_g: Option<PathBuf>,
    /// Truncation `N`.
    pub degree: usize,
    /// Checked against the coefficient declared by the diagram files.
    pub coeff: Option<Coefficient>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            input: None,
            diagram_f: None,
            diagram_g: None,
            degree: 3,
            coeff: None,
            seed: 0,
            out: None,
            format: Format::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Mismatch = 1,
    InputError = 2,
}

impl ExitStatus {
    pub fn of_verdict(passed: bool) -> Self {
        if passed {
            ExitStatus::Success
        } else {
            ExitStatus::Mismatch
        }
    }

    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::Internal(_) | Error::CompositionNonzero => ExitStatus::Mismatch,
            _ => ExitStatus::InputError,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: ExitStatus,
    /// The rendered report (JSON or table).
    pub report: String,
    pub value: Value,
}

/// Runs one job; the report is written to `spec.out` when given.
pub fn run(spec: &JobSpec) -> Outcome {
    let (status, value) = match execute(spec) {
        Ok(done) => done,
        Err(e) => (ExitStatus::of_error(&e), error_report(spec.command, &e)),
    };
    let mut report = match spec.format {
        Format::Json => serde_json::to_string_pretty(&value).expect("reports serialize"),
        Format::Table => render_table(&value),
    };
    report.push('\n');
    if let Some(path) = &spec.out {
        if let Err(e) = std::fs::write(path, &report) {
            let e = io_error(path, e);
            return Outcome {
                status: ExitStatus::InputError,
                report: format!("{e}\n"),
                value: error_report(spec.command, &e),
            };
        }
    }
    Outcome { status, report, value }
}

fn error_report(command: Command, e: &Error) -> Value {
    json!({ "command": command.name(), "status": "error", "error": e.to_string() })
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    path.as_deref().ok_or_else(|| Error::Parse {
        location: flag.into(),
        message: "this command requires the flag".into(),
    })
}

fn parse_category(spec: &JobSpec) -> Result<FinCat> {
    let path = required(&spec.input, "--input")?;
    CategoryFile::parse(&read(path)?)
        .and_then(|file| file.to_category())
        .map_err(|e| locate(path, e))
}

fn locate(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    }
}

fn load_category(spec: &JobSpec) -> Result<Arc<FinCat>> {
    let cat = parse_category(spec)?;
    let report = cat.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidCategory(format!("{v} ({} violation(s) in total)", report.violations.len())));
    }
    Ok(Arc::new(cat))
}

fn load_file(spec: &JobSpec, path: &Path) -> Result<DiagramFile> {
    let file = DiagramFile::parse(&read(path)?).map_err(|e| locate(path, e))?;
    if let Some(c) = spec.coeff {
        if c != file.coefficient {
            return Err(Error::InvalidDiagram(format!(
                "--coeff does not match the coefficient declared in {}",
                path.display()
            )));
        }
    }
    Ok(file)
}

/// `F` and `G` (defaulting to `F`) over `F_p[x]/(x^m)`, checked for functoriality.
fn load_pair(spec: &JobSpec, base: &Arc<FinCat>) -> Result<(DiagramFunctor, DiagramFunctor)> {
    let f_path = required(&spec.diagram_f, "--diagram-f")?;
    let g_path = spec.diagram_g.as_deref().unwrap_or(f_path);
    let load = |path: &Path| -> Result<DiagramFunctor> {
        let d = load_file(spec, path)?.to_diagram(base.clone()).map_err(|e| locate(path, e))?;
        checked(&d, path)?;
        Ok(d)
    };
    let (f, g) = (load(f_path)?, load(g_path)?);
    f.compatible_with(&g)?;
    Ok((f, g))
}

fn checked(d: &DiagramFunctor, path: &Path) -> Result<()> {
    match check_functor(d).violations.first() {
        Some(v) => Err(Error::InvalidDiagram(format!("{}: {v}", path.display()))),
        None => Ok(()),
    }
}

/// A single diagram, over `Z` or `F_p`.
enum Single {
    Int(Functor<IntMatrix>),
    Diagram(DiagramFunctor),
}

fn load_single(spec: &JobSpec, base: &Arc<FinCat>) -> Result<Single> {
    let path = required(&spec.diagram_f, "--diagram-f")?;
    let file = load_file(spec, path)?;
    match file.coefficient {
        Coefficient::Integers => {
            let f = file.to_functor_int(base.clone()).map_err(|e| locate(path, e))?;
            match f.check().violations.first() {
                Some(v) => Err(Error::InvalidDiagram(format!("{}: {v}", path.display()))),
                None => Ok(Single::Int(f)),
            }
        }
        Coefficient::Algebra(_) => {
            let d = file.to_diagram(base.clone()).map_err(|e| locate(path, e))?;
            checked(&d, path)?;
            Ok(Single::Diagram(d))
        }
    }
}

fn check_degree(spec: &JobSpec) -> Result<()> {
    if spec.degree == 0 {
        return Err(Error::Parse {
            location: "--degree".into(),
            message: "the truncation degree must be at least 1".into(),
        });
    }
    Ok(())
}

fn cohomology_report(command: Command, spec: &JobSpec, result: &CohomologyResult) -> Value {
    json!({ "command": command.name(), "degree": spec.degree, "cohomology": result })
}

fn execute(spec: &JobSpec) -> Result<(ExitStatus, Value)> {
    if spec.command != Command::Validate {
        check_degree(spec)?;
    }
    let n = spec.degree;
    match spec.command {
        Command::Validate => validate(spec),
        Command::Limits => {
            let base = load_category(spec)?;
            let result = match load_single(spec, &base)? {
                Single::Int(f) => limit_cohomology(&f, n)?,
                Single::Diagram(d) => limit_cohomology(&d.underlying(), n)?,
            };
            Ok((ExitStatus::Success, cohomology_report(spec.command, spec, &result)))
        }
        Command::Bw => {
            let base = load_category(spec)?;
            let result = if spec.diagram_g.is_some() {
                let (f, g) = load_pair(spec, &base)?;
                bw_cohomology(&hom_natural_system(&f, &g)?, n)?
            } else {
                let factorization = Arc::new(base.factorization()?);
                match load_single(spec, &base)? {
                    Single::Int(f) => bw_cohomology(&codomain_system(base.clone(), factorization, &f)?, n)?,
                    Single::Diagram(d) => {
                        bw_cohomology(&codomain_system(base.clone(), factorization, &d.underlying())?, n)?
                    }
                }
            };
            Ok((ExitStatus::Success, cohomology_report(spec.command, spec, &result)))
        }
        Command::HochschildMitchell => {
            let base = load_category(spec)?;
            let result = if spec.diagram_g.is_some() {
                let (f, g) = load_pair(spec, &base)?;
                let (_, bimodule) = hom_bimodule(&f, &g)?;
                hochschild_mitchell_cohomology(base.clone(), &bimodule, n)?
            } else {
                match load_single(spec, &base)? {
                    Single::Int(f) => hochschild_mitchell_cohomology(base.clone(), &int_hom_bimodule(&f)?, n)?,
                    Single::Diagram(d) => {
                        let (_, bimodule) = hom_bimodule(&d, &d)?;
                        hochschild_mitchell_cohomology(base.clone(), &bimodule, n)?
                    }
                }
            };
            Ok((ExitStatus::Success, cohomology_report(spec.command, spec, &result)))
        }
        Command::Ext => {
            let base = load_category(spec)?;
            let (f, g) = load_pair(spec, &base)?;
            let oracle = oracle_ext(&f, &g, n)?;
            let tot = tot_dims(&f, &g, n)?;
            let agree = oracle == tot;
            Ok((
                ExitStatus::of_verdict(agree),
                json!({ "command": "ext", "degree": n, "ext_oracle": oracle, "tot": tot, "agree": agree }),
            ))
        }
        Command::Specseq => {
            let base = load_category(spec)?;
            let (f, g) = load_pair(spec, &base)?;
            let resolution = resolve_functor(&f, n + 1)?;
            let dc = build_double_complex(&f, &g, &resolution, n + 1)?;
            let column = spectral_sequence(&dc, Filtration::Column)?;
            let row = spectral_sequence(&dc, Filtration::Row)?;
            let consistent = column.consistent && row.consistent;
            Ok((
                ExitStatus::of_verdict(consistent),
                json!({ "command": "specseq", "degree": n, "column": column, "row": row }),
            ))
        }
        Command::Verify => {
            let base = load_category(spec)?;
            let (f, g) = load_pair(spec, &base)?;
            let report = verify_theorem(&f, &g, n)?;
            Ok((ExitStatus::of_verdict(report.passed()), serde_json::to_value(&report).expect("reports serialize")))
        }
        Command::RandomSuite => random_suite(spec.seed, n),
    }
}

fn validate(spec: &JobSpec) -> Result<(ExitStatus, Value)> {
    let cat = parse_category(spec)?;
    let report = cat.validate();
    let mut messages: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    let mut diagrams = Vec::new();
    if report.is_valid() {
        let base = Arc::new(cat.clone());
        for path in [&spec.diagram_f, &spec.diagram_g].into_iter().flatten() {
            let file = load_file(spec, path)?;
            let violations: Vec<String> = match file.coefficient {
                Coefficient::Integers => file
                    .to_functor_int(base.clone())
                    .map_err(|e| locate(path, e))?
                    .check()
                    .violations
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
                Coefficient::Algebra(_) => check_functor(&file.to_diagram(base.clone()).map_err(|e| locate(path, e))?)
                    .violations
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
            };
            messages.extend(violations.iter().map(|v| format!("{}: {v}", path.display())));
            diagrams.push(json!({ "path": path.display().to_string(), "violations": violations }));
        }
    }
    let valid = messages.is_empty();
    Ok((
        if valid { ExitStatus::Success } else { ExitStatus::InputError },
        json!({
            "command": "validate",
            "valid": valid,
            "category_violations": report.violations,
            "messages": messages,
            "objects": cat.num_objects(),
            "morphisms": cat.num_morphisms(),
            "diagrams": diagrams,
        }),
    ))
}

/// `dim H^n(Tot)` for `n ≤ degree`.
pub fn tot_dims(f: &DiagramFunctor, g: &DiagramFunctor, degree: usize) -> Result<Vec<usize>> {
    let resolution = resolve_functor(f, degree + 1)?;
    let dc = build_double_complex(f, g, &resolution, degree + 1)?;
    let complex = FilteredComplex::from_double_complex(&dc, Filtration::Column);
    Ok((0..=degree).map(|n| complex.cohomology_dim(n)).collect())
}

/// `(a, b) ↦ Hom_Z(F(a), F(b))` on `ℂ^op × ℂ`, with `Hom` vectorized row-major.
pub fn int_hom_bimodule(functor: &Functor<IntMatrix>) -> Result<Functor<IntMatrix>> {
    let base = functor.category();
    let n = base.num_objects();
    let nm = base.num_morphisms();
    let product = Arc::new(FinCat::product(&base.opposite(), base));
    let dim = |o: usize| functor.dim(o % n) * functor.dim(o / n);
    Functor::from_fn(product, Ring::Integers, dim, |m| {
        // φ ↦ F(v) φ F(u) is F(v) ⊗ F(u)ᵀ on row-major vectors.
        let (u, v) = (m / nm, m % nm);
        let (a, b) = (functor.map(v), functor.map(u));
        let mut out = IntMatrix::zeros(a.rows() * b.cols(), a.cols() * b.rows());
        for i in 0..a.rows() {
            for k in 0..a.cols() {
                for j in 0..b.cols() {
                    for l in 0..b.rows() {
                        out.set(i * b.cols() + j, k * b.rows() + l, a.get(i, k) * b.get(l, j));
                    }
                }
            }
        }
        out
    })
}

/// The random-instance suite: `verify` on consecutive seeds.
const SUITE_SIZE: u64 = 5;

fn random_suite(seed: u64, degree: usize) -> Result<(ExitStatus, Value)> {
    let bounds = Bounds::default();
    let mut instances = Vec::new();
    let mut passed = true;
    for s in seed..seed + SUITE_SIZE {
        let (base, f, g) = random_instance(s, &bounds)?;
        let report = verify_theorem(&f, &g, degree)?;
        passed &= report.passed();
        instances.push(json!({
            "seed": s,
            "category": CategoryFile::from_category(&base),
            "f": DiagramFile::from_functor(&f),
            "g": DiagramFile::from_functor(&g),
            "ext_oracle": report.ext_oracle,
            "verdicts": report.verdicts,
        }));
    }
    Ok((
        ExitStatus::of_verdict(passed),
        json!({ "command": "random-suite", "degree": degree, "seed": seed, "instances": instances }),
    ))
}
