//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

use catext_core::cli::{
    random_arrow_diagram, random_category, random_diagram, random_instance, random_int_functor, random_monoid,
    random_poset, rng, run, Bounds, Command, ExitStatus, InstanceRng, JobSpec,
};
use catext_core::cohomology::{
    bw_cohomology, bw_complex, comma_comparison, equalizer_limit, limit_cohomology, limit_complex,
    normalized_bw_complex, normalized_limit_complex, CochainComplex,
};
use catext_core::diagrams::{
    codomain_system, hom_natural_system, lambda, CoeffAlgebra, DiagramFile, DiagramFunctor, NaturalSystem, ObFamily,
    RModule,
};
use catext_core::exactalg::{ExactMatrix, FpMatrix, Homology};
use catext_core::fincat::examples::{arrow, terminal};
use catext_core::fincat::{CategoryFile, FinCat};
use catext_core::homalg::oracle_ext;
use catext_core::specseq::{
    build_double_complex, resolve_functor, spectral_sequence, verify_theorem, Filtration, VerificationReport,
};
use catext_core::Error;

type Check = std::result::Result<String, String>;

fn fail(e: Error) -> String {
    e.to_string()
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn squares_to_zero<M: ExactMatrix>(c: &CochainComplex<M>, what: &str) -> std::result::Result<(), String> {
    if c.squares_to_zero() {
        Ok(())
    } else {
        Err(format!("d∘d ≠ 0 in {what}"))
    }
}

// 1. Every constructed complex squares to zero.
fn differential_soundness() -> Check {
    let start = Instant::now();
    let n = 4;
    let bounds = Bounds {
        max_objects: 4,
        max_arrows: 10,
        degree: n,
        ..Bounds::default()
    };
    let mut complexes = 0;
    for seed in 0..50 {
        let (base, f, g) = random_instance(seed, &bounds).map_err(fail)?;
        if base.num_morphisms() - base.num_objects() > 10 || base.num_objects() > 4 {
            return Err(format!("seed {seed}: instance exceeds the bounds"));
        }
        let ctx = |what: &str| format!("{what} (seed {seed})");
        squares_to_zero(&limit_complex(&f.underlying(), n).map_err(fail)?, &ctx("limit complex"))?;
        squares_to_zero(&normalized_limit_complex(&f.underlying(), n).map_err(fail)?, &ctx("normalized limit complex"))?;
        let hom = hom_natural_system(&f, &g).map_err(fail)?;
        squares_to_zero(&bw_complex(&hom, n).map_err(fail)?, &ctx("Baues–Wirsching complex"))?;
        squares_to_zero(&normalized_bw_complex(&hom, n).map_err(fail)?, &ctx("normalized BW complex"))?;
        let mut r = rng(seed);
        let int = random_int_functor(&mut r, &base).map_err(fail)?;
        squares_to_zero(&limit_complex(&int, n).map_err(fail)?, &ctx("integer limit complex"))?;
        let factorization = Arc::new(base.factorization().map_err(fail)?);
        let cod = codomain_system(base.clone(), factorization, &int).map_err(fail)?;
        squares_to_zero(&bw_complex(&cod, n).map_err(fail)?, &ctx("integer BW complex"))?;
        let c = r.gen_range(0..base.num_objects());
        let comparison = comma_comparison(&base, c, &g.underlying(), n).map_err(fail)?;
        squares_to_zero(&comparison.bw, &ctx("comparison BW complex"))?;
        squares_to_zero(&comparison.comma, &ctx("comma limit complex"))?;
        let resolution = resolve_functor(&f, n + 1).map_err(fail)?;
        let dc = build_double_complex(&f, &g, &resolution, n + 1).map_err(fail)?;
        if !dc.is_well_formed() {
            return Err(ctx("double complex"));
        }
        for k in 0..dc.complete_degree() - 1 {
            if !dc.total_differential(k + 1).mul(&dc.total_differential(k)).is_zero() {
                return Err(ctx(&format!("total complex in degree {k}")));
            }
        }
        complexes += 9 + dc.complete_degree();
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        return Err(format!("runtime {:.1}s exceeds 30s", elapsed.as_secs_f64()));
    }
    Ok(format!("50 instances, {complexes} complexes, {:.1}s", elapsed.as_secs_f64()))
}

// 2. Posets with an initial object have no higher limits.
fn initial_object_vanishing() -> Check {
    let n = 4;
    let mut r = rng(2002);
    for i in 0..20 {
        let size = r.gen_range(1..=3);
        let base = Arc::new(random_poset(&mut r, size, 6, true));
        let int = random_int_functor(&mut r, &base).map_err(fail)?;
        let h = limit_cohomology(&int, n).map_err(fail)?;
        let p = [2, 3, 5][i % 3];
        let alg = CoeffAlgebra::new(p, 1).map_err(fail)?;
        let fp = random_diagram(&mut r, &base, alg, 2).map_err(fail)?.underlying();
        let h_fp = limit_cohomology(&fp, n).map_err(fail)?;
        for (name, result, direct) in [
            ("Z", &h, equalizer_limit(&int).map_err(fail)?),
            ("F_p", &h_fp, equalizer_limit(&fp).map_err(fail)?),
        ] {
            if !result.vanishes_above_zero() {
                return Err(format!("instance {i} over {name}: ranks {:?}", result.ranks()));
            }
            if result.groups[0] != direct {
                return Err(format!("instance {i} over {name}: H⁰ differs from the equalizer"));
            }
        }
    }
    Ok("20 posets with bottom, Z and F_p coefficients".into())
}

/// Categories whose factorization category has a small nerve.
fn small_category(r: &mut InstanceRng) -> FinCat {
    if r.gen_bool(0.3) {
        random_monoid(r, 2)
    } else {
        let n = r.gen_range(2..=3);
        random_poset(r, n, 3, false)
    }
}

fn same_groups(a: &[Homology], b: &[Homology]) -> bool {
    a == b
}

// 3. H^n(ℂ, D) = lim^n over the factorization category.
fn bw_bridge() -> Check {
    let n = 3;
    let mut r = rng(3003);
    let mut kinds = [0usize; 4];
    for i in 0..20 {
        let base = Arc::new(small_category(&mut r));
        let factorization = Arc::new(base.factorization().map_err(fail)?);
        let fcat = factorization.category.clone();
        let kind = i % 4;
        kinds[kind] += 1;
        let (bw, lim) = match kind {
            0 => {
                let alg = CoeffAlgebra::new([2, 3][i % 2], 1 + i % 2).map_err(fail)?;
                let f = random_diagram(&mut r, &base, alg, 1).map_err(fail)?;
                let g = random_diagram(&mut r, &base, alg, 1).map_err(fail)?;
                let system = hom_natural_system(&f, &g).map_err(fail)?;
                (bw_cohomology(&system, n), limit_cohomology(system.functor(), n))
            }
            1 => {
                let alg = CoeffAlgebra::new([2, 5][i % 2], 1).map_err(fail)?;
                let d = random_diagram(&mut r, &fcat, alg, 1).map_err(fail)?.underlying();
                let system = NaturalSystem::new(base.clone(), factorization.clone(), d).map_err(fail)?;
                (bw_cohomology(&system, n), limit_cohomology(system.functor(), n))
            }
            2 => {
                let d = random_int_functor(&mut r, &fcat).map_err(fail)?;
                let system = NaturalSystem::new(base.clone(), factorization.clone(), d).map_err(fail)?;
                (bw_cohomology(&system, n), limit_cohomology(system.functor(), n))
            }
            _ => {
                let f = random_int_functor(&mut r, &base).map_err(fail)?;
                let system = codomain_system(base.clone(), factorization.clone(), &f).map_err(fail)?;
                (bw_cohomology(&system, n), limit_cohomology(system.functor(), n))
            }
        };
        let (bw, lim) = (bw.map_err(fail)?, lim.map_err(fail)?);
        if !same_groups(&bw.groups, &lim.groups) {
            return Err(format!("system {i} (kind {kind}): {:?} vs {:?}", bw.groups, lim.groups));
        }
    }
    Ok(format!("20 systems (Hom, F_p on C', Z on C', F∘cod: {kinds:?}), degrees ≤ 3"))
}

// 4. The ×2/×2 cospan has H¹ = Z/2.
fn cospan_torsion() -> Check {
    // Independent value: coker((x, y) ↦ 2x − 2y) = Z/gcd(2, 2).
    let expected = 2i64.gcd(&-2i64);
    let base = Arc::new(
        CategoryFile::parse(&std::fs::read_to_string(data("cospan.json")).map_err(|e| e.to_string())?)
            .and_then(|f| f.to_category())
            .map_err(fail)?,
    );
    let file = DiagramFile::parse(&std::fs::read_to_string(data("cospan_double_z.json")).map_err(|e| e.to_string())?)
        .map_err(fail)?;
    let f = file.to_functor_int(base.clone()).map_err(fail)?;
    let lim = limit_cohomology(&f, 3).map_err(fail)?;
    let factorization = Arc::new(base.factorization().map_err(fail)?);
    let bw = bw_cohomology(&codomain_system(base, factorization, &f).map_err(fail)?, 3).map_err(fail)?;
    for (name, h) in [("limit complex", &lim), ("BW complex", &bw)] {
        let h1 = &h.groups[1];
        let ok = matches!(h1, Homology::Group { group }
            if group.rank == 0 && group.torsion.iter().map(ToString::to_string).collect::<Vec<_>>() == [expected.to_string()]);
        if !ok {
            return Err(format!("{name}: H¹ = {h1:?}"));
        }
    }
    let mut spec = JobSpec::new(Command::Bw);
    spec.input = Some(data("cospan.json"));
    spec.diagram_f = Some(data("cospan_double_z.json"));
    let outcome = run(&spec);
    let torsion = &outcome.value["cohomology"]["degrees"][1]["group"]["torsion"];
    if outcome.status != ExitStatus::Success || torsion != &serde_json::json!([2]) {
        return Err(format!("CLI report: {}", outcome.report));
    }
    Ok("H¹ = Z/2 through the limit complex, the BW complex and the CLI".into())
}

// 5. Hom(ΛD(dom α), F(cod α)) has no higher cohomology; comma comparison.
fn lambda_vanishing() -> Check {
    let n = 4;
    let mut r = rng(5005);
    let bounds = Bounds {
        max_objects: 3,
        max_arrows: 4,
        ..Bounds::default()
    };
    let mut comparisons = 0;
    for i in 0..20 {
        let p = if i % 2 == 0 { 2 } else { 5 };
        let alg = CoeffAlgebra::new(p, 1 + (i / 2) % 2).map_err(fail)?;
        let base = Arc::new(random_category(&mut r, &bounds));
        let modules = (0..base.num_objects())
            .map(|_| match r.gen_range(0..3) {
                0 => RModule::zero(alg),
                1 => RModule::trivial(alg, 1),
                _ => RModule::free(alg, 1),
            })
            .collect();
        let family = ObFamily::new(base.clone(), alg, modules).map_err(fail)?;
        let free = lambda(&family).map_err(fail)?;
        let f = random_diagram(&mut r, &base, alg, 1).map_err(fail)?;
        let h = bw_cohomology(&hom_natural_system(&free, &f).map_err(fail)?, n).map_err(fail)?;
        if !h.vanishes_above_zero() {
            return Err(format!("instance {i}: ranks {:?}", h.ranks()));
        }
        for c in 0..base.num_objects() {
            let cmp = comma_comparison(&base, c, &f.underlying(), n).map_err(fail)?;
            if !cmp.commutes || !cmp.invertible {
                return Err(format!("instance {i}, object {c}: commutes {} invertible {}", cmp.commutes, cmp.invertible));
            }
            comparisons += 1;
        }
    }
    Ok(format!("20 instances over F_2 and F_5, degrees 1..4, {comparisons} comma comparisons"))
}

fn dual_numbers_bounds(p: u32) -> Bounds {
    Bounds {
        p,
        m: 2,
        ..Bounds::default()
    }
}

// 6. The row filtration degenerates at E_2.
fn row_degeneration() -> Check {
    for seed in 0..20u64 {
        let (_, f, g) = random_instance(600 + seed, &dual_numbers_bounds([2, 3][seed as usize % 2])).map_err(fail)?;
        let resolution = resolve_functor(&f, 4).map_err(fail)?;
        let dc = build_double_complex(&f, &g, &resolution, 4).map_err(fail)?;
        let row = spectral_sequence(&dc, Filtration::Row).map_err(fail)?;
        let e2 = &row.page(2).dims;
        if e2.iter().any(|col| col.iter().skip(1).any(|&d| d != 0)) {
            return Err(format!("seed {}: row E_2 = {e2:?}", 600 + seed));
        }
        if !row.consistent {
            return Err(format!("seed {}: inconsistent pages", 600 + seed));
        }
    }
    Ok("20 instances over k[x]/(x²)".into())
}

/// A simple diagram: `k` at `c`, zero elsewhere (valid on the arrow category).
fn simple(base: &Arc<FinCat>, alg: CoeffAlgebra, c: usize) -> DiagramFunctor {
    let dims: Vec<usize> = (0..base.num_objects()).map(|o| usize::from(o == c)).collect();
    let modules = dims.iter().map(|&d| RModule::trivial(alg, d)).collect();
    let maps = (0..base.num_morphisms())
        .map(|f| {
            let (a, b) = (base.dom(f), base.cod(f));
            if base.is_identity(f) {
                FpMatrix::identity(alg.p, dims[a])
            } else {
                FpMatrix::zeros(alg.p, dims[b], dims[a])
            }
        })
        .collect();
    DiagramFunctor::new(base.clone(), alg, modules, maps).expect("simple diagram")
}

struct Case {
    name: String,
    f: DiagramFunctor,
    g: DiagramFunctor,
    /// Independently derived `E_2^{p,q}`, when known.
    e2: Option<Vec<Vec<usize>>>,
}

fn grid(n: usize, value: impl Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
    (0..=n).map(|p| (0..=n - p).map(|q| value(p, q)).collect()).collect()
}

fn convergence_suite() -> Result<Vec<Case>, String> {
    let alg = CoeffAlgebra::new(2, 2).map_err(fail)?;
    let k = RModule::trivial(alg, 1);
    let mut cases = Vec::new();
    // Over k[x]/(x²) the minimal resolution of k is periodic, R ← R ← ..., with
    // differentials x; Hom_R(R, k) = k and x acts by 0, so dim Ext^q(k, k) = 1.
    let point = Arc::new(terminal());
    let kp = DiagramFunctor::constant(point, k.clone());
    cases.push(Case {
        name: "terminal, k".into(),
        f: kp.clone(),
        g: kp,
        e2: Some(grid(3, |p, _| usize::from(p == 0))),
    });
    // Constant k on a → b: the natural system is constant k on the
    // factorization category id_a → f ← id_b, which is contractible.
    let a = Arc::new(arrow());
    let ka = DiagramFunctor::constant(a.clone(), k);
    cases.push(Case {
        name: "arrow, constant k".into(),
        f: ka.clone(),
        g: ka,
        e2: Some(grid(3, |p, _| usize::from(p == 0))),
    });
    // F = k at a, G = k at b: the system is Ext^q(k, k) at f and zero at the
    // identities, whose lim¹ over the cospan id_a → f ← id_b is k.
    cases.push(Case {
        name: "arrow, simple pair".into(),
        f: simple(&a, alg, 0),
        g: simple(&a, alg, 1),
        e2: Some(grid(3, |p, _| usize::from(p == 1))),
    });
    for seed in 0..10u64 {
        let (_, f, g) = random_instance(700 + seed, &dual_numbers_bounds([2, 3][seed as usize % 2])).map_err(fail)?;
        cases.push(Case {
            name: format!("random seed {}", 700 + seed),
            f,
            g,
            e2: None,
        });
    }
    Ok(cases)
}

fn abutment_holds(report: &VerificationReport) -> bool {
    (0..=report.degree).all(|n| {
        let affected = (0..=n).any(|p| report.truncation_affected.contains(&(p, n - p)));
        let sum: usize = (0..=n).map(|p| report.e_infinity[p][n - p]).sum();
        affected || (sum == report.ext_oracle[n] && report.tot[n] == report.ext_oracle[n])
    })
}

// 7. Σ dim E_∞^{p,q} = dim Ext^n from the bar-resolution oracle.
fn convergence() -> Check {
    let cases = convergence_suite()?;
    for case in &cases {
        let report = verify_theorem(&case.f, &case.g, 3).map_err(fail)?;
        if !report.truncation_affected.is_empty() {
            return Err(format!("{}: unexpected truncation-affected cells", case.name));
        }
        if !abutment_holds(&report) {
            return Err(format!(
                "{}: E_∞ {:?}, oracle {:?}, Tot {:?}",
                case.name, report.e_infinity, report.ext_oracle, report.tot
            ));
        }
        if let Some(expected) = &case.e2 {
            if &report.e2 != expected {
                return Err(format!("{}: E_2 {:?}, expected {expected:?}", case.name, report.e2));
            }
        }
        if !report.passed() {
            return Err(format!("{}: verdicts {:?}", case.name, report.verdicts));
        }
    }
    Ok(format!("{} instances, n ≤ 3", cases.len()))
}

// 8. The arrow category over a field is hereditary.
fn hereditary() -> Check {
    let mut r = rng(8008);
    let base = Arc::new(arrow());
    for i in 0..20 {
        let alg = CoeffAlgebra::field([2, 3, 5][i % 3]).map_err(fail)?;
        let f = random_arrow_diagram(&mut r, &base, alg, 3).map_err(fail)?;
        let g = random_arrow_diagram(&mut r, &base, alg, 3).map_err(fail)?;
        let ext = oracle_ext(&f, &g, 3).map_err(fail)?;
        // Euler form of the quiver a → b.
        let (x, y) = (f.dims(), g.dims());
        let euler = (x[0] * y[0] + x[1] * y[1]) as i64 - (x[0] * y[1]) as i64;
        if ext[2] != 0 || ext[3] != 0 || ext[0] as i64 - ext[1] as i64 != euler {
            return Err(format!("pair {i}: dims {x:?} {y:?}, Ext {ext:?}, Euler form {euler}"));
        }
        let report = verify_theorem(&f, &g, 3).map_err(fail)?;
        if report.tot != ext || !report.passed() {
            return Err(format!("pair {i}: Tot {:?} vs oracle {ext:?}", report.tot));
        }
    }
    Ok("20 pairs, Ext^{≥2} = 0 and Hom − Ext¹ = Euler form".into())
}

type Tables = (Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<usize>, Vec<usize>);

fn tables(report: &VerificationReport) -> Tables {
    (
        report.e2.clone(),
        report.e_infinity.clone(),
        report.row_e2.clone(),
        report.ext_oracle.clone(),
        report.tot.clone(),
    )
}

// 9. Dimension tables do not depend on the morphism order.
fn basis_independence() -> Check {
    let mut r = rng(9009);
    let cases = convergence_suite()?;
    for case in &cases {
        let base = case.f.base();
        let mut perm: Vec<usize> = (0..base.num_morphisms()).collect();
        perm.shuffle(&mut r);
        let permuted = Arc::new(base.permute_morphisms(&perm).map_err(fail)?);
        let f = case.f.transport(permuted.clone(), &perm).map_err(fail)?;
        let g = case.g.transport(permuted, &perm).map_err(fail)?;
        let before = tables(&verify_theorem(&case.f, &case.g, 3).map_err(fail)?);
        let after = tables(&verify_theorem(&f, &g, 3).map_err(fail)?);
        if before != after {
            return Err(format!("{}: tables differ under permutation {perm:?}", case.name));
        }
    }
    Ok(format!("{} instances under random morphism permutations", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("differential soundness", differential_soundness),
        ("initial-object vanishing", initial_object_vanishing),
        ("Baues–Wirsching bridge", bw_bridge),
        ("cospan torsion witness", cospan_torsion),
        ("Λ vanishing and comma comparison", lambda_vanishing),
        ("row-filtration degeneration", row_degeneration),
        ("convergence to Ext", convergence),
        ("hereditary cross-check", hereditary),
        ("basis independence", basis_independence),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {reason} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
