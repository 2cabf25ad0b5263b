use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use catext_core::cli::{random_category, random_diagram, random_instance, random_int_functor, random_poset, rng, Bounds, InstanceRng};
use catext_core::diagrams::{CoeffAlgebra, DiagramFunctor, HomSpace, RModule};
use catext_core::exactalg::FpMatrix;
use catext_core::fincat::examples::terminal;
use catext_core::fincat::FinCat;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn small_bounds() -> Bounds {
    Bounds {
        max_objects: 3,
        max_arrows: 4,
        degree: 2,
        ..Bounds::default()
    }
}

fn algebra(r: &mut InstanceRng) -> CoeffAlgebra {
    let p = [2, 3, 5][r.gen_range(0..3)];
    CoeffAlgebra::new(p, r.gen_range(1..=3)).unwrap()
}

fn random_matrix(r: &mut InstanceRng, p: u32, rows: usize, cols: usize) -> FpMatrix {
    FpMatrix::from_fn(p, rows, cols, |_, _| r.gen_range(0..p as i64))
}

fn random_invertible(r: &mut InstanceRng, p: u32, n: usize) -> (FpMatrix, FpMatrix) {
    loop {
        let s = random_matrix(r, p, n, n);
        if let Some(inv) = s.inverse() {
            return (s, inv);
        }
    }
}

/// A random `R`-linear map `A → B` as a combination of a Hom basis.
fn random_hom(r: &mut InstanceRng, a: &RModule, b: &RModule) -> FpMatrix {
    let space = HomSpace::new(a, b);
    let p = a.prime();
    let mut phi = FpMatrix::zeros(p, b.dim(), a.dim());
    for i in 0..space.dim() {
        phi = phi.add(&space.element(i).scale(r.gen_range(0..p)));
    }
    phi
}

fn module_on_point(r: &mut InstanceRng, alg: CoeffAlgebra) -> RModule {
    let base = Arc::new(terminal());
    random_diagram(r, &base, alg, 2).unwrap().module(0).clone()
}

mod fincat {
    use super::*;

    fn brute_force_chains(cat: &FinCat, n: usize) -> usize {
        if n == 0 {
            return cat.num_objects();
        }
        let m = cat.num_morphisms();
        let mut count = 0;
        let mut tuple = vec![0usize; n];
        loop {
            if tuple.windows(2).all(|w| cat.cod(w[0]) == cat.dom(w[1])) {
                count += 1;
            }
            let mut i = 0;
            while i < n && tuple[i] + 1 == m {
                tuple[i] = 0;
                i += 1;
            }
            if i == n {
                return count;
            }
            tuple[i] += 1;
        }
    }

    proptest! {
        #![proptest_config(config(48))]

        #[test]
        fn generated_categories_validate(seed in any::<u64>()) {
            let mut r = rng(seed);
            let cat = random_category(&mut r, &small_bounds());
            prop_assert!(cat.validate().is_valid());
            prop_assert!(cat.opposite().validate().is_valid());
            let other = random_poset(&mut r, 2, 1, false);
            prop_assert!(FinCat::product(&cat, &other).validate().is_valid());
            prop_assert!(cat.factorization().unwrap().category.validate().is_valid());
            for c in 0..cat.num_objects() {
                prop_assert!(cat.comma_under(c).unwrap().category.validate().is_valid());
            }
        }

        #[test]
        fn nerve_counts_match_enumeration(seed in any::<u64>()) {
            let mut r = rng(seed);
            let cat = random_category(&mut r, &small_bounds());
            for n in 0..=3 {
                prop_assert_eq!(cat.nerve(n).len(), brute_force_chains(&cat, n), "degree {}", n);
            }
        }

        #[test]
        fn comma_categories_have_initial_objects(seed in any::<u64>()) {
            let mut r = rng(seed);
            let cat = random_category(&mut r, &small_bounds());
            for c in 0..cat.num_objects() {
                let comma = cat.comma_under(c).unwrap();
                let k = &comma.category;
                let initial: Vec<usize> = (0..k.num_objects())
                    .filter(|&x| (0..k.num_objects()).all(|y| k.hom(x, y).count() == 1))
                    .collect();
                prop_assert!(initial.contains(&comma.initial));
            }
        }

        #[test]
        fn factorization_identities_are_identity_pairs(seed in any::<u64>()) {
            let mut r = rng(seed);
            let cat = random_category(&mut r, &small_bounds());
            let fact = cat.factorization().unwrap();
            for f in 0..cat.num_morphisms() {
                let id = fact.morphism(f, cat.identity(cat.dom(f)), cat.identity(cat.cod(f)));
                prop_assert_eq!(id, Some(fact.category.identity(f)));
            }
        }
    }
}

mod exactalg {
    use catext_core::exactalg::{homology_at, smith_normal_form, Homology, IntMatrix};
    use num_bigint::BigInt;

    use super::*;

    fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
    }

    fn span_f2(m: &FpMatrix) -> HashSet<Vec<u32>> {
        (0u32..1 << m.cols())
            .map(|bits| m.mul_vec(&(0..m.cols()).map(|j| (bits >> j) & 1).collect::<Vec<_>>()))
            .collect()
    }

    proptest! {
        #![proptest_config(config(64))]

        #[test]
        fn rank_is_transpose_invariant_and_satisfies_rank_nullity(seed in any::<u64>(), rows in 0usize..7, cols in 0usize..7) {
            let mut r = rng(seed);
            let p = [2, 3, 7][r.gen_range(0..3)];
            let m = random_matrix(&mut r, p, rows, cols);
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert_eq!(m.rank() + m.kernel().cols(), cols);
            prop_assert_eq!(m.image().cols(), m.rank());
            prop_assert!(m.mul(&m.kernel()).is_zero());
        }

        #[test]
        fn smith_form_is_invariant_under_unimodular_operations(rows in int_matrix(), seed in any::<u64>()) {
            let a = IntMatrix::from_rows(&rows).unwrap();
            let snf = smith_normal_form(&a);
            prop_assert_eq!(snf.left.mul(&a).mul(&snf.right), snf.diagonal.clone());
            let factors = snf.invariant_factors();
            prop_assert!(factors.windows(2).all(|w| (&w[1] % &w[0]) == BigInt::from(0)));
            let mut r = rng(seed);
            let mut b = a.clone();
            for _ in 0..6 {
                let (m, n) = (b.rows(), b.cols());
                let factor = BigInt::from(r.gen_range(-3i64..=3));
                match r.gen_range(0..4) {
                    0 if m > 1 => b.swap_rows(0, m - 1),
                    1 if n > 1 => b.swap_cols(0, n - 1),
                    2 if m > 1 => { let (i, j) = (r.gen_range(0..m), r.gen_range(0..m)); if i != j { b.add_row_multiple(i, j, &factor) } }
                    3 if n > 1 => { let (i, j) = (r.gen_range(0..n), r.gen_range(0..n)); if i != j { b.add_col_multiple(i, j, &factor) } }
                    _ => {}
                }
            }
            prop_assert_eq!(smith_normal_form(&b).invariant_factors(), factors);
        }

        #[test]
        fn homology_matches_enumeration_over_f2(seed in any::<u64>(), a in 1usize..=6, b in 0usize..=5, c in 0usize..=5) {
            let mut r = rng(seed);
            let d_out = random_matrix(&mut r, 2, c, a);
            let kernel = d_out.kernel();
            let d_in = kernel.mul(&random_matrix(&mut r, 2, kernel.cols(), b));
            let cycles = (0u32..1 << a)
                .map(|bits| (0..a).map(|j| (bits >> j) & 1).collect::<Vec<u32>>())
                .filter(|v| d_out.mul_vec(v).iter().all(|&x| x == 0))
                .count();
            let boundaries = span_f2(&d_in).len();
            let expected = (cycles / boundaries).trailing_zeros() as usize;
            prop_assert_eq!(homology_at(&d_in, &d_out).unwrap(), Homology::Vector { dim: expected });
        }
    }
}

mod diagrams {
    use catext_core::diagrams::{
        adjoint_restrict, adjoint_transpose, counit, hom_natural_system, is_natural, lambda, restrict, ObFamily,
    };

    use super::*;

    proptest! {
        #![proptest_config(config(40))]

        #[test]
        fn adjunction_round_trips(seed in any::<u64>()) {
            let mut r = rng(seed);
            let base = Arc::new(random_category(&mut r, &small_bounds()));
            let alg = algebra(&mut r);
            let family: ObFamily = restrict(&random_diagram(&mut r, &base, alg, 1).unwrap());
            let f = random_diagram(&mut r, &base, alg, 1).unwrap();
            let phi: Vec<FpMatrix> = (0..base.num_objects())
                .map(|c| random_hom(&mut r, &family.modules[c], f.module(c)))
                .collect();
            let eta = adjoint_transpose(&family, &f, &phi);
            let free = lambda(&family).unwrap();
            prop_assert!(is_natural(&free, &f, &eta));
            prop_assert_eq!(adjoint_restrict(&family, &eta), phi.clone());
            let again = adjoint_transpose(&family, &f, &adjoint_restrict(&family, &eta));
            prop_assert_eq!(again, eta);
        }

        #[test]
        fn counit_is_objectwise_surjective(seed in any::<u64>()) {
            let mut r = rng(seed);
            let base = Arc::new(random_category(&mut r, &small_bounds()));
            let alg = algebra(&mut r);
            let f = random_diagram(&mut r, &base, alg, 2).unwrap();
            let eps = counit(&f);
            let free = lambda(&restrict(&f)).unwrap();
            prop_assert!(is_natural(&free, &f, &eps));
            for c in 0..base.num_objects() {
                prop_assert_eq!(eps[c].rank(), f.module(c).dim());
            }
        }

        #[test]
        fn hom_systems_are_functors_on_the_factorization_category(seed in any::<u64>()) {
            let mut r = rng(seed);
            let base = Arc::new(random_category(&mut r, &small_bounds()));
            let alg = algebra(&mut r);
            let f = random_diagram(&mut r, &base, alg, 1).unwrap();
            let g = random_diagram(&mut r, &base, alg, 1).unwrap();
            let report = hom_natural_system(&f, &g).unwrap().check();
            prop_assert!(report.is_valid(), "{:?}", report);
        }
    }
}

mod cohomology {
    use catext_core::cohomology::{
        bw_cohomology, bw_complex, equalizer_limit, limit_cohomology, limit_complex, normalized_bw_complex,
        normalized_limit_complex,
    };
    use catext_core::diagrams::{codomain_system, hom_natural_system};

    use super::*;

    proptest! {
        #![proptest_config(config(32))]

        #[test]
        fn normalized_complexes_have_the_same_cohomology(seed in any::<u64>()) {
            let mut r = rng(seed);
            let base = Arc::new(random_category(&mut r, &small_bounds()));
            let alg = algebra(&mut r);
            let f = random_diagram(&mut r, &base, alg, 1).unwrap();
            let g = random_diagram(&mut r, &base, alg, 1).unwrap();
            let n = 3;
            let plain = limit_complex(&f.underlying(), n).unwrap().cohomology().unwrap();
            let normalized = normalized_limit_complex(&f.underlying(), n).unwrap().cohomology().unwrap();
            prop_assert_eq!(plain, normalized);
            let hom = hom_natural_system(&f, &g).unwrap();
            let plain = bw_complex(&hom, n).unwrap().cohomology().unwrap();
            let normalized = normalized_bw_complex(&hom, n).unwrap().cohomology().unwrap();
            prop_assert_eq!(plain, normalized);
            let int = random_int_functor(&mut r, &base).unwrap();
            let plain = limit_complex(&int, n).unwrap().cohomology().unwrap();
            let normalized = normalized_limit_complex(&int, n).unwrap().cohomology().unwrap();
            prop_assert_eq!(plain, normalized);
        }

        #[test]
        fn degree_zero_is_the_equalizer_limit(seed in any::<u64>()) {
            let mut r = rng(seed);
            let base = Arc::new(random_category(&mut r, &small_bounds()));
            let alg = algebra(&mut r);
            let f = random_diagram(&mut r, &base, alg, 2).unwrap().underlying();
            prop_assert_eq!(limit_cohomology(&f, 1).unwrap().groups[0].clone(), equalizer_limit(&f).unwrap());
            let int = random_int_functor(&mut r, &base).unwrap();
            prop_assert_eq!(limit_cohomology(&int, 1).unwrap().groups[0].clone(), equalizer_limit(&int).unwrap());
        }

        #[test]
        fn codomain_systems_match_limits(seed in any::<u64>()) {
            let mut r = rng(seed);
            let base = Arc::new(random_poset(&mut r, 3, 2, false));
            let int = random_int_functor(&mut r, &base).unwrap();
            let fact = Arc::new(base.factorization().unwrap());
            let system = codomain_system(base.clone(), fact, &int).unwrap();
            prop_assert_eq!(bw_cohomology(&system, 2).unwrap(), limit_cohomology(&int, 2).unwrap());
        }
    }
}

mod homalg {
    use catext_core::homalg::{ext_objects, oracle_ext, spliced_resolution};

    use super::*;

    proptest! {
        #![proptest_config(config(40))]

        #[test]
        fn spliced_resolutions_are_exact(seed in any::<u64>()) {
            let mut r = rng(seed);
            let alg = algebra(&mut r);
            let a = module_on_point(&mut r, alg);
            let res = spliced_resolution(&a, 4);
            prop_assert!(res.is_exact());
            for q in 1..4 {
                prop_assert!(res.differential(q).mul(res.differential(q + 1)).is_zero());
            }
        }

        #[test]
        fn ext_ignores_the_basis_of_the_source(seed in any::<u64>()) {
            let mut r = rng(seed);
            let alg = algebra(&mut r);
            let a = module_on_point(&mut r, alg);
            let b = module_on_point(&mut r, alg);
            let (s, s_inv) = random_invertible(&mut r, alg.p, a.dim());
            let moved = a.change_basis(&s, &s_inv);
            prop_assert_eq!(ext_objects(&a, &b, 3).dims(), ext_objects(&moved, &b, 3).dims());
        }

        #[test]
        fn ext_zero_is_hom_and_the_oracle_agrees_on_a_point(seed in any::<u64>()) {
            let mut r = rng(seed);
            let alg = algebra(&mut r);
            let a = module_on_point(&mut r, alg);
            let b = module_on_point(&mut r, alg);
            let dims = ext_objects(&a, &b, 3).dims();
            prop_assert_eq!(dims[0], HomSpace::new(&a, &b).dim());
            let point = Arc::new(terminal());
            let oracle = oracle_ext(
                &DiagramFunctor::constant(point.clone(), a),
                &DiagramFunctor::constant(point, b),
                3,
            ).unwrap();
            prop_assert_eq!(oracle, dims);
        }
    }
}

mod specseq {
    use catext_core::specseq::{build_double_complex, resolve_functor, spectral_sequence, verify_theorem, Filtration};

    use super::*;

    fn permuted(base: &FinCat, r: &mut InstanceRng) -> Vec<usize> {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..base.num_morphisms()).collect();
        perm.shuffle(r);
        perm
    }

    proptest! {
        #![proptest_config(config(16))]

        #[test]
        fn resolutions_are_exact_and_double_complexes_commute(seed in any::<u64>()) {
            let (_, f, g) = random_instance(seed, &small_bounds()).unwrap();
            let res = resolve_functor(&f, 3).unwrap();
            prop_assert!(res.is_exact());
            let dc = build_double_complex(&f, &g, &res, 3).unwrap();
            prop_assert!(dc.is_well_formed());
        }

        #[test]
        fn row_sequence_degenerates_and_both_abut_to_the_total(seed in any::<u64>()) {
            let (_, f, g) = random_instance(seed, &small_bounds()).unwrap();
            let res = resolve_functor(&f, 3).unwrap();
            let dc = build_double_complex(&f, &g, &res, 3).unwrap();
            for filtration in [Filtration::Column, Filtration::Row] {
                let ss = spectral_sequence(&dc, filtration).unwrap();
                prop_assert!(ss.consistent);
                for n in 0..=ss.max_total {
                    let diagonal: usize = (0..=n).map(|s| ss.e_infinity[s][n - s]).sum();
                    prop_assert_eq!(diagonal, ss.total[n]);
                }
                if filtration == Filtration::Row {
                    let e2 = ss.page(2);
                    for s in 0..=ss.max_total {
                        for t in 1..=ss.max_total - s {
                            prop_assert_eq!(e2.dim(s, t), 0);
                        }
                    }
                }
            }
        }

        #[test]
        fn verification_passes_on_random_instances(seed in any::<u64>()) {
            let (_, f, g) = random_instance(seed, &small_bounds()).unwrap();
            let report = verify_theorem(&f, &g, 2).unwrap();
            prop_assert!(report.passed(), "{:?}", report.verdicts);
        }

        #[test]
        fn pages_ignore_the_morphism_order(seed in any::<u64>()) {
            let (base, f, g) = random_instance(seed, &small_bounds()).unwrap();
            let mut r = rng(seed ^ 0x5eed);
            let perm = permuted(&base, &mut r);
            let moved = Arc::new(base.permute_morphisms(&perm).unwrap());
            let (f2, g2) = (f.transport(moved.clone(), &perm).unwrap(), g.transport(moved, &perm).unwrap());
            let tables = |f: &DiagramFunctor, g: &DiagramFunctor| {
                let res = resolve_functor(f, 3).unwrap();
                let dc = build_double_complex(f, g, &res, 3).unwrap();
                [Filtration::Column, Filtration::Row].map(|filtration| {
                    let ss = spectral_sequence(&dc, filtration).unwrap();
                    (ss.page(2).dims.clone(), ss.e_infinity, ss.total)
                })
            };
            prop_assert_eq!(tables(&f, &g), tables(&f2, &g2));
        }
    }
}

mod cli {
    use catext_core::cli::{run, Command, ExitStatus, JobSpec};

    use super::*;

    proptest! {
        #![proptest_config(config(16))]

        #[test]
        fn random_instances_are_reproducible(seed in any::<u64>()) {
            let (base, f, g) = random_instance(seed, &small_bounds()).unwrap();
            let (base2, f2, g2) = random_instance(seed, &small_bounds()).unwrap();
            prop_assert!(base == base2 && f == f2 && g == g2);
        }

        #[test]
        fn random_suite_reports_are_deterministic(seed in 0u64..1000) {
            let mut spec = JobSpec::new(Command::RandomSuite);
            spec.seed = seed;
            spec.degree = 2;
            let first = run(&spec);
            prop_assert_eq!(first.status, ExitStatus::Success);
            prop_assert_eq!(first.report, run(&spec).report);
        }
    }
}
