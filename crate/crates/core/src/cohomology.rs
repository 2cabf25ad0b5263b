//! Cochain complexes of a finite category: `C*(ℂ, F)` computing `lim^n F`,
//! the Baues–Wirsching complex `K*(ℂ, D)` of a natural system, Hochschild–Mitchell
//! cohomology, and the isomorphism `K*(ℂ, M) ≅ C*(c/ℂ, G∘Q_c)`.

use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::diagrams::{pullback_bimodule, Functor, NaturalSystem};
use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Homology, Matrix, Ring};
use crate::fincat::{check_size, FinCat, Nerve, NerveChain};

/// `C^0 → C^1 → ... → C^{N+1}` with `d^n` for `n ≤ N`.
#[derive(Clone, Debug)]
pub struct CochainComplex<M> {
    ring: Ring,
    dims: Vec<usize>,
    differentials: Vec<M>,
    chains: Vec<Vec<NerveChain>>,
}

impl<M: ExactMatrix> CochainComplex<M> {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Degrees with an outgoing differential: `0..=N`.
    pub fn truncation(&self) -> usize {
        self.differentials.len() - 1
    }

    /// Highest degree with a stored space: `N + 1`.
    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differential(&self, n: usize) -> &M {
        &self.differentials[n]
    }

    pub fn differentials(&self) -> &[M] {
        &self.differentials
    }

    /// Nerve chains indexing the blocks of degree `n`.
    pub fn chains(&self, n: usize) -> &[NerveChain] {
        &self.chains[n]
    }

    /// `d^{n+1} ∘ d^n = 0` for every stored pair.
    pub fn squares_to_zero(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[1].product(&w[0]).is_zero_matrix())
    }

    /// `H^n` for `n ≤ N`.
    pub fn cohomology(&self) -> Result<CohomologyResult> {
        let n_max = self.truncation();
        let mut groups = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let d_in = if n == 0 {
                M::zeros_like(self.ring, self.dims[0], 0)
            } else {
                self.differentials[n - 1].clone()
            };
            groups.push(M::homology(&d_in, &self.differentials[n])?);
        }
        Ok(CohomologyResult {
            ring: self.ring,
            truncation: n_max,
            groups,
        })
    }

    pub fn export(&self) -> Vec<Matrix> {
        self.differentials.iter().map(ExactMatrix::to_matrix).collect()
    }
}

/// One summand of `(dφ)(σ)`: `sign · action(φ(face))`, `None` meaning identity.
struct Term<'a, M> {
    face: NerveChain,
    sign: i64,
    action: Option<&'a M>,
}

fn assemble<'a, M: ExactMatrix>(
    ring: Ring,
    nerve: &Nerve,
    fiber: impl Fn(&NerveChain) -> usize,
    terms: impl Fn(&NerveChain) -> Vec<Term<'a, M>>,
) -> Result<CochainComplex<M>> {
    let top = nerve.max_degree();
    let offsets: Vec<Vec<usize>> = (0..=top)
        .map(|n| {
            let mut acc = 0;
            let mut v: Vec<usize> = nerve
                .chains(n)
                .iter()
                .map(|c| {
                    let o = acc;
                    acc += fiber(c);
                    o
                })
                .collect();
            v.push(acc);
            v
        })
        .collect();
    let dims: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();
    let mut differentials = Vec::with_capacity(top);
    for n in 0..top {
        let mut d = M::zeros_like(ring, dims[n + 1], dims[n]);
        for (row_chain, sigma) in nerve.chains(n + 1).iter().enumerate() {
            let row = offsets[n + 1][row_chain];
            for term in terms(sigma) {
                let Some(col_chain) = nerve.position(&term.face) else {
                    // Normalized complexes drop degenerate faces.
                    continue;
                };
                let col = offsets[n][col_chain];
                match term.action {
                    None => d.add_identity_at(row, col, fiber(sigma), term.sign),
                    Some(a) => d.add_block_at(row, col, a, term.sign),
                }
            }
        }
        differentials.push(d);
    }
    let complex = CochainComplex {
        ring,
        dims,
        differentials,
        chains: (0..=top).map(|n| nerve.chains(n).to_vec()).collect(),
    };
    if !complex.squares_to_zero() {
        return Err(Error::Internal("constructed complex does not square to zero".into()));
    }
    Ok(complex)
}

fn sign(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

fn limit_terms<'a, M: ExactMatrix>(cat: &FinCat, functor: &'a Functor<M>, sigma: &NerveChain) -> Vec<Term<'a, M>> {
    let len = sigma.degree();
    let mut out: Vec<Term<'a, M>> = (0..len)
        .map(|i| Term {
            face: sigma.face(cat, i),
            sign: sign(i),
            action: None,
        })
        .collect();
    out.push(Term {
        face: sigma.face(cat, len),
        sign: sign(len),
        action: Some(functor.map(*sigma.arrows.last().unwrap())),
    });
    out
}

fn limit_complex_on<M: ExactMatrix>(functor: &Functor<M>, nerve: &Nerve) -> Result<CochainComplex<M>> {
    let cat = functor.category().clone();
    assemble(
        functor.ring(),
        nerve,
        |c| functor.dim(c.end(&cat)),
        |sigma| limit_terms(&cat, functor, sigma),
    )
}

/// `C^n(ℂ, F) = Π_{c_0 → ... → c_n} F(c_n)` for `n ≤ N + 1`.
pub fn limit_complex<M: ExactMatrix>(functor: &Functor<M>, truncation: usize) -> Result<CochainComplex<M>> {
    check_size("limit complex", functor.category())?;
    limit_complex_on(functor, &Nerve::new(functor.category(), truncation + 1))
}

/// The same complex on chains without identities.
pub fn normalized_limit_complex<M: ExactMatrix>(functor: &Functor<M>, truncation: usize) -> Result<CochainComplex<M>> {
    check_size("normalized limit complex", functor.category())?;
    limit_complex_on(functor, &Nerve::normalized(functor.category(), truncation + 1))
}

/// `lim F` as the compatible families in `Π_c F(c)`.
pub fn equalizer_limit<M: ExactMatrix>(functor: &Functor<M>) -> Result<Homology> {
    let cat = functor.category();
    let ring = functor.ring();
    let mut col_offsets = Vec::with_capacity(cat.num_objects());
    let mut cols = 0;
    for c in 0..cat.num_objects() {
        col_offsets.push(cols);
        cols += functor.dim(c);
    }
    let arrows: Vec<usize> = (0..cat.num_morphisms()).filter(|&f| !cat.is_identity(f)).collect();
    let rows: usize = arrows.iter().map(|&f| functor.dim(cat.cod(f))).sum();
    let mut e = M::zeros_like(ring, rows, cols);
    let mut r = 0;
    for &f in &arrows {
        let (a, b) = (cat.dom(f), cat.cod(f));
        e.add_identity_at(r, col_offsets[b], functor.dim(b), 1);
        e.add_block_at(r, col_offsets[a], functor.map(f), -1);
        r += functor.dim(b);
    }
    M::homology(&M::zeros_like(ring, cols, 0), &e)
}

/// `lim^n F` for `n ≤ N`, with `H^0` checked against [`equalizer_limit`].
pub fn limit_cohomology<M: ExactMatrix>(functor: &Functor<M>, truncation: usize) -> Result<CohomologyResult> {
    let result = limit_complex(functor, truncation)?.cohomology()?;
    let direct = equalizer_limit(functor)?;
    if result.groups[0] != direct {
        return Err(Error::Internal(format!(
            "H^0 = {} disagrees with the equalizer limit {}",
            result.groups[0], direct
        )));
    }
    Ok(result)
}

fn bw_terms<'a, M: ExactMatrix>(
    cat: &FinCat,
    system: &'a NaturalSystem<M>,
    sigma: &NerveChain,
) -> Vec<Term<'a, M>> {
    let len = sigma.degree();
    let first = sigma.arrows[0];
    let last = *sigma.arrows.last().unwrap();
    let head = sigma.face(cat, 0);
    let tail = sigma.face(cat, len);
    let head_comp = head.composite(cat);
    let tail_comp = tail.composite(cat);
    let mut out = Vec::with_capacity(len + 1);
    out.push(Term {
        action: Some(system.action(head_comp, first, cat.identity(cat.cod(head_comp)))),
        face: head,
        sign: 1,
    });
    for i in 1..len {
        out.push(Term {
            face: sigma.face(cat, i),
            sign: sign(i),
            action: None,
        });
    }
    out.push(Term {
        action: Some(system.action(tail_comp, cat.identity(cat.dom(tail_comp)), last)),
        face: tail,
        sign: sign(len),
    });
    out
}

fn bw_complex_on<M: ExactMatrix>(system: &NaturalSystem<M>, nerve: &Nerve) -> Result<CochainComplex<M>> {
    let cat = system.base().clone();
    assemble(
        system.ring(),
        nerve,
        |c| system.dim(c.composite(&cat)),
        |sigma| bw_terms(&cat, system, sigma),
    )
}

/// `K^n(ℂ, D) = Π_{c_0 → ... → c_n} D(α_n ∘ ... ∘ α_1)` for `n ≤ N + 1`.
pub fn bw_complex<M: ExactMatrix>(system: &NaturalSystem<M>, truncation: usize) -> Result<CochainComplex<M>> {
    check_size("Baues-Wirsching complex", system.base())?;
    bw_complex_on(system, &Nerve::new(system.base(), truncation + 1))
}

/// `K^0..K^top` with `d^0..d^{top-1}`; `top = 0` gives a single space.
pub(crate) fn bw_complex_to_degree<M: ExactMatrix>(system: &NaturalSystem<M>, top: usize) -> Result<CochainComplex<M>> {
    bw_complex_on(system, &Nerve::new(system.base(), top))
}

pub fn normalized_bw_complex<M: ExactMatrix>(system: &NaturalSystem<M>, truncation: usize) -> Result<CochainComplex<M>> {
    check_size("normalized Baues-Wirsching complex", system.base())?;
    bw_complex_on(system, &Nerve::normalized(system.base(), truncation + 1))
}

pub fn bw_cohomology<M: ExactMatrix>(system: &NaturalSystem<M>, truncation: usize) -> Result<CohomologyResult> {
    bw_complex(system, truncation)?.cohomology()
}

/// `H^n(ℂ, B)` for a bimodule `B` on `ℂ^op × ℂ` (objects and morphisms indexed
/// as in [`FinCat::product`]).
pub fn hochschild_mitchell_cohomology<M: ExactMatrix>(
    base: Arc<FinCat>,
    bimodule: &Functor<M>,
    truncation: usize,
) -> Result<CohomologyResult> {
    let factorization = Arc::new(base.factorization()?);
    let system = pullback_bimodule(base, factorization, bimodule)?;
    bw_cohomology(&system, truncation)
}

/// The comparison `f ↦ f̃` between `K*(ℂ, M)`, `M(α) = Hom(free ℂ(c, dom α), G(cod α))`,
/// and `C*(c/ℂ, G∘Q_c)`.
#[derive(Clone, Debug)]
pub struct CommaComparison<M> {
    pub bw: CochainComplex<M>,
    pub comma: CochainComplex<M>,
    /// `T^n: K^n → C^n`, `n ≤ N + 1`.
    pub transforms: Vec<M>,
    /// `T^{n+1} d = d T^n` for `n ≤ N`.
    pub commutes: bool,
    /// Every `T^n` is a permutation matrix: `T Tᵗ = Tᵗ T = 1`.
    pub invertible: bool,
}

/// The natural system `M` of the comparison, as `⊕_{u: c → dom α} G(cod α)`.
pub fn comma_system<M: ExactMatrix>(
    cat: &Arc<FinCat>,
    c: usize,
    functor: &Functor<M>,
) -> Result<NaturalSystem<M>> {
    let factorization = Arc::new(cat.factorization()?);
    let ring = functor.ring();
    let under = |a: usize| cat.hom(c, a).collect::<Vec<_>>();
    NaturalSystem::from_fn(
        cat.clone(),
        factorization,
        ring,
        |h| cat.hom(c, cat.dom(h)).count() * functor.dim(cat.cod(h)),
        |h, a, b| {
            // (a, b): h → b∘h∘a with a: dom β → dom h.
            let src = under(cat.dom(h));
            let tgt = under(cat.dom(a));
            let (ds, dt) = (functor.dim(cat.cod(h)), functor.dim(cat.cod(b)));
            let mut m = M::zeros_like(ring, tgt.len() * dt, src.len() * ds);
            for (j, &u) in tgt.iter().enumerate() {
                let au = cat.comp(a, u);
                let i = src.iter().position(|&v| v == au).expect("a∘u lies under c");
                m.add_block_at(j * dt, i * ds, functor.map(b), 1);
            }
            m
        },
    )
}

pub fn comma_comparison<M: ExactMatrix>(
    cat: &Arc<FinCat>,
    c: usize,
    functor: &Functor<M>,
    truncation: usize,
) -> Result<CommaComparison<M>> {
    let ring = functor.ring();
    let system = comma_system(cat, c, functor)?;
    let bw = bw_complex(&system, truncation)?;
    let comma = cat.comma_under(c)?;
    let k = Arc::new(comma.category.clone());
    let pulled = functor.pullback(k.clone(), &comma.projection.object_map, &comma.projection.morphism_map)?;
    let comma_complex = limit_complex(&pulled, truncation)?;
    let comma_nerve = Nerve::new(&k, truncation + 1);

    let mut transforms = Vec::with_capacity(truncation + 2);
    for n in 0..=truncation + 1 {
        let mut t = M::zeros_like(ring, comma_complex.dim(n), bw.dim(n));
        let comma_offsets = block_offsets(comma_complex.chains(n), |ch| pulled.dim(ch.end(&k)));
        let mut col = 0;
        for sigma in bw.chains(n) {
            let width = functor.dim(sigma.end(cat));
            for u in cat.hom(c, sigma.start) {
                let mut object = comma.under.iter().position(|&v| v == u).expect("u is an object of c/ℂ");
                let start = object;
                let mut arrows = Vec::with_capacity(n);
                for &alpha in &sigma.arrows {
                    let m = comma.morphism_over(object, alpha).expect("α lifts to c/ℂ");
                    object = k.cod(m);
                    arrows.push(m);
                }
                let tau = NerveChain { start, arrows };
                let pos = comma_nerve.position(&tau).expect("lifted chain is in the nerve");
                t.add_identity_at(comma_offsets[pos], col, width, 1);
                col += width;
            }
        }
        transforms.push(t);
    }
    let commutes = (0..=truncation).all(|n| {
        transforms[n + 1].product(bw.differential(n)) == comma_complex.differential(n).product(&transforms[n])
    });
    let invertible = transforms.iter().all(|t| {
        t.nrows() == t.ncols()
            && t.product(&t.transposed()) == M::identity_like(ring, t.nrows())
            && t.transposed().product(t) == M::identity_like(ring, t.ncols())
    });
    Ok(CommaComparison {
        bw,
        comma: comma_complex,
        transforms,
        commutes,
        invertible,
    })
}

pub(crate) fn block_offsets(chains: &[NerveChain], width: impl Fn(&NerveChain) -> usize) -> Vec<usize> {
    let mut acc = 0;
    chains
        .iter()
        .map(|c| {
            let o = acc;
            acc += width(c);
            o
        })
        .collect()
}

/// `H^n` for `n ≤ N`; higher degrees are not computed, never zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyResult {
    pub ring: Ring,
    pub truncation: usize,
    pub groups: Vec<Homology>,
}

impl CohomologyResult {
    pub fn degree(&self, n: usize) -> Option<&Homology> {
        self.groups.get(n)
    }

    /// Dimensions (`F_p`) or free ranks (`Z`).
    pub fn ranks(&self) -> Vec<usize> {
        self.groups.iter().map(Homology::rank).collect()
    }

    pub fn vanishes_above_zero(&self) -> bool {
        self.groups.iter().skip(1).all(Homology::is_zero)
    }
}

impl Serialize for CohomologyResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            degree: usize,
            #[serde(flatten)]
            value: &'a Homology,
        }
        let degrees: Vec<Entry> = self
            .groups
            .iter()
            .enumerate()
            .map(|(degree, value)| Entry { degree, value })
            .collect();
        let mut st = s.serialize_struct("CohomologyResult", 4)?;
        st.serialize_field("ring", &self.ring.to_string())?;
        st.serialize_field("truncation", &self.truncation)?;
        st.serialize_field("degrees", &degrees)?;
        st.serialize_field("above_truncation", "not computed")?;
        st.end()
    }
}
