//! Finite categories given by total composition tables, and the constructions
//! built from them: opposite, product, comma categories under an object, the
//! factorization category, and nerve chains.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SIZE_GUARD: usize = 64;
pub const SIZE_GUARD_ENV: &str = "CATEXT_SIZE_GUARD";

/// Morphism-count bound for constructions, `CATEXT_SIZE_GUARD` or 64.
pub fn size_guard() -> usize {
    static GUARD: OnceLock<usize> = OnceLock::new();
    *GUARD.get_or_init(|| {
        std::env::var(SIZE_GUARD_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_SIZE_GUARD)
    })
}

pub fn check_size(construction: &str, category: &FinCat) -> Result<()> {
    let bound = size_guard();
    let size = category.num_morphisms();
    if size > bound {
        return Err(Error::SizeGuardExceeded {
            construction: construction.to_string(),
            size,
            bound,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
    pub identity: bool,
}

/// A finite category. Composition `g∘f` is stored for every pair with
/// `cod f = dom g`; a missing entry is a closure violation reported by
/// [`FinCat::validate`].
#[derive(Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    table: Vec<Option<usize>>,
}

impl FinCat {
    /// Builds a category from objects, morphisms (identities flagged, one per
    /// object) and composition entries `(g, f, g∘f)`.
    ///
    /// Composites with an identity are implied when absent. Laws are not
    /// checked here; see [`FinCat::validate`].
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        composition: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let n_obj = objects.len();
        let n_mor = morphisms.len();
        let mut identities = vec![usize::MAX; n_obj];
        for (i, m) in morphisms.iter().enumerate() {
            if m.dom >= n_obj || m.cod >= n_obj {
                return Err(Error::InvalidCategory(format!(
                    "morphism '{}' has an endpoint outside the object list",
                    m.name
                )));
            }
            if m.identity {
                if m.dom != m.cod {
                    return Err(Error::InvalidCategory(format!(
                        "identity '{}' must be an endomorphism",
                        m.name
                    )));
                }
                if identities[m.dom] != usize::MAX {
                    return Err(Error::InvalidCategory(format!(
                        "object '{}' has two identities",
                        objects[m.dom]
                    )));
                }
                identities[m.dom] = i;
            }
        }
        if let Some(c) = identities.iter().position(|&i| i == usize::MAX) {
            return Err(Error::InvalidCategory(format!("object '{}' has no identity", objects[c])));
        }
        let mut table = vec![None; n_mor * n_mor];
        for (g, f, gf) in composition {
            if g >= n_mor || f >= n_mor || gf >= n_mor {
                return Err(Error::InvalidCategory("composition entry out of range".into()));
            }
            if morphisms[f].cod != morphisms[g].dom {
                return Err(Error::InvalidCategory(format!(
                    "composition entry ({}, {}) for a non-composable pair",
                    morphisms[g].name, morphisms[f].name
                )));
            }
            match table[g * n_mor + f] {
                Some(prev) if prev != gf => {
                    return Err(Error::InvalidCategory(format!(
                        "conflicting composites for ({}, {})",
                        morphisms[g].name, morphisms[f].name
                    )))
                }
                _ => table[g * n_mor + f] = Some(gf),
            }
        }
        for f in 0..n_mor {
            let left = identities[morphisms[f].cod];
            let right = identities[morphisms[f].dom];
            table[left * n_mor + f].get_or_insert(f);
            table[f * n_mor + right].get_or_insert(f);
        }
        Ok(FinCat {
            objects,
            morphisms,
            identities,
            table,
        })
    }

    /// Convenience constructor by names: non-identity arrows `(name, dom, cod)`,
    /// identities `id_<object>` inserted first in object order.
    pub fn from_names(objects: &[&str], arrows: &[(&str, &str, &str)], composition: &[(&str, &str, &str)]) -> Result<Self> {
        let objs: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let obj_index = |name: &str| {
            objs.iter()
                .position(|o| o == name)
                .ok_or_else(|| Error::InvalidCategory(format!("unknown object '{name}'")))
        };
        let mut morphisms: Vec<Morphism> = objs
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism {
                name: format!("id_{o}"),
                dom: i,
                cod: i,
                identity: true,
            })
            .collect();
        for &(name, dom, cod) in arrows {
            morphisms.push(Morphism {
                name: name.to_string(),
                dom: obj_index(dom)?,
                cod: obj_index(cod)?,
                identity: false,
            });
        }
        let mor_index = |name: &str| {
            morphisms
                .iter()
                .position(|m| m.name == name)
                .ok_or_else(|| Error::InvalidCategory(format!("unknown morphism '{name}'")))
        };
        let entries = composition
            .iter()
            .map(|&(g, f, gf)| Ok((mor_index(g)?, mor_index(f)?, mor_index(gf)?)))
            .collect::<Result<Vec<_>>>()?;
        FinCat::new(objs, morphisms, entries)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    pub fn identity(&self, c: usize) -> usize {
        self.identities[c]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.morphisms[f].identity
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// `g∘f`, or `None` when `cod f ≠ dom g` (or the table has a hole).
    #[inline]
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.table[g * self.morphisms.len() + f]
    }

    /// `g∘f` for a pair known to be composable in a validated category.
    #[inline]
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose(g, f).unwrap_or_else(|| {
            panic!(
                "composite {}∘{} undefined",
                self.morphisms[g].name, self.morphisms[f].name
            )
        })
    }

    /// Morphisms `a → b`, in input order.
    pub fn hom(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&f| self.morphisms[f].dom == a && self.morphisms[f].cod == b)
    }

    pub fn morphisms_from(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&f| self.morphisms[f].dom == a)
    }

    pub fn morphisms_into(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&f| self.morphisms[f].cod == b)
    }

    /// Explicit composition entries that are not implied by identity laws.
    pub fn nontrivial_composites(&self) -> Vec<(usize, usize, usize)> {
        let n = self.morphisms.len();
        let mut out = Vec::new();
        for g in 0..n {
            for f in 0..n {
                if self.is_identity(g) || self.is_identity(f) {
                    continue;
                }
                if let Some(gf) = self.table[g * n + f] {
                    out.push((g, f, gf));
                }
            }
        }
        out
    }

    /// Every violated closure, identity and associativity instance.
    pub fn validate(&self) -> ValidationReport {
        let n = self.morphisms.len();
        let name = |f: usize| self.morphisms[f].name.clone();
        let mut violations = Vec::new();
        for g in 0..n {
            for f in 0..n {
                if self.morphisms[f].cod != self.morphisms[g].dom {
                    continue;
                }
                match self.table[g * n + f] {
                    None => violations.push(Violation::MissingComposite { g: name(g), f: name(f) }),
                    Some(gf) => {
                        let m = &self.morphisms[gf];
                        if m.dom != self.morphisms[f].dom || m.cod != self.morphisms[g].cod {
                            violations.push(Violation::WrongEndpoints {
                                g: name(g),
                                f: name(f),
                                composite: name(gf),
                            });
                        }
                    }
                }
            }
        }
        for f in 0..n {
            let m = &self.morphisms[f];
            let left = self.identities[m.cod];
            let right = self.identities[m.dom];
            if self.table[left * n + f] != Some(f) {
                violations.push(Violation::LeftIdentity {
                    identity: name(left),
                    f: name(f),
                });
            }
            if self.table[f * n + right] != Some(f) {
                violations.push(Violation::RightIdentity {
                    f: name(f),
                    identity: name(right),
                });
            }
        }
        for h in 0..n {
            for g in 0..n {
                let Some(hg) = self.table[h * n + g] else { continue };
                for f in 0..n {
                    let Some(gf) = self.table[g * n + f] else { continue };
                    let lhs = self.table.get(h * n + gf).copied().flatten();
                    let rhs = self.table.get(hg * n + f).copied().flatten();
                    if lhs != rhs || lhs.is_none() {
                        // Holes are already reported as missing composites.
                        if lhs.is_some() && rhs.is_some() {
                            violations.push(Violation::Associativity {
                                h: name(h),
                                g: name(g),
                                f: name(f),
                            });
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// All chains of degree `n`, lexicographic in morphism index; degree 0 gives objects.
    pub fn nerve(&self, n: usize) -> Vec<NerveChain> {
        self.chains(n, false)
    }

    /// Chains of degree `n` without identity arrows.
    pub fn normalized_nerve(&self, n: usize) -> Vec<NerveChain> {
        self.chains(n, true)
    }

    fn chains(&self, n: usize, skip_identities: bool) -> Vec<NerveChain> {
        let mut level: Vec<NerveChain> = (0..self.objects.len())
            .map(|c| NerveChain {
                start: c,
                arrows: Vec::new(),
            })
            .collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for chain in &level {
                let end = chain.end(self);
                for f in self.morphisms_from(end) {
                    if skip_identities && self.is_identity(f) {
                        continue;
                    }
                    let mut arrows = chain.arrows.clone();
                    arrows.push(f);
                    next.push(NerveChain {
                        start: chain.start,
                        arrows,
                    });
                }
            }
            // Extending a lexicographic list in place keeps it lexicographic,
            // except at degree 1 where the order is by morphism, not by object.
            if chain_degree_one(&next) {
                next.sort_by_key(|c| c.arrows[0]);
            }
            level = next;
        }
        level
    }

    pub fn opposite(&self) -> FinCat {
        let n = self.morphisms.len();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                name: m.name.clone(),
                dom: m.cod,
                cod: m.dom,
                identity: m.identity,
            })
            .collect();
        let mut table = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                table[g * n + f] = self.table[f * n + g];
            }
        }
        FinCat {
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.clone(),
            table,
        }
    }

    /// Product category; object `(i, j)` has index `i * |Ob b| + j`, morphism
    /// `(f, g)` index `f * |Mor b| + g`.
    pub fn product(a: &FinCat, b: &FinCat) -> FinCat {
        let (na, nb) = (a.morphisms.len(), b.morphisms.len());
        let ob = b.objects.len();
        let objects = a
            .objects
            .iter()
            .flat_map(|x| b.objects.iter().map(move |y| format!("({x},{y})")))
            .collect::<Vec<_>>();
        let mut morphisms = Vec::with_capacity(na * nb);
        for f in &a.morphisms {
            for g in &b.morphisms {
                let identity = f.identity && g.identity;
                let dom = f.dom * ob + g.dom;
                morphisms.push(Morphism {
                    name: if identity {
                        format!("id_{}", objects[dom])
                    } else {
                        format!("({},{})", f.name, g.name)
                    },
                    dom,
                    cod: f.cod * ob + g.cod,
                    identity,
                });
            }
        }
        let n = na * nb;
        let mut table = vec![None; n * n];
        for f2 in 0..na {
            for f1 in 0..na {
                let Some(f) = a.table[f2 * na + f1] else { continue };
                for g2 in 0..nb {
                    for g1 in 0..nb {
                        if let Some(g) = b.table[g2 * nb + g1] {
                            table[(f2 * nb + g2) * n + (f1 * nb + g1)] = Some(f * nb + g);
                        }
                    }
                }
            }
        }
        let identities = (0..objects.len())
            .map(|o| a.identities[o / ob] * nb + b.identities[o % ob])
            .collect();
        FinCat {
            objects,
            morphisms,
            identities,
            table,
        }
    }

    /// The comma category `c/ℂ` and its projection `Q_c: c/ℂ → ℂ`.
    ///
    /// Objects are the morphisms `α: c → a` in input order; the morphisms out
    /// of `(a, α)` are the `γ` with `dom γ = a`, in input order, landing at
    /// `(cod γ, γ∘α)`.
    pub fn comma_under(&self, c: usize) -> Result<CommaCategory> {
        check_size("comma category", self)?;
        let under: Vec<usize> = self.morphisms_from(c).collect();
        let mut object_of = HashMap::new();
        for (i, &alpha) in under.iter().enumerate() {
            object_of.insert(alpha, i);
        }
        let objects: Vec<String> = under
            .iter()
            .map(|&alpha| format!("({},{})", self.objects[self.cod(alpha)], self.morphisms[alpha].name))
            .collect();
        let mut morphisms = Vec::new();
        let mut underlying = Vec::new();
        let mut index_of = HashMap::new();
        for (src, &alpha) in under.iter().enumerate() {
            for gamma in self.morphisms_from(self.cod(alpha)) {
                let beta = self.comp(gamma, alpha);
                let tgt = object_of[&beta];
                let identity = self.is_identity(gamma);
                index_of.insert((src, gamma), morphisms.len());
                morphisms.push(Morphism {
                    name: if identity {
                        format!("id_{}", objects[src])
                    } else {
                        format!("{}|{}", self.morphisms[gamma].name, self.morphisms[alpha].name)
                    },
                    dom: src,
                    cod: tgt,
                    identity,
                });
                underlying.push(gamma);
            }
        }
        let mut entries = Vec::new();
        for (i, m1) in morphisms.iter().enumerate() {
            for (j, m2) in morphisms.iter().enumerate() {
                if m2.dom == m1.cod {
                    let gamma = self.comp(underlying[j], underlying[i]);
                    entries.push((j, i, index_of[&(m1.dom, gamma)]));
                }
            }
        }
        let object_map = under.iter().map(|&alpha| self.cod(alpha)).collect();
        let category = FinCat::new(objects, morphisms, entries)?;
        Ok(CommaCategory {
            initial: object_of[&self.identity(c)],
            category,
            projection: CatMap {
                object_map,
                morphism_map: underlying,
            },
            under,
        })
    }

    /// The factorization category `ℂ′` with its functor `(dom, cod): ℂ′ → ℂ^op × ℂ`.
    pub fn factorization(&self) -> Result<Factorization> {
        check_size("factorization category", self)?;
        let n = self.morphisms.len();
        let objects: Vec<String> = self.morphisms.iter().map(|m| m.name.clone()).collect();
        let mut morphisms = Vec::new();
        let mut pairs = Vec::new();
        let mut lookup = HashMap::new();
        for f in 0..n {
            for alpha in self.morphisms_into(self.dom(f)) {
                for beta in self.morphisms_from(self.cod(f)) {
                    let g = self.comp(self.comp(beta, f), alpha);
                    let identity = self.is_identity(alpha) && self.is_identity(beta);
                    lookup.insert((f, alpha, beta), morphisms.len());
                    morphisms.push(Morphism {
                        name: if identity {
                            format!("id_{}", objects[f])
                        } else {
                            format!("({},{}):{}", self.morphisms[alpha].name, self.morphisms[beta].name, objects[f])
                        },
                        dom: f,
                        cod: g,
                        identity,
                    });
                    pairs.push((alpha, beta));
                }
            }
        }
        let mut entries = Vec::new();
        for (i, m1) in morphisms.iter().enumerate() {
            let (a1, b1) = pairs[i];
            for (j, m2) in morphisms.iter().enumerate() {
                if m2.dom != m1.cod {
                    continue;
                }
                let (a2, b2) = pairs[j];
                let key = (m1.dom, self.comp(a1, a2), self.comp(b2, b1));
                entries.push((j, i, lookup[&key]));
            }
        }
        let object_map = (0..n).map(|f| self.dom(f) * self.objects.len() + self.cod(f)).collect();
        let morphism_map = pairs.iter().map(|&(a, b)| a * n + b).collect();
        Ok(Factorization {
            category: Arc::new(FinCat::new(objects, morphisms, entries)?),
            dom_cod: CatMap {
                object_map,
                morphism_map,
            },
            pairs,
            lookup,
        })
    }
}

fn chain_degree_one(chains: &[NerveChain]) -> bool {
    chains.first().is_some_and(|c| c.arrows.len() == 1)
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.iter().map(|m| &m.name).collect::<Vec<_>>())
            .finish()
    }
}

/// A composable chain `c_0 → c_1 → ... → c_n`; degree 0 is a bare object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NerveChain {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl NerveChain {
    pub fn object(c: usize) -> Self {
        NerveChain {
            start: c,
            arrows: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.arrows.len()
    }

    pub fn end(&self, cat: &FinCat) -> usize {
        self.arrows.last().map_or(self.start, |&f| cat.cod(f))
    }

    /// `α_n ∘ ... ∘ α_1`, or the identity of the start for degree 0.
    pub fn composite(&self, cat: &FinCat) -> usize {
        self.arrows
            .iter()
            .skip(1)
            .fold(self.arrows.first().copied().unwrap_or(cat.identity(self.start)), |acc, &f| {
                cat.comp(f, acc)
            })
    }

    /// The `i`-th face: `i = 0` drops the first arrow, `0 < i < n` composes
    /// arrows `i` and `i+1` (1-based), `i = n` drops the last arrow.
    pub fn face(&self, cat: &FinCat, i: usize) -> NerveChain {
        let n = self.arrows.len();
        assert!(n > 0 && i <= n);
        if i == 0 {
            NerveChain {
                start: cat.cod(self.arrows[0]),
                arrows: self.arrows[1..].to_vec(),
            }
        } else if i == n {
            NerveChain {
                start: self.start,
                arrows: self.arrows[..n - 1].to_vec(),
            }
        } else {
            let mut arrows = self.arrows[..i - 1].to_vec();
            arrows.push(cat.comp(self.arrows[i], self.arrows[i - 1]));
            arrows.extend_from_slice(&self.arrows[i + 1..]);
            NerveChain {
                start: self.start,
                arrows,
            }
        }
    }

    fn key(&self) -> Vec<usize> {
        if self.arrows.is_empty() {
            vec![self.start]
        } else {
            self.arrows.clone()
        }
    }
}

/// Nerve chains of degrees `0..=max_degree` with position lookup.
#[derive(Clone, Debug)]
pub struct Nerve {
    levels: Vec<Vec<NerveChain>>,
    positions: Vec<HashMap<Vec<usize>, usize>>,
}

impl Nerve {
    pub fn new(cat: &FinCat, max_degree: usize) -> Self {
        Self::build(cat, max_degree, false)
    }

    pub fn normalized(cat: &FinCat, max_degree: usize) -> Self {
        Self::build(cat, max_degree, true)
    }

    fn build(cat: &FinCat, max_degree: usize, normalized: bool) -> Self {
        let levels: Vec<Vec<NerveChain>> = (0..=max_degree).map(|n| cat.chains(n, normalized)).collect();
        let positions = levels
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, c)| (c.key(), i)).collect())
            .collect();
        Nerve { levels, positions }
    }

    pub fn max_degree(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn chains(&self, n: usize) -> &[NerveChain] {
        &self.levels[n]
    }

    pub fn position(&self, chain: &NerveChain) -> Option<usize> {
        self.positions.get(chain.degree())?.get(&chain.key()).copied()
    }
}

/// A functor between finite categories, by its object and morphism maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatMap {
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

impl CatMap {
    /// Every failure to preserve domains, codomains, identities or composition.
    pub fn check(&self, source: &FinCat, target: &FinCat) -> Vec<String> {
        let mut problems = Vec::new();
        if self.object_map.len() != source.num_objects() || self.morphism_map.len() != source.num_morphisms() {
            problems.push("map sizes do not match the source category".to_string());
            return problems;
        }
        for f in 0..source.num_morphisms() {
            let img = self.morphism_map[f];
            let m = source.morphism(f);
            if target.dom(img) != self.object_map[m.dom] || target.cod(img) != self.object_map[m.cod] {
                problems.push(format!("'{}' is sent to a morphism with the wrong endpoints", m.name));
            }
            if m.identity && !target.is_identity(img) {
                problems.push(format!("identity '{}' is not sent to an identity", m.name));
            }
        }
        for g in 0..source.num_morphisms() {
            for f in 0..source.num_morphisms() {
                if let Some(gf) = source.compose(g, f) {
                    let lhs = target.compose(self.morphism_map[g], self.morphism_map[f]);
                    if lhs != Some(self.morphism_map[gf]) {
                        problems.push(format!(
                            "composite ({}, {}) is not preserved",
                            source.morphism(g).name,
                            source.morphism(f).name
                        ));
                    }
                }
            }
        }
        problems
    }
}

#[derive(Clone, Debug)]
pub struct CommaCategory {
    pub category: FinCat,
    pub projection: CatMap,
    /// Index of the initial object `(c, 1_c)`.
    pub initial: usize,
    /// The morphism `c → a` of ℂ behind each object, in object order.
    pub under: Vec<usize>,
}

impl CommaCategory {
    /// The comma-category morphism over `γ` out of object `source`.
    pub fn morphism_over(&self, source: usize, gamma: usize) -> Option<usize> {
        self.category
            .morphisms_from(source)
            .find(|&m| self.projection.morphism_map[m] == gamma)
    }
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub category: Arc<FinCat>,
    /// `(dom, cod): ℂ′ → ℂ^op × ℂ`, indexed as in [`FinCat::product`].
    pub dom_cod: CatMap,
    pairs: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize, usize), usize>,
}

impl Factorization {
    /// The ℂ′-morphism `(α, β): f → β∘f∘α`.
    pub fn morphism(&self, f: usize, alpha: usize, beta: usize) -> Option<usize> {
        self.lookup.get(&(f, alpha, beta)).copied()
    }

    /// The pair `(α, β)` behind a ℂ′-morphism.
    pub fn pair(&self, m: usize) -> (usize, usize) {
        self.pairs[m]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    MissingComposite { g: String, f: String },
    WrongEndpoints { g: String, f: String, composite: String },
    LeftIdentity { identity: String, f: String },
    RightIdentity { f: String, identity: String },
    Associativity { h: String, g: String, f: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingComposite { g, f } => write!(out, "missing composite at ({g}, {f})"),
            Violation::WrongEndpoints { g, f, composite } => {
                write!(out, "composite of ({g}, {f}) is '{composite}' with wrong endpoints")
            }
            Violation::LeftIdentity { identity, f } => write!(out, "identity-law violation at ({identity}, {f})"),
            Violation::RightIdentity { f, identity } => write!(out, "identity-law violation at ({f}, {identity})"),
            Violation::Associativity { h, g, f } => write!(out, "associativity violation at ({h}, {g}, {f})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Small categories used across tests, examples and the CLI.
impl FinCat {
    /// The same category with morphism `f` moved to position `perm[f]`.
    pub fn permute_morphisms(&self, perm: &[usize]) -> Result<FinCat> {
        let n = self.num_morphisms();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidCategory("not a permutation of the morphisms".into()));
        }
        let mut morphisms = self.morphisms.clone();
        for (f, m) in self.morphisms.iter().enumerate() {
            morphisms[perm[f]] = m.clone();
        }
        let mut table = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                table[perm[g] * n + perm[f]] = self.compose(g, f).map(|h| perm[h]);
            }
        }
        Ok(FinCat {
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.iter().map(|&i| perm[i]).collect(),
            table,
        })
    }
}

/// The JSON form of a category: identities `id_<object>` are implicit and
/// composites with an identity may be omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    #[serde(default)]
    pub composition: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

impl CategoryFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| parse_error(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("category files serialize")
    }

    /// Non-identity morphisms, and every composite not implied by the identity laws.
    pub fn from_category(cat: &FinCat) -> Self {
        let objects = cat.objects().to_vec();
        let morphisms = cat
            .morphisms()
            .iter()
            .filter(|m| !m.identity)
            .map(|m| MorphismEntry {
                name: m.name.clone(),
                dom: objects[m.dom].clone(),
                cod: objects[m.cod].clone(),
            })
            .collect();
        let name = |f: usize| {
            let m = cat.morphism(f);
            if m.identity {
                format!("id_{}", objects[m.dom])
            } else {
                m.name.clone()
            }
        };
        let mut composition = Vec::new();
        for g in 0..cat.num_morphisms() {
            for f in 0..cat.num_morphisms() {
                let Some(gf) = cat.compose(g, f) else { continue };
                let implied = (cat.is_identity(g) && gf == f) || (cat.is_identity(f) && gf == g);
                if !implied {
                    composition.push([name(g), name(f), name(gf)]);
                }
            }
        }
        CategoryFile {
            objects,
            morphisms,
            composition,
        }
    }

    /// Builds the category; identities are inserted first, in object order.
    /// The laws are not checked here; see [`FinCat::validate`].
    pub fn to_category(&self) -> Result<FinCat> {
        let mut seen = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if seen.insert(o.as_str(), i).is_some() {
                return Err(parse_error(format!("objects[{i}]"), format!("duplicate object '{o}'")));
            }
        }
        let object = |name: &str, location: String| {
            seen.get(name)
                .copied()
                .ok_or_else(|| parse_error(location, format!("unknown object '{name}'")))
        };
        let mut morphisms: Vec<Morphism> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism {
                name: format!("id_{o}"),
                dom: i,
                cod: i,
                identity: true,
            })
            .collect();
        for (i, m) in self.morphisms.iter().enumerate() {
            let dom = object(&m.dom, format!("morphisms[{i}].dom"))?;
            let cod = object(&m.cod, format!("morphisms[{i}].cod"))?;
            if morphisms.iter().any(|x| x.name == m.name) {
                return Err(parse_error(format!("morphisms[{i}].name"), format!("duplicate morphism '{}'", m.name)));
            }
            morphisms.push(Morphism {
                name: m.name.clone(),
                dom,
                cod,
                identity: false,
            });
        }
        let index: HashMap<&str, usize> = morphisms.iter().enumerate().map(|(i, m)| (m.name.as_str(), i)).collect();
        let mut entries = Vec::with_capacity(self.composition.len());
        for (i, triple) in self.composition.iter().enumerate() {
            let mut ids = [0; 3];
            for (k, name) in triple.iter().enumerate() {
                ids[k] = *index
                    .get(name.as_str())
                    .ok_or_else(|| parse_error(format!("composition[{i}][{k}]"), format!("unknown morphism '{name}'")))?;
            }
            entries.push((ids[0], ids[1], ids[2]));
        }
        FinCat::new(self.objects.clone(), morphisms, entries).map_err(|e| match e {
            Error::InvalidCategory(message) => parse_error("composition", message),
            other => other,
        })
    }
}

pub mod examples {
    use super::*;

    pub fn terminal() -> FinCat {
        FinCat::from_names(&["*"], &[], &[]).expect("terminal category")
    }

    /// `a → b`.
    pub fn arrow() -> FinCat {
        FinCat::from_names(&["a", "b"], &[("f", "a", "b")], &[]).expect("arrow category")
    }

    /// `u → w ← v`.
    pub fn cospan() -> FinCat {
        FinCat::from_names(&["u", "v", "w"], &[("i", "u", "w"), ("j", "v", "w")], &[]).expect("cospan")
    }

    /// The total order `0 < 1 < ... < n-1`.
    pub fn total_order(n: usize) -> FinCat {
        let le: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        poset(&le).expect("total order")
    }

    /// The poset with `le[i][j]` meaning `i ≤ j`; `le` must be a partial order.
    pub fn poset(le: &[Vec<bool>]) -> Result<FinCat> {
        let n = le.len();
        let objects: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let mut morphisms: Vec<Morphism> = (0..n)
            .map(|i| Morphism {
                name: format!("id_{}", objects[i]),
                dom: i,
                cod: i,
                identity: true,
            })
            .collect();
        let mut index = HashMap::new();
        for i in 0..n {
            index.insert((i, i), i);
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i][j] {
                    index.insert((i, j), morphisms.len());
                    morphisms.push(Morphism {
                        name: format!("{}<{}", objects[i], objects[j]),
                        dom: i,
                        cod: j,
                        identity: false,
                    });
                }
            }
        }
        let mut entries = Vec::new();
        for (&(i, j), &f) in &index {
            for (&(j2, k), &g) in &index {
                if j2 == j {
                    let gf = *index.get(&(i, k)).ok_or_else(|| {
                        Error::InvalidCategory("relation is not transitive".into())
                    })?;
                    entries.push((g, f, gf));
                }
            }
        }
        FinCat::new(objects, morphisms, entries)
    }

    /// The cyclic monoid `⟨t | t^(index+period) = t^index⟩` on one object.
    /// `index = 0` gives the cyclic group of order `period`.
    pub fn cyclic_monoid(index: usize, period: usize) -> FinCat {
        assert!(period >= 1);
        let order = index + period;
        let reduce = |k: usize| if k < order { k } else { index + (k - index) % period };
        let morphisms = (0..order)
            .map(|k| Morphism {
                name: if k == 0 { "id_*".to_string() } else { format!("t{k}") },
                dom: 0,
                cod: 0,
                identity: k == 0,
            })
            .collect();
        let entries = (0..order).flat_map(|a| (0..order).map(move |b| (a, b, reduce(a + b))));
        FinCat::new(vec!["*".to_string()], morphisms, entries).expect("cyclic monoid")
    }

    pub fn cyclic_group(order: usize) -> FinCat {
        cyclic_monoid(0, order)
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    /// Brute-force count of composable n-tuples over Mor^n.
    fn brute_force_chains(cat: &FinCat, n: usize) -> usize {
        if n == 0 {
            return cat.num_objects();
        }
        let m = cat.num_morphisms();
        let total = m.pow(n as u32);
        (0..total)
            .filter(|&code| {
                let mut arrows = Vec::with_capacity(n);
                let mut c = code;
                for _ in 0..n {
                    arrows.push(c % m);
                    c /= m;
                }
                arrows.windows(2).all(|w| cat.cod(w[0]) == cat.dom(w[1]))
            })
            .count()
    }

    #[test]
    fn small_categories_validate() {
        for cat in [terminal(), arrow(), cospan(), total_order(3), cyclic_group(2), cyclic_monoid(2, 1)] {
            assert!(cat.validate().is_valid(), "{cat:?}");
        }
    }

    #[test]
    fn corrupted_identity_is_reported() {
        // compose(f, 1_a) mapped to 1_b.
        let err = FinCat::from_names(&["a", "b"], &[("f", "a", "b")], &[("f", "id_a", "id_b")]).unwrap();
        let report = err.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .contains(&Violation::RightIdentity { f: "f".into(), identity: "id_a".into() }));
        let text: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        assert!(text.iter().any(|t| t.contains("(f, id_a)")));
    }

    #[test]
    fn associativity_violation_is_reported() {
        // Z/2-like table with s∘s = s: not a group, but also break associativity
        // by making a second element with inconsistent products.
        let objects = vec!["*".to_string()];
        let names = ["id_*", "s", "t"];
        let morphisms = names
            .iter()
            .enumerate()
            .map(|(i, n)| Morphism { name: n.to_string(), dom: 0, cod: 0, identity: i == 0 })
            .collect();
        // s∘s = t, s∘t = id, t∘s = s, t∘t = t
        let cat = FinCat::new(objects, morphisms, [(1, 1, 2), (1, 2, 0), (2, 1, 1), (2, 2, 2)]).unwrap();
        let report = cat.validate();
        assert!(report.violations.iter().any(|v| matches!(v, Violation::Associativity { .. })));
    }

    #[test]
    fn missing_composite_is_reported() {
        let cat = FinCat::from_names(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")], &[]).unwrap();
        assert_eq!(
            cat.validate().violations,
            vec![Violation::MissingComposite { g: "g".into(), f: "f".into() }]
        );
    }

    #[test]
    fn arrow_nerve_counts() {
        let cat = arrow();
        assert_eq!(cat.nerve(0).len(), 2);
        assert_eq!(cat.nerve(1).len(), 3);
        let two: Vec<Vec<String>> = cat
            .nerve(2)
            .iter()
            .map(|c| c.arrows.iter().map(|&f| cat.morphism(f).name.clone()).collect())
            .collect();
        assert_eq!(
            two,
            vec![
                vec!["id_a", "id_a"],
                vec!["id_a", "f"],
                vec!["id_b", "id_b"],
                vec!["f", "id_b"],
            ]
        );
    }

    #[test]
    fn nerve_is_lexicographic_by_morphism_index() {
        for cat in [arrow(), cospan(), total_order(3), cyclic_group(3)] {
            for n in 1..4 {
                let chains = cat.nerve(n);
                assert!(chains.windows(2).all(|w| w[0].arrows < w[1].arrows));
            }
        }
    }

    #[test]
    fn terminal_nerve_has_one_chain_per_degree() {
        let cat = terminal();
        for n in 0..6 {
            assert_eq!(cat.nerve(n).len(), 1);
        }
    }

    #[test]
    fn nerve_matches_brute_force() {
        for cat in [arrow(), cospan(), total_order(3), cyclic_group(2), cyclic_monoid(1, 2)] {
            for n in 0..5 {
                assert_eq!(cat.nerve(n).len(), brute_force_chains(&cat, n));
            }
        }
    }

    #[test]
    fn comma_of_arrow() {
        let cat = arrow();
        let a = cat.comma_under(cat.object_index("a").unwrap()).unwrap();
        assert_eq!(a.category.num_objects(), 2);
        let non_identity = a.category.morphisms().iter().filter(|m| !m.identity).count();
        assert_eq!(non_identity, 1);
        assert!(a.category.validate().is_valid());
        assert!(a.projection.check(&a.category, &cat).is_empty());
        let b = cat.comma_under(cat.object_index("b").unwrap()).unwrap();
        assert_eq!(b.category.num_objects(), 1);
    }

    #[test]
    fn comma_has_initial_object() {
        for cat in [arrow(), cospan(), total_order(3), cyclic_group(3), cyclic_monoid(1, 1)] {
            for c in 0..cat.num_objects() {
                let comma = cat.comma_under(c).unwrap();
                let k = &comma.category;
                for o in 0..k.num_objects() {
                    assert_eq!(k.hom(comma.initial, o).count(), 1);
                }
            }
        }
    }

    #[test]
    fn factorization_of_arrow_is_a_cospan() {
        let cat = arrow();
        let fact = cat.factorization().unwrap();
        let k = &fact.category;
        assert_eq!(k.num_objects(), 3);
        assert_eq!(k.num_morphisms(), 5);
        assert!(k.validate().is_valid());
        let f = cat.morphism_index("f").unwrap();
        let arrows: Vec<(usize, usize)> =
            k.morphisms().iter().filter(|m| !m.identity).map(|m| (m.dom, m.cod)).collect();
        assert_eq!(arrows.len(), 2);
        assert!(arrows.iter().all(|&(_, cod)| cod == f));
        let target = FinCat::product(&cat.opposite(), &cat);
        assert!(fact.dom_cod.check(k, &target).is_empty());
    }

    #[test]
    fn factorization_of_terminal_and_z2() {
        let t = terminal().factorization().unwrap();
        assert_eq!((t.category.num_objects(), t.category.num_morphisms()), (1, 1));
        let z2 = cyclic_group(2);
        let f = z2.factorization().unwrap();
        assert_eq!((f.category.num_objects(), f.category.num_morphisms()), (2, 8));
        assert!(f.category.validate().is_valid());
        let target = FinCat::product(&z2.opposite(), &z2);
        assert!(f.dom_cod.check(&f.category, &target).is_empty());
    }

    #[test]
    fn factorization_identities_are_identity_pairs() {
        for cat in [arrow(), total_order(3), cyclic_monoid(1, 2)] {
            let fact = cat.factorization().unwrap();
            for f in 0..cat.num_morphisms() {
                let id = fact.category.identity(f);
                assert_eq!(fact.pair(id), (cat.identity(cat.dom(f)), cat.identity(cat.cod(f))));
            }
        }
    }

    #[test]
    fn opposite_and_product() {
        let op = arrow().opposite();
        assert!(op.validate().is_valid());
        let f = op.morphism_index("f").unwrap();
        assert_eq!((op.dom(f), op.cod(f)), (1, 0));
        assert_eq!(op.opposite(), arrow());
        let p = FinCat::product(&terminal(), &cospan());
        assert_eq!((p.num_objects(), p.num_morphisms()), (3, 5));
        assert!(p.validate().is_valid());
        let sq = FinCat::product(&arrow(), &arrow());
        assert_eq!((sq.num_objects(), sq.num_morphisms()), (4, 9));
        assert!(sq.validate().is_valid());
    }

    #[test]
    fn size_guard_refuses_large_categories() {
        let big = cyclic_group(size_guard() + 1);
        assert!(matches!(big.factorization(), Err(Error::SizeGuardExceeded { .. })));
    }
}
