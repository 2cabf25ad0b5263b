use crate::diagrams::{adjoint_transpose, kernel, lambda, DiagramFunctor, NatTrans, ObFamily};
use crate::error::{Error, Result};
use crate::exactalg::FpMatrix;
use crate::homalg::projective_cover;

/// `... → F_1 → F_0 → F → 0` with every `F_q = Λ(P_q)` for a family of free modules `P_q`.
#[derive(Clone, Debug)]
pub struct FunctorResolution {
    target: DiagramFunctor,
    families: Vec<ObFamily>,
    terms: Vec<DiagramFunctor>,
    augmentation: NatTrans,
    differentials: Vec<NatTrans>,
}

impl FunctorResolution {
    pub fn target(&self) -> &DiagramFunctor {
        &self.target
    }

    /// The bound `Q`: terms `F_0..F_Q` are stored.
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, q: usize) -> &DiagramFunctor {
        &self.terms[q]
    }

    /// The free family `P_q` with `F_q = Λ(P_q)`.
    pub fn family(&self, q: usize) -> &ObFamily {
        &self.families[q]
    }

    pub fn augmentation(&self) -> &NatTrans {
        &self.augmentation
    }

    /// `d_q: F_{q+1} → F_q` for `q < Q`.
    pub fn differential(&self, q: usize) -> &NatTrans {
        &self.differentials[q]
    }

    /// Objectwise exactness at `F` and at `F_0..F_{Q-1}`.
    pub fn is_exact(&self) -> bool {
        let base = self.target.base();
        (0..base.num_objects()).all(|c| {
            let aug = &self.augmentation[c];
            if aug.rank() != self.target.module(c).dim() {
                return false;
            }
            let mut outgoing = aug.rank();
            for q in 0..self.length() {
                let d = &self.differentials[q][c];
                if d.rank() + outgoing != self.terms[q].module(c).dim() {
                    return false;
                }
                let previous = if q == 0 { aug } else { &self.differentials[q - 1][c] };
                if !previous.mul(d).is_zero() {
                    return false;
                }
                outgoing = d.rank();
            }
            true
        })
    }
}

/// Builds `F_0 = Λ(P(F))` with `F_0 → F` adjoint to the covers, then repeats on
/// objectwise kernels; `d_q` is the composite `F_{q+1} → K_q → F_q`.
pub fn resolve_functor(functor: &DiagramFunctor, length: usize) -> Result<FunctorResolution> {
    resolve_functor_within(functor, length, usize::MAX).map(|r| r.expect("unbounded resolution"))
}

/// As [`resolve_functor`], but gives up with `None` as soon as some term
/// `F_q` would have total dimension above `max_term_dim`.
pub fn resolve_functor_within(
    functor: &DiagramFunctor,
    length: usize,
    max_term_dim: usize,
) -> Result<Option<FunctorResolution>> {
    if length == 0 {
        return Err(Error::InvalidDiagram("resolution length must be at least 1".into()));
    }
    let base = functor.base().clone();
    let alg = functor.alg();
    let mut families = Vec::with_capacity(length + 1);
    let mut terms = Vec::with_capacity(length + 1);
    let mut differentials: Vec<NatTrans> = Vec::with_capacity(length);
    let mut augmentation = Vec::new();
    // The functor being covered, and its inclusion into the previous term.
    let mut current = functor.clone();
    let mut inclusion: Option<NatTrans> = None;
    for q in 0..=length {
        let covers: Vec<_> = (0..base.num_objects()).map(|c| projective_cover(current.module(c))).collect();
        let family = ObFamily::new(base.clone(), alg, covers.iter().map(|c| c.free.clone()).collect())?;
        let term_dim: usize = (0..base.num_morphisms()).map(|h| covers[base.dom(h)].free.dim()).sum();
        if term_dim > max_term_dim {
            return Ok(None);
        }
        let maps: Vec<FpMatrix> = covers.iter().map(|c| c.map.clone()).collect();
        let term = lambda(&family)?;
        let onto = adjoint_transpose(&family, &current, &maps);
        match &inclusion {
            None => augmentation = onto.clone(),
            Some(inc) => differentials.push(inc.iter().zip(&onto).map(|(i, e)| i.mul(e)).collect()),
        }
        if q < length {
            let (k, inc) = kernel(&term, &onto)?;
            current = k;
            inclusion = Some(inc);
        }
        families.push(family);
        terms.push(term);
    }
    let resolution = FunctorResolution {
        target: functor.clone(),
        families,
        terms,
        augmentation,
        differentials,
    };
    if !resolution.is_exact() {
        return Err(Error::Internal("functor resolution is not exact".into()));
    }
    Ok(Some(resolution))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::diagrams::{is_natural, CoeffAlgebra, RModule};
    use crate::fincat::examples::{arrow, cyclic_group, terminal};
    use crate::homalg::spliced_resolution;

    #[test]
    fn terminal_category_matches_the_spliced_resolution() {
        let alg = CoeffAlgebra::new(3, 3).unwrap();
        let a = RModule::trivial(alg, 1);
        let f = DiagramFunctor::constant(Arc::new(terminal()), a.clone());
        let res = resolve_functor(&f, 4).unwrap();
        let spliced = spliced_resolution(&a, 4);
        for q in 0..=4 {
            assert_eq!(res.term(q).module(0).dim(), spliced.term(q).dim());
        }
        for q in 0..4 {
            assert_eq!(res.differential(q)[0], *spliced.differential(q + 1));
        }
    }

    #[test]
    fn constant_k_on_arrow_over_a_field() {
        let alg = CoeffAlgebra::field(2).unwrap();
        let f = DiagramFunctor::constant(Arc::new(arrow()), RModule::trivial(alg, 1));
        let res = resolve_functor(&f, 2).unwrap();
        assert_eq!(res.term(0).dims(), vec![1, 2]);
        assert_eq!(res.term(1).dims(), vec![0, 1]);
        assert_eq!(res.term(2).dims(), vec![0, 0]);
        assert!(is_natural(res.term(0), &f, res.augmentation()));
    }

    #[test]
    fn capped_resolution_gives_up_on_large_terms() {
        let alg = CoeffAlgebra::new(2, 2).unwrap();
        let f = DiagramFunctor::constant(Arc::new(cyclic_group(2)), RModule::trivial(alg, 1));
        assert!(resolve_functor_within(&f, 3, 3).unwrap().is_none());
        let full = resolve_functor_within(&f, 3, 1000).unwrap().unwrap();
        assert_eq!(full.term(3).dims(), resolve_functor(&f, 3).unwrap().term(3).dims());
    }

    #[test]
    fn group_resolution_is_exact_and_natural() {
        let alg = CoeffAlgebra::new(2, 2).unwrap();
        let f = DiagramFunctor::constant(Arc::new(cyclic_group(2)), RModule::trivial(alg, 1));
        let res = resolve_functor(&f, 3).unwrap();
        assert!(res.is_exact());
        for q in 0..3 {
            assert!(is_natural(res.term(q + 1), res.term(q), res.differential(q)));
        }
    }
}
