//! Projective resolutions whose terms carry explicit direct-sum decompositions.

use std::collections::BTreeSet;
use std::ops::Range;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{
    factor_through, is_projective, projective_cover, Module, ModuleMap, ShortExactSequence,
};
use crate::subspace::Subspace;

/// One summand of an indexed projective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Summand {
    /// `A e` for the idempotent with this index in `cover_idempotents()`.
    Idempotent(usize),
    /// A projective module given explicitly.
    General(Module),
}

/// A projective module presented as a direct sum of labelled summands. The
/// label of a summand is its position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedProjective {
    summands: Vec<Summand>,
    modules: Vec<Module>,
    offsets: Vec<usize>,
    total: Module,
}

impl IndexedProjective {
    pub fn new(alg: Arc<Algebra>, summands: Vec<Summand>) -> Self {
        let modules: Vec<Module> = summands
            .iter()
            .map(|s| match s {
                Summand::Idempotent(i) => Module::idempotent_projective(alg.clone(), *i).0,
                Summand::General(m) => m.clone(),
            })
            .collect();
        let mut offsets = Vec::with_capacity(modules.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for m in &modules {
            acc += m.dim();
            offsets.push(acc);
        }
        let total = Module::direct_sum_all(alg, &modules);
        Self {
            summands,
            modules,
            offsets,
            total,
        }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }
    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }
    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }
    pub fn summand_module(&self, t: usize) -> &Module {
        &self.modules[t]
    }
    pub fn total(&self) -> &Module {
        &self.total
    }
    pub fn dim(&self) -> usize {
        self.total.dim()
    }
    pub fn block(&self, t: usize) -> Range<usize> {
        self.offsets[t]..self.offsets[t + 1]
    }

    pub fn max_summand_dim(&self) -> usize {
        self.modules.iter().map(Module::dim).max().unwrap_or(0)
    }

    pub fn inclusion(&self, t: usize) -> ModuleMap {
        let f = self.total.field();
        let r = self.block(t);
        let mut m = Matrix::zeros(f, self.dim(), r.len());
        m.set_block(r.start, 0, &Matrix::identity(f, r.len()));
        ModuleMap::new_unchecked(self.modules[t].clone(), self.total.clone(), m)
    }

    pub fn projection(&self, t: usize) -> ModuleMap {
        let f = self.total.field();
        let r = self.block(t);
        let mut m = Matrix::zeros(f, r.len(), self.dim());
        m.set_block(0, r.start, &Matrix::identity(f, r.len()));
        ModuleMap::new_unchecked(self.total.clone(), self.modules[t].clone(), m)
    }

    /// The sub-sum on the given labels (kept in increasing order).
    pub fn restrict(&self, labels: &BTreeSet<usize>) -> IndexedProjective {
        let summands = labels.iter().map(|&t| self.summands[t].clone()).collect();
        IndexedProjective::new(self.total.algebra().clone(), summands)
    }

    /// Coordinates of the total module covered by the given labels.
    pub fn coordinates(&self, labels: &BTreeSet<usize>) -> Vec<usize> {
        labels.iter().flat_map(|&t| self.block(t)).collect()
    }

    pub fn coordinate_subspace(&self, labels: &BTreeSet<usize>) -> Subspace {
        Subspace::coordinate(self.total.field(), self.dim(), &self.coordinates(labels))
    }

    /// Labels of the blocks on which `v` is nonzero.
    pub fn block_support(&self, v: &[u32]) -> BTreeSet<usize> {
        (0..self.len())
            .filter(|&t| v[self.block(t)].iter().any(|&x| x != 0))
            .collect()
    }

    pub fn support_of(&self, s: &Subspace) -> BTreeSet<usize> {
        s.basis()
            .iter()
            .flat_map(|v| self.block_support(v))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (t, m) in self.modules.iter().enumerate() {
            m.validate()?;
            if is_projective(m).is_none() {
                return Err(Error::Precondition(format!(
                    "summand {t} is not projective"
                )));
            }
        }
        Ok(())
    }
}

/// 0 -> P_n -> ... -> P_0 -> M -> 0 with `maps[0] = f_0 : P_0 -> M` and
/// `maps[k] = f_k : P_k -> P_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposedResolution {
    target: Module,
    terms: Vec<IndexedProjective>,
    maps: Vec<ModuleMap>,
}

impl DecomposedResolution {
    pub fn from_parts(
        target: Module,
        terms: Vec<IndexedProjective>,
        maps: Vec<ModuleMap>,
    ) -> Result<Self> {
        let r = Self {
            target,
            terms,
            maps,
        };
        r.validate()?;
        Ok(r)
    }

    pub(crate) fn from_parts_unchecked(
        target: Module,
        terms: Vec<IndexedProjective>,
        maps: Vec<ModuleMap>,
    ) -> Self {
        Self {
            target,
            terms,
            maps,
        }
    }

    pub fn target(&self) -> &Module {
        &self.target
    }
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }
    pub fn terms(&self) -> &[IndexedProjective] {
        &self.terms
    }
    pub fn term(&self, k: usize) -> &IndexedProjective {
        &self.terms[k]
    }
    pub fn maps(&self) -> &[ModuleMap] {
        &self.maps
    }
    pub fn map(&self, k: usize) -> &ModuleMap {
        &self.maps[k]
    }

    /// Largest summand dimension over all terms.
    pub fn max_summand_dim(&self) -> usize {
        self.terms
            .iter()
            .map(IndexedProjective::max_summand_dim)
            .max()
            .unwrap_or(0)
    }

    /// Exactness by rank counting at every joint, plus shape and equivariance checks.
    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() || self.terms.len() != self.maps.len() {
            return Err(Error::Precondition(
                "a resolution needs one map per term".into(),
            ));
        }
        for (k, f) in self.maps.iter().enumerate() {
            if f.source() != self.terms[k].total() {
                return Err(Error::Precondition(format!("map {k} has the wrong source")));
            }
            let tgt = if k == 0 {
                &self.target
            } else {
                self.terms[k - 1].total()
            };
            if f.target() != tgt {
                return Err(Error::Precondition(format!("map {k} has the wrong target")));
            }
            f.validate()?;
        }
        check_exact_sequence(&self.target, &self.maps)?;
        Ok(())
    }
}

/// Rank test that `0 -> ... -f_1-> X_0 -f_0-> M -> 0` is exact.
pub(crate) fn check_exact_sequence(target: &Module, maps: &[ModuleMap]) -> Result<()> {
    let ranks: Vec<usize> = maps.iter().map(ModuleMap::rank).collect();
    if ranks[0] != target.dim() {
        return Err(Error::NotExact(-1));
    }
    for k in 0..maps.len() {
        if k > 0 && !maps[k - 1].matrix().mul(maps[k].matrix()).is_zero() {
            return Err(Error::NotExact(k as i64 - 1));
        }
        let next = ranks.get(k + 1).copied().unwrap_or(0);
        if ranks[k] + next != maps[k].source().dim() {
            return Err(Error::NotExact(k as i64));
        }
    }
    Ok(())
}

/// Splits a projective module into indexed summands, with an isomorphism from
/// the indexed sum onto it.
pub fn decompose_projective(p: &Module) -> Result<(IndexedProjective, ModuleMap)> {
    let alg = p.algebra().clone();
    if !alg.has_local_idempotents() && is_projective(p).is_none() {
        return Err(Error::NotProjective);
    }
    let cover = projective_cover(p);
    if cover.map.is_iso() {
        let summands = cover
            .summands
            .iter()
            .map(|&i| Summand::Idempotent(i))
            .collect();
        let ip = IndexedProjective::new(alg, summands);
        debug_assert_eq!(ip.total(), cover.map.source());
        return Ok((ip, cover.map));
    }
    if alg.has_local_idempotents() {
        return Err(Error::NotProjective);
    }
    let ip = IndexedProjective::new(alg, vec![Summand::General(p.clone())]);
    let iso = ModuleMap::new_unchecked(
        ip.total().clone(),
        p.clone(),
        Matrix::identity(p.field(), p.dim()),
    );
    Ok((ip, iso))
}

/// Resolution by canonical covers, stopping at the first projective syzygy.
pub fn projective_resolution(m: &Module, max_len: usize) -> Result<DecomposedResolution> {
    let alg = m.algebra().clone();
    let local = alg.has_local_idempotents();
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut omega = m.clone();
    let mut incl = ModuleMap::identity(m);
    for k in 0.. {
        let (ip, onto) = if !local && !omega.is_zero() && is_projective(&omega).is_some() {
            decompose_projective(&omega)?
        } else {
            let cover = projective_cover(&omega);
            let summands = cover
                .summands
                .iter()
                .map(|&i| Summand::Idempotent(i))
                .collect();
            (IndexedProjective::new(alg.clone(), summands), cover.map)
        };
        let ker = onto.kernel();
        maps.push(incl.compose(&onto));
        terms.push(ip);
        if ker.is_zero() {
            break;
        }
        if k == max_len {
            return Err(Error::ExceedsCutoff(max_len));
        }
        let (om, inc) = onto.source().submodule_unchecked(&ker);
        omega = om;
        incl = inc;
    }
    let r = DecomposedResolution::from_parts_unchecked(m.clone(), terms, maps);
    debug_assert!(r.validate().is_ok());
    Ok(r)
}

/// Resolution of the middle term of `0 -> B -> E -> C -> 0` with terms
/// `P^B_k + P^C_k`, built from resolutions of the ends.
pub fn horseshoe(
    ses: &ShortExactSequence,
    rb: &DecomposedResolution,
    rc: &DecomposedResolution,
) -> Result<DecomposedResolution> {
    if rb.target() != ses.sub() || rc.target() != ses.quotient() {
        return Err(Error::Precondition(
            "resolutions do not match the sequence".into(),
        ));
    }
    let alg = ses.middle().algebra().clone();
    let f = alg.field();
    let n = rb.length().max(rc.length());
    let empty = IndexedProjective::new(alg.clone(), Vec::new());
    let pb = |k: usize| rb.terms.get(k).unwrap_or(&empty);
    let pc = |k: usize| rc.terms.get(k).unwrap_or(&empty);
    let zero_map = |k: usize, r: &DecomposedResolution| -> ModuleMap {
        match r.maps.get(k) {
            Some(m) => m.clone(),
            None => {
                let tgt = if k == 0 {
                    r.target.clone()
                } else {
                    r.terms.get(k - 1).unwrap_or(&empty).total().clone()
                };
                let src = r.terms.get(k).unwrap_or(&empty).total().clone();
                ModuleMap::zero(&src, &tgt)
            }
        }
    };
    let no_lift = || Error::Precondition("horseshoe lift does not exist".into());
    // lambda: P^C_0 -> E with q lambda = eps_C
    let lambda = factor_through(&ses.q, &rc.maps[0]).ok_or_else(no_lift)?;
    let mut terms = Vec::with_capacity(n + 1);
    let mut maps = Vec::with_capacity(n + 1);
    let mut theta_prev: Option<ModuleMap> = None;
    for k in 0..=n {
        let (b, c) = (pb(k), pc(k));
        let summands: Vec<Summand> = b.summands().iter().chain(c.summands()).cloned().collect();
        let term = IndexedProjective::new(alg.clone(), summands);
        let db = zero_map(k, rb);
        let dc = zero_map(k, rc);
        let matrix = if k == 0 {
            let left = ses.i.matrix().mul(db.matrix());
            Matrix::hstack(f, ses.middle().dim(), &[&left, lambda.matrix()])
        } else {
            // theta_k : P^C_k -> P^B_{k-1} with d^B theta_k = -(previous correction) d^C_k
            let correction = if k == 1 {
                let rhs = lambda.compose(&dc).scale(f.neg(1));
                let ib = ses.i.compose(&zero_map(0, rb));
                factor_through(&ib, &rhs).ok_or_else(no_lift)?
            } else {
                let prev = theta_prev.as_ref().expect("set in the previous round");
                let rhs = prev.compose(&dc).scale(f.neg(1));
                factor_through(&zero_map(k - 1, rb), &rhs).ok_or_else(no_lift)?
            };
            let top = Matrix::hstack(f, pb(k - 1).dim(), &[db.matrix(), correction.matrix()]);
            let bottom = Matrix::hstack(
                f,
                pc(k - 1).dim(),
                &[&Matrix::zeros(f, pc(k - 1).dim(), b.dim()), dc.matrix()],
            );
            theta_prev = Some(correction);
            Matrix::vstack(f, term.dim(), &[&top, &bottom])
        };
        let target = if k == 0 {
            ses.middle().clone()
        } else {
            terms
                .last()
                .map(|t: &IndexedProjective| t.total().clone())
                .expect("previous term")
        };
        maps.push(ModuleMap::new_unchecked(
            term.total().clone(),
            target,
            matrix,
        ));
        terms.push(term);
    }
    while terms.len() > 1 && terms.last().is_some_and(|t| t.is_empty()) {
        terms.pop();
        maps.pop();
    }
    DecomposedResolution::from_parts(ses.middle().clone(), terms, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn regular_module_has_length_zero() {
        for name in ["T2F2", "NAK3", "F2"] {
            let alg = library::algebra(name).unwrap();
            let r = projective_resolution(&Module::regular(alg), 3).unwrap();
            assert_eq!(r.length(), 0);
            r.validate().unwrap();
        }
    }

    #[test]
    fn zero_module_resolves_trivially() {
        let alg = library::algebra("T2F2").unwrap();
        let r = projective_resolution(&Module::zero(alg), 0).unwrap();
        assert_eq!(r.length(), 0);
        assert!(r.term(0).is_empty());
    }

    #[test]
    fn simple_at_source_needs_two_steps() {
        let s1 = library::module("NAK3", "S1").unwrap();
        let r = projective_resolution(&s1, 3).unwrap();
        assert_eq!(r.length(), 2);
        assert_eq!(projective_resolution(&s1, 1), Err(Error::ExceedsCutoff(1)));
    }

    #[test]
    fn regular_t2_splits_into_two_indecomposables() {
        let alg = library::algebra("T2F2").unwrap();
        let (ip, iso) = decompose_projective(&Module::regular(alg)).unwrap();
        assert_eq!(ip.len(), 2);
        assert!(iso.is_iso());
        ip.validate().unwrap();
    }

    #[test]
    fn non_projective_simple_is_rejected() {
        let sb = library::module("T2F2", "S_b").unwrap();
        assert_eq!(decompose_projective(&sb).unwrap_err(), Error::NotProjective);
    }
}
