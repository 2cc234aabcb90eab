//! Zig-zag extraction of small subresolutions, module filtrations, and pure
//! closures.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::homological::{is_flat, right_test_modules, tensor, tensor_map_between};
use crate::matrix::Matrix;
use crate::module::{all_vectors, Module, ModuleMap, ShortExactSequence};
use crate::resolution::{
    check_exact_sequence, horseshoe, projective_resolution, DecomposedResolution,
};
use crate::subspace::Subspace;

/// A sub-sequence of a decomposed resolution on index subsets, together with
/// the induced resolution of the quotient.
#[derive(Clone, Debug)]
pub struct Subresolution {
    pub parent: DecomposedResolution,
    pub seed: Subspace,
    pub index_sets: Vec<BTreeSet<usize>>,
    /// N' = f_0(sum of the chosen summands of P_0).
    pub sub_target: Subspace,
    pub sub_resolution: DecomposedResolution,
    pub quotient_resolution: DecomposedResolution,
    pub kappa: usize,
    pub rounds: usize,
}

impl Subresolution {
    pub fn term_dims(&self) -> Vec<usize> {
        self.sub_resolution
            .terms()
            .iter()
            .map(|t| t.dim())
            .collect()
    }
}

/// `{x in coordinate block : f x = 0}`.
fn restricted_kernel(f: &Matrix, coords: &[usize], ambient: usize) -> Vec<Vec<u32>> {
    let restricted = f.select_cols(coords);
    restricted
        .kernel_basis()
        .into_iter()
        .map(|k| {
            let mut v = vec![0; ambient];
            for (&c, x) in coords.iter().zip(k) {
                v[c] = x;
            }
            v
        })
        .collect()
}

/// Least index sets containing preimages of N that are closed under the
/// forward (kernel preimage) and backward (image) passes. Preimages are read
/// off a fixed generalized inverse, so the result is monotone in N.
pub fn zigzag_index_sets(
    res: &DecomposedResolution,
    n: &Subspace,
) -> (Vec<BTreeSet<usize>>, usize) {
    let len = res.length();
    let ginv: Vec<Matrix> = res
        .maps()
        .iter()
        .map(|f| f.matrix().generalized_inverse())
        .collect();
    let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); len + 1];
    let mut rounds = 0;
    loop {
        rounds += 1;
        let before = sets.clone();
        for v in n.basis() {
            sets[0].extend(res.term(0).block_support(&ginv[0].mul_vec(v)));
        }
        for k in 1..=len {
            let prev = res.term(k - 1);
            let coords = prev.coordinates(&sets[k - 1]);
            for v in restricted_kernel(res.map(k - 1).matrix(), &coords, prev.dim()) {
                sets[k].extend(res.term(k).block_support(&ginv[k].mul_vec(&v)));
            }
        }
        for k in (1..=len).rev() {
            let term = res.term(k);
            let f = res.map(k).matrix();
            let mut hit = BTreeSet::new();
            for c in term.coordinates(&sets[k]) {
                hit.extend(res.term(k - 1).block_support(&f.col(c)));
            }
            sets[k - 1].extend(hit);
        }
        if sets == before {
            return (sets, rounds);
        }
    }
}

pub fn zigzag_subresolution(
    res: &DecomposedResolution,
    n: &Subspace,
    kappa: usize,
) -> Result<Subresolution> {
    let m = res.target();
    m.check_stable(n)
        .map_err(|_| Error::NotASubmodule("seed is not action-stable".into()))?;
    if kappa < n.dim() {
        return Err(Error::Precondition(format!(
            "budget {kappa} is below the seed dimension {}",
            n.dim()
        )));
    }
    let (sets, rounds) = zigzag_index_sets(res, n);
    let budget = kappa * res.max_summand_dim().max(1);
    let needed = sets
        .iter()
        .enumerate()
        .map(|(k, s)| res.term(k).coordinates(s).len())
        .max()
        .unwrap_or(0);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let (sub_resolution, quotient_resolution, sub_target) = split_along(res, &sets);
    Ok(Subresolution {
        parent: res.clone(),
        seed: n.clone(),
        index_sets: sets,
        sub_target,
        sub_resolution,
        quotient_resolution,
        kappa,
        rounds,
    })
}

/// Sub- and quotient resolutions cut out by index sets that are closed under
/// the boundary maps.
pub fn split_along(
    res: &DecomposedResolution,
    sets: &[BTreeSet<usize>],
) -> (DecomposedResolution, DecomposedResolution, Subspace) {
    let m = res.target();
    let len = res.length();
    let f0 = res.map(0).matrix();
    let c0 = res.term(0).coordinates(&sets[0]);
    let sub_target = Subspace::from_vectors(m.field(), m.dim(), &f0.select_cols(&c0).columns());
    let (nmod, _) = m.submodule_unchecked(&sub_target);
    let (qmod, qmap) = m.quotient_unchecked(&sub_target);

    let complements: Vec<BTreeSet<usize>> = (0..=len)
        .map(|k| {
            (0..res.term(k).len())
                .filter(|t| !sets[k].contains(t))
                .collect()
        })
        .collect();
    let mut sub_terms = Vec::new();
    let mut sub_maps = Vec::new();
    let mut quo_terms = Vec::new();
    let mut quo_maps = Vec::new();
    for k in 0..=len {
        let term = res.term(k);
        let (si, qi) = (term.restrict(&sets[k]), term.restrict(&complements[k]));
        let cs = term.coordinates(&sets[k]);
        let cq = term.coordinates(&complements[k]);
        let f = res.map(k).matrix();
        let (sm, qm) = if k == 0 {
            let sm = sub_target.coords_matrix().mul(&f.select_cols(&cs));
            let qm = qmap.matrix().mul(&f.select_cols(&cq));
            (
                ModuleMap::new_unchecked(si.total().clone(), nmod.clone(), sm),
                ModuleMap::new_unchecked(qi.total().clone(), qmod.clone(), qm),
            )
        } else {
            let prev = res.term(k - 1);
            let ps = prev.coordinates(&sets[k - 1]);
            let pq = prev.coordinates(&complements[k - 1]);
            let sm = f.select_rows(&ps).select_cols(&cs);
            let qm = f.select_rows(&pq).select_cols(&cq);
            let s_prev: &crate::resolution::IndexedProjective = &sub_terms[k - 1];
            let q_prev: &crate::resolution::IndexedProjective = &quo_terms[k - 1];
            (
                ModuleMap::new_unchecked(si.total().clone(), s_prev.total().clone(), sm),
                ModuleMap::new_unchecked(qi.total().clone(), q_prev.total().clone(), qm),
            )
        };
        sub_terms.push(si);
        sub_maps.push(sm);
        quo_terms.push(qi);
        quo_maps.push(qm);
    }
    trim(&mut sub_terms, &mut sub_maps);
    trim(&mut quo_terms, &mut quo_maps);
    let sub = DecomposedResolution::from_parts_unchecked(nmod, sub_terms, sub_maps);
    let quo = DecomposedResolution::from_parts_unchecked(qmod, quo_terms, quo_maps);
    debug_assert!(sub.validate().is_ok());
    debug_assert!(quo.validate().is_ok());
    (sub, quo, sub_target)
}

fn trim<T: IsEmptyTerm>(terms: &mut Vec<T>, maps: &mut Vec<ModuleMap>) {
    while terms.len() > 1 && terms.last().is_some_and(IsEmptyTerm::empty) {
        terms.pop();
        maps.pop();
    }
}

trait IsEmptyTerm {
    fn empty(&self) -> bool;
}
impl IsEmptyTerm for crate::resolution::IndexedProjective {
    fn empty(&self) -> bool {
        self.is_empty()
    }
}
impl IsEmptyTerm for Module {
    fn empty(&self) -> bool {
        self.is_zero()
    }
}

/// One step `M_a <= M_{a+1}` of a module filtration.
#[derive(Clone, Debug)]
pub struct FiltrationStep {
    /// M_{a+1} as a subspace of M.
    pub sub: Subspace,
    /// The zig-zag run on M / M_a that produced this step.
    pub zigzag: Subresolution,
    /// M_{a+1} / M_a, computed from scratch.
    pub quotient: Module,
    /// Canonical resolution of the quotient.
    pub quotient_resolution: DecomposedResolution,
}

#[derive(Clone, Debug)]
pub struct ModuleFiltration {
    pub module: Module,
    pub n: usize,
    pub kappa: usize,
    pub steps: Vec<FiltrationStep>,
    /// Resolution of M reassembled from the step resolutions.
    pub assembled: DecomposedResolution,
}

impl ModuleFiltration {
    pub fn chain(&self) -> Vec<Subspace> {
        let mut out = vec![Subspace::zero(self.module.field(), self.module.dim())];
        out.extend(self.steps.iter().map(|s| s.sub.clone()));
        out
    }
}

/// Filtration of M in P_n whose quotients are in P_n with dimension at most kappa.
pub fn module_filtration(m: &Module, n: usize, kappa: usize) -> Result<ModuleFiltration> {
    if kappa == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    let field = m.field();
    projective_resolution(m, n)
        .map_err(|_| Error::NotInClass(format!("module is not in P_{n}")))?;
    let mut current = Subspace::zero(field, m.dim());
    let mut steps = Vec::new();
    let (zero, _) = m.submodule_unchecked(&current);
    let mut assembled = projective_resolution(&zero, 0)?;
    while current.dim() < m.dim() {
        let (q, qmap) = m.quotient_unchecked(&current);
        let qres = projective_resolution(&q, n)?;
        let seed = q.submodule_generated([&crate::subspace::unit_vec(q.dim(), 0)]);
        let zz = zigzag_subresolution(&qres, &seed, kappa)?;
        if zz.sub_target.dim() > kappa {
            return Err(Error::BudgetExceeded {
                needed: zz.sub_target.dim(),
                budget: kappa,
            });
        }
        let next = zz.sub_target.preimage_under(qmap.matrix());
        let (mid, _) = m.submodule_unchecked(&next);
        let inner = next.relative(&current).expect("chain is increasing");
        let (quotient, proj) = mid.quotient_unchecked(&inner);
        let quotient_resolution = projective_resolution(&quotient, n)?;
        let (_, incl) = mid.submodule_unchecked(&inner);
        let ses = ShortExactSequence {
            i: rebase_source(&incl, assembled.target()),
            q: proj,
        };
        assembled = horseshoe(&ses, &assembled, &quotient_resolution)?;
        steps.push(FiltrationStep {
            sub: next.clone(),
            zigzag: zz,
            quotient,
            quotient_resolution,
        });
        current = next;
    }
    Ok(ModuleFiltration {
        module: m.clone(),
        n,
        kappa,
        steps,
        assembled,
    })
}

/// The same matrix viewed with an equal source module built elsewhere.
fn rebase_source(f: &ModuleMap, source: &Module) -> ModuleMap {
    debug_assert_eq!(f.source(), source);
    ModuleMap::new_unchecked(source.clone(), f.target().clone(), f.matrix().clone())
}

/// A pure submodule S of F with its certificates.
#[derive(Clone, Debug)]
pub struct PureClosure {
    pub seed: Subspace,
    pub sub: Subspace,
    /// `r : F -> S` with `r` after the inclusion equal to the identity.
    pub retraction: ModuleMap,
    /// `(dim T (x) S, rank of T (x) S -> T (x) F)` per test module.
    pub tensor_ranks: Vec<(usize, usize)>,
}

impl PureClosure {
    pub fn is_pure(&self) -> bool {
        self.tensor_ranks.iter().all(|&(d, r)| d == r)
    }
}

/// Retraction onto S if S is a direct summand of F.
pub fn summand_retraction(f: &Module, s: &Subspace) -> Option<ModuleMap> {
    let (_, incl) = f.submodule_unchecked(s);
    let (_, proj) = f.quotient_unchecked(s);
    ShortExactSequence { i: incl, q: proj }.retraction()
}

/// `(dim T (x) S, rank T (x) S -> T (x) F)` for each test module.
pub fn tensor_injectivity(
    f: &Module,
    s: &Subspace,
    tests: &[Module],
) -> Result<Vec<(usize, usize)>> {
    let (sm, incl) = f.submodule_unchecked(s);
    tests
        .iter()
        .map(|t| {
            let ts = tensor(t, &sm)?;
            let tf = tensor(t, f)?;
            Ok((ts.dim(), tensor_map_between(&ts, &tf, &incl).rank()))
        })
        .collect()
}

/// Smallest direct summand of F containing S_0 (ties broken by reduced basis),
/// found by adding cyclic submodules on homogeneous vectors.
pub fn smallest_summand_containing(
    f: &Module,
    s0: &Subspace,
    cap: usize,
) -> Result<(Subspace, ModuleMap)> {
    let field = f.field();
    let idems = f.algebra().cover_idempotents();
    let homogeneous: Vec<Vec<u32>> = {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for e in &idems {
            let part = Subspace::column_space(&f.act(e));
            for c in all_vectors(field, part.dim()) {
                let mut v = vec![0u32; f.dim()];
                for (b, &x) in part.basis().iter().zip(&c) {
                    for (y, &z) in v.iter_mut().zip(b) {
                        *y = field.add(*y, field.mul(x, z));
                    }
                }
                if v.iter().any(|&x| x != 0) && seen.insert(v.clone()) {
                    out.push(v);
                }
            }
        }
        out
    };
    let mut heap = BinaryHeap::new();
    let mut visited = HashSet::new();
    visited.insert(s0.clone());
    heap.push(Reverse((s0.dim(), s0.basis().to_vec())));
    let mut smallest_over_cap: Option<usize> = None;
    while let Some(Reverse((dim, rows))) = heap.pop() {
        let s = Subspace::from_vectors(field, f.dim(), &rows);
        if dim > cap {
            smallest_over_cap = Some(smallest_over_cap.map_or(dim, |d: usize| d.min(dim)));
            break;
        }
        if let Some(r) = summand_retraction(f, &s) {
            return Ok((s, r));
        }
        for v in &homogeneous {
            if s.contains(v) {
                continue;
            }
            let t = s.sum(&f.submodule_generated([v]));
            if visited.insert(t.clone()) {
                heap.push(Reverse((t.dim(), t.basis().to_vec())));
            }
        }
    }
    match smallest_over_cap {
        Some(needed) => Err(Error::BudgetExceeded {
            needed,
            budget: cap,
        }),
        None => Err(Error::NoPureExtensionFound(cap)),
    }
}

pub fn pure_closure(
    s0: &Subspace,
    f: &Module,
    kappa: usize,
    tests: Option<&[Module]>,
) -> Result<PureClosure> {
    f.check_stable(s0)
        .map_err(|_| Error::NotASubmodule("seed is not action-stable".into()))?;
    let owned;
    let tests = match tests {
        Some(t) => t,
        None => {
            owned = right_test_modules(f.algebra(), 3);
            &owned
        }
    };
    if !is_flat(f, tests)? {
        return Err(Error::NotInClass("ambient module is not flat".into()));
    }
    let (sub, retraction) = smallest_summand_containing(f, s0, kappa)?;
    let tensor_ranks = tensor_injectivity(f, &sub, tests)?;
    Ok(PureClosure {
        seed: s0.clone(),
        sub,
        retraction,
        tensor_ranks,
    })
}

/// A finite exact sequence of modules without chosen decompositions.
#[derive(Clone, Debug)]
pub struct ModuleSequence {
    pub target: Module,
    pub terms: Vec<Module>,
    pub maps: Vec<ModuleMap>,
}

impl ModuleSequence {
    pub fn validate(&self) -> Result<()> {
        check_exact_sequence(&self.target, &self.maps)
    }
}

/// Pure sub-sequence of a flat resolution and the induced flat quotient sequence.
#[derive(Clone, Debug)]
pub struct FlatSubresolution {
    pub parent: DecomposedResolution,
    pub seed: Subspace,
    /// S_k as subspaces of the parent terms.
    pub subs: Vec<Subspace>,
    pub sub_target: Subspace,
    pub sub_sequence: ModuleSequence,
    pub quotient_sequence: ModuleSequence,
    /// Per term, the tensor-rank pairs certifying purity.
    pub purity: Vec<Vec<(usize, usize)>>,
    pub kappa: usize,
    pub rounds: usize,
}

/// Flat variant of the zig-zag: the terms are pure submodules, grown from
/// `start` (used to keep successive runs ascending).
pub fn flat_zigzag_subresolution(
    res: &DecomposedResolution,
    n: &Subspace,
    kappa: usize,
    tests: &[Module],
    start: Option<&[Subspace]>,
) -> Result<FlatSubresolution> {
    let m = res.target();
    m.check_stable(n)
        .map_err(|_| Error::NotASubmodule("seed is not action-stable".into()))?;
    if kappa < n.dim() {
        return Err(Error::Precondition(format!(
            "budget {kappa} is below the seed dimension {}",
            n.dim()
        )));
    }
    let len = res.length();
    let budget = kappa * res.max_summand_dim().max(1);
    let ginv: Vec<Matrix> = res
        .maps()
        .iter()
        .map(|f| f.matrix().generalized_inverse())
        .collect();
    let mut subs: Vec<Subspace> = match start {
        Some(s) => s.to_vec(),
        None => (0..=len)
            .map(|k| Subspace::zero(m.field(), res.term(k).dim()))
            .collect(),
    };
    let close = |k: usize, s: &Subspace| -> Result<Subspace> {
        let t = res.term(k).total();
        let gen = t.submodule_generated(s.basis().iter());
        Ok(smallest_summand_containing(t, &gen, budget)?.0)
    };
    let mut rounds = 0;
    loop {
        rounds += 1;
        let before = subs.clone();
        let pre: Vec<Vec<u32>> = n.basis().iter().map(|v| ginv[0].mul_vec(v)).collect();
        subs[0] = close(
            0,
            &subs[0].sum(&Subspace::from_vectors(m.field(), res.term(0).dim(), &pre)),
        )?;
        for k in 1..=len {
            let kernel = subs[k - 1].intersection(&res.map(k - 1).kernel());
            let pre: Vec<Vec<u32>> = kernel.basis().iter().map(|v| ginv[k].mul_vec(v)).collect();
            subs[k] = close(
                k,
                &subs[k].sum(&Subspace::from_vectors(m.field(), res.term(k).dim(), &pre)),
            )?;
        }
        for k in (1..=len).rev() {
            let img = subs[k].image_under(res.map(k).matrix());
            subs[k - 1] = close(k - 1, &subs[k - 1].sum(&img))?;
        }
        if subs == before {
            break;
        }
    }
    let sub_target = subs[0].image_under(res.map(0).matrix());
    let (sub_sequence, quotient_sequence) = split_sequence(res, &subs, &sub_target);
    let purity = (0..=len)
        .map(|k| tensor_injectivity(res.term(k).total(), &subs[k], tests))
        .collect::<Result<Vec<_>>>()?;
    for q in &quotient_sequence.terms {
        if !is_flat(q, tests)? {
            return Err(Error::NotInClass("quotient term is not flat".into()));
        }
    }
    Ok(FlatSubresolution {
        parent: res.clone(),
        seed: n.clone(),
        subs,
        sub_target,
        sub_sequence,
        quotient_sequence,
        purity,
        kappa,
        rounds,
    })
}

/// Sequences induced on boundary-closed subspaces and on the quotients.
pub fn split_sequence(
    res: &DecomposedResolution,
    subs: &[Subspace],
    sub_target: &Subspace,
) -> (ModuleSequence, ModuleSequence) {
    let m = res.target();
    let (nmod, _) = m.submodule_unchecked(sub_target);
    let (qmod, _) = m.quotient_unchecked(sub_target);
    let mut st: Vec<Module> = Vec::new();
    let mut sm = Vec::new();
    let mut qt: Vec<Module> = Vec::new();
    let mut qm = Vec::new();
    for (k, s) in subs.iter().enumerate() {
        let term = res.term(k).total();
        let (smod, _) = term.submodule_unchecked(s);
        let (qmodk, _) = term.quotient_unchecked(s);
        let below = if k == 0 { sub_target } else { &subs[k - 1] };
        let f = res.map(k).matrix();
        let smat = below.coords_matrix().mul(f).mul(&s.basis_matrix());
        let qmat = below
            .quotient_matrix()
            .mul(f)
            .mul(&crate::module::lift_matrix(s));
        let (ts, tq) = if k == 0 {
            (nmod.clone(), qmod.clone())
        } else {
            (st[k - 1].clone(), qt[k - 1].clone())
        };
        sm.push(ModuleMap::new_unchecked(smod.clone(), ts, smat));
        qm.push(ModuleMap::new_unchecked(qmodk.clone(), tq, qmat));
        st.push(smod);
        qt.push(qmodk);
    }
    trim(&mut st, &mut sm);
    trim(&mut qt, &mut qm);
    (
        ModuleSequence {
            target: nmod,
            terms: st,
            maps: sm,
        },
        ModuleSequence {
            target: qmod,
            terms: qt,
            maps: qm,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn whole_module_seed_takes_everything() {
        let m = library::module("NAK3", "P1")
            .unwrap()
            .direct_sum(&library::module("NAK3", "S1").unwrap());
        let res = projective_resolution(&m, 3).unwrap();
        let full = Subspace::full(m.field(), m.dim());
        let zz = zigzag_subresolution(&res, &full, 100).unwrap();
        for (k, s) in zz.index_sets.iter().enumerate() {
            assert_eq!(s.len(), res.term(k).len());
        }
        assert!(zz.quotient_resolution.target().is_zero());
    }

    #[test]
    fn zero_seed_takes_nothing() {
        let m = library::module("T2F2", "S_b").unwrap();
        let res = projective_resolution(&m, 3).unwrap();
        let zz = zigzag_subresolution(&res, &Subspace::zero(m.field(), 1), 1).unwrap();
        assert!(zz.index_sets.iter().all(BTreeSet::is_empty));
        assert!(zz.sub_target.is_zero());
    }

    #[test]
    fn two_copies_of_pb_filter_in_two_steps() {
        let pb = library::module("T2F2", "P_b").unwrap();
        let m = pb.direct_sum(&pb);
        let filt = module_filtration(&m, 0, 2).unwrap();
        assert_eq!(filt.steps.len(), 2);
        assert!(filt
            .steps
            .iter()
            .all(|s| s.quotient.dim() == 2 && s.quotient_resolution.length() == 0));
        filt.assembled.validate().unwrap();
    }

    #[test]
    fn diagonal_in_free_module_has_a_pure_closure() {
        let alg = library::algebra("T2F2").unwrap();
        let a2 = Module::free(alg.clone(), 2);
        let diag: Vec<Vec<u32>> = (0..3)
            .map(|i| {
                let mut v = vec![0; 6];
                v[i] = 1;
                v[i + 3] = 1;
                v
            })
            .collect();
        let s0 = Subspace::from_vectors(a2.field(), 6, &diag);
        let pc = pure_closure(&s0, &a2, 3, None).unwrap();
        assert!(pc.sub.contains_space(&s0));
        assert!(pc.is_pure());
        assert_eq!(pc.sub.dim(), 3);
    }
}
