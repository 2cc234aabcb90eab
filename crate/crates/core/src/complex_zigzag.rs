//! Small subcomplexes of complexes: degreewise and exact filtrations, and the
//! staircase construction of small exact subcomplexes through a given element.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::homological::{default_flat_tests, flat_dim};
use crate::matrix::Matrix;
use crate::module::Module;
use crate::resolution::{projective_resolution, DecomposedResolution};
use crate::subspace::{unit_vec, Subspace};
use crate::zigzag::{
    flat_zigzag_subresolution, zigzag_subresolution, FlatSubresolution, Subresolution,
};

/// Canonical resolutions of every term, failing with `NotInClass` when some
/// term needs more than `n` steps.
pub fn degreewise_resolutions(x: &ChainComplex, n: usize) -> Result<Vec<DecomposedResolution>> {
    x.degrees()
        .map(|m| {
            projective_resolution(&x.module(m), n).map_err(|e| match e {
                Error::ExceedsCutoff(_) => Error::NotInClass(format!(
                    "term in degree {m} has projective dimension above {n}"
                )),
                other => other,
            })
        })
        .collect()
}

/// Zig-zag closure of `seed` in one term, with the result capped at `kappa`.
fn closure_in_degree(
    res: &DecomposedResolution,
    seed: &Subspace,
    kappa: usize,
) -> Result<Subresolution> {
    if seed.dim() > kappa {
        return Err(Error::BudgetExceeded {
            needed: seed.dim(),
            budget: kappa,
        });
    }
    let z = zigzag_subresolution(res, seed, kappa)?;
    if z.sub_target.dim() > kappa {
        return Err(Error::BudgetExceeded {
            needed: z.sub_target.dim(),
            budget: kappa,
        });
    }
    Ok(z)
}

/// A subcomplex `Y' >= Y` with `Y'_k` and `X_k / Y'_k` in P_n and
/// `dim Y'_k <= kappa` in every degree.
#[derive(Clone, Debug)]
pub struct SubcomplexExtension {
    pub seed: Vec<Subspace>,
    pub subs: Vec<Subspace>,
    /// Zig-zag run in each degree, lowest degree first.
    pub closures: Vec<Subresolution>,
    pub kappa: usize,
}

/// Works top-down so the image of each closed degree is part of the seed one
/// degree lower.
pub fn small_subcomplex_extension(
    x: &ChainComplex,
    res: &[DecomposedResolution],
    seed: &[Subspace],
    kappa: usize,
) -> Result<SubcomplexExtension> {
    let len = x.support_len();
    if seed.len() != len || res.len() != len {
        return Err(Error::DimensionMismatch(
            "one seed and one resolution per degree are required".into(),
        ));
    }
    let mut subs: Vec<Option<Subspace>> = vec![None; len];
    let mut closures: Vec<Option<Subresolution>> = vec![None; len];
    for i in (0..len).rev() {
        let k = x.lo() + i as i64;
        let mut s = seed[i].clone();
        if let Some(above) = subs.get(i + 1).and_then(Option::as_ref) {
            s = s.sum(&above.image_under(&x.boundary(k + 1)));
        }
        let gen = x.module(k).submodule_generated(s.basis().iter());
        let z = closure_in_degree(&res[i], &gen, kappa)?;
        subs[i] = Some(z.sub_target.clone());
        closures[i] = Some(z);
    }
    Ok(SubcomplexExtension {
        seed: seed.to_vec(),
        subs: subs.into_iter().map(Option::unwrap).collect(),
        closures: closures.into_iter().map(Option::unwrap).collect(),
        kappa,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiltrationKind {
    Dw,
    Ex,
}

/// One step `X^a <= X^{a+1}`.
#[derive(Clone, Debug)]
pub struct ComplexStep {
    /// X^{a+1}, one subspace per degree of X.
    pub subs: Vec<Subspace>,
    /// The extension found inside X / X^a.
    pub extension: SubcomplexExtension,
    /// Degrees at which exactness was repaired, in order.
    pub repairs: Vec<i64>,
    /// X^{a+1} / X^a, computed from scratch.
    pub quotient: ChainComplex,
    pub quotient_resolutions: Vec<DecomposedResolution>,
}

#[derive(Clone, Debug)]
pub struct ComplexFiltration {
    pub complex: ChainComplex,
    pub kind: FiltrationKind,
    pub n: usize,
    pub kappa: usize,
    pub steps: Vec<ComplexStep>,
}

impl ComplexFiltration {
    pub fn chain(&self) -> Vec<Vec<Subspace>> {
        let mut out = vec![self.complex.zero_subcomplex()];
        out.extend(self.steps.iter().map(|s| s.subs.clone()));
        out
    }
}

/// Filtration by subcomplexes whose quotients are small complexes with terms in P_n.
pub fn dw_filtration(x: &ChainComplex, n: usize, kappa: usize) -> Result<ComplexFiltration> {
    filtration(x, n, kappa, FiltrationKind::Dw)
}

/// Filtration of an exact complex by exact subcomplexes with small exact quotients.
pub fn ex_filtration(x: &ChainComplex, n: usize, kappa: usize) -> Result<ComplexFiltration> {
    if let Some(m) = x.degrees().find(|&m| !x.is_exact_at(m)) {
        return Err(Error::NotExact(m));
    }
    filtration(x, n, kappa, FiltrationKind::Ex)
}

fn filtration(
    x: &ChainComplex,
    n: usize,
    kappa: usize,
    kind: FiltrationKind,
) -> Result<ComplexFiltration> {
    if kappa == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    degreewise_resolutions(x, n)?;
    let mut current = x.zero_subcomplex();
    let mut steps = Vec::new();
    while current
        .iter()
        .zip(x.modules())
        .any(|(s, m)| s.dim() < m.dim())
    {
        let (q, proj) = x.quotient_unchecked(&current);
        let res = degreewise_resolutions(&q, n)?;
        let (ext, repairs) = first_fitting_extension(&q, &res, kappa, kind)?;
        let next: Vec<Subspace> = ext
            .subs
            .iter()
            .zip(q.degrees())
            .map(|(s, m)| s.preimage_under(&proj.component(m)))
            .collect();
        let (mid, _) = x.subcomplex_unchecked(&next);
        let inner: Vec<Subspace> = next
            .iter()
            .zip(&current)
            .map(|(outer, s)| outer.relative(s).expect("chain is increasing"))
            .collect();
        let (quotient, _) = mid.quotient_unchecked(&inner);
        let quotient_resolutions = degreewise_resolutions(&quotient, n)?;
        steps.push(ComplexStep {
            subs: next.clone(),
            extension: ext,
            repairs,
            quotient,
            quotient_resolutions,
        });
        current = next;
    }
    Ok(ComplexFiltration {
        complex: x.clone(),
        kind,
        n,
        kappa,
        steps,
    })
}

/// Seeds `<e_i>` are tried lowest degree first; the first extension (repaired
/// to be exact for `Ex`) within budget is kept. On failure the smallest
/// overshoot is reported.
fn first_fitting_extension(
    q: &ChainComplex,
    res: &[DecomposedResolution],
    kappa: usize,
    kind: FiltrationKind,
) -> Result<(SubcomplexExtension, Vec<i64>)> {
    let f = q.algebra().field();
    let mut best: Option<Error> = None;
    for m in q.degrees() {
        for i in 0..q.dim(m) {
            let seed: Vec<Subspace> = q
                .degrees()
                .map(|k| {
                    if k == m {
                        q.module(k).submodule_generated([&unit_vec(q.dim(k), i)])
                    } else {
                        Subspace::zero(f, q.dim(k))
                    }
                })
                .collect();
            let mut repairs = Vec::new();
            let attempt =
                small_subcomplex_extension(q, res, &seed, kappa).and_then(|ext| match kind {
                    FiltrationKind::Dw => Ok(ext),
                    FiltrationKind::Ex => repair_exactness(q, res, ext, kappa, &mut repairs),
                });
            match attempt {
                Ok(ext) => return Ok((ext, repairs)),
                Err(Error::BudgetExceeded { needed, budget }) => {
                    let smaller = match &best {
                        Some(Error::BudgetExceeded { needed: b, .. }) => needed < *b,
                        _ => true,
                    };
                    if smaller {
                        best = Some(Error::BudgetExceeded { needed, budget });
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    Err(best.unwrap_or_else(|| Error::Precondition("quotient is zero".into())))
}

/// Cycles of the subcomplex at `p` that are not boundaries of the subcomplex.
fn exactness_defect(q: &ChainComplex, subs: &[Subspace], p: i64) -> Subspace {
    let i = (p - q.lo()) as usize;
    let cycles = subs[i].intersection(&q.cycles(p));
    let bounds = match subs.get(i + 1) {
        Some(above) => above.image_under(&q.boundary(p + 1)),
        None => Subspace::zero(q.algebra().field(), q.dim(p)),
    };
    if bounds.contains_space(&cycles) {
        Subspace::zero(q.algebra().field(), q.dim(p))
    } else {
        cycles
    }
}

/// Round-robin over degrees: while the subcomplex has a cycle at p that is not
/// a boundary of it, add preimages of those cycles in degree p + 1 and re-close.
fn repair_exactness(
    q: &ChainComplex,
    res: &[DecomposedResolution],
    mut ext: SubcomplexExtension,
    kappa: usize,
    repairs: &mut Vec<i64>,
) -> Result<SubcomplexExtension> {
    let ginv: Vec<Matrix> = q
        .degrees()
        .map(|m| q.boundary(m + 1).generalized_inverse())
        .collect();
    loop {
        let mut changed = false;
        for p in q.degrees() {
            loop {
                let defect = exactness_defect(q, &ext.subs, p);
                if defect.is_zero() {
                    break;
                }
                let i = (p - q.lo()) as usize;
                if i + 1 >= ext.subs.len() {
                    return Err(Error::NotExact(p));
                }
                let pre: Vec<Vec<u32>> =
                    defect.basis().iter().map(|v| ginv[i].mul_vec(v)).collect();
                let mut seed = ext.subs.clone();
                seed[i + 1] = seed[i + 1].sum(&Subspace::from_vectors(
                    q.algebra().field(),
                    q.dim(p + 1),
                    &pre,
                ));
                ext = small_subcomplex_extension(q, res, &seed, kappa)?;
                repairs.push(p);
                changed = true;
            }
        }
        if !changed {
            return Ok(ext);
        }
    }
}

/// Class of the terms for the staircase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Track {
    Projective,
    Flat,
}

impl FromStr for Track {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projective" => Ok(Track::Projective),
            "flat" => Ok(Track::Flat),
            _ => Err(Error::MalformedSpec(format!("unknown track `{s}`"))),
        }
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Track::Projective => "projective",
            Track::Flat => "flat",
        })
    }
}

/// Order in which degrees are visited.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// Offsets 0,-1,0,1,0,-1,-2,-1,0,1,2,... from the starting degree.
    Default,
    /// The listed degrees, repeated.
    Cyclic(Vec<i64>),
}

impl FromStr for Schedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "default" {
            return Ok(Schedule::Default);
        }
        let degs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::MalformedSpec(format!("bad schedule entry `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if degs.is_empty() {
            return Err(Error::MalformedSpec("empty schedule".into()));
        }
        Ok(Schedule::Cyclic(degs))
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Default => f.write_str("default"),
            Schedule::Cyclic(d) => {
                let parts: Vec<String> = d.iter().map(i64::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// Walks between the turning points 0, -1, 1, -2, 2, ... one step at a time.
pub fn default_offsets() -> impl Iterator<Item = i64> {
    let turns = (1..).flat_map(|r: i64| [-r, r]);
    std::iter::once(0).chain(
        turns
            .scan(0i64, |pos, turn| {
                let from = *pos;
                *pos = turn;
                let steps: Vec<i64> = if turn < from {
                    (turn..from).rev().collect()
                } else {
                    ((from + 1)..=turn).collect()
                };
                Some(steps)
            })
            .flatten(),
    )
}

impl Schedule {
    pub fn degrees(&self, start: i64) -> Box<dyn Iterator<Item = i64>> {
        match self {
            Schedule::Default => Box::new(default_offsets().map(move |o| start + o)),
            Schedule::Cyclic(d) => Box::new(d.clone().into_iter().cycle()),
        }
    }

    /// Every degree of `[lo, hi]` is visited infinitely often.
    pub fn check_fair(&self, lo: i64, hi: i64) -> Result<()> {
        match self {
            Schedule::Default => Ok(()),
            Schedule::Cyclic(d) => match (lo..=hi).find(|m| !d.contains(m)) {
                Some(m) => Err(Error::Precondition(format!(
                    "schedule never visits degree {m}"
                ))),
                None => Ok(()),
            },
        }
    }
}

/// Closure run that produced the final term in one degree.
#[derive(Clone, Debug)]
pub enum DegreeClosure {
    Projective(Subresolution),
    Flat(FlatSubresolution),
}

impl DegreeClosure {
    pub fn sub(&self) -> &Subspace {
        match self {
            DegreeClosure::Projective(z) => &z.sub_target,
            DegreeClosure::Flat(z) => &z.sub_target,
        }
    }

    /// Quotient X_k / Y_k lies in the class of the track.
    pub fn quotient_in_class(&self, n: usize, tests: &[Module]) -> Result<bool> {
        match self {
            DegreeClosure::Projective(z) => Ok(z.quotient_resolution.length() <= n),
            DegreeClosure::Flat(z) => {
                let q = &z.quotient_sequence.target;
                Ok(flat_dim(q, n, tests)?.is_some())
            }
        }
    }
}

/// Record of which operations ran and whether any relies on the noetherian
/// hypothesis.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Audit {
    pub track: Track,
    pub operations: Vec<String>,
    pub noetherian: Vec<String>,
}

impl Audit {
    pub fn passes(&self) -> bool {
        self.track == Track::Projective || self.noetherian.is_empty()
    }
}

/// Operations and whether they use that kernels of maps between finitely
/// generated modules stay finitely generated.
pub const OPERATIONS: &[(&str, bool)] = &[
    ("canonical_resolution", false),
    ("zigzag_subresolution", true),
    ("flat_zigzag_subresolution", false),
    ("pure_closure", false),
    ("tensor_injectivity", false),
    ("boundary_preimage", false),
];

fn uses_noetherian(op: &str) -> bool {
    OPERATIONS.iter().any(|&(o, n)| o == op && n)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LadderStep {
    pub degree: i64,
    pub dims: Vec<usize>,
    pub grew: bool,
}

#[derive(Clone, Debug)]
pub struct Staircase {
    pub complex: ChainComplex,
    pub degree: i64,
    pub element: Vec<u32>,
    pub track: Track,
    pub schedule: Schedule,
    pub kappa: usize,
    pub n: usize,
    pub subs: Vec<Subspace>,
    pub ladder: Vec<LadderStep>,
    pub closures: Vec<DegreeClosure>,
    pub sub: ChainComplex,
    pub quotient: ChainComplex,
    pub audit: Audit,
}

impl Staircase {
    pub fn card(&self) -> usize {
        self.subs.iter().map(Subspace::dim).sum()
    }

    pub fn budget(&self) -> usize {
        self.kappa * self.complex.support_len()
    }
}

pub struct StaircaseOptions<'a> {
    pub track: Track,
    pub schedule: Schedule,
    pub kappa: usize,
    pub n: usize,
    /// Right modules for flatness tests; defaults to the cyclic test set.
    pub tests: Option<&'a [Module]>,
    pub max_steps: usize,
}

impl Default for StaircaseOptions<'_> {
    fn default() -> Self {
        Self {
            track: Track::Projective,
            schedule: Schedule::Default,
            kappa: 4,
            n: 2,
            tests: None,
            max_steps: 10_000,
        }
    }
}

/// Small exact subcomplex through `element` in `degree`, with terms and
/// quotient terms in the class of the track.
pub fn staircase(
    x: &ChainComplex,
    degree: i64,
    element: &[u32],
    opts: &StaircaseOptions<'_>,
) -> Result<Staircase> {
    if let Some(m) = x.degrees().find(|&m| !x.is_exact_at(m)) {
        return Err(Error::NotExact(m));
    }
    if !x.in_support(degree) || element.len() != x.dim(degree) || element.iter().all(|&c| c == 0) {
        return Err(Error::Precondition(
            "element must be a nonzero vector of a term of the complex".into(),
        ));
    }
    if opts.kappa == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    opts.schedule.check_fair(x.lo(), x.hi())?;
    let alg = x.algebra();
    let f = alg.field();
    let default_tests;
    let tests: &[Module] = match opts.tests {
        Some(t) => t,
        None => {
            default_tests = default_flat_tests(alg);
            &default_tests
        }
    };
    let mut ops: Vec<String> = Vec::new();
    let mut note = |op: &str| {
        if !ops.iter().any(|o| o == op) {
            ops.push(op.to_string());
        }
    };
    if opts.track == Track::Flat {
        for m in x.degrees() {
            if flat_dim(&x.module(m), opts.n, tests)?.is_none() {
                return Err(Error::NotInClass(format!(
                    "term in degree {m} has flat dimension above {}",
                    opts.n
                )));
            }
        }
    }
    let res = degreewise_resolutions(x, opts.n)?;
    note("canonical_resolution");

    let len = x.support_len();
    let lo = x.lo();
    let budget = opts.kappa * len;
    let ginv: Vec<Matrix> = x
        .degrees()
        .map(|m| x.boundary(m + 1).generalized_inverse())
        .collect();
    let mut gens: Vec<Subspace> = x.degrees().map(|m| Subspace::zero(f, x.dim(m))).collect();
    gens[(degree - lo) as usize] = Subspace::from_vectors(f, x.dim(degree), &[element.to_vec()]);
    let mut subs = gens
        .iter()
        .map(|g| Subspace::zero(f, g.ambient()))
        .collect::<Vec<_>>();
    let mut closures: Vec<Option<DegreeClosure>> = vec![None; len];
    let mut ladder = Vec::new();
    let mut quiet: BTreeSet<i64> = BTreeSet::new();

    let in_support = |m: &i64| x.in_support(*m);
    for (step, j) in opts.schedule.degrees(degree).filter(in_support).enumerate() {
        if step >= opts.max_steps {
            return Err(Error::Precondition(format!(
                "schedule did not stabilise within {} steps",
                opts.max_steps
            )));
        }
        let i = (j - lo) as usize;
        let seed = x
            .module(j)
            .submodule_generated(subs[i].sum(&gens[i]).basis().iter());
        let closure = match opts.track {
            Track::Projective => {
                note("zigzag_subresolution");
                DegreeClosure::Projective(zigzag_subresolution(
                    &res[i],
                    &seed,
                    budget.max(seed.dim()),
                )?)
            }
            Track::Flat => {
                note("flat_zigzag_subresolution");
                note("pure_closure");
                note("tensor_injectivity");
                let start = match &closures[i] {
                    Some(DegreeClosure::Flat(z)) => Some(z.subs.clone()),
                    _ => None,
                };
                DegreeClosure::Flat(flat_zigzag_subresolution(
                    &res[i],
                    &seed,
                    budget.max(seed.dim()),
                    tests,
                    start.as_deref(),
                )?)
            }
        };
        let mut grew = closure.sub() != &subs[i];
        subs[i] = closure.sub().clone();
        closures[i] = Some(closure);
        let card: usize = subs.iter().map(Subspace::dim).sum();
        if card > budget {
            return Err(Error::BudgetExceeded {
                needed: card,
                budget,
            });
        }
        if i > 0 {
            gens[i - 1] = gens[i - 1].sum(&subs[i].image_under(&x.boundary(j)));
            grew |= !subs[i - 1].contains_space(&gens[i - 1]);
        }
        if i + 1 < len {
            note("boundary_preimage");
            let defect = exactness_defect(x, &subs, j);
            let pre: Vec<Vec<u32>> = defect.basis().iter().map(|v| ginv[i].mul_vec(v)).collect();
            gens[i + 1] = gens[i + 1].sum(&Subspace::from_vectors(f, x.dim(j + 1), &pre));
            grew |= !subs[i + 1].contains_space(&gens[i + 1]);
        }
        ladder.push(LadderStep {
            degree: j,
            dims: subs.iter().map(Subspace::dim).collect(),
            grew,
        });
        if grew {
            quiet.clear();
        }
        quiet.insert(j);
        if quiet.len() == len {
            break;
        }
    }
    let closures: Vec<DegreeClosure> = closures
        .into_iter()
        .map(|c| c.expect("every degree visited"))
        .collect();
    let (sub, _) = x.subcomplex(&subs)?;
    let (quotient, _) = x.quotient_unchecked(&subs);
    let noetherian = ops.iter().filter(|o| uses_noetherian(o)).cloned().collect();
    let audit = Audit {
        track: opts.track,
        operations: ops,
        noetherian,
    };
    Ok(Staircase {
        complex: x.clone(),
        degree,
        element: element.to_vec(),
        track: opts.track,
        schedule: opts.schedule.clone(),
        kappa: opts.kappa,
        n: opts.n,
        subs,
        ladder,
        closures,
        sub,
        quotient,
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::random::{random_complex, random_exact_complex, rng};

    #[test]
    fn default_schedule_prefix() {
        let got: Vec<i64> = default_offsets().take(16).collect();
        assert_eq!(
            got,
            vec![0, -1, 0, 1, 0, -1, -2, -1, 0, 1, 2, 1, 0, -1, -2, -3]
        );
    }

    #[test]
    fn schedule_parsing_and_fairness() {
        let s: Schedule = "0,1,2".parse().unwrap();
        assert!(s.check_fair(0, 2).is_ok());
        assert!(s.check_fair(-1, 2).is_err());
        assert_eq!("default".parse::<Schedule>().unwrap(), Schedule::Default);
    }

    #[test]
    fn dw_filtration_ends_at_the_complex() {
        let alg = library::algebra("T2F2").unwrap();
        let mut r = rng(3);
        for _ in 0..10 {
            let x = random_complex(&mut r, &alg, 0, 3, 6);
            let filt = dw_filtration(&x, 1, 6).unwrap();
            let last = filt.chain().last().unwrap().clone();
            assert!(last
                .iter()
                .zip(x.modules())
                .all(|(s, m)| s.dim() == m.dim()));
            for st in &filt.steps {
                assert!(st.quotient.dims().iter().all(|&d| d <= 6));
            }
        }
    }

    #[test]
    fn ex_filtration_steps_are_exact() {
        let alg = library::algebra("NAK3").unwrap();
        let mut r = rng(5);
        for _ in 0..10 {
            let x = random_exact_complex(&mut r, &alg, 0, 3, 6);
            let filt = ex_filtration(&x, 2, 6).unwrap();
            for st in &filt.steps {
                assert!(st.quotient.is_exact());
                let (s, _) = x.subcomplex(&st.subs).unwrap();
                assert!(s.is_exact());
            }
        }
    }

    #[test]
    fn staircase_contains_element_on_both_tracks() {
        let alg = library::algebra("T2F2").unwrap();
        let mut r = rng(9);
        let x = random_exact_complex(&mut r, &alg, 0, 3, 6);
        let (deg, v) = crate::random::random_element(&mut r, &x).unwrap();
        for track in [Track::Projective, Track::Flat] {
            let opts = StaircaseOptions {
                track,
                kappa: 6,
                n: 1,
                ..Default::default()
            };
            let s = staircase(&x, deg, &v, &opts).unwrap();
            assert!(s.subs[(deg - x.lo()) as usize].contains(&v));
            assert!(s.sub.is_exact() && s.quotient.is_exact());
            assert_eq!(s.audit.passes(), true);
        }
    }
}
