//! Cotorsion pairs on finite universes: Ext tables, perps, compatibility and
//! thickness checks, approximation search, lifting and factorization.

use serde::Serialize;

use crate::class::{
    class_member, ext_dim, ext_group, ClassKind, ClassSpec, Extension, Membership, Object, Side,
    Universe,
};
use crate::complex::{
    chain_hom_vectors, combine_chain, disk_cover, ext1_ch, ChainComplex, ChainMap, ComplexSes,
};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{
    injective_envelope, lift_matrix, projective_cover, Module, ModuleMap, ShortExactSequence,
};
use crate::par::Exec;

pub type Named = (String, Object);

/// `dims[r][c] = dim Ext^1(rows[r], cols[c])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub dims: Vec<Vec<usize>>,
}

impl ExtTable {
    pub fn get(&self, row: &str, col: &str) -> Option<usize> {
        let r = self.rows.iter().position(|n| n == row)?;
        let c = self.cols.iter().position(|n| n == col)?;
        Some(self.dims[r][c])
    }

    /// Nonzero cells as (row, col, dim).
    pub fn nonzero(&self) -> impl Iterator<Item = (&str, &str, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(r, rn)| {
            self.cols
                .iter()
                .enumerate()
                .filter(move |&(c, _)| self.dims[r][c] != 0)
                .map(move |(c, cn)| (rn.as_str(), cn.as_str(), self.dims[r][c]))
        })
    }
}

pub fn ext_table(rows: &[Named], cols: &[Named], exec: Exec) -> Result<ExtTable> {
    let n = cols.len();
    let cells = exec.map_range(rows.len() * n, |k| ext_dim(&rows[k / n].1, &cols[k % n].1));
    let flat = cells.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ExtTable {
        rows: rows.iter().map(|(n, _)| n.clone()).collect(),
        cols: cols.iter().map(|(n, _)| n.clone()).collect(),
        dims: if n == 0 {
            vec![Vec::new(); rows.len()]
        } else {
            flat.chunks(n).map(<[usize]>::to_vec).collect()
        },
    })
}

/// Members of a perp inside a universe, with the table that decides it.
#[derive(Clone, Debug, Serialize)]
pub struct Perp {
    pub members: Vec<String>,
    pub table: ExtTable,
}

/// Members `x` of `u` with `Ext^1(s, x) = 0` for all `s` in `s`.
pub fn right_perp(s: &[Named], u: &Universe, exec: Exec) -> Result<Perp> {
    let table = ext_table(s, &u.objects, exec)?;
    let members = (0..u.len())
        .filter(|&c| table.dims.iter().all(|row| row[c] == 0))
        .map(|c| table.cols[c].clone())
        .collect();
    Ok(Perp { members, table })
}

/// Members `x` of `u` with `Ext^1(x, s) = 0` for all `s` in `s`.
pub fn left_perp(s: &[Named], u: &Universe, exec: Exec) -> Result<Perp> {
    let table = ext_table(&u.objects, s, exec)?;
    let members = (0..u.len())
        .filter(|&r| table.dims[r].iter().all(|&d| d == 0))
        .map(|r| table.rows[r].clone())
        .collect();
    Ok(Perp { members, table })
}

/// How the members of one side of a pair are picked out of a universe.
#[derive(Clone, Debug)]
pub enum Selector {
    Spec(ClassSpec),
    /// An explicit list, trusted as given.
    Names(Vec<String>),
}

impl Selector {
    pub fn label(&self) -> String {
        match self {
            Selector::Spec(c) => c.to_string(),
            Selector::Names(v) => format!("{{{}}}", v.join(", ")),
        }
    }

    pub fn memberships(&self, u: &Universe) -> Result<Vec<MemberRow>> {
        u.objects
            .iter()
            .map(|(name, o)| {
                let m = match self {
                    Selector::Spec(c) => class_member(o, c)?,
                    Selector::Names(v) if v.contains(name) => Membership::yes("listed"),
                    Selector::Names(_) => Membership::no("not listed"),
                };
                Ok(MemberRow {
                    name: name.clone(),
                    member: m.member,
                    witness: m.witness,
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberRow {
    pub name: String,
    pub member: bool,
    pub witness: Vec<String>,
}

fn chosen(rows: &[MemberRow]) -> Vec<String> {
    rows.iter()
        .filter(|r| r.member)
        .map(|r| r.name.clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: String,
    pub b: String,
    pub ext_dim: usize,
}

/// Everything is relative to the universe: perps are taken inside it.
#[derive(Clone, Debug, Serialize)]
pub struct CotorsionReport {
    pub universe: String,
    pub a_spec: String,
    pub b_spec: String,
    pub a_rows: Vec<MemberRow>,
    pub b_rows: Vec<MemberRow>,
    /// Ext^1 over the whole universe; rows are first arguments.
    pub table: ExtTable,
    /// Pairs a in A, b in B with nonzero Ext^1.
    pub violations: Vec<Violation>,
    pub right_perp_of_a: Vec<String>,
    pub left_perp_of_b: Vec<String>,
    /// In the right perp of A but not selected as B.
    pub b_gaps: Vec<String>,
    /// In the left perp of B but not selected as A.
    pub a_gaps: Vec<String>,
    pub clean: bool,
}

pub fn check_cotorsion_pair(
    a: &Selector,
    b: &Selector,
    u: &Universe,
    exec: Exec,
) -> Result<CotorsionReport> {
    let a_rows = a.memberships(u)?;
    let b_rows = b.memberships(u)?;
    let (a_in, b_in) = (chosen(&a_rows), chosen(&b_rows));
    let table = ext_table(&u.objects, &u.objects, exec)?;
    let names = &table.rows;
    let idx = |n: &String| names.iter().position(|x| x == n).expect("universe name");
    let violations: Vec<Violation> = a_in
        .iter()
        .flat_map(|x| b_in.iter().map(move |y| (x, y)))
        .filter_map(|(x, y)| {
            let d = table.dims[idx(x)][idx(y)];
            (d != 0).then(|| Violation {
                a: x.clone(),
                b: y.clone(),
                ext_dim: d,
            })
        })
        .collect();
    let right_perp_of_a: Vec<String> = names
        .iter()
        .filter(|y| a_in.iter().all(|x| table.dims[idx(x)][idx(y)] == 0))
        .cloned()
        .collect();
    let left_perp_of_b: Vec<String> = names
        .iter()
        .filter(|x| b_in.iter().all(|y| table.dims[idx(x)][idx(y)] == 0))
        .cloned()
        .collect();
    let b_gaps = right_perp_of_a
        .iter()
        .filter(|n| !b_in.contains(n))
        .cloned()
        .collect();
    let a_gaps = left_perp_of_b
        .iter()
        .filter(|n| !a_in.contains(n))
        .cloned()
        .collect();
    Ok(CotorsionReport {
        universe: u.name.clone(),
        a_spec: a.label(),
        b_spec: b.label(),
        clean: violations.is_empty(),
        a_rows,
        b_rows,
        table,
        violations,
        right_perp_of_a,
        left_perp_of_b,
        b_gaps,
        a_gaps,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatRow {
    pub name: String,
    pub in_lhs: bool,
    pub in_rhs: bool,
    pub witness: Vec<String>,
}

/// Compares the right perp of `dw(inner)` with the right perp of
/// `ex(inner)` intersected with the exact complexes, inside `u`.
#[derive(Clone, Debug, Serialize)]
pub struct CompatReport {
    pub universe: String,
    pub inner: String,
    pub dw_members: Vec<String>,
    pub ex_members: Vec<String>,
    pub exact_members: Vec<String>,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub rows: Vec<CompatRow>,
    pub table: ExtTable,
    pub holds: bool,
}

pub fn check_compatibility(inner: &ClassSpec, u: &Universe, exec: Exec) -> Result<CompatReport> {
    if u.objects.iter().any(|(_, o)| o.as_complex().is_none()) {
        return Err(Error::UnsupportedSpec(
            "compatibility needs a universe of complexes".into(),
        ));
    }
    let pick = |spec: ClassSpec| -> Result<Vec<MemberRow>> { Selector::Spec(spec).memberships(u) };
    let dw_rows = pick(ClassSpec::dw(inner.clone()))?;
    let ex_rows = pick(ClassSpec::ex(inner.clone()))?;
    let e_rows = pick(ClassSpec::exact())?;
    let table = ext_table(&u.objects, &u.objects, exec)?;
    let (dw, ex, exact) = (chosen(&dw_rows), chosen(&ex_rows), chosen(&e_rows));
    let blocker = |sources: &[String], y: usize| {
        sources.iter().find_map(|s| {
            let r = table
                .rows
                .iter()
                .position(|n| n == s)
                .expect("universe name");
            (table.dims[r][y] != 0).then(|| {
                format!(
                    "Ext^1({s}, {}) has dimension {}",
                    table.cols[y], table.dims[r][y]
                )
            })
        })
    };
    let mut rows = Vec::new();
    for (y, name) in table.cols.iter().enumerate() {
        let dw_block = blocker(&dw, y);
        let ex_block = blocker(&ex, y);
        let in_lhs = dw_block.is_none();
        let is_exact = exact.contains(name);
        let in_rhs = ex_block.is_none() && is_exact;
        let mut witness = Vec::new();
        match dw_block {
            Some(w) => witness.push(format!("left side fails: {w}")),
            None => witness.push(format!("left side holds against {} members", dw.len())),
        }
        if let Some(w) = ex_block {
            witness.push(format!("right side fails: {w}"));
        }
        if !is_exact {
            witness.push(format!(
                "right side fails: {}",
                e_rows[y].witness.join("; ")
            ));
        }
        if in_rhs {
            witness.push(format!(
                "right side holds against {} members and exact",
                ex.len()
            ));
        }
        rows.push(CompatRow {
            name: name.clone(),
            in_lhs,
            in_rhs,
            witness,
        });
    }
    let lhs: Vec<String> = rows
        .iter()
        .filter(|r| r.in_lhs)
        .map(|r| r.name.clone())
        .collect();
    let rhs: Vec<String> = rows
        .iter()
        .filter(|r| r.in_rhs)
        .map(|r| r.name.clone())
        .collect();
    Ok(CompatReport {
        universe: u.name.clone(),
        inner: inner.to_string(),
        holds: lhs == rhs,
        dw_members: dw,
        ex_members: ex,
        exact_members: exact,
        lhs,
        rhs,
        rows,
        table,
    })
}

/// `r` after `i` is the identity on the source of `i`.
#[derive(Clone, Debug)]
pub struct Retract {
    pub i: ChainMap,
    pub r: ChainMap,
}

impl Retract {
    pub fn validate(&self) -> Result<()> {
        self.i.validate()?;
        self.r.validate()?;
        let x = self.i.source();
        let ri = self.r.compose(&self.i);
        if x.degrees().any(|m| !ri.component(m).is_identity()) {
            return Err(Error::NotChainMap(
                "retraction after inclusion is not the identity".into(),
            ));
        }
        Ok(())
    }

    /// The split retract `X -> X + Y -> X`.
    pub fn summand(x: &ChainComplex, y: &ChainComplex) -> Retract {
        let s = x.direct_sum(y);
        let f = s.algebra().field();
        let i = build_map(x, &s, |m| {
            Matrix::vstack(
                f,
                x.dim(m),
                &[
                    &Matrix::identity(f, x.dim(m)),
                    &Matrix::zeros(f, y.dim(m), x.dim(m)),
                ],
            )
        });
        let r = build_map(&s, x, |m| {
            Matrix::hstack(
                f,
                x.dim(m),
                &[
                    &Matrix::identity(f, x.dim(m)),
                    &Matrix::zeros(f, x.dim(m), y.dim(m)),
                ],
            )
        });
        Retract { i, r }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThickKind {
    Sequence,
    Retract,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThickRow {
    pub index: usize,
    pub kind: ThickKind,
    /// Membership of (sub, middle, quotient), or (retract, ambient, -).
    pub members: Vec<bool>,
    pub ok: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThickReport {
    pub class: String,
    pub rows: Vec<ThickRow>,
    pub clean: bool,
}

/// Two-out-of-three on sequences and closure under retracts, on samples.
pub fn check_thick(
    class: &ClassSpec,
    samples: &[ComplexSes],
    retracts: &[Retract],
) -> Result<ThickReport> {
    let is_in = |x: &ChainComplex| -> Result<bool> {
        Ok(class_member(&Object::Complex(x.clone()), class)?.member)
    };
    let mut rows = Vec::new();
    for (index, s) in samples.iter().enumerate() {
        s.validate()?;
        let members = vec![is_in(s.sub())?, is_in(s.middle())?, is_in(s.quotient())?];
        let count = members.iter().filter(|&&b| b).count();
        let ok = count != 2;
        let witness = if ok {
            format!("{count} of 3 terms in class")
        } else {
            let names = ["sub", "middle", "quotient"];
            let odd = names[members.iter().position(|&b| !b).expect("one term outside")];
            format!("two terms in class but the {odd} is not")
        };
        rows.push(ThickRow {
            index,
            kind: ThickKind::Sequence,
            members,
            ok,
            witness,
        });
    }
    for (index, r) in retracts.iter().enumerate() {
        r.validate()?;
        let members = vec![is_in(r.i.source())?, is_in(r.i.target())?];
        let ok = members[0] || !members[1];
        let witness = if ok {
            "retract closure holds".into()
        } else {
            "ambient in class but retract is not".into()
        };
        rows.push(ThickRow {
            index,
            kind: ThickKind::Retract,
            members,
            ok,
            witness,
        });
    }
    Ok(ThickReport {
        class: class.to_string(),
        clean: rows.iter().all(|r| r.ok),
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxSide {
    /// 0 -> B -> A -> X -> 0.
    EnoughProjectives,
    /// 0 -> X -> B -> A -> 0.
    EnoughInjectives,
}

impl std::str::FromStr for ApproxSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enough-projectives" | "projectives" | "proj" => Ok(ApproxSide::EnoughProjectives),
            "enough-injectives" | "injectives" | "inj" => Ok(ApproxSide::EnoughInjectives),
            _ => Err(Error::MalformedSpec(format!("unknown side `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ApproxSource {
    /// The split sequence with a zero end.
    Trivial,
    /// Projective cover or injective envelope, by disks for complexes.
    Canonical,
    /// An extension class against a universe member.
    Universe { object: String, class: usize },
}

#[derive(Clone, Debug)]
pub struct Approximation {
    pub side: ApproxSide,
    pub ses: Extension,
    pub source: ApproxSource,
    /// Membership of the term that must lie in A.
    pub a_membership: Membership,
    /// Membership of the term that must lie in B.
    pub b_membership: Membership,
    /// True when B membership was decided against a finite universe.
    pub b_relative: bool,
    pub searched: usize,
}

impl Approximation {
    pub fn a_term(&self) -> Object {
        match self.side {
            ApproxSide::EnoughProjectives => self.ses.middle(),
            ApproxSide::EnoughInjectives => self.ses.quotient(),
        }
    }
    pub fn b_term(&self) -> Object {
        match self.side {
            ApproxSide::EnoughProjectives => self.ses.sub(),
            ApproxSide::EnoughInjectives => self.ses.middle(),
        }
    }
}

fn mentions_universe(spec: &ClassSpec) -> bool {
    match &spec.kind {
        ClassKind::Perp { .. } => true,
        ClassKind::Dw(i) | ClassKind::Ex(i) => mentions_universe(i),
        ClassKind::Intersection(v) => v.iter().any(mentions_universe),
        _ => false,
    }
}

fn module_ses(i: ModuleMap, q: ModuleMap) -> Extension {
    Extension::Module(ShortExactSequence { i, q })
}

/// Split sequence with a zero end.
fn trivial_candidate(x: &Object, side: ApproxSide) -> Extension {
    match x {
        Object::Module(m) => {
            let z = Module::zero(m.algebra().clone());
            match side {
                ApproxSide::EnoughProjectives => {
                    module_ses(ModuleMap::zero(&z, m), ModuleMap::identity(m))
                }
                ApproxSide::EnoughInjectives => {
                    module_ses(ModuleMap::identity(m), ModuleMap::zero(m, &z))
                }
            }
        }
        Object::Complex(c) => {
            let z = ChainComplex::zero(c.algebra().clone());
            match side {
                ApproxSide::EnoughProjectives => Extension::Complex(ComplexSes {
                    i: ChainMap::zero(&z, c),
                    p: ChainMap::identity(c),
                }),
                ApproxSide::EnoughInjectives => Extension::Complex(ComplexSes {
                    i: ChainMap::identity(c),
                    p: ChainMap::zero(c, &z),
                }),
            }
        }
    }
}

fn canonical_candidate(x: &Object, side: ApproxSide) -> Extension {
    match (x, side) {
        (Object::Module(m), ApproxSide::EnoughProjectives) => {
            let q = projective_cover(m).map;
            let (_, i) = q.kernel_module();
            module_ses(i, q)
        }
        (Object::Module(m), ApproxSide::EnoughInjectives) => {
            let i = injective_envelope(m);
            let (_, q) = i.cokernel();
            module_ses(i, q)
        }
        (Object::Complex(c), ApproxSide::EnoughProjectives) => {
            let p = disk_cover(c).map;
            let (_, i) = p.source().subcomplex_unchecked(&p.kernel());
            Extension::Complex(ComplexSes { i, p })
        }
        (Object::Complex(c), ApproxSide::EnoughInjectives) => {
            let i = injective_disk_embedding(c);
            let (_, p) = i.target().quotient_unchecked(&i.image());
            Extension::Complex(ComplexSes { i, p })
        }
    }
}

/// Embedding of X into a sum of disks on injective envelopes of its terms.
/// The target has support `[lo, hi + 1]` with `J_k = I_k + I_{k-1}`.
pub fn injective_disk_embedding(x: &ChainComplex) -> ChainMap {
    let alg = x.algebra().clone();
    let f = alg.field();
    let envs: Vec<ModuleMap> = x.modules().iter().map(injective_envelope).collect();
    let zero = Module::zero(alg.clone());
    let inj = |k: i64| -> Module {
        if x.in_support(k) {
            envs[(k - x.lo()) as usize].target().clone()
        } else {
            zero.clone()
        }
    };
    let env = |k: i64| -> Matrix {
        if x.in_support(k) {
            envs[(k - x.lo()) as usize].matrix().clone()
        } else {
            Matrix::zeros(f, 0, x.dim(k))
        }
    };
    let (lo, hi) = (x.lo(), x.hi() + 1);
    let modules: Vec<Module> = (lo..=hi).map(|k| inj(k).direct_sum(&inj(k - 1))).collect();
    let boundaries = ((lo + 1)..=hi)
        .map(|k| {
            // (a, b) in I_k + I_{k-1} goes to (b, 0) in I_{k-1} + I_{k-2}.
            let (a, b, c) = (inj(k).dim(), inj(k - 1).dim(), inj(k - 2).dim());
            let mut m = Matrix::zeros(f, b + c, a + b);
            m.set_block(0, a, &Matrix::identity(f, b));
            m
        })
        .collect();
    let j = ChainComplex::new_unchecked(alg, lo, modules, boundaries);
    build_map(x, &j, |k| {
        Matrix::vstack(f, x.dim(k), &[&env(k), &env(k - 1).mul(&x.boundary(k))])
    })
}

/// Chain map with the given components over the source support.
pub(crate) fn build_map(
    src: &ChainComplex,
    tgt: &ChainComplex,
    comp: impl Fn(i64) -> Matrix,
) -> ChainMap {
    let g = ChainMap::new_unchecked(src.clone(), tgt.clone(), src.degrees().map(comp).collect());
    debug_assert!(g.validate().is_ok());
    g
}

/// Searches for an approximation sequence for `x` with respect to the pair
/// `(a, b)`: first the split one, then the canonical one, then every Ext
/// class against universe members.
pub fn approx_search(
    x: &Object,
    a: &ClassSpec,
    b: &ClassSpec,
    u: &Universe,
    side: ApproxSide,
) -> Result<Approximation> {
    let b_relative = mentions_universe(b);
    let mut searched = 0;
    let judge = |ses: &Extension| -> Result<(Membership, Membership)> {
        let (at, bt) = match side {
            ApproxSide::EnoughProjectives => (ses.middle(), ses.sub()),
            ApproxSide::EnoughInjectives => (ses.quotient(), ses.middle()),
        };
        Ok((class_member(&at, a)?, class_member(&bt, b)?))
    };
    let found = |ses: Extension, source, am, bm, searched| Approximation {
        side,
        ses,
        source,
        a_membership: am,
        b_membership: bm,
        b_relative,
        searched,
    };
    for (ses, source) in [
        (trivial_candidate(x, side), ApproxSource::Trivial),
        (canonical_candidate(x, side), ApproxSource::Canonical),
    ] {
        searched += 1;
        let (am, bm) = judge(&ses)?;
        if am.member && bm.member {
            return Ok(found(ses, source, am, bm, searched));
        }
    }
    let same_kind = |o: &Object| o.as_complex().is_some() == x.as_complex().is_some();
    for (name, o) in u.objects.iter().filter(|(_, o)| same_kind(o)) {
        let (anchor_class, group) = match side {
            ApproxSide::EnoughProjectives => (b, ext_group(x, o)?),
            ApproxSide::EnoughInjectives => (a, ext_group(o, x)?),
        };
        if !class_member(o, anchor_class)?.member {
            continue;
        }
        for (class, ses) in group.extensions()?.into_iter().enumerate() {
            searched += 1;
            let (am, bm) = judge(&ses)?;
            if am.member && bm.member {
                return Ok(found(
                    ses,
                    ApproxSource::Universe {
                        object: name.clone(),
                        class,
                    },
                    am,
                    bm,
                    searched,
                ));
            }
        }
    }
    Err(Error::NotFound(format!(
        "no approximation among {searched} candidate sequences over universe {} ({} objects)",
        u.name,
        u.len()
    )))
}

/// `i: A -> B` monic, `p: C -> D` epic, `u: A -> C`, `v: B -> D` with
/// `p u = v i`.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub i: ChainMap,
    pub p: ChainMap,
    pub u: ChainMap,
    pub v: ChainMap,
}

impl LiftingProblem {
    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::MalformedSquare(s.into()));
        for g in [&self.i, &self.p, &self.u, &self.v] {
            g.validate()
                .map_err(|e| Error::MalformedSquare(e.to_string()))?;
        }
        if self.u.source() != self.i.source()
            || self.v.source() != self.i.target()
            || self.u.target() != self.p.source()
            || self.v.target() != self.p.target()
        {
            return bad("the four maps do not form a square");
        }
        if !self.i.is_injective() {
            return bad("left map is not a monomorphism");
        }
        if !self.p.is_surjective() {
            return bad("right map is not an epimorphism");
        }
        if !agree(&self.p.compose(&self.u), &self.v.compose(&self.i)) {
            return bad("the square does not commute");
        }
        Ok(())
    }
}

fn agree(a: &ChainMap, b: &ChainMap) -> bool {
    let lo = a.source().lo().min(b.source().lo());
    let hi = a.source().hi().max(b.source().hi());
    (lo..=hi).all(|m| a.component(m) == b.component(m))
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub diagonal: Option<ChainMap>,
    pub cokernel_membership: Membership,
    pub kernel_membership: Membership,
    /// dim Ext^1(coker i, ker p); zero forces a diagonal to exist.
    pub obstruction_dim: usize,
    pub guaranteed: bool,
}

/// Solves `d i = u`, `p d = v` for a chain map `d: B -> C`.
pub fn lift(problem: &LiftingProblem, a: &ClassSpec, b: &ClassSpec) -> Result<LiftReport> {
    problem.validate()?;
    let LiftingProblem { i, p, u, v } = problem;
    let (bb, c) = (i.target(), p.source());
    let (coker, _) = bb.quotient_unchecked(&i.image());
    let (ker, _) = c.subcomplex_unchecked(&p.kernel());
    let obstruction_dim = ext1_ch(&coker, &ker)?.dim();
    let cokernel_membership = class_member(&Object::Complex(coker), a)?;
    let kernel_membership = class_member(&Object::Complex(ker), b)?;
    let basis = chain_hom_vectors(bb, c);
    let rhs: Vec<u32> = u.to_vec().into_iter().chain(v.to_vec()).collect();
    let f = bb.algebra().field();
    let diagonal = if basis.is_empty() {
        (u.is_zero() && v.is_zero()).then(|| ChainMap::zero(bb, c))
    } else {
        let cols: Vec<Vec<u32>> = basis
            .iter()
            .map(|w| {
                let d = ChainMap::from_vec(bb, c, w);
                d.compose(i)
                    .to_vec()
                    .into_iter()
                    .chain(p.compose(&d).to_vec())
                    .collect()
            })
            .collect();
        Matrix::from_cols(f, rhs.len(), &cols)
            .solve(&rhs)?
            .map(|s| combine_chain(bb, c, &basis, &s.particular))
    };
    if let Some(d) = &diagonal {
        debug_assert!(agree(&d.compose(i), u) && agree(&p.compose(d), v));
    }
    Ok(LiftReport {
        diagonal,
        cokernel_membership,
        kernel_membership,
        obstruction_dim,
        guaranteed: obstruction_dim == 0,
    })
}

/// The four classes of an abelian model structure: cofibrant `A`, trivially
/// fibrant `B & E`, trivially cofibrant `A & E`, fibrant `B`.
#[derive(Clone, Debug)]
pub struct ModelPairs {
    pub cofibrant: ClassSpec,
    pub trivially_fibrant: ClassSpec,
    pub trivially_cofibrant: ClassSpec,
    pub fibrant: ClassSpec,
}

impl ModelPairs {
    /// The degreewise n-projective structure relative to `u`: cofibrant
    /// `dw(P_n)`, trivially fibrant `E` and right-perp to `u`, trivially
    /// cofibrant `ex(P_n)`, fibrant right-perp to the exact members of `u`.
    pub fn dw_projective(n: usize, u: &Universe) -> Result<Self> {
        let exact: Vec<Named> = u
            .objects
            .iter()
            .filter(|(_, o)| o.as_complex().map_or(false, ChainComplex::is_exact))
            .cloned()
            .collect();
        let ue = Universe::new(format!("{}_exact", u.name), u.algebra.clone(), exact)?;
        Ok(ModelPairs {
            cofibrant: ClassSpec::dw(ClassSpec::pn(n)),
            trivially_fibrant: ClassSpec::and(vec![
                ClassSpec::exact(),
                ClassSpec::perp(Side::Right, u),
            ]),
            trivially_cofibrant: ClassSpec::ex(ClassSpec::pn(n)),
            fibrant: ClassSpec::perp(Side::Right, &ue),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub i: ChainMap,
    pub p: ChainMap,
    pub cokernel: ChainComplex,
    pub kernel: ChainComplex,
    pub cokernel_membership: Membership,
    pub kernel_membership: Membership,
    /// False: cofibration then trivial fibration. True: trivial cofibration
    /// then fibration.
    pub dual: bool,
    pub approximations: Vec<ApproxSource>,
}

impl Factorization {
    pub fn middle(&self) -> &ChainComplex {
        self.i.target()
    }
    pub fn composite_agrees(&self, f: &ChainMap) -> bool {
        agree(&self.p.compose(&self.i), f)
    }
}

fn complex_ses(ext: &Extension) -> &ComplexSes {
    match ext {
        Extension::Complex(s) => s,
        Extension::Module(_) => unreachable!("complex approximations are complexes"),
    }
}

/// Factors `f = p i` with `i` monic and `p` epic. Without `dual`, coker `i`
/// lies in the cofibrant class and ker `p` in the trivially fibrant one;
/// with `dual`, coker `i` is trivially cofibrant and ker `p` fibrant.
pub fn factor_map(
    f: &ChainMap,
    pairs: &ModelPairs,
    u: &Universe,
    dual: bool,
) -> Result<Factorization> {
    f.validate()?;
    let (x, y) = (f.source(), f.target());
    let fld = x.algebra().field();
    let (a, b) = if dual {
        (&pairs.trivially_cofibrant, &pairs.fibrant)
    } else {
        (&pairs.cofibrant, &pairs.trivially_fibrant)
    };
    let (i, p, sources) = if !dual {
        // 0 -> X -> B' -> A' -> 0, then Z0 = B' + Y.
        let first = approx_search(
            &Object::Complex(x.clone()),
            a,
            b,
            u,
            ApproxSide::EnoughInjectives,
        )?;
        let j = complex_ses(&first.ses).i.clone();
        let bp = j.target().clone();
        let z0 = bp.direct_sum(y);
        let i0 = build_map(x, &z0, |m| {
            Matrix::vstack(fld, x.dim(m), &[&j.component(m), &f.component(m)])
        });
        let (w, pi) = z0.quotient_unchecked(&i0.image());
        // 0 -> B'' -> A'' -> W -> 0, then pull back along Z0 -> W.
        let second = approx_search(&Object::Complex(w), a, b, u, ApproxSide::EnoughProjectives)?;
        let q = complex_ses(&second.ses).p.clone();
        let app = q.source().clone();
        let s = z0.direct_sum(&app);
        let phi = build_map(&s, q.target(), |m| {
            Matrix::hstack(
                fld,
                q.target().dim(m),
                &[&pi.component(m), &q.component(m).neg()],
            )
        });
        let kernel = phi.kernel();
        let (z, iota) = s.subcomplex_unchecked(&kernel);
        let lo = s.lo();
        let i = build_map(x, &z, |m| {
            let into_s = Matrix::vstack(
                fld,
                x.dim(m),
                &[&i0.component(m), &Matrix::zeros(fld, app.dim(m), x.dim(m))],
            );
            kernel[(m - lo) as usize].coords_matrix().mul(&into_s)
        });
        let p = build_map(&z, y, |m| {
            let proj = Matrix::hstack(
                fld,
                y.dim(m),
                &[
                    &Matrix::zeros(fld, y.dim(m), bp.dim(m)),
                    &Matrix::identity(fld, y.dim(m)),
                    &Matrix::zeros(fld, y.dim(m), app.dim(m)),
                ],
            );
            proj.mul(&iota.component(m))
        });
        (i, p, vec![first.source, second.source])
    } else {
        // 0 -> B' -> A' -> Y -> 0, then Z0 = X + A'.
        let first = approx_search(
            &Object::Complex(y.clone()),
            a,
            b,
            u,
            ApproxSide::EnoughProjectives,
        )?;
        let q = complex_ses(&first.ses).p.clone();
        let ap = q.source().clone();
        let z0 = x.direct_sum(&ap);
        let p0 = build_map(&z0, y, |m| {
            Matrix::hstack(fld, y.dim(m), &[&f.component(m), &q.component(m)])
        });
        let (k0, kappa) = z0.subcomplex_unchecked(&p0.kernel());
        // 0 -> K0 -> B'' -> A'' -> 0, then push out along K0 -> Z0.
        let second = approx_search(
            &Object::Complex(k0.clone()),
            a,
            b,
            u,
            ApproxSide::EnoughInjectives,
        )?;
        let e = complex_ses(&second.ses).i.clone();
        let bpp = e.target().clone();
        let s = z0.direct_sum(&bpp);
        let graph = build_map(&k0, &s, |m| {
            Matrix::vstack(
                fld,
                k0.dim(m),
                &[&kappa.component(m), &e.component(m).neg()],
            )
        });
        let rel = graph.image();
        let (z, rho) = s.quotient_unchecked(&rel);
        let i = build_map(x, &z, |m| {
            let into_s = Matrix::vstack(
                fld,
                x.dim(m),
                &[
                    &Matrix::identity(fld, x.dim(m)),
                    &Matrix::zeros(fld, ap.dim(m) + bpp.dim(m), x.dim(m)),
                ],
            );
            rho.component(m).mul(&into_s)
        });
        let lo = s.lo();
        let p = build_map(&z, y, |m| {
            let on_s = Matrix::hstack(
                fld,
                y.dim(m),
                &[&p0.component(m), &Matrix::zeros(fld, y.dim(m), bpp.dim(m))],
            );
            on_s.mul(&lift_matrix(&rel[(m - lo) as usize]))
        });
        (i, p, vec![first.source, second.source])
    };
    debug_assert!(i.is_injective() && p.is_surjective() && agree(&p.compose(&i), f));
    let (cokernel, _) = i.target().quotient_unchecked(&i.image());
    let (kernel, _) = p.source().subcomplex_unchecked(&p.kernel());
    let cokernel_membership = class_member(&Object::Complex(cokernel.clone()), a)?;
    let kernel_membership = class_member(&Object::Complex(kernel.clone()), b)?;
    Ok(Factorization {
        i,
        p,
        cokernel,
        kernel,
        cokernel_membership,
        kernel_membership,
        dual,
        approximations: sources,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    fn t2f2_modules() -> Universe {
        let alg = library::algebra("T2F2").unwrap();
        let objects = ["S_a", "S_b", "P_b", "A"]
            .iter()
            .map(|n| {
                let m = if *n == "A" {
                    Module::regular(alg.clone())
                } else {
                    library::module("T2F2", n).unwrap()
                };
                (n.to_string(), Object::Module(m))
            })
            .collect();
        Universe::new("small", alg, objects).unwrap()
    }

    #[test]
    fn projectives_have_everything_in_their_right_perp() {
        let u = t2f2_modules();
        let projectives: Vec<Named> = u
            .objects
            .iter()
            .filter(|(n, _)| n != "S_b")
            .cloned()
            .collect();
        assert_eq!(
            right_perp(&projectives, &u, Exec::Sequential)
                .unwrap()
                .members,
            u.names()
        );
        let sb = vec![("S_b".to_string(), u.get("S_b").unwrap().clone())];
        assert!(!right_perp(&sb, &u, Exec::Sequential)
            .unwrap()
            .members
            .contains(&"S_a".to_string()));
    }

    #[test]
    fn corrupted_projective_claim_is_reported() {
        let u = t2f2_modules();
        let clean = check_cotorsion_pair(
            &Selector::Spec(ClassSpec::pn(0)),
            &Selector::Spec(ClassSpec::new(ClassKind::All)),
            &u,
            Exec::Parallel,
        )
        .unwrap();
        assert!(clean.clean);
        let bad = Selector::Names(vec!["S_b".into(), "P_b".into(), "A".into()]);
        let r = check_cotorsion_pair(
            &bad,
            &Selector::Spec(ClassSpec::new(ClassKind::All)),
            &u,
            Exec::Parallel,
        )
        .unwrap();
        assert!(!r.clean);
        assert!(r
            .violations
            .iter()
            .any(|v| v.a == "S_b" && v.b == "S_a" && v.ext_dim == 1));
    }

    #[test]
    fn approximation_of_simple_by_projective() {
        let u = t2f2_modules();
        let sb = u.get("S_b").unwrap().clone();
        let r = approx_search(
            &sb,
            &ClassSpec::pn(0),
            &ClassSpec::new(ClassKind::All),
            &u,
            ApproxSide::EnoughProjectives,
        )
        .unwrap();
        assert_eq!(r.a_term().size(), 2);
        assert_eq!(r.b_term().size(), 1);
        let sa = u.get("S_a").unwrap().clone();
        let t = approx_search(
            &sa,
            &ClassSpec::pn(0),
            &ClassSpec::new(ClassKind::All),
            &u,
            ApproxSide::EnoughProjectives,
        )
        .unwrap();
        assert_eq!(t.source, ApproxSource::Trivial);
    }

    #[test]
    fn disk_embedding_is_injective_chain_map() {
        let alg = library::algebra("NAK3").unwrap();
        let mut r = crate::random::rng(3);
        for _ in 0..10 {
            let x = crate::random::random_complex(&mut r, &alg, 0, 2, 4);
            let j = injective_disk_embedding(&x);
            assert!(j.validate().is_ok() && j.is_injective());
            assert!(j.target().is_exact());
        }
    }

    #[test]
    fn bundled_universe_satisfies_the_compatibility_identity() {
        let u = library::universe("T2F2").unwrap();
        assert_eq!(u.len(), 12);
        let r = check_compatibility(&ClassSpec::pn(1), &u, Exec::Parallel).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, ["D1(P_b)", "D1(S_b)", "D2(S_b)", "D3(S_b)"]);
    }

    #[test]
    fn disk_universe_is_its_own_perp() {
        let alg = library::algebra("T2F2").unwrap();
        let objects = ["P_a", "P_b"]
            .iter()
            .enumerate()
            .map(|(k, n)| {
                (
                    format!("D({n})"),
                    Object::Complex(ChainComplex::disk(
                        &library::module("T2F2", n).unwrap(),
                        k as i64,
                    )),
                )
            })
            .collect();
        let u = Universe::new("disks", alg, objects).unwrap();
        let r = check_compatibility(&ClassSpec::pn(0), &u, Exec::Sequential).unwrap();
        assert!(r.holds && r.lhs == u.names());
    }

    #[test]
    fn nakayama_pn_pair_is_clean() {
        let u = library::module_universe("NAK3").unwrap();
        let a = ClassSpec::pn(2);
        let a_members: Vec<Named> = u
            .objects
            .iter()
            .filter(|(_, o)| class_member(o, &a).unwrap().member)
            .cloned()
            .collect();
        let b = Selector::Names(
            right_perp(&a_members, &u, Exec::Sequential)
                .unwrap()
                .members,
        );
        assert!(
            check_cotorsion_pair(&Selector::Spec(a), &b, &u, Exec::Sequential)
                .unwrap()
                .clean
        );
    }

    #[test]
    fn constructed_squares_lift_and_obstructed_ones_do_not() {
        let alg = library::algebra("T2F2").unwrap();
        let mut r = crate::random::rng(5);
        let (a, b) = (ClassSpec::dw(ClassSpec::pn(0)), ClassSpec::exact());
        for _ in 0..5 {
            let sq = crate::random::random_lifting_problem(&mut r, &alg);
            let rep = lift(&sq, &a, &b).unwrap();
            assert!(
                rep.guaranteed && rep.cokernel_membership.member && rep.kernel_membership.member
            );
            let d = rep.diagonal.unwrap();
            assert!(agree(&d.compose(&sq.i), &sq.u) && agree(&sq.p.compose(&d), &sq.v));
        }
        for _ in 0..5 {
            let sq = crate::random::obstructed_lifting_problem(&mut r, &alg);
            let rep = lift(&sq, &a, &b).unwrap();
            assert!(rep.diagonal.is_none() && !rep.guaranteed);
        }
    }

    #[test]
    fn noncommuting_square_is_malformed() {
        let alg = library::algebra("T2F2").unwrap();
        let q = ChainComplex::disk(&Module::regular(alg), 0);
        let id = ChainMap::identity(&q);
        let sq = LiftingProblem {
            i: id.clone(),
            p: id.clone(),
            u: ChainMap::zero(&q, &q),
            v: id,
        };
        assert!(matches!(
            lift(&sq, &ClassSpec::exact(), &ClassSpec::exact()),
            Err(Error::MalformedSquare(_))
        ));
    }

    fn t2f2_pairs(u: &Universe) -> ModelPairs {
        ModelPairs::dw_projective(1, u).unwrap()
    }

    fn check(fz: &Factorization, f: &ChainMap) {
        assert!(fz.composite_agrees(f));
        assert!(fz.i.is_injective() && fz.p.is_surjective());
        assert!(fz.cokernel_membership.member && fz.kernel_membership.member);
    }

    #[test]
    fn factorizations_of_random_maps() {
        let u = library::universe("T2F2").unwrap();
        let pairs = t2f2_pairs(&u);
        let alg = u.algebra.clone();
        let mut r = crate::random::rng(21);
        for k in 0..6 {
            let x = crate::random::random_complex(&mut r, &alg, 0, 1, 2);
            let y = crate::random::random_complex(&mut r, &alg, 0, 1, 2);
            let f = if k == 0 {
                ChainMap::identity(&x)
            } else {
                crate::random::random_chain_map(&mut r, &x, &y)
            };
            check(&factor_map(&f, &pairs, &u, false).unwrap(), &f);
        }
    }

    #[test]
    fn dual_factorizations_between_universe_objects() {
        let u = library::universe("T2F2").unwrap();
        let pairs = t2f2_pairs(&u);
        let mut r = crate::random::rng(4);
        for (xn, yn) in [
            ("D1(P_a)", "Ses0"),
            ("S0(S_a)", "Inc"),
            ("Ses1", "S1(S_a)"),
            ("Inc", "Inc"),
        ] {
            let x = u.get(xn).unwrap().as_complex().unwrap();
            let y = u.get(yn).unwrap().as_complex().unwrap();
            let f = crate::random::random_chain_map(&mut r, x, y);
            check(&factor_map(&f, &pairs, &u, true).unwrap(), &f);
        }
        // Nothing in the universe reaches degree 3, so this target cannot be
        // approximated.
        let top = u.get("S2(S_a)").unwrap().as_complex().unwrap();
        let id = ChainMap::identity(top);
        assert!(matches!(
            factor_map(&id, &pairs, &u, true),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn exact_complexes_form_a_thick_class_on_samples() {
        let alg = library::algebra("NAK3").unwrap();
        let mut r = crate::random::rng(13);
        let mut samples = Vec::new();
        let mut retracts = Vec::new();
        for _ in 0..8 {
            let x = crate::random::random_exact_complex(&mut r, &alg, 0, 2, 4);
            let y = crate::random::random_complex(&mut r, &alg, 0, 2, 3);
            let z = crate::random::random_exact_complex(&mut r, &alg, 0, 2, 4);
            samples.push(crate::random::random_complex_extension(&mut r, &z, &x));
            samples.push(crate::random::random_complex_extension(&mut r, &y, &x));
            retracts.push(Retract::summand(&x, &z));
            retracts.push(Retract::summand(&y, &x));
        }
        let rep = check_thick(&ClassSpec::exact(), &samples, &retracts).unwrap();
        assert!(rep.clean);
        assert_eq!(rep.rows.len(), 32);
    }
}
