//! Stand-alone verification of certificates.
//!
//! Only the field, matrix and algebra layers are shared with the
//! constructions. Module arithmetic (sub- and quotient actions, free covers,
//! syzygies, projectivity, exactness) is reimplemented here, and every
//! derived witness field is recomputed and compared entry by entry.

use std::fmt;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::certificate::{
    statement_digest, AuditRecord, Certificate, ComplexData, ComplexStepRecord, LadderRecord,
    ModuleData, ModuleStepRecord, ResolutionData, Rows, Statement, SubresolutionRecord, Witness,
    FORMAT,
};
use crate::complex_zigzag::{FiltrationKind, Track};
use crate::field::PrimeField;
use crate::matrix::Matrix;

/// First failed check: where it happened and why.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub location: String,
    pub reason: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.reason)
    }
}

impl std::error::Error for Failure {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verified {
    pub kind: &'static str,
    pub checks: usize,
}

type Check<T> = std::result::Result<T, Failure>;

fn fail<T>(location: impl Into<String>, reason: impl Into<String>) -> Check<T> {
    Err(Failure {
        location: location.into(),
        reason: reason.into(),
    })
}

fn loc_join(a: &str, b: impl fmt::Display) -> String {
    if a.is_empty() {
        b.to_string()
    } else {
        format!("{a}.{b}")
    }
}

/// Parses and checks a certificate. Malformed JSON is a failure too.
pub fn check_json(text: &str) -> Check<Verified> {
    let cert: Certificate = match serde_json::from_str(text) {
        Ok(c) => c,
        Err(e) => return fail("certificate", format!("malformed: {e}")),
    };
    check(&cert)
}

pub fn check(cert: &Certificate) -> Check<Verified> {
    if cert.format != FORMAT {
        return fail("format", format!("unsupported format `{}`", cert.format));
    }
    if statement_digest(&cert.format, &cert.algebra, &cert.statement) != cert.digest {
        return fail("digest", "does not match the algebra and statement");
    }
    let alg = match Algebra::load(&cert.algebra).and_then(|a| a.validate().map(|_| a)) {
        Ok(a) => a,
        Err(e) => return fail("algebra", e.to_string()),
    };
    let mut cx = Ctx {
        f: alg.field(),
        alg,
        checks: 0,
    };
    let kind = cert.kind();
    match (&cert.statement, &cert.witness) {
        (
            Statement::Subresolution {
                module,
                seed,
                kappa,
            },
            Witness::Subresolution {
                resolutions,
                record,
            },
        ) => cx.subresolution(module, seed, *kappa, resolutions, record)?,
        (
            Statement::ModuleFiltration { module, n, kappa },
            Witness::ModuleFiltration { resolutions, steps },
        ) => cx.module_filtration(module, *n, *kappa, resolutions, steps)?,
        (
            Statement::PureClosure {
                module,
                seed,
                kappa,
            },
            Witness::PureClosure {
                sub,
                module: smod,
                retraction,
            },
        ) => cx.pure_closure(module, seed, *kappa, sub, smod, retraction)?,
        (
            Statement::ComplexFiltration {
                complex,
                class,
                n,
                kappa,
            },
            Witness::ComplexFiltration { steps },
        ) => cx.complex_filtration(complex, *class, *n, *kappa, steps)?,
        (
            Statement::Staircase {
                complex,
                degree,
                element,
                track,
                schedule,
                n,
                kappa,
            },
            Witness::Staircase {
                subs,
                sub,
                quotient,
                sub_pd,
                quotient_pd,
                card,
                budget,
                ladder,
                audit,
            },
        ) => {
            let st = StairStatement {
                degree: *degree,
                element,
                track: *track,
                schedule,
                n: *n,
                kappa: *kappa,
            };
            let wit = StairWitness {
                subs,
                sub,
                quotient,
                sub_pd,
                quotient_pd,
                card: *card,
                budget: *budget,
                ladder,
                audit,
            };
            cx.staircase(complex, &st, &wit)?
        }
        _ => {
            return fail(
                "witness",
                format!("witness kind does not match a `{kind}` statement"),
            )
        }
    }
    Ok(Verified {
        kind,
        checks: cx.checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Mod {
    dim: usize,
    act: Vec<Matrix>,
}

/// Reduced echelon basis of a subspace of `F_p^ambient`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Basis {
    ambient: usize,
    rows: Vec<Vec<u32>>,
    piv: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Cx {
    lo: i64,
    mods: Vec<Mod>,
    /// `d[i]` maps degree `lo+i+1` to degree `lo+i`.
    d: Vec<Matrix>,
}

impl Cx {
    fn len(&self) -> usize {
        self.mods.len()
    }
    fn hi(&self) -> i64 {
        self.lo + self.len() as i64 - 1
    }
    /// Boundary leaving position `i`, zero at the bottom.
    fn out(&self, i: usize, f: PrimeField) -> Matrix {
        if i == 0 {
            Matrix::zeros(f, 0, self.mods[0].dim)
        } else {
            self.d[i - 1].clone()
        }
    }
}

struct Term {
    summands: Vec<usize>,
    total: Mod,
}

struct Res {
    target: Mod,
    terms: Vec<Term>,
    maps: Vec<Matrix>,
}

struct StairStatement<'a> {
    degree: i64,
    element: &'a [u32],
    track: Track,
    schedule: &'a str,
    n: usize,
    kappa: usize,
}

struct StairWitness<'a> {
    subs: &'a [Rows],
    sub: &'a ComplexData,
    quotient: &'a ComplexData,
    sub_pd: &'a [usize],
    quotient_pd: &'a [usize],
    card: usize,
    budget: usize,
    ladder: &'a Option<Vec<LadderRecord>>,
    audit: &'a AuditRecord,
}

/// Operations a staircase may report, and whether each needs kernels of maps
/// between finitely generated modules to be finitely generated.
const KNOWN_OPERATIONS: &[(&str, bool)] = &[
    ("canonical_resolution", false),
    ("zigzag_subresolution", true),
    ("flat_zigzag_subresolution", false),
    ("pure_closure", false),
    ("tensor_injectivity", false),
    ("boundary_preimage", false),
];

const PD_SLACK: usize = 4;

struct Ctx {
    alg: Algebra,
    f: PrimeField,
    checks: usize,
}

impl Ctx {
    fn ensure(
        &mut self,
        ok: bool,
        loc: impl FnOnce() -> String,
        reason: impl FnOnce() -> String,
    ) -> Check<()> {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            fail(loc(), reason())
        }
    }

    fn matrix(&mut self, r: &Rows, rows: usize, cols: usize, loc: &str) -> Check<Matrix> {
        self.checks += 1;
        if r.len() != rows {
            return fail(loc, format!("expected {rows} rows, found {}", r.len()));
        }
        if let Some((i, row)) = r.iter().enumerate().find(|(_, row)| row.len() != cols) {
            return fail(
                loc,
                format!("row {i} has {} entries, expected {cols}", row.len()),
            );
        }
        if r.iter().flatten().any(|&x| x >= self.f.p()) {
            return fail(loc, format!("entry outside F_{}", self.f.p()));
        }
        Ok(Matrix::from_row_vecs(self.f, r, cols))
    }

    fn same(&mut self, got: &Matrix, want: &Matrix, loc: &str) -> Check<()> {
        self.ensure(
            got == want,
            || loc.to_string(),
            || "does not match the recomputed value".into(),
        )
    }

    fn same_rows(&mut self, r: &Rows, want: &Matrix, loc: &str) -> Check<()> {
        let got = self.matrix(r, want.rows(), want.cols(), loc)?;
        self.same(&got, want, loc)
    }

    fn lin(&self, coeffs: &[u32], mats: &[Matrix], dim: usize) -> Matrix {
        let mut out = Matrix::zeros(self.f, dim, dim);
        for (&c, m) in coeffs.iter().zip(mats) {
            if c != 0 {
                out = out.add(&m.scale(c));
            }
        }
        out
    }

    fn module(&mut self, d: &ModuleData, loc: &str) -> Check<Mod> {
        let n = self.alg.dim();
        if d.action.len() != n {
            return fail(
                loc,
                format!(
                    "{} action matrices for an algebra of dimension {n}",
                    d.action.len()
                ),
            );
        }
        let act = d
            .action
            .iter()
            .enumerate()
            .map(|(i, a)| self.matrix(a, d.dim, d.dim, &loc_join(loc, format!("action[{i}]"))))
            .collect::<Check<Vec<_>>>()?;
        let unit = self.lin(&self.alg.unit().to_vec(), &act, d.dim);
        self.ensure(
            unit.is_identity(),
            || loc.to_string(),
            || "the unit does not act as the identity".into(),
        )?;
        for i in 0..n {
            for j in 0..n {
                let lhs = act[i].mul(&act[j]);
                let rhs = self.lin(&self.alg.basis_product(i, j), &act, d.dim);
                self.ensure(
                    lhs == rhs,
                    || loc.to_string(),
                    || format!("action is not multiplicative on e{i}*e{j}"),
                )?;
            }
        }
        Ok(Mod { dim: d.dim, act })
    }

    fn module_map(&mut self, g: &Matrix, src: &Mod, tgt: &Mod, loc: &str) -> Check<()> {
        for (i, (a, b)) in src.act.iter().zip(&tgt.act).enumerate() {
            self.ensure(
                g.mul(a) == b.mul(g),
                || loc.to_string(),
                || format!("does not commute with e{i}"),
            )?;
        }
        Ok(())
    }

    fn regular_sum(&self, k: usize) -> Mod {
        let d = self.alg.dim();
        let act = (0..d)
            .map(|i| {
                let l = self.alg.left_mult(&self.alg.basis_vec(i));
                Matrix::block_diag(self.f, &vec![&l; k])
            })
            .collect();
        Mod { dim: k * d, act }
    }

    fn direct_sum(&self, parts: &[Mod]) -> Mod {
        let dim = parts.iter().map(|m| m.dim).sum();
        let act = (0..self.alg.dim())
            .map(|i| {
                let blocks: Vec<&Matrix> = parts.iter().map(|m| &m.act[i]).collect();
                Matrix::block_diag(self.f, &blocks)
            })
            .collect();
        Mod { dim, act }
    }

    // Subspaces.

    fn basis(&mut self, r: &Rows, ambient: usize, loc: &str) -> Check<Basis> {
        let m = self.matrix(r, r.len(), ambient, loc)?;
        let (red, piv) = m.rref();
        self.ensure(
            piv.len() == r.len() && red.to_rows() == *r,
            || loc.to_string(),
            || "basis is not in reduced echelon form".into(),
        )?;
        Ok(Basis {
            ambient,
            rows: r.clone(),
            piv,
        })
    }

    fn span(&self, vecs: &[Vec<u32>], ambient: usize) -> Basis {
        if vecs.is_empty() {
            return Basis {
                ambient,
                rows: Vec::new(),
                piv: Vec::new(),
            };
        }
        let (red, piv) = Matrix::from_row_vecs(self.f, vecs, ambient).rref();
        let rows = red.to_rows().into_iter().take(piv.len()).collect();
        Basis { ambient, rows, piv }
    }

    fn reduce(&self, b: &Basis, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        for (row, &p) in b.rows.iter().zip(&b.piv) {
            let c = w[p];
            if c != 0 {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = self.f.sub(*x, self.f.mul(c, y));
                }
            }
        }
        w
    }

    fn coords(&self, b: &Basis, v: &[u32]) -> Option<Vec<u32>> {
        self.reduce(b, v)
            .iter()
            .all(|&x| x == 0)
            .then(|| b.piv.iter().map(|&p| v[p]).collect())
    }

    fn nonpivots(b: &Basis) -> Vec<usize> {
        (0..b.ambient).filter(|c| !b.piv.contains(c)).collect()
    }

    fn quotient_coords(&self, b: &Basis, v: &[u32]) -> Vec<u32> {
        let w = self.reduce(b, v);
        Self::nonpivots(b).into_iter().map(|c| w[c]).collect()
    }

    fn contains(&self, outer: &Basis, inner: &Basis) -> bool {
        inner.rows.iter().all(|v| self.coords(outer, v).is_some())
    }

    fn basis_matrix(&self, b: &Basis) -> Matrix {
        Matrix::from_cols(self.f, b.ambient, &b.rows)
    }

    fn coords_matrix(&self, outer: &Basis, inner: &Basis) -> Option<Matrix> {
        let cols = inner
            .rows
            .iter()
            .map(|v| self.coords(outer, v))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_cols(self.f, outer.rows.len(), &cols))
    }

    fn unit(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    /// Action on the basis vectors of a stable subspace, or the index of an
    /// element that moves it out.
    fn sub_action(&self, m: &Mod, b: &Basis) -> std::result::Result<Mod, usize> {
        let mut act = Vec::with_capacity(m.act.len());
        for (i, a) in m.act.iter().enumerate() {
            let cols = b
                .rows
                .iter()
                .map(|v| self.coords(b, &a.mul_vec(v)))
                .collect::<Option<Vec<_>>>()
                .ok_or(i)?;
            act.push(Matrix::from_cols(self.f, b.rows.len(), &cols));
        }
        Ok(Mod {
            dim: b.rows.len(),
            act,
        })
    }

    fn stable_sub(&mut self, m: &Mod, b: &Basis, loc: &str) -> Check<Mod> {
        self.checks += 1;
        match self.sub_action(m, b) {
            Ok(s) => Ok(s),
            Err(i) => fail(loc, format!("not stable under e{i}")),
        }
    }

    /// Action on the standard complement, spanned by the non-pivot coordinates.
    fn quotient_action(&self, m: &Mod, b: &Basis) -> Mod {
        let np = Self::nonpivots(b);
        let act = m
            .act
            .iter()
            .map(|a| {
                let cols: Vec<Vec<u32>> = np
                    .iter()
                    .map(|&j| self.quotient_coords(b, &a.col(j)))
                    .collect();
                Matrix::from_cols(self.f, np.len(), &cols)
            })
            .collect();
        Mod { dim: np.len(), act }
    }

    /// `(ambient - dim) x ambient` matrix of the quotient projection.
    fn projection(&self, b: &Basis) -> Matrix {
        let cols: Vec<Vec<u32>> = (0..b.ambient)
            .map(|j| self.quotient_coords(b, &Self::unit(b.ambient, j)))
            .collect();
        Matrix::from_cols(self.f, b.ambient - b.rows.len(), &cols)
    }

    fn same_module(&mut self, d: &ModuleData, want: &Mod, loc: &str) -> Check<()> {
        self.ensure(
            d.dim == want.dim,
            || loc.to_string(),
            || format!("dimension {} but {} recomputed", d.dim, want.dim),
        )?;
        self.ensure(
            d.action.len() == want.act.len(),
            || loc.to_string(),
            || "wrong number of action matrices".into(),
        )?;
        for (i, (r, a)) in d.action.iter().zip(&want.act).enumerate() {
            self.same_rows(r, a, &loc_join(loc, format!("action[{i}]")))?;
        }
        Ok(())
    }

    // Homological invariants.

    /// Minimal generators, greedily from the standard basis, and the cover
    /// `A^k -> M` they define.
    fn free_cover(&self, m: &Mod) -> (Mod, Matrix) {
        let mut gens: Vec<Vec<u32>> = Vec::new();
        let mut span = self.span(&[], m.dim);
        for j in 0..m.dim {
            let e = Self::unit(m.dim, j);
            if self.coords(&span, &e).is_some() {
                continue;
            }
            let mut vecs = span.rows.clone();
            vecs.extend(m.act.iter().map(|a| a.mul_vec(&e)));
            span = self.span(&vecs, m.dim);
            gens.push(e);
        }
        let cols: Vec<Vec<u32>> = gens
            .iter()
            .flat_map(|g| m.act.iter().map(move |a| a.mul_vec(g)))
            .collect();
        (
            self.regular_sum(gens.len()),
            Matrix::from_cols(self.f, m.dim, &cols),
        )
    }

    fn syzygy(&self, m: &Mod) -> Mod {
        let (free, phi) = self.free_cover(m);
        let k = self.span(&phi.kernel_basis(), free.dim);
        self.sub_action(&free, &k)
            .expect("kernels of module maps are submodules")
    }

    /// Projective iff the free cover splits by a module map.
    fn is_projective(&self, p: &Mod) -> bool {
        if p.dim == 0 {
            return true;
        }
        let (free, phi) = self.free_cover(p);
        let (nf, np) = (free.dim, p.dim);
        let unknowns = nf * np;
        let var = |r: usize, c: usize| r * np + c;
        let mut eqs: Vec<Vec<u32>> = Vec::new();
        let mut rhs: Vec<u32> = Vec::new();
        for a in 0..np {
            for c in 0..np {
                let mut row = vec![0; unknowns];
                for r in 0..nf {
                    row[var(r, c)] = phi.get(a, r);
                }
                eqs.push(row);
                rhs.push(u32::from(a == c));
            }
        }
        for (fa, pa) in free.act.iter().zip(&p.act) {
            for r in 0..nf {
                for c in 0..np {
                    let mut row = vec![0; unknowns];
                    for l in 0..np {
                        row[var(r, l)] = self.f.add(row[var(r, l)], pa.get(l, c));
                    }
                    for l in 0..nf {
                        row[var(l, c)] = self.f.sub(row[var(l, c)], fa.get(r, l));
                    }
                    eqs.push(row);
                    rhs.push(0);
                }
            }
        }
        let sys = Matrix::from_row_vecs(self.f, &eqs, unknowns);
        matches!(sys.solve(&rhs), Ok(Some(_)))
    }

    /// Least `i` with the `i`-th syzygy projective, if at most `cutoff`.
    fn pd(&self, m: &Mod, cutoff: usize) -> Option<usize> {
        let mut cur = m.clone();
        for i in 0..=cutoff {
            if self.is_projective(&cur) {
                return Some(i);
            }
            cur = self.syzygy(&cur);
        }
        None
    }

    fn claimed_pd(&mut self, m: &Mod, claimed: usize, n: usize, loc: &str) -> Check<()> {
        let got = self.pd(m, claimed.max(n) + PD_SLACK);
        self.ensure(
            got == Some(claimed),
            || loc.to_string(),
            || match got {
                Some(g) => format!("claimed projective dimension {claimed}, recomputed {g}"),
                None => format!(
                    "claimed projective dimension {claimed}, recomputed above {}",
                    claimed.max(n) + PD_SLACK
                ),
            },
        )?;
        self.ensure(
            claimed <= n,
            || loc.to_string(),
            || format!("projective dimension {claimed} exceeds {n}"),
        )
    }

    /// `maps[0] : P_0 -> target` onto, consecutive composites zero, exact at
    /// every joint, last map injective.
    fn exact_sequence(
        &mut self,
        target_dim: usize,
        dims: &[usize],
        maps: &[Matrix],
        loc: &str,
    ) -> Check<()> {
        let ranks: Vec<usize> = maps.iter().map(Matrix::rank).collect();
        self.ensure(
            ranks[0] == target_dim,
            || loc.to_string(),
            || "does not map onto its target".into(),
        )?;
        for k in 1..maps.len() {
            self.ensure(
                maps[k - 1].mul(&maps[k]).is_zero(),
                || loc.to_string(),
                || format!("maps {} and {k} do not compose to zero", k - 1),
            )?;
            self.ensure(
                ranks[k] + ranks[k - 1] == dims[k - 1],
                || loc.to_string(),
                || format!("not exact at term {}", k - 1),
            )?;
        }
        let last = maps.len() - 1;
        self.ensure(
            ranks[last] == dims[last],
            || loc.to_string(),
            || format!("not injective at term {last}"),
        )
    }

    // Resolutions and subresolutions.

    fn resolution(&mut self, rd: &ResolutionData, loc: &str) -> Check<Res> {
        let target = self.module(&rd.target, &loc_join(loc, "target"))?;
        if rd.terms.is_empty() || rd.terms.len() != rd.maps.len() {
            return fail(loc, "needs one map per term and at least one term");
        }
        let mut terms = Vec::new();
        for (k, summands) in rd.terms.iter().enumerate() {
            let mut parts = Vec::new();
            for (t, s) in summands.iter().enumerate() {
                let l = loc_join(loc, format!("terms[{k}][{t}]"));
                let m = self.module(s, &l)?;
                let proj = self.is_projective(&m);
                self.ensure(proj, || l.clone(), || "summand is not projective".into())?;
                parts.push(m);
            }
            let total = self.direct_sum(&parts);
            terms.push(Term {
                summands: parts.iter().map(|m| m.dim).collect(),
                total,
            });
        }
        let mut maps = Vec::new();
        for (k, r) in rd.maps.iter().enumerate() {
            let l = loc_join(loc, format!("maps[{k}]"));
            let tgt = if k == 0 { &target } else { &terms[k - 1].total };
            let g = self.matrix(r, tgt.dim, terms[k].total.dim, &l)?;
            self.module_map(&g, &terms[k].total, tgt, &l)?;
            maps.push(g);
        }
        let dims: Vec<usize> = terms.iter().map(|t| t.total.dim).collect();
        self.exact_sequence(target.dim, &dims, &maps, loc)?;
        Ok(Res {
            target,
            terms,
            maps,
        })
    }

    fn coordinates(term: &Term, labels: &[usize]) -> Vec<usize> {
        let mut offsets = vec![0];
        for d in &term.summands {
            offsets.push(offsets.last().unwrap() + d);
        }
        labels
            .iter()
            .flat_map(|&t| offsets[t]..offsets[t + 1])
            .collect()
    }

    /// Checks one zig-zag record against its parent and returns `N'`.
    fn record(
        &mut self,
        rec: &SubresolutionRecord,
        table: &[Res],
        m: &Mod,
        kappa: usize,
        loc: &str,
    ) -> Check<Basis> {
        let Some(res) = table.get(rec.parent) else {
            return fail(
                loc_join(loc, "parent"),
                format!("no resolution with index {}", rec.parent),
            );
        };
        self.ensure(
            res.target == *m,
            || loc_join(loc, "parent"),
            || "resolves a different module".into(),
        )?;
        let seed = self.basis(&rec.seed, m.dim, &loc_join(loc, "seed"))?;
        self.stable_sub(m, &seed, &loc_join(loc, "seed"))?;
        let len = res.terms.len();
        if rec.index_sets.len() != len {
            return fail(
                loc_join(loc, "index_sets"),
                format!("{} sets for {len} terms", rec.index_sets.len()),
            );
        }
        for (k, s) in rec.index_sets.iter().enumerate() {
            self.ensure(
                s.windows(2).all(|w| w[0] < w[1])
                    && s.iter().all(|&t| t < res.terms[k].summands.len()),
                || loc_join(loc, format!("index_sets[{k}]")),
                || "not an increasing list of summand labels".into(),
            )?;
        }
        let chosen: Vec<Vec<usize>> = (0..len)
            .map(|k| Self::coordinates(&res.terms[k], &rec.index_sets[k]))
            .collect();
        let rest: Vec<Vec<usize>> = (0..len)
            .map(|k| {
                (0..res.terms[k].total.dim)
                    .filter(|c| !chosen[k].contains(c))
                    .collect()
            })
            .collect();
        let budget = kappa
            * res
                .terms
                .iter()
                .flat_map(|t| t.summands.iter().copied())
                .max()
                .unwrap_or(0)
                .max(1);
        let needed = chosen.iter().map(Vec::len).max().unwrap_or(0);
        self.ensure(
            needed <= budget,
            || loc_join(loc, "index_sets"),
            || format!("{needed} coordinates exceed budget {budget}"),
        )?;
        for k in 1..len {
            let f = &res.maps[k];
            let leaks = chosen[k]
                .iter()
                .any(|&c| rest[k - 1].iter().any(|&r| f.get(r, c) != 0));
            self.ensure(
                !leaks,
                || loc_join(loc, format!("index_sets[{k}]")),
                || "chosen summands map outside the chosen summands one term down".into(),
            )?;
        }
        let target = self.basis(&rec.sub_target, m.dim, &loc_join(loc, "sub_target"))?;
        let image = self.span(&res.maps[0].select_cols(&chosen[0]).columns(), m.dim);
        self.ensure(
            image == target,
            || loc_join(loc, "sub_target"),
            || "is not the image of the chosen summands".into(),
        )?;
        self.ensure(
            self.contains(&target, &seed),
            || loc_join(loc, "seed"),
            || "not contained in the sub-target".into(),
        )?;
        let bm = self.basis_matrix(&target);
        self.same_rows(&rec.inclusion, &bm, &loc_join(loc, "inclusion"))?;

        if rec.sub_maps.len() != len || rec.quotient_maps.len() != len {
            return fail(loc, "needs one restricted and one quotient map per term");
        }
        let coords_t = Matrix::from_fn(self.f, target.rows.len(), m.dim, |i, j| {
            u32::from(target.piv[i] == j)
        });
        let q = self.projection(&target);
        let mut sub_maps = vec![coords_t.mul(&res.maps[0].select_cols(&chosen[0]))];
        let mut quo_maps = vec![q.mul(&res.maps[0].select_cols(&rest[0]))];
        for k in 1..len {
            let f = &res.maps[k];
            sub_maps.push(f.select_rows(&chosen[k - 1]).select_cols(&chosen[k]));
            quo_maps.push(f.select_rows(&rest[k - 1]).select_cols(&rest[k]));
        }
        for k in 0..len {
            self.same_rows(
                &rec.sub_maps[k],
                &sub_maps[k],
                &loc_join(loc, format!("sub_maps[{k}]")),
            )?;
            self.same_rows(
                &rec.quotient_maps[k],
                &quo_maps[k],
                &loc_join(loc, format!("quotient_maps[{k}]")),
            )?;
        }
        let sub_dims: Vec<usize> = chosen.iter().map(Vec::len).collect();
        let quo_dims: Vec<usize> = rest.iter().map(Vec::len).collect();
        self.exact_sequence(
            target.rows.len(),
            &sub_dims,
            &sub_maps,
            &loc_join(loc, "sub_maps"),
        )?;
        let quotient = self.quotient_action(m, &target);
        self.same_module(&rec.quotient, &quotient, &loc_join(loc, "quotient"))?;
        self.exact_sequence(
            quotient.dim,
            &quo_dims,
            &quo_maps,
            &loc_join(loc, "quotient_maps"),
        )?;
        Ok(target)
    }

    fn subresolution(
        &mut self,
        module: &ModuleData,
        seed: &Rows,
        kappa: usize,
        resolutions: &[ResolutionData],
        record: &SubresolutionRecord,
    ) -> Check<()> {
        let m = self.module(module, "statement.module")?;
        let table = self.resolution_table(resolutions)?;
        self.ensure(
            record.seed == *seed,
            || "witness.record.seed".into(),
            || "differs from the stated seed".into(),
        )?;
        let s = self.basis(seed, m.dim, "statement.seed")?;
        self.ensure(
            kappa >= s.rows.len(),
            || "statement.kappa".into(),
            || "below the seed dimension".into(),
        )?;
        self.record(record, &table, &m, kappa, "witness.record")?;
        Ok(())
    }

    fn resolution_table(&mut self, resolutions: &[ResolutionData]) -> Check<Vec<Res>> {
        resolutions
            .iter()
            .enumerate()
            .map(|(i, r)| self.resolution(r, &format!("witness.resolutions[{i}]")))
            .collect()
    }

    // Module filtrations and pure closures.

    fn module_filtration(
        &mut self,
        module: &ModuleData,
        n: usize,
        kappa: usize,
        resolutions: &[ResolutionData],
        steps: &[ModuleStepRecord],
    ) -> Check<()> {
        let m = self.module(module, "statement.module")?;
        let table = self.resolution_table(resolutions)?;
        let mut prev = self.span(&[], m.dim);
        for (a, st) in steps.iter().enumerate() {
            let loc = format!("witness.steps[{a}]");
            let sub = self.basis(&st.sub, m.dim, &loc_join(&loc, "sub"))?;
            let mid = self.stable_sub(&m, &sub, &loc_join(&loc, "sub"))?;
            self.ensure(
                self.contains(&sub, &prev) && sub.rows.len() > prev.rows.len(),
                || loc_join(&loc, "sub"),
                || "does not strictly contain the previous step".into(),
            )?;
            self.same_module(&st.module, &mid, &loc_join(&loc, "module"))?;
            let incl = self
                .coords_matrix(&sub, &prev)
                .expect("containment checked");
            self.same_rows(&st.inclusion, &incl, &loc_join(&loc, "inclusion"))?;
            let inner = self.span(&incl.columns(), sub.rows.len());
            let quotient = self.quotient_action(&mid, &inner);
            self.same_module(&st.quotient, &quotient, &loc_join(&loc, "quotient"))?;
            self.ensure(
                quotient.dim <= kappa,
                || loc_join(&loc, "quotient"),
                || format!("dimension {} exceeds {kappa}", quotient.dim),
            )?;
            self.claimed_pd(&quotient, st.quotient_pd, n, &loc_join(&loc, "quotient_pd"))?;
            if let Some(rec) = &st.zigzag {
                let rl = loc_join(&loc, "zigzag");
                let above = self.quotient_action(&m, &prev);
                let target = self.record(rec, &table, &above, kappa, &rl)?;
                let q = self.projection(&prev);
                let q2 = self.projection(&target).mul(&q);
                let pulled = self.span(&q2.kernel_basis(), m.dim);
                self.ensure(
                    pulled == sub,
                    || loc_join(&rl, "sub_target"),
                    || "does not pull back to this step".into(),
                )?;
            }
            prev = sub;
        }
        self.ensure(
            prev.rows.len() == m.dim,
            || "witness.steps".into(),
            || "the last step is not the whole module".into(),
        )
    }

    fn pure_closure(
        &mut self,
        module: &ModuleData,
        seed: &Rows,
        kappa: usize,
        sub: &Rows,
        smod: &ModuleData,
        retraction: &Rows,
    ) -> Check<()> {
        let f = self.module(module, "statement.module")?;
        let s0 = self.basis(seed, f.dim, "statement.seed")?;
        let s = self.basis(sub, f.dim, "witness.sub")?;
        let sm = self.stable_sub(&f, &s, "witness.sub")?;
        self.ensure(
            self.contains(&s, &s0),
            || "witness.sub".into(),
            || "does not contain the seed".into(),
        )?;
        self.ensure(
            s.rows.len() <= kappa,
            || "witness.sub".into(),
            || format!("dimension {} exceeds {kappa}", s.rows.len()),
        )?;
        self.same_module(smod, &sm, "witness.module")?;
        let r = self.matrix(retraction, sm.dim, f.dim, "witness.retraction")?;
        self.module_map(&r, &f, &sm, "witness.retraction")?;
        let id = r.mul(&self.basis_matrix(&s)).is_identity();
        self.ensure(
            id,
            || "witness.retraction".into(),
            || "does not restrict to the identity".into(),
        )
    }

    // Complexes.

    fn complex(&mut self, c: &ComplexData, loc: &str) -> Check<Cx> {
        if c.modules.is_empty() || c.boundaries.len() + 1 != c.modules.len() {
            return fail(
                loc,
                "needs at least one term and one boundary between consecutive terms",
            );
        }
        let mods = c
            .modules
            .iter()
            .enumerate()
            .map(|(i, m)| self.module(m, &loc_join(loc, format!("degree {}", c.lo + i as i64))))
            .collect::<Check<Vec<_>>>()?;
        let mut d = Vec::new();
        for (i, r) in c.boundaries.iter().enumerate() {
            let l = loc_join(loc, format!("boundary from degree {}", c.lo + i as i64 + 1));
            let g = self.matrix(r, mods[i].dim, mods[i + 1].dim, &l)?;
            self.module_map(&g, &mods[i + 1], &mods[i], &l)?;
            d.push(g);
        }
        for i in 1..d.len() {
            let deg = c.lo + i as i64 + 1;
            self.ensure(
                d[i - 1].mul(&d[i]).is_zero(),
                || loc.to_string(),
                || format!("boundary squares to nonzero at degree {deg}"),
            )?;
        }
        Ok(Cx { lo: c.lo, mods, d })
    }

    fn same_complex(&mut self, c: &ComplexData, want: &Cx, loc: &str) -> Check<()> {
        self.ensure(
            c.lo == want.lo && c.modules.len() == want.len() && c.boundaries.len() == want.d.len(),
            || loc.to_string(),
            || "support differs from the recomputed complex".into(),
        )?;
        for (i, (m, w)) in c.modules.iter().zip(&want.mods).enumerate() {
            self.same_module(
                m,
                w,
                &loc_join(loc, format!("degree {}", want.lo + i as i64)),
            )?;
        }
        for (i, (r, w)) in c.boundaries.iter().zip(&want.d).enumerate() {
            self.same_rows(
                r,
                w,
                &loc_join(
                    loc,
                    format!("boundary from degree {}", want.lo + i as i64 + 1),
                ),
            )?;
        }
        Ok(())
    }

    /// Degrees where the complex fails to be exact.
    fn inexact_degrees(&self, x: &Cx) -> Vec<i64> {
        (0..x.len())
            .filter(|&i| {
                let out = x.out(i, self.f).rank();
                let inc = if i + 1 < x.len() { x.d[i].rank() } else { 0 };
                out + inc != x.mods[i].dim
            })
            .map(|i| x.lo + i as i64)
            .collect()
    }

    /// Checks `subs` is a subcomplex and returns it with its bases.
    fn subcomplex(&mut self, x: &Cx, subs: &[Rows], loc: &str) -> Check<(Vec<Basis>, Cx)> {
        if subs.len() != x.len() {
            return fail(
                loc,
                format!("{} subspaces for {} degrees", subs.len(), x.len()),
            );
        }
        let mut bases = Vec::new();
        let mut mods = Vec::new();
        for (i, r) in subs.iter().enumerate() {
            let l = loc_join(loc, format!("degree {}", x.lo + i as i64));
            let b = self.basis(r, x.mods[i].dim, &l)?;
            mods.push(self.stable_sub(&x.mods[i], &b, &l)?);
            bases.push(b);
        }
        let mut d = Vec::new();
        for i in 1..x.len() {
            let l = loc_join(loc, format!("degree {}", x.lo + i as i64));
            let img: Option<Vec<Vec<u32>>> = bases[i]
                .rows
                .iter()
                .map(|v| self.coords(&bases[i - 1], &x.d[i - 1].mul_vec(v)))
                .collect();
            let Some(cols) = img else {
                self.checks += 1;
                return fail(l, "boundary leaves the subcomplex");
            };
            d.push(Matrix::from_cols(self.f, bases[i - 1].rows.len(), &cols));
        }
        Ok((bases, Cx { lo: x.lo, mods, d }))
    }

    fn quotient_complex(&self, x: &Cx, bases: &[Basis]) -> Cx {
        let mods = x
            .mods
            .iter()
            .zip(bases)
            .map(|(m, b)| self.quotient_action(m, b))
            .collect();
        let d = (1..x.len())
            .map(|i| {
                let np = Self::nonpivots(&bases[i]);
                let cols: Vec<Vec<u32>> = np
                    .iter()
                    .map(|&j| self.quotient_coords(&bases[i - 1], &x.d[i - 1].col(j)))
                    .collect();
                Matrix::from_cols(self.f, x.mods[i - 1].dim - bases[i - 1].rows.len(), &cols)
            })
            .collect();
        Cx { lo: x.lo, mods, d }
    }

    fn complex_filtration(
        &mut self,
        complex: &ComplexData,
        class: FiltrationKind,
        n: usize,
        kappa: usize,
        steps: &[ComplexStepRecord],
    ) -> Check<()> {
        let x = self.complex(complex, "statement.complex")?;
        if class == FiltrationKind::Ex {
            let bad = self.inexact_degrees(&x);
            self.ensure(
                bad.is_empty(),
                || "statement.complex".into(),
                || {
                    format!(
                        "not exact in degree {}",
                        bad.first().copied().unwrap_or_default()
                    )
                },
            )?;
        }
        let mut prev: Vec<Basis> = x.mods.iter().map(|m| self.span(&[], m.dim)).collect();
        for (a, st) in steps.iter().enumerate() {
            let loc = format!("witness.steps[{a}]");
            let (bases, mid) = self.subcomplex(&x, &st.subs, &loc_join(&loc, "subs"))?;
            for (i, (b, p)) in bases.iter().zip(&prev).enumerate() {
                let deg = x.lo + i as i64;
                self.ensure(
                    self.contains(b, p),
                    || format!("{loc}.subs, degree {deg}"),
                    || "does not contain the previous step".into(),
                )?;
            }
            let grew = bases
                .iter()
                .zip(&prev)
                .any(|(b, p)| b.rows.len() > p.rows.len());
            self.ensure(grew, || loc.clone(), || "step adds nothing".into())?;
            self.same_complex(&st.sub, &mid, &loc_join(&loc, "sub"))?;
            if st.inclusion.len() != x.len() {
                return fail(
                    loc_join(&loc, "inclusion"),
                    "needs one component per degree",
                );
            }
            let mut inner = Vec::new();
            for (i, (b, p)) in bases.iter().zip(&prev).enumerate() {
                let deg = x.lo + i as i64;
                let incl = self.coords_matrix(b, p).expect("containment checked");
                self.same_rows(
                    &st.inclusion[i],
                    &incl,
                    &format!("{loc}.inclusion, degree {deg}"),
                )?;
                inner.push(self.span(&incl.columns(), b.rows.len()));
            }
            let quotient = self.quotient_complex(&mid, &inner);
            self.same_complex(&st.quotient, &quotient, &loc_join(&loc, "quotient"))?;
            if st.quotient_pd.len() != x.len() {
                return fail(loc_join(&loc, "quotient_pd"), "needs one entry per degree");
            }
            for (i, q) in quotient.mods.iter().enumerate() {
                let deg = x.lo + i as i64;
                self.ensure(
                    q.dim <= kappa,
                    || format!("{loc}.quotient, degree {deg}"),
                    || format!("dimension {} exceeds {kappa}", q.dim),
                )?;
                self.claimed_pd(
                    q,
                    st.quotient_pd[i],
                    n,
                    &format!("{loc}.quotient_pd, degree {deg}"),
                )?;
            }
            let sub_exact = self.inexact_degrees(&mid).is_empty();
            let quo_exact = self.inexact_degrees(&quotient).is_empty();
            self.ensure(
                st.sub_exact == sub_exact,
                || loc_join(&loc, "sub_exact"),
                || format!("recomputed {sub_exact}"),
            )?;
            self.ensure(
                st.quotient_exact == quo_exact,
                || loc_join(&loc, "quotient_exact"),
                || format!("recomputed {quo_exact}"),
            )?;
            if class == FiltrationKind::Ex {
                self.ensure(
                    sub_exact && quo_exact,
                    || loc.clone(),
                    || "step or quotient is not exact".into(),
                )?;
            }
            prev = bases;
        }
        for (i, (b, m)) in prev.iter().zip(&x.mods).enumerate() {
            let deg = x.lo + i as i64;
            self.ensure(
                b.rows.len() == m.dim,
                || format!("witness.steps, degree {deg}"),
                || "the last step is not the whole complex".into(),
            )?;
        }
        Ok(())
    }

    fn staircase(
        &mut self,
        complex: &ComplexData,
        st: &StairStatement<'_>,
        w: &StairWitness<'_>,
    ) -> Check<()> {
        let x = self.complex(complex, "statement.complex")?;
        let bad = self.inexact_degrees(&x);
        self.ensure(
            bad.is_empty(),
            || "statement.complex".into(),
            || {
                format!(
                    "not exact in degree {}",
                    bad.first().copied().unwrap_or_default()
                )
            },
        )?;
        self.ensure(
            st.kappa > 0,
            || "statement.kappa".into(),
            || "budget must be positive".into(),
        )?;
        let idx = st.degree - x.lo;
        self.ensure(
            st.degree >= x.lo && st.degree <= x.hi(),
            || "statement.degree".into(),
            || "outside the support".into(),
        )?;
        let idx = idx as usize;
        self.ensure(
            st.element.len() == x.mods[idx].dim
                && st.element.iter().all(|&c| c < self.f.p())
                && st.element.iter().any(|&c| c != 0),
            || "statement.element".into(),
            || "not a nonzero vector of the term".into(),
        )?;
        let support: Vec<i64> = (x.lo..=x.hi()).collect();
        match parse_schedule(st.schedule) {
            None => {
                return fail(
                    "statement.schedule",
                    format!("cannot read `{}`", st.schedule),
                )
            }
            Some(Some(degs)) => {
                let missing = support.iter().find(|m| !degs.contains(m));
                self.ensure(
                    missing.is_none(),
                    || "statement.schedule".into(),
                    || format!("never visits degree {}", missing.unwrap()),
                )?;
            }
            Some(None) => {}
        }

        let (bases, y) = self.subcomplex(&x, w.subs, "witness.subs")?;
        let hit = self.coords(&bases[idx], st.element).is_some();
        self.ensure(
            hit,
            || format!("witness.subs, degree {}", st.degree),
            || "does not contain the element".into(),
        )?;
        self.same_complex(w.sub, &y, "witness.sub")?;
        let q = self.quotient_complex(&x, &bases);
        self.same_complex(w.quotient, &q, "witness.quotient")?;
        for (what, c) in [("witness.sub", &y), ("witness.quotient", &q)] {
            let bad = self.inexact_degrees(c);
            self.ensure(
                bad.is_empty(),
                || what.into(),
                || {
                    format!(
                        "not exact in degree {}",
                        bad.first().copied().unwrap_or_default()
                    )
                },
            )?;
        }
        for (what, claims, c) in [
            ("witness.sub_pd", w.sub_pd, &y),
            ("witness.quotient_pd", w.quotient_pd, &q),
        ] {
            if claims.len() != x.len() {
                return fail(what, "needs one entry per degree");
            }
            for (i, m) in c.mods.iter().enumerate() {
                self.claimed_pd(
                    m,
                    claims[i],
                    st.n,
                    &format!("{what}, degree {}", x.lo + i as i64),
                )?;
            }
        }
        let card: usize = bases.iter().map(|b| b.rows.len()).sum();
        let budget = st.kappa * x.len();
        self.ensure(
            w.card == card,
            || "witness.card".into(),
            || format!("recomputed {card}"),
        )?;
        self.ensure(
            w.budget == budget,
            || "witness.budget".into(),
            || format!("recomputed {budget}"),
        )?;
        self.ensure(
            card <= budget,
            || "witness.card".into(),
            || format!("{card} exceeds the budget {budget}"),
        )?;

        if let Some(ladder) = w.ladder {
            self.ladder(ladder, &x, &bases, st)?;
        }
        self.audit(w.audit, st.track)
    }

    fn ladder(
        &mut self,
        ladder: &[LadderRecord],
        x: &Cx,
        bases: &[Basis],
        st: &StairStatement<'_>,
    ) -> Check<()> {
        if ladder.is_empty() {
            return fail("witness.ladder", "empty");
        }
        let order = visit_order(st.schedule, st.degree, x.lo, x.hi(), ladder.len());
        for (t, (step, want)) in ladder.iter().zip(&order).enumerate() {
            self.ensure(
                step.degree == *want,
                || format!("witness.ladder[{t}].degree"),
                || format!("the schedule visits degree {want} here"),
            )?;
        }
        let mut prev = vec![0; x.len()];
        for (t, step) in ladder.iter().enumerate() {
            let loc = format!("witness.ladder[{t}]");
            self.ensure(
                step.degree >= x.lo && step.degree <= x.hi() && step.dims.len() == x.len(),
                || loc.clone(),
                || "degree or dimension list outside the support".into(),
            )?;
            let at = (step.degree - x.lo) as usize;
            let ok = step
                .dims
                .iter()
                .zip(&prev)
                .enumerate()
                .all(|(i, (&d, &p))| d <= x.mods[i].dim && if i == at { d >= p } else { d == p });
            self.ensure(
                ok,
                || loc.clone(),
                || "only the visited degree may grow, and never shrink".into(),
            )?;
            prev = step.dims.clone();
        }
        let dims: Vec<usize> = bases.iter().map(|b| b.rows.len()).collect();
        self.ensure(
            prev == dims,
            || "witness.ladder".into(),
            || "does not end at the subcomplex".into(),
        )
    }

    fn audit(&mut self, audit: &AuditRecord, track: Track) -> Check<()> {
        for op in &audit.operations {
            let known = KNOWN_OPERATIONS.iter().any(|(o, _)| o == op);
            self.ensure(
                known,
                || "witness.audit.operations".into(),
                || format!("unknown operation `{op}`"),
            )?;
        }
        let expected: Vec<String> = audit
            .operations
            .iter()
            .filter(|op| KNOWN_OPERATIONS.iter().any(|(o, n)| o == op && *n))
            .cloned()
            .collect();
        self.ensure(
            audit.noetherian == expected,
            || "witness.audit.noetherian".into(),
            || format!("expected {expected:?}"),
        )?;
        let uses = |op: &str| audit.operations.iter().any(|o| o == op);
        let consistent = match track {
            Track::Projective => uses("zigzag_subresolution") && !uses("flat_zigzag_subresolution"),
            Track::Flat => uses("flat_zigzag_subresolution") && !uses("zigzag_subresolution"),
        };
        self.ensure(
            consistent,
            || "witness.audit.operations".into(),
            || "do not match the track".into(),
        )?;
        self.ensure(
            track == Track::Projective || audit.noetherian.is_empty(),
            || "witness.audit.noetherian".into(),
            || "the flat track used an operation that needs the noetherian hypothesis".into(),
        )
    }
}

/// `Some(None)` for the default schedule, `Some(Some(degrees))` for a cyclic one.
fn parse_schedule(s: &str) -> Option<Option<Vec<i64>>> {
    if s == "default" {
        return Some(None);
    }
    let degs = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().ok())
        .collect::<Option<Vec<_>>>()?;
    (!degs.is_empty()).then_some(Some(degs))
}

/// The first `count` degrees the schedule visits inside `[lo, hi]`; `start`
/// must lie in that range.
fn visit_order(schedule: &str, start: i64, lo: i64, hi: i64, count: usize) -> Vec<i64> {
    let inside = |m: &i64| (lo..=hi).contains(m);
    match parse_schedule(schedule) {
        Some(Some(degs)) => degs
            .into_iter()
            .cycle()
            .filter(inside)
            .take(count)
            .collect(),
        _ => {
            // Walk 0, -1, 0, 1, 0, -1, -2, ... one step at a time between turning points.
            let mut out = vec![start];
            let (mut pos, mut r) = (0i64, 1i64);
            'walk: loop {
                for turn in [-r, r] {
                    while pos != turn {
                        pos += (turn - pos).signum();
                        out.push(start + pos);
                        if out.iter().filter(|m| inside(m)).count() >= count {
                            break 'walk;
                        }
                    }
                }
                r += 1;
            }
            out.into_iter().filter(inside).take(count).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_zigzag::default_offsets;

    #[test]
    fn default_visit_order_matches_the_walk() {
        for (start, lo, hi) in [(0, 0, 3), (2, 0, 3), (1, -1, 1)] {
            let want: Vec<i64> = default_offsets()
                .map(|o| start + o)
                .filter(|m| (lo..=hi).contains(m))
                .take(30)
                .collect();
            assert_eq!(visit_order("default", start, lo, hi, 30), want);
        }
        assert_eq!(visit_order("3,0,1", 0, 0, 1, 4), vec![0, 1, 0, 1]);
    }
}
