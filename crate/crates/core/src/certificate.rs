//! Serialized certificates for subresolutions, filtrations, pure closures and
//! staircases, plus the single-field mutation operator used to exercise the
//! checker.
//!
//! A certificate has three parts: the algebra, a statement (the inputs and
//! parameters of the claim), and a witness. The digest binds the statement
//! and the algebra; every witness field is re-derived by the checker.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::algebra::{Algebra, AlgebraSpec};
use crate::complex::ChainComplex;
use crate::complex_zigzag::{ComplexFiltration, FiltrationKind, Staircase, Track};
use crate::error::{Error, Result};
use crate::homological::proj_dim;
use crate::matrix::Matrix;
use crate::module::{Module, ModuleMap};
use crate::resolution::DecomposedResolution;
use crate::subspace::Subspace;
use crate::zigzag::{ModuleFiltration, PureClosure, Subresolution};

pub const FORMAT: &str = "cotorsion-certificate/1";

/// Matrix rows; the column count comes from context.
pub type Rows = Vec<Vec<u32>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every witness, including zig-zag runs and the staircase ladder.
    #[default]
    Full,
    /// Only what the class claims need.
    Compact,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "compact" => Ok(Mode::Compact),
            _ => Err(Error::MalformedSpec(format!(
                "unknown certificate mode `{s}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleData {
    pub dim: usize,
    pub action: Vec<Rows>,
}

/// `boundaries[i]` maps degree `lo+i+1` to degree `lo+i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexData {
    pub lo: i64,
    pub modules: Vec<ModuleData>,
    pub boundaries: Vec<Rows>,
}

/// `maps[0] : P_0 -> M`, `maps[k] : P_k -> P_{k-1}`; each term is the direct
/// sum of its listed summands in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionData {
    pub target: ModuleData,
    pub terms: Vec<Vec<ModuleData>>,
    pub maps: Vec<Rows>,
}

/// Sub-sequence of a resolution on index subsets and the induced quotient
/// sequence. Subspaces are reduced echelon bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubresolutionRecord {
    /// Position of the parent in the resolution table.
    pub parent: usize,
    pub seed: Rows,
    pub index_sets: Vec<Vec<usize>>,
    pub sub_target: Rows,
    /// `N' -> M`.
    pub inclusion: Rows,
    /// Restricted maps; `sub_maps[0]` lands in the coordinates of `N'`.
    pub sub_maps: Vec<Rows>,
    pub quotient: ModuleData,
    /// Maps on the complementary summands; `quotient_maps[0]` lands in `M/N'`.
    pub quotient_maps: Vec<Rows>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleStepRecord {
    /// `M_{a+1}` as a subspace of `M`.
    pub sub: Rows,
    /// `M_{a+1}` on that basis.
    pub module: ModuleData,
    /// `M_a -> M_{a+1}` in basis coordinates.
    pub inclusion: Rows,
    pub quotient: ModuleData,
    pub quotient_pd: usize,
    /// Zig-zag run on `M / M_a` whose cokernel target pulls back to `M_{a+1}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zigzag: Option<SubresolutionRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexStepRecord {
    pub subs: Vec<Rows>,
    pub sub: ComplexData,
    /// Components of `X^a -> X^{a+1}` by degree.
    pub inclusion: Vec<Rows>,
    pub quotient: ComplexData,
    pub quotient_pd: Vec<usize>,
    pub sub_exact: bool,
    pub quotient_exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderRecord {
    pub degree: i64,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub operations: Vec<String>,
    pub noetherian: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Statement {
    Subresolution {
        module: ModuleData,
        seed: Rows,
        kappa: usize,
    },
    ModuleFiltration {
        module: ModuleData,
        n: usize,
        kappa: usize,
    },
    PureClosure {
        module: ModuleData,
        seed: Rows,
        kappa: usize,
    },
    ComplexFiltration {
        complex: ComplexData,
        class: FiltrationKind,
        n: usize,
        kappa: usize,
    },
    Staircase {
        complex: ComplexData,
        degree: i64,
        element: Vec<u32>,
        track: Track,
        schedule: String,
        n: usize,
        kappa: usize,
    },
}

impl Statement {
    pub fn kind(&self) -> &'static str {
        match self {
            Statement::Subresolution { .. } => "subresolution",
            Statement::ModuleFiltration { .. } => "module_filtration",
            Statement::PureClosure { .. } => "pure_closure",
            Statement::ComplexFiltration { .. } => "complex_filtration",
            Statement::Staircase { .. } => "staircase",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Subresolution {
        resolutions: Vec<ResolutionData>,
        record: SubresolutionRecord,
    },
    ModuleFiltration {
        #[serde(default)]
        resolutions: Vec<ResolutionData>,
        steps: Vec<ModuleStepRecord>,
    },
    PureClosure {
        sub: Rows,
        module: ModuleData,
        /// `F -> S` in the coordinates of `S`, restricting to the identity on `S`.
        retraction: Rows,
    },
    ComplexFiltration {
        steps: Vec<ComplexStepRecord>,
    },
    Staircase {
        subs: Vec<Rows>,
        sub: ComplexData,
        quotient: ComplexData,
        sub_pd: Vec<usize>,
        quotient_pd: Vec<usize>,
        card: usize,
        budget: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ladder: Option<Vec<LadderRecord>>,
        audit: AuditRecord,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub algebra: AlgebraSpec,
    pub statement: Statement,
    pub digest: String,
    pub witness: Witness,
}

/// SHA-256 over the format tag, algebra and statement.
pub fn statement_digest(format: &str, algebra: &AlgebraSpec, statement: &Statement) -> String {
    let bytes = serde_json::to_vec(&(format, algebra, statement)).expect("statement serializes");
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Certificate {
    fn sealed(algebra: &Algebra, statement: Statement, witness: Witness) -> Self {
        let algebra = algebra.to_spec();
        let digest = statement_digest(FORMAT, &algebra, &statement);
        Self {
            format: FORMAT.to_string(),
            algebra,
            statement,
            digest,
            witness,
        }
    }

    /// Recomputes the digest after the statement was edited on purpose.
    pub fn reseal(&mut self) {
        self.digest = statement_digest(&self.format, &self.algebra, &self.statement);
    }

    pub fn kind(&self) -> &'static str {
        self.statement.kind()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn subresolution(z: &Subresolution) -> Self {
        let alg = z.parent.target().algebra();
        let statement = Statement::Subresolution {
            module: module_data(z.parent.target()),
            seed: rows(&z.seed),
            kappa: z.kappa,
        };
        let witness = Witness::Subresolution {
            resolutions: vec![resolution_data(&z.parent)],
            record: subresolution_record(z, 0),
        };
        Self::sealed(alg, statement, witness)
    }

    pub fn module_filtration(filt: &ModuleFiltration, mode: Mode) -> Self {
        let m = &filt.module;
        let mut resolutions = Vec::new();
        let mut steps = Vec::new();
        let mut prev = Subspace::zero(m.field(), m.dim());
        for st in &filt.steps {
            let (mid, _) = m.submodule_unchecked(&st.sub);
            let inclusion = coords_matrix(&st.sub, &prev);
            let inner = st.sub.relative(&prev).expect("chain is increasing");
            let (quotient, _) = mid.quotient_unchecked(&inner);
            let quotient_pd =
                proj_dim(&quotient, filt.n).expect("filtration quotients lie in the class");
            let zigzag = (mode == Mode::Full).then(|| {
                resolutions.push(resolution_data(&st.zigzag.parent));
                subresolution_record(&st.zigzag, resolutions.len() - 1)
            });
            steps.push(ModuleStepRecord {
                sub: rows(&st.sub),
                module: module_data(&mid),
                inclusion: matrix_rows(&inclusion),
                quotient: module_data(&quotient),
                quotient_pd,
                zigzag,
            });
            prev = st.sub.clone();
        }
        let statement = Statement::ModuleFiltration {
            module: module_data(m),
            n: filt.n,
            kappa: filt.kappa,
        };
        Self::sealed(
            m.algebra(),
            statement,
            Witness::ModuleFiltration { resolutions, steps },
        )
    }

    pub fn pure_closure(f: &Module, pc: &PureClosure, kappa: usize) -> Self {
        let (s, _) = f.submodule_unchecked(&pc.sub);
        let statement = Statement::PureClosure {
            module: module_data(f),
            seed: rows(&pc.seed),
            kappa,
        };
        let witness = Witness::PureClosure {
            sub: rows(&pc.sub),
            module: module_data(&s),
            retraction: matrix_rows(pc.retraction.matrix()),
        };
        Self::sealed(f.algebra(), statement, witness)
    }

    pub fn complex_filtration(filt: &ComplexFiltration) -> Self {
        let x = &filt.complex;
        let mut prev = x.zero_subcomplex();
        let mut steps = Vec::new();
        for st in &filt.steps {
            let (mid, _) = x.subcomplex_unchecked(&st.subs);
            let inner: Vec<Subspace> = st
                .subs
                .iter()
                .zip(&prev)
                .map(|(o, s)| o.relative(s).expect("chain is increasing"))
                .collect();
            let (quotient, _) = mid.quotient_unchecked(&inner);
            let quotient_pd = quotient
                .modules()
                .iter()
                .map(|q| proj_dim(q, filt.n).expect("filtration quotients lie in the class"))
                .collect();
            steps.push(ComplexStepRecord {
                subs: st.subs.iter().map(rows).collect(),
                sub: complex_data(&mid),
                inclusion: st
                    .subs
                    .iter()
                    .zip(&prev)
                    .map(|(o, s)| matrix_rows(&coords_matrix(o, s)))
                    .collect(),
                quotient_exact: quotient.is_exact(),
                sub_exact: mid.is_exact(),
                quotient: complex_data(&quotient),
                quotient_pd,
            });
            prev = st.subs.clone();
        }
        let statement = Statement::ComplexFiltration {
            complex: complex_data(x),
            class: filt.kind,
            n: filt.n,
            kappa: filt.kappa,
        };
        Self::sealed(x.algebra(), statement, Witness::ComplexFiltration { steps })
    }

    pub fn staircase(s: &Staircase, mode: Mode) -> Self {
        let x = &s.complex;
        let pds = |c: &ChainComplex| -> Vec<usize> {
            c.modules()
                .iter()
                .map(|m| proj_dim(m, s.n).expect("staircase terms lie in the class"))
                .collect()
        };
        let ladder = (mode == Mode::Full).then(|| {
            s.ladder
                .iter()
                .map(|l| LadderRecord {
                    degree: l.degree,
                    dims: l.dims.clone(),
                })
                .collect()
        });
        let statement = Statement::Staircase {
            complex: complex_data(x),
            degree: s.degree,
            element: s.element.clone(),
            track: s.track,
            schedule: s.schedule.to_string(),
            n: s.n,
            kappa: s.kappa,
        };
        let witness = Witness::Staircase {
            subs: s.subs.iter().map(rows).collect(),
            sub: complex_data(&s.sub),
            quotient: complex_data(&s.quotient),
            sub_pd: pds(&s.sub),
            quotient_pd: pds(&s.quotient),
            card: s.card(),
            budget: s.budget(),
            ladder,
            audit: AuditRecord {
                operations: s.audit.operations.clone(),
                noetherian: s.audit.noetherian.clone(),
            },
        };
        Self::sealed(x.algebra(), statement, witness)
    }
}

fn rows(s: &Subspace) -> Rows {
    s.basis().to_vec()
}

fn matrix_rows(m: &Matrix) -> Rows {
    m.to_rows()
}

pub fn module_data(m: &Module) -> ModuleData {
    ModuleData {
        dim: m.dim(),
        action: m.actions().iter().map(matrix_rows).collect(),
    }
}

pub fn complex_data(x: &ChainComplex) -> ComplexData {
    ComplexData {
        lo: x.lo(),
        modules: x.modules().iter().map(module_data).collect(),
        boundaries: ((x.lo() + 1)..=x.hi())
            .map(|m| matrix_rows(&x.boundary(m)))
            .collect(),
    }
}

pub fn resolution_data(r: &DecomposedResolution) -> ResolutionData {
    ResolutionData {
        target: module_data(r.target()),
        terms: r
            .terms()
            .iter()
            .map(|t| {
                (0..t.len())
                    .map(|i| module_data(t.summand_module(i)))
                    .collect()
            })
            .collect(),
        maps: r
            .maps()
            .iter()
            .map(ModuleMap::matrix)
            .map(matrix_rows)
            .collect(),
    }
}

/// Columns are the coordinates of `inner`'s basis in `outer`'s basis.
fn coords_matrix(outer: &Subspace, inner: &Subspace) -> Matrix {
    let cols: Vec<Vec<u32>> = inner
        .basis()
        .iter()
        .map(|v| outer.coords(v).expect("inner lies in outer"))
        .collect();
    Matrix::from_cols(outer.field(), outer.dim(), &cols)
}

fn subresolution_record(z: &Subresolution, parent: usize) -> SubresolutionRecord {
    let res = &z.parent;
    let m = res.target();
    let len = res.length();
    let coords: Vec<Vec<usize>> = (0..=len)
        .map(|k| res.term(k).coordinates(&z.index_sets[k]))
        .collect();
    let complements: Vec<Vec<usize>> = (0..=len)
        .map(|k| {
            let chosen: BTreeSet<usize> = coords[k].iter().copied().collect();
            (0..res.term(k).dim())
                .filter(|c| !chosen.contains(c))
                .collect()
        })
        .collect();
    let f0 = res.map(0).matrix();
    let (qmod, qmap) = m.quotient_unchecked(&z.sub_target);
    let mut sub_maps = vec![matrix_rows(
        &z.sub_target
            .coords_matrix()
            .mul(&f0.select_cols(&coords[0])),
    )];
    let mut quotient_maps = vec![matrix_rows(
        &qmap.matrix().mul(&f0.select_cols(&complements[0])),
    )];
    for k in 1..=len {
        let f = res.map(k).matrix();
        sub_maps.push(matrix_rows(
            &f.select_rows(&coords[k - 1]).select_cols(&coords[k]),
        ));
        quotient_maps.push(matrix_rows(
            &f.select_rows(&complements[k - 1])
                .select_cols(&complements[k]),
        ));
    }
    SubresolutionRecord {
        parent,
        seed: rows(&z.seed),
        index_sets: z
            .index_sets
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect(),
        sub_target: rows(&z.sub_target),
        inclusion: matrix_rows(&z.sub_target.basis_matrix()),
        sub_maps,
        quotient: module_data(&qmod),
        quotient_maps,
    }
}

/// One corrupted field: where, and the values before and after.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mutation {
    pub path: String,
    pub before: Value,
    pub after: Value,
}

/// Keys whose numeric entries are field elements.
const FIELD_KEYS: &[&str] = &[
    "action",
    "boundaries",
    "maps",
    "inclusion",
    "seed",
    "sub_target",
    "subs",
    "sub",
    "sub_maps",
    "quotient_maps",
    "retraction",
    "element",
    "mul",
    "unit",
    "idempotents",
];

#[derive(Clone, Debug)]
enum Seg {
    Key(String),
    Index(usize),
}

fn leaves(v: &Value, path: &mut Vec<Seg>, out: &mut Vec<Vec<Seg>>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if k == "kind" || k == "format" {
                    continue;
                }
                path.push(Seg::Key(k.clone()));
                leaves(x, path, out);
                path.pop();
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                path.push(Seg::Index(i));
                leaves(x, path, out);
                path.pop();
            }
        }
        Value::Null => {}
        _ => out.push(path.clone()),
    }
}

fn render(path: &[Seg]) -> String {
    let mut s = String::new();
    for seg in path {
        match seg {
            Seg::Key(k) => {
                if !s.is_empty() {
                    s.push('.');
                }
                s.push_str(k);
            }
            Seg::Index(i) => s.push_str(&format!("[{i}]")),
        }
    }
    s
}

fn nearest_key(path: &[Seg]) -> &str {
    path.iter()
        .rev()
        .find_map(|s| match s {
            Seg::Key(k) => Some(k.as_str()),
            Seg::Index(_) => None,
        })
        .unwrap_or("")
}

/// Changes one leaf of a serialized certificate so that it no longer says the
/// same thing: field elements move by one mod p, budgets and class indices
/// drop by one (or rise from zero), other integers move by one, booleans
/// flip, enum strings swap to another variant, other strings are altered.
pub fn mutate(cert: &mut Value, rng: &mut impl Rng) -> Option<Mutation> {
    let p = cert
        .get("algebra")
        .and_then(|a| a.get("p"))
        .and_then(Value::as_u64)
        .unwrap_or(2);
    let mut all = Vec::new();
    leaves(cert, &mut Vec::new(), &mut all);
    if all.is_empty() {
        return None;
    }
    let path = all.swap_remove(rng.gen_range(0..all.len()));
    let key = nearest_key(&path).to_string();
    let mut slot = &mut *cert;
    for seg in &path {
        slot = match seg {
            Seg::Key(k) => slot.get_mut(k.as_str())?,
            Seg::Index(i) => slot.get_mut(*i)?,
        };
    }
    let before = slot.clone();
    let after = match &before {
        Value::Bool(b) => Value::Bool(!b),
        Value::Number(n) if n.is_u64() || n.is_i64() => {
            let v = n.as_i64().unwrap_or(i64::MAX);
            let nested_field = path
                .iter()
                .any(|s| matches!(s, Seg::Key(k) if FIELD_KEYS.contains(&k.as_str())));
            if key == "p" {
                Value::from(v + 1)
            } else if nested_field && v >= 0 && (v as u64) < p {
                Value::from((v as u64 + 1) % p)
            } else if matches!(key.as_str(), "kappa" | "n" | "budget" | "card") && v > 0 {
                Value::from(v - 1)
            } else {
                Value::from(v + 1)
            }
        }
        Value::String(s) => Value::String(match s.as_str() {
            "projective" => "flat".into(),
            "flat" => "projective".into(),
            "dw" => "ex".into(),
            "ex" => "dw".into(),
            _ if key == "digest" => {
                let mut c: Vec<char> = s.chars().collect();
                if let Some(first) = c.first_mut() {
                    *first = if *first == '0' { '1' } else { '0' };
                }
                c.into_iter().collect()
            }
            _ => format!("{s}'"),
        }),
        other => other.clone(),
    };
    *slot = after.clone();
    Some(Mutation {
        path: render(&path),
        before,
        after,
    })
}
