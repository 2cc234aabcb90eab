//! On-disk forms of modules, maps and complexes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraSpec};
use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::library;
use crate::matrix::Matrix;
use crate::module::{Module, ModuleMap};

/// An algebra given by bundled name or inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Name(String),
    Inline(AlgebraSpec),
}

impl AlgebraRef {
    pub fn resolve(&self) -> Result<Arc<Algebra>> {
        match self {
            AlgebraRef::Name(n) => library::algebra(n),
            AlgebraRef::Inline(spec) => Ok(Arc::new(Algebra::load(spec)?)),
        }
    }

    pub fn of(alg: &Algebra) -> Self {
        if library::algebra(alg.name())
            .map(|b| b.same_table(alg))
            .unwrap_or(false)
        {
            AlgebraRef::Name(alg.name().to_string())
        } else {
            AlgebraRef::Inline(alg.to_spec())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub algebra: AlgebraRef,
    pub dim: usize,
    pub action: Vec<Vec<Vec<i64>>>,
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<i64>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(i64::from).collect())
        .collect()
}

pub fn matrix_from_rows(
    alg: &Algebra,
    rows: &[Vec<i64>],
    nrows: usize,
    ncols: usize,
) -> Result<Matrix> {
    if rows.len() != nrows {
        return Err(Error::MalformedSpec(format!(
            "expected {nrows} rows, found {}",
            rows.len()
        )));
    }
    Matrix::from_rows(alg.field(), rows, ncols)
}

impl ModuleFile {
    pub fn from_module(m: &Module) -> Self {
        Self {
            algebra: AlgebraRef::of(m.algebra()),
            dim: m.dim(),
            action: m.actions().iter().map(matrix_to_rows).collect(),
        }
    }

    pub fn to_module(&self) -> Result<Module> {
        let alg = self.algebra.resolve()?;
        self.to_module_over(alg)
    }

    pub fn to_module_over(&self, alg: Arc<Algebra>) -> Result<Module> {
        let action = self
            .action
            .iter()
            .map(|rows| matrix_from_rows(&alg, rows, self.dim, self.dim))
            .collect::<Result<Vec<_>>>()?;
        Module::new(alg, self.dim, action)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleMapFile {
    pub source: ModuleFile,
    pub target: ModuleFile,
    pub matrix: Vec<Vec<i64>>,
}

impl ModuleMapFile {
    pub fn from_map(f: &ModuleMap) -> Self {
        Self {
            source: ModuleFile::from_module(f.source()),
            target: ModuleFile::from_module(f.target()),
            matrix: matrix_to_rows(f.matrix()),
        }
    }

    pub fn to_map(&self) -> Result<ModuleMap> {
        let s = self.source.to_module()?;
        let t = self.target.to_module_over(s.algebra().clone())?;
        let m = matrix_from_rows(s.algebra(), &self.matrix, t.dim(), s.dim())?;
        ModuleMap::new(s, t, m)
    }
}

/// A named collection of modules, as in the bundled library files.
pub type ModuleLibraryFile = BTreeMap<String, ModuleFile>;

/// Module data without the algebra, used inside complex and universe files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleBody {
    pub dim: usize,
    pub action: Vec<Vec<Vec<i64>>>,
}

/// A bundled module name or inline module data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleRef {
    Name(String),
    Body(ModuleBody),
}

impl ModuleRef {
    pub fn of(m: &Module) -> Self {
        ModuleRef::Body(ModuleBody {
            dim: m.dim(),
            action: m.actions().iter().map(matrix_to_rows).collect(),
        })
    }

    pub fn resolve(&self, alg: &Arc<Algebra>) -> Result<Module> {
        match self {
            ModuleRef::Name(n) => {
                let m = library::module(alg.name(), n)?;
                if !m.algebra().same_table(alg) {
                    return Err(Error::AlgebraMismatch);
                }
                Ok(Module::new(alg.clone(), m.dim(), m.actions().to_vec())?)
            }
            ModuleRef::Body(b) => {
                let action = b
                    .action
                    .iter()
                    .map(|rows| matrix_from_rows(alg, rows, b.dim, b.dim))
                    .collect::<Result<Vec<_>>>()?;
                Module::new(alg.clone(), b.dim, action)
            }
        }
    }
}

/// Terms by degree from `lo` to `hi`; `boundaries[i]` maps degree `lo+i+1`
/// to degree `lo+i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexBody {
    pub lo: i64,
    pub hi: i64,
    pub modules: Vec<ModuleRef>,
    pub boundaries: Vec<Vec<Vec<i64>>>,
}

impl ComplexBody {
    pub fn of(x: &ChainComplex) -> Self {
        Self {
            lo: x.lo(),
            hi: x.hi(),
            modules: x.modules().iter().map(ModuleRef::of).collect(),
            boundaries: ((x.lo() + 1)..=x.hi())
                .map(|m| matrix_to_rows(&x.boundary(m)))
                .collect(),
        }
    }

    pub fn resolve(&self, alg: &Arc<Algebra>) -> Result<ChainComplex> {
        if self.hi < self.lo || self.modules.len() as i64 != self.hi - self.lo + 1 {
            return Err(Error::MalformedSpec(format!(
                "degrees {}..={} need {} modules",
                self.lo,
                self.hi,
                self.hi - self.lo + 1
            )));
        }
        let modules = self
            .modules
            .iter()
            .map(|m| m.resolve(alg))
            .collect::<Result<Vec<_>>>()?;
        if self.boundaries.len() + 1 != modules.len() {
            return Err(Error::MalformedSpec(format!(
                "{} modules need {} boundaries",
                modules.len(),
                modules.len() - 1
            )));
        }
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(i, rows)| matrix_from_rows(alg, rows, modules[i].dim(), modules[i + 1].dim()))
            .collect::<Result<Vec<_>>>()?;
        ChainComplex::new(alg.clone(), self.lo, modules, boundaries)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub algebra: AlgebraRef,
    #[serde(flatten)]
    pub body: ComplexBody,
}

impl ComplexFile {
    pub fn from_complex(x: &ChainComplex) -> Self {
        Self {
            algebra: AlgebraRef::of(x.algebra()),
            body: ComplexBody::of(x),
        }
    }

    pub fn to_complex(&self) -> Result<ChainComplex> {
        self.body.resolve(&self.algebra.resolve()?)
    }
}

/// Components are listed by source degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMapFile {
    pub source: ComplexFile,
    pub target: ComplexFile,
    pub components: Vec<Vec<Vec<i64>>>,
}

impl ChainMapFile {
    pub fn from_map(f: &ChainMap) -> Self {
        Self {
            source: ComplexFile::from_complex(f.source()),
            target: ComplexFile::from_complex(f.target()),
            components: f.components().iter().map(matrix_to_rows).collect(),
        }
    }

    pub fn to_map(&self) -> Result<ChainMap> {
        let s = self.source.to_complex()?;
        let alg = s.algebra().clone();
        let t = self.target.body.resolve(&alg)?;
        if self.components.len() != s.support_len() {
            return Err(Error::MalformedSpec(
                "one component per source degree is required".into(),
            ));
        }
        let comps = s
            .degrees()
            .zip(&self.components)
            .map(|(m, rows)| matrix_from_rows(&alg, rows, t.dim(m), s.dim(m)))
            .collect::<Result<Vec<_>>>()?;
        ChainMap::new(s, t, comps)
    }
}

/// One named object of a universe file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseEntry {
    pub name: String,
    #[serde(flatten)]
    pub object: ObjectRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectRef {
    Module(ModuleRef),
    Complex(ComplexBody),
    /// The module in degrees `degree` and `degree - 1` with identity boundary.
    Disk {
        module: ModuleRef,
        degree: i64,
    },
    /// The module alone in `degree`.
    Sphere {
        module: ModuleRef,
        degree: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseFile {
    pub algebra: AlgebraRef,
    /// Which constructions were used to build the universe.
    #[serde(default)]
    pub closure: Vec<String>,
    pub objects: Vec<UniverseEntry>,
}
