//! Bounded chain complexes (homological grading), chain maps, and Ext^1 in
//! the category of complexes.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{hom_basis_vectors, lift_matrix, projective_cover, Module, ModuleMap};
use crate::subspace::Subspace;

/// Complex with support `[lo, hi]`; `boundaries[i]` is `d_{lo+1+i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    alg: Arc<Algebra>,
    lo: i64,
    modules: Vec<Module>,
    boundaries: Vec<ModuleMap>,
}

impl ChainComplex {
    pub fn new(
        alg: Arc<Algebra>,
        lo: i64,
        modules: Vec<Module>,
        boundaries: Vec<Matrix>,
    ) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::NotComplex(
                "a complex needs at least one degree".into(),
            ));
        }
        if boundaries.len() + 1 != modules.len() {
            return Err(Error::NotComplex(format!(
                "{} modules need {} boundaries",
                modules.len(),
                modules.len() - 1
            )));
        }
        for m in &modules {
            if !m.algebra().same_table(&alg) {
                return Err(Error::AlgebraMismatch);
            }
        }
        let maps = boundaries
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                ModuleMap::new(modules[i + 1].clone(), modules[i].clone(), b).map_err(|e| {
                    Error::NotComplex(format!("boundary into degree {}: {e}", lo + i as i64))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let c = Self {
            alg,
            lo,
            modules,
            boundaries: maps,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(
        alg: Arc<Algebra>,
        lo: i64,
        modules: Vec<Module>,
        boundaries: Vec<Matrix>,
    ) -> Self {
        let maps = boundaries
            .into_iter()
            .enumerate()
            .map(|(i, b)| ModuleMap::new_unchecked(modules[i + 1].clone(), modules[i].clone(), b))
            .collect();
        let c = Self {
            alg,
            lo,
            modules,
            boundaries: maps,
        };
        debug_assert!(c.check_square_zero().is_ok());
        c
    }

    fn check_square_zero(&self) -> Result<()> {
        for w in self.boundaries.windows(2) {
            if !w[0].matrix().mul(w[1].matrix()).is_zero() {
                return Err(Error::NotComplex("boundary squared is nonzero".into()));
            }
        }
        Ok(())
    }

    pub fn zero(alg: Arc<Algebra>) -> Self {
        Self {
            lo: 0,
            modules: vec![Module::zero(alg.clone())],
            boundaries: Vec::new(),
            alg,
        }
    }

    /// M concentrated in degree m.
    pub fn sphere(m: &Module, degree: i64) -> Self {
        Self {
            alg: m.algebra().clone(),
            lo: degree,
            modules: vec![m.clone()],
            boundaries: Vec::new(),
        }
    }

    /// P in degrees m and m - 1 with identity boundary.
    pub fn disk(p: &Module, degree: i64) -> Self {
        Self::new_unchecked(
            p.algebra().clone(),
            degree - 1,
            vec![p.clone(), p.clone()],
            vec![Matrix::identity(p.field(), p.dim())],
        )
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }
    pub fn support_len(&self) -> usize {
        self.modules.len()
    }
    pub fn in_support(&self, m: i64) -> bool {
        m >= self.lo && m <= self.hi()
    }
    pub fn modules(&self) -> &[Module] {
        &self.modules
    }

    pub fn module(&self, m: i64) -> Module {
        if self.in_support(m) {
            self.modules[(m - self.lo) as usize].clone()
        } else {
            Module::zero(self.alg.clone())
        }
    }

    pub fn dim(&self, m: i64) -> usize {
        if self.in_support(m) {
            self.modules[(m - self.lo) as usize].dim()
        } else {
            0
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modules.iter().map(Module::dim).collect()
    }

    /// `d_m : X_m -> X_{m-1}`, zero outside the support.
    pub fn boundary(&self, m: i64) -> Matrix {
        if m > self.lo && m <= self.hi() {
            self.boundaries[(m - self.lo - 1) as usize].matrix().clone()
        } else {
            Matrix::zeros(self.alg.field(), self.dim(m - 1), self.dim(m))
        }
    }

    pub fn boundary_map(&self, m: i64) -> ModuleMap {
        ModuleMap::new_unchecked(self.module(m), self.module(m - 1), self.boundary(m))
    }

    pub fn card(&self) -> usize {
        self.modules.iter().map(Module::dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.card() == 0
    }

    pub fn cycles(&self, m: i64) -> Subspace {
        Subspace::from_vectors(
            self.alg.field(),
            self.dim(m),
            &self.boundary(m).kernel_basis(),
        )
    }

    pub fn boundaries_in(&self, m: i64) -> Subspace {
        Subspace::column_space(&self.boundary(m + 1))
    }

    pub fn cycles_module(&self, m: i64) -> Module {
        self.module(m).submodule_unchecked(&self.cycles(m)).0
    }

    pub fn homology_dim(&self, m: i64) -> usize {
        self.cycles(m).dim() - self.boundaries_in(m).dim()
    }

    pub fn is_exact_at(&self, m: i64) -> bool {
        self.boundary(m).rank() + self.boundary(m + 1).rank() == self.dim(m)
    }

    /// Rank test: rank d_m + rank d_{m+1} = dim X_m everywhere.
    pub fn is_exact(&self) -> bool {
        self.degrees().all(|m| self.is_exact_at(m))
    }

    /// Comparison of cycle and boundary subspaces, independent of `is_exact`.
    pub fn is_exact_by_homology(&self) -> bool {
        self.degrees()
            .all(|m| self.cycles(m) == self.boundaries_in(m))
    }

    /// The same complex viewed on a larger support window.
    pub fn widen(&self, lo: i64, hi: i64) -> ChainComplex {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let modules: Vec<Module> = (lo..=hi).map(|m| self.module(m)).collect();
        let boundaries = ((lo + 1)..=hi).map(|m| self.boundary(m)).collect();
        Self::new_unchecked(self.alg.clone(), lo, modules, boundaries)
    }

    /// Shift by `k` degrees; the boundary changes sign for odd `k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let boundaries = self
            .boundaries
            .iter()
            .map(|b| {
                if k % 2 == 0 {
                    b.matrix().clone()
                } else {
                    b.matrix().neg()
                }
            })
            .collect();
        Self::new_unchecked(
            self.alg.clone(),
            self.lo + k,
            self.modules.clone(),
            boundaries,
        )
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let f = self.alg.field();
        let modules = (lo..=hi)
            .map(|m| self.module(m).direct_sum(&other.module(m)))
            .collect();
        let boundaries = ((lo + 1)..=hi)
            .map(|m| Matrix::block_diag(f, &[&self.boundary(m), &other.boundary(m)]))
            .collect();
        Self::new_unchecked(self.alg.clone(), lo, modules, boundaries)
    }

    /// Checks that `subs` (one subspace per support degree) is a subcomplex.
    pub fn check_subcomplex(&self, subs: &[Subspace]) -> Result<()> {
        if subs.len() != self.modules.len() {
            return Err(Error::DimensionMismatch(
                "one subspace per degree is required".into(),
            ));
        }
        for (i, (m, s)) in self.modules.iter().zip(subs).enumerate() {
            let deg = self.lo + i as i64;
            if s.ambient() != m.dim() || m.check_stable(s).is_err() {
                return Err(Error::NotSubcomplex(deg));
            }
            if i > 0 && !subs[i - 1].contains_space(&s.image_under(&self.boundary(deg))) {
                return Err(Error::NotSubcomplex(deg));
            }
        }
        Ok(())
    }

    pub fn subcomplex(&self, subs: &[Subspace]) -> Result<(ChainComplex, ChainMap)> {
        self.check_subcomplex(subs)?;
        Ok(self.subcomplex_unchecked(subs))
    }

    pub(crate) fn subcomplex_unchecked(&self, subs: &[Subspace]) -> (ChainComplex, ChainMap) {
        let modules: Vec<Module> = self
            .modules
            .iter()
            .zip(subs)
            .map(|(m, s)| m.submodule_unchecked(s).0)
            .collect();
        let boundaries = (1..subs.len())
            .map(|i| {
                let deg = self.lo + i as i64;
                subs[i - 1]
                    .coords_matrix()
                    .mul(&self.boundary(deg))
                    .mul(&subs[i].basis_matrix())
            })
            .collect();
        let sub = Self::new_unchecked(self.alg.clone(), self.lo, modules, boundaries);
        let comps = subs.iter().map(Subspace::basis_matrix).collect();
        let incl = ChainMap::new_unchecked(sub.clone(), self.clone(), comps);
        (sub, incl)
    }

    pub fn quotient_complex(&self, subs: &[Subspace]) -> Result<(ChainComplex, ChainMap)> {
        self.check_subcomplex(subs)?;
        Ok(self.quotient_unchecked(subs))
    }

    pub(crate) fn quotient_unchecked(&self, subs: &[Subspace]) -> (ChainComplex, ChainMap) {
        let modules: Vec<Module> = self
            .modules
            .iter()
            .zip(subs)
            .map(|(m, s)| m.quotient_unchecked(s).0)
            .collect();
        let boundaries = (1..subs.len())
            .map(|i| {
                let deg = self.lo + i as i64;
                subs[i - 1]
                    .quotient_matrix()
                    .mul(&self.boundary(deg))
                    .mul(&lift_matrix(&subs[i]))
            })
            .collect();
        let quo = Self::new_unchecked(self.alg.clone(), self.lo, modules, boundaries);
        let comps = subs.iter().map(Subspace::quotient_matrix).collect();
        let proj = ChainMap::new_unchecked(self.clone(), quo.clone(), comps);
        (quo, proj)
    }

    pub fn zero_subcomplex(&self) -> Vec<Subspace> {
        self.modules
            .iter()
            .map(|m| Subspace::zero(m.field(), m.dim()))
            .collect()
    }

    pub fn full_subcomplex(&self) -> Vec<Subspace> {
        self.modules
            .iter()
            .map(|m| Subspace::full(m.field(), m.dim()))
            .collect()
    }
}

/// Components are indexed over the source support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: Vec<Matrix>,
}

impl ChainMap {
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: Vec<Matrix>,
    ) -> Result<Self> {
        if !source.alg.same_table(&target.alg) {
            return Err(Error::AlgebraMismatch);
        }
        if components.len() != source.support_len() {
            return Err(Error::NotChainMap(
                "one component per source degree is required".into(),
            ));
        }
        for (i, c) in components.iter().enumerate() {
            let m = source.lo + i as i64;
            if c.shape() != (target.dim(m), source.dim(m)) {
                return Err(Error::NotChainMap(format!(
                    "component in degree {m} has the wrong shape"
                )));
            }
        }
        let f = Self {
            source,
            target,
            components,
        };
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: ChainComplex,
        target: ChainComplex,
        components: Vec<Matrix>,
    ) -> Self {
        Self {
            source,
            target,
            components,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for m in self.source.degrees() {
            let c = self.component(m);
            ModuleMap::new(self.source.module(m), self.target.module(m), c.clone())
                .map_err(|e| Error::NotChainMap(format!("degree {m}: {e}")))?;
            let lhs = self.target.boundary(m).mul(&c);
            let rhs = self.component(m - 1).mul(&self.source.boundary(m));
            if lhs != rhs {
                return Err(Error::NotChainMap(format!(
                    "does not commute with the boundary at degree {m}"
                )));
            }
        }
        Ok(())
    }

    pub fn identity(x: &ChainComplex) -> Self {
        let comps = x
            .modules
            .iter()
            .map(|m| Matrix::identity(m.field(), m.dim()))
            .collect();
        Self::new_unchecked(x.clone(), x.clone(), comps)
    }

    pub fn zero(x: &ChainComplex, y: &ChainComplex) -> Self {
        let f = x.alg.field();
        let comps = x
            .degrees()
            .map(|m| Matrix::zeros(f, y.dim(m), x.dim(m)))
            .collect();
        Self::new_unchecked(x.clone(), y.clone(), comps)
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }
    pub fn target(&self) -> &ChainComplex {
        &self.target
    }
    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, m: i64) -> Matrix {
        if self.source.in_support(m) {
            self.components[(m - self.source.lo) as usize].clone()
        } else {
            Matrix::zeros(
                self.source.alg.field(),
                self.target.dim(m),
                self.source.dim(m),
            )
        }
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        let comps = first
            .source
            .degrees()
            .map(|m| self.component(m).mul(&first.component(m)))
            .collect();
        Self::new_unchecked(first.source.clone(), self.target.clone(), comps)
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn scale(&self, c: u32) -> ChainMap {
        let comps = self.components.iter().map(|a| a.scale(c)).collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    pub fn is_injective(&self) -> bool {
        self.source
            .degrees()
            .all(|m| self.component(m).rank() == self.source.dim(m))
    }

    /// Surjective in every degree of the target.
    pub fn is_surjective(&self) -> bool {
        self.target
            .degrees()
            .all(|m| self.component(m).rank() == self.target.dim(m))
    }

    /// Kernel as a subcomplex of the source.
    pub fn kernel(&self) -> Vec<Subspace> {
        self.source
            .degrees()
            .map(|m| {
                Subspace::from_vectors(
                    self.source.alg.field(),
                    self.source.dim(m),
                    &self.component(m).kernel_basis(),
                )
            })
            .collect()
    }

    /// Image as a subcomplex of the target.
    pub fn image(&self) -> Vec<Subspace> {
        self.target
            .degrees()
            .map(|m| Subspace::column_space(&self.component(m)))
            .collect()
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.components
            .iter()
            .flat_map(|c| c.entries().iter().copied())
            .collect()
    }

    pub fn from_vec(source: &ChainComplex, target: &ChainComplex, v: &[u32]) -> ChainMap {
        let f = source.alg.field();
        let mut off = 0;
        let comps = source
            .degrees()
            .map(|m| {
                let (r, c) = (target.dim(m), source.dim(m));
                let mat = Matrix::from_fn(f, r, c, |i, j| v[off + i * c + j]);
                off += r * c;
                mat
            })
            .collect();
        Self::new_unchecked(source.clone(), target.clone(), comps)
    }

    pub fn vec_len(source: &ChainComplex, target: &ChainComplex) -> usize {
        source
            .degrees()
            .map(|m| source.dim(m) * target.dim(m))
            .sum()
    }
}

/// Direct sum of chain maps on the direct sums of sources and targets.
pub fn chain_map_sum(a: &ChainMap, b: &ChainMap) -> ChainMap {
    let src = a.source.direct_sum(&b.source);
    let tgt = a.target.direct_sum(&b.target);
    let f = src.alg.field();
    let comps = src
        .degrees()
        .map(|m| Matrix::block_diag(f, &[&a.component(m), &b.component(m)]))
        .collect();
    ChainMap::new_unchecked(src, tgt, comps)
}

/// Basis of degreewise module maps `X_m -> Y_{m + shift}`, as flat vectors laid
/// out degree by degree over the support of X.
fn degreewise_hom_basis(
    x: &ChainComplex,
    y: &ChainComplex,
    shift: i64,
) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut sizes = Vec::new();
    let mut per_degree = Vec::new();
    for m in x.degrees() {
        let (xm, ym) = (x.module(m), y.module(m + shift));
        sizes.push(xm.dim() * ym.dim());
        per_degree.push(hom_basis_vectors(&xm, &ym));
    }
    let total: usize = sizes.iter().sum();
    let mut basis = Vec::new();
    let mut off = 0;
    for (hb, &sz) in per_degree.iter().zip(&sizes) {
        for v in hb {
            let mut w = vec![0; total];
            w[off..off + sz].copy_from_slice(v);
            basis.push(w);
        }
        off += sz;
    }
    (basis, sizes)
}

fn split_vec(v: &[u32], x: &ChainComplex, y: &ChainComplex, shift: i64) -> Vec<Matrix> {
    let f = x.alg.field();
    let mut off = 0;
    x.degrees()
        .map(|m| {
            let (r, c) = (y.dim(m + shift), x.dim(m));
            let mat = Matrix::from_fn(f, r, c, |i, j| v[off + i * c + j]);
            off += r * c;
            mat
        })
        .collect()
}

/// Basis of Hom_Ch(X, Y) as flat vectors (`ChainMap::to_vec` layout).
pub fn chain_hom_vectors(x: &ChainComplex, y: &ChainComplex) -> Vec<Vec<u32>> {
    let f = x.alg.field();
    let (basis, _) = degreewise_hom_basis(x, y, 0);
    if basis.is_empty() {
        return Vec::new();
    }
    // Columns: the defect d^Y f_m - f_{m-1} d^X for each basis element.
    let cols: Vec<Vec<u32>> = basis
        .iter()
        .map(|v| {
            let comps = split_vec(v, x, y, 0);
            let comp = |m: i64| -> Matrix {
                if x.in_support(m) {
                    comps[(m - x.lo) as usize].clone()
                } else {
                    Matrix::zeros(f, y.dim(m), x.dim(m))
                }
            };
            let mut out = Vec::new();
            for m in x.degrees() {
                let d = y
                    .boundary(m)
                    .mul(&comp(m))
                    .sub(&comp(m - 1).mul(&x.boundary(m)));
                out.extend_from_slice(d.entries());
            }
            out
        })
        .collect();
    let rows = cols[0].len();
    let sys = Matrix::from_cols(f, rows, &cols);
    sys.kernel_basis()
        .into_iter()
        .map(|c| {
            let mut w = vec![0u32; basis[0].len()];
            for (b, &k) in basis.iter().zip(&c) {
                if k != 0 {
                    for (a, &bv) in w.iter_mut().zip(b) {
                        *a = f.add(*a, f.mul(k, bv));
                    }
                }
            }
            w
        })
        .collect()
}

pub fn chain_hom_space(x: &ChainComplex, y: &ChainComplex) -> Result<Vec<ChainMap>> {
    if !x.alg.same_table(&y.alg) {
        return Err(Error::AlgebraMismatch);
    }
    Ok(chain_hom_vectors(x, y)
        .iter()
        .map(|v| ChainMap::from_vec(x, y, v))
        .collect())
}

/// `s_m : X_m -> Y_{m+1}` with `f_m = d s_m + s_{m-1} d`, if one exists.
pub fn nullhomotopy(fmap: &ChainMap) -> Option<Vec<Matrix>> {
    let x = &fmap.source;
    let y = &fmap.target;
    let f = x.alg.field();
    let (basis, _) = degreewise_hom_basis(x, y, 1);
    let target: Vec<u32> = fmap.to_vec();
    let s_of = |comps: &[Matrix], m: i64| -> Matrix {
        if x.in_support(m) {
            comps[(m - x.lo) as usize].clone()
        } else {
            Matrix::zeros(f, y.dim(m + 1), x.dim(m))
        }
    };
    let eval = |v: &[u32]| -> Vec<u32> {
        let comps = split_vec(v, x, y, 1);
        let mut out = Vec::new();
        for m in x.degrees() {
            let h = y
                .boundary(m + 1)
                .mul(&s_of(&comps, m))
                .add(&s_of(&comps, m - 1).mul(&x.boundary(m)));
            out.extend_from_slice(h.entries());
        }
        out
    };
    if basis.is_empty() {
        return if fmap.is_zero() {
            Some(split_vec(&[], x, y, 1))
        } else {
            None
        };
    }
    let cols: Vec<Vec<u32>> = basis.iter().map(|v| eval(v)).collect();
    let sys = Matrix::from_cols(f, target.len(), &cols);
    let sol = sys.solve(&target).ok()??;
    let mut w = vec![0u32; basis[0].len()];
    for (b, &k) in basis.iter().zip(&sol.particular) {
        for (a, &bv) in w.iter_mut().zip(b) {
            *a = f.add(*a, f.mul(k, bv));
        }
    }
    Some(split_vec(&w, x, y, 1))
}

/// Epimorphism onto X from a sum of disks on projective covers of the terms.
#[derive(Clone, Debug)]
pub struct DiskCover {
    /// `covers[i] : P_{lo+i} -> X_{lo+i}`.
    pub covers: Vec<ModuleMap>,
    pub map: ChainMap,
}

impl DiskCover {
    pub fn disk(&self) -> &ChainComplex {
        self.map.source()
    }
}

pub fn disk_cover(x: &ChainComplex) -> DiskCover {
    let covers = x.modules.iter().map(|m| projective_cover(m).map).collect();
    disk_cover_with(x, covers)
}

/// Disk cover built from given epimorphisms `P_m -> X_m`. The disk complex has
/// support `[lo - 1, hi]` with `D_k = P_k + P_{k+1}`.
pub fn disk_cover_with(x: &ChainComplex, covers: Vec<ModuleMap>) -> DiskCover {
    let alg = x.alg.clone();
    let f = alg.field();
    let zero = Module::zero(alg.clone());
    let p = |k: i64| -> Module {
        if x.in_support(k) {
            covers[(k - x.lo) as usize].source().clone()
        } else {
            zero.clone()
        }
    };
    let pi = |k: i64| -> Matrix {
        if x.in_support(k) {
            covers[(k - x.lo) as usize].matrix().clone()
        } else {
            Matrix::zeros(f, x.dim(k), p(k).dim())
        }
    };
    let lo = x.lo - 1;
    let hi = x.hi();
    let modules: Vec<Module> = (lo..=hi).map(|k| p(k).direct_sum(&p(k + 1))).collect();
    let boundaries = ((lo + 1)..=hi)
        .map(|k| {
            // (a, b) in P_k + P_{k+1} goes to (0, a) in P_{k-1} + P_k.
            let (a, b) = (p(k).dim(), p(k + 1).dim());
            let c = p(k - 1).dim();
            let mut m = Matrix::zeros(f, c + a, a + b);
            m.set_block(c, 0, &Matrix::identity(f, a));
            m
        })
        .collect();
    let disk = ChainComplex::new_unchecked(alg, lo, modules, boundaries);
    let comps = (lo..=hi)
        .map(|k| Matrix::hstack(f, x.dim(k), &[&pi(k), &x.boundary(k + 1).mul(&pi(k + 1))]))
        .collect();
    let map = ChainMap::new_unchecked(disk, x.widen(lo, hi), comps);
    DiskCover { covers, map }
}

/// Ext^1 in complexes from a disk presentation 0 -> K -> D -> X -> 0.
#[derive(Clone, Debug)]
pub struct ExtCh {
    pub cover: DiskCover,
    pub kernel_incl: ChainMap,
    pub coefficient: ChainComplex,
    pub cocycle_space: Subspace,
    pub coboundaries: Subspace,
    pub cocycles: Vec<ChainMap>,
}

impl ExtCh {
    pub fn dim(&self) -> usize {
        self.cocycles.len()
    }

    pub fn kernel(&self) -> &ChainComplex {
        self.kernel_incl.source()
    }

    pub fn is_trivial_class(&self, c: &ChainMap) -> bool {
        self.coboundaries.contains(&c.to_vec())
    }

    pub fn cocycle(&self, coeffs: &[u32]) -> ChainMap {
        let f = self.coefficient.alg.field();
        let k = self.kernel();
        let mut v = vec![0u32; ChainMap::vec_len(k, &self.coefficient)];
        for (z, &c) in self.cocycles.iter().zip(coeffs) {
            if c != 0 {
                for (a, b) in v.iter_mut().zip(z.to_vec()) {
                    *a = f.add(*a, f.mul(c, b));
                }
            }
        }
        ChainMap::from_vec(k, &self.coefficient, &v)
    }

    pub fn all_classes(&self) -> impl Iterator<Item = ChainMap> + '_ {
        crate::module::all_vectors(self.coefficient.alg.field(), self.dim())
            .map(move |c| self.cocycle(&c))
    }

    /// 0 -> Y -> E -> X -> 0 with E = (Y + D) / {(-c(k), k)}.
    pub fn extension(&self, c: &ChainMap) -> Result<ComplexSes> {
        let k = self.kernel();
        let y = &self.coefficient;
        if c.source() != k || c.target() != y || c.validate().is_err() {
            return Err(Error::BadCocycle(
                "not a chain map from the kernel complex".into(),
            ));
        }
        let d = self.cover.disk();
        let x = self.cover.map.target();
        let lo = d.lo().min(y.lo());
        let hi = d.hi().max(y.hi());
        let yw = y.widen(lo, hi);
        let dw = d.widen(lo, hi);
        let sum = yw.direct_sum(&dw);
        let f = sum.alg.field();
        let rel: Vec<Subspace> = (lo..=hi)
            .map(|m| {
                let graph = Matrix::vstack(
                    f,
                    k.dim(m),
                    &[&c.component(m).neg(), &self.kernel_incl.component(m)],
                );
                Subspace::column_space(&graph)
            })
            .collect();
        let (e, q) = sum.quotient_unchecked(&rel);
        let i_comps = (lo..=hi)
            .map(|m| {
                let inc = Matrix::vstack(
                    f,
                    y.dim(m),
                    &[
                        &Matrix::identity(f, y.dim(m)),
                        &Matrix::zeros(f, d.dim(m), y.dim(m)),
                    ],
                );
                q.component(m).mul(&inc)
            })
            .collect();
        let i = ChainMap::new_unchecked(yw, e.clone(), i_comps);
        let xw = x.widen(lo, hi);
        let p_comps = (lo..=hi)
            .map(|m| {
                let onto = Matrix::hstack(
                    f,
                    xw.dim(m),
                    &[
                        &Matrix::zeros(f, xw.dim(m), y.dim(m)),
                        &self.cover.map.component(m),
                    ],
                );
                onto.mul(&lift_matrix(&rel[(m - lo) as usize]))
            })
            .collect();
        let p = ChainMap::new_unchecked(e, xw, p_comps);
        let ses = ComplexSes { i, p };
        debug_assert!(ses.validate().is_ok());
        Ok(ses)
    }
}

pub fn ext1_ch(x: &ChainComplex, y: &ChainComplex) -> Result<ExtCh> {
    ext1_ch_with(disk_cover(x), y)
}

pub fn ext1_ch_with(cover: DiskCover, y: &ChainComplex) -> Result<ExtCh> {
    if !cover.map.target().alg.same_table(&y.alg) {
        return Err(Error::AlgebraMismatch);
    }
    let f = y.alg.field();
    let d = cover.disk().clone();
    let kernel = cover.map.kernel();
    let (k, kernel_incl) = d.subcomplex_unchecked(&kernel);
    let ambient = ChainMap::vec_len(&k, y);
    let z = Subspace::from_vectors(f, ambient, &chain_hom_vectors(&k, y));
    let restricted: Vec<Vec<u32>> = chain_hom_vectors(&d, y)
        .iter()
        .map(|v| ChainMap::from_vec(&d, y, v).compose(&kernel_incl).to_vec())
        .collect();
    let b = Subspace::from_vectors(f, ambient, &restricted);
    let mut acc = b.clone();
    let cocycles = z
        .basis()
        .iter()
        .filter(|v| acc.insert(v))
        .map(|v| ChainMap::from_vec(&k, y, v))
        .collect();
    Ok(ExtCh {
        cover,
        kernel_incl,
        coefficient: y.clone(),
        cocycle_space: z,
        coboundaries: b,
        cocycles,
    })
}

/// Short exact sequence of complexes 0 -> A -i-> B -p-> C -> 0.
#[derive(Clone, Debug)]
pub struct ComplexSes {
    pub i: ChainMap,
    pub p: ChainMap,
}

impl ComplexSes {
    pub fn validate(&self) -> Result<()> {
        self.i.validate()?;
        self.p.validate()?;
        let b = self.i.target();
        for m in b.degrees() {
            let (ci, cp) = (self.i.component(m), self.p.component(m));
            if ci.rank() != self.i.source().dim(m) || cp.rank() != self.p.target().dim(m) {
                return Err(Error::NotExact(m));
            }
            if !cp.mul(&ci).is_zero() || ci.rank() + cp.rank() != b.dim(m) {
                return Err(Error::NotExact(m));
            }
        }
        Ok(())
    }

    pub fn sub(&self) -> &ChainComplex {
        self.i.source()
    }
    pub fn middle(&self) -> &ChainComplex {
        self.i.target()
    }
    pub fn quotient(&self) -> &ChainComplex {
        self.p.target()
    }
}

/// Linear combination of flat chain-map vectors.
pub fn combine_chain(
    x: &ChainComplex,
    y: &ChainComplex,
    basis: &[Vec<u32>],
    coeffs: &[u32],
) -> ChainMap {
    let f = x.alg.field();
    let mut v = vec![0u32; ChainMap::vec_len(x, y)];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            for (a, &bv) in v.iter_mut().zip(b) {
                *a = f.add(*a, f.mul(c, bv));
            }
        }
    }
    ChainMap::from_vec(x, y, &v)
}

/// Chain map `h` with `g h = rhs`, if one exists.
pub fn chain_factor_through(g: &ChainMap, rhs: &ChainMap) -> Option<ChainMap> {
    let x = rhs.source();
    let mid = g.source();
    let f = x.alg.field();
    let basis = chain_hom_vectors(x, mid);
    let target = rhs.to_vec();
    if basis.is_empty() {
        return rhs.is_zero().then(|| ChainMap::zero(x, mid));
    }
    let cols: Vec<Vec<u32>> = basis
        .iter()
        .map(|v| g.compose(&ChainMap::from_vec(x, mid, v)).to_vec())
        .collect();
    let sys = Matrix::from_cols(f, target.len(), &cols);
    let sol = sys.solve(&target).ok()??;
    Some(combine_chain(x, mid, &basis, &sol.particular))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn disk_on_regular_is_exact_with_double_card() {
        let alg = library::algebra("T2F2").unwrap();
        let d = ChainComplex::disk(&Module::regular(alg), 1);
        assert!(d.is_exact());
        assert!(d.is_exact_by_homology());
        assert_eq!(d.card(), 6);
    }

    #[test]
    fn sphere_is_not_exact() {
        let sa = library::module("T2F2", "S_a").unwrap();
        assert!(!ChainComplex::sphere(&sa, 0).is_exact());
    }

    #[test]
    fn identity_of_disk_is_nullhomotopic() {
        let pb = library::module("T2F2", "P_b").unwrap();
        let d = ChainComplex::disk(&pb, 0);
        let id = ChainMap::identity(&d);
        assert!(nullhomotopy(&id).is_some());
        let s = ChainComplex::sphere(&pb, 0);
        assert!(nullhomotopy(&ChainMap::identity(&s)).is_none());
    }

    #[test]
    fn ext_of_spheres_matches_module_ext() {
        let sa = library::module("T2F2", "S_a").unwrap();
        let sb = library::module("T2F2", "S_b").unwrap();
        let e = ext1_ch(&ChainComplex::sphere(&sb, 0), &ChainComplex::sphere(&sa, 0)).unwrap();
        assert_eq!(e.dim(), 1);
        let ses = e.extension(&e.cocycles[0]).unwrap();
        ses.validate().unwrap();
    }

    #[test]
    fn disk_cover_is_surjective() {
        let pb = library::module("T2F2", "P_b").unwrap();
        let sb = library::module("T2F2", "S_b").unwrap();
        let (_, proj) =
            pb.quotient_unchecked(&Subspace::from_vectors(pb.field(), 2, &[vec![1, 0]]));
        assert_eq!(proj.target(), &sb);
        let x = ChainComplex::new(
            pb.algebra().clone(),
            0,
            vec![sb.clone(), pb.clone()],
            vec![proj.matrix().clone()],
        )
        .unwrap();
        let dc = disk_cover(&x);
        dc.map.validate().unwrap();
        assert!(dc.map.is_surjective());
    }
}
