//! Ext, tensor products, Tor, and projective and flat dimension.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{
    combine, hom_basis_vectors, is_projective, lift_matrix, projective_cover, Module, ModuleMap,
    ShortExactSequence,
};
use crate::subspace::Subspace;

/// 0 -> K -> P_0 -> M -> 0.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub cover: ModuleMap,
    pub kernel_incl: ModuleMap,
}

impl Presentation {
    pub fn from_cover(cover: ModuleMap) -> Self {
        let (_, kernel_incl) = cover.kernel_module();
        Self { cover, kernel_incl }
    }

    pub fn canonical(m: &Module) -> Self {
        Self::from_cover(projective_cover(m).map)
    }

    pub fn kernel(&self) -> &Module {
        self.kernel_incl.source()
    }
    pub fn projective(&self) -> &Module {
        self.cover.source()
    }
    pub fn module(&self) -> &Module {
        self.cover.target()
    }
}

/// First syzygy: kernel of the canonical cover.
pub fn syzygy(m: &Module) -> Module {
    Presentation::canonical(m).kernel().clone()
}

/// Ext^1(M, N) as Hom(K, N) modulo maps that extend over P_0.
#[derive(Clone, Debug)]
pub struct Ext1 {
    pub presentation: Presentation,
    pub coefficient: Module,
    /// Hom(K, N) as row-major vectors.
    pub cocycle_space: Subspace,
    /// Restrictions of Hom(P_0, N).
    pub coboundaries: Subspace,
    /// Representatives of a basis of the quotient.
    pub cocycles: Vec<ModuleMap>,
}

impl Ext1 {
    pub fn dim(&self) -> usize {
        self.cocycles.len()
    }

    /// Coordinates of the class of `c` in the cocycle basis, or `None` if `c`
    /// is not a module map K -> N.
    pub fn class_coords(&self, c: &ModuleMap) -> Option<Vec<u32>> {
        let v = c.to_vec();
        if !self.cocycle_space.contains(&v) {
            return None;
        }
        let f = self.coefficient.field();
        let q = self.coboundaries.quotient_matrix();
        let cols: Vec<Vec<u32>> = self
            .cocycles
            .iter()
            .map(|z| q.mul_vec(&z.to_vec()))
            .collect();
        let sys = Matrix::from_cols(f, q.rows(), &cols);
        let sol = sys.solve(&q.mul_vec(&v)).ok()??;
        Some(sol.particular)
    }

    pub fn is_trivial_class(&self, c: &ModuleMap) -> bool {
        self.coboundaries.contains(&c.to_vec())
    }

    /// The cocycle with the given coordinates in the cocycle basis.
    pub fn cocycle(&self, coeffs: &[u32]) -> ModuleMap {
        let basis: Vec<Vec<u32>> = self.cocycles.iter().map(ModuleMap::to_vec).collect();
        combine(
            self.presentation.kernel(),
            &self.coefficient,
            &basis,
            coeffs,
        )
    }

    /// One representative per class, zero first.
    pub fn all_classes(&self) -> impl Iterator<Item = ModuleMap> + '_ {
        crate::module::all_vectors(self.coefficient.field(), self.dim())
            .map(move |c| self.cocycle(&c))
    }

    /// 0 -> N -> E -> M -> 0 with E = (N + P_0) / {(-c(k), k)}.
    pub fn extension(&self, c: &ModuleMap) -> Result<ShortExactSequence> {
        let k = self.presentation.kernel();
        let n = &self.coefficient;
        if c.source() != k || c.target() != n || c.validate().is_err() {
            return Err(Error::BadCocycle(
                "not a module map from the syzygy to the coefficient module".into(),
            ));
        }
        let p0 = self.presentation.projective();
        let f = n.field();
        let sum = n.direct_sum(p0);
        let graph = Matrix::vstack(
            f,
            k.dim(),
            &[&c.matrix().neg(), self.presentation.kernel_incl.matrix()],
        );
        let rel = Subspace::column_space(&graph);
        let (e, q) = sum.quotient_unchecked(&rel);
        let incl_n = Matrix::vstack(
            f,
            n.dim(),
            &[
                &Matrix::identity(f, n.dim()),
                &Matrix::zeros(f, p0.dim(), n.dim()),
            ],
        );
        let i = ModuleMap::new_unchecked(n.clone(), e.clone(), q.matrix().mul(&incl_n));
        let onto = Matrix::hstack(
            f,
            self.presentation.module().dim(),
            &[
                &Matrix::zeros(f, self.presentation.module().dim(), n.dim()),
                self.presentation.cover.matrix(),
            ],
        );
        let qm = ModuleMap::new_unchecked(
            e,
            self.presentation.module().clone(),
            onto.mul(&lift_matrix(&rel)),
        );
        let ses = ShortExactSequence { i, q: qm };
        debug_assert!(ses.validate().is_ok());
        Ok(ses)
    }
}

pub fn ext1(m: &Module, n: &Module) -> Result<Ext1> {
    m.same_algebra(n)?;
    Ok(ext1_with_presentation(Presentation::canonical(m), n))
}

pub fn ext1_with_cover(cover: &ModuleMap, n: &Module) -> Result<Ext1> {
    cover.target().same_algebra(n)?;
    if !cover.is_surjective() {
        return Err(Error::Precondition("cover is not surjective".into()));
    }
    Ok(ext1_with_presentation(
        Presentation::from_cover(cover.clone()),
        n,
    ))
}

fn ext1_with_presentation(presentation: Presentation, n: &Module) -> Ext1 {
    let f = n.field();
    let k = presentation.kernel();
    let p0 = presentation.projective();
    let ambient = k.dim() * n.dim();
    let z = Subspace::from_vectors(f, ambient, &hom_basis_vectors(k, n));
    let iota = presentation.kernel_incl.matrix();
    let restricted: Vec<Vec<u32>> = hom_basis_vectors(p0, n)
        .iter()
        .map(|v| {
            ModuleMap::from_vec(p0, n, v)
                .matrix()
                .mul(iota)
                .entries()
                .to_vec()
        })
        .collect();
    let b = Subspace::from_vectors(f, ambient, &restricted);
    let mut acc = b.clone();
    let cocycles = z
        .basis()
        .iter()
        .filter(|v| acc.insert(v))
        .map(|v| ModuleMap::from_vec(k, n, v))
        .collect();
    Ext1 {
        presentation,
        coefficient: n.clone(),
        cocycle_space: z,
        coboundaries: b,
        cocycles,
    }
}

pub fn ext1_dim(m: &Module, n: &Module) -> Result<usize> {
    Ok(ext1(m, n)?.dim())
}

/// dim Ext^i(M, N) by dimension shifting; i = 0 gives dim Hom.
pub fn ext_dim(m: &Module, n: &Module, i: usize) -> Result<usize> {
    m.same_algebra(n)?;
    if i == 0 {
        return Ok(hom_basis_vectors(m, n).len());
    }
    let mut om = m.clone();
    for _ in 1..i {
        om = syzygy(&om);
    }
    ext1_dim(&om, n)
}

pub fn extension_from_cocycle(
    m: &Module,
    n: &Module,
    ext: &Ext1,
    c: &ModuleMap,
) -> Result<ShortExactSequence> {
    if ext.presentation.module() != m || &ext.coefficient != n {
        return Err(Error::BadCocycle(
            "Ext data belongs to different modules".into(),
        ));
    }
    ext.extension(c)
}

/// T (over the opposite algebra) tensored with N.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub right: Module,
    pub left: Module,
    /// Relations in T (x) N, coordinates `t * dim N + n`.
    pub relations: Subspace,
}

impl Tensor {
    pub fn dim(&self) -> usize {
        self.right.dim() * self.left.dim() - self.relations.dim()
    }
    pub fn quotient_matrix(&self) -> Matrix {
        self.relations.quotient_matrix()
    }
}

fn check_opposite(t: &Module, n: &Module) -> Result<()> {
    if t.algebra().same_table(&n.algebra().opposite()) {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch)
    }
}

pub fn tensor(t: &Module, n: &Module) -> Result<Tensor> {
    check_opposite(t, n)?;
    let f = n.field();
    let ambient = t.dim() * n.dim();
    let it = Matrix::identity(f, t.dim());
    let inn = Matrix::identity(f, n.dim());
    let mut rel = Subspace::zero(f, ambient);
    for i in 0..n.algebra().dim() {
        let r = t.action(i).kron(&inn).sub(&it.kron(n.action(i)));
        for c in r.columns() {
            rel.insert(&c);
        }
    }
    Ok(Tensor {
        right: t.clone(),
        left: n.clone(),
        relations: rel,
    })
}

/// Matrix of T (x) f between the canonical quotient coordinates.
pub fn tensor_map(t: &Module, f: &ModuleMap) -> Result<Matrix> {
    let src = tensor(t, f.source())?;
    let tgt = tensor(t, f.target())?;
    Ok(tensor_map_between(&src, &tgt, f))
}

pub fn tensor_map_between(src: &Tensor, tgt: &Tensor, f: &ModuleMap) -> Matrix {
    let id = Matrix::identity(f.source().field(), src.right.dim());
    tgt.quotient_matrix()
        .mul(&id.kron(f.matrix()))
        .mul(&lift_matrix(&src.relations))
}

pub fn tor1(t: &Module, n: &Module) -> Result<usize> {
    check_opposite(t, n)?;
    let pres = Presentation::canonical(n);
    let m = tensor_map(t, &pres.kernel_incl)?;
    Ok(m.cols() - m.rank())
}

/// dim Tor_i(T, N), i >= 1, by dimension shifting.
pub fn tor_dim(t: &Module, n: &Module, i: usize) -> Result<usize> {
    if i == 0 {
        return Ok(tensor(t, n)?.dim());
    }
    let mut om = n.clone();
    for _ in 1..i {
        om = syzygy(&om);
    }
    tor1(t, &om)
}

/// Least n <= cutoff with the n-th syzygy projective.
pub fn proj_dim(m: &Module, cutoff: usize) -> Option<usize> {
    let mut om = m.clone();
    for n in 0..=cutoff {
        if is_projective(&om).is_some() {
            return Some(n);
        }
        om = syzygy(&om);
    }
    None
}

/// Least n <= cutoff with Tor_{n+1}(T, N) = 0 for every test module T.
pub fn flat_dim(m: &Module, cutoff: usize, tests: &[Module]) -> Result<Option<usize>> {
    let mut om = m.clone();
    for n in 0..=cutoff {
        let mut vanishes = true;
        for t in tests {
            if tor1(t, &om)? != 0 {
                vanishes = false;
                break;
            }
        }
        if vanishes {
            return Ok(Some(n));
        }
        om = syzygy(&om);
    }
    Ok(None)
}

pub fn is_flat(m: &Module, tests: &[Module]) -> Result<bool> {
    Ok(flat_dim(m, 0, tests)? == Some(0))
}

/// The right regular module, as a left module over the opposite algebra.
pub fn right_regular(alg: &Arc<Algebra>) -> Module {
    Module::regular(Arc::new(alg.opposite()))
}

/// A / bA for every basis element b, plus A itself, as right modules.
pub fn default_flat_tests(alg: &Arc<Algebra>) -> Vec<Module> {
    let a = right_regular(alg);
    let d = alg.dim();
    let mut out: Vec<Module> = Vec::new();
    for b in 0..d {
        let bvec = alg.basis_vec(b);
        let gens: Vec<Vec<u32>> = (0..d).map(|j| alg.mul(&bvec, &alg.basis_vec(j))).collect();
        let ideal = Subspace::from_vectors(alg.field(), d, &gens);
        let (q, _) = a.quotient_unchecked(&ideal);
        if !q.is_zero() && !out.contains(&q) {
            out.push(q);
        }
    }
    if !out.contains(&a) {
        out.push(a);
    }
    out
}

/// Direct sums of cyclic quotients of the right projectives `eA` with total
/// dimension at most `max_dim`.
pub fn right_test_modules(alg: &Arc<Algebra>, max_dim: usize) -> Vec<Module> {
    let op = Arc::new(alg.opposite());
    let mut blocks: Vec<Module> = Vec::new();
    for i in 0..op.cover_idempotents().len() {
        let (p, _) = Module::idempotent_projective(op.clone(), i);
        for s in p.all_submodules() {
            if p.dim() - s.dim() == 0 || p.dim() - s.dim() > max_dim {
                continue;
            }
            let (q, _) = p.quotient_unchecked(&s);
            if !blocks.contains(&q) {
                blocks.push(q);
            }
        }
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        let used: usize = chosen.iter().map(|&b| blocks[b].dim()).sum();
        if !chosen.is_empty() && seen.insert(chosen.clone()) {
            let parts: Vec<Module> = chosen.iter().map(|&b| blocks[b].clone()).collect();
            out.push(Module::direct_sum_all(op.clone(), &parts));
        }
        for b in start..blocks.len() {
            if used + blocks[b].dim() <= max_dim {
                let mut next = chosen.clone();
                next.push(b);
                stack.push((b, next));
            }
        }
    }
    out.sort_by_key(Module::dim);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn ext_between_simples_of_t2() {
        let sa = library::module("T2F2", "S_a").unwrap();
        let sb = library::module("T2F2", "S_b").unwrap();
        assert_eq!(ext1_dim(&sb, &sa).unwrap(), 1);
        assert_eq!(ext1_dim(&sa, &sb).unwrap(), 0);
    }

    #[test]
    fn tensor_with_regular_has_module_dimension() {
        let alg = library::algebra("NAK3").unwrap();
        let a = right_regular(&alg);
        for (_, m) in library::modules("NAK3").unwrap() {
            assert_eq!(tensor(&a, &m).unwrap().dim(), m.dim());
        }
    }

    #[test]
    fn tensor_rejects_wrong_side() {
        let sa = library::module("T2F2", "S_a").unwrap();
        assert_eq!(tensor(&sa, &sa).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn dimensions_of_bundled_simples() {
        let sb = library::module("T2F2", "S_b").unwrap();
        assert_eq!(proj_dim(&sb, 3), Some(1));
        let s1 = library::module("NAK3", "S1").unwrap();
        assert_eq!(proj_dim(&s1, 3), Some(2));
        assert_eq!(proj_dim(&s1, 1), None);
    }
}
