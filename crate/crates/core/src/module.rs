//! Left modules given by action matrices, and module maps.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{dim_cap, Matrix};
use crate::subspace::{unit_vec, Subspace};

#[derive(Clone, Debug)]
pub struct Module {
    alg: Arc<Algebra>,
    dim: usize,
    action: Vec<Matrix>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same_table(&other.alg) && self.dim == other.dim && self.action == other.action
    }
}
impl Eq for Module {}

impl Module {
    /// Builds a module and checks the module axioms.
    pub fn new(alg: Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        if dim > dim_cap() {
            return Err(Error::DimensionCap {
                dim,
                cap: dim_cap(),
            });
        }
        if action.len() != alg.dim() {
            return Err(Error::NotModule(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                alg.dim()
            )));
        }
        for (i, a) in action.iter().enumerate() {
            if a.shape() != (dim, dim) || a.field() != alg.field() {
                return Err(Error::NotModule(format!(
                    "action matrix {i} has the wrong shape or field"
                )));
            }
        }
        let m = Self { alg, dim, action };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.alg.dim();
        for i in 0..d {
            for j in 0..d {
                let lhs = self.action[i].mul(&self.action[j]);
                let rhs = self.act(&self.alg.basis_product(i, j));
                if lhs != rhs {
                    return Err(Error::NotModule(format!(
                        "rho(e{i}) rho(e{j}) != rho(e{i} e{j})"
                    )));
                }
            }
        }
        if !self.act(self.alg.unit()).is_identity() {
            return Err(Error::NotModule(
                "the unit does not act as the identity".into(),
            ));
        }
        Ok(())
    }

    pub fn zero(alg: Arc<Algebra>) -> Self {
        let f = alg.field();
        let action = (0..alg.dim()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        Self {
            alg,
            dim: 0,
            action,
        }
    }

    /// A as a left module over itself.
    pub fn regular(alg: Arc<Algebra>) -> Self {
        let action = (0..alg.dim())
            .map(|i| alg.left_mult(&alg.basis_vec(i)))
            .collect();
        let dim = alg.dim();
        Self { alg, dim, action }
    }

    pub fn free(alg: Arc<Algebra>, k: usize) -> Self {
        let a = Self::regular(alg.clone());
        Self::direct_sum_all(alg, &vec![a; k])
    }

    /// The projective module A e for the idempotent with index `i` in
    /// `cover_idempotents()`, with basis the reduced basis of the left ideal.
    pub fn idempotent_projective(alg: Arc<Algebra>, i: usize) -> (Self, Subspace) {
        let e = &alg.cover_idempotents()[i];
        let d = alg.dim();
        let vecs: Vec<Vec<u32>> = (0..d).map(|j| alg.mul(&alg.basis_vec(j), e)).collect();
        let ideal = Subspace::from_vectors(alg.field(), d, &vecs);
        let regular = Self::regular(alg.clone());
        let action = regular
            .action
            .iter()
            .map(|a| ideal.coords_matrix().mul(a).mul(&ideal.basis_matrix()))
            .collect();
        (
            Self {
                alg,
                dim: ideal.dim(),
                action,
            },
            ideal,
        )
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }
    pub fn field(&self) -> PrimeField {
        self.alg.field()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }
    pub fn action(&self, i: usize) -> &Matrix {
        &self.action[i]
    }
    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    pub fn same_algebra(&self, other: &Module) -> Result<()> {
        if self.alg.same_table(&other.alg) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Action of an algebra element given in coordinates.
    pub fn act(&self, x: &[u32]) -> Matrix {
        let f = self.field();
        let mut m = Matrix::zeros(f, self.dim, self.dim);
        for (k, &c) in x.iter().enumerate() {
            if c != 0 {
                m = m.add(&self.action[k].scale(c));
            }
        }
        m
    }

    /// Module with action `g rho g^-1` (change of basis by an invertible `g`).
    pub fn conjugate(&self, g: &Matrix) -> Option<Self> {
        let gi = g.inverse()?;
        let action = self.action.iter().map(|a| g.mul(a).mul(&gi)).collect();
        Some(Self {
            alg: self.alg.clone(),
            dim: self.dim,
            action,
        })
    }

    /// The linear dual, a module over `op`, which must carry the opposite
    /// multiplication table.
    pub fn dual(&self, op: Arc<Algebra>) -> Module {
        debug_assert!(op.same_table(&self.alg.opposite()));
        let action = self.action.iter().map(Matrix::transpose).collect();
        Self {
            alg: op,
            dim: self.dim,
            action,
        }
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        Self::direct_sum_all(self.alg.clone(), &[self.clone(), other.clone()])
    }

    pub fn direct_sum_all(alg: Arc<Algebra>, parts: &[Module]) -> Module {
        let f = alg.field();
        let dim = parts.iter().map(|m| m.dim).sum();
        let action = (0..alg.dim())
            .map(|i| {
                let blocks: Vec<&Matrix> = parts.iter().map(|m| &m.action[i]).collect();
                Matrix::block_diag(f, &blocks)
            })
            .collect();
        Module { alg, dim, action }
    }

    /// Span of `{e_i v}`; since the unit is a combination of basis elements
    /// this is already the submodule generated by the vectors.
    pub fn submodule_generated<'a>(
        &self,
        vecs: impl IntoIterator<Item = &'a Vec<u32>>,
    ) -> Subspace {
        let mut s = Subspace::zero(self.field(), self.dim);
        for v in vecs {
            for a in &self.action {
                s.insert(&a.mul_vec(v));
            }
        }
        s
    }

    pub fn check_stable(&self, s: &Subspace) -> Result<()> {
        if s.ambient() != self.dim {
            return Err(Error::DimensionMismatch(
                "subspace lives in a different ambient space".into(),
            ));
        }
        for (i, a) in self.action.iter().enumerate() {
            if s.basis().iter().any(|v| !s.contains(&a.mul_vec(v))) {
                return Err(Error::NotActionStable(i));
            }
        }
        Ok(())
    }

    /// The submodule on the reduced basis of `s`, with its inclusion.
    pub fn submodule(&self, s: &Subspace) -> Result<(Module, ModuleMap)> {
        self.check_stable(s)?;
        Ok(self.submodule_unchecked(s))
    }

    pub(crate) fn submodule_unchecked(&self, s: &Subspace) -> (Module, ModuleMap) {
        let b = s.basis_matrix();
        let c = s.coords_matrix();
        let action = self.action.iter().map(|a| c.mul(a).mul(&b)).collect();
        let sub = Module {
            alg: self.alg.clone(),
            dim: s.dim(),
            action,
        };
        let incl = ModuleMap::new_unchecked(sub.clone(), self.clone(), b);
        (sub, incl)
    }

    /// The quotient on the standard complement of `s`, with its projection.
    pub fn quotient(&self, s: &Subspace) -> Result<(Module, ModuleMap)> {
        self.check_stable(s)?;
        Ok(self.quotient_unchecked(s))
    }

    pub(crate) fn quotient_unchecked(&self, s: &Subspace) -> (Module, ModuleMap) {
        let q = s.quotient_matrix();
        let lift = lift_matrix(s);
        let action = self.action.iter().map(|a| q.mul(a).mul(&lift)).collect();
        let quo = Module {
            alg: self.alg.clone(),
            dim: self.dim - s.dim(),
            action,
        };
        let proj = ModuleMap::new_unchecked(self.clone(), quo.clone(), q);
        (quo, proj)
    }

    /// All submodules, by breadth-first closure. Only for small modules.
    pub fn all_submodules(&self) -> Vec<Subspace> {
        let f = self.field();
        let zero = Subspace::zero(f, self.dim);
        let mut seen = std::collections::HashSet::new();
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        let mut out = Vec::new();
        while let Some(s) = frontier.pop() {
            for v in all_vectors(f, self.dim) {
                if s.contains(&v) {
                    continue;
                }
                let t = s.sum(&self.submodule_generated([&v]));
                if seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
            out.push(s);
        }
        out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.basis().cmp(b.basis())));
        out
    }
}

/// Columns are the standard vectors at the non-pivot positions of `s`.
pub(crate) fn lift_matrix(s: &Subspace) -> Matrix {
    let np = s.nonpivots();
    let cols: Vec<Vec<u32>> = np.iter().map(|&j| unit_vec(s.ambient(), j)).collect();
    Matrix::from_cols(s.field(), s.ambient(), &cols)
}

/// Every vector of F_p^n, in lexicographic order.
pub fn all_vectors(f: PrimeField, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let p = f.p() as u64;
    let total = p.pow(n as u32);
    (0..total).map(move |mut x| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = (x % p) as u32;
            x /= p;
        }
        v
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: Module,
    target: Module,
    matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: Module, target: Module, matrix: Matrix) -> Result<Self> {
        source.same_algebra(&target)?;
        if matrix.shape() != (target.dim, source.dim) {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim,
                source.dim
            )));
        }
        let m = Self {
            source,
            target,
            matrix,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: Module, target: Module, matrix: Matrix) -> Self {
        debug_assert_eq!(matrix.shape(), (target.dim, source.dim));
        Self {
            source,
            target,
            matrix,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.source.alg.dim() {
            if self.target.action[i].mul(&self.matrix) != self.matrix.mul(&self.source.action[i]) {
                return Err(Error::NotModuleMap(format!(
                    "does not commute with the action of e{i}"
                )));
            }
        }
        Ok(())
    }

    pub fn identity(m: &Module) -> Self {
        Self::new_unchecked(m.clone(), m.clone(), Matrix::identity(m.field(), m.dim))
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        Self::new_unchecked(
            source.clone(),
            target.clone(),
            Matrix::zeros(source.field(), target.dim, source.dim),
        )
    }

    pub fn source(&self) -> &Module {
        &self.source
    }
    pub fn target(&self) -> &Module {
        &self.target
    }
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &ModuleMap) -> ModuleMap {
        assert_eq!(
            first.target.dim, self.source.dim,
            "composition shape mismatch"
        );
        Self::new_unchecked(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix),
        )
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&other.matrix),
        )
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.scale(c),
        )
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::from_vectors(
            self.source.field(),
            self.source.dim,
            &self.matrix.kernel_basis(),
        )
    }

    pub fn image(&self) -> Subspace {
        Subspace::column_space(&self.matrix)
    }

    pub fn kernel_module(&self) -> (Module, ModuleMap) {
        self.source.submodule_unchecked(&self.kernel())
    }

    pub fn image_module(&self) -> (Module, ModuleMap) {
        self.target.submodule_unchecked(&self.image())
    }

    pub fn cokernel(&self) -> (Module, ModuleMap) {
        self.target.quotient_unchecked(&self.image())
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim
    }

    pub fn is_iso(&self) -> bool {
        self.source.dim == self.target.dim && self.is_injective()
    }

    /// Row-major flattening, the coordinates used for Hom spaces.
    pub fn to_vec(&self) -> Vec<u32> {
        self.matrix.entries().to_vec()
    }

    pub fn from_vec(source: &Module, target: &Module, v: &[u32]) -> ModuleMap {
        let m = Matrix::from_fn(source.field(), target.dim, source.dim, |r, c| {
            v[r * source.dim + c]
        });
        Self::new_unchecked(source.clone(), target.clone(), m)
    }
}

/// Direct sum of maps, block diagonal.
pub fn map_direct_sum(a: &ModuleMap, b: &ModuleMap) -> ModuleMap {
    let f = a.source.field();
    ModuleMap::new_unchecked(
        a.source.direct_sum(&b.source),
        a.target.direct_sum(&b.target),
        Matrix::block_diag(f, &[&a.matrix, &b.matrix]),
    )
}

/// F_p-basis of Hom_A(M, N), solved from the intertwining equations.
pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<ModuleMap>> {
    m.same_algebra(n)?;
    Ok(hom_basis_vectors(m, n)
        .iter()
        .map(|v| ModuleMap::from_vec(m, n, v))
        .collect())
}

/// Hom_A(M, N) as vectors in row-major coordinates.
pub fn hom_basis_vectors(m: &Module, n: &Module) -> Vec<Vec<u32>> {
    let f = m.field();
    let (dm, dn) = (m.dim, n.dim);
    if dm == 0 || dn == 0 {
        return Vec::new();
    }
    let idm = Matrix::identity(f, dm);
    let idn = Matrix::identity(f, dn);
    let blocks: Vec<Matrix> = (0..m.alg.dim())
        .map(|i| {
            n.action[i]
                .kron(&idm)
                .sub(&idn.kron(&m.action[i].transpose()))
        })
        .collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    Matrix::vstack(f, dm * dn, &refs).kernel_basis()
}

/// A canonical projective cover by idempotent projectives `A e_i`.
#[derive(Clone, Debug)]
pub struct Cover {
    /// Index into `cover_idempotents()` for each summand.
    pub summands: Vec<usize>,
    /// Image in M of the idempotent generating each summand.
    pub generators: Vec<Vec<u32>>,
    pub map: ModuleMap,
}

/// Homogeneous generators: greedy over reduced bases of `e_i M`, then pruned
/// until irredundant.
pub fn canonical_generators(m: &Module) -> Vec<(usize, Vec<u32>)> {
    let alg = m.algebra().clone();
    let idems = alg.cover_idempotents();
    let mut kept: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut span = Subspace::zero(m.field(), m.dim);
    for (i, e) in idems.iter().enumerate() {
        let part = Subspace::column_space(&m.act(e));
        for v in part.basis() {
            if !span.contains(v) {
                span = span.sum(&m.submodule_generated([v]));
                kept.push((i, v.clone()));
            }
        }
    }
    let mut t = 0;
    while t < kept.len() {
        let others: Vec<&Vec<u32>> = kept
            .iter()
            .enumerate()
            .filter(|&(s, _)| s != t)
            .map(|(_, g)| &g.1)
            .collect();
        let gen = m.submodule_generated(others);
        if gen.contains(&kept[t].1) {
            kept.remove(t);
        } else {
            t += 1;
        }
    }
    kept
}

pub fn projective_cover(m: &Module) -> Cover {
    let gens = canonical_generators(m);
    let alg = m.algebra().clone();
    let mut parts = Vec::new();
    let mut cols: Vec<Vec<u32>> = Vec::new();
    for (i, g) in &gens {
        let (p, ideal) = Module::idempotent_projective(alg.clone(), *i);
        for b in ideal.basis() {
            cols.push(m.act(b).mul_vec(g));
        }
        parts.push(p);
    }
    let total = Module::direct_sum_all(alg, &parts);
    let matrix = Matrix::from_cols(m.field(), m.dim, &cols);
    Cover {
        summands: gens.iter().map(|g| g.0).collect(),
        generators: gens.into_iter().map(|g| g.1).collect(),
        map: ModuleMap::new_unchecked(total, m.clone(), matrix),
    }
}

/// Epimorphism A^k -> M sending the j-th unit to the j-th generator
/// (default: the standard basis of M).
pub fn free_cover(m: &Module, generators: Option<&[Vec<u32>]>) -> Result<ModuleMap> {
    let default: Vec<Vec<u32>>;
    let gens = match generators {
        Some(g) => g,
        None => {
            default = (0..m.dim).map(|i| unit_vec(m.dim, i)).collect();
            &default
        }
    };
    if gens.iter().any(|g| g.len() != m.dim) {
        return Err(Error::DimensionMismatch(
            "generator length differs from module dimension".into(),
        ));
    }
    let span = m.submodule_generated(gens.iter());
    if span.dim() != m.dim {
        return Err(Error::NotGenerating {
            span: span.dim(),
            dim: m.dim,
        });
    }
    let alg = m.algebra().clone();
    let d = alg.dim();
    let mut cols = Vec::with_capacity(gens.len() * d);
    for g in gens {
        for j in 0..d {
            cols.push(m.action[j].mul_vec(g));
        }
    }
    let free = Module::free(alg, gens.len());
    Ok(ModuleMap::new_unchecked(
        free,
        m.clone(),
        Matrix::from_cols(m.field(), m.dim, &cols),
    ))
}

/// Evidence that M is projective: an epimorphism from a projective module
/// together with a module-map section.
#[derive(Clone, Debug)]
pub struct ProjectivityWitness {
    pub cover: ModuleMap,
    pub section: ModuleMap,
}

/// Monomorphism into an injective module: the dual of a projective cover of
/// the dual.
pub fn injective_envelope(m: &Module) -> ModuleMap {
    let op = Arc::new(m.alg.opposite());
    let cover = projective_cover(&m.dual(op));
    let injective = cover.map.source.dual(m.alg.clone());
    ModuleMap::new_unchecked(m.clone(), injective, cover.map.matrix.transpose())
}

/// Decides projectivity by searching for an equivariant section of a cover.
pub fn is_projective(m: &Module) -> Option<ProjectivityWitness> {
    if m.alg.has_local_idempotents() {
        let cover = projective_cover(m);
        if !cover.map.is_iso() {
            return None;
        }
        let inv = cover.map.matrix.inverse().expect("iso has an inverse");
        let section = ModuleMap::new_unchecked(m.clone(), cover.map.source.clone(), inv);
        return Some(ProjectivityWitness {
            cover: cover.map,
            section,
        });
    }
    let cover = free_cover(m, None).expect("the standard basis generates");
    section_of(&cover).map(|section| ProjectivityWitness { cover, section })
}

/// A module map `s` with `pi s = id`, if one exists.
pub fn section_of(pi: &ModuleMap) -> Option<ModuleMap> {
    let m = &pi.target;
    let p = &pi.source;
    let basis = hom_basis_vectors(m, p);
    let f = m.field();
    let cols: Vec<Vec<u32>> = basis
        .iter()
        .map(|v| {
            pi.matrix
                .mul(&ModuleMap::from_vec(m, p, v).matrix)
                .entries()
                .to_vec()
        })
        .collect();
    let sys = Matrix::from_cols(f, m.dim * m.dim, &cols);
    let target = Matrix::identity(f, m.dim).entries().to_vec();
    let sol = sys.solve(&target).ok()??;
    Some(combine(m, p, &basis, &sol.particular))
}

/// A module map `h` with `g h = rhs`, if one exists.
pub fn factor_through(g: &ModuleMap, rhs: &ModuleMap) -> Option<ModuleMap> {
    let src = &rhs.source;
    let mid = &g.source;
    let f = src.field();
    let basis = hom_basis_vectors(src, mid);
    let cols: Vec<Vec<u32>> = basis
        .iter()
        .map(|v| {
            g.matrix
                .mul(&ModuleMap::from_vec(src, mid, v).matrix)
                .entries()
                .to_vec()
        })
        .collect();
    let sys = Matrix::from_cols(f, rhs.target.dim * src.dim, &cols);
    let sol = sys.solve(rhs.matrix.entries()).ok()??;
    Some(combine(src, mid, &basis, &sol.particular))
}

/// Linear combination of Hom-space basis vectors.
pub fn combine(source: &Module, target: &Module, basis: &[Vec<u32>], coeffs: &[u32]) -> ModuleMap {
    let f = source.field();
    let mut v = vec![0; source.dim * target.dim];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (x, &y) in v.iter_mut().zip(b) {
            *x = f.add(*x, f.mul(c, y));
        }
    }
    ModuleMap::from_vec(source, target, &v)
}

/// Short exact sequence 0 -> B -i-> E -q-> A -> 0.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub i: ModuleMap,
    pub q: ModuleMap,
}

impl ShortExactSequence {
    pub fn validate(&self) -> Result<()> {
        if self.i.target != self.q.source {
            return Err(Error::NotModuleMap("middle terms differ".into()));
        }
        if !self.i.is_injective() {
            return Err(Error::NotExact(1));
        }
        if !self.q.is_surjective() {
            return Err(Error::NotExact(-1));
        }
        if !self.q.compose(&self.i).matrix.is_zero()
            || self.i.rank() + self.q.rank() != self.i.target.dim
        {
            return Err(Error::NotExact(0));
        }
        Ok(())
    }

    pub fn sub(&self) -> &Module {
        self.i.source()
    }
    pub fn middle(&self) -> &Module {
        self.i.target()
    }
    pub fn quotient(&self) -> &Module {
        self.q.target()
    }

    /// A retraction `r` with `r i = id`, witnessing that the sequence splits.
    pub fn retraction(&self) -> Option<ModuleMap> {
        let b = self.sub();
        let e = self.middle();
        let basis = hom_basis_vectors(e, b);
        let f = b.field();
        let cols: Vec<Vec<u32>> = basis
            .iter()
            .map(|v| {
                ModuleMap::from_vec(e, b, v)
                    .matrix
                    .mul(&self.i.matrix)
                    .entries()
                    .to_vec()
            })
            .collect();
        let sys = Matrix::from_cols(f, b.dim * b.dim, &cols);
        let sol = sys.solve(Matrix::identity(f, b.dim).entries()).ok()??;
        Some(combine(e, b, &basis, &sol.particular))
    }
}

/// Searches Hom(M, N) exhaustively for an isomorphism. Only for small Hom spaces.
pub fn find_isomorphism(m: &Module, n: &Module) -> Option<ModuleMap> {
    if m.dim != n.dim || m.same_algebra(n).is_err() {
        return None;
    }
    if m.dim == 0 {
        return Some(ModuleMap::zero(m, n));
    }
    let basis = hom_basis_vectors(m, n);
    all_vectors(m.field(), basis.len())
        .map(|c| combine(m, n, &basis, &c))
        .find(|h| h.is_iso())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn regular_module_satisfies_axioms() {
        for name in ["F2", "T2F2", "NAK3"] {
            let alg = library::algebra(name).unwrap();
            Module::regular(alg).validate().unwrap();
        }
    }

    #[test]
    fn quotient_by_everything_is_zero() {
        let alg = library::algebra("T2F2").unwrap();
        let a = Module::regular(alg);
        let (q, _) = a.quotient(&Subspace::full(a.field(), a.dim())).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn identity_is_in_endomorphisms() {
        let alg = library::algebra("NAK3").unwrap();
        let m = Module::regular(alg);
        let ends = hom_space(&m, &m).unwrap();
        let span = Subspace::from_vectors(
            m.field(),
            m.dim() * m.dim(),
            &ends.iter().map(|h| h.to_vec()).collect::<Vec<_>>(),
        );
        assert!(span.contains(Matrix::identity(m.field(), m.dim()).entries()));
    }

    #[test]
    fn injective_envelopes_of_simples() {
        let sa = library::module("T2F2", "S_a").unwrap();
        let sb = library::module("T2F2", "S_b").unwrap();
        let ea = injective_envelope(&sa);
        ea.validate().unwrap();
        assert!(ea.is_injective());
        assert_eq!(ea.target().dim(), 2);
        assert_eq!(injective_envelope(&sb).target().dim(), 1);
        for m in [&sa, &sb] {
            assert_eq!(crate::homological::ext1_dim(m, ea.target()).unwrap(), 0);
        }
    }
}
