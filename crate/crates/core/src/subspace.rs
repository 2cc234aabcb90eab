//! Subspaces of F_p^n kept in reduced row echelon form, which makes the
//! stored basis canonical: two subspaces are equal iff their bases are.

use crate::field::PrimeField;
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    f: PrimeField,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(f: PrimeField, ambient: usize) -> Self {
        Self {
            f,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(f: PrimeField, ambient: usize) -> Self {
        let rows = (0..ambient).map(|i| unit_vec(ambient, i)).collect();
        Self {
            f,
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_vectors<'a>(
        f: PrimeField,
        ambient: usize,
        vecs: impl IntoIterator<Item = &'a Vec<u32>>,
    ) -> Self {
        let mut s = Self::zero(f, ambient);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    /// Span of the columns of `m`.
    pub fn column_space(m: &Matrix) -> Self {
        let rows = m.image_basis();
        Self::from_rref_rows(m.field(), m.rows(), rows)
    }

    /// Coordinate subspace spanned by the given standard basis vectors.
    pub fn coordinate(f: PrimeField, ambient: usize, coords: &[usize]) -> Self {
        let mut c = coords.to_vec();
        c.sort_unstable();
        c.dedup();
        let rows = c.iter().map(|&i| unit_vec(ambient, i)).collect();
        Self {
            f,
            ambient,
            rows,
            pivots: c,
        }
    }

    fn from_rref_rows(f: PrimeField, ambient: usize, rows: Vec<Vec<u32>>) -> Self {
        let pivots = rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("zero row in rref"))
            .collect();
        Self {
            f,
            ambient,
            rows,
            pivots,
        }
    }

    /// Accepts rows claimed to be in reduced echelon form; `None` if they are not.
    pub fn from_rref_checked(f: PrimeField, ambient: usize, rows: Vec<Vec<u32>>) -> Option<Self> {
        if rows
            .iter()
            .any(|r| r.len() != ambient || r.iter().any(|&x| x >= f.p()))
        {
            return None;
        }
        let m = Matrix::from_row_vecs(f, &rows, ambient);
        let (r, piv) = m.rref();
        if piv.len() != rows.len() || r.to_rows() != rows {
            return None;
        }
        Some(Self::from_rref_rows(f, ambient, rows))
    }

    pub fn field(&self) -> PrimeField {
        self.f
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns not occupied by a pivot; the standard vectors there span a complement.
    pub fn nonpivots(&self) -> Vec<usize> {
        let mut is_piv = vec![false; self.ambient];
        for &c in &self.pivots {
            is_piv[c] = true;
        }
        (0..self.ambient).filter(|&c| !is_piv[c]).collect()
    }

    /// Subtracts the components along pivot columns.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.f;
        let mut w = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let a = w[c];
            if a == 0 {
                continue;
            }
            for (x, &r) in w.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(a, r));
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` lies outside.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        if self.contains(v) {
            Some(self.pivots.iter().map(|&c| v[c]).collect())
        } else {
            None
        }
    }

    /// Image of `v` in the quotient, in coordinates indexed by `nonpivots()`.
    pub fn quotient_coords(&self, v: &[u32]) -> Vec<u32> {
        let w = self.reduce(v);
        self.nonpivots().into_iter().map(|c| w[c]).collect()
    }

    /// Adds `v`, keeping reduced form. Returns true if the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(
            v.len(),
            self.ambient,
            "vector length does not match ambient dimension"
        );
        let f = self.f;
        let mut w = self.reduce(v);
        let Some(c) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[c]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let a = row[c];
            if a != 0 {
                for (x, &y) in row.iter_mut().zip(&w) {
                    *x = f.sub(*x, f.mul(a, y));
                }
            }
        }
        let pos = self.pivots.partition_point(|&p| p < c);
        self.rows.insert(pos, w);
        self.pivots.insert(pos, c);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v);
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.f, self.ambient);
        }
        // u = B c lies in other iff its quotient coordinates vanish.
        let b = self.basis_matrix();
        let q = other.quotient_matrix();
        let coeffs = q.mul(&b).kernel_basis();
        let vecs: Vec<Vec<u32>> = coeffs.iter().map(|c| b.mul_vec(c)).collect();
        Subspace::from_vectors(self.f, self.ambient, &vecs)
    }

    /// `ambient x dim` matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_cols(self.f, self.ambient, &self.rows)
    }

    /// `(ambient - dim) x ambient` matrix of the canonical quotient projection.
    pub fn quotient_matrix(&self) -> Matrix {
        let np = self.nonpivots();
        let mut q = Matrix::zeros(self.f, np.len(), self.ambient);
        for j in 0..self.ambient {
            let mut e = vec![0; self.ambient];
            e[j] = 1;
            for (i, x) in self.quotient_coords(&e).into_iter().enumerate() {
                q.set(i, j, x);
            }
        }
        q
    }

    /// `dim x ambient` matrix sending a vector of the subspace to its coordinates.
    pub fn coords_matrix(&self) -> Matrix {
        let mut c = Matrix::zeros(self.f, self.dim(), self.ambient);
        for (i, &p) in self.pivots.iter().enumerate() {
            c.set(i, p, 1);
        }
        c
    }

    pub fn image_under(&self, m: &Matrix) -> Subspace {
        let vecs: Vec<Vec<u32>> = self.rows.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::from_vectors(self.f, m.rows(), &vecs)
    }

    /// `{x : m x in self}`.
    pub fn preimage_under(&self, m: &Matrix) -> Subspace {
        let q = self.quotient_matrix();
        let k = q.mul(m).kernel_basis();
        Subspace::from_vectors(self.f, m.cols(), &k)
    }

    /// Coordinates where some basis vector is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|&c| self.rows.iter().any(|r| r[c] != 0))
            .collect()
    }

    /// Re-expresses a subspace of `self` in the coordinates of `self`'s basis.
    pub fn relative(&self, inner: &Subspace) -> Option<Subspace> {
        let vecs: Option<Vec<Vec<u32>>> = inner.rows.iter().map(|v| self.coords(v)).collect();
        Some(Subspace::from_vectors(self.f, self.dim(), &vecs?))
    }

    /// Embeds a subspace given in this subspace's coordinates back into the ambient space.
    pub fn lift(&self, inner: &Subspace) -> Subspace {
        let b = self.basis_matrix();
        inner.image_under(&b)
    }
}

pub fn unit_vec(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_basis_is_order_independent() {
        let f = PrimeField::new(3).unwrap();
        let a = vec![1, 2, 0];
        let b = vec![0, 1, 1];
        let s1 = Subspace::from_vectors(f, 3, [&a, &b]);
        let s2 = Subspace::from_vectors(f, 3, [&b, &a]);
        assert_eq!(s1, s2);
        assert_eq!(s1.dim(), 2);
    }

    #[test]
    fn intersection_and_sum_dimensions() {
        let f = PrimeField::new(2).unwrap();
        let u = Subspace::coordinate(f, 3, &[0, 1]);
        let w = Subspace::coordinate(f, 3, &[1, 2]);
        assert_eq!(u.intersection(&w).dim(), 1);
        assert_eq!(u.sum(&w).dim(), 3);
    }

    #[test]
    fn quotient_matrix_kills_subspace() {
        let f = PrimeField::new(5).unwrap();
        let s = Subspace::from_vectors(f, 3, [&vec![1, 2, 3]]);
        let q = s.quotient_matrix();
        assert!(q.mul_vec(&[1, 2, 3]).iter().all(|&x| x == 0));
        assert_eq!(q.rank(), 2);
    }
}
