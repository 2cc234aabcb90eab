//! Dense matrices over F_p with deterministic Gaussian elimination.
//!
//! Pivots are always taken at the leftmost nonzero column, top-most
//! available row, so every reduced form and every solution returned here is
//! reproducible.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::field::PrimeField;

static DIM_CAP: AtomicUsize = AtomicUsize::new(64);

/// Largest module dimension accepted by constructors.
pub fn dim_cap() -> usize {
    DIM_CAP.load(Ordering::Relaxed)
}

pub fn set_dim_cap(cap: usize) {
    DIM_CAP.store(cap.max(1), Ordering::Relaxed);
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    f: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of `solve`: one solution (free variables set to zero) plus a
/// basis of the kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u32>,
    pub kernel: Vec<Vec<u32>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "Matrix<F{}>{}x{}", self.f.p(), self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(fm, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(f: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            f,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(f: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from row vectors of arbitrary integers, reducing mod p.
    pub fn from_rows(f: PrimeField, rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(f, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &x) in row.iter().enumerate() {
                m.data[r * cols + c] = f.reduce(x);
            }
        }
        Ok(m)
    }

    /// Builds from already-reduced row vectors.
    pub fn from_row_vecs(f: PrimeField, rows: &[Vec<u32>], cols: usize) -> Self {
        let mut m = Self::zeros(f, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            m.data[r * cols..(r + 1) * cols].copy_from_slice(row);
        }
        m
    }

    /// Builds a `rows x cols.len()` matrix whose columns are the given vectors.
    pub fn from_cols(f: PrimeField, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(f, rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, &x) in col.iter().enumerate() {
                m.data[r * cols.len() + c] = x;
            }
        }
        m
    }

    pub fn from_fn(
        f: PrimeField,
        rows: usize,
        cols: usize,
        g: impl Fn(usize, usize) -> u32,
    ) -> Self {
        let mut m = Self::zeros(f, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = g(r, c) % f.p();
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.f
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.f.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    /// Matrix product; panics on a shape mismatch (internal invariant).
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let p = self.f.p() as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for r in 0..self.rows {
            let orow = &mut out[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b as u64;
                }
            }
            for o in orow.iter_mut() {
                *o %= p;
            }
        }
        Matrix {
            f: self.f,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|x| x as u32).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let p = self.f.p() as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        let f = self.f;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        self.with_data(data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.shape(),
            other.shape(),
            "matrix difference shape mismatch"
        );
        let f = self.f;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        self.with_data(data)
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.f;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        self.with_data(data)
    }

    pub fn neg(&self) -> Matrix {
        let f = self.f;
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        self.with_data(data)
    }

    fn with_data(&self, data: Vec<u32>) -> Matrix {
        Matrix {
            f: self.f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.f, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Horizontal concatenation; all blocks must share the row count.
    pub fn hstack(f: PrimeField, rows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(f, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for r in 0..rows {
                m.data[r * cols + off..r * cols + off + b.cols].copy_from_slice(b.row(r));
            }
            off += b.cols;
        }
        m
    }

    /// Vertical concatenation; all blocks must share the column count.
    pub fn vstack(f: PrimeField, cols: usize, blocks: &[&Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix {
            f,
            rows,
            cols,
            data,
        }
    }

    pub fn block_diag(f: PrimeField, blocks: &[&Matrix]) -> Matrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(f, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            m.set_block(ro, co, b);
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        assert!(
            r0 + b.rows <= self.rows && c0 + b.cols <= self.cols,
            "block out of range"
        );
        for r in 0..b.rows {
            let start = (r0 + r) * self.cols + c0;
            self.data[start..start + b.cols].copy_from_slice(b.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.f, rows, cols, |r, c| self.get(r0 + r, c0 + c))
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.f, self.rows, idx.len(), |r, c| self.get(r, idx[c]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.f, idx.len(), self.cols, |r, c| self.get(idx[r], c))
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r2, c2) = other.shape();
        Matrix::from_fn(self.f, self.rows * r2, self.cols * c2, |r, c| {
            self.f
                .mul(self.get(r / r2, c / c2), other.get(r % r2, c % c2))
        })
    }

    /// Reduces in place to reduced row echelon form; returns pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let f = self.f;
        let p = f.p() as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..cols {
            if pr == self.rows {
                break;
            }
            let Some(r) = (pr..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if r != pr {
                for j in c..cols {
                    self.data.swap(r * cols + j, pr * cols + j);
                }
            }
            let inv = f.inv(self.data[pr * cols + c]);
            if inv != 1 {
                for j in c..cols {
                    let x = &mut self.data[pr * cols + j];
                    *x = f.mul(*x, inv);
                }
            }
            let (head, tail) = self.data.split_at_mut(pr * cols);
            let (prow, rest) = tail.split_at_mut(cols);
            for other in head.chunks_mut(cols).chain(rest.chunks_mut(cols)) {
                let factor = other[c] as u64;
                if factor == 0 {
                    continue;
                }
                let nf = p - factor;
                for j in c..cols {
                    other[j] = ((other[j] as u64 + nf * prow[j] as u64) % p) as u32;
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.row_reduce();
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (r, piv) = self.rref();
        kernel_from_rref(&r, &piv)
    }

    /// Canonical basis of the column space: reduced rows of the transpose.
    pub fn image_basis(&self) -> Vec<Vec<u32>> {
        let (r, piv) = self.transpose().rref();
        (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
    }

    /// Solves `self * x = b`. Returns `None` when inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Solution>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} entries, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let bcol = Matrix::from_cols(self.f, self.rows, &[b.to_vec()]);
        let aug = Matrix::hstack(self.f, self.rows, &[self, &bcol]);
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (i, &c) in piv.iter().enumerate() {
            x[c] = r.get(i, self.cols);
        }
        let coeff = r.block(0, 0, r.rows, self.cols);
        Ok(Some(Solution {
            particular: x,
            kernel: kernel_from_rref(&coeff, &piv),
        }))
    }

    /// Solves `self * X = B` column by column; `None` if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Option<Matrix>> {
        let g = self.generalized_inverse();
        let x = g.mul(b);
        if self.mul(&x) == *b {
            Ok(Some(x))
        } else {
            Ok(None)
        }
    }

    /// The matrix `S` with `self * S * b = b` for every `b` in the column
    /// space; `S * b` is the solution with all free variables zero.
    pub fn generalized_inverse(&self) -> Matrix {
        let id = Matrix::identity(self.f, self.rows);
        let aug = Matrix::hstack(self.f, self.rows, &[self, &id]);
        let mut r = aug;
        // Reduce only over the coefficient columns so pivots never land in the identity block.
        let piv = reduce_prefix(&mut r, self.cols);
        let mut s = Matrix::zeros(self.f, self.cols, self.rows);
        for (i, &c) in piv.iter().enumerate() {
            for j in 0..self.rows {
                s.set(c, j, r.get(i, self.cols + j));
            }
        }
        s
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let g = self.generalized_inverse();
        if self.rank() == n {
            Some(g)
        } else {
            None
        }
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }
}

/// Row-reduces using pivots only among the first `ncols` columns, applying
/// the same row operations to the remaining columns.
fn reduce_prefix(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let f = m.f;
    let p = f.p() as u64;
    let cols = m.cols;
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..ncols {
        if pr == m.rows {
            break;
        }
        let Some(r) = (pr..m.rows).find(|&r| m.data[r * cols + c] != 0) else {
            continue;
        };
        if r != pr {
            for j in 0..cols {
                m.data.swap(r * cols + j, pr * cols + j);
            }
        }
        let inv = f.inv(m.data[pr * cols + c]);
        for j in 0..cols {
            let x = &mut m.data[pr * cols + j];
            *x = f.mul(*x, inv);
        }
        let prow: Vec<u32> = m.row(pr).to_vec();
        for i in 0..m.rows {
            if i == pr {
                continue;
            }
            let factor = m.data[i * cols + c] as u64;
            if factor == 0 {
                continue;
            }
            let nf = p - factor;
            for j in 0..cols {
                let x = &mut m.data[i * cols + j];
                *x = ((*x as u64 + nf * prow[j] as u64) % p) as u32;
            }
        }
        pivots.push(c);
        pr += 1;
    }
    pivots
}

fn kernel_from_rref(r: &Matrix, piv: &[usize]) -> Vec<Vec<u32>> {
    let f = r.f;
    let n = r.cols;
    let mut is_piv = vec![false; n];
    for &c in piv {
        is_piv[c] = true;
    }
    (0..n)
        .filter(|&c| !is_piv[c])
        .map(|free| {
            let mut v = vec![0; n];
            v[free] = 1;
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(Matrix::identity(f(2), 3).kernel_basis().is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        assert_eq!(Matrix::zeros(f(2), 2, 3).kernel_basis().len(), 3);
    }

    #[test]
    fn generalized_inverse_solves_consistent_systems() {
        let a = Matrix::from_rows(f(3), &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 0]], 3).unwrap();
        let g = a.generalized_inverse();
        let b = a.mul_vec(&[1, 1, 2]);
        assert_eq!(a.mul_vec(&g.mul_vec(&b)), b);
    }

    #[test]
    fn inconsistent_system_reports_none() {
        let a = Matrix::from_rows(f(2), &[vec![1, 0], vec![1, 0]], 2).unwrap();
        assert!(a.solve(&[1, 0]).unwrap().is_none());
        assert!(a.solve(&[1]).is_err());
    }
}
