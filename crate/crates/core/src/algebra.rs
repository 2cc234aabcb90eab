//! Finite-dimensional unital associative algebras given by structure constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{PrimeField, DEFAULT_PRIME_CAP};
use crate::matrix::Matrix;

/// On-disk form of an algebra. Integers may be unreduced; loading reduces them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: u32,
    pub dim: usize,
    pub basis: Vec<String>,
    pub mul: Vec<Vec<Vec<i64>>>,
    pub unit: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotents: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    name: String,
    field: PrimeField,
    basis: Vec<String>,
    /// c[(i*d + j)*d + k] is the coefficient of e_k in e_i e_j.
    consts: Vec<u32>,
    unit: Vec<u32>,
    idempotents: Option<Vec<Vec<u32>>>,
}

impl Algebra {
    pub fn load(spec: &AlgebraSpec) -> Result<Self> {
        Self::load_with_cap(spec, DEFAULT_PRIME_CAP)
    }

    pub fn load_with_cap(spec: &AlgebraSpec, prime_cap: u32) -> Result<Self> {
        let field = PrimeField::with_cap(spec.p, prime_cap)?;
        let d = spec.dim;
        if d == 0 {
            return Err(Error::MalformedSpec(
                "algebra dimension must be positive".into(),
            ));
        }
        if spec.basis.len() != d {
            return Err(Error::MalformedSpec(format!(
                "{} basis names for dimension {d}",
                spec.basis.len()
            )));
        }
        if spec.mul.len() != d
            || spec
                .mul
                .iter()
                .any(|m| m.len() != d || m.iter().any(|v| v.len() != d))
        {
            return Err(Error::MalformedSpec("mul must be a d x d x d array".into()));
        }
        if spec.unit.len() != d {
            return Err(Error::MalformedSpec("unit must have d entries".into()));
        }
        let mut consts = vec![0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    consts[(i * d + j) * d + k] = field.reduce(spec.mul[i][j][k]);
                }
            }
        }
        let unit = spec.unit.iter().map(|&x| field.reduce(x)).collect();
        let idempotents = match &spec.idempotents {
            None => None,
            Some(list) => {
                if list.iter().any(|e| e.len() != d) {
                    return Err(Error::MalformedSpec(
                        "idempotents must have d entries".into(),
                    ));
                }
                Some(
                    list.iter()
                        .map(|e| e.iter().map(|&x| field.reduce(x)).collect())
                        .collect(),
                )
            }
        };
        let alg = Algebra {
            name: spec.name.clone().unwrap_or_else(|| "anonymous".into()),
            field,
            basis: spec.basis.clone(),
            consts,
            unit,
            idempotents,
        };
        alg.validate()?;
        Ok(alg)
    }

    pub fn to_spec(&self) -> AlgebraSpec {
        let d = self.dim();
        AlgebraSpec {
            name: Some(self.name.clone()),
            p: self.field.p(),
            dim: d,
            basis: self.basis.clone(),
            mul: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (0..d).map(|k| self.c(i, j, k) as i64).collect())
                        .collect()
                })
                .collect(),
            unit: self.unit.iter().map(|&x| x as i64).collect(),
            idempotents: self.idempotents.as_ref().map(|l| {
                l.iter()
                    .map(|e| e.iter().map(|&x| x as i64).collect())
                    .collect()
            }),
        }
    }

    /// Checks associativity on every basis triple, the unit, and the idempotents.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let eij = self.basis_product(i, j);
                for l in 0..d {
                    let left = self.mul(&eij, &self.basis_vec(l));
                    let ejl = self.basis_product(j, l);
                    let right = self.mul(&self.basis_vec(i), &ejl);
                    if left != right {
                        return Err(Error::NonAssociative(i, j, l));
                    }
                }
            }
        }
        for i in 0..d {
            let e = self.basis_vec(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::BadUnit(i));
            }
        }
        if let Some(list) = &self.idempotents {
            if list.is_empty() {
                return Err(Error::BadIdempotents("empty list".into()));
            }
            let zero = vec![0; d];
            let mut total = zero.clone();
            for (a, ea) in list.iter().enumerate() {
                if self.mul(ea, ea) != *ea {
                    return Err(Error::BadIdempotents(format!(
                        "idempotent {a} does not square to itself"
                    )));
                }
                if *ea == zero {
                    return Err(Error::BadIdempotents(format!("idempotent {a} is zero")));
                }
                for (b, eb) in list.iter().enumerate() {
                    if a != b && self.mul(ea, eb) != zero {
                        return Err(Error::BadIdempotents(format!(
                            "idempotents {a} and {b} are not orthogonal"
                        )));
                    }
                }
                total = self.add(&total, ea);
            }
            if total != self.unit {
                return Err(Error::BadIdempotents(
                    "idempotents do not sum to the unit".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }
    pub fn unit(&self) -> &[u32] {
        &self.unit
    }
    pub fn idempotents(&self) -> Option<&[Vec<u32>]> {
        self.idempotents.as_deref()
    }

    /// Idempotents used for projective covers: the supplied ones, or the unit alone.
    pub fn cover_idempotents(&self) -> Vec<Vec<u32>> {
        match &self.idempotents {
            Some(l) => l.clone(),
            None => vec![self.unit.clone()],
        }
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> u32 {
        let d = self.dim();
        self.consts[(i * d + j) * d + k]
    }

    /// Compares structure constants, units and field, ignoring names.
    pub fn same_table(&self, other: &Algebra) -> bool {
        self.field == other.field && self.consts == other.consts && self.unit == other.unit
    }

    pub fn basis_vec(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec<u32> {
        (0..self.dim()).map(|k| self.c(i, j, k)).collect()
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter()
            .zip(y)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect()
    }

    /// Product of two algebra elements given in coordinates.
    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let d = self.dim();
        let f = self.field;
        let mut out = vec![0; d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                if y[j] == 0 {
                    continue;
                }
                let s = f.mul(x[i], y[j]);
                for k in 0..d {
                    let c = self.c(i, j, k);
                    if c != 0 {
                        out[k] = f.add(out[k], f.mul(s, c));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y -> x y` on A.
    pub fn left_mult(&self, x: &[u32]) -> Matrix {
        let d = self.dim();
        let cols: Vec<Vec<u32>> = (0..d).map(|j| self.mul(x, &self.basis_vec(j))).collect();
        Matrix::from_cols(self.field, d, &cols)
    }

    /// Matrix of `y -> y x` on A.
    pub fn right_mult(&self, x: &[u32]) -> Matrix {
        let d = self.dim();
        let cols: Vec<Vec<u32>> = (0..d).map(|j| self.mul(&self.basis_vec(j), x)).collect();
        Matrix::from_cols(self.field, d, &cols)
    }

    /// The opposite algebra: structure constants transposed in the first two indices.
    pub fn opposite(&self) -> Algebra {
        let d = self.dim();
        let mut consts = vec![0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    consts[(i * d + j) * d + k] = self.c(j, i, k);
                }
            }
        }
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        Algebra {
            name,
            field: self.field,
            basis: self.basis.clone(),
            consts,
            unit: self.unit.clone(),
            idempotents: self.idempotents.clone(),
        }
    }

    /// True when every supplied idempotent e satisfies dim eAe = 1. Then each
    /// Ae has simple top, and covers built from homogeneous irredundant
    /// generators are projective covers.
    pub fn has_local_idempotents(&self) -> bool {
        let Some(list) = &self.idempotents else {
            return false;
        };
        list.iter().all(|e| {
            let vecs: Vec<Vec<u32>> = (0..self.dim())
                .map(|j| self.mul(&self.mul(e, &self.basis_vec(j)), e))
                .collect();
            crate::subspace::Subspace::from_vectors(self.field, self.dim(), &vecs).dim() == 1
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_f2() -> AlgebraSpec {
        AlgebraSpec {
            name: Some("F2".into()),
            p: 2,
            dim: 1,
            basis: vec!["1".into()],
            mul: vec![vec![vec![1]]],
            unit: vec![1],
            idempotents: None,
        }
    }

    #[test]
    fn field_algebra_loads_and_is_self_opposite() {
        let a = Algebra::load(&field_f2()).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(a.opposite().same_table(&a));
    }

    #[test]
    fn entries_are_reduced_on_load() {
        let mut s = field_f2();
        s.mul = vec![vec![vec![3]]];
        s.unit = vec![-1];
        let a = Algebra::load(&s).unwrap();
        assert_eq!(a.to_spec().mul, vec![vec![vec![1]]]);
        assert_eq!(a.unit(), &[1]);
    }

    #[test]
    fn bad_unit_rejected() {
        let mut s = field_f2();
        s.unit = vec![0];
        assert_eq!(Algebra::load(&s), Err(Error::BadUnit(0)));
    }
}
