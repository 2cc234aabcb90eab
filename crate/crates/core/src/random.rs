//! Seeded random modules and complexes for tests, the acceptance suite and the
//! bench.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::complex::{
    chain_hom_vectors, combine_chain, ext1_ch, ChainComplex, ChainMap, ComplexSes,
};
use crate::cotorsion::LiftingProblem;
use crate::homological::ext1;
use crate::matrix::Matrix;
use crate::module::{combine, hom_basis_vectors, projective_cover, Module, ModuleMap};
use crate::oracle::cyclic_indecomposables;
use crate::subspace::Subspace;

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector<R: Rng>(rng: &mut R, p: u32, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..p)).collect()
}

pub fn random_invertible<R: Rng>(rng: &mut R, alg: &Algebra, n: usize) -> Matrix {
    let f = alg.field();
    loop {
        let entries: Vec<Vec<u32>> = (0..n).map(|_| random_vector(rng, f.p(), n)).collect();
        let m = Matrix::from_row_vecs(f, &entries, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// Random direct sum of cyclic indecomposables with dimension in `0..=max_dim`,
/// in a random basis.
pub fn random_module<R: Rng>(rng: &mut R, alg: &Arc<Algebra>, max_dim: usize) -> Module {
    let pieces = cyclic_indecomposables(alg);
    let target = rng.gen_range(0..=max_dim);
    let mut parts = Vec::new();
    let mut used = 0;
    loop {
        let fitting: Vec<&Module> = pieces
            .iter()
            .map(|(_, m)| m)
            .filter(|m| used + m.dim() <= target)
            .collect();
        if fitting.is_empty() {
            break;
        }
        let m = fitting[rng.gen_range(0..fitting.len())];
        used += m.dim();
        parts.push(m.clone());
    }
    let m = Module::direct_sum_all(alg.clone(), &parts);
    let g = random_invertible(rng, alg, m.dim());
    m.conjugate(&g).expect("invertible")
}

pub fn random_nonzero_module<R: Rng>(rng: &mut R, alg: &Arc<Algebra>, max_dim: usize) -> Module {
    loop {
        let m = random_module(rng, alg, max_dim.max(1));
        if !m.is_zero() {
            return m;
        }
    }
}

/// Uniform element of Hom_A(M, N).
pub fn random_hom<R: Rng>(rng: &mut R, m: &Module, n: &Module) -> ModuleMap {
    let basis = hom_basis_vectors(m, n);
    let coeffs = random_vector(rng, m.field().p(), basis.len());
    combine(m, n, &basis, &coeffs)
}

/// Random complex on `[lo, hi]`, built bottom-up so each new boundary lands in
/// the cycles of the previous degree.
pub fn random_complex<R: Rng>(
    rng: &mut R,
    alg: &Arc<Algebra>,
    lo: i64,
    hi: i64,
    max_dim: usize,
) -> ChainComplex {
    random_complex_with(rng, alg, lo, hi, |r| random_module(r, alg, max_dim))
}

/// Random complex whose terms are projective covers of random modules of
/// dimension at most `max_top`.
pub fn random_projective_complex<R: Rng>(
    rng: &mut R,
    alg: &Arc<Algebra>,
    lo: i64,
    hi: i64,
    max_top: usize,
) -> ChainComplex {
    random_complex_with(rng, alg, lo, hi, |r| {
        projective_cover(&random_module(r, alg, max_top))
            .map
            .source()
            .clone()
    })
}

fn random_complex_with<R: Rng>(
    rng: &mut R,
    alg: &Arc<Algebra>,
    lo: i64,
    hi: i64,
    mut term: impl FnMut(&mut R) -> Module,
) -> ChainComplex {
    let f = alg.field();
    let modules: Vec<Module> = (lo..=hi).map(|_| term(rng)).collect();
    let mut boundaries: Vec<Matrix> = Vec::new();
    for i in 1..modules.len() {
        let (src, tgt) = (&modules[i], &modules[i - 1]);
        let basis = hom_basis_vectors(src, tgt);
        let admissible: Vec<Vec<u32>> = match boundaries.last() {
            Some(prev) if !basis.is_empty() => {
                let cols: Vec<Vec<u32>> = basis
                    .iter()
                    .map(|v| {
                        prev.mul(&Matrix::from_fn(f, tgt.dim(), src.dim(), |r, c| {
                            v[r * src.dim() + c]
                        }))
                        .entries()
                        .to_vec()
                    })
                    .collect();
                let sys = Matrix::from_cols(f, prev.shape().0 * src.dim(), &cols);
                sys.kernel_basis()
                    .iter()
                    .map(|c| combine(src, tgt, &basis, c).to_vec())
                    .collect()
            }
            _ => basis,
        };
        let coeffs = random_vector(rng, f.p(), admissible.len());
        boundaries.push(combine(src, tgt, &admissible, &coeffs).matrix().clone());
    }
    ChainComplex::new(alg.clone(), lo, modules, boundaries)
        .expect("boundaries square to zero by construction")
}

/// Uniform element of the chain maps X -> Y.
pub fn random_chain_map<R: Rng>(rng: &mut R, x: &ChainComplex, y: &ChainComplex) -> ChainMap {
    let basis = chain_hom_vectors(x, y);
    let coeffs = random_vector(rng, x.algebra().field().p(), basis.len());
    combine_chain(x, y, &basis, &coeffs)
}

/// Random extension of `quotient` by `sub` in complexes.
pub fn random_complex_extension<R: Rng>(
    rng: &mut R,
    quotient: &ChainComplex,
    sub: &ChainComplex,
) -> ComplexSes {
    let e = ext1_ch(quotient, sub).expect("same algebra");
    let coeffs = random_vector(rng, quotient.algebra().field().p(), e.dim());
    e.extension(&e.cocycle(&coeffs)).expect("valid cocycle")
}

/// A lifting square whose left cokernel is degreewise projective and whose
/// right kernel is exact: `i` is a random extension of a projective complex
/// by A, `p` a random extension of D by an exact complex, and the square is
/// built from a random `w: B -> C` perturbed along both kernels.
pub fn random_lifting_problem<R: Rng>(rng: &mut R, alg: &Arc<Algebra>) -> LiftingProblem {
    let a = random_complex(rng, alg, 0, 2, 2);
    let q = random_projective_complex(rng, alg, 0, 2, 1);
    let left = random_complex_extension(rng, &q, &a);
    let k = random_exact_complex(rng, alg, 0, 2, 3);
    let d = random_complex(rng, alg, 0, 2, 2);
    let right = random_complex_extension(rng, &d, &k);
    let (i, pi) = (left.i, left.p);
    let (j, p) = (right.i, right.p);
    let w = random_chain_map(rng, i.target(), p.source());
    let kk = random_chain_map(rng, i.source(), j.source());
    let t = random_chain_map(rng, pi.target(), p.target());
    let u = w.compose(&i).add(&j.compose(&kk));
    let v = p.compose(&w).add(&t.compose(&pi));
    LiftingProblem { i, p, u, v }
}

/// A square `0 -> Q`, `p: C -> Q` over a nonsplit extension
/// `0 -> K -> C -> Q -> 0`, with `u = 0` and `v = id`. A diagonal would split
/// the extension.
pub fn obstructed_lifting_problem<R: Rng>(rng: &mut R, alg: &Arc<Algebra>) -> LiftingProblem {
    let p = alg.field().p();
    loop {
        let q = random_complex(rng, alg, 0, 2, 3);
        let k = random_complex(rng, alg, 0, 2, 3);
        let e = ext1_ch(&q, &k).expect("same algebra");
        if e.dim() == 0 {
            continue;
        }
        let mut coeffs = random_vector(rng, p, e.dim());
        if coeffs.iter().all(|&c| c == 0) {
            coeffs[0] = 1;
        }
        let c = e.cocycle(&coeffs);
        debug_assert!(!e.is_trivial_class(&c));
        let ses = e.extension(&c).expect("valid cocycle");
        let target = ses.quotient().clone();
        let zero = ChainComplex::zero(alg.clone());
        return LiftingProblem {
            i: ChainMap::zero(&zero, &target),
            u: ChainMap::zero(&zero, ses.middle()),
            v: ChainMap::identity(&target),
            p: ses.p,
        };
    }
}

/// Random exact complex on `[lo, hi]`: terms are random extensions
/// `0 -> Z_m -> X_m -> Z_{m-1} -> 0` of random cycle modules, re-based at random.
pub fn random_exact_complex<R: Rng>(
    rng: &mut R,
    alg: &Arc<Algebra>,
    lo: i64,
    hi: i64,
    max_dim: usize,
) -> ChainComplex {
    let f = alg.field();
    let len = (hi - lo + 1) as usize;
    let half = (max_dim / 2).max(1);
    // z[i] = Z_{lo+i}; Z_hi = 0.
    let z: Vec<Module> = (0..len)
        .map(|i| {
            if i + 1 == len {
                Module::zero(alg.clone())
            } else {
                random_module(rng, alg, half)
            }
        })
        .collect();
    let mut modules = Vec::with_capacity(len);
    let mut incl: Vec<Matrix> = Vec::with_capacity(len);
    let mut proj: Vec<Matrix> = Vec::with_capacity(len);
    for i in 0..len {
        let below = if i == 0 {
            Module::zero(alg.clone())
        } else {
            z[i - 1].clone()
        };
        let e = ext1(&below, &z[i]).expect("same algebra");
        let coeffs = random_vector(rng, f.p(), e.dim());
        let ses = e.extension(&e.cocycle(&coeffs)).expect("valid cocycle");
        let g = random_invertible(rng, alg, ses.middle().dim());
        let gi = g.inverse().expect("invertible");
        modules.push(ses.middle().conjugate(&g).expect("invertible"));
        incl.push(g.mul(ses.i.matrix()));
        proj.push(ses.q.matrix().mul(&gi));
    }
    let boundaries = (1..len).map(|i| incl[i - 1].mul(&proj[i])).collect();
    ChainComplex::new(alg.clone(), lo, modules, boundaries).expect("spliced complex")
}

/// Nonzero vector of a random nonzero term, with its degree.
pub fn random_element<R: Rng>(rng: &mut R, x: &ChainComplex) -> Option<(i64, Vec<u32>)> {
    let degrees: Vec<i64> = x.degrees().filter(|&m| x.dim(m) > 0).collect();
    if degrees.is_empty() {
        return None;
    }
    let m = degrees[rng.gen_range(0..degrees.len())];
    loop {
        let v = random_vector(rng, x.algebra().field().p(), x.dim(m));
        if v.iter().any(|&c| c != 0) {
            return Some((m, v));
        }
    }
}

pub fn random_subspace<R: Rng>(rng: &mut R, p: u32, ambient: usize, gens: usize) -> Subspace {
    let vecs: Vec<Vec<u32>> = (0..gens).map(|_| random_vector(rng, p, ambient)).collect();
    Subspace::from_vectors(
        crate::field::PrimeField::new(p).expect("prime"),
        ambient,
        &vecs,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn random_complexes_are_complexes() {
        let alg = library::algebra("NAK3").unwrap();
        let mut r = rng(7);
        for _ in 0..20 {
            let x = random_complex(&mut r, &alg, 0, 3, 5);
            assert_eq!(x.support_len(), 4);
        }
    }

    #[test]
    fn random_exact_complexes_are_exact() {
        for name in ["T2F2", "NAK3", "T2F3"] {
            let alg = library::algebra(name).unwrap();
            let mut r = rng(11);
            for _ in 0..20 {
                let x = random_exact_complex(&mut r, &alg, -1, 2, 6);
                assert!(x.is_exact() && x.is_exact_by_homology());
                assert!(x.dims().iter().all(|&d| d <= 6));
            }
        }
    }
}
