//! Brute-force oracles: extension classes by exhaustive enumeration, and a
//! catalogue of small modules built from indecomposables.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::homological::ext1_dim;
use crate::library;
use crate::matrix::Matrix;
use crate::module::{all_vectors, find_isomorphism, Module};
use crate::par::Exec;
use crate::subspace::Subspace;

/// Linear conditions on the off-diagonal block `delta` making
/// `[[rho_N, delta], [0, rho_M]]` a module. Unknowns are `delta_i[r][c]` at
/// index `(i * n + r) * m + c`.
fn extension_constraints(m: &Module, n: &Module) -> Matrix {
    let alg = m.algebra();
    let f = m.field();
    let d = alg.dim();
    let (dm, dn) = (m.dim(), n.dim());
    let nm = dn * dm;
    let var = |i: usize, r: usize, c: usize| (i * dn + r) * dm + c;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            // rho_N(e_i) delta_j + delta_i rho_M(e_j) - sum_k c_ijk delta_k = 0
            for r in 0..dn {
                for c in 0..dm {
                    let mut row = vec![0u32; d * nm];
                    for s in 0..dn {
                        let a = n.action(i).get(r, s);
                        if a != 0 {
                            let x = var(j, s, c);
                            row[x] = f.add(row[x], a);
                        }
                    }
                    for t in 0..dm {
                        let b = m.action(j).get(t, c);
                        if b != 0 {
                            let x = var(i, r, t);
                            row[x] = f.add(row[x], b);
                        }
                    }
                    for k in 0..d {
                        let ck = alg.c(i, j, k);
                        if ck != 0 {
                            let x = var(k, r, c);
                            row[x] = f.sub(row[x], ck);
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    for r in 0..dn {
        for c in 0..dm {
            let mut row = vec![0u32; d * nm];
            for (k, &u) in alg.unit().iter().enumerate() {
                row[var(k, r, c)] = u;
            }
            rows.push(row);
        }
    }
    Matrix::from_row_vecs(f, &rows, d * nm)
}

/// Number of equivalence classes of extensions 0 -> N -> E -> M -> 0, by
/// listing every admissible off-diagonal block and walking its orbit under
/// `delta -> delta + rho_N h - h rho_M` for every linear `h : M -> N`.
pub fn count_extension_classes(m: &Module, n: &Module) -> u64 {
    let f = m.field();
    let d = m.algebra().dim();
    let (dm, dn) = (m.dim(), n.dim());
    let nm = dn * dm;
    if nm == 0 {
        return 1;
    }
    let z = extension_constraints(m, n).kernel_basis();
    let zspace = Subspace::from_vectors(f, d * nm, &z);
    let shifts: Vec<Vec<u32>> = all_vectors(f, nm)
        .map(|h| {
            let hm = Matrix::from_fn(f, dn, dm, |r, c| h[r * dm + c]);
            let mut out = Vec::with_capacity(d * nm);
            for i in 0..d {
                let b = n.action(i).mul(&hm).sub(&hm.mul(m.action(i)));
                out.extend_from_slice(b.entries());
            }
            out
        })
        .collect();
    let mut visited: HashSet<Vec<u32>> = HashSet::new();
    let mut classes = 0u64;
    for coeffs in all_vectors(f, zspace.dim()) {
        let mut delta = vec![0u32; d * nm];
        for (b, &c) in zspace.basis().iter().zip(&coeffs) {
            for (x, &y) in delta.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        if visited.contains(&delta) {
            continue;
        }
        classes += 1;
        for s in &shifts {
            let moved: Vec<u32> = delta.iter().zip(s).map(|(&a, &b)| f.add(a, b)).collect();
            visited.insert(moved);
        }
    }
    classes
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRow {
    pub m: String,
    pub n: String,
    pub enumerated: u64,
    pub ext_dim: usize,
}

impl OracleRow {
    pub fn agrees(&self, p: u32) -> bool {
        Some(self.enumerated) == (p as u64).checked_pow(self.ext_dim as u32)
    }
}

/// Compares enumeration against `p^(dim Ext^1)` on every ordered pair.
pub fn ext_oracle_table(modules: &[(String, Module)], exec: Exec) -> Vec<OracleRow> {
    let pairs: Vec<(usize, usize)> = (0..modules.len())
        .flat_map(|a| (0..modules.len()).map(move |b| (a, b)))
        .collect();
    exec.map(&pairs, |&(a, b)| {
        let (ma, mb) = (&modules[a].1, &modules[b].1);
        OracleRow {
            m: modules[a].0.clone(),
            n: modules[b].0.clone(),
            enumerated: count_extension_classes(ma, mb),
            ext_dim: ext1_dim(ma, mb).expect("same algebra"),
        }
    })
}

/// Nonzero quotients of the indecomposable projectives `A e`, up to
/// isomorphism, named after a bundled module when one matches.
pub fn cyclic_indecomposables(alg: &Arc<Algebra>) -> Vec<(String, Module)> {
    let bundled = library::modules(alg.name()).unwrap_or_default();
    let mut out: Vec<(String, Module)> = Vec::new();
    for i in 0..alg.cover_idempotents().len() {
        let (p, _) = Module::idempotent_projective(alg.clone(), i);
        for (k, s) in p.all_submodules().iter().enumerate() {
            if s.dim() == p.dim() {
                continue;
            }
            let (q, _) = p.quotient_unchecked(s);
            if out.iter().any(|(_, m)| find_isomorphism(m, &q).is_some()) {
                continue;
            }
            let name = bundled
                .iter()
                .filter(|(n, _)| !n.starts_with("P_") || q.dim() > 1)
                .find(|(_, b)| find_isomorphism(b, &q).is_some())
                .map(|(n, _)| n.clone())
                .unwrap_or_else(|| format!("Q{i}.{k}"));
            out.push((name, q));
        }
    }
    out.sort_by(|a, b| a.1.dim().cmp(&b.1.dim()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// All direct sums of the given pieces with total dimension in `1..=max_dim`,
/// one per multiset.
pub fn direct_sums_up_to(
    alg: &Arc<Algebra>,
    pieces: &[(String, Module)],
    max_dim: usize,
) -> Vec<(String, Module)> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        let used: usize = chosen.iter().map(|&b| pieces[b].1.dim()).sum();
        if !chosen.is_empty() {
            let name = chosen
                .iter()
                .map(|&b| pieces[b].0.as_str())
                .collect::<Vec<_>>()
                .join("+");
            let parts: Vec<Module> = chosen.iter().map(|&b| pieces[b].1.clone()).collect();
            out.push((name, Module::direct_sum_all(alg.clone(), &parts)));
        }
        for b in start..pieces.len() {
            if used + pieces[b].1.dim() <= max_dim {
                let mut next = chosen.clone();
                next.push(b);
                stack.push((b, next));
            }
        }
    }
    out.sort_by(|a, b| a.1.dim().cmp(&b.1.dim()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Isomorphism classes of modules of dimension `1..=max_dim` for algebras whose
/// indecomposables are all cyclic quotients of indecomposable projectives
/// (true for the bundled Nakayama algebras).
pub fn small_modules(alg: &Arc<Algebra>, max_dim: usize) -> Vec<(String, Module)> {
    direct_sums_up_to(alg, &cyclic_indecomposables(alg), max_dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_sizes() {
        let t2 = library::algebra("T2F2").unwrap();
        assert_eq!(cyclic_indecomposables(&t2).len(), 3);
        assert_eq!(small_modules(&t2, 3).len(), 12);
        let nak = library::algebra("NAK3").unwrap();
        assert_eq!(cyclic_indecomposables(&nak).len(), 5);
        assert_eq!(small_modules(&nak, 3).len(), 27);
    }

    #[test]
    fn nonsplit_extension_of_simples_counted() {
        let sa = library::module("T2F2", "S_a").unwrap();
        let sb = library::module("T2F2", "S_b").unwrap();
        assert_eq!(count_extension_classes(&sb, &sa), 2);
        assert_eq!(count_extension_classes(&sa, &sb), 1);
    }
}
