use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use cotorsion::algebra::Algebra;
use cotorsion::certificate::{Certificate, Mode};
use cotorsion::checker::check_json;
use cotorsion::class::{ClassSpec, Object};
use cotorsion::complex::{chain_hom_vectors, ext1_ch, ChainComplex, ChainMap};
use cotorsion::complex_zigzag::{default_offsets, dw_filtration, Schedule};
use cotorsion::cotorsion::{
    approx_search, check_cotorsion_pair, factor_map, injective_disk_embedding, lift, ApproxSide,
    ModelPairs, Selector,
};
use cotorsion::field::PrimeField;
use cotorsion::homological::{default_flat_tests, ext1, ext1_dim, flat_dim, proj_dim, tensor};
use cotorsion::library;
use cotorsion::module::{free_cover, is_projective};
use cotorsion::oracle::count_extension_classes;
use cotorsion::par::Exec;
use cotorsion::random::{
    random_chain_map, random_complex, random_exact_complex, random_invertible,
    random_lifting_problem, random_module, random_nonzero_module, random_vector, rng, Rng64,
};
use cotorsion::resolution::projective_resolution;
use cotorsion::zigzag::{module_filtration, tensor_injectivity, zigzag_index_sets};
use cotorsion::{Matrix, Module, Subspace};

const NAMES: [&str; 3] = ["T2F2", "NAK3", "T2F3"];

fn alg(i: usize) -> Arc<Algebra> {
    library::algebra(NAMES[i % NAMES.len()]).unwrap()
}

fn random_matrix(r: &mut Rng64, p: u32, rows: usize, cols: usize) -> Matrix {
    let f = PrimeField::new(p).unwrap();
    let rows: Vec<Vec<u32>> = (0..rows)
        .map(|_| (0..cols).map(|_| r.gen_range(0..p)).collect())
        .collect();
    Matrix::from_row_vecs(f, &rows, cols)
}

fn random_projective(r: &mut Rng64, a: &Arc<Algebra>, max_dim: usize) -> Module {
    let pieces: Vec<Module> = (0..a.cover_idempotents().len())
        .map(|i| Module::idempotent_projective(a.clone(), i).0)
        .collect();
    let mut parts: Vec<Module> = Vec::new();
    loop {
        let used: usize = parts.iter().map(Module::dim).sum();
        let fitting: Vec<&Module> = pieces
            .iter()
            .filter(|p| used + p.dim() <= max_dim)
            .collect();
        if fitting.is_empty() || (!parts.is_empty() && r.gen_bool(0.4)) {
            break;
        }
        parts.push(fitting[r.gen_range(0..fitting.len())].clone());
    }
    let m = Module::direct_sum_all(a.clone(), &parts);
    m.conjugate(&random_invertible(r, a, m.dim())).unwrap()
}

/// Projective dimension through free covers on a random generating set at
/// every step, independent of the canonical covers.
fn pd_by_random_covers(r: &mut Rng64, m: &Module, cutoff: usize) -> Option<usize> {
    let mut cur = m.clone();
    for k in 0..=cutoff {
        if is_projective(&cur).is_some() {
            return Some(k);
        }
        let g = random_invertible(r, cur.algebra(), cur.dim());
        let gens = g.columns();
        let cover = free_cover(&cur, Some(&gens)).unwrap();
        cur = cover.kernel_module().0;
    }
    None
}

fn same_map(a: &ChainMap, b: &ChainMap) -> bool {
    let lo = a.source().lo().min(b.source().lo());
    let hi = a.source().hi().max(b.source().hi());
    (lo..=hi).all(|m| a.component(m) == b.component(m))
}

fn exact_by_ranks(x: &ChainComplex) -> bool {
    x.degrees()
        .all(|m| x.boundary(m).rank() + x.boundary(m + 1).rank() == x.dim(m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_plus_nullity_is_the_column_count(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5, 7]), rows in 0usize..7, cols in 0usize..7) {
        let m = random_matrix(&mut rng(seed), p, rows, cols);
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn row_reduction_is_idempotent(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5, 7]), rows in 0usize..7, cols in 0usize..7) {
        let m = random_matrix(&mut rng(seed), p, rows, cols);
        let (r1, piv1) = m.rref();
        let (r2, piv2) = r1.rref();
        prop_assert_eq!(r1, r2);
        prop_assert_eq!(piv1, piv2);
    }

    #[test]
    fn random_elements_multiply_associatively(seed in any::<u64>(), i in 0usize..3) {
        let a = alg(i);
        let mut r = rng(seed);
        let p = a.field().p();
        let [x, y, z] = [0; 3].map(|_| random_vector(&mut r, p, a.dim()));
        prop_assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
        prop_assert_eq!(a.mul(a.unit(), &x), x.clone());
        prop_assert_eq!(a.mul(&x, a.unit()), x);
    }

    #[test]
    fn module_axioms_hold_on_random_modules(seed in any::<u64>(), i in 0usize..3) {
        let a = alg(i);
        let mut r = rng(seed);
        let m = random_module(&mut r, &a, 6);
        prop_assert!(m.validate().is_ok());
        let p = a.field().p();
        let (x, y) = (random_vector(&mut r, p, a.dim()), random_vector(&mut r, p, a.dim()));
        prop_assert_eq!(m.act(&a.mul(&x, &y)), m.act(&x).mul(&m.act(&y)));
        prop_assert!(m.act(a.unit()).is_identity());
    }

    #[test]
    fn ext1_matches_the_class_count(seed in any::<u64>(), i in 0usize..2) {
        let a = alg(i);
        let mut r = rng(seed);
        let m = random_nonzero_module(&mut r, &a, 2);
        let n = random_nonzero_module(&mut r, &a, 4 - m.dim());
        let d = ext1_dim(&m, &n).unwrap();
        prop_assert_eq!(count_extension_classes(&m, &n), u64::from(a.field().p()).pow(d as u32));
    }

    #[test]
    fn projective_dimension_does_not_depend_on_the_covers(seed in any::<u64>(), i in 0usize..3) {
        let a = alg(i);
        let mut r = rng(seed);
        let m = random_nonzero_module(&mut r, &a, 5);
        prop_assert_eq!(pd_by_random_covers(&mut r, &m, 6), proj_dim(&m, 6));
    }

    #[test]
    fn flat_and_projective_dimensions_agree(seed in any::<u64>(), i in 0usize..3) {
        let a = alg(i);
        let m = random_nonzero_module(&mut rng(seed), &a, 5);
        prop_assert_eq!(flat_dim(&m, 6, &default_flat_tests(&a)).unwrap(), proj_dim(&m, 6));
    }

    #[test]
    fn projectives_have_no_extensions(seed in any::<u64>(), i in 0usize..3) {
        let a = alg(i);
        let mut r = rng(seed);
        let p = random_projective(&mut r, &a, 5);
        let n = random_module(&mut r, &a, 5);
        prop_assert_eq!(ext1_dim(&p, &n).unwrap(), 0);
    }

    #[test]
    fn zero_cocycle_splits(seed in any::<u64>(), i in 0usize..3) {
        let a = alg(i);
        let mut r = rng(seed);
        let m = random_module(&mut r, &a, 3);
        let n = random_module(&mut r, &a, 3);
        let e = ext1(&m, &n).unwrap();
        let ses = e.extension(&e.cocycle(&vec![0; e.dim()])).unwrap();
        prop_assert!(ses.validate().is_ok());
        prop_assert!(ses.retraction().is_some());
    }

    #[test]
    fn zigzag_index_sets_grow_with_the_seed(seed in any::<u64>(), i in 0usize..2) {
        let a = alg(i);
        let mut r = rng(seed);
        let m = random_nonzero_module(&mut r, &a, 6);
        let res = projective_resolution(&m, 2).unwrap();
        let p = a.field().p();
        let v = random_vector(&mut r, p, m.dim());
        let w = random_vector(&mut r, p, m.dim());
        let small = m.submodule_generated([&v]);
        let big = m.submodule_generated([&v, &w]);
        let (s, _) = zigzag_index_sets(&res, &small);
        let (b, _) = zigzag_index_sets(&res, &big);
        for (x, y) in s.iter().zip(&b) {
            prop_assert!(x.is_subset(y));
        }
    }

    #[test]
    fn summands_are_tensor_injective(seed in any::<u64>(), i in 0usize..3) {
        let a = alg(i);
        let mut r = rng(seed);
        let p = random_projective(&mut r, &a, 3);
        let q = random_projective(&mut r, &a, 3);
        let f = p.direct_sum(&q);
        let s = Subspace::coordinate(a.field(), f.dim(), &(0..p.dim()).collect::<Vec<_>>());
        let tests = cotorsion::homological::right_test_modules(&a, 3);
        for (d, rank) in tensor_injectivity(&f, &s, &tests).unwrap() {
            prop_assert_eq!(d, rank);
        }
    }

    #[test]
    fn tensor_with_the_right_regular_module_is_the_identity(seed in any::<u64>(), i in 0usize..3) {
        let a = alg(i);
        let m = random_module(&mut rng(seed), &a, 5);
        prop_assert_eq!(tensor(&cotorsion::homological::right_regular(&a), &m).unwrap().dim(), m.dim());
    }

    #[test]
    fn card_is_additive_over_kernels(seed in any::<u64>(), i in 0usize..2) {
        let a = alg(i);
        let mut r = rng(seed);
        let x = random_complex(&mut r, &a, 0, 3, 4);
        let y = random_complex(&mut r, &a, 0, 3, 4);
        let f = random_chain_map(&mut r, &x, &y);
        let k = f.kernel();
        let (sub, _) = x.subcomplex(&k).unwrap();
        let (quo, _) = x.quotient_complex(&k).unwrap();
        prop_assert_eq!(sub.card() + quo.card(), x.card());
    }

    #[test]
    fn exactness_agrees_with_the_rank_condition(seed in any::<u64>(), i in 0usize..2, exact in any::<bool>()) {
        let a = alg(i);
        let mut r = rng(seed);
        let x = if exact { random_exact_complex(&mut r, &a, -1, 2, 5) } else { random_complex(&mut r, &a, -1, 2, 4) };
        prop_assert_eq!(x.is_exact(), exact_by_ranks(&x));
        prop_assert_eq!(x.is_exact(), x.is_exact_by_homology());
        if exact {
            prop_assert!(x.is_exact());
        }
    }

    #[test]
    fn complex_ext_matches_hom_counts(seed in any::<u64>()) {
        let a = alg(0);
        let mut r = rng(seed);
        let x = random_complex(&mut r, &a, 0, 2, 2);
        let y = random_complex(&mut r, &a, 0, 2, 2);
        let j = injective_disk_embedding(&y);
        let (c, _) = j.target().quotient_complex(&j.image()).unwrap();
        let hom = |t: &ChainComplex| chain_hom_vectors(&x, t).len();
        prop_assert_eq!(ext1_ch(&x, &y).unwrap().dim(), hom(&c) + hom(&y) - hom(j.target()));
    }

    #[test]
    fn default_schedule_sweeps_every_window(start in -3i64..4, radius in 0i64..4) {
        let (lo, hi) = (start - radius, start + radius);
        let needed = (hi - lo + 1) as usize;
        let prefix: Vec<i64> = default_offsets().map(|o| start + o).take(4 * needed * needed + 1).collect();
        for m in lo..=hi {
            prop_assert!(prefix.contains(&m));
        }
        prop_assert!(Schedule::Default.check_fair(lo, hi).is_ok());
        let cyc = Schedule::Cyclic((lo..hi).collect());
        prop_assert!(cyc.check_fair(lo, hi).is_err());
    }

    #[test]
    fn lift_diagonals_resubstitute_exactly(seed in any::<u64>(), i in 0usize..2) {
        let a = alg(i);
        let p = random_lifting_problem(&mut rng(seed), &a);
        let rep = lift(&p, &ClassSpec::dw(ClassSpec::pn(0)), &ClassSpec::exact()).unwrap();
        let d = rep.diagonal.expect("constructed squares lift");
        prop_assert!(same_map(&d.compose(&p.i), &p.u));
        prop_assert!(same_map(&p.p.compose(&d), &p.v));
    }

    #[test]
    fn module_filtration_certificates_round_trip(seed in any::<u64>(), i in 0usize..2, compact in any::<bool>()) {
        let a = alg(i);
        let m = random_nonzero_module(&mut rng(seed), &a, 6);
        let f = match module_filtration(&m, 2, 4) {
            Err(cotorsion::Error::BudgetExceeded { .. }) => return Ok(()),
            f => f.unwrap(),
        };
        let cert = Certificate::module_filtration(&f, if compact { Mode::Compact } else { Mode::Full });
        let json = cert.to_json();
        prop_assert_eq!(&Certificate::from_json(&json).unwrap(), &cert);
        prop_assert!(check_json(&json).is_ok());
    }

    #[test]
    fn dw_filtration_certificates_round_trip(seed in any::<u64>(), i in 0usize..2) {
        let a = alg(i);
        let x = random_complex(&mut rng(seed), &a, 0, 2, 4);
        let cert = Certificate::complex_filtration(&dw_filtration(&x, 2, 6).unwrap());
        prop_assert!(check_json(&cert.to_json()).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn factorizations_compose_back(seed in any::<u64>(), dual in any::<bool>()) {
        let u = library::universe("T2F2").unwrap();
        let mut r = rng(seed);
        let names = u.names();
        let pick = |r: &mut Rng64| u.get(&names[r.gen_range(0..names.len())]).unwrap().as_complex().unwrap().clone();
        let x = pick(&mut r);
        let y = pick(&mut r);
        let f = random_chain_map(&mut r, &x, &y);
        let pairs = ModelPairs::dw_projective(1, &u).unwrap();
        if let Ok(fac) = factor_map(&f, &pairs, &u, dual) {
            prop_assert!(fac.composite_agrees(&f));
            prop_assert!(fac.i.is_injective());
            prop_assert!(fac.p.is_surjective());
            prop_assert!(fac.cokernel_membership.member && fac.kernel_membership.member);
        }
    }

    #[test]
    fn approximations_are_exact_with_both_memberships(seed in any::<u64>()) {
        let u = library::module_universe("T2F2").unwrap();
        let a = alg(0);
        let x = Object::Module(random_nonzero_module(&mut rng(seed), &a, 4));
        for side in [ApproxSide::EnoughProjectives, ApproxSide::EnoughInjectives] {
            let (ca, cb) = match side {
                ApproxSide::EnoughProjectives => (ClassSpec::pn(0), ClassSpec::new(cotorsion::class::ClassKind::All)),
                ApproxSide::EnoughInjectives => (ClassSpec::new(cotorsion::class::ClassKind::All), ClassSpec::pn(1)),
            };
            let ap = approx_search(&x, &ca, &cb, &u, side).unwrap();
            prop_assert!(ap.a_membership.member && ap.b_membership.member);
            let ends = match side {
                ApproxSide::EnoughProjectives => ap.ses.quotient(),
                ApproxSide::EnoughInjectives => ap.ses.sub(),
            };
            prop_assert_eq!(ends.size(), x.size());
            prop_assert_eq!(ap.ses.sub().size() + ap.ses.quotient().size(), ap.ses.middle().size());
        }
    }
}

#[test]
fn bundled_algebras_satisfy_the_laws_on_every_basis_triple() {
    for name in library::algebra_names() {
        let a = library::algebra(name).unwrap();
        let d = a.dim();
        for i in 0..d {
            let bi = a.basis_vec(i);
            assert_eq!(a.mul(a.unit(), &bi), bi);
            assert_eq!(a.mul(&bi, a.unit()), bi);
            for j in 0..d {
                let bj = a.basis_vec(j);
                for k in 0..d {
                    let bk = a.basis_vec(k);
                    assert_eq!(
                        a.mul(&a.mul(&bi, &bj), &bk),
                        a.mul(&bi, &a.mul(&bj, &bk)),
                        "{name} ({i},{j},{k})"
                    );
                }
            }
        }
    }
}

#[test]
fn orthogonality_tables_reproduce_cell_by_cell() {
    let u = library::module_universe("NAK3").unwrap();
    let rep = check_cotorsion_pair(
        &Selector::Spec(ClassSpec::pn(2)),
        &Selector::Spec(ClassSpec::new(cotorsion::class::ClassKind::All)),
        &u,
        Exec::Parallel,
    )
    .unwrap();
    for (r, row) in rep.table.rows.iter().enumerate() {
        for (c, col) in rep.table.cols.iter().enumerate() {
            let (Some(Object::Module(x)), Some(Object::Module(y))) = (u.get(row), u.get(col))
            else {
                unreachable!()
            };
            assert_eq!(rep.table.dims[r][c], ext1_dim(x, y).unwrap());
        }
    }
    let members: Vec<&str> = rep
        .a_rows
        .iter()
        .filter(|m| m.member)
        .map(|m| m.name.as_str())
        .collect();
    let expected: usize = rep
        .table
        .rows
        .iter()
        .enumerate()
        .filter(|(_, n)| members.contains(&n.as_str()))
        .map(|(r, _)| rep.table.dims[r].iter().filter(|&&d| d > 0).count())
        .sum();
    assert_eq!(rep.violations.len(), expected);
    assert!(expected > 0 && !rep.clean);
}
