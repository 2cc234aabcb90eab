//! Acceptance suite. Runs without the test harness so the PASS/FAIL line of
//! every criterion is always printed; exits nonzero if any criterion fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use cotorsion::algebra::Algebra;
use cotorsion::certificate::{mutate, Certificate, Mode};
use cotorsion::checker::check;
use cotorsion::class::{ClassKind, ClassSpec};
use cotorsion::complex::{chain_hom_vectors, ChainComplex, ChainMap};
use cotorsion::complex_zigzag::{dw_filtration, ex_filtration, staircase, StaircaseOptions, Track};
use cotorsion::cotorsion::{check_compatibility, injective_disk_embedding, lift};
use cotorsion::homological::{default_flat_tests, flat_dim, proj_dim, right_test_modules};
use cotorsion::library;
use cotorsion::oracle::{ext_oracle_table, small_modules};
use cotorsion::par::Exec;
use cotorsion::random::{
    obstructed_lifting_problem, random_complex, random_exact_complex, random_invertible,
    random_lifting_problem, random_nonzero_module, random_vector, rng,
};
use cotorsion::resolution::projective_resolution;
use cotorsion::subspace::unit_vec;
use cotorsion::zigzag::{pure_closure, tensor_injectivity, zigzag_subresolution};
use cotorsion::{Module, Subspace};
use rand::Rng;

/// Algebras under test with the n used for P_n.
const ALGEBRAS: [(&str, usize); 2] = [("T2F2", 1), ("NAK3", 2)];
const EXT_ORACLE_MAX_DIM: usize = 3;
const EXT_ORACLE_TIME_LIMIT: Duration = Duration::from_secs(120);
const FD_MAX_DIM: usize = 4;
const ZIGZAG_INSTANCES: usize = 50;
const ZIGZAG_MAX_DIM: usize = 6;
const ZIGZAG_TIME_LIMIT: Duration = Duration::from_secs(120);
const FILTRATION_INSTANCES: usize = 50;
/// Support [0, 3] has length 4.
const COMPLEX_HI: i64 = 3;
const COMPLEX_MAX_DIM: usize = 6;
const FILTRATION_KAPPA: usize = 6;
const STAIRCASE_COMPLEXES: usize = 25;
const STAIRCASE_MAX_DIM: usize = 5;
const STAIRCASE_KAPPA: usize = 4;
const PURITY_INSTANCES: usize = 30;
const PURITY_TEST_DIM: usize = 3;
const CONSTRUCTED_SQUARES: usize = 100;
const OBSTRUCTED_SQUARES: usize = 20;
const COMPAT_UNIVERSE_SIZE: usize = 12;
const MUTATIONS: usize = 200;
/// Every criterion demands a 100% pass rate.
const REQUIRED_RATE: f64 = 1.0;

struct Verdict {
    pass: bool,
    detail: String,
}

fn rate(good: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        good as f64 / total as f64
    }
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn alg(name: &str) -> Arc<Algebra> {
    library::algebra(name).unwrap()
}

fn checked(certs: &[Certificate]) -> usize {
    Exec::Parallel
        .map(certs, |c| check(c).is_ok())
        .into_iter()
        .filter(|&b| b)
        .count()
}

fn listed(items: &[String]) -> String {
    if items.is_empty() {
        String::new()
    } else {
        format!(" {items:?}")
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut pairs = 0;
    let mut bad = Vec::new();
    for (name, _) in ALGEBRAS {
        let a = alg(name);
        let mods = small_modules(&a, EXT_ORACLE_MAX_DIM);
        for row in ext_oracle_table(&mods, Exec::Parallel) {
            pairs += 1;
            if !row.agrees(a.field().p()) {
                bad.push(format!(
                    "{name}: ({}, {}) enumerated {} vs dim {}",
                    row.m, row.n, row.enumerated, row.ext_dim
                ));
            }
        }
    }
    let t = start.elapsed();
    let pass = bad.is_empty() && pairs > 0 && t < EXT_ORACLE_TIME_LIMIT;
    verdict(
        pass,
        format!(
            "{pairs} pairs, {} mismatches, limit {}s{}",
            bad.len(),
            EXT_ORACLE_TIME_LIMIT.as_secs(),
            listed(&bad)
        ),
    )
}

fn criterion_2() -> Verdict {
    let s_b = proj_dim(&library::module("T2F2", "S_b").unwrap(), 8);
    let s_1 = proj_dim(&library::module("NAK3", "S1").unwrap(), 8);
    let mut compared = 0;
    let mut bad = Vec::new();
    for (name, _) in ALGEBRAS {
        let a = alg(name);
        let cyclic = default_flat_tests(&a);
        let wide = right_test_modules(&a, FD_MAX_DIM);
        for (m, x) in library::modules(name)
            .unwrap()
            .into_iter()
            .filter(|(_, x)| x.dim() <= FD_MAX_DIM)
        {
            let pd = proj_dim(&x, 8);
            for tests in [&cyclic, &wide] {
                compared += 1;
                let fd = flat_dim(&x, 8, tests).unwrap();
                if fd != pd {
                    bad.push(format!("{name}/{m}: pd {pd:?} fd {fd:?}"));
                }
            }
        }
    }
    let pass = s_b == Some(1) && s_1 == Some(2) && bad.is_empty();
    verdict(
        pass,
        format!(
            "pd(S_b)={s_b:?}, pd(S1)={s_1:?}, fd=pd on {compared} comparisons{}",
            listed(&bad)
        ),
    )
}

/// Instance `i` over `name`: a random M, a seed generated by one or two random
/// vectors, and a budget between the seed dimension and three above it.
fn zigzag_certificates(name: &str, n: usize) -> (Vec<Certificate>, usize) {
    let a = alg(name);
    let mut certs = Vec::new();
    let mut refused = 0;
    let mut i = 0u64;
    while certs.len() < ZIGZAG_INSTANCES {
        let mut r = rng(1000 + i);
        i += 1;
        let m = random_nonzero_module(&mut r, &a, ZIGZAG_MAX_DIM);
        let Ok(res) = projective_resolution(&m, n) else {
            continue;
        };
        let gens: Vec<Vec<u32>> = (0..r.gen_range(1..=2))
            .map(|_| random_vector(&mut r, a.field().p(), m.dim()))
            .collect();
        let seed = m.submodule_generated(gens.iter());
        let kappa = seed.dim().max(1) + r.gen_range(0..=3);
        match zigzag_subresolution(&res, &seed, kappa) {
            Ok(z) => certs.push(Certificate::subresolution(&z)),
            Err(_) => refused += 1,
        }
    }
    (certs, refused)
}

fn criterion_3(corpus: &mut Vec<Certificate>) -> Verdict {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, n) in ALGEBRAS {
        let (certs, refused) = zigzag_certificates(name, n);
        let ok = checked(&certs);
        pass &= certs.len() >= ZIGZAG_INSTANCES && rate(ok, certs.len()) >= REQUIRED_RATE;
        parts.push(format!(
            "{name}: {ok}/{} certified ({refused} over budget)",
            certs.len()
        ));
        corpus.extend(certs);
    }
    let t = start.elapsed();
    pass &= t < ZIGZAG_TIME_LIMIT;
    verdict(
        pass,
        format!("{}, {:.1}s", parts.join(", "), t.as_secs_f64()),
    )
}

fn filtration_criterion(corpus: &mut Vec<Certificate>, exact: bool) -> Verdict {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, n) in ALGEBRAS {
        let a = alg(name);
        let seeds: Vec<u64> = (0..FILTRATION_INSTANCES as u64).collect();
        let built = Exec::Parallel.map(&seeds, |&i| {
            let mut r = rng(if exact { 5000 } else { 4000 } + i);
            if exact {
                let x = random_exact_complex(&mut r, &a, 0, COMPLEX_HI, COMPLEX_MAX_DIM);
                ex_filtration(&x, n, FILTRATION_KAPPA).map(|f| {
                    let steps_exact = f.steps.iter().all(|s| s.quotient.is_exact())
                        && f.chain()
                            .iter()
                            .all(|subs| x.subcomplex(subs).map_or(false, |(y, _)| y.is_exact()));
                    (Certificate::complex_filtration(&f), steps_exact)
                })
            } else {
                let x = random_complex(&mut r, &a, 0, COMPLEX_HI, COMPLEX_MAX_DIM);
                dw_filtration(&x, n, FILTRATION_KAPPA)
                    .map(|f| (Certificate::complex_filtration(&f), true))
            }
        });
        let failed = built.iter().filter(|b| b.is_err()).count();
        let (certs, flags): (Vec<Certificate>, Vec<bool>) = built.into_iter().flatten().unzip();
        let ok = checked(&certs);
        let exact_steps = flags.iter().filter(|&&b| b).count();
        pass &= failed == 0
            && certs.len() >= FILTRATION_INSTANCES
            && rate(ok, certs.len()) >= REQUIRED_RATE
            && rate(exact_steps, flags.len()) >= REQUIRED_RATE;
        let extra = if exact {
            format!(", {exact_steps} with every step exact")
        } else {
            String::new()
        };
        parts.push(format!(
            "{name}: {ok}/{} certified{extra}, {failed} failed to build",
            certs.len()
        ));
        corpus.extend(certs);
    }
    verdict(pass, parts.join(", "))
}

fn criterion_6(corpus: &mut Vec<Certificate>) -> Verdict {
    let mut parts = Vec::new();
    let mut pass = true;
    for track in [Track::Projective, Track::Flat] {
        let mut runs = 0;
        let mut good = 0;
        let mut audits = 0;
        for (name, n) in ALGEBRAS {
            let a = alg(name);
            for i in 0..STAIRCASE_COMPLEXES as u64 {
                let x =
                    random_exact_complex(&mut rng(6000 + i), &a, 0, COMPLEX_HI, STAIRCASE_MAX_DIM);
                let elems: Vec<(i64, Vec<u32>)> = x
                    .degrees()
                    .flat_map(|m| (0..x.dim(m)).map(move |j| (m, j)))
                    .map(|(m, j)| (m, unit_vec(x.dim(m), j)))
                    .collect();
                let results = Exec::Parallel.map(&elems, |(m, v)| {
                    let opts = StaircaseOptions {
                        track,
                        kappa: STAIRCASE_KAPPA,
                        n,
                        ..Default::default()
                    };
                    staircase(&x, *m, v, &opts).map(|s| {
                        let audit = s.audit.passes();
                        let c = Certificate::staircase(&s, Mode::Full);
                        (check(&c).is_ok(), audit, c)
                    })
                });
                for r in results {
                    runs += 1;
                    if let Ok((ok, audit, c)) = r {
                        good += usize::from(ok);
                        audits += usize::from(audit);
                        if corpus.len() < 2000 && runs % 8 == 0 {
                            corpus.push(c);
                        }
                    }
                }
            }
        }
        pass &=
            runs > 0 && rate(good, runs) >= REQUIRED_RATE && rate(audits, runs) >= REQUIRED_RATE;
        parts.push(format!(
            "{track}: {good}/{runs} elements certified, {audits} audits clean"
        ));
    }
    verdict(pass, parts.join(", "))
}

fn criterion_7(corpus: &mut Vec<Certificate>) -> Verdict {
    let mut total = 0;
    let mut good = 0;
    let mut tests_used = 0;
    let mut reasons = Vec::new();
    let mut proper = 0;
    for (name, _) in ALGEBRAS {
        let a = alg(name);
        let tests = right_test_modules(&a, PURITY_TEST_DIM);
        tests_used += tests.len();
        let mut r = rng(7000);
        let cases: Vec<Module> = (0..PURITY_INSTANCES)
            .map(|_| random_projective(&mut r, &a, ZIGZAG_MAX_DIM))
            .collect();
        for (k, f) in cases.iter().enumerate() {
            total += 1;
            let mut r = rng(7100 + k as u64);
            let v = random_vector(&mut r, a.field().p(), f.dim());
            let v = if v.iter().all(|&c| c == 0) {
                unit_vec(f.dim(), 0)
            } else {
                v
            };
            let s0 = f.submodule_generated([&v]);
            let pc = match pure_closure(&s0, f, f.dim(), Some(&tests)) {
                Ok(pc) => pc,
                Err(e) => {
                    reasons.push(format!("{name}#{k}: {e}"));
                    continue;
                }
            };
            let inj = tensor_injectivity(f, &pc.sub, &tests).unwrap();
            let summand = retraction_splits(f, &pc.sub, &pc.retraction);
            let cert = Certificate::pure_closure(f, &pc, f.dim());
            let injective = inj.iter().all(|&(d, r)| d == r);
            let checked = check(&cert);
            let ok = summand && injective && pc.sub.contains_space(&pc.seed) && checked.is_ok();
            if !ok {
                reasons.push(format!(
                    "{name}#{k}: summand {summand}, injective {injective}, checker {:?}",
                    checked.err().map(|e| e.to_string())
                ));
            }
            good += usize::from(ok);
            proper += usize::from(pc.sub.dim() < f.dim());
            corpus.push(cert);
        }
    }
    verdict(
        rate(good, total) >= REQUIRED_RATE,
        format!("{good}/{total} closures are summands and tensor-injective, {proper} proper ({tests_used} test modules){}", listed(&reasons)),
    )
}

/// A nonzero sum of indecomposable projectives `A e` of dimension at most
/// `max_dim`, in a random basis. The ambient module of a pure closure must be
/// flat, and flat means projective here.
fn random_projective(r: &mut impl Rng, a: &Arc<Algebra>, max_dim: usize) -> Module {
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
        if fitting.is_empty() || (!parts.is_empty() && r.gen_bool(0.3)) {
            break;
        }
        parts.push(fitting[r.gen_range(0..fitting.len())].clone());
    }
    let m = Module::direct_sum_all(a.clone(), &parts);
    m.conjugate(&random_invertible(r, a, m.dim()))
        .expect("invertible")
}

/// `r` is A-linear and restricts to the identity on `s`.
fn retraction_splits(f: &Module, s: &Subspace, r: &cotorsion::ModuleMap) -> bool {
    let (sm, incl) = f.submodule(s).unwrap();
    r.source() == f
        && r.target() == &sm
        && r.validate().is_ok()
        && r.compose(&incl).matrix().is_identity()
}

fn same_map(a: &ChainMap, b: &ChainMap) -> bool {
    let lo = a.source().lo().min(b.source().lo());
    let hi = a.source().hi().max(b.source().hi());
    (lo..=hi).all(|m| a.component(m) == b.component(m))
}

fn criterion_8() -> Verdict {
    let a = alg("T2F2");
    let left = ClassSpec::dw(ClassSpec::pn(0));
    let right = ClassSpec::exact();
    let ids: Vec<u64> = (0..CONSTRUCTED_SQUARES as u64).collect();
    let lifted = Exec::Parallel.map(&ids, |&i| {
        let p = random_lifting_problem(&mut rng(8000 + i), &a);
        let rep = lift(&p, &left, &right).unwrap();
        let certified = rep.cokernel_membership.member
            && rep.kernel_membership.member
            && rep.obstruction_dim == 0;
        let exact = rep.diagonal.as_ref().map_or(false, |d| {
            same_map(&d.compose(&p.i), &p.u) && same_map(&p.p.compose(d), &p.v)
        });
        certified && exact
    });
    let ids: Vec<u64> = (0..OBSTRUCTED_SQUARES as u64).collect();
    let blocked = Exec::Parallel.map(&ids, |&i| {
        let p = obstructed_lifting_problem(&mut rng(8500 + i), &a);
        lift(
            &p,
            &ClassSpec::new(ClassKind::All),
            &ClassSpec::new(ClassKind::All),
        )
        .unwrap()
        .diagonal
        .is_none()
    });
    let (l, b) = (
        lifted.iter().filter(|&&x| x).count(),
        blocked.iter().filter(|&&x| x).count(),
    );
    verdict(
        rate(l, lifted.len()) >= REQUIRED_RATE && rate(b, blocked.len()) >= REQUIRED_RATE,
        format!(
            "{l}/{} constructed squares lift exactly, {b}/{} obstructed give none",
            lifted.len(),
            blocked.len()
        ),
    )
}

/// dim Ext^1(X, Y) in complexes from Hom counts along 0 -> Y -> J -> C -> 0
/// with J a sum of disks on injectives, which is injective.
fn ext1_by_hom_counts(x: &ChainComplex, y: &ChainComplex) -> usize {
    let j = injective_disk_embedding(y);
    let (c, _) = j.target().quotient_complex(&j.image()).unwrap();
    let hom = |t: &ChainComplex| chain_hom_vectors(x, t).len();
    hom(&c) + hom(y) - hom(j.target())
}

fn criterion_9() -> Verdict {
    let u = library::universe("T2F2").unwrap();
    let objs: Vec<(String, ChainComplex)> = u
        .objects
        .iter()
        .map(|(n, o)| (n.clone(), o.as_complex().expect("complex universe").clone()))
        .collect();
    let table: Vec<Vec<usize>> = objs
        .iter()
        .map(|(_, x)| objs.iter().map(|(_, y)| ext1_by_hom_counts(x, y)).collect())
        .collect();
    // Every T2F2-module has projective dimension at most 1, so dw(P1) is everything.
    let in_p1 = |x: &ChainComplex| x.modules().iter().all(|m| proj_dim(m, 1).is_some());
    let dw: Vec<usize> = (0..objs.len()).filter(|&i| in_p1(&objs[i].1)).collect();
    let ex: Vec<usize> = dw
        .iter()
        .copied()
        .filter(|&i| objs[i].1.is_exact())
        .collect();
    let exact: Vec<usize> = (0..objs.len()).filter(|&i| objs[i].1.is_exact()).collect();
    let perp = |s: &[usize], y: usize| s.iter().all(|&x| table[x][y] == 0);
    let lhs: Vec<String> = (0..objs.len())
        .filter(|&y| perp(&dw, y))
        .map(|y| objs[y].0.clone())
        .collect();
    let rhs: Vec<String> = exact
        .iter()
        .copied()
        .filter(|&y| perp(&ex, y))
        .map(|y| objs[y].0.clone())
        .collect();
    let report = check_compatibility(&ClassSpec::pn(1), &u, Exec::Parallel).unwrap();
    let lib_table = report.table.dims.clone();
    let pass = u.len() == COMPAT_UNIVERSE_SIZE
        && lhs == rhs
        && report.holds
        && report.lhs == lhs
        && report.rhs == rhs;
    let tables_agree = dw.len() == objs.len() && lib_table.len() == objs.len();
    verdict(
        pass && tables_agree,
        format!(
            "{} objects, both sides {lhs:?} (oracle and library agree: {})",
            u.len(),
            report.lhs == lhs
        ),
    )
}

fn criterion_10(corpus: &[Certificate]) -> Verdict {
    if corpus.is_empty() {
        return verdict(false, "no certificates; run criteria 3 to 7 first".into());
    }
    let mut r = rng(10_000);
    let mut rejected = 0;
    let mut survivors = Vec::new();
    for t in 0..MUTATIONS {
        let c = &corpus[(t * 7919) % corpus.len()];
        let mut v = serde_json::to_value(c).unwrap();
        let m = mutate(&mut v, &mut r).expect("certificate has leaves");
        let accepted =
            serde_json::from_value::<Certificate>(v).map_or(false, |c| check(&c).is_ok());
        if accepted {
            survivors.push(format!("{}: {}", c.kind(), m.path));
        } else {
            rejected += 1;
        }
    }
    verdict(
        rate(rejected, MUTATIONS) >= REQUIRED_RATE,
        format!(
            "{rejected}/{MUTATIONS} mutations rejected over {} certificates{}",
            corpus.len(),
            listed(&survivors)
        ),
    )
}

fn main() {
    // Numeric arguments select criteria; anything else (harness flags) is ignored.
    let only: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut corpus = Vec::new();
    let mut results: Vec<(usize, &str, Verdict)> = Vec::new();
    let mut record = |k: usize, what: &'static str, f: &mut dyn FnMut() -> Verdict| {
        if !only.is_empty() && !only.contains(&k) {
            return;
        }
        let start = Instant::now();
        let v = f();
        let line = format!(
            "criterion {k:>2} {}: {what}: {} [{:.1}s]",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
        println!("{line}");
        results.push((k, what, v));
    };
    record(1, "Ext oracle", &mut criterion_1);
    record(2, "dimension facts", &mut criterion_2);
    record(3, "zig-zag subresolutions", &mut || {
        criterion_3(&mut corpus)
    });
    record(4, "dw filtrations", &mut || {
        filtration_criterion(&mut corpus, false)
    });
    record(5, "ex filtrations", &mut || {
        filtration_criterion(&mut corpus, true)
    });
    record(6, "staircase", &mut || criterion_6(&mut corpus));
    record(7, "purity", &mut || criterion_7(&mut corpus));
    record(8, "lifting", &mut criterion_8);
    record(9, "compatibility identity", &mut criterion_9);
    let corpus = corpus;
    record(10, "certificate robustness", &mut || criterion_10(&corpus));
    let failed: Vec<usize> = results
        .iter()
        .filter(|(_, _, v)| !v.pass)
        .map(|(k, _, _)| *k)
        .collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria PASS", results.len());
    } else {
        println!("acceptance: FAIL on criteria {failed:?}");
        std::process::exit(1);
    }
}
