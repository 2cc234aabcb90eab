use cotorsion::certificate::{mutate, Certificate, Mode, Statement, Witness};
use cotorsion::checker::{check, check_json};
use cotorsion::complex_zigzag::{dw_filtration, ex_filtration, staircase, StaircaseOptions, Track};
use cotorsion::library;
use cotorsion::random::{random_complex, random_element, random_exact_complex, rng};
use cotorsion::resolution::projective_resolution;
use cotorsion::zigzag::{module_filtration, pure_closure, zigzag_subresolution};
use cotorsion::Subspace;

fn corpus() -> Vec<Certificate> {
    let mut out = Vec::new();
    for (name, n) in [("T2F2", 1), ("NAK3", 2)] {
        let alg = library::algebra(name).unwrap();
        let mut r = rng(11);
        for (mname, m) in library::modules(name).unwrap() {
            let res = projective_resolution(&m, n).unwrap();
            let seed = m.submodule_generated([&cotorsion::subspace::unit_vec(m.dim(), 0)]);
            if let Ok(z) = zigzag_subresolution(&res, &seed, 4) {
                out.push(Certificate::subresolution(&z));
            }
            let filt = module_filtration(&m, n, 4).unwrap();
            out.push(Certificate::module_filtration(&filt, Mode::Full));
            out.push(Certificate::module_filtration(&filt, Mode::Compact));
            if mname.starts_with('P') {
                let s0 =
                    m.submodule_generated([&cotorsion::subspace::unit_vec(m.dim(), m.dim() - 1)]);
                if let Ok(pc) = pure_closure(&s0, &m, 4, None) {
                    out.push(Certificate::pure_closure(&m, &pc, 4));
                }
            }
        }
        for _ in 0..2 {
            let x = random_complex(&mut r, &alg, 0, 3, 4);
            out.push(Certificate::complex_filtration(
                &dw_filtration(&x, n, 6).unwrap(),
            ));
            let e = random_exact_complex(&mut r, &alg, 0, 3, 5);
            out.push(Certificate::complex_filtration(
                &ex_filtration(&e, n, 6).unwrap(),
            ));
            let (deg, v) = random_element(&mut r, &e).unwrap();
            for track in [Track::Projective, Track::Flat] {
                let opts = StaircaseOptions {
                    track,
                    kappa: 4,
                    n,
                    ..Default::default()
                };
                let s = staircase(&e, deg, &v, &opts).unwrap();
                out.push(Certificate::staircase(&s, Mode::Full));
            }
        }
    }
    out
}

#[test]
fn emitted_certificates_verify() {
    let certs = corpus();
    assert!(certs.len() > 20);
    for c in &certs {
        let json = c.to_json();
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(&back, c);
        if let Err(e) = check_json(&json) {
            panic!("{} certificate rejected: {e}", c.kind());
        }
    }
}

#[test]
fn edited_inclusion_names_the_degree() {
    let alg = library::algebra("T2F2").unwrap();
    let x = random_complex(&mut rng(4), &alg, 0, 3, 4);
    let mut c = Certificate::complex_filtration(&dw_filtration(&x, 1, 6).unwrap());
    let Witness::ComplexFiltration { steps } = &mut c.witness else {
        unreachable!()
    };
    let (a, i) = steps
        .iter()
        .enumerate()
        .find_map(|(a, s)| {
            s.inclusion
                .iter()
                .position(|m| !m.is_empty() && !m[0].is_empty())
                .map(|i| (a, i))
        })
        .expect("some nonempty inclusion component");
    steps[a].inclusion[i][0][0] ^= 1;
    let err = check(&c).unwrap_err();
    assert!(
        err.location
            .contains(&format!("steps[{a}].inclusion, degree {i}")),
        "{err}"
    );
}

#[test]
fn budget_below_the_achieved_size_is_rejected_even_when_resealed() {
    let m = library::module("NAK3", "P1").unwrap();
    let filt = module_filtration(&m, 2, 4).unwrap();
    let mut c = Certificate::module_filtration(&filt, Mode::Compact);
    let Statement::ModuleFiltration { kappa, .. } = &mut c.statement else {
        unreachable!()
    };
    let Witness::ModuleFiltration { steps, .. } = &c.witness else {
        unreachable!()
    };
    *kappa = steps.iter().map(|s| s.quotient.dim).max().unwrap() - 1;
    assert!(check(&c).is_err());
    c.reseal();
    assert!(check(&c).unwrap_err().reason.contains("exceeds"));
}

#[test]
fn wrong_seed_is_not_contained() {
    let m = library::module("T2F2", "P_b").unwrap();
    let res = projective_resolution(&m, 1).unwrap();
    let seed = Subspace::from_vectors(m.field(), m.dim(), &[vec![0, 1]]);
    let seed = m.submodule_generated(seed.basis().iter());
    let z = zigzag_subresolution(&res, &seed, 4).unwrap();
    let mut c = Certificate::subresolution(&z);
    let Witness::Subresolution { record, .. } = &mut c.witness else {
        unreachable!()
    };
    record.index_sets[0].clear();
    assert!(check(&c).is_err());
}

#[test]
fn single_field_mutations_are_rejected() {
    let certs = corpus();
    let mut r = rng(2024);
    let mut survivors = Vec::new();
    for t in 0..400 {
        let c = &certs[t % certs.len()];
        let mut v = serde_json::to_value(c).unwrap();
        let m = mutate(&mut v, &mut r).unwrap();
        if check_json(&v.to_string()).is_ok() {
            survivors.push((c.kind(), m));
        }
    }
    assert!(survivors.is_empty(), "{survivors:#?}");
}

#[test]
fn witness_mutations_are_caught_without_the_digest() {
    let certs = corpus();
    let mut r = rng(7);
    let mut survivors = Vec::new();
    let mut tried = 0;
    while tried < 300 {
        let c = &certs[tried % certs.len()];
        let mut v = serde_json::to_value(c).unwrap();
        let m = mutate(&mut v, &mut r).unwrap();
        if !m.path.starts_with("witness") {
            continue;
        }
        tried += 1;
        if check_json(&v.to_string()).is_ok() {
            survivors.push((c.kind(), m));
        }
    }
    assert!(survivors.is_empty(), "{survivors:#?}");
}
