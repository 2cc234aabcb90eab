use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cotorsion::cotorsion::ext_table;
use cotorsion::library;
use cotorsion::oracle::{ext_oracle_table, small_modules};
use cotorsion::par::Exec;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn oracle_table(c: &mut Criterion) {
    let a = library::algebra("T2F2").unwrap();
    let modules = small_modules(&a, 3);
    let mut g = c.benchmark_group("ext_oracle_table");
    g.sample_size(10);
    for (label, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, &exec| {
            b.iter(|| ext_oracle_table(black_box(&modules), exec))
        });
    }
    g.finish();
}

fn complex_ext_table(c: &mut Criterion) {
    let u = library::universe("T2F2").unwrap();
    let mut g = c.benchmark_group("complex_ext_table");
    g.sample_size(10);
    for (label, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, &exec| {
            b.iter(|| ext_table(black_box(&u.objects), &u.objects, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, oracle_table, complex_ext_table);
criterion_main!(benches);
