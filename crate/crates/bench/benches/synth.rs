use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sl2design::bases::BasisSpec;
use sl2design::sampler::{basis_for, sample_in, Construction};
use sl2design::synth::synth_mr;
use sl2design::{FieldCtx, MulStrategy};
use sl2design_bench::element;

fn mr(c: &mut Criterion) {
    let mut g = c.benchmark_group("synth_mr");
    g.sample_size(10);
    for n in [64usize, 256] {
        let ctx = FieldCtx::new(n, MulStrategy::Karatsuba).unwrap();
        let basis = BasisSpec::polynomial(&ctx);
        let r = element(&ctx, 5);
        for s in MulStrategy::ALL {
            g.bench_with_input(BenchmarkId::new(s.name(), n), &n, |b, _| {
                b.iter(|| synth_mr(&basis, &r, s).unwrap())
            });
        }
    }
    g.finish();
}

fn sample(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample");
    g.sample_size(10);
    for (con, n) in [(Construction::Selfdual, 29usize), (Construction::PolyRecursive, 256), (Construction::PolyMod4, 256)] {
        let s = MulStrategy::Karatsuba;
        let basis = basis_for(n, con, s).unwrap();
        let mut seed = 0;
        g.bench_with_input(BenchmarkId::new(con.name(), n), &n, |b, _| {
            b.iter(|| {
                seed += 1;
                sample_in(&basis, con, seed, s).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, mr, sample);
criterion_main!(benches);
