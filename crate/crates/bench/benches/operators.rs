use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fracalc_bench::{bump_on_line, sqrt_on_unit};
use fracalc_core::operators::{fourier_derivative, gl_derivative, rl_derivative, rl_integral};
use fracalc_core::sobolev::gagliardo_seminorm;
use fracalc_core::Direction;

fn bench_rl(c: &mut Criterion) {
    let mut group = c.benchmark_group("rl");
    for n in [1024usize, 4096] {
        let f = sqrt_on_unit(n);
        group.bench_with_input(BenchmarkId::new("integral", n), &f, |b, f| {
            b.iter(|| rl_integral(black_box(f), 0.5, Direction::Left).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("derivative", n), &f, |b, f| {
            b.iter(|| rl_derivative(black_box(f), 0.5, Direction::Left, None).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("gl", n), &f, |b, f| {
            b.iter(|| gl_derivative(black_box(f), 0.5, Direction::Left).unwrap())
        });
    }
    group.finish();
}

fn bench_fourier(c: &mut Criterion) {
    let f = bump_on_line(4096);
    c.bench_function("fourier_derivative_4096", |b| b.iter(|| fourier_derivative(black_box(&f), 0.5).unwrap()));
}

fn bench_gagliardo(c: &mut Criterion) {
    let f = sqrt_on_unit(512);
    c.bench_function("gagliardo_512", |b| b.iter(|| gagliardo_seminorm(black_box(&f), 0.25, 2.0).unwrap()));
}

criterion_group!(benches, bench_rl, bench_fourier, bench_gagliardo);
criterion_main!(benches);
