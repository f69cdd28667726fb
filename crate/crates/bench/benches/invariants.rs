use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use rotor_core::examples::{synthetic_drift, z_n, DriftParams, DRIFT_DISK};
use rotor_core::franks::{check_franks, grid_seeds, AnnulusLift};
use rotor_core::returns::{alpha, verify_free_default};
use rotor_core::{
    build_default, enlace, rho_birkhoff, tourne, winding, BirkhoffOptions, ExampleId, Point, Polyline,
    TrajectoryOptions,
};

fn bench_winding(c: &mut Criterion) {
    let verts: Vec<Point> = (0..=1000).map(|i| Point::polar(1.0 + 0.2 * (i as f64 * 0.1).sin(), i as f64 / 250.0)).collect();
    let path = Polyline::from_vertices(verts).unwrap();
    c.bench_function("winding_1000_segments", |b| b.iter(|| winding(black_box(&path), Point::ORIGIN).unwrap()));
}

fn bench_trajectories(c: &mut Criterion) {
    let opts = TrajectoryOptions::default();
    let ex1 = build_default(ExampleId::Ex1);
    let ex3 = build_default(ExampleId::Ex3);
    c.bench_function("tourne_ex1", |b| b.iter(|| tourne(&ex1.isotopy, black_box(z_n(3)), &opts).unwrap()));
    c.bench_function("enlace_ex3", |b| {
        b.iter(|| enlace(&ex3.isotopy, black_box(z_n(2)), z_n(2) + Point::new(0.125, 0.0), &opts).unwrap())
    });
}

fn bench_returns(c: &mut Criterion) {
    let opts = TrajectoryOptions::default();
    let ex5 = build_default(ExampleId::Ex5);
    let bopts = BirkhoffOptions { max_iter: 1000, ..Default::default() };
    c.bench_function("rho_birkhoff_ex5", |b| {
        b.iter(|| rho_birkhoff(&ex5.isotopy, black_box(Point::new(2.0, 0.0)), Point::ORIGIN, &bopts, &opts).unwrap())
    });
    let ex1 = build_default(ExampleId::Ex1);
    let disk = verify_free_default(&ex1.isotopy, Point::new(1.5, 0.0), 0.1).unwrap();
    c.bench_function("alpha_ex1", |b| {
        b.iter(|| alpha(&ex1.isotopy, &disk, Point::ORIGIN, black_box(Point::polar(1.5, 0.005)), 1000, &opts).unwrap())
    });
    c.bench_function("verify_free_ex1", |b| {
        b.iter(|| verify_free_default(&ex1.isotopy, black_box(Point::new(1.5, 0.0)), 0.1).unwrap())
    });
}

fn bench_franks(c: &mut Criterion) {
    let opts = TrajectoryOptions::default();
    let drift = synthetic_drift(DriftParams::default());
    let disk = verify_free_default(&drift, DRIFT_DISK.0, DRIFT_DISK.1).unwrap();
    let lift = AnnulusLift::new(drift, Point::ORIGIN, 0);
    let seeds = grid_seeds(&disk, 12);
    let mut g = c.benchmark_group("franks");
    g.sample_size(10);
    g.bench_function("check_franks_drift", |b| b.iter(|| check_franks(&lift, &disk, black_box(&seeds), 40, &opts).unwrap()));
    g.finish();
}

criterion_group!(benches, bench_winding, bench_trajectories, bench_returns, bench_franks);
criterion_main!(benches);
