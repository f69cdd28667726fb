//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rotor_core::examples::{self, ex2_twist, shoulder, z_n, DriftParams, BALL_RADIUS, DRIFT_DISK};
use rotor_core::franks::{check_franks, grid_seeds, resimulate, AnnulusLift};
use rotor_core::geometry::{winding, Point, Polyline};
use rotor_core::isotopy::{enlace, tourne, TrajectoryOptions};
use rotor_core::measures::{self, ArcMeasure, CircleMeasure, DiskMeasure, IdentityOptions};
use rotor_core::properties::{equivariance_check, scan_p1, scan_p2, Verdict};
use rotor_core::returns::{alpha, alpha_tau_range, gamma_loop, verify_free_default, FreeDisk};
use rotor_core::rotation::{rho_birkhoff, rho_lift, BirkhoffOptions};
use rotor_core::{build_default, ExampleId};

type Check = Result<String, String>;
type CheckFn = fn() -> Check;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn ok<T>(r: rotor_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn opts() -> TrajectoryOptions {
    TrajectoryOptions::default()
}

fn ex1_oracles() -> Check {
    let sys = build_default(ExampleId::Ex1);
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        let e = ok(enlace(&sys.isotopy, z_n(n), Point::ORIGIN, &opts()))?;
        let t = ok(tourne(&sys.isotopy, z_n(n), &opts()))?;
        worst = worst.max((e - n as f64).abs()).max((t - n as f64).abs());
    }
    ensure(worst < 1e-9, || format!("max error {worst:e}"))?;
    Ok(format!("enlace(z_n,0) = tourne(z_n) = n for n=1..5, max error {worst:.1e}"))
}

fn ex2_oracles() -> Check {
    let sys = build_default(ExampleId::Ex2);
    let mut worst_t: f64 = 0.0;
    for n in 1..=6 {
        let t = ok(tourne(&sys.isotopy, z_n(n), &opts()))?;
        let expected = if n % 2 == 0 { 1.0 } else { -1.0 };
        worst_t = worst_t.max((t - expected).abs());
    }
    ensure(worst_t < 1e-9, || format!("tourne max error {worst_t:e}"))?;
    // Pairs with one point at the origin, both on one circle, or both on
    // fixed circles.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_e: f64 = 0.0;
    for i in 0..20 {
        let (z, z2) = match i % 3 {
            0 => (Point::ORIGIN, Point::polar(rng.random_range(0.2..4.0), rng.random())),
            1 => {
                let r = rng.random_range(0.2..4.0);
                (Point::polar(r, rng.random()), Point::polar(r, rng.random()))
            }
            _ => {
                let a = rng.random_range(1..8) as f64 / 2.0;
                let b = rng.random_range(1..8) as f64 / 2.0;
                let b = if a == b { b + 0.5 } else { b };
                (Point::polar(a, rng.random()), Point::polar(b, rng.random()))
            }
        };
        let e = ok(enlace(&sys.isotopy, z, z2, &opts()))?;
        worst_e = worst_e.max((e - ex2_twist(z.norm().max(z2.norm()))).abs());
    }
    ensure(worst_e < 1e-6, || format!("enlace max error {worst_e:e}"))?;
    Ok(format!("tourne(z_n) = (-1)^n, error {worst_t:.1e}; 20 pairs vs closed form, error {worst_e:.1e}"))
}

fn ex3_oracles() -> Check {
    let sys = build_default(ExampleId::Ex3);
    let mut worst: f64 = 0.0;
    for n in -3..=3 {
        let e = ok(enlace(&sys.isotopy, z_n(n), z_n(n) + Point::new(0.125, 0.0), &opts()))?;
        worst = worst.max((e - n as f64).abs());
    }
    ensure(worst < 1e-9, || format!("enlace(z_n, z'_n) max error {worst:e}"))?;
    let outside: Vec<Point> = sys.fixed_set.sample(6.0).into_iter().filter(|z| z.norm() > BALL_RADIUS).collect();
    let mut worst_t: f64 = 0.0;
    for &z in &outside {
        worst_t = worst_t.max(ok(tourne(&sys.isotopy, z, &opts()))?.abs());
    }
    ensure(worst_t < 1e-9, || format!("tourne outside B_0 reaches {worst_t:e}"))?;
    let p1 = ok(scan_p1(&sys.isotopy, sys.fixed_set.as_ref(), 1.0, 20_000, &opts()))?;
    let p2 = ok(scan_p2(&sys.isotopy, sys.fixed_set.as_ref(), &[1.0, 2.0, 4.0], &opts()))?;
    ensure(p1.verdict == Verdict::Violated, || format!("P1 verdict {:?}", p1.verdict))?;
    ensure(p2.verdict == Verdict::Consistent, || format!("P2 verdict {:?}", p2.verdict))?;
    Ok(format!(
        "enlace(z_n,z'_n) = n, tourne = 0 on {} fixed points outside B_0, P1 {:?} (maxima {:?}), P2 {:?}",
        outside.len(),
        p1.verdict,
        p1.per_radius.iter().map(|r| r.1).collect::<Vec<_>>(),
        p2.verdict
    ))
}

fn ex4_formula(z: Point, z2: Point, theta0: f64) -> f64 {
    let (n, m) = (z.x.round(), z2.x.round());
    let (r, r2) = (z.dist(Point::new(n, 0.0)), z2.dist(Point::new(m, 0.0)));
    if n == m && r <= BALL_RADIUS && r2 <= BALL_RADIUS {
        shoulder(r.max(r2), 1.0 / 32.0, theta0)
    } else {
        0.0
    }
}

fn ex4_oracles() -> Check {
    let sys = build_default(ExampleId::Ex4);
    let theta0 = sys.params.theta0.unwrap();
    let fixed = sys.fixed_set.sample(4.0);
    // Pairs with one point at a ball center, both on one circle around a
    // center, or both fixed.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let c = z_n(rng.random_range(-3..=3));
        let (z, z2) = match i % 3 {
            0 => (c, c + Point::polar(rng.random_range(0.001..BALL_RADIUS), rng.random())),
            1 => {
                let r = rng.random_range(0.001..BALL_RADIUS);
                (c + Point::polar(r, rng.random()), c + Point::polar(r, rng.random()))
            }
            _ => {
                let a = fixed[rng.random_range(0..fixed.len())];
                let b = fixed[rng.random_range(0..fixed.len())];
                if a == b {
                    continue;
                }
                (a, b)
            }
        };
        let e = ok(enlace(&sys.isotopy, z, z2, &opts()))?;
        worst = worst.max((e - ex4_formula(z, z2, theta0)).abs());
    }
    let p1 = ok(scan_p1(&sys.isotopy, sys.fixed_set.as_ref(), 1.0, 20_000, &opts()))?;
    let one = Point::new(1.0, 0.0);
    let mut commute: f64 = 0.0;
    for i in -20..=20 {
        for j in -10..=10 {
            let z = Point::new(i as f64 * 0.173 + 0.01, j as f64 * 0.061);
            commute = commute.max(sys.map(z + one).dist(sys.map(z) + one));
        }
    }
    let detail = format!(
        "50 pairs vs piecewise formula, error {worst:.1e}; scan_p1 max {} (want {theta0}), verdict {:?}; commutation defect {commute:.1e}",
        p1.max_abs, p1.verdict
    );
    ensure(worst < 1e-6, || format!("enlace formula error {worst:e}; {detail}"))?;
    ensure(commute <= 1e-12, || format!("commutation defect {commute:e}"))?;
    ensure((p1.max_abs - theta0.abs()).abs() < 1e-6, || detail.clone())?;
    Ok(detail)
}

fn radial_rotation_numbers() -> Check {
    let bopts = BirkhoffOptions { max_iter: 1000, ..Default::default() };
    let mut worst: f64 = 0.0;
    let mut worst_lift: f64 = 0.0;
    for id in [ExampleId::Ex5, ExampleId::Ex5bis, ExampleId::Ex6] {
        let sys = build_default(id);
        for n in 1..=4i64 {
            let (z, p) = match id {
                ExampleId::Ex5 => (Point::new(n as f64, 0.0), Point::ORIGIN),
                ExampleId::Ex5bis => (Point::new(1.0 / n as f64, 0.0), Point::ORIGIN),
                _ => (z_n(n) + Point::new(0.125, 0.0), z_n(n)),
            };
            let expected = n as f64 + 0.5;
            let est = ok(rho_birkhoff(&sys.isotopy, z, p, &bopts, &opts()))?;
            ensure(est.converged && est.return_times.iter().all(|t| t % 2 == 0), || {
                format!("{id} n={n}: returns {:?}, converged {}", est.return_times, est.converged)
            })?;
            worst = worst.max((est.value - expected).abs());
            let lifted = ok(rho_lift(&sys.isotopy, z, p, 100, &opts()))?;
            worst_lift = worst_lift.max((lifted - est.value).abs());
        }
    }
    ensure(worst < 1e-9, || format!("rho_birkhoff error {worst:e}"))?;
    ensure(worst_lift < 1e-6, || format!("rho_lift disagreement {worst_lift:e}"))?;
    Ok(format!("rho = n + 1/2 on Ex5/Ex5bis/Ex6 (n=1..4) at even returns, error {worst:.1e}; rho_lift gap {worst_lift:.1e}"))
}

fn shift_laws() -> Check {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for id in [ExampleId::Ex1, ExampleId::Ex2, ExampleId::Ex3, ExampleId::Ex4] {
        let sys = build_default(id);
        let pairs = [(z_n(2), z_n(1) + Point::new(0.1, 0.05)), (Point::new(0.3, 1.7), Point::new(-2.2, 0.4))];
        let points = [Point::new(2.5, 0.35), z_n(3), Point::new(-1.1, -0.9)];
        for k in -3..=3 {
            let shifted = sys.isotopy.shift_class(k);
            for &(z, z2) in &pairs {
                let d = ok(enlace(&shifted, z, z2, &opts()))? - ok(enlace(&sys.isotopy, z, z2, &opts()))?;
                worst = worst.max((d - k as f64).abs());
                cases += 1;
            }
            for &z in &points {
                let d = ok(tourne(&shifted, z, &opts()))? - ok(tourne(&sys.isotopy, z, &opts()))?;
                worst = worst.max((d - k as f64).abs());
                cases += 1;
            }
        }
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("{cases} enlace/tourne comparisons for k in -3..3 on Ex1-Ex4, max deviation {worst:.1e}"))
}

/// A random free disk, a fixed puncture outside it and a seed inside it.
fn random_case(rng: &mut ChaCha8Rng) -> (ExampleId, FreeDisk, Point, Point) {
    loop {
        let pick = rng.random_range(0..4);
        let (id, center, radius, puncture) = match pick {
            0 => {
                let r: f64 = rng.random_range(1.2..3.0);
                if (r - r.floor() - 0.5).abs() > 0.25 {
                    continue;
                }
                let puncture = if rng.random_bool(0.5) { Point::ORIGIN } else { Point::polar(4.0, rng.random()) };
                (ExampleId::Ex1, Point::polar(r, rng.random()), rng.random_range(0.03..0.12), puncture)
            }
            1 => {
                let r = rng.random_range(0.3..3.0);
                let tw = ex2_twist(r);
                if (tw - tw.round()).abs() < 0.2 {
                    continue;
                }
                let puncture = if rng.random_bool(0.5) { Point::ORIGIN } else { Point::polar(3.5, rng.random()) };
                (ExampleId::Ex2, Point::polar(r, rng.random()), rng.random_range(0.01..0.03), puncture)
            }
            2 => {
                let c = z_n(rng.random_range(-2..=2));
                let puncture = if rng.random_bool(0.5) { c } else { c + Point::new(0.5, 0.4) };
                (ExampleId::Ex4, c + Point::polar(rng.random_range(0.05..0.12), rng.random()), 0.012, puncture)
            }
            _ => {
                let m = rng.random_range(1..=3) as f64;
                (ExampleId::Ex5, Point::polar(m, rng.random()), rng.random_range(0.05..0.15), Point::ORIGIN)
            }
        };
        let sys = build_default(id);
        let Ok(disk) = verify_free_default(&sys.isotopy, center, radius) else { continue };
        if disk.center.dist(puncture) <= disk.radius {
            continue;
        }
        let seed = if id == ExampleId::Ex5 {
            // Only the invariant circles are recurrent.
            let m = center.norm();
            let half = (radius / (2.0 * m)).asin() / PI;
            Point::polar(m, center.angle_turns() + rng.random_range(-0.9 * half..0.9 * half))
        } else {
            center + Point::polar(radius * rng.random::<f64>().sqrt() * 0.999, rng.random())
        };
        return (id, disk, puncture, seed);
    }
}

fn alpha_integrality() -> Check {
    let topts = TrajectoryOptions::with_tol(1e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut per_example = std::collections::BTreeMap::new();
    for _ in 0..200 {
        let (id, disk, puncture, seed) = random_case(&mut rng);
        let sys = build_default(id);
        let a = ok(alpha(&sys.isotopy, &disk, puncture, seed, 1_000_000, &topts))?;
        worst = worst.max((a.raw - a.raw.round()).abs());
        let g = ok(gamma_loop(&sys.isotopy, &disk, puncture, seed, 1_000_000, &topts))?;
        let w = ok(winding(&g, Point::ORIGIN))?;
        ensure(w.nearest_integer() == a.value && a.ret.tau >= 2, || {
            format!("{id}: winding(Gamma) {} vs alpha {} (tau {})", w.turns, a.value, a.ret.tau)
        })?;
        *per_example.entry(id.as_str()).or_insert(0) += 1;
    }
    ensure(worst < 1e-6, || format!("integrality residual {worst:e}"))?;
    let mut analytic = Vec::new();
    for m in 1..=3 {
        let sys = build_default(ExampleId::Ex5);
        let disk = ok(verify_free_default(&sys.isotopy, Point::new(m as f64, 0.0), 0.1))?;
        let a = ok(alpha(&sys.isotopy, &disk, Point::ORIGIN, Point::new(m as f64, 0.0), 1000, &topts))?;
        ensure(a.value == 2 * m + 1, || format!("Ex5 m={m}: alpha {}", a.value))?;
        analytic.push(a.value);
    }
    let sys = build_default(ExampleId::Ex1);
    let disk = ok(verify_free_default(&sys.isotopy, Point::new(1.5, 0.0), 0.1))?;
    let a = ok(alpha(&sys.isotopy, &disk, Point::ORIGIN, Point::polar(1.5, 0.005), 1000, &topts))?;
    ensure(a.value == 3, || format!("Ex1 r=1.5: alpha {}", a.value))?;
    Ok(format!(
        "200 random cases {per_example:?}, max residual {worst:.1e}, Gamma winding = alpha; Ex5 alpha {analytic:?}, Ex1 alpha {}",
        a.value
    ))
}

fn alpha_tau_range_ex4() -> Check {
    let sys = build_default(ExampleId::Ex4);
    let m = sys.params.theta0.unwrap().abs().ceil();
    let disk = ok(verify_free_default(&sys.isotopy, Point::new(0.08, 0.0), 0.02))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let seeds: Vec<Point> =
        (0..100).map(|_| disk.center + Point::polar(0.02 * rng.random::<f64>().sqrt() * 0.999, rng.random())).collect();
    let (lo, hi) = ok(alpha_tau_range(&sys.isotopy, &disk, z_n(0), &seeds, 1_000_000, &opts()))?;
    ensure(hi - lo <= 2.0 * m + 4.0, || format!("range [{lo}, {hi}] longer than {}", 2.0 * m + 4.0))?;
    Ok(format!("100 seeds, alpha/tau in [{lo:.6}, {hi:.6}], length {:.6} <= {}", hi - lo, 2.0 * m + 4.0))
}

fn return_identity() -> Check {
    let n = 100_000;
    let idopts = IdentityOptions::default();
    let mut lines = Vec::new();
    // Ex1: arc measure on the circle of radius 1.5 restricted to U ∪ f(U).
    let sys = build_default(ExampleId::Ex1);
    let disk = ok(verify_free_default(&sys.isotopy, Point::new(1.5, 0.0), 0.1))?;
    let half = (0.1f64 / 3.0).asin() / PI;
    let nu = ok(ArcMeasure::new(Point::ORIGIN, 1.5, vec![(-half, 2.0 * half), (0.5 - half, 2.0 * half)]))?;
    let rep = ok(measures::birkhoff_identity(&sys.isotopy, &disk, Point::ORIGIN, &nu, n, 0, &idopts, &opts()))?;
    let analytic = 3.0 * 2.0 * half;
    ensure(rep.diff.abs() < 3.0 * rep.stderr, || format!("Ex1: {rep:?}"))?;
    ensure((rep.lhs.value - analytic).abs() <= 1e-3 * analytic, || format!("Ex1 lhs {} vs 3nu(U) = {analytic}", rep.lhs.value))?;
    lines.push(format!(
        "Ex1 lhs {:.6} rhs {:.6} diff {:.2e} (3se {:.2e}), 3nu(U) = {analytic:.6}",
        rep.lhs.value,
        rep.rhs.value,
        rep.diff,
        3.0 * rep.stderr
    ));
    let sys = build_default(ExampleId::Ex5);
    for m in 1..=2 {
        let c = Point::new(m as f64, 0.0);
        let disk = ok(verify_free_default(&sys.isotopy, c, 0.1))?;
        let nu = CircleMeasure::new(Point::ORIGIN, m as f64, 1.0);
        let rep = ok(measures::birkhoff_identity(&sys.isotopy, &disk, Point::ORIGIN, &nu, n, m, &idopts, &opts()))?;
        ensure(rep.diff.abs() < 3.0 * rep.stderr, || format!("Ex5 m={m}: {rep:?}"))?;
        let analytic = (2 * m + 1) as f64 * 2.0 * (0.1 / (2.0 * m as f64)).asin() / PI;
        lines.push(format!(
            "Ex5 m={m} lhs {:.6} rhs {:.6} diff {:.2e} (3se {:.2e}), analytic {analytic:.6}",
            rep.lhs.value,
            rep.rhs.value,
            rep.diff,
            3.0 * rep.stderr
        ));
    }
    Ok(lines.join("; "))
}

fn equivariance() -> Check {
    let sys = build_default(ExampleId::Ex1);
    let z = Point::polar(1.5, 0.1);
    let rot = |w: Point| w.rotate(0.37);
    let r = ok(equivariance_check(&sys.isotopy, &rot, true, z, Point::ORIGIN, 50, &opts()))?;
    let selfmap = |w: Point| sys.map(w);
    let s = ok(equivariance_check(&sys.isotopy, &selfmap, true, z, Point::ORIGIN, 50, &opts()))?;
    let conj = |w: Point| Point::new(w.x, -w.y);
    let c = ok(equivariance_check(&sys.isotopy, &conj, false, z, Point::ORIGIN, 50, &opts()))?;
    // Ex3 with the reflection (x, y) -> (-x, y), which maps B_n onto B_{-n}.
    let ex3 = build_default(ExampleId::Ex3);
    let mirror = |w: Point| Point::new(-w.x, w.y);
    let e3 = ok(equivariance_check(&ex3.isotopy, &mirror, false, z_n(2) + Point::new(0.1, 0.0), z_n(2), 50, &opts()))?;
    let detail = format!(
        "Ex1 rotation diff {:.1e}, g=f diff {:.1e}; Ex1 reflection lhs {} vs -rho {}; Ex3 reflection lhs {:.9} vs -rho {:.9}",
        r.diff, s.diff, c.lhs, c.rhs, e3.lhs, e3.rhs
    );
    ensure(r.diff < 1e-6 && s.diff < 1e-6 && e3.diff < 1e-6, || detail.clone())?;
    ensure(c.diff < 1e-6, || detail.clone())?;
    Ok(detail)
}

fn franks_checker() -> Check {
    let drift = examples::synthetic_drift(DriftParams::default());
    let (center, radius) = DRIFT_DISK;
    let disk = ok(verify_free_default(&drift, center, radius))?;
    let lift = AnnulusLift::new(drift, Point::ORIGIN, 0);
    let cert = ok(check_franks(&lift, &disk, &grid_seeds(&disk, 12), 40, &opts()))?
        .ok_or_else(|| "no certificate for the two-sided drift map".to_string())?;
    ensure(cert.forward.p >= 0 && cert.backward.p <= 0, || format!("{cert:?}"))?;
    ensure(ok(resimulate(&lift, &cert, &opts()))?, || "witnesses do not re-simulate".to_string())?;
    let ex1 = build_default(ExampleId::Ex1);
    let d1 = ok(verify_free_default(&ex1.isotopy, Point::new(1.5, 0.0), 0.1))?;
    for k in 0..=3 {
        let l = AnnulusLift::new(ex1.isotopy.clone(), Point::ORIGIN, k);
        let c = ok(check_franks(&l, &d1, &grid_seeds(&d1, 12), 50, &opts()))?;
        ensure(c.is_none(), || format!("Ex1 k={k} produced {c:?}"))?;
    }
    Ok(format!(
        "drift map: (q, p) = ({}, {}), (q', p') = ({}, {}), re-simulated; Ex1 k=0..3: none",
        cert.forward.q, cert.forward.p, cert.backward.q, cert.backward.p
    ))
}

fn property_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let trials = 1000;
    let pt = |rng: &mut ChaCha8Rng| Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    // Winding additivity over a split polyline.
    let mut worst_add: f64 = 0.0;
    for _ in 0..trials {
        let c = pt(&mut rng);
        let n = rng.random_range(3..12);
        let verts: Vec<Point> = (0..n).map(|_| pt(&mut rng)).collect();
        if verts.windows(2).any(|w| (w[1] - c).cross(w[0] - c).abs() < 1e-9 && (w[1] - c).dot(w[0] - c) <= 0.0) {
            continue;
        }
        let whole = Polyline::from_vertices(verts.clone()).unwrap();
        let k = rng.random_range(1..n - 1);
        let a = Polyline::from_vertices(verts[..=k].to_vec()).unwrap();
        let b = Polyline::from_vertices(verts[k..].to_vec()).unwrap();
        if let (Ok(w), Ok(wa), Ok(wb)) = (winding(&whole, c), winding(&a, c), winding(&b, c)) {
            worst_add = worst_add.max((w.turns - wa.turns - wb.turns).abs());
        }
    }
    // Closed loops wind an integer number of times.
    let mut worst_int: f64 = 0.0;
    for _ in 0..trials {
        let c = pt(&mut rng);
        let turns = rng.random_range(-3..=3);
        let r = rng.random_range(0.5..3.0);
        let m = 40 * (turns as i32).unsigned_abs().max(1) as usize;
        let mut verts: Vec<Point> = (0..m)
            .map(|i| c + Point::polar(r * (1.0 + 0.3 * (i as f64 * 0.7).sin()), turns as f64 * i as f64 / m as f64))
            .collect();
        verts.push(verts[0]);
        let w = ok(winding(&Polyline::from_vertices(verts).unwrap(), c))?;
        ensure(w.nearest_integer() == turns, || format!("loop of {turns} turns measured {}", w.turns))?;
        worst_int = worst_int.max(w.integer_residual());
    }
    // Enlace symmetry on a twist map.
    let ex2 = build_default(ExampleId::Ex2);
    let mut worst_sym: f64 = 0.0;
    for _ in 0..trials {
        let (z, z2) = (pt(&mut rng), pt(&mut rng));
        let a = ok(enlace(&ex2.isotopy, z, z2, &opts()))?;
        let b = ok(enlace(&ex2.isotopy, z2, z, &opts()))?;
        worst_sym = worst_sym.max((a - b).abs());
    }
    // Seeded Monte Carlo reproduces bit for bit.
    let mut mismatches = 0;
    for i in 0..trials {
        let m = DiskMeasure::new(pt(&mut rng), rng.random_range(0.1..2.0), 1.0);
        let phi = |z: Point| z.x.sin() * z.y;
        let a = ok(measures::integrate(&m, &phi, 100, i))?;
        let b = ok(measures::integrate(&m, &phi, 100, i))?;
        if a.value.to_bits() != b.value.to_bits() || a.stderr.to_bits() != b.stderr.to_bits() {
            mismatches += 1;
        }
    }
    ensure(worst_add < 1e-9, || format!("additivity defect {worst_add:e}"))?;
    ensure(worst_int < 1e-9, || format!("integrality residual {worst_int:e}"))?;
    ensure(worst_sym < 1e-9, || format!("enlace asymmetry {worst_sym:e}"))?;
    ensure(mismatches == 0, || format!("{mismatches} non-reproducible Monte Carlo runs"))?;
    Ok(format!(
        "{trials} trials each: additivity {worst_add:.1e}, integrality {worst_int:.1e}, symmetry {worst_sym:.1e}, determinism ok"
    ))
}

fn main() -> ExitCode {
    let checks: [(&str, CheckFn); 12] = [
        ("ex1_oracles", ex1_oracles),
        ("ex2_oracles", ex2_oracles),
        ("ex3_oracles", ex3_oracles),
        ("ex4_oracles", ex4_oracles),
        ("radial_rotation_numbers", radial_rotation_numbers),
        ("shift_laws", shift_laws),
        ("alpha_integrality", alpha_integrality),
        ("alpha_tau_range_ex4", alpha_tau_range_ex4),
        ("return_identity", return_identity),
        ("equivariance", equivariance),
        ("franks_checker", franks_checker),
        ("property_suite", property_suite),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        checks.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
