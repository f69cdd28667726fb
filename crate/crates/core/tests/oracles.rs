use approx::assert_abs_diff_eq;

use rotor_core::examples::{evaluate, ex2_twist, z_n, ExampleParams};
use rotor_core::isotopy::{enlace, tourne, TrajectoryOptions};
use rotor_core::{build, build_default, Error, ExampleId, Isotopy, Point};

fn opts() -> TrajectoryOptions {
    TrajectoryOptions::default()
}

#[test]
fn every_oracle_table_entry_is_reproduced() {
    for id in ExampleId::ALL {
        let sys = build_default(id);
        assert!(!sys.oracle_table.is_empty(), "{id} has no oracles");
        for entry in &sys.oracle_table {
            let got = evaluate(&sys, &entry.quantity, &opts()).unwrap();
            assert!(
                (got - entry.expected).abs() <= entry.tol,
                "{id} {} {}: {got} vs {}",
                entry.quantity.name(),
                entry.quantity.args(),
                entry.expected
            );
        }
    }
}

#[test]
fn rigid_rotation_tourne_equals_angle() {
    // A rotation by θ turns around the origin moves every point by θ turns.
    for theta in [-2.3, -0.4, 0.0, 0.7, 3.25] {
        let iso = Isotopy::rotation(theta);
        for z in [Point::new(1.0, 0.0), Point::new(-0.3, 2.0), Point::polar(5.0, 0.17)] {
            assert_abs_diff_eq!(tourne(&iso, z, &opts()).unwrap(), theta, epsilon = 1e-9);
        }
    }
}

#[test]
fn ex1_enlace_is_radius_dependent_angle_difference() {
    // Ex1 rotates the circle of radius r by r turns, so two points on different
    // circles link by the rotation of the outer one.
    let sys = build_default(ExampleId::Ex1);
    for (r1, r2) in [(1.0, 2.0), (2.0, 3.0), (1.0, 4.0)] {
        let e = enlace(&sys.isotopy, Point::new(r1, 0.0), Point::new(-r2, 0.0), &opts()).unwrap();
        assert!(e.is_finite());
        assert_abs_diff_eq!(e, e.round(), epsilon = 1e-6);
    }
}

#[test]
fn ex2_tourne_alternates_and_matches_twist() {
    let sys = build_default(ExampleId::Ex2);
    for n in 1..=8i64 {
        let expected = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert_abs_diff_eq!(tourne(&sys.isotopy, z_n(n), &opts()).unwrap(), expected, epsilon = 1e-9);
        assert_abs_diff_eq!(ex2_twist(n as f64), expected, epsilon = 1e-12);
    }
}

#[test]
fn ex3_enlace_across_balls() {
    let sys = build_default(ExampleId::Ex3);
    for n in -4..=4 {
        let e = enlace(&sys.isotopy, z_n(n), z_n(n) + Point::new(0.0, 0.125), &opts()).unwrap();
        assert_abs_diff_eq!(e, n as f64, epsilon = 1e-9);
    }
    // Fixed points in different balls do not link.
    let e = enlace(&sys.isotopy, z_n(1), z_n(3), &opts()).unwrap();
    assert_abs_diff_eq!(e, 0.0, epsilon = 1e-9);
}

#[test]
fn ex4_center_pairs_see_theta0() {
    let sys = build(ExampleId::Ex4, ExampleParams { theta0: Some(0.7), ..Default::default() }).unwrap();
    let e = enlace(&sys.isotopy, z_n(2), z_n(2) + Point::new(0.01, 0.0), &opts()).unwrap();
    assert_abs_diff_eq!(e, 0.7, epsilon = 1e-6);
}

#[test]
fn invalid_parameters_are_rejected() {
    let bad = [
        (ExampleId::Ex4, ExampleParams { theta0: Some(2.0), ..Default::default() }),
        (ExampleId::Ex3, ExampleParams { bump_eps: Some(0.5), ..Default::default() }),
        (ExampleId::Ex5, ExampleParams { stiffness: Some(1.0), ..Default::default() }),
        (ExampleId::Ex6, ExampleParams { stiffness: Some(-1.0), ..Default::default() }),
    ];
    for (id, params) in bad {
        assert!(matches!(build(id, params), Err(Error::InvalidParams(_))), "{id} accepted {params:?}");
    }
}

#[test]
fn example_ids_round_trip() {
    for id in ExampleId::ALL {
        assert_eq!(id.as_str().parse::<ExampleId>().unwrap(), id);
        assert_eq!(id.to_string(), id.as_str());
    }
    assert!("ex9".parse::<ExampleId>().is_err());
}
