//! The catalogue of example plane homeomorphisms: rigid twists (Ex1, Ex2),
//! twists supported in the balls `B_n = B(z_n, 1/4)` around the integer
//! points `z_n = (n, 0)` (Ex3, Ex4, Ex6), radial attractor–repeller maps
//! with a half-turn offset (Ex5, Ex5bis), plus a synthetic annulus map with
//! drift of both signs used to exercise the Franks checker.
//!
//! Each isotopy interpolates its angular term linearly in `t`, and its
//! radial term as `(1 - t)·r + t·ρ(r)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::isotopy::{enlace, tourne, Isotopy, TrajectoryOptions};
use crate::measures::{CircleMeasure, DiskMeasure, MeasureSampler, WeightedSum};
use crate::rotation::{rho_birkhoff, BirkhoffOptions};

/// Radius of the balls `B_n`.
pub const BALL_RADIUS: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExampleId {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Ex5bis,
    Ex6,
}

impl ExampleId {
    pub const ALL: [ExampleId; 7] =
        [ExampleId::Ex1, ExampleId::Ex2, ExampleId::Ex3, ExampleId::Ex4, ExampleId::Ex5, ExampleId::Ex5bis, ExampleId::Ex6];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Ex1 => "ex1",
            ExampleId::Ex2 => "ex2",
            ExampleId::Ex3 => "ex3",
            ExampleId::Ex4 => "ex4",
            ExampleId::Ex5 => "ex5",
            ExampleId::Ex5bis => "ex5bis",
            ExampleId::Ex6 => "ex6",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown example id {s:?}")))
    }
}

/// Tunable parameters; `None` selects the default for the example.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExampleParams {
    /// Rotation at the ball centers for Ex4 (default 0.3, must not be an integer).
    pub theta0: Option<f64>,
    /// Radial map stiffness `c` (Ex5/Ex5bis default 0.1, Ex6 default 20).
    pub stiffness: Option<f64>,
    /// Width of the flat ends of the bump profiles (default 1/32).
    pub bump_eps: Option<f64>,
}

/// Analytic description of (part of) `Fix(f)`.
pub trait FixedSampler: Send + Sync {
    /// Deterministic list of fixed points with `|z| <= radius`.
    fn sample(&self, radius: f64) -> Vec<Point>;

    /// `Some(R)` when the whole fixed set is known to lie in `|z| <= R`.
    fn bounded_radius(&self) -> Option<f64> {
        None
    }
}

/// Fixed sampler backed by a closure.
pub struct AnalyticFixedSet {
    generator: Box<dyn Fn(f64) -> Vec<Point> + Send + Sync>,
    bound: Option<f64>,
}

impl AnalyticFixedSet {
    pub fn new(generator: impl Fn(f64) -> Vec<Point> + Send + Sync + 'static, bound: Option<f64>) -> Self {
        AnalyticFixedSet { generator: Box::new(generator), bound }
    }
}

impl FixedSampler for AnalyticFixedSet {
    fn sample(&self, radius: f64) -> Vec<Point> {
        (self.generator)(radius).into_iter().filter(|p| p.norm() <= radius).collect()
    }

    fn bounded_radius(&self) -> Option<f64> {
        self.bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Quantity {
    Tourne { z: Point },
    Enlace { z: Point, z2: Point },
    Rho { z: Point, puncture: Point },
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Tourne { .. } => "tourne",
            Quantity::Enlace { .. } => "enlace",
            Quantity::Rho { .. } => "rho",
        }
    }

    pub fn args(&self) -> String {
        let p = |q: Point| format!("({};{})", fmt_coord(q.x), fmt_coord(q.y));
        match *self {
            Quantity::Tourne { z } => format!("z={}", p(z)),
            Quantity::Enlace { z, z2 } => format!("z={} z2={}", p(z), p(z2)),
            Quantity::Rho { z, puncture } => format!("z={} puncture={}", p(z), p(puncture)),
        }
    }
}

fn fmt_coord(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

/// One reference value attached to an example.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub quantity: Quantity,
    pub expected: f64,
    pub tol: f64,
}

pub struct ExampleSystem {
    pub id: ExampleId,
    pub params: ExampleParams,
    pub isotopy: Isotopy,
    pub fixed_set: Box<dyn FixedSampler>,
    /// Tourne is defined for every point with `|z|` beyond this radius.
    pub safe_radius: f64,
    pub measures: Vec<Arc<dyn MeasureSampler>>,
    pub oracle_table: Vec<OracleEntry>,
}

impl fmt::Debug for ExampleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExampleSystem")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("safe_radius", &self.safe_radius)
            .field("oracles", &self.oracle_table.len())
            .finish()
    }
}

impl ExampleSystem {
    pub fn map(&self, z: Point) -> Point {
        self.isotopy.end_map(z)
    }
}

/// `z_n = (n, 0)`.
pub fn z_n(n: i64) -> Point {
    Point::new(n as f64, 0.0)
}

fn exp_ramp(x: f64) -> f64 {
    if x <= 0.0 { 0.0 } else { (-1.0 / x).exp() }
}

/// `C^∞` step from 0 (for `x <= 0`) to 1 (for `x >= 1`).
pub fn smooth_step(x: f64) -> f64 {
    let a = exp_ramp(x);
    let b = exp_ramp(1.0 - x);
    if a + b == 0.0 { 0.0 } else { a / (a + b) }
}

/// Bump on `[0, 1/4]`: zero on `[0, ε] ∪ [1/4 - ε, 1/4]`, one at `1/8`,
/// monotone on either side of `1/8`.
pub fn plateau_bump(r: f64, eps: f64) -> f64 {
    let mid = BALL_RADIUS / 2.0;
    let width = mid - eps;
    if r <= mid {
        smooth_step((r - eps) / width)
    } else {
        smooth_step((BALL_RADIUS - eps - r) / width)
    }
}

/// Ex4 profile: `θ_0` on `[0, ε]`, zero on `[1/4 - ε, 1/4]`.
pub fn shoulder(r: f64, eps: f64, theta0: f64) -> f64 {
    theta0 * (1.0 - smooth_step((r - eps) / (BALL_RADIUS - 2.0 * eps)))
}

/// Inverts an increasing function on `[lo, hi]` by bisection.
fn invert_monotone(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ex5 radial map `ρ(r) = r + c·sin²(πr)`: fixes the integers and pushes
/// `(n, n+1)` toward `n + 1`.
pub fn radial_ex5(r: f64, c: f64) -> f64 {
    let s = (PI * r).sin();
    r + c * s * s
}

fn radial_ex5_inv(s: f64, c: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    invert_monotone(|r| radial_ex5(r, c), s, (s - c).max(0.0), s)
}

/// Ex5bis radial map: `r ↦ 1/ρ_5(1/r)`, fixing every `1/n` and pushing
/// `(1/(n+1), 1/n)` toward `1/(n+1)`.
pub fn radial_ex5bis(r: f64, c: f64) -> f64 {
    if r <= 0.0 { 0.0 } else { 1.0 / radial_ex5(1.0 / r, c) }
}

fn radial_ex5bis_inv(s: f64, c: f64) -> f64 {
    if s <= 0.0 { 0.0 } else { 1.0 / radial_ex5_inv(1.0 / s, c) }
}

/// Ex6 radial map on `[0, 1/4]`: `r + c·r(1/8 - r)(1/4 - r)`, attracting `1/8`.
pub fn radial_ex6(r: f64, c: f64) -> f64 {
    r + c * r * (0.125 - r) * (0.25 - r)
}

fn radial_ex6_inv(s: f64, c: f64) -> f64 {
    invert_monotone(|r| radial_ex6(r, c), s, 0.0, BALL_RADIUS)
}

/// Maps supported in the balls `B_n`: `z_n + r e^{2πiθ} ↦ z_n + R(r) e^{2πi(θ + A_n(r))}`.
#[derive(Clone)]
struct BallMap {
    twist: Arc<dyn Fn(i64, f64) -> f64 + Send + Sync>,
    radial: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    radial_inv: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl BallMap {
    fn locate(z: Point) -> Option<(i64, Point)> {
        let n = z.x.round();
        let local = Point::new(z.x - n, z.y);
        (local.norm() <= BALL_RADIUS).then_some((n as i64, local))
    }

    fn eval(&self, t: f64, z: Point) -> Point {
        let Some((n, local)) = Self::locate(z) else { return z };
        let r = local.norm();
        if r == 0.0 {
            return z;
        }
        let radius = match &self.radial {
            Some(rho) => (1.0 - t) * r + t * rho(r),
            None => r,
        };
        let w = Point::polar(radius, local.angle_turns() + t * (self.twist)(n, r));
        z_n(n) + w
    }

    fn inverse(&self, w: Point) -> Point {
        let Some((n, local)) = Self::locate(w) else { return w };
        let s = local.norm();
        if s == 0.0 {
            return w;
        }
        let r = match &self.radial_inv {
            Some(inv) => inv(s),
            None => s,
        };
        z_n(n) + Point::polar(r, local.angle_turns() - (self.twist)(n, r))
    }

    fn into_isotopy(self, name: &str) -> Isotopy {
        let fwd = self.clone();
        Isotopy::new(name, move |t, z| fwd.eval(t, z)).with_inverse(move |w| self.inverse(w))
    }
}

/// Rigid twist about the origin: `re^{2πiθ} ↦ R_t(r) e^{2πi(θ + t·A(r))}`.
fn radial_twist_isotopy(
    name: &str,
    twist: impl Fn(f64) -> f64 + Send + Sync + Clone + 'static,
    radial: impl Fn(f64) -> f64 + Send + Sync + Clone + 'static,
    radial_inv: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> Isotopy {
    let (tw, rad) = (twist.clone(), radial.clone());
    Isotopy::new(name, move |t, z| {
        let r = z.norm();
        if r == 0.0 {
            return z;
        }
        Point::polar((1.0 - t) * r + t * rad(r), z.angle_turns() + t * tw(r))
    })
    .with_inverse(move |w| {
        let s = w.norm();
        if s == 0.0 {
            return w;
        }
        let r = radial_inv(s);
        Point::polar(r, w.angle_turns() - twist(r))
    })
}

fn points_on_circle(center: Point, r: f64, turns: &[f64]) -> impl Iterator<Item = Point> + '_ {
    turns.iter().map(move |&a| center + Point::polar(r, a))
}

fn ball_range(radius: f64) -> std::ops::RangeInclusive<i64> {
    let m = radius.floor() as i64 + 1;
    -m..=m
}

/// Fixed points outside every ball, near `z_n`.
fn outside_points(n: i64) -> [Point; 2] {
    [Point::new(n as f64 + 0.5, 0.35), Point::new(n as f64, -0.6)]
}

pub fn build(id: ExampleId, params: ExampleParams) -> Result<ExampleSystem> {
    let eps = params.bump_eps.unwrap_or(1.0 / 32.0);
    if !(eps > 0.0 && eps < BALL_RADIUS / 2.0) {
        return Err(Error::InvalidParams(format!("bump_eps {eps} must lie in (0, 1/8)")));
    }
    let sys = match id {
        ExampleId::Ex1 => build_ex1(params),
        ExampleId::Ex2 => build_ex2(params),
        ExampleId::Ex3 => build_ex3(params, eps),
        ExampleId::Ex4 => build_ex4(params, eps)?,
        ExampleId::Ex5 => build_ex5(params, false)?,
        ExampleId::Ex5bis => build_ex5(params, true)?,
        ExampleId::Ex6 => build_ex6(params, eps)?,
    };
    Ok(sys)
}

/// Builds with default parameters.
pub fn build_default(id: ExampleId) -> ExampleSystem {
    build(id, ExampleParams::default()).expect("default parameters are valid")
}

fn build_ex1(params: ExampleParams) -> ExampleSystem {
    let isotopy = Isotopy::new("ex1", |t, z| {
        let r = z.norm();
        Point::polar(r, z.angle_turns() + t * r)
    })
    .with_inverse(|w| {
        let r = w.norm();
        Point::polar(r, w.angle_turns() - r)
    });
    let fixed_set = AnalyticFixedSet::new(
        |radius| {
            let mut pts = vec![Point::ORIGIN];
            for n in 1..=radius.floor() as i64 {
                pts.extend(points_on_circle(Point::ORIGIN, n as f64, &[0.0, 0.37, 0.71]));
            }
            pts
        },
        None,
    );
    let mut oracle_table = Vec::new();
    for n in 1..=5 {
        oracle_table.push(OracleEntry { quantity: Quantity::Enlace { z: z_n(n), z2: Point::ORIGIN }, expected: n as f64, tol: 1e-9 });
        oracle_table.push(OracleEntry { quantity: Quantity::Tourne { z: z_n(n) }, expected: n as f64, tol: 1e-9 });
    }
    ExampleSystem {
        id: ExampleId::Ex1,
        params,
        isotopy,
        fixed_set: Box::new(fixed_set),
        safe_radius: 0.0,
        measures: vec![Arc::new(CircleMeasure::new(Point::ORIGIN, 1.5, 1.0))],
        oracle_table,
    }
}

/// Ex2 twist: `sin(πr + π/2)` turns on the circle of radius `r`.
pub fn ex2_twist(r: f64) -> f64 {
    (PI * r + PI / 2.0).sin()
}

fn build_ex2(params: ExampleParams) -> ExampleSystem {
    let isotopy = Isotopy::new("ex2", |t, z| {
        let r = z.norm();
        Point::polar(r, z.angle_turns() + t * ex2_twist(r))
    })
    .with_inverse(|w| {
        let r = w.norm();
        Point::polar(r, w.angle_turns() - ex2_twist(r))
    });
    // Fixed circles: r ∈ ½ℤ (twist ±1 on integers, 0 on half-integers).
    let fixed_set = AnalyticFixedSet::new(
        |radius| {
            let mut pts = vec![Point::ORIGIN];
            for k in 1..=(2.0 * radius).floor() as i64 {
                pts.extend(points_on_circle(Point::ORIGIN, k as f64 / 2.0, &[0.0, 0.29, 0.63]));
            }
            pts
        },
        None,
    );
    let mut oracle_table = Vec::new();
    for n in 1..=6i64 {
        let expected = if n % 2 == 0 { 1.0 } else { -1.0 };
        oracle_table.push(OracleEntry { quantity: Quantity::Tourne { z: z_n(n) }, expected, tol: 1e-9 });
    }
    for (z, z2) in [
        (z_n(1), z_n(2)),
        (Point::new(0.0, 1.5), z_n(3)),
        (Point::ORIGIN, Point::polar(2.5, 0.2)),
        (Point::polar(1.0, 0.1), Point::polar(1.0, 0.6)),
    ] {
        let r = z.norm().max(z2.norm());
        oracle_table.push(OracleEntry { quantity: Quantity::Enlace { z, z2 }, expected: ex2_twist(r), tol: 1e-6 });
    }
    ExampleSystem {
        id: ExampleId::Ex2,
        params,
        isotopy,
        fixed_set: Box::new(fixed_set),
        safe_radius: 0.0,
        measures: vec![Arc::new(DiskMeasure::new(Point::ORIGIN, 2.0, 1.0))],
        oracle_table,
    }
}

/// Radius on the rising side of the bump where it equals `level ∈ (0, 1)`.
fn bump_level_radius(level: f64, eps: f64) -> f64 {
    invert_monotone(|r| plateau_bump(r, eps), level, eps, BALL_RADIUS / 2.0)
}

fn build_ex3(params: ExampleParams, eps: f64) -> ExampleSystem {
    let isotopy = BallMap {
        twist: Arc::new(move |n, r| n as f64 * plateau_bump(r, eps)),
        radial: None,
        radial_inv: None,
    }
    .into_isotopy("ex3");
    let fixed_set = AnalyticFixedSet::new(
        move |radius| {
            let mut pts = Vec::new();
            for n in ball_range(radius) {
                let c = z_n(n);
                pts.push(c);
                // The circle of radius 1/8 turns n full times.
                pts.extend(points_on_circle(c, 0.125, &[0.0, 0.4]));
                // Circles where n·bump = k turn k full times.
                for k in 1..n.unsigned_abs().min(3) as i64 {
                    let r = bump_level_radius(k as f64 / n.unsigned_abs() as f64, eps);
                    pts.push(c + Point::polar(r, 0.15));
                }
                pts.push(c + Point::new(0.0, BALL_RADIUS - eps / 2.0));
                pts.extend(outside_points(n));
            }
            pts
        },
        None,
    );
    let mut oracle_table = Vec::new();
    for n in -3..=3 {
        oracle_table.push(OracleEntry {
            quantity: Quantity::Enlace { z: z_n(n), z2: z_n(n) + Point::new(0.125, 0.0) },
            expected: n as f64,
            tol: 1e-9,
        });
    }
    for z in [z_n(2) + Point::new(0.125, 0.0), Point::new(2.5, 0.5), z_n(3), z_n(-2) + Point::polar(0.125, 0.4)] {
        oracle_table.push(OracleEntry { quantity: Quantity::Tourne { z }, expected: 0.0, tol: 1e-9 });
    }
    ExampleSystem {
        id: ExampleId::Ex3,
        params,
        isotopy,
        fixed_set: Box::new(fixed_set),
        safe_radius: BALL_RADIUS,
        measures: vec![Arc::new(DiskMeasure::new(z_n(2), BALL_RADIUS, 1.0))],
        oracle_table,
    }
}

fn build_ex4(mut params: ExampleParams, eps: f64) -> Result<ExampleSystem> {
    let theta0 = params.theta0.unwrap_or(0.3);
    if !theta0.is_finite() || theta0.fract() == 0.0 {
        return Err(Error::InvalidParams(format!("theta0 = {theta0} must be a finite non-integer")));
    }
    params.theta0 = Some(theta0);
    let isotopy = BallMap { twist: Arc::new(move |_, r| shoulder(r, eps, theta0)), radial: None, radial_inv: None }
        .into_isotopy("ex4");
    let fixed_set = AnalyticFixedSet::new(
        move |radius| {
            let mut pts = Vec::new();
            for n in ball_range(radius) {
                let c = z_n(n);
                pts.push(c);
                pts.push(c + Point::polar(BALL_RADIUS - eps / 2.0, 0.3));
                // Circles where the shoulder crosses an integer.
                let top = theta0.abs().floor() as i64;
                for k in 1..=top.min(3) {
                    let level = k as f64 * theta0.signum();
                    let r = invert_monotone(|r| -shoulder(r, eps, theta0).abs(), -level.abs(), eps, BALL_RADIUS - eps);
                    pts.push(c + Point::polar(r, 0.6));
                }
                pts.extend(outside_points(n));
            }
            pts
        },
        None,
    );
    let plateau = z_n(1) + Point::new(eps / 2.0, 0.0);
    let oracle_table = vec![
        OracleEntry { quantity: Quantity::Enlace { z: z_n(1), z2: plateau }, expected: theta0, tol: 1e-9 },
        OracleEntry { quantity: Quantity::Enlace { z: z_n(0), z2: z_n(1) }, expected: 0.0, tol: 1e-9 },
        OracleEntry {
            quantity: Quantity::Enlace { z: z_n(2), z2: z_n(2) + Point::polar(BALL_RADIUS - eps / 2.0, 0.3) },
            expected: 0.0,
            tol: 1e-9,
        },
        OracleEntry { quantity: Quantity::Tourne { z: z_n(2) }, expected: 0.0, tol: 1e-9 },
        OracleEntry { quantity: Quantity::Tourne { z: Point::new(3.5, 0.35) }, expected: 0.0, tol: 1e-9 },
    ];
    Ok(ExampleSystem {
        id: ExampleId::Ex4,
        params,
        isotopy,
        fixed_set: Box::new(fixed_set),
        safe_radius: BALL_RADIUS,
        measures: vec![
            Arc::new(DiskMeasure::new(z_n(0), BALL_RADIUS, PI / 16.0)),
            Arc::new(DiskMeasure::new(z_n(1), BALL_RADIUS, PI / 16.0)),
        ],
        oracle_table,
    })
}

fn build_ex5(mut params: ExampleParams, bis: bool) -> Result<ExampleSystem> {
    let c = params.stiffness.unwrap_or(0.1);
    if !(0.0..1.0 / PI).contains(&c) || c == 0.0 {
        return Err(Error::InvalidParams(format!("stiffness {c} must lie in (0, 1/π) for a monotone radial map")));
    }
    params.stiffness = Some(c);
    let (id, isotopy, circle_radius): (ExampleId, Isotopy, fn(i64) -> f64) = if bis {
        (
            ExampleId::Ex5bis,
            radial_twist_isotopy(
                "ex5bis",
                |r| 1.0 / r + 0.5,
                move |r| radial_ex5bis(r, c),
                move |s| radial_ex5bis_inv(s, c),
            ),
            |n| 1.0 / n as f64,
        )
    } else {
        (
            ExampleId::Ex5,
            radial_twist_isotopy("ex5", |r| r + 0.5, move |r| radial_ex5(r, c), move |s| radial_ex5_inv(s, c)),
            |n| n as f64,
        )
    };
    let fixed_set = AnalyticFixedSet::new(|_| vec![Point::ORIGIN], Some(0.0));
    let oracle_table = (1..=4)
        .map(|n| OracleEntry {
            quantity: Quantity::Rho { z: Point::new(circle_radius(n), 0.0), puncture: Point::ORIGIN },
            expected: n as f64 + 0.5,
            tol: 1e-9,
        })
        .collect();
    let components: Vec<(f64, Arc<dyn MeasureSampler>)> = (1..=30)
        .map(|n| {
            let m: Arc<dyn MeasureSampler> = Arc::new(CircleMeasure::new(Point::ORIGIN, circle_radius(n), 1.0));
            (0.5f64.powi(n as i32), m)
        })
        .collect();
    Ok(ExampleSystem {
        id,
        params,
        isotopy,
        fixed_set: Box::new(fixed_set),
        safe_radius: 0.0,
        measures: vec![Arc::new(WeightedSum::new(components))],
        oracle_table,
    })
}

fn build_ex6(mut params: ExampleParams, eps: f64) -> Result<ExampleSystem> {
    let c = params.stiffness.unwrap_or(20.0);
    if !(c > 0.0 && c < 64.0) {
        return Err(Error::InvalidParams(format!("stiffness {c} must lie in (0, 64) for a monotone radial map")));
    }
    params.stiffness = Some(c);
    let isotopy = BallMap {
        twist: Arc::new(move |n, r| (n as f64 + 0.5) * plateau_bump(r, eps)),
        radial: Some(Arc::new(move |r| radial_ex6(r, c))),
        radial_inv: Some(Arc::new(move |s| radial_ex6_inv(s, c))),
    }
    .into_isotopy("ex6");
    let fixed_set = AnalyticFixedSet::new(
        |radius| {
            let mut pts = Vec::new();
            for n in ball_range(radius) {
                let c = z_n(n);
                pts.push(c);
                pts.push(c + Point::polar(BALL_RADIUS, 0.25));
                pts.extend(outside_points(n));
            }
            pts
        },
        None,
    );
    let mut oracle_table: Vec<OracleEntry> = (1..=4)
        .map(|n| OracleEntry {
            quantity: Quantity::Rho { z: z_n(n) + Point::new(0.125, 0.0), puncture: z_n(n) },
            expected: n as f64 + 0.5,
            tol: 1e-9,
        })
        .collect();
    oracle_table.push(OracleEntry { quantity: Quantity::Enlace { z: z_n(1), z2: z_n(2) }, expected: 0.0, tol: 1e-9 });
    oracle_table.push(OracleEntry {
        quantity: Quantity::Enlace { z: z_n(3), z2: z_n(3) + Point::polar(BALL_RADIUS, 0.25) },
        expected: 0.0,
        tol: 1e-9,
    });
    Ok(ExampleSystem {
        id: ExampleId::Ex6,
        params,
        isotopy,
        fixed_set: Box::new(fixed_set),
        safe_radius: BALL_RADIUS,
        measures: (1..=2).map(|n| Arc::new(CircleMeasure::new(z_n(n), 0.125, 1.0)) as Arc<dyn MeasureSampler>).collect(),
        oracle_table,
    })
}

/// Evaluates an oracle quantity on a system.
pub fn evaluate(sys: &ExampleSystem, quantity: &Quantity, opts: &TrajectoryOptions) -> Result<f64> {
    match *quantity {
        Quantity::Tourne { z } => tourne(&sys.isotopy, z, opts),
        Quantity::Enlace { z, z2 } => enlace(&sys.isotopy, z, z2, opts),
        Quantity::Rho { z, puncture } => {
            let bopts = BirkhoffOptions { max_iter: 10_000, ..Default::default() };
            Ok(rho_birkhoff(&sys.isotopy, z, puncture, &bopts, opts)?.value)
        }
    }
}

/// Annulus map around `puncture` with angular drift `+a` inside the unit
/// circle and `-a` outside it, mixed by a radial kick.
///
/// In coordinates `x` (angle around the puncture, in turns) and
/// `y = ln|z - puncture|`:
/// `y' = y + kick·sin(2πx)`, `x' = x - a·tanh(y'/width)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftParams {
    pub puncture: Point,
    pub drift: f64,
    pub kick: f64,
    pub width: f64,
}

impl Default for DriftParams {
    fn default() -> Self {
        DriftParams { puncture: Point::ORIGIN, drift: 0.3, kick: 0.2, width: 0.1 }
    }
}

/// `(center, radius)` of a free disk of the default drift map, at radius
/// 1.25 and angle 0.6 turn around the puncture, whose lifted orbits land
/// on translates of both signs.
pub const DRIFT_DISK: (Point, f64) = (Point::new(-1.0112712429686845, -0.7347315653655913), 0.1);

pub fn synthetic_drift(p: DriftParams) -> Isotopy {
    let DriftParams { puncture, drift, kick, width } = p;
    let shear = move |y: f64| -drift * (y / width).tanh();
    Isotopy::new("drift", move |t, z| {
        let w = z - puncture;
        let r = w.norm();
        if r == 0.0 {
            return z;
        }
        let x = w.angle_turns();
        let y = r.ln();
        let dy = kick * (std::f64::consts::TAU * x).sin();
        let yt = y + t * dy;
        let xt = x + t * shear(y + dy);
        puncture + Point::polar(yt.exp(), xt)
    })
    .with_inverse(move |z| {
        let w = z - puncture;
        let r = w.norm();
        if r == 0.0 {
            return z;
        }
        let y1 = r.ln();
        let x = w.angle_turns() - shear(y1);
        let y = y1 - kick * (std::f64::consts::TAU * x).sin();
        puncture + Point::polar(y.exp(), x)
    })
}
