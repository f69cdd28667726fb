//! Plane points, parametrized polylines and winding integrals of the polar
//! angle form `dθ` around an arbitrary center.
//!
//! Windings are measured in full turns. A polyline that is homotopic (rel
//! endpoints, in the plane minus the center) to the curve it samples has
//! exactly the same winding as that curve, so refinement only has to be fine
//! enough to pin the homotopy class; it does not control an error term.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest angle a single segment may subtend, in turns: `0.5 - δ`.
pub const SEGMENT_TURN_CAP: f64 = 0.5 - 1e-3;

/// Default cap on the number of bisections performed by [`refine`].
pub const DEFAULT_REFINE_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// The point `r·e^{2πi·turns}`.
    pub fn polar(r: f64, turns: f64) -> Self {
        let (s, c) = turn_sin_cos(turns);
        Point::new(r * c, r * s)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Polar angle in turns, in `(-1/2, 1/2]`.
    pub fn angle_turns(self) -> f64 {
        self.y.atan2(self.x) / TAU
    }

    /// Rotation about the origin by `turns` full turns.
    pub fn rotate(self, turns: f64) -> Self {
        let (s, c) = turn_sin_cos(turns);
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Point, t: f64) -> Self {
        self + (other - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// `(sin, cos)` of `2π·turns`, reducing the argument mod 1 first so that
/// integer turns map exactly to `(0, 1)`.
pub fn turn_sin_cos(turns: f64) -> (f64, f64) {
    let reduced = turns - turns.round();
    if reduced == 0.0 {
        return (0.0, 1.0);
    }
    (TAU * reduced).sin_cos()
}

/// Signed angle from `a` to `b` seen from the origin, in turns.
pub fn signed_turn(a: Point, b: Point) -> f64 {
    a.cross(b).atan2(a.dot(b)) / TAU
}

/// An ordered list of vertices with parameter values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    vertices: Vec<Point>,
    params: Vec<f64>,
}

impl Polyline {
    /// Checks: at least two vertices, matching lengths, params strictly
    /// increasing from 0 to 1, finite coordinates.
    pub fn new(vertices: Vec<Point>, params: Vec<f64>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPolyline("fewer than two vertices"));
        }
        if vertices.len() != params.len() {
            return Err(Error::InvalidPolyline("vertex and parameter counts differ"));
        }
        if params[0] != 0.0 || *params.last().unwrap() != 1.0 {
            return Err(Error::InvalidPolyline("parameters must run from 0 to 1"));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidPolyline("parameters not strictly increasing"));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPolyline("non-finite vertex"));
        }
        Ok(Polyline { vertices, params })
    }

    /// Uniformly parametrized polyline through `vertices`.
    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(Error::InvalidPolyline("fewer than two vertices"));
        }
        let last = (n - 1) as f64;
        let mut params: Vec<f64> = (0..n).map(|i| i as f64 / last).collect();
        params[n - 1] = 1.0;
        Polyline::new(vertices, params)
    }

    pub fn segment(a: Point, b: Point) -> Self {
        Polyline { vertices: vec![a, b], params: vec![0.0, 1.0] }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn first(&self) -> Point {
        self.vertices[0]
    }

    pub fn last(&self) -> Point {
        *self.vertices.last().unwrap()
    }

    pub fn is_closed(&self) -> bool {
        self.first() == self.last()
    }

    pub fn translated(&self, by: Point) -> Self {
        Polyline {
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
            params: self.params.clone(),
        }
    }

    /// Point reflection `v ↦ 2c - v` through `center`.
    pub fn reflected_through(&self, center: Point) -> Self {
        Polyline {
            vertices: self.vertices.iter().map(|&v| center * 2.0 - v).collect(),
            params: self.params.clone(),
        }
    }

    pub fn reversed(&self) -> Self {
        let vertices = self.vertices.iter().rev().copied().collect();
        let params = self.params.iter().rev().map(|t| 1.0 - t).collect();
        Polyline { vertices, params }
    }

    /// Concatenates pieces end to end, piece `i` occupying the parameter
    /// interval `[i/n, (i+1)/n]`. A vertex shared between consecutive pieces
    /// is kept once; otherwise the join becomes an extra segment.
    pub fn concat(pieces: &[Polyline]) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::EmptyInput("no pieces to concatenate"));
        }
        let n = pieces.len() as f64;
        let mut vertices = Vec::new();
        let mut params: Vec<f64> = Vec::new();
        for (i, piece) in pieces.iter().enumerate() {
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            for (k, (&v, &t)) in piece.vertices.iter().zip(&piece.params).enumerate() {
                let s = if k + 1 == piece.len() { hi } else { lo + (hi - lo) * t };
                if k == 0 && !vertices.is_empty() {
                    let prev = *vertices.last().unwrap();
                    if prev == v {
                        continue;
                    }
                    // Joining segment: nudge the previous end so params stay
                    // strictly increasing.
                    let last = params.len() - 1;
                    let before = params[last - 1];
                    params[last] = before + (params[last] - before) * 0.5;
                }
                vertices.push(v);
                params.push(s);
            }
        }
        let last = params.len() - 1;
        params[last] = 1.0;
        Polyline::new(vertices, params)
    }
}

/// Result of integrating `dθ` along a polyline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingValue {
    /// Total angle in turns.
    pub turns: f64,
    /// Largest absolute angle subtended by any single segment, in turns.
    pub max_segment_turn: f64,
}

impl WindingValue {
    pub fn nearest_integer(&self) -> i64 {
        self.turns.round() as i64
    }

    pub fn integer_residual(&self) -> f64 {
        (self.turns - self.turns.round()).abs()
    }
}

fn center_threshold(scale: f64) -> f64 {
    64.0 * f64::EPSILON * scale.max(1.0)
}

/// Distance from the origin to the segment `[a, b]`.
fn segment_origin_distance(a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return a.norm();
    }
    let t = (-a.dot(d) / len2).clamp(0.0, 1.0);
    (a + d * t).norm()
}

/// Integral of the polar angle form along `path` around `center`, in turns.
pub fn winding(path: &Polyline, center: Point) -> Result<WindingValue> {
    let mut turns = 0.0;
    let mut max_segment_turn: f64 = 0.0;
    let rel: Vec<Point> = path.vertices.iter().map(|&v| v - center).collect();
    for (index, w) in rel.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let scale = a.norm().max(b.norm());
        let distance = segment_origin_distance(a, b);
        if distance <= center_threshold(scale) {
            return Err(Error::CenterOnPath { center, distance });
        }
        let turn = signed_turn(a, b);
        if turn.abs() >= SEGMENT_TURN_CAP {
            return Err(Error::SegmentTooWide { index, turns: turn });
        }
        max_segment_turn = max_segment_turn.max(turn.abs());
        turns += turn;
    }
    Ok(WindingValue { turns, max_segment_turn })
}

/// Controls for [`refine`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    /// Largest turn a segment may subtend at the center.
    pub max_turn: f64,
    /// Largest allowed distance between a segment midpoint and the curve at
    /// the midpoint parameter.
    pub max_chord_err: f64,
    /// Maximum number of bisections.
    pub budget: usize,
    /// Uniform samples taken before adaptive bisection starts.
    pub initial_segments: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            max_turn: 0.1,
            max_chord_err: 1e-2,
            budget: DEFAULT_REFINE_BUDGET,
            initial_segments: 16,
        }
    }
}

impl RefineOptions {
    pub fn new(max_turn: f64, max_chord_err: f64) -> Self {
        RefineOptions { max_turn, max_chord_err, ..Default::default() }
    }
}

/// Samples the curve `t ↦ curve(t)`, `t ∈ [0, 1]`, into a polyline whose
/// segments each subtend at most `max_turn` at `center` and deviate from the
/// curve by at most `max_chord_err` at their midpoints.
///
/// A curve that is constant on the initial samples collapses to a two-vertex
/// path.
pub fn refine<F>(curve: F, center: Point, opts: &RefineOptions) -> Result<Polyline>
where
    F: Fn(f64) -> Point,
{
    if !(opts.max_turn > 0.0 && opts.max_turn < SEGMENT_TURN_CAP) {
        return Err(Error::InvalidInput(format!("max_turn {} out of range", opts.max_turn)));
    }
    let n0 = opts.initial_segments.max(1);
    let eval = |t: f64| -> Result<Point> {
        let p = curve(t);
        if !p.is_finite() {
            return Err(Error::InvalidInput(format!("curve is not finite at t = {t}")));
        }
        let distance = p.dist(center);
        if distance <= center_threshold(p.norm().max(center.norm())) {
            return Err(Error::CenterOnPath { center, distance });
        }
        Ok(p)
    };

    let initial: Vec<(f64, Point)> = (0..=n0)
        .map(|i| {
            let t = if i == n0 { 1.0 } else { i as f64 / n0 as f64 };
            eval(t).map(|p| (t, p))
        })
        .collect::<Result<_>>()?;
    let start = initial[0].1;
    if initial.iter().all(|&(_, p)| p == start) {
        return Polyline::new(vec![start, start], vec![0.0, 1.0]);
    }

    let mut vertices = vec![start];
    let mut params = vec![0.0];
    let mut splits = 0usize;
    // Depth-first over a stack of intervals, right halves pushed first, so
    // vertices come out in parameter order.
    let mut stack: Vec<(f64, Point, f64, Point)> = initial
        .windows(2)
        .rev()
        .map(|w| (w[0].0, w[0].1, w[1].0, w[1].1))
        .collect();
    while let Some((t0, p0, t1, p1)) = stack.pop() {
        let tm = 0.5 * (t0 + t1);
        let pm = eval(tm)?;
        let a = p0 - center;
        let b = p1 - center;
        let m = pm - center;
        let whole = signed_turn(a, b);
        let halves = signed_turn(a, m) + signed_turn(m, b);
        let chord_err = pm.dist(p0.lerp(p1, 0.5));
        let ok = whole.abs() <= opts.max_turn
            && (halves - whole).abs() < 0.25
            && chord_err <= opts.max_chord_err
            && segment_origin_distance(a, b) > center_threshold(a.norm().max(b.norm()));
        if ok {
            vertices.push(p1);
            params.push(t1);
            continue;
        }
        splits += 1;
        if splits > opts.budget || tm <= t0 || tm >= t1 {
            return Err(Error::RefinementBudgetExceeded { budget: opts.budget });
        }
        stack.push((tm, pm, t1, p1));
        stack.push((t0, p0, tm, pm));
    }
    Polyline::new(vertices, params)
}
