//! Scanners for the two properties of an isotopy relative to `Fix(f)`:
//! (P1) Enlace bounded on pairs of fixed points, (P2) Tourne constant on
//! fixed points near infinity. Finite scans can only suggest either, so
//! verdicts are three-valued.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::examples::FixedSampler;
use crate::geometry::Point;
use crate::isotopy::{enlace, tourne, Isotopy, TrajectoryOptions};
use crate::rotation::{rho_lift, FIXED_RESIDUAL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Violated,
    Consistent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct P1Report {
    pub max_abs: f64,
    pub argmax: Option<(Point, Point)>,
    /// `(radius, max |Enlace| over pairs within the radius)` per scan.
    pub per_radius: Vec<(f64, f64)>,
    pub pairs_checked: usize,
    pub verdict: Verdict,
}

fn checked_fixed(iso: &Isotopy, pts: Vec<Point>) -> Result<Vec<Point>> {
    for &z in &pts {
        let residual = iso.fixed_residual(z);
        if residual >= FIXED_RESIDUAL {
            return Err(Error::NotFixed { point: z, residual });
        }
    }
    Ok(pts)
}

/// Pairs `(i, j)`, `i < j`, in lexicographic order up to `n_pairs`, plus
/// every adjacent pair `(i, i + 1)`.
fn pair_indices(n: usize, n_pairs: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).take(n_pairs).collect();
    let full = out.len() == n * n.saturating_sub(1) / 2;
    if !full {
        out.extend((0..n.saturating_sub(1)).map(|i| (i, i + 1)));
        out.sort_unstable();
        out.dedup();
    }
    out
}

/// Scans `max |Enlace_I|` over fixed pairs within `r0, 2r0, 4r0, 8r0`.
///
/// Violated when the maximum grows strictly at every doubling, consistent
/// when it does not move, inconclusive otherwise. A fixed set known to lie
/// inside the first radius is scanned completely and reported consistent.
pub fn scan_p1(
    iso: &Isotopy,
    sampler: &dyn FixedSampler,
    r0: f64,
    n_pairs: usize,
    opts: &TrajectoryOptions,
) -> Result<P1Report> {
    let mut per_radius = Vec::new();
    let mut best = (0.0, None);
    let mut pairs_checked = 0;
    for k in 0..4 {
        let radius = r0 * f64::from(1 << k);
        let pts = checked_fixed(iso, sampler.sample(radius))?;
        let pairs = pair_indices(pts.len(), n_pairs);
        pairs_checked += pairs.len();
        let values = pairs
            .par_iter()
            .map(|&(i, j)| enlace(iso, pts[i], pts[j], opts).map(|e| (e.abs(), i, j)))
            .collect::<Result<Vec<_>>>()?;
        let top = values.iter().copied().fold((0.0, usize::MAX, usize::MAX), |a, b| if b.0 > a.0 { b } else { a });
        if top.0 > best.0 {
            best = (top.0, Some((pts[top.1], pts[top.2])));
        }
        per_radius.push((radius, top.0));
    }
    let maxima: Vec<f64> = per_radius.iter().map(|r| r.1).collect();
    let bounded = sampler.bounded_radius().is_some_and(|b| b <= r0);
    let verdict = if bounded || maxima.windows(2).all(|w| (w[1] - w[0]).abs() < 1e-6) {
        Verdict::Consistent
    } else if maxima.windows(2).all(|w| w[1] > w[0] + 0.5) {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    Ok(P1Report { max_abs: best.0, argmax: best.1, per_radius, pairs_checked, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub inner: f64,
    pub outer: f64,
    pub points: Vec<Point>,
    pub values: Vec<f64>,
    /// The common value, when the shell is non-empty and Tourne is constant on it.
    pub constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct P2Report {
    pub shells: Vec<Shell>,
    pub verdict: Verdict,
}

/// Tourne on the fixed points in each shell `R ≤ |z| ≤ 2R`.
///
/// Consistent when every non-empty shell is constant with one common value
/// (or all are empty and the fixed set is known to be bounded), violated
/// when every non-empty shell is non-constant, inconclusive otherwise.
pub fn scan_p2(iso: &Isotopy, sampler: &dyn FixedSampler, radii: &[f64], opts: &TrajectoryOptions) -> Result<P2Report> {
    if radii.is_empty() {
        return Err(Error::EmptyInput("shell radii"));
    }
    let mut shells = Vec::new();
    for &r in radii {
        let points: Vec<Point> = checked_fixed(iso, sampler.sample(2.0 * r))?.into_iter().filter(|z| z.norm() >= r).collect();
        let values = points.par_iter().map(|&z| tourne(iso, z, opts)).collect::<Result<Vec<f64>>>()?;
        let constant = match values.first() {
            Some(&v0) if values.iter().all(|v| (v - v0).abs() < 1e-6) => Some(v0),
            _ => None,
        };
        shells.push(Shell { inner: r, outer: 2.0 * r, points, values, constant });
    }
    let filled: Vec<&Shell> = shells.iter().filter(|s| !s.values.is_empty()).collect();
    let verdict = if filled.is_empty() {
        if sampler.bounded_radius().is_some() { Verdict::Consistent } else { Verdict::Inconclusive }
    } else if filled.iter().all(|s| s.constant.is_some())
        && filled.windows(2).all(|w| (w[0].constant.unwrap() - w[1].constant.unwrap()).abs() < 1e-6)
    {
        Verdict::Consistent
    } else if filled.iter().all(|s| s.constant.is_none()) {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    Ok(P2Report { shells, verdict })
}

/// The integer `k` such that `shift_class(I, -k)` has Tourne zero on the far
/// fixed points; checked on the shifted isotopy before returning.
pub fn adapted_shift(iso: &Isotopy, far: &dyn FixedSampler, radii: &[f64], opts: &TrajectoryOptions) -> Result<i64> {
    let report = scan_p2(iso, far, radii, opts)?;
    let values: Vec<f64> = report.shells.iter().flat_map(|s| s.values.iter().copied()).collect();
    let Some(&v0) = values.first() else {
        return Err(Error::EmptyInput("no fixed points in the far shells"));
    };
    let k = v0.round();
    if values.iter().any(|v| (v - k).abs() >= 1e-6) {
        return Err(Error::NotConstant(values));
    }
    let k = k as i64;
    let shifted = iso.shift_class(-k);
    for shell in &report.shells {
        for &z in &shell.points {
            let t = tourne(&shifted, z, opts)?;
            if t.abs() >= 1e-6 {
                return Err(Error::NotConstant(vec![t]));
            }
        }
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivarianceReport {
    /// `ρ_{g(z')}(g(z))` estimated over `n` lifted steps.
    pub lhs: f64,
    /// `±ρ_{z'}(z)`, negated when `g` reverses orientation.
    pub rhs: f64,
    pub diff: f64,
}

/// Compares rotation numbers before and after a map `g` commuting with `f`.
pub fn equivariance_check(
    iso: &Isotopy,
    g: &dyn Fn(Point) -> Point,
    preserves_orientation: bool,
    z: Point,
    puncture: Point,
    n: usize,
    opts: &TrajectoryOptions,
) -> Result<EquivarianceReport> {
    let mut w = z;
    for p in std::iter::once(puncture).chain((0..n).map(|_| {
        let cur = w;
        w = iso.end_map(w);
        cur
    })) {
        let defect = g(iso.end_map(p)).dist(iso.end_map(g(p)));
        if defect >= 1e-9 {
            return Err(Error::NotCommuting { point: p, defect });
        }
    }
    let lhs = rho_lift(iso, g(z), g(puncture), n, opts)?;
    let base = rho_lift(iso, z, puncture, n, opts)?;
    let rhs = if preserves_orientation { base } else { -base };
    Ok(EquivarianceReport { lhs, rhs, diff: (lhs - rhs).abs() })
}

/// Fixed points of `f` in a box, located by a residual grid and polished by
/// Newton's method with a finite-difference Jacobian.
pub fn find_fixed_points(
    f: &(dyn Fn(Point) -> Point + Sync),
    lo: Point,
    hi: Point,
    n: usize,
    tol: f64,
) -> Vec<Point> {
    let n = n.max(2);
    let step = Point::new((hi.x - lo.x) / n as f64, (hi.y - lo.y) / n as f64);
    let node = |i: usize, j: usize| Point::new(lo.x + i as f64 * step.x, lo.y + j as f64 * step.y);
    let res: Vec<Vec<f64>> = (0..=n).into_par_iter().map(|i| (0..=n).map(|j| f(node(i, j)).dist(node(i, j))).collect()).collect();
    let mut found: Vec<Point> = Vec::new();
    let dedup = step.norm();
    for i in 0..=n {
        for j in 0..=n {
            let r = res[i][j];
            let is_min = (i.saturating_sub(1)..=(i + 1).min(n))
                .flat_map(|a| (j.saturating_sub(1)..=(j + 1).min(n)).map(move |b| (a, b)))
                .all(|(a, b)| res[a][b] >= r);
            if !is_min {
                continue;
            }
            if let Some(z) = newton(f, node(i, j), tol) {
                let inside = z.x >= lo.x - dedup && z.x <= hi.x + dedup && z.y >= lo.y - dedup && z.y <= hi.y + dedup;
                if inside && found.iter().all(|p| p.dist(z) > dedup) {
                    found.push(z);
                }
            }
        }
    }
    found
}

fn newton(f: &dyn Fn(Point) -> Point, mut z: Point, tol: f64) -> Option<Point> {
    let g = |p: Point| f(p) - p;
    for _ in 0..50 {
        let r = g(z);
        if r.norm() < tol {
            return Some(z);
        }
        let h = 1e-7 * (1.0 + z.norm());
        let gx = (g(z + Point::new(h, 0.0)) - r) * (1.0 / h);
        let gy = (g(z + Point::new(0.0, h)) - r) * (1.0 / h);
        let det = gx.x * gy.y - gy.x * gx.y;
        if det.abs() < 1e-14 {
            return None;
        }
        let dx = (r.x * gy.y - gy.x * r.y) / det;
        let dy = (gx.x * r.y - r.x * gx.y) / det;
        z = z - Point::new(dx, dy);
        if !z.is_finite() {
            return None;
        }
    }
    (g(z).norm() < tol).then_some(z)
}
