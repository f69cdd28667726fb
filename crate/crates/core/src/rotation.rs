//! Rotation numbers around a puncture: exact values at fixed points, and
//! Birkhoff-style estimates along recurrent orbits, computed on the lift of
//! the punctured plane to the universal cover (angle coordinate in turns).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::isotopy::{enlace, Isotopy, TrajectoryOptions};

/// Residual `|f(z) - z|` above which a point is not treated as fixed.
pub const FIXED_RESIDUAL: f64 = 1e-9;

/// A point of the punctured plane together with a lifted angle coordinate.
///
/// `theta_lift` is congruent mod 1 to the angle of `base - puncture`; the
/// deck transformation adds one to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftedPoint {
    pub base: Point,
    /// Accumulated angle around the puncture, in turns.
    pub theta_lift: f64,
    pub puncture: Point,
}

impl LiftedPoint {
    /// Lift on the branch where `theta_lift ∈ (-1/2, 1/2]`.
    pub fn new(base: Point, puncture: Point) -> Self {
        LiftedPoint { base, theta_lift: (base - puncture).angle_turns(), puncture }
    }

    /// The deck transformation `T^p`.
    pub fn deck(&self, p: i64) -> Self {
        LiftedPoint { theta_lift: self.theta_lift + p as f64, ..*self }
    }
}

/// One step of the lift `f̃_{I,z'}` determined by the isotopy: the base
/// moves to `f(z)` and the lifted angle grows by `Enlace_I(z, z')`.
pub fn lift_step(iso: &Isotopy, lp: &LiftedPoint, opts: &TrajectoryOptions) -> Result<LiftedPoint> {
    let turn = enlace(iso, lp.base, lp.puncture, opts)?;
    Ok(LiftedPoint { base: iso.end_map(lp.base), theta_lift: lp.theta_lift + turn, puncture: lp.puncture })
}

/// `ρ_{z2}(z)` for fixed `z`, `z2`: the integer `Enlace_I(z, z2)`.
pub fn rho_fixed(iso: &Isotopy, z: Point, z2: Point, opts: &TrajectoryOptions) -> Result<f64> {
    for p in [z, z2] {
        let residual = iso.fixed_residual(p);
        if residual >= FIXED_RESIDUAL {
            return Err(Error::NotFixed { point: p, residual });
        }
    }
    let e = enlace(iso, z, z2, opts)?;
    let n = e.round();
    if (e - n).abs() >= 1e-6 {
        return Err(Error::NotInteger { value: e, tol: 1e-6 });
    }
    Ok(n)
}

/// `θ̃_n / n` after `n` lifted steps from `z`, with `θ̃_0 = 0`.
pub fn rho_lift(iso: &Isotopy, z: Point, puncture: Point, n: usize, opts: &TrajectoryOptions) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("rho_lift needs n >= 1".into()));
    }
    let start = LiftedPoint::new(z, puncture);
    let mut lp = start;
    for _ in 0..n {
        lp = lift_step(iso, &lp, opts)?;
    }
    Ok((lp.theta_lift - start.theta_lift) / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffOptions {
    /// Radius of the neighbourhood of `z` that counts as a return.
    pub eps_return: f64,
    pub max_iter: usize,
    /// Required agreement of the last two per-return values.
    pub tol: f64,
    pub min_returns: usize,
}

impl Default for BirkhoffOptions {
    fn default() -> Self {
        BirkhoffOptions { eps_return: 1e-6, max_iter: 100_000, tol: 1e-9, min_returns: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationEstimate {
    pub value: f64,
    /// Return times `n_1 < n_2 < …` to the neighbourhood of `z`.
    pub return_times: Vec<usize>,
    /// `θ̃_{n_j} / n_j` at each return.
    pub per_return_values: Vec<f64>,
    /// Difference of the last two per-return values.
    pub residual: f64,
    pub iterations: usize,
    /// Period, when the orbit closed up to round-off.
    pub period: Option<usize>,
    pub converged: bool,
}

/// Estimates `ρ_{z'}(z)` from the lifted angle at successive returns of the
/// orbit of `z` near itself.
pub fn rho_birkhoff(
    iso: &Isotopy,
    z: Point,
    puncture: Point,
    bopts: &BirkhoffOptions,
    opts: &TrajectoryOptions,
) -> Result<RotationEstimate> {
    if z == puncture {
        return Err(Error::DiagonalInput(z));
    }
    let closure = 1e-12 * (1.0 + z.norm());
    let mut theta = 0.0;
    let mut w = z;
    let mut return_times = Vec::new();
    let mut values = Vec::new();
    for n in 1..=bopts.max_iter {
        theta += enlace(iso, w, puncture, opts)?;
        w = iso.end_map(w);
        let d = w.dist(z);
        if d <= closure {
            // Periodic: every later return repeats the same ratio.
            let rho = theta / n as f64;
            let k = bopts.min_returns.max(2);
            return Ok(RotationEstimate {
                value: rho,
                return_times: (1..=k).map(|j| j * n).collect(),
                per_return_values: vec![rho; k],
                residual: 0.0,
                iterations: n,
                period: Some(n),
                converged: true,
            });
        }
        if d < bopts.eps_return {
            return_times.push(n);
            values.push(theta / n as f64);
            let residual = last_gap(&values);
            if values.len() >= bopts.min_returns && residual < bopts.tol {
                return Ok(RotationEstimate {
                    value: theta / n as f64,
                    return_times,
                    per_return_values: values,
                    residual,
                    iterations: n,
                    period: None,
                    converged: true,
                });
            }
        }
    }
    if return_times.len() < 2 {
        return Err(Error::NoRecurrence { point: z, returns: return_times.len(), iterations: bopts.max_iter });
    }
    Ok(RotationEstimate {
        value: *values.last().unwrap(),
        residual: last_gap(&values),
        return_times,
        per_return_values: values,
        iterations: bopts.max_iter,
        period: None,
        converged: false,
    })
}

fn last_gap(v: &[f64]) -> f64 {
    match v {
        [.., a, b] => (b - a).abs(),
        _ => f64::INFINITY,
    }
}

/// `ρ_{p1}(z) - ρ_{p2}(z)` through the lift estimator; independent of the
/// homotopy class of the isotopy.
pub fn rho_relative(iso: &Isotopy, z: Point, p1: Point, p2: Point, n: usize, opts: &TrajectoryOptions) -> Result<f64> {
    if p1 == p2 {
        return Err(Error::DiagonalInput(p1));
    }
    Ok(rho_lift(iso, z, p1, n, opts)? - rho_lift(iso, z, p2, n, opts)?)
}
