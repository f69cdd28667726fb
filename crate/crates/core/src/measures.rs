//! Finite measures given by exact samplers, seeded Monte Carlo integration,
//! and numerical checks of invariance and of the return-winding identity
//! `∫_{∪ f^k(U)} ρ_{z'} dν = ∫_U α_{U,z'} dν`.
//!
//! Sample `i` of a run with seed `s` is drawn from a ChaCha8 generator seeded
//! with `s` on stream `i`, so results do not depend on scheduling.

use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::isotopy::{Isotopy, TrajectoryOptions};
use crate::returns::{alpha, FreeDisk};
use crate::rotation::{rho_birkhoff, BirkhoffOptions};

/// A finite measure that can be sampled exactly.
///
/// `sample` returns a point and a weight; the measure of `A` is
/// `total_mass() · E[weight · 1_A(point)]`, with `E[weight] = 1`.
pub trait MeasureSampler: Send + Sync {
    fn sample(&self, rng: &mut dyn RngCore) -> (Point, f64);
    fn total_mass(&self) -> f64;
    fn description(&self) -> String;
}

fn uniform(rng: &mut dyn RngCore) -> f64 {
    rng.random::<f64>()
}

/// `mass` times normalized arc length on a circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleMeasure {
    pub center: Point,
    pub radius: f64,
    pub mass: f64,
}

impl CircleMeasure {
    pub fn new(center: Point, radius: f64, mass: f64) -> Self {
        CircleMeasure { center, radius, mass }
    }
}

impl MeasureSampler for CircleMeasure {
    fn sample(&self, rng: &mut dyn RngCore) -> (Point, f64) {
        (self.center + Point::polar(self.radius, uniform(rng)), 1.0)
    }

    fn total_mass(&self) -> f64 {
        self.mass
    }

    fn description(&self) -> String {
        format!("circle measure, center {}, radius {}, mass {}", self.center, self.radius, self.mass)
    }
}

/// Arc length (one unit per turn) on a union of arcs of one circle, each
/// given as `(start, length)` in turns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcMeasure {
    pub center: Point,
    pub radius: f64,
    pub arcs: Vec<(f64, f64)>,
}

impl ArcMeasure {
    pub fn new(center: Point, radius: f64, arcs: Vec<(f64, f64)>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::EmptyInput("arc list"));
        }
        if arcs.iter().any(|&(_, len)| !(len > 0.0)) {
            return Err(Error::InvalidInput("arc lengths must be positive".into()));
        }
        Ok(ArcMeasure { center, radius, arcs })
    }
}

impl MeasureSampler for ArcMeasure {
    fn sample(&self, rng: &mut dyn RngCore) -> (Point, f64) {
        let mut u = uniform(rng) * self.total_mass();
        let mut turn = self.arcs[self.arcs.len() - 1].0 + self.arcs[self.arcs.len() - 1].1;
        for &(start, len) in &self.arcs {
            if u < len {
                turn = start + u;
                break;
            }
            u -= len;
        }
        (self.center + Point::polar(self.radius, turn), 1.0)
    }

    fn total_mass(&self) -> f64 {
        self.arcs.iter().map(|a| a.1).sum()
    }

    fn description(&self) -> String {
        format!("arc measure on {} arcs of the circle {}, radius {}", self.arcs.len(), self.center, self.radius)
    }
}

/// `mass` times normalized Lebesgue measure on a closed disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskMeasure {
    pub center: Point,
    pub radius: f64,
    pub mass: f64,
}

impl DiskMeasure {
    pub fn new(center: Point, radius: f64, mass: f64) -> Self {
        DiskMeasure { center, radius, mass }
    }
}

impl MeasureSampler for DiskMeasure {
    fn sample(&self, rng: &mut dyn RngCore) -> (Point, f64) {
        let r = self.radius * uniform(rng).sqrt();
        (self.center + Point::polar(r, uniform(rng)), 1.0)
    }

    fn total_mass(&self) -> f64 {
        self.mass
    }

    fn description(&self) -> String {
        format!("disk measure, center {}, radius {}, mass {}", self.center, self.radius, self.mass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMass {
    pub at: Point,
    pub mass: f64,
}

impl MeasureSampler for PointMass {
    fn sample(&self, _rng: &mut dyn RngCore) -> (Point, f64) {
        (self.at, 1.0)
    }

    fn total_mass(&self) -> f64 {
        self.mass
    }

    fn description(&self) -> String {
        format!("point mass {} at {}", self.mass, self.at)
    }
}

/// `Σ w_i μ_i`, sampled by picking a component with probability
/// proportional to `w_i · mass(μ_i)`.
pub struct WeightedSum {
    components: Vec<(f64, Arc<dyn MeasureSampler>)>,
    cumulative: Vec<f64>,
}

impl WeightedSum {
    pub fn new(components: Vec<(f64, Arc<dyn MeasureSampler>)>) -> Self {
        let mut acc = 0.0;
        let cumulative = components
            .iter()
            .map(|(w, m)| {
                acc += w * m.total_mass();
                acc
            })
            .collect();
        WeightedSum { components, cumulative }
    }
}

impl MeasureSampler for WeightedSum {
    fn sample(&self, rng: &mut dyn RngCore) -> (Point, f64) {
        let u = uniform(rng) * self.total_mass();
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.components.len() - 1);
        self.components[i].1.sample(rng)
    }

    fn total_mass(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    fn description(&self) -> String {
        format!("weighted sum of {} measures", self.components.len())
    }
}

/// Independent generator for sample `index` of the run with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws `n` samples `(point, weight)` in index order.
pub fn draw(m: &dyn MeasureSampler, n: usize, seed: u64) -> Vec<(Point, f64)> {
    (0..n).into_par_iter().map(|i| m.sample(&mut sample_rng(seed, i as u64))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Mean and standard error of `mass · x_i`.
fn summarize(mass: f64, xs: &[f64]) -> Estimate {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    Estimate { value: mass * mean, stderr: mass * (var / n).sqrt() }
}

fn check_n(n: usize) -> Result<()> {
    if n < 100 {
        return Err(Error::InvalidInput(format!("need at least 100 samples, got {n}")));
    }
    Ok(())
}

/// `∫ φ dμ` by Monte Carlo.
pub fn integrate(m: &dyn MeasureSampler, phi: &(dyn Fn(Point) -> f64 + Sync), n: usize, seed: u64) -> Result<Estimate> {
    check_n(n)?;
    let xs = draw(m, n, seed)
        .into_iter()
        .map(|(z, w)| {
            let v = phi(z);
            if v.is_finite() { Ok(w * v) } else { Err(Error::NonFiniteSample(z)) }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarize(m.total_mass(), &xs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// Largest `|∫ φ∘f dμ - ∫ φ dμ|` over the test functions.
    pub max_discrepancy: f64,
    /// Standard error of the difference for the worst test function.
    pub stderr: f64,
    pub worst_index: usize,
}

type TestFn = dyn Fn(Point) -> f64 + Sync;

/// Compares `∫ φ∘f dμ` with `∫ φ dμ` on the same samples.
pub fn check_invariance(
    m: &dyn MeasureSampler,
    f: &(dyn Fn(Point) -> Point + Sync),
    test_fns: &[&TestFn],
    n: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    check_n(n)?;
    if test_fns.is_empty() {
        return Err(Error::EmptyInput("test functions"));
    }
    let samples = draw(m, n, seed);
    let images: Vec<Point> = samples.par_iter().map(|&(z, _)| f(z)).collect();
    let mut report = InvarianceReport { max_discrepancy: -1.0, stderr: 0.0, worst_index: 0 };
    for (k, phi) in test_fns.iter().enumerate() {
        let diffs = samples
            .iter()
            .zip(&images)
            .map(|(&(z, w), &fz)| {
                let d = w * (phi(fz) - phi(z));
                if d.is_finite() { Ok(d) } else { Err(Error::NonFiniteSample(z)) }
            })
            .collect::<Result<Vec<f64>>>()?;
        let est = summarize(m.total_mass(), &diffs);
        if est.value.abs() > report.max_discrepancy {
            report = InvarianceReport { max_discrepancy: est.value.abs(), stderr: est.stderr, worst_index: k };
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `∫_{∪ f^k(U)} ρ_{z'} dν`.
    pub lhs: Estimate,
    /// `∫_U α_{U,z'} dν`.
    pub rhs: Estimate,
    pub diff: f64,
    /// Standard error of `lhs - rhs` from per-sample differences.
    pub stderr: f64,
    /// Samples that fell in `∪_{k ≥ 0} f^k(U)`.
    pub hits_orbit: usize,
    /// Samples that fell in `U`.
    pub hits_disk: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityOptions {
    /// Longest backward orbit searched for membership in `∪ f^k(U)`.
    pub max_back: usize,
    pub max_return: usize,
    pub birkhoff: BirkhoffOptions,
}

impl Default for IdentityOptions {
    fn default() -> Self {
        IdentityOptions { max_back: 10_000, max_return: 1_000_000, birkhoff: BirkhoffOptions::default() }
    }
}

/// Whether `z ∈ f^k(U)` for some `0 ≤ k ≤ max_back`, by walking the
/// backward orbit. A backward orbit that closes up without meeting `U`
/// stops early.
fn in_forward_orbit_of(iso: &Isotopy, disk: &FreeDisk, z: Point, max_back: usize) -> Result<bool> {
    let closure = 1e-12 * (1.0 + z.norm());
    let mut w = z;
    for _ in 0..=max_back {
        if disk.contains(w) {
            return Ok(true);
        }
        w = iso.inverse_map(w)?;
        if w.dist(z) <= closure {
            return Ok(false);
        }
    }
    Ok(false)
}

/// Monte Carlo check of `∫_{∪ f^k(U)} ρ_{z'} dν = ∫_U α_{U,z'} dν`.
///
/// Both integrands are evaluated on the same samples; the standard error
/// reported is that of the per-sample difference.
pub fn birkhoff_identity(
    iso: &Isotopy,
    disk: &FreeDisk,
    puncture: Point,
    m: &dyn MeasureSampler,
    n: usize,
    seed: u64,
    idopts: &IdentityOptions,
    opts: &TrajectoryOptions,
) -> Result<IdentityReport> {
    check_n(n)?;
    if !iso.has_inverse() {
        return Err(Error::NoInverse);
    }
    let samples = draw(m, n, seed);
    let per_sample = samples
        .par_iter()
        .map(|&(z, w)| -> Result<(f64, f64)> {
            let left = if in_forward_orbit_of(iso, disk, z, idopts.max_back)? {
                w * rho_birkhoff(iso, z, puncture, &idopts.birkhoff, opts)?.value
            } else {
                0.0
            };
            let right = if disk.contains(z) {
                w * alpha(iso, disk, puncture, z, idopts.max_return, opts)?.value as f64
            } else {
                0.0
            };
            Ok((left, right))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let mass = m.total_mass();
    let lefts: Vec<f64> = per_sample.iter().map(|p| p.0).collect();
    let rights: Vec<f64> = per_sample.iter().map(|p| p.1).collect();
    let diffs: Vec<f64> = per_sample.iter().map(|p| p.0 - p.1).collect();
    let lhs = summarize(mass, &lefts);
    let rhs = summarize(mass, &rights);
    let d = summarize(mass, &diffs);
    Ok(IdentityReport {
        lhs,
        rhs,
        diff: lhs.value - rhs.value,
        stderr: d.stderr,
        hits_orbit: lefts.iter().filter(|v| **v != 0.0).count(),
        hits_disk: samples.iter().filter(|(z, _)| disk.contains(*z)).count(),
    })
}
