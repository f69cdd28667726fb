//! Franks-lemma certificates for lifts of a plane homeomorphism to the
//! universal cover of the plane punctured at a fixed point.
//!
//! A lifted disk `Ũ` is the base disk `U` (not containing the puncture)
//! together with a continuous branch `θ_U` of the angle around the puncture.
//! The deck translation `T` shifts the angle by one turn, so `T^p(Ũ)` is the
//! set of lifted points over `U` whose angle is `θ_U + p`. The checker looks
//! for orbits of `g̃ = f̃_{I,z'} ∘ T^{-k}` that come back to `T^p(Ũ)` with
//! `p ≥ 0` and to `T^{p'}(Ũ)` with `p' ≤ 0`; together with `g̃(Ũ) ∩ Ũ = ∅`
//! this forces a fixed point of `g̃`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::isotopy::{Isotopy, TrajectoryOptions};
use crate::returns::{disk_samples, FreeDisk, DEFAULT_BOUNDARY_SAMPLES, DEFAULT_GRID};
use crate::rotation::{lift_step, LiftedPoint};

/// Half-width of the band around an integer offset outside of which a
/// landing is discarded as ambiguous.
pub const BRANCH_GUARD: f64 = 0.25;

pub const DEFAULT_SEED_GRID: usize = 12;

/// The lift `f̃_{I,z'} ∘ T^{-k}`.
#[derive(Debug, Clone)]
pub struct AnnulusLift {
    pub isotopy: Isotopy,
    pub puncture: Point,
    pub lift_shift: i64,
}

impl AnnulusLift {
    pub fn new(isotopy: Isotopy, puncture: Point, lift_shift: i64) -> Self {
        AnnulusLift { isotopy, puncture, lift_shift }
    }

    pub fn step(&self, lp: &LiftedPoint, opts: &TrajectoryOptions) -> Result<LiftedPoint> {
        Ok(lift_step(&self.isotopy, lp, opts)?.deck(-self.lift_shift))
    }

    /// `θ_U(z)`: the branch of the angle of `z - puncture` closest to the
    /// angle of the disk center.
    pub fn branch_angle(&self, disk: &FreeDisk, z: Point) -> f64 {
        let c = (disk.center - self.puncture).angle_turns();
        let a = (z - self.puncture).angle_turns();
        let d = a - c;
        c + d - d.round()
    }

    /// The point of `Ũ` over `z ∈ U`.
    pub fn lift_into(&self, disk: &FreeDisk, z: Point) -> LiftedPoint {
        LiftedPoint { base: z, theta_lift: self.branch_angle(disk, z), puncture: self.puncture }
    }

    /// `Some(p)` when `lp ∈ T^p(Ũ)` unambiguously.
    pub fn branch_offset(&self, disk: &FreeDisk, lp: &LiftedPoint) -> Option<i64> {
        if !disk.contains(lp.base) {
            return None;
        }
        let d = lp.theta_lift - self.branch_angle(disk, lp.base);
        let p = d.round();
        ((d - p).abs() < BRANCH_GUARD).then_some(p as i64)
    }
}

/// Checks `g̃(Ũ) ∩ Ũ = ∅` by sampling: samples whose lifted image is on the
/// branch of offset 0 must land a Lipschitz slack away from `U`.
pub fn verify_free_lifted(
    lift: &AnnulusLift,
    disk: &FreeDisk,
    n_boundary: usize,
    n_grid: usize,
    opts: &TrajectoryOptions,
) -> Result<FreeDisk> {
    if disk.contains(lift.puncture) || disk.center.dist(lift.puncture) <= disk.radius {
        return Err(Error::NotFree("the disk surrounds the puncture, so no branch of the angle exists".into()));
    }
    let samples = disk_samples(disk.center, disk.radius, n_boundary, n_grid);
    let images = samples
        .par_iter()
        .map(|&z| lift.step(&lift.lift_into(disk, z), opts))
        .collect::<Result<Vec<LiftedPoint>>>()?;
    let h = 2.0 * disk.radius / n_grid as f64;
    let mut stretch: f64 = 0.0;
    for (i, a) in samples.iter().enumerate() {
        for (j, b) in samples.iter().enumerate().skip(i + 1) {
            let d = a.dist(*b);
            if d <= 1.5 * h {
                stretch = stretch.max(images[i].base.dist(images[j].base) / d);
            }
        }
    }
    let slack = stretch * h * std::f64::consts::FRAC_1_SQRT_2;
    let mut closest = f64::INFINITY;
    for (z, img) in samples.iter().zip(&images) {
        let off = img.theta_lift - lift.branch_angle(disk, img.base);
        if off.round() != 0.0 {
            continue;
        }
        let d = (img.base.dist(disk.center) - disk.radius).max(0.0);
        if d <= slack {
            return Err(Error::NotFree(format!(
                "lifted image of {z:?} lands on the same branch within {d:e} of the disk (slack {slack:e})"
            )));
        }
        closest = closest.min(d);
    }
    Ok(FreeDisk { margin: closest - slack, samples: samples.len(), ..*disk })
}

/// A landing of a lifted orbit in a translate of the lifted disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub start: LiftedPoint,
    /// Number of steps of `g̃`.
    pub q: usize,
    /// Deck offset of the landing.
    pub p: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FranksCertificate {
    pub disk: FreeDisk,
    pub lift_shift: i64,
    /// `g̃^q(Ũ) ∩ T^p(Ũ) ≠ ∅` with `p ≥ 0`.
    pub forward: Witness,
    /// `g̃^{q2}(Ũ) ∩ T^{p2}(Ũ) ≠ ∅` with `p2 ≤ 0`.
    pub backward: Witness,
}

/// `n × n` grid of seeds inside the disk.
pub fn grid_seeds(disk: &FreeDisk, n: usize) -> Vec<Point> {
    let h = 2.0 * disk.radius / n as f64;
    let mut seeds = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let z = disk.center + Point::new(-disk.radius + (i as f64 + 0.5) * h, -disk.radius + (j as f64 + 0.5) * h);
            if disk.contains(z) {
                seeds.push(z);
            }
        }
    }
    seeds
}

/// All landings `(q, p)` of the lifted orbit of `start`, `q ≤ q_max`.
pub fn landings(
    lift: &AnnulusLift,
    disk: &FreeDisk,
    start: &LiftedPoint,
    q_max: usize,
    opts: &TrajectoryOptions,
) -> Result<Vec<(usize, i64)>> {
    let mut hits = Vec::new();
    let mut lp = *start;
    for q in 1..=q_max {
        lp = lift.step(&lp, opts)?;
        if let Some(p) = lift.branch_offset(disk, &lp) {
            hits.push((q, p));
        }
    }
    Ok(hits)
}

/// Verifies the hypotheses of the Franks lemma for `lift` on `disk`.
/// Returns `Ok(None)` when no pair of witnesses turns up within `q_max` steps.
pub fn check_franks(
    lift: &AnnulusLift,
    disk: &FreeDisk,
    seeds: &[Point],
    q_max: usize,
    opts: &TrajectoryOptions,
) -> Result<Option<FranksCertificate>> {
    let disk = verify_free_lifted(lift, disk, DEFAULT_BOUNDARY_SAMPLES, DEFAULT_GRID, opts)?;
    let starts: Vec<LiftedPoint> =
        seeds.iter().filter(|z| disk.contains(**z)).map(|&z| lift.lift_into(&disk, z)).collect();
    let all = starts
        .par_iter()
        .map(|s| landings(lift, &disk, s, q_max, opts))
        .collect::<Result<Vec<_>>>()?;
    let find = |want: fn(i64) -> bool| {
        starts.iter().zip(&all).find_map(|(s, hits)| {
            hits.iter().find(|(_, p)| want(*p)).map(|&(q, p)| Witness { start: *s, q, p })
        })
    };
    // Prefer strict signs; an offset-0 landing counts on both sides.
    let forward = find(|p| p > 0).or_else(|| find(|p| p == 0));
    let backward = find(|p| p < 0).or_else(|| find(|p| p == 0));
    Ok(match (forward, backward) {
        (Some(forward), Some(backward)) => {
            Some(FranksCertificate { disk, lift_shift: lift.lift_shift, forward, backward })
        }
        _ => None,
    })
}

/// Re-runs both witnesses from scratch and checks the recorded offsets.
pub fn resimulate(lift: &AnnulusLift, cert: &FranksCertificate, opts: &TrajectoryOptions) -> Result<bool> {
    if lift.lift_shift != cert.lift_shift {
        return Ok(false);
    }
    let lands = |w: &Witness| -> Result<bool> {
        let mut lp = w.start;
        for _ in 0..w.q {
            lp = lift.step(&lp, opts)?;
        }
        Ok(lift.branch_offset(&cert.disk, &lp) == Some(w.p))
    };
    Ok(cert.forward.p >= 0 && cert.backward.p <= 0 && lands(&cert.forward)? && lands(&cert.backward)?)
}
