//! Free disks, first returns to them, and the integer return winding
//! `α_{U,z'}(z)`: the turn around `z'` made by the orbit of `z` until its
//! first return to `U`, closed up by a chord inside `U`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{winding, Point, Polyline};
use crate::isotopy::{enlace, orbit_relative_arc, Isotopy, TrajectoryOptions};

pub const DEFAULT_BOUNDARY_SAMPLES: usize = 256;
pub const DEFAULT_GRID: usize = 16;
pub const DEFAULT_MAX_RETURN: usize = 1_000_000;

/// An open round disk together with its verified separation from its image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeDisk {
    pub center: Point,
    pub radius: f64,
    /// Lower bound on `dist(f(U), U)` from sampling.
    pub margin: f64,
    pub samples: usize,
}

impl FreeDisk {
    /// An unverified disk (margin 0), for callers that check freeness elsewhere.
    pub fn unverified(center: Point, radius: f64) -> Self {
        FreeDisk { center, radius, margin: 0.0, samples: 0 }
    }

    pub fn contains(&self, z: Point) -> bool {
        z.dist(self.center) < self.radius
    }
}

/// Sample points of the closed disk: `n_boundary` points on the circle and
/// the centers of an `n_grid × n_grid` grid that fall inside.
pub fn disk_samples(center: Point, radius: f64, n_boundary: usize, n_grid: usize) -> Vec<Point> {
    let mut pts: Vec<Point> =
        (0..n_boundary).map(|i| center + Point::polar(radius, i as f64 / n_boundary as f64)).collect();
    let h = 2.0 * radius / n_grid as f64;
    for i in 0..n_grid {
        for j in 0..n_grid {
            let p = Point::new(-radius + (i as f64 + 0.5) * h, -radius + (j as f64 + 0.5) * h);
            if p.norm() <= radius {
                pts.push(center + p);
            }
        }
    }
    pts
}

/// Semi-decides `f(U) ∩ U = ∅` for the round disk `U`.
///
/// The margin is the smallest distance from a sampled image to `U`, minus
/// `L·h`, where `L` is the largest finite-difference stretch between
/// neighbouring samples and `h` bounds the distance from any point of `U` to
/// the sample set.
pub fn verify_free(
    f: &(dyn Fn(Point) -> Point + Sync),
    center: Point,
    radius: f64,
    n_boundary: usize,
    n_grid: usize,
) -> Result<FreeDisk> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!("disk radius {radius} must be positive")));
    }
    if n_boundary < 8 || n_grid < 2 {
        return Err(Error::InvalidInput("verify_free needs at least 8 boundary points and a 2x2 grid".into()));
    }
    let h = 2.0 * radius / n_grid as f64;
    // Grid nodes, including those just outside the disk, so that neighbours
    // exist everywhere for the stretch estimate.
    let node = |i: usize, j: usize| center + Point::new(-radius + (i as f64 + 0.5) * h, -radius + (j as f64 + 0.5) * h);
    let images: Vec<Vec<Point>> = (0..n_grid).map(|i| (0..n_grid).map(|j| f(node(i, j))).collect()).collect();
    let mut stretch: f64 = 0.0;
    for i in 0..n_grid {
        for j in 0..n_grid {
            if i + 1 < n_grid {
                stretch = stretch.max(images[i + 1][j].dist(images[i][j]) / h);
            }
            if j + 1 < n_grid {
                stretch = stretch.max(images[i][j + 1].dist(images[i][j]) / h);
            }
        }
    }
    let boundary: Vec<Point> = (0..n_boundary).map(|k| center + Point::polar(radius, k as f64 / n_boundary as f64)).collect();
    let bimages: Vec<Point> = boundary.iter().map(|&p| f(p)).collect();
    let arc = boundary[0].dist(boundary[1]);
    for k in 0..n_boundary {
        stretch = stretch.max(bimages[(k + 1) % n_boundary].dist(bimages[k]) / arc);
    }
    let mut closest = f64::INFINITY;
    let mut worst = center;
    let mut samples = 0;
    let mut visit = |p: Point, q: Point| {
        samples += 1;
        let d = (q.dist(center) - radius).max(0.0);
        if d < closest {
            closest = d;
            worst = p;
        }
    };
    for (p, q) in boundary.iter().zip(&bimages) {
        visit(*p, *q);
    }
    for i in 0..n_grid {
        for j in 0..n_grid {
            let p = node(i, j);
            if p.dist(center) <= radius {
                visit(p, images[i][j]);
            }
        }
    }
    // Every point of U is within a grid half-diagonal of a node.
    let cover = h * std::f64::consts::FRAC_1_SQRT_2;
    let margin = closest - stretch * cover;
    if !(margin > 0.0) {
        return Err(Error::NotFree(format!(
            "image of {worst:?} is within {closest:e} of the disk (Lipschitz slack {:e})",
            stretch * cover
        )));
    }
    Ok(FreeDisk { center, radius, margin, samples })
}

/// [`verify_free`] with the default sampling.
pub fn verify_free_default(iso: &Isotopy, center: Point, radius: f64) -> Result<FreeDisk> {
    verify_free(&|z| iso.end_map(z), center, radius, DEFAULT_BOUNDARY_SAMPLES, DEFAULT_GRID)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnData {
    /// First return time `τ_U(z)`.
    pub tau: usize,
    /// `F_U(z) = f^τ(z)`.
    pub landing: Point,
    /// `z, f(z), …, f^{τ-1}(z)`.
    pub itinerary: Vec<Point>,
}

pub fn first_return(f: &dyn Fn(Point) -> Point, disk: &FreeDisk, z: Point, max_iter: usize) -> Result<ReturnData> {
    if !disk.contains(z) {
        return Err(Error::InvalidInput(format!("{z:?} is not in the disk")));
    }
    let mut itinerary = vec![z];
    let mut w = z;
    for tau in 1..=max_iter {
        w = f(w);
        if disk.contains(w) {
            return Ok(ReturnData { tau, landing: w, itinerary });
        }
        itinerary.push(w);
    }
    Err(Error::NoReturn { point: z, max_iter })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alpha {
    pub value: i64,
    /// Unrounded sum.
    pub raw: f64,
    pub ret: ReturnData,
}

fn chord_turns(from: Point, to: Point, puncture: Point) -> Result<f64> {
    Ok(winding(&Polyline::segment(from, to), puncture)?.turns)
}

/// `α_{U,z'}(z) = Σ_{ℓ<τ} Enlace_I(f^ℓ z, z') + (turn of the chord F_U(z) → z)`.
pub fn alpha(
    iso: &Isotopy,
    disk: &FreeDisk,
    puncture: Point,
    z: Point,
    max_iter: usize,
    opts: &TrajectoryOptions,
) -> Result<Alpha> {
    if disk.contains(puncture) {
        return Err(Error::InvalidInput("the puncture lies in the disk".into()));
    }
    let ret = first_return(&|w| iso.end_map(w), disk, z, max_iter)?;
    let mut raw = 0.0;
    for &w in &ret.itinerary {
        raw += enlace(iso, w, puncture, opts)?;
    }
    raw += chord_turns(ret.landing, z, puncture)?;
    let value = raw.round();
    if (raw - value).abs() >= opts.tol {
        return Err(Error::NotInteger { value: raw, tol: opts.tol });
    }
    Ok(Alpha { value: value as i64, raw, ret })
}

/// The closed loop `Γ_{I,U,z,z'}` in the relative plane (around the
/// origin): the orbit arc up to the first return, closed by the chord.
pub fn gamma_loop(
    iso: &Isotopy,
    disk: &FreeDisk,
    puncture: Point,
    z: Point,
    max_iter: usize,
    opts: &TrajectoryOptions,
) -> Result<Polyline> {
    let ret = first_return(&|w| iso.end_map(w), disk, z, max_iter)?;
    let arc = orbit_relative_arc(iso, z, puncture, ret.tau, opts)?;
    let chord = Polyline::segment(arc.last(), arc.first());
    Polyline::concat(&[arc, chord])
}

/// Observed `(min, max)` of `α/τ` over seeds in the disk.
pub fn alpha_tau_range(
    iso: &Isotopy,
    disk: &FreeDisk,
    puncture: Point,
    seeds: &[Point],
    max_iter: usize,
    opts: &TrajectoryOptions,
) -> Result<(f64, f64)> {
    if seeds.is_empty() {
        return Err(Error::EmptyInput("seed list"));
    }
    let ratios = seeds
        .par_iter()
        .map(|&z| alpha(iso, disk, puncture, z, max_iter, opts).map(|a| a.value as f64 / a.ret.tau as f64))
        .collect::<Result<Vec<f64>>>()?;
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}
