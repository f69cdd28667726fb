//! Isotopies `I = (f_t)` from the identity to a plane homeomorphism, their
//! trajectories, and the two winding invariants built on them: the turning
//! number `Tourne_I(z)` around the origin and the linking number
//! `Enlace_I(z, z')` of a pair of points.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{refine, winding, Point, Polyline, RefineOptions};

type Family = dyn Fn(f64, Point) -> Point + Send + Sync;
type PlaneMap = dyn Fn(Point) -> Point + Send + Sync;

/// A time-indexed family `t ↦ f_t`, `t ∈ [0, 1]`, with `f_0 = id`.
///
/// `shift_k` records how many full rotations about the origin have been
/// composed in through [`Isotopy::shift_class`].
#[derive(Clone)]
pub struct Isotopy {
    name: String,
    family: Arc<Family>,
    inverse: Option<Arc<PlaneMap>>,
    shift_k: i64,
}

impl fmt::Debug for Isotopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Isotopy")
            .field("name", &self.name)
            .field("shift_k", &self.shift_k)
            .field("invertible", &self.inverse.is_some())
            .finish()
    }
}

impl Isotopy {
    pub fn new<F>(name: impl Into<String>, family: F) -> Self
    where
        F: Fn(f64, Point) -> Point + Send + Sync + 'static,
    {
        Isotopy { name: name.into(), family: Arc::new(family), inverse: None, shift_k: 0 }
    }

    /// Attaches an evaluator for `f⁻¹ = f_1⁻¹`.
    pub fn with_inverse<G>(mut self, inverse: G) -> Self
    where
        G: Fn(Point) -> Point + Send + Sync + 'static,
    {
        self.inverse = Some(Arc::new(inverse));
        self
    }

    pub fn identity() -> Self {
        Isotopy::new("identity", |_, z| z).with_inverse(|z| z)
    }

    /// `f_t(z) = z + t·v`.
    pub fn translation(v: Point) -> Self {
        Isotopy::new("translation", move |t, z| z + v * t).with_inverse(move |z| z - v)
    }

    /// `f_t(z) = R_{t·turns}(z)`: rigid rotation about the origin.
    pub fn rotation(turns: f64) -> Self {
        Isotopy::new("rotation", move |t, z| z.rotate(turns * t)).with_inverse(move |z| z.rotate(-turns))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shift_k(&self) -> i64 {
        self.shift_k
    }

    pub fn eval(&self, t: f64, z: Point) -> Point {
        (self.family)(t, z)
    }

    /// The homeomorphism `f = f_1`.
    pub fn end_map(&self, z: Point) -> Point {
        (self.family)(1.0, z)
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn inverse_map(&self, z: Point) -> Result<Point> {
        self.inverse.as_ref().map(|g| g(z)).ok_or(Error::NoInverse)
    }

    /// `|f(z) - z|`.
    pub fn fixed_residual(&self, z: Point) -> f64 {
        self.end_map(z).dist(z)
    }

    /// `f^n(z)`.
    pub fn iterate(&self, z: Point, n: usize) -> Point {
        (0..n).fold(z, |w, _| self.end_map(w))
    }

    /// The isotopy `t ↦ R_{kt} ∘ f_t`, where `R_s` rotates by `s` turns about
    /// the origin. Its end map is `f` again; Enlace and Tourne move by `k`.
    pub fn shift_class(&self, k: i64) -> Isotopy {
        let inner = Arc::clone(&self.family);
        let kf = k as f64;
        Isotopy {
            name: self.name.clone(),
            family: Arc::new(move |t, z| inner(t, z).rotate(kf * t)),
            inverse: self.inverse.clone(),
            shift_k: self.shift_k + k,
        }
    }
}

/// Controls trajectory sampling and integrality checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryOptions {
    /// Integrality tolerance applied where a result must be an integer.
    pub tol: f64,
    pub refine: RefineOptions,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        TrajectoryOptions { tol: 1e-9, refine: RefineOptions::new(0.1, 1e-2) }
    }
}

impl TrajectoryOptions {
    pub fn with_tol(tol: f64) -> Self {
        TrajectoryOptions { tol, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TrajectoryKind {
    Absolute,
    /// Relative to the trajectory of the given point.
    Relative(Point),
}

/// A sampled trajectory `γ_{I,z}` or `γ_{I,z,z'}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub path: Polyline,
    pub seed: Point,
    pub kind: TrajectoryKind,
}

/// How Enlace samples the relative motion of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EnlaceForm {
    /// `t ↦ f_t(z) - f_t(z')` around the origin.
    #[default]
    Raw,
    /// `t ↦ τ_t(f_t(z))` around `z'`, with `τ_t` the translation taking
    /// `f_t(z')` back to `z'`.
    Pinned,
}

/// `γ_{I,z}(t) = f_t(z)`, refined relative to the origin.
pub fn trajectory(iso: &Isotopy, z: Point, opts: &TrajectoryOptions) -> Result<Trajectory> {
    trajectory_around(iso, z, Point::ORIGIN, opts)
}

/// `γ_{I,z}` refined relative to an arbitrary center.
pub fn trajectory_around(iso: &Isotopy, z: Point, center: Point, opts: &TrajectoryOptions) -> Result<Trajectory> {
    let path = refine(|t| iso.eval(t, z), center, &opts.refine)?;
    Ok(Trajectory { path, seed: z, kind: TrajectoryKind::Absolute })
}

/// `γ_{I,z,z'}(t) = f_t(z) - f_t(z')`, refined relative to the origin.
pub fn relative_trajectory(iso: &Isotopy, z: Point, z2: Point, opts: &TrajectoryOptions) -> Result<Trajectory> {
    if z == z2 {
        return Err(Error::DiagonalInput(z));
    }
    let path = refine(|t| iso.eval(t, z) - iso.eval(t, z2), Point::ORIGIN, &opts.refine)?;
    Ok(Trajectory { path, seed: z, kind: TrajectoryKind::Relative(z2) })
}

/// `Tourne_I(z)`: winding of `t ↦ f_t(z)` around the origin, in turns.
pub fn tourne(iso: &Isotopy, z: Point, opts: &TrajectoryOptions) -> Result<f64> {
    let traj = trajectory(iso, z, opts)?;
    Ok(winding(&traj.path, Point::ORIGIN)?.turns)
}

/// `Enlace_I(z, z2)`: winding of `t ↦ f_t(z) - f_t(z2)` around the origin.
pub fn enlace(iso: &Isotopy, z: Point, z2: Point, opts: &TrajectoryOptions) -> Result<f64> {
    enlace_with(iso, z, z2, EnlaceForm::Raw, opts)
}

pub fn enlace_with(iso: &Isotopy, z: Point, z2: Point, form: EnlaceForm, opts: &TrajectoryOptions) -> Result<f64> {
    if z == z2 {
        return Err(Error::DiagonalInput(z));
    }
    match form {
        EnlaceForm::Raw => {
            let traj = relative_trajectory(iso, z, z2, opts)?;
            Ok(winding(&traj.path, Point::ORIGIN)?.turns)
        }
        EnlaceForm::Pinned => {
            let path = refine(|t| iso.eval(t, z) - iso.eval(t, z2) + z2, z2, &opts.refine)?;
            Ok(winding(&path, z2)?.turns)
        }
    }
}

/// The concatenation `γ_{I,z,z'} · γ_{I,f(z),z'} · … · γ_{I,f^{n-1}(z),z'}`
/// over `[0, 1]`, in the relative plane (center at the origin).
pub fn orbit_relative_arc(iso: &Isotopy, z: Point, z2: Point, n: usize, opts: &TrajectoryOptions) -> Result<Polyline> {
    if n == 0 {
        return Err(Error::InvalidInput("orbit_relative_arc needs n >= 1".into()));
    }
    let mut pieces = Vec::with_capacity(n);
    let mut w = z;
    for _ in 0..n {
        pieces.push(relative_trajectory(iso, w, z2, opts)?.path);
        w = iso.end_map(w);
    }
    if n == 1 {
        return Ok(pieces.pop().unwrap());
    }
    Polyline::concat(&pieces)
}
