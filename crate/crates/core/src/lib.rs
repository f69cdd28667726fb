//! Winding, linking and rotation invariants of isotopies of plane
//! homeomorphisms, with the example systems they are checked against.
//!
//! Angles are measured in turns throughout.

pub mod error;
pub mod examples;
pub mod franks;
pub mod geometry;
pub mod isotopy;
pub mod measures;
pub mod properties;
pub mod returns;
pub mod rotation;

pub use error::{Error, Result};
pub use examples::{build, build_default, ExampleId, ExampleParams, ExampleSystem, FixedSampler, OracleEntry, Quantity};
pub use franks::{check_franks, AnnulusLift, FranksCertificate};
pub use geometry::{refine, winding, Point, Polyline, RefineOptions, WindingValue};
pub use isotopy::{enlace, tourne, EnlaceForm, Isotopy, Trajectory, TrajectoryOptions};
pub use measures::{integrate, MeasureSampler};
pub use properties::{scan_p1, scan_p2, Verdict};
pub use returns::{alpha, first_return, verify_free, FreeDisk, ReturnData};
pub use rotation::{rho_birkhoff, rho_lift, BirkhoffOptions, LiftedPoint, RotationEstimate};
