//! Convex analysis on the first Heisenberg group.
//!
//! The crate is generic over the working scalar ([`Scalar`], implemented for `f32`
//! and `f64`); the `*64` aliases below fix it to `f64`, which the CLI uses.
//!
//! - [`group`], [`plane`], [`sampling`]: group law, horizontal planes, closed H-sequences.
//! - [`hconvex`]: scalar fields, horizontal gradients, H-convexity and subgradient scans.
//! - [`monotone`]: set-valued maps into V₁ and their (cyclic) H-monotonicity.
//! - [`solvers`]: potential reconstruction, the horizontal resolvent and collision scans.

pub mod error;
pub mod group;
pub mod hconvex;
pub mod monotone;
pub mod plane;
pub mod sampling;
pub mod scalar;
pub mod selftest;
pub mod solvers;
pub mod tolerance;

pub use error::{Error, Result};
pub use group::{exp_h, HVector, Point};
pub use hconvex::{ScalarField, SetDescriptor};
pub use plane::{on_horizontal_plane, plane_intersection_line, PlaneCoeffs, PlaneIntersection};
pub use scalar::Scalar;
pub use tolerance::ToleranceConfig;

pub type Point64 = Point<f64>;
pub type HVector64 = HVector<f64>;
pub type ScalarField64 = ScalarField<f64>;
pub type SetDescriptor64 = SetDescriptor<f64>;
pub type OperatorField64 = monotone::OperatorField<f64>;
pub type OperatorGraph64 = monotone::OperatorGraph<f64>;

pub type Point32 = Point<f32>;
pub type HVector32 = HVector<f32>;
