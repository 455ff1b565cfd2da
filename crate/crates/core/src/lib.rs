//! Exact rational convex geometry engine.
//!
//! Everything in this crate computes over arbitrary-precision rationals, so
//! membership certificates, minimum-norm points, descent traces and Tverberg
//! partitions are exact and replayable. Floating point appears only inside
//! sampling heuristics (k-convexity refutation search, avoiding-flat search),
//! and every candidate found that way is rounded back to rationals and
//! re-verified exactly before it is reported.

pub mod colorful;
pub mod compactum;
pub mod error;
pub mod generate;
pub mod hull;
pub mod kappa;
pub mod kconvexity;
pub mod linalg;
pub mod minnorm;
pub mod point;
pub mod polygon2d;
pub mod simplex;
pub mod tverberg;

pub use error::GeometryError;
pub use point::{Point, Rat};
