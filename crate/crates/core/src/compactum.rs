//! Finite representations of compacta: point clouds, connected PL curves,
//! unions of V-polytopes, and an in-process oracle kind for sets that only
//! answer queries.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::kappa::VPolytope;
use crate::point::{rat, Point, Rat};

/// Connected piecewise-linear curve: consecutive waypoints joined by
/// segments. A single waypoint is a (degenerate) point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlCurve {
    pub waypoints: Vec<Point>,
}

impl PlCurve {
    pub fn new(waypoints: Vec<Point>) -> Result<Self> {
        if waypoints.is_empty() {
            return Err(GeometryError::EmptyInput("PlCurve"));
        }
        let dim = waypoints[0].dim();
        for w in &waypoints {
            if w.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: w.dim(),
                });
            }
        }
        Ok(PlCurve { waypoints })
    }

    pub fn dim(&self) -> usize {
        self.waypoints[0].dim()
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.waypoints.iter().zip(self.waypoints.iter().skip(1))
    }

    /// Exact point at rational parameter `t` on segment `seg`.
    pub fn point_at(&self, seg: usize, t: &Rat) -> Point {
        self.waypoints[seg].lerp(&self.waypoints[seg + 1], t)
    }

    /// Exact check that `p` lies on the curve; returns `(segment, t)`.
    pub fn locate(&self, p: &Point) -> Option<(usize, Rat)> {
        use num_traits::{One, Zero};
        if self.waypoints.len() == 1 {
            return (self.waypoints[0] == *p).then(|| (0, Rat::zero()));
        }
        for (i, (a, b)) in self.segments().enumerate() {
            let d = b.sub(a);
            let v = p.sub(a);
            let len = d.norm_sq();
            if len.is_zero() {
                if *p == *a {
                    return Some((i, Rat::zero()));
                }
                continue;
            }
            let t = v.dot(&d) / &len;
            if t < Rat::zero() || t > Rat::one() {
                continue;
            }
            if a.lerp(b, &t) == *p {
                return Some((i, t));
            }
        }
        None
    }

    /// Waypoints plus `subdiv` evenly spaced interior points per segment.
    pub fn subdivide(&self, subdiv: usize) -> Vec<Point> {
        let mut out = vec![self.waypoints[0].clone()];
        for (a, b) in self.segments() {
            for j in 1..=subdiv {
                out.push(a.lerp(b, &rat(j as i64, subdiv as i64 + 1)));
            }
            out.push(b.clone());
        }
        out
    }
}

/// Queries answerable by an externally supplied set representation.
pub trait CompactumOracle: Send + Sync {
    fn dim(&self) -> usize;

    /// Approximate membership at tolerance; `None` when unsupported.
    fn contains_approx(&self, _p: &[f64], _tol: f64) -> Option<bool> {
        None
    }

    /// A point of the set lying on the affine flat `base + span(directions)`,
    /// if the oracle can produce one. Used by the general-k colorful solver.
    fn flat_representative(&self, _base: &Point, _directions: &[Point]) -> Option<Point> {
        None
    }

    /// Finite sample of the set for hull estimates.
    fn sample(&self) -> Vec<Point>;
}

/// Finite representation of a compactum.
#[derive(Clone)]
pub enum Compactum {
    PointCloud(Vec<Point>),
    Curve(PlCurve),
    PolytopeUnion(Vec<VPolytope>),
    Oracle(Arc<dyn CompactumOracle>),
}

impl std::fmt::Debug for Compactum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Compactum::PointCloud(p) => f.debug_tuple("PointCloud").field(p).finish(),
            Compactum::Curve(c) => f.debug_tuple("Curve").field(c).finish(),
            Compactum::PolytopeUnion(u) => f.debug_tuple("PolytopeUnion").field(u).finish(),
            Compactum::Oracle(_) => f.write_str("Oracle(..)"),
        }
    }
}

impl Compactum {
    pub fn dim(&self) -> Result<usize> {
        match self {
            Compactum::PointCloud(p) => p
                .first()
                .map(|q| q.dim())
                .ok_or(GeometryError::EmptyInput("point cloud")),
            Compactum::Curve(c) => Ok(c.dim()),
            Compactum::PolytopeUnion(u) => u
                .first()
                .map(|m| m.dim())
                .ok_or(GeometryError::EmptyInput("polytope union")),
            Compactum::Oracle(o) => Ok(o.dim()),
        }
    }

    /// Finite generator list whose hull equals the hull of the represented
    /// set (cloud points, curve waypoints, polytope vertices).
    pub fn generators(&self) -> Vec<Point> {
        match self {
            Compactum::PointCloud(p) => p.clone(),
            Compactum::Curve(c) => c.waypoints.clone(),
            Compactum::PolytopeUnion(u) => {
                u.iter().flat_map(|m| m.vertices.iter().cloned()).collect()
            }
            Compactum::Oracle(o) => o.sample(),
        }
    }

    /// Denser sample of points lying on the represented set.
    pub fn sample_points(&self, subdiv: usize) -> Vec<Point> {
        match self {
            Compactum::Curve(c) => c.subdivide(subdiv),
            _ => self.generators(),
        }
    }

    /// Exact check that `p` lies on the represented set (not just its hull).
    pub fn contains_exact(&self, p: &Point) -> Result<bool> {
        match self {
            Compactum::PointCloud(pts) => Ok(pts.contains(p)),
            Compactum::Curve(c) => Ok(c.locate(p).is_some()),
            Compactum::PolytopeUnion(u) => {
                for m in u {
                    if crate::hull::in_hull(p, &m.vertices)?.is_some() {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Compactum::Oracle(_) => Err(GeometryError::Capability(
                "oracle kind does not support exact membership".into(),
            )),
        }
    }
}

/// Serialized form of a non-oracle compactum.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
enum CompactumWire {
    #[serde(rename_all = "camelCase")]
    PointCloud { points: Vec<Point> },
    #[serde(rename_all = "camelCase")]
    PlCurve { waypoints: Vec<Point> },
    #[serde(rename_all = "camelCase")]
    PolytopeUnion { members: Vec<VPolytope> },
}

impl Serialize for Compactum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error;
        let wire = match self {
            Compactum::PointCloud(points) => CompactumWire::PointCloud {
                points: points.clone(),
            },
            Compactum::Curve(c) => CompactumWire::PlCurve {
                waypoints: c.waypoints.clone(),
            },
            Compactum::PolytopeUnion(u) => CompactumWire::PolytopeUnion { members: u.clone() },
            Compactum::Oracle(_) => {
                return Err(S::Error::custom("oracle compacta have no wire form"))
            }
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Compactum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        Ok(match CompactumWire::deserialize(d)? {
            CompactumWire::PointCloud { points } => Compactum::PointCloud(points),
            CompactumWire::PlCurve { waypoints } => {
                Compactum::Curve(PlCurve::new(waypoints).map_err(D::Error::custom)?)
            }
            CompactumWire::PolytopeUnion { members } => Compactum::PolytopeUnion(members),
        })
    }
}
