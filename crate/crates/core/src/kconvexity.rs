//! Sampled k-convexity refutation, hyperplane-curve intersection, and the
//! randomized avoiding-flat search.
//!
//! Projections are drawn from a seeded generator and rounded to rationals,
//! so every reported counterexample replays and re-verifies exactly. The
//! avoiding-flat search is heuristic, but its certificates are exact: the
//! clearance is the squared distance from the flat to each representation,
//! recomputed with rational arithmetic before emission.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compactum::{Compactum, PlCurve};
use crate::error::{GeometryError, Result};
use crate::hull;
use crate::linalg::{self, Matrix};
use crate::minnorm::min_norm_point;
use crate::point::{rat_from_f64_rounded, Point, Rat};
use crate::simplex::Hyperplane;

/// Outcome of a sampled k-convexity check.
#[derive(Clone, Debug)]
pub enum KConvexityVerdict {
    /// A genuine refutation up to representation density: an exact linear
    /// map and a point of the hull of the projected samples whose squared
    /// distance to the projected representation exceeds `tol^2` exactly.
    Counterexample {
        projection: Matrix,
        hole: Point,
        distance_sq: Rat,
    },
    /// Negative evidence only; k-convexity is never certified.
    NoCounterexampleFound { trials: usize },
}

impl KConvexityVerdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, KConvexityVerdict::Counterexample { .. })
    }
}

/// Exact squared distance from `p` to the projected representation of a
/// compactum (point-to-segment distances for curves, point-to-hull for
/// polytope members).
fn dist_sq_to_projected(p: &Point, set: &Compactum, project: &Matrix) -> Result<Rat> {
    let best = |cands: Vec<Rat>| -> Result<Rat> {
        cands
            .into_iter()
            .min()
            .ok_or(GeometryError::EmptyInput("projected representation"))
    };
    match set {
        Compactum::PointCloud(pts) => best(
            pts.iter()
                .map(|v| Ok(project.apply(v)?.dist_sq(p)))
                .collect::<Result<_>>()?,
        ),
        Compactum::Curve(c) => {
            let mut cands = Vec::new();
            if c.waypoints.len() == 1 {
                cands.push(project.apply(&c.waypoints[0])?.dist_sq(p));
            }
            for (a, b) in c.segments() {
                let pa = project.apply(a)?.sub(p);
                let pb = project.apply(b)?.sub(p);
                cands.push(min_norm_point(&[pa, pb])?.squared_distance);
            }
            best(cands)
        }
        Compactum::PolytopeUnion(u) => {
            let mut cands = Vec::new();
            for m in u {
                let vs: Vec<Point> = m
                    .vertices
                    .iter()
                    .map(|v| Ok(project.apply(v)?.sub(p)))
                    .collect::<Result<_>>()?;
                cands.push(min_norm_point(&vs)?.squared_distance);
            }
            best(cands)
        }
        Compactum::Oracle(_) => Err(GeometryError::Capability(
            "oracle kind does not support exact projected distance".into(),
        )),
    }
}

fn random_rational_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::new(
        (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| rat_from_f64_rounded(rng.gen_range(-1.0..1.0), 10))
                    .collect()
            })
            .collect(),
    )
}

/// Probes random linear images of the set for non-convexity: a "hole" point
/// inside the hull of the projected samples but far from the projected set.
/// Refutations are re-verified exactly before emission.
pub fn check_k_convexity(
    set: &Compactum,
    k: usize,
    trials: usize,
    samples_per_trial: usize,
    tol: f64,
    seed: u64,
) -> Result<KConvexityVerdict> {
    let dim = set.dim()?;
    if k == 0 || k > dim {
        return Err(GeometryError::InvalidInput(format!(
            "k must be in 1..=dim, got k={k}, dim={dim}"
        )));
    }
    if matches!(set, Compactum::Oracle(o) if o.contains_approx(&vec![0.0; dim], tol).is_none()) {
        return Err(GeometryError::Capability(
            "oracle kind lacks membership support".into(),
        ));
    }
    let tol_sq = {
        let t = rat_from_f64_rounded(tol, 20);
        &t * &t
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = set.sample_points(4);
    for _ in 0..trials {
        let projection = random_rational_matrix(&mut rng, k, dim);
        let projected: Vec<Point> = samples
            .iter()
            .map(|s| projection.apply(s))
            .collect::<Result<_>>()?;
        // Probe points: random convex combinations of projected samples,
        // i.e. points of the hull of the projected representation.
        for _ in 0..samples_per_trial {
            let support = (k + 1).min(projected.len());
            let picks: Vec<usize> =
                (0..support).map(|_| rng.gen_range(0..projected.len())).collect();
            let raw: Vec<Rat> = (0..support)
                .map(|_| rat_from_f64_rounded(rng.gen_range(0.1..1.0), 10))
                .collect();
            let total: Rat = raw.iter().cloned().sum();
            if total.is_zero() {
                continue;
            }
            let weights: Vec<Rat> = raw.iter().map(|w| w / &total).collect();
            let refs: Vec<&Point> = picks.iter().map(|&i| &projected[i]).collect();
            let probe = Point::weighted_sum(&refs, &weights);
            let d_sq = dist_sq_to_projected(&probe, set, &projection)?;
            if d_sq > tol_sq {
                // Exact re-verification happened above: d_sq is rational.
                return Ok(KConvexityVerdict::Counterexample {
                    projection,
                    hole: probe,
                    distance_sq: d_sq,
                });
            }
        }
    }
    Ok(KConvexityVerdict::NoCounterexampleFound { trials })
}

/// First exact intersection of a PL curve with a hyperplane, scanning
/// segments in order. `None` iff every waypoint is strictly on one side.
pub fn hyperplane_curve_intersection(curve: &PlCurve, h: &Hyperplane) -> Option<Point> {
    let vals: Vec<Rat> = curve.waypoints.iter().map(|w| h.eval(w)).collect();
    if let Some(i) = vals.iter().position(|v| v.is_zero()) {
        return Some(curve.waypoints[i].clone());
    }
    for i in 0..vals.len().saturating_sub(1) {
        let (a, b) = (&vals[i], &vals[i + 1]);
        if (a.is_positive() && b.is_negative()) || (a.is_negative() && b.is_positive()) {
            let t = a / &(a - b);
            return Some(curve.point_at(i, &t));
        }
    }
    None
}

/// All exact crossings `(segment, t, point)` of a PL curve with a
/// hyperplane, in curve order. Interior waypoint incidences are reported on
/// their incoming segment.
pub fn hyperplane_curve_crossings(curve: &PlCurve, h: &Hyperplane) -> Vec<(usize, Rat, Point)> {
    use num_traits::One;
    let vals: Vec<Rat> = curve.waypoints.iter().map(|w| h.eval(w)).collect();
    let mut out = Vec::new();
    if curve.waypoints.len() == 1 {
        if vals[0].is_zero() {
            out.push((0, Rat::zero(), curve.waypoints[0].clone()));
        }
        return out;
    }
    if vals[0].is_zero() {
        out.push((0, Rat::zero(), curve.waypoints[0].clone()));
    }
    for i in 0..vals.len() - 1 {
        let (a, b) = (&vals[i], &vals[i + 1]);
        if b.is_zero() {
            out.push((i, Rat::one(), curve.waypoints[i + 1].clone()));
        } else if (a.is_positive() && b.is_negative()) || (a.is_negative() && b.is_positive()) {
            let t = a / &(a - b);
            out.push((i, t.clone(), curve.point_at(i, &t)));
        }
    }
    out
}

/// Certificate that the affine flat `base + span(directions)` misses every
/// set with positive squared clearance, verified exactly.
#[derive(Clone, Debug)]
pub struct FlatCertificate {
    pub base: Point,
    pub directions: Vec<Point>,
    pub clearance_sq: Rat,
}

/// Exact squared distance from the flat `base + span(directions)` to the
/// representation of a compactum, via orthogonal projection onto the
/// complement of the direction span.
pub fn flat_clearance_sq(base: &Point, directions: &[Point], set: &Compactum) -> Result<Rat> {
    let dir_refs: Vec<&Point> = directions.iter().collect();
    let complement = |x: &Point| linalg::project_complement(&x.sub(base), &dir_refs);
    let best = |cands: Vec<Rat>| -> Result<Rat> {
        cands
            .into_iter()
            .min()
            .ok_or(GeometryError::EmptyInput("flat clearance"))
    };
    match set {
        Compactum::PointCloud(pts) => best(
            pts.iter()
                .map(|v| Ok(complement(v)?.norm_sq()))
                .collect::<Result<_>>()?,
        ),
        Compactum::Curve(c) => {
            let mut cands = Vec::new();
            if c.waypoints.len() == 1 {
                cands.push(complement(&c.waypoints[0])?.norm_sq());
            }
            for (a, b) in c.segments() {
                cands.push(
                    min_norm_point(&[complement(a)?, complement(b)?])?.squared_distance,
                );
            }
            best(cands)
        }
        Compactum::PolytopeUnion(u) => {
            let mut cands = Vec::new();
            for m in u {
                let vs: Vec<Point> = m
                    .vertices
                    .iter()
                    .map(|v| complement(v))
                    .collect::<Result<_>>()?;
                cands.push(min_norm_point(&vs)?.squared_distance);
            }
            best(cands)
        }
        Compactum::Oracle(_) => Err(GeometryError::Capability(
            "oracle kind does not support exact clearance".into(),
        )),
    }
}

/// Re-checks a flat certificate from scratch against every set.
pub fn verify_flat_certificate(cert: &FlatCertificate, sets: &[Compactum]) -> Result<bool> {
    let refs: Vec<&Point> = cert.directions.iter().collect();
    if cert.directions.is_empty()
        || linalg::rank(&Matrix::new(
            refs.iter().map(|d| d.coords().to_vec()).collect(),
        )) != cert.directions.len()
    {
        return Ok(false);
    }
    if !cert.clearance_sq.is_positive() {
        return Ok(false);
    }
    for set in sets {
        if flat_clearance_sq(&cert.base, &cert.directions, set)? < cert.clearance_sq {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct FlatSearchBudget {
    pub attempts: usize,
    pub refine_rounds: usize,
    pub seed: u64,
}

impl Default for FlatSearchBudget {
    fn default() -> Self {
        FlatSearchBudget {
            attempts: 64,
            refine_rounds: 3,
            seed: 0,
        }
    }
}

/// Search outcome; failure is a budget report, never a disproof.
#[derive(Clone, Debug)]
pub enum FlatSearchOutcome {
    Found(FlatCertificate),
    Exhausted { attempts: usize },
}

#[derive(Clone, Debug)]
pub struct FlatSearchResult {
    pub outcome: FlatSearchOutcome,
    /// Colors whose `conv_{k+1}` contains `p`, violating the theorem's
    /// hypothesis on the representation level.
    pub precondition_violations: Vec<usize>,
}

/// Randomized search for an affine k-flat through `p` avoiding every set:
/// seeded random directions plus coordinate-wise rational hill climbing on
/// the exact minimum clearance.
pub fn find_avoiding_flat(
    p: &Point,
    sets: &[Compactum],
    k: usize,
    budget: &FlatSearchBudget,
) -> Result<FlatSearchResult> {
    let dim = p.dim();
    if k >= dim {
        return Err(GeometryError::InvalidInput(format!(
            "flat dimension k={k} must be below ambient dimension {dim}"
        )));
    }
    if sets.is_empty() {
        return Err(GeometryError::EmptyInput("find_avoiding_flat"));
    }
    // Precondition: p outside conv_{k+1} of every representation.
    let mut violations = Vec::new();
    for (i, set) in sets.iter().enumerate() {
        let gens = set.generators();
        if hull::convm_membership(p, &gens, k + 1)?.is_member() {
            violations.push(i);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let min_clearance = |dirs: &[Point]| -> Result<Option<Rat>> {
        let refs: Vec<&Point> = dirs.iter().collect();
        if linalg::rank(&Matrix::new(
            refs.iter().map(|d| d.coords().to_vec()).collect(),
        )) != dirs.len()
        {
            return Ok(None);
        }
        let mut best: Option<Rat> = None;
        for set in sets {
            let c = flat_clearance_sq(p, dirs, set)?;
            if best.as_ref().map_or(true, |b| &c < b) {
                best = Some(c);
            }
        }
        Ok(best)
    };

    for _ in 0..budget.attempts {
        let mut dirs: Vec<Point> = (0..k)
            .map(|_| {
                Point::new(
                    (0..dim)
                        .map(|_| rat_from_f64_rounded(rng.gen_range(-1.0..1.0), 8))
                        .collect(),
                )
            })
            .collect();
        let Some(mut best) = min_clearance(&dirs)? else {
            continue;
        };
        // Coordinate-wise improvement with shrinking rational steps.
        for round in 0..budget.refine_rounds {
            let step = crate::point::rat(1, 4 << round);
            for di in 0..k {
                for c in 0..dim {
                    for sign in [1i64, -1i64] {
                        let mut cand = dirs.clone();
                        let mut coords = cand[di].coords().to_vec();
                        coords[c] = &coords[c] + &(&step * crate::point::rat_int(sign));
                        cand[di] = Point::new(coords);
                        if let Some(v) = min_clearance(&cand)? {
                            if v > best {
                                best = v;
                                dirs = cand;
                            }
                        }
                    }
                }
            }
        }
        if best.is_positive() {
            let cert = FlatCertificate {
                base: p.clone(),
                directions: dirs,
                clearance_sq: best,
            };
            debug_assert!(verify_flat_certificate(&cert, sets)?);
            return Ok(FlatSearchResult {
                outcome: FlatSearchOutcome::Found(cert),
                precondition_violations: violations,
            });
        }
    }
    Ok(FlatSearchResult {
        outcome: FlatSearchOutcome::Exhausted {
            attempts: budget.attempts,
        },
        precondition_violations: violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{rat, rat_int};

    fn pt(cs: &[i64]) -> Point {
        Point::from_ints(cs)
    }

    #[test]
    fn segment_is_one_convex() {
        let seg = Compactum::Curve(PlCurve::new(vec![pt(&[0, 0]), pt(&[3, 1])]).unwrap());
        let v = check_k_convexity(&seg, 1, 16, 16, 1e-6, 7).unwrap();
        assert!(!v.is_counterexample());
    }

    #[test]
    fn two_far_points_fail_one_convexity() {
        let cloud = Compactum::PointCloud(vec![pt(&[0, 0]), pt(&[10, 0])]);
        let v = check_k_convexity(&cloud, 1, 32, 32, 1e-3, 7).unwrap();
        match v {
            KConvexityVerdict::Counterexample {
                projection,
                hole,
                distance_sq,
            } => {
                // Postcondition replay: the hole is exactly far from the
                // projected set.
                let d = dist_sq_to_projected(&hole, &cloud, &projection).unwrap();
                assert_eq!(d, distance_sq);
                assert!(distance_sq.is_positive());
            }
            _ => panic!("expected counterexample"),
        }
    }

    #[test]
    fn curve_crosses_hyperplane() {
        let curve = PlCurve::new(vec![pt(&[-1, 0]), pt(&[1, 0])]).unwrap();
        let h = Hyperplane::new(pt(&[1, 0]), rat_int(0)).unwrap();
        assert_eq!(
            hyperplane_curve_intersection(&curve, &h),
            Some(pt(&[0, 0]))
        );
    }

    #[test]
    fn curve_strictly_one_side_has_no_intersection() {
        let curve = PlCurve::new(vec![pt(&[1, 1]), pt(&[2, 1])]).unwrap();
        let h = Hyperplane::new(pt(&[1, 0]), rat_int(0)).unwrap();
        assert_eq!(hyperplane_curve_intersection(&curve, &h), None);
    }

    #[test]
    fn bent_curve_exact_crossing() {
        // Per-segment rational solve puts the crossing with x+y=1 at (0,1).
        let curve =
            PlCurve::new(vec![pt(&[-1, 1]), pt(&[1, 1]), pt(&[1, -1])]).unwrap();
        let h = Hyperplane::new(pt(&[1, 1]), rat_int(1)).unwrap();
        assert_eq!(hyperplane_curve_intersection(&curve, &h), Some(pt(&[0, 1])));
    }

    #[test]
    fn avoiding_line_for_single_point() {
        let sets = vec![Compactum::PointCloud(vec![pt(&[1, 1])])];
        let r = find_avoiding_flat(&pt(&[0, 0]), &sets, 1, &FlatSearchBudget::default()).unwrap();
        assert!(r.precondition_violations.is_empty());
        match r.outcome {
            FlatSearchOutcome::Found(cert) => {
                assert!(verify_flat_certificate(&cert, &sets).unwrap());
            }
            _ => panic!("expected a flat"),
        }
    }

    #[test]
    fn clearance_of_axis_to_loop() {
        // Square loop around the z-axis at height 1; the x-axis keeps
        // distance 1 from it.
        let loop_curve = PlCurve::new(vec![
            pt(&[1, 1, 1]),
            pt(&[-1, 1, 1]),
            pt(&[-1, -1, 1]),
            pt(&[1, -1, 1]),
            pt(&[1, 1, 1]),
        ])
        .unwrap();
        let c = flat_clearance_sq(
            &pt(&[0, 0, 0]),
            &[pt(&[1, 0, 0])],
            &Compactum::Curve(loop_curve),
        )
        .unwrap();
        assert_eq!(c, rat_int(1));
    }

    #[test]
    fn precondition_violation_is_reported() {
        // p midway inside conv_2 of the set's representation.
        let sets = vec![Compactum::PointCloud(vec![pt(&[-1, 0]), pt(&[1, 0])])];
        let r = find_avoiding_flat(
            &pt(&[0, 0]),
            &sets,
            1,
            &FlatSearchBudget {
                attempts: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.precondition_violations, vec![0]);
    }

    #[test]
    fn flat_dimension_must_be_proper() {
        let sets = vec![Compactum::PointCloud(vec![pt(&[1, 1])])];
        assert!(matches!(
            find_avoiding_flat(&pt(&[0, 0]), &sets, 2, &FlatSearchBudget::default()),
            Err(GeometryError::InvalidInput(_))
        ));
    }

    #[test]
    fn tampered_flat_certificate_fails() {
        let sets = vec![Compactum::PointCloud(vec![pt(&[1, 1])])];
        let cert = FlatCertificate {
            base: pt(&[0, 0]),
            directions: vec![pt(&[1, 1])], // passes through the obstacle
            clearance_sq: rat(1, 4),
        };
        assert!(!verify_flat_certificate(&cert, &sets).unwrap());
    }
}
