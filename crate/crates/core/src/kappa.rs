//! Families of convex compacta and Caratheodory numbers: `conv_m`
//! membership lives in [`crate::hull`]; this module owns V-polytopes,
//! the exact planar coverage oracle, and the kappa computations for point
//! sets and families.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::hull::{self, ConvmVerdict};
use crate::point::{rat, Point, Rat};
use crate::polygon2d;

/// Polytope given by its vertex list (the hull is implied).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPolytope {
    pub vertices: Vec<Point>,
}

impl VPolytope {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(GeometryError::EmptyInput("VPolytope"));
        }
        let dim = vertices[0].dim();
        for v in &vertices {
            if v.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: v.dim(),
                });
            }
        }
        Ok(VPolytope { vertices })
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }
}

/// Family of convex compacta sharing an ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub dim: usize,
    pub members: Vec<VPolytope>,
}

impl Family {
    pub fn new(dim: usize, members: Vec<VPolytope>) -> Result<Self> {
        for m in &members {
            if m.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: m.dim(),
                });
            }
        }
        Ok(Family { dim, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Concatenated vertices of the selected members, used as the ground set
    /// of `conv(union)`.
    pub fn union_vertices(&self, subset: &[usize]) -> Vec<Point> {
        subset
            .iter()
            .flat_map(|&i| self.members[i].vertices.iter().cloned())
            .collect()
    }
}

/// Witness that a candidate kappa fails: a point of `conv(union G)` not
/// covered at the level below.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KappaWitness {
    pub subfamily: Vec<usize>,
    pub point: Point,
}

/// Bracket for a Caratheodory number, with explicit epistemic status of the
/// upper bound (exact coverage vs sampling evidence).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KappaBound {
    pub lower: usize,
    pub upper: Option<usize>,
    pub upper_exact: bool,
    pub witness: Option<KappaWitness>,
}

#[derive(Clone, Debug)]
pub struct KappaConfig {
    /// Cap on enumerated subfamilies / subsets per coverage level.
    pub subset_budget: usize,
    /// Cap on sampled witness points in dimensions without exact coverage.
    pub sample_budget: usize,
}

impl Default for KappaConfig {
    fn default() -> Self {
        KappaConfig {
            subset_budget: 4096,
            sample_budget: 64,
        }
    }
}

/// Outcome of an exact planar coverage query.
#[derive(Clone, Debug)]
pub struct CoverageResult {
    pub covered: bool,
    pub witness: Option<Point>,
}

/// Decides `conv(target) subseteq union conv(piece)` exactly in the plane by
/// convex-cell subtraction: the target is covered iff no positive-area cell
/// survives, and lower-dimensional targets are handled inside their affine
/// hull. The witness of a failure is an uncovered point.
pub fn coverage_check_2d(target: &VPolytope, pieces: &[VPolytope]) -> Result<CoverageResult> {
    if target.dim() != 2 || pieces.iter().any(|p| p.dim() != 2) {
        return Err(GeometryError::InvalidInput(
            "coverage_check_2d requires dimension 2".into(),
        ));
    }
    let target_hull = polygon2d::convex_hull_2d(&target.vertices);
    let piece_hulls: Vec<Vec<Point>> = pieces
        .iter()
        .map(|p| polygon2d::convex_hull_2d(&p.vertices))
        .collect();

    match target_hull.len() {
        0 => Err(GeometryError::EmptyInput("coverage target")),
        1 => {
            let p = &target_hull[0];
            let covered = piece_hulls.iter().any(|h| polygon2d::point_in_convex(h, p));
            Ok(CoverageResult {
                covered,
                witness: (!covered).then(|| p.clone()),
            })
        }
        2 => cover_segment(&target_hull[0], &target_hull[1], &piece_hulls),
        _ => cover_polygon(&target_hull, &piece_hulls),
    }
}

fn cover_polygon(target: &[Point], piece_hulls: &[Vec<Point>]) -> Result<CoverageResult> {
    // Only full-dimensional pieces can cover area; degenerate pieces matter
    // solely when certifying the witness point.
    let mut cells: Vec<Vec<Point>> = vec![target.to_vec()];
    let mut degenerate: Vec<Vec<Point>> = Vec::new();
    for hull in piece_hulls {
        if polygon2d::area2(hull).is_positive() {
            cells = cells
                .iter()
                .flat_map(|c| polygon2d::subtract_convex(c, hull))
                .collect();
        } else {
            degenerate.push(hull.clone());
        }
        if cells.is_empty() {
            return Ok(CoverageResult {
                covered: true,
                witness: None,
            });
        }
    }
    let witness = polygon2d::interior_point_avoiding(&cells[0], &degenerate)?;
    debug_assert!(!piece_hulls
        .iter()
        .any(|h| polygon2d::point_in_convex(h, &witness)));
    Ok(CoverageResult {
        covered: false,
        witness: Some(witness),
    })
}

fn cover_segment(a: &Point, b: &Point, piece_hulls: &[Vec<Point>]) -> Result<CoverageResult> {
    use num_traits::One;
    let mut intervals: Vec<(Rat, Rat)> = piece_hulls
        .iter()
        .filter_map(|h| polygon2d::segment_param_interval(h, a, b))
        .collect();
    intervals.sort();
    let mut cur = Rat::zero();
    loop {
        let mut extended = false;
        for (lo, hi) in &intervals {
            if lo <= &cur && hi > &cur {
                cur = hi.clone();
                extended = true;
            }
        }
        if cur >= Rat::one() {
            return Ok(CoverageResult {
                covered: true,
                witness: None,
            });
        }
        if !extended {
            let next = intervals
                .iter()
                .map(|(lo, _)| lo)
                .filter(|lo| *lo > &cur)
                .min();
            let gap_end = next.cloned().unwrap_or_else(Rat::one);
            let mid = (&cur + &gap_end) * rat(1, 2);
            debug_assert!(!intervals.iter().any(|(lo, hi)| lo <= &mid && &mid <= hi));
            return Ok(CoverageResult {
                covered: false,
                witness: Some(a.lerp(b, &mid)),
            });
        }
    }
}

/// Caratheodory number of a finite point set (Def. of the smallest k with
/// `conv_k X = conv X`). Exact in dimensions 1 and 2; bracketed by
/// deterministic sampling elsewhere.
pub fn caratheodory_number_pointset(points: &[Point], config: &KappaConfig) -> Result<KappaBound> {
    if points.is_empty() {
        return Err(GeometryError::EmptyInput("caratheodory_number_pointset"));
    }
    let dim = points[0].dim();
    let distinct: Vec<Point> = {
        let mut v = points.to_vec();
        v.sort();
        v.dedup();
        v
    };
    if distinct.len() == 1 {
        return Ok(KappaBound {
            lower: 1,
            upper: Some(1),
            upper_exact: true,
            witness: None,
        });
    }
    match dim {
        1 => {
            // conv_1 X = X, which never equals a nondegenerate interval.
            let lo = distinct.first().unwrap();
            let hi = distinct.last().unwrap();
            let gap_mid = distinct[0].lerp(&distinct[1], &rat(1, 2));
            let witness = (!distinct.contains(&gap_mid)).then(|| KappaWitness {
                subfamily: vec![],
                point: gap_mid,
            });
            debug_assert!(lo < hi);
            Ok(KappaBound {
                lower: 2,
                upper: Some(2),
                upper_exact: true,
                witness,
            })
        }
        2 => {
            let target = VPolytope::new(distinct.clone())?;
            let mut witness = None;
            for k in 1..=3usize.min(distinct.len()) {
                let subset_count = n_choose_k(distinct.len(), k);
                if subset_count > config.subset_budget {
                    return sampled_pointset_kappa(&distinct, dim, config);
                }
                let pieces: Vec<VPolytope> = (0..distinct.len())
                    .combinations(k)
                    .map(|s| VPolytope::new(s.iter().map(|&i| distinct[i].clone()).collect()))
                    .collect::<Result<_>>()?;
                let cov = coverage_check_2d(&target, &pieces)?;
                if cov.covered {
                    return Ok(KappaBound {
                        lower: k,
                        upper: Some(k),
                        upper_exact: true,
                        witness,
                    });
                }
                witness = cov.witness.map(|point| KappaWitness {
                    subfamily: vec![],
                    point,
                });
            }
            Err(GeometryError::Internal(
                "planar point set not covered at k = 3".into(),
            ))
        }
        _ => sampled_pointset_kappa(&distinct, dim, config),
    }
}

fn n_choose_k(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Deterministic sampled bracket: witness points are subset centroids plus
/// skewed rational combinations, so lower-bound certificates replay.
fn sampled_pointset_kappa(points: &[Point], dim: usize, config: &KappaConfig) -> Result<KappaBound> {
    let cap = (dim + 1).min(points.len());
    let mut samples: Vec<Point> = Vec::new();
    'outer: for size in 2..=cap {
        for subset in (0..points.len()).combinations(size) {
            if samples.len() >= config.sample_budget {
                break 'outer;
            }
            let refs: Vec<&Point> = subset.iter().map(|&i| &points[i]).collect();
            let uniform = vec![rat(1, size as i64); size];
            samples.push(Point::weighted_sum(&refs, &uniform));
            // A skewed combination probes away from the centroid lattice.
            let total: i64 = (1..=size as i64).sum();
            let skewed: Vec<Rat> = (1..=size as i64).map(|i| rat(i, total)).collect();
            samples.push(Point::weighted_sum(&refs, &skewed));
        }
    }
    let mut lower = 1usize;
    let mut witness = None;
    for p in &samples {
        let mut needed = None;
        for m in 1..=cap {
            if let ConvmVerdict::Member(_) = hull::convm_membership(p, points, m)? {
                needed = Some(m);
                break;
            }
        }
        if let Some(m) = needed {
            if m > lower {
                lower = m;
                witness = Some(KappaWitness {
                    subfamily: vec![],
                    point: p.clone(),
                });
            }
        }
    }
    Ok(KappaBound {
        lower,
        upper: Some(cap),
        upper_exact: false,
        witness,
    })
}

/// Caratheodory number of a family: the least kappa such that every
/// subfamily's union-hull is covered by union-hulls of at most kappa
/// members. Exact in the plane, sampled otherwise. Subfamilies are swept in
/// increasing size, lexicographic, with early exit on the first failure.
pub fn family_caratheodory_number(family: &Family, config: &KappaConfig) -> Result<KappaBound> {
    if family.is_empty() {
        return Err(GeometryError::EmptyInput("family_caratheodory_number"));
    }
    let m = family.len();
    let dim = family.dim;
    if (1usize << m.min(60)) > config.subset_budget {
        return Err(GeometryError::BudgetExceeded(format!(
            "2^{m} subfamilies exceed subset budget {}",
            config.subset_budget
        )));
    }
    let subfamilies: Vec<Vec<usize>> = (1..=m)
        .flat_map(|size| (0..m).combinations(size))
        .collect();

    let mut witness: Option<KappaWitness> = None;
    for kappa in 1..=(dim + 1) {
        let mut all_pass = true;
        'subfam: for g in &subfamilies {
            if g.len() <= kappa {
                continue; // H = G covers trivially
            }
            let target = VPolytope::new(family.union_vertices(g))?;
            let piece_sets: Vec<Vec<usize>> = g.iter().cloned().combinations(kappa).collect();
            if dim == 2 {
                let pieces: Vec<VPolytope> = piece_sets
                    .iter()
                    .map(|h| VPolytope::new(family.union_vertices(h)))
                    .collect::<Result<_>>()?;
                let cov = coverage_check_2d(&target, &pieces)?;
                if !cov.covered {
                    witness = Some(KappaWitness {
                        subfamily: g.clone(),
                        point: cov.witness.expect("failure carries witness"),
                    });
                    all_pass = false;
                    break 'subfam;
                }
            } else {
                // Sampled coverage: probe combinations of the target's
                // vertices against the candidate pieces.
                let samples = coverage_samples(&target.vertices, dim, config.sample_budget);
                let piece_vertices: Vec<Vec<Point>> = piece_sets
                    .iter()
                    .map(|h| family.union_vertices(h))
                    .collect();
                for p in &samples {
                    let hit = piece_vertices
                        .iter()
                        .map(|vs| hull::in_hull(p, vs))
                        .collect::<Result<Vec<_>>>()?
                        .iter()
                        .any(|o| o.is_some());
                    if !hit {
                        witness = Some(KappaWitness {
                            subfamily: g.clone(),
                            point: p.clone(),
                        });
                        all_pass = false;
                        break 'subfam;
                    }
                }
            }
        }
        if all_pass {
            return Ok(KappaBound {
                lower: kappa,
                upper: Some(kappa),
                upper_exact: dim == 2,
                witness,
            });
        }
    }
    Err(GeometryError::Internal(
        "family not covered at kappa = dim + 1".into(),
    ))
}

fn coverage_samples(vertices: &[Point], dim: usize, budget: usize) -> Vec<Point> {
    let cap = (dim + 1).min(vertices.len());
    let mut out = Vec::new();
    'outer: for size in 1..=cap {
        for subset in (0..vertices.len()).combinations(size) {
            if out.len() >= budget {
                break 'outer;
            }
            let refs: Vec<&Point> = subset.iter().map(|&i| &vertices[i]).collect();
            out.push(Point::weighted_sum(&refs, &vec![rat(1, size as i64); size]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::rat_int;

    fn pt(cs: &[i64]) -> Point {
        Point::from_ints(cs)
    }

    fn unit_square_vp() -> VPolytope {
        VPolytope::new(vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1]), pt(&[0, 1])]).unwrap()
    }

    /// The four edges of the unit square as degenerate V-polytopes.
    fn square_edges() -> Vec<VPolytope> {
        let corners = [pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1]), pt(&[0, 1])];
        (0..4)
            .map(|i| {
                VPolytope::new(vec![corners[i].clone(), corners[(i + 1) % 4].clone()]).unwrap()
            })
            .collect()
    }

    #[test]
    fn square_covers_itself() {
        let cov = coverage_check_2d(&unit_square_vp(), &[unit_square_vp()]).unwrap();
        assert!(cov.covered);
    }

    #[test]
    fn diagonal_triangles_cover_square() {
        let t1 = VPolytope::new(vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1])]).unwrap();
        let t2 = VPolytope::new(vec![pt(&[0, 0]), pt(&[1, 1]), pt(&[0, 1])]).unwrap();
        let cov = coverage_check_2d(&unit_square_vp(), &[t1, t2]).unwrap();
        assert!(cov.covered);
    }

    #[test]
    fn conv2_segments_miss_square_interior() {
        // The 6 segments between corners (conv_2 of the corner set) cannot
        // cover the square; the witness must dodge every segment.
        let corners = [pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1]), pt(&[0, 1])];
        let mut segs = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                segs.push(VPolytope::new(vec![corners[i].clone(), corners[j].clone()]).unwrap());
            }
        }
        let cov = coverage_check_2d(&unit_square_vp(), &segs).unwrap();
        assert!(!cov.covered);
        let w = cov.witness.unwrap();
        for s in &segs {
            assert!(!polygon2d::point_on_segment(
                &s.vertices[0],
                &s.vertices[1],
                &w
            ));
        }
    }

    #[test]
    fn segment_target_coverage() {
        let seg = VPolytope::new(vec![pt(&[0, 0]), pt(&[4, 0])]).unwrap();
        let left = VPolytope::new(vec![pt(&[0, 0]), pt(&[2, 0])]).unwrap();
        let right = VPolytope::new(vec![pt(&[2, 0]), pt(&[4, 0])]).unwrap();
        assert!(coverage_check_2d(&seg, &[left.clone(), right]).unwrap().covered);
        let cov = coverage_check_2d(&seg, &[left]).unwrap();
        assert!(!cov.covered);
        let w = cov.witness.unwrap();
        assert!(w.coord(0) > &rat_int(2));
    }

    #[test]
    fn kappa_single_point() {
        let b = caratheodory_number_pointset(&[pt(&[5, 5])], &KappaConfig::default()).unwrap();
        assert_eq!((b.lower, b.upper), (1, Some(1)));
    }

    #[test]
    fn kappa_triangle_is_three() {
        // Oracle: exact 2-D coverage of conv_2 X.
        let tri = [pt(&[0, 0]), pt(&[4, 0]), pt(&[0, 4])];
        let b = caratheodory_number_pointset(&tri, &KappaConfig::default()).unwrap();
        assert_eq!((b.lower, b.upper, b.upper_exact), (3, Some(3), true));
        assert!(b.witness.is_some());
    }

    #[test]
    fn kappa_square_corners_is_three() {
        // The centroid needs only a diagonal, but generic interior points
        // need 3; conv_2 is 6 segments and cannot cover area.
        let sq = [pt(&[1, 1]), pt(&[1, -1]), pt(&[-1, 1]), pt(&[-1, -1])];
        let b = caratheodory_number_pointset(&sq, &KappaConfig::default()).unwrap();
        assert_eq!((b.lower, b.upper), (3, Some(3)));
    }

    #[test]
    fn family_kappa_single_polytope() {
        let f = Family::new(2, vec![unit_square_vp()]).unwrap();
        let b = family_caratheodory_number(&f, &KappaConfig::default()).unwrap();
        assert_eq!((b.lower, b.upper), (1, Some(1)));
    }

    #[test]
    fn family_kappa_square_edges_is_two() {
        // Single edges miss the center; pairs of edges always span the
        // relevant hulls.
        let f = Family::new(2, square_edges()).unwrap();
        let b = family_caratheodory_number(&f, &KappaConfig::default()).unwrap();
        assert_eq!((b.lower, b.upper, b.upper_exact), (2, Some(2), true));
        assert!(b.witness.is_some());
    }

    #[test]
    fn family_kappa_three_isolated_points_is_three() {
        let f = Family::new(
            2,
            vec![
                VPolytope::new(vec![pt(&[0, 0])]).unwrap(),
                VPolytope::new(vec![pt(&[10, 0])]).unwrap(),
                VPolytope::new(vec![pt(&[0, 10])]).unwrap(),
            ],
        )
        .unwrap();
        let b = family_caratheodory_number(&f, &KappaConfig::default()).unwrap();
        assert_eq!((b.lower, b.upper), (3, Some(3)));
        let w = b.witness.unwrap();
        assert_eq!(w.subfamily, vec![0, 1, 2]);
    }
}
