//! Convex hull membership with two-sided certificates, Caratheodory
//! reduction, `conv_m` membership and geometric-join membership.

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{GeometryError, Result};
use crate::linalg;
use crate::minnorm::min_norm_point;
use crate::point::{ConvexCombination, Point, Rat};

/// Decision of `p in conv(points)` with a certificate either way.
#[derive(Clone, Debug)]
pub enum Membership {
    /// Combination over the input list reproducing `p` exactly.
    Member(ConvexCombination),
    /// Separating functional: `<normal, p> - <normal, v> >= margin > 0`
    /// for every input point `v`.
    NonMember { normal: Point, margin: Rat },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Exact membership test via the minimum-norm point of the translated set.
pub fn hull_membership(p: &Point, points: &[Point]) -> Result<Membership> {
    if points.is_empty() {
        return Err(GeometryError::EmptyInput("hull_membership"));
    }
    for v in points {
        if v.dim() != p.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: p.dim(),
                got: v.dim(),
            });
        }
    }
    let translated: Vec<Point> = points.iter().map(|v| v.sub(p)).collect();
    let mn = min_norm_point(&translated)?;
    if mn.squared_distance.is_zero() {
        debug_assert_eq!(mn.support.evaluate(points), *p);
        Ok(Membership::Member(mn.support))
    } else {
        // The min-norm direction of the translated set separates.
        let normal = Point::zero(p.dim()).sub(&mn.point);
        let worst = points
            .iter()
            .map(|v| normal.dot(v))
            .max()
            .expect("nonempty");
        let margin = normal.dot(p) - worst;
        debug_assert!(margin.is_positive());
        Ok(Membership::NonMember { normal, margin })
    }
}

/// Membership-only fast path: for at most `dim + 1` affinely independent
/// points the barycentric system is solved directly; otherwise falls back
/// to the min-norm route. Returns the reproducing combination when inside.
pub fn in_hull(p: &Point, points: &[Point]) -> Result<Option<ConvexCombination>> {
    if points.is_empty() {
        return Err(GeometryError::EmptyInput("in_hull"));
    }
    let refs: Vec<&Point> = points.iter().collect();
    if points.len() <= p.dim() + 1 && linalg::affinely_independent(&refs) {
        match linalg::barycentric(p, &refs) {
            Some(bary) if bary.iter().all(|b| !b.is_negative()) => {
                Ok(Some(ConvexCombination::from_weights(&bary)?))
            }
            _ => Ok(None),
        }
    } else {
        match hull_membership(p, points)? {
            Membership::Member(c) => Ok(Some(c)),
            Membership::NonMember { .. } => Ok(None),
        }
    }
}

/// Reduces a convex combination for `p` to an affinely independent support
/// of size at most `dim + 1`, without changing the represented point.
pub fn caratheodory_reduce(
    p: &Point,
    points: &[Point],
    comb: &ConvexCombination,
) -> Result<ConvexCombination> {
    comb.validate()?;
    if comb.evaluate(points) != *p {
        return Err(GeometryError::BadCombination);
    }
    let mut indices = comb.indices.clone();
    let mut weights = comb.weights.clone();
    loop {
        let members: Vec<&Point> = indices.iter().map(|&i| &points[i]).collect();
        let Some(mut dep) = linalg::affine_dependency(&members) else {
            break;
        };
        // Orient the dependency so some coefficient is positive, then step
        // until the first weight hits zero.
        if !dep.iter().any(|g| g.is_positive()) {
            for g in dep.iter_mut() {
                *g = -g.clone();
            }
        }
        let t = weights
            .iter()
            .zip(&dep)
            .filter(|(_, g)| g.is_positive())
            .map(|(w, g)| w / g)
            .min()
            .expect("some positive dependency coefficient");
        let mut new_indices = Vec::new();
        let mut new_weights = Vec::new();
        for ((idx, w), g) in indices.iter().zip(&weights).zip(&dep) {
            let nw = w - &(&t * g);
            debug_assert!(!nw.is_negative());
            if nw.is_positive() {
                new_indices.push(*idx);
                new_weights.push(nw);
            }
        }
        indices = new_indices;
        weights = new_weights;
    }
    let reduced = ConvexCombination::new(indices, weights)?;
    debug_assert_eq!(reduced.evaluate(points), *p);
    debug_assert!(reduced.support_size() <= p.dim() + 1);
    Ok(reduced)
}

/// Verdict of a `conv_m` membership query.
#[derive(Clone, Debug)]
pub enum ConvmVerdict {
    /// Combination with support of size at most `m`.
    Member(ConvexCombination),
    /// Exhaustive refusal: every subset of the stated size was tested.
    NonMember { subsets_tested: usize },
}

impl ConvmVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, ConvmVerdict::Member(_))
    }
}

/// Decides `p in conv_m(X)`: membership in the hull of some subset of at
/// most `m` points. Subsets are enumerated in lexicographic order, so the
/// reported witness is deterministic.
pub fn convm_membership(p: &Point, points: &[Point], m: usize) -> Result<ConvmVerdict> {
    if m == 0 {
        return Err(GeometryError::InvalidInput("m must be >= 1".into()));
    }
    if points.is_empty() {
        return Err(GeometryError::EmptyInput("convm_membership"));
    }
    let size = m.min(points.len());
    let mut tested = 0usize;
    for subset in (0..points.len()).combinations(size) {
        tested += 1;
        let sel: Vec<Point> = subset.iter().map(|&i| points[i].clone()).collect();
        if let Some(comb) = in_hull(p, &sel)? {
            let indices: Vec<usize> = comb.indices.iter().map(|&j| subset[j]).collect();
            let comb = ConvexCombination::new(indices, comb.weights)?;
            debug_assert!(comb.support_size() <= m);
            return Ok(ConvmVerdict::Member(comb));
        }
    }
    Ok(ConvmVerdict::NonMember {
        subsets_tested: tested,
    })
}

/// Certificate for membership in a geometric join: one point per set plus
/// nonnegative weights summing to one.
#[derive(Clone, Debug)]
pub struct JoinCertificate {
    pub choices: Vec<usize>,
    pub points: Vec<Point>,
    pub weights: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub enum JoinVerdict {
    Member(JoinCertificate),
    NonMember { tuples_tested: usize },
}

impl JoinVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, JoinVerdict::Member(_))
    }
}

/// Decides `p in X_1 * X_2 * ... * X_k` by exhausting colorful simplices.
/// `budget` caps the number of tuples.
pub fn join_membership(
    p: &Point,
    sets: &[Vec<Point>],
    budget: Option<usize>,
) -> Result<JoinVerdict> {
    if sets.is_empty() || sets.iter().any(|s| s.is_empty()) {
        return Err(GeometryError::EmptyInput("join_membership"));
    }
    let total: usize = sets
        .iter()
        .map(|s| s.len())
        .try_fold(1usize, |acc, n| acc.checked_mul(n))
        .ok_or_else(|| GeometryError::BudgetExceeded("tuple count overflow".into()))?;
    if let Some(b) = budget {
        if total > b {
            return Err(GeometryError::BudgetExceeded(format!(
                "{total} colorful tuples exceed budget {b}"
            )));
        }
    }
    let mut tested = 0usize;
    for choice in sets.iter().map(|s| 0..s.len()).multi_cartesian_product() {
        tested += 1;
        let tuple: Vec<Point> = choice.iter().zip(sets).map(|(&i, s)| s[i].clone()).collect();
        if let Some(comb) = in_hull(p, &tuple)? {
            // Spread the combination back over all sets; absent sets get
            // weight zero, which the join definition permits.
            let mut weights = vec![Rat::zero(); sets.len()];
            for (idx, w) in comb.indices.iter().zip(&comb.weights) {
                weights[*idx] = w.clone();
            }
            return Ok(JoinVerdict::Member(JoinCertificate {
                choices: choice,
                points: tuple,
                weights,
            }));
        }
    }
    Ok(JoinVerdict::NonMember {
        tuples_tested: tested,
    })
}

/// Applies an exact linear map (rows of `map`) to each point.
pub fn project(points: &[Point], map: &linalg::Matrix) -> Result<Vec<Point>> {
    points.iter().map(|p| map.apply(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::point::{rat, rat_int};

    fn pts(list: &[&[i64]]) -> Vec<Point> {
        list.iter().map(|c| Point::from_ints(c)).collect()
    }

    fn crosspolytope2() -> Vec<Point> {
        pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])
    }

    #[test]
    fn center_of_crosspolytope_is_member() {
        let m = hull_membership(&Point::from_ints(&[0, 0]), &crosspolytope2()).unwrap();
        match m {
            Membership::Member(c) => {
                assert_eq!(c.evaluate(&crosspolytope2()), Point::from_ints(&[0, 0]))
            }
            _ => panic!("expected member"),
        }
    }

    #[test]
    fn outside_point_gets_separator() {
        // Oracle: min_norm_point of the translated set gives normal (1,0),
        // margin 1.
        let m = hull_membership(&Point::from_ints(&[2, 0]), &crosspolytope2()).unwrap();
        match m {
            Membership::NonMember { normal, margin } => {
                assert_eq!(normal, Point::from_ints(&[1, 0]));
                assert_eq!(margin, rat_int(1));
            }
            _ => panic!("expected non-member"),
        }
    }

    #[test]
    fn vertex_is_member() {
        let m = hull_membership(&Point::from_ints(&[1, 0]), &crosspolytope2()).unwrap();
        match m {
            Membership::Member(c) => {
                assert_eq!(c.indices, vec![0]);
                assert_eq!(c.weights, vec![rat_int(1)]);
            }
            _ => panic!("expected member"),
        }
    }

    #[test]
    fn empty_list_is_input_error() {
        assert!(matches!(
            hull_membership(&Point::from_ints(&[0]), &[]),
            Err(GeometryError::EmptyInput(_))
        ));
    }

    #[test]
    fn reduce_average_of_square() {
        let points = pts(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        let comb = ConvexCombination::new(
            vec![0, 1, 2, 3],
            vec![rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)],
        )
        .unwrap();
        let p = Point::from_ints(&[0, 0]);
        let reduced = caratheodory_reduce(&p, &points, &comb).unwrap();
        assert!(reduced.support_size() <= 3);
        assert_eq!(reduced.evaluate(&points), p);
        let members: Vec<&Point> = reduced.indices.iter().map(|&i| &points[i]).collect();
        assert!(linalg::affinely_independent(&members));
    }

    #[test]
    fn reduce_single_term_unchanged() {
        let points = pts(&[&[3, 4]]);
        let comb = ConvexCombination::singleton(0);
        let p = Point::from_ints(&[3, 4]);
        assert_eq!(caratheodory_reduce(&p, &points, &comb).unwrap(), comb);
    }

    #[test]
    fn reduce_independent_support_unchanged() {
        let points = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let comb = ConvexCombination::new(
            vec![0, 1, 2],
            vec![rat(1, 3), rat(1, 3), rat(1, 3)],
        )
        .unwrap();
        let p = Point::new(vec![rat(1, 3), rat(1, 3)]);
        assert_eq!(caratheodory_reduce(&p, &points, &comb).unwrap(), comb);
    }

    #[test]
    fn reduce_rejects_bad_combination() {
        let points = pts(&[&[0, 0], &[1, 0]]);
        let comb = ConvexCombination::singleton(1);
        assert!(matches!(
            caratheodory_reduce(&Point::from_ints(&[0, 0]), &points, &comb),
            Err(GeometryError::BadCombination)
        ));
    }

    #[test]
    fn convm_on_square_corners() {
        let corners = pts(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        let center = Point::from_ints(&[0, 0]);
        assert!(convm_membership(&center, &corners, 2).unwrap().is_member());
        assert!(!convm_membership(&center, &corners, 1).unwrap().is_member());
    }

    #[test]
    fn convm_triangle_interior_needs_three() {
        let tri = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let p = Point::new(vec![rat(1, 3), rat(1, 3)]);
        assert!(!convm_membership(&p, &tri, 2).unwrap().is_member());
        assert!(convm_membership(&p, &tri, 3).unwrap().is_member());
    }

    #[test]
    fn join_of_two_singletons() {
        let sets = vec![pts(&[&[1, 0]]), pts(&[&[-1, 0]])];
        let v = join_membership(&Point::from_ints(&[0, 0]), &sets, None).unwrap();
        match v {
            JoinVerdict::Member(c) => {
                assert_eq!(c.weights, vec![rat(1, 2), rat(1, 2)]);
            }
            _ => panic!("expected member"),
        }
        assert!(!join_membership(&Point::from_ints(&[0, 2]), &sets, None)
            .unwrap()
            .is_member());
    }

    #[test]
    fn join_picks_colorful_pair() {
        // Oracle: exhaustive tuples. (1,1) and (-1,-1) average to the origin.
        let sets = vec![pts(&[&[1, 1], &[2, 0]]), pts(&[&[-1, -1], &[0, -3]])];
        let v = join_membership(&Point::from_ints(&[0, 0]), &sets, None).unwrap();
        match v {
            JoinVerdict::Member(c) => {
                assert_eq!(c.points[0], Point::from_ints(&[1, 1]));
                assert_eq!(c.points[1], Point::from_ints(&[-1, -1]));
            }
            _ => panic!("expected member"),
        }
    }

    #[test]
    fn join_budget_enforced() {
        let sets = vec![crosspolytope2(), crosspolytope2()];
        assert!(matches!(
            join_membership(&Point::from_ints(&[0, 0]), &sets, Some(3)),
            Err(GeometryError::BudgetExceeded(_))
        ));
    }

    #[test]
    fn projection_examples() {
        let points = pts(&[&[1, 2], &[3, 4]]);
        let identity = Matrix::new(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
        ]);
        assert_eq!(project(&points, &identity).unwrap(), points);
        let first = Matrix::new(vec![vec![rat_int(1), rat_int(0)]]);
        assert_eq!(
            project(&points, &first).unwrap(),
            pts(&[&[1], &[3]])
        );
        let bad = Matrix::new(vec![vec![rat_int(1)]]);
        assert!(project(&points, &bad).is_err());
    }
}
