//! Hyperplanes and exact line-simplex intersection.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::linalg::{self, Matrix};
use crate::point::{rat_serde, Point, Rat};

/// Affine hyperplane `{x : <normal, x> = offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Point,
    #[serde(with = "rat_serde")]
    pub offset: Rat,
}

impl Hyperplane {
    pub fn new(normal: Point, offset: Rat) -> Result<Self> {
        if normal.is_zero() {
            return Err(GeometryError::InvalidInput("zero hyperplane normal".into()));
        }
        Ok(Hyperplane { normal, offset })
    }

    /// Signed evaluation `<normal, p> - offset`.
    pub fn eval(&self, p: &Point) -> Rat {
        self.normal.dot(p) - &self.offset
    }
}

/// Exact parameter interval of `{origin + t * direction}` inside the simplex
/// spanned by `vertices`. `None` means empty intersection.
///
/// Degenerate (affinely dependent) vertex lists are reported as an error;
/// the caller owns any perturbation policy.
pub fn line_simplex_intersection(
    origin: &Point,
    direction: &Point,
    vertices: &[Point],
) -> Result<Option<(Rat, Rat)>> {
    if direction.is_zero() {
        return Err(GeometryError::InvalidInput("zero line direction".into()));
    }
    if vertices.is_empty() {
        return Err(GeometryError::EmptyInput("line_simplex_intersection"));
    }
    let dim = origin.dim();
    if vertices.len() > dim + 1 {
        return Err(GeometryError::InvalidInput(
            "simplex has more than dim+1 vertices".into(),
        ));
    }
    let refs: Vec<&Point> = vertices.iter().collect();
    if !linalg::affinely_independent(&refs) {
        return Err(GeometryError::DegenerateSimplex);
    }

    // Unknowns: barycentric coordinates b_0..b_k, then t.
    // Equations: sum b_i v_i - t d = origin (per coordinate), sum b_i = 1.
    let k = vertices.len();
    let mut rows = Vec::with_capacity(dim + 1);
    for c in 0..dim {
        let mut row: Vec<Rat> = vertices.iter().map(|v| v.coord(c).clone()).collect();
        row.push(-direction.coord(c).clone());
        rows.push(row);
    }
    let mut sum_row = vec![Rat::one(); k];
    sum_row.push(Rat::zero());
    rows.push(sum_row);
    let mut rhs: Vec<Rat> = origin.coords().to_vec();
    rhs.push(Rat::one());

    let Some(sol) = linalg::solve(&Matrix::new(rows), &rhs) else {
        return Ok(None);
    };

    match sol.nullspace.len() {
        0 => {
            let b = &sol.particular[..k];
            let t = sol.particular[k].clone();
            if b.iter().all(|x| !x.is_negative()) {
                Ok(Some((t.clone(), t)))
            } else {
                Ok(None)
            }
        }
        1 => {
            // The line lies in the affine hull of the simplex. Solutions are
            // affine in one parameter u; each barycentric coordinate gives a
            // half-interval constraint.
            let null = &sol.nullspace[0];
            let mut lo: Option<Rat> = None;
            let mut hi: Option<Rat> = None;
            for i in 0..k {
                let p0 = &sol.particular[i];
                let q = &null[i];
                if q.is_zero() {
                    if p0.is_negative() {
                        return Ok(None);
                    }
                } else {
                    // p0 + q * u >= 0
                    let bound = -p0 / q;
                    if q.is_positive() {
                        if lo.as_ref().map_or(true, |cur| &bound > cur) {
                            lo = Some(bound);
                        }
                    } else if hi.as_ref().map_or(true, |cur| &bound < cur) {
                        hi = Some(bound);
                    }
                }
            }
            // A simplex is compact, so the feasible u-interval is bounded.
            let (lo, hi) = match (lo, hi) {
                (Some(l), Some(h)) => (l, h),
                _ => {
                    return Err(GeometryError::Internal(
                        "unbounded feasible interval for a compact simplex".into(),
                    ))
                }
            };
            if lo > hi {
                return Ok(None);
            }
            let t_of = |u: &Rat| &sol.particular[k] + &(&null[k] * u);
            let (t_a, t_b) = (t_of(&lo), t_of(&hi));
            Ok(Some(if t_a <= t_b { (t_a, t_b) } else { (t_b, t_a) }))
        }
        _ => Err(GeometryError::Internal(
            "nullspace dimension > 1 for affinely independent simplex".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{rat, rat_int};

    fn pt(cs: &[i64]) -> Point {
        Point::from_ints(cs)
    }

    #[test]
    fn line_hits_segment_at_point() {
        let hit = line_simplex_intersection(
            &pt(&[0, 0]),
            &pt(&[1, 0]),
            &[pt(&[1, -1]), pt(&[1, 1])],
        )
        .unwrap();
        assert_eq!(hit, Some((rat_int(1), rat_int(1))));
    }

    #[test]
    fn parallel_line_misses_segment() {
        let hit = line_simplex_intersection(
            &pt(&[0, 0]),
            &pt(&[0, 1]),
            &[pt(&[1, -1]), pt(&[1, 1])],
        )
        .unwrap();
        assert_eq!(hit, None);
    }

    #[test]
    fn coplanar_line_yields_interval() {
        // Oracle: rational LP on barycentric coordinates gives [1/2, 2].
        let hit = line_simplex_intersection(
            &pt(&[0, 0]),
            &pt(&[1, 1]),
            &[pt(&[1, 0]), pt(&[0, 1]), pt(&[2, 2])],
        )
        .unwrap();
        assert_eq!(hit, Some((rat(1, 2), rat_int(2))));
    }

    #[test]
    fn degenerate_simplex_flagged() {
        assert!(matches!(
            line_simplex_intersection(
                &pt(&[0, 0]),
                &pt(&[1, 0]),
                &[pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 2])],
            ),
            Err(GeometryError::DegenerateSimplex)
        ));
    }

    #[test]
    fn hyperplane_eval() {
        let h = Hyperplane::new(pt(&[1, 1]), rat_int(1)).unwrap();
        assert!(h.eval(&pt(&[0, 1])).is_zero());
        assert!(h.eval(&pt(&[0, 0])).is_negative());
        assert!(Hyperplane::new(pt(&[0, 0]), rat_int(0)).is_err());
    }
}
