//! Minimum-norm point in a convex hull, computed exactly by Wolfe's method.
//!
//! The returned support is a corral: an affinely independent subset over
//! which the minimizer has strictly positive weights. With rational
//! arithmetic the strict-decrease argument is exact, so the method
//! terminates without tolerances.

use num_traits::{One, Signed, Zero};

use crate::error::{GeometryError, Result};
use crate::linalg::{self, Matrix};
use crate::point::{ConvexCombination, Point, Rat};

/// Nearest point of `conv(points)` to the origin, with certificate.
#[derive(Clone, Debug)]
pub struct MinNormResult {
    pub point: Point,
    pub support: ConvexCombination,
    pub squared_distance: Rat,
}

impl MinNormResult {
    /// Exact optimality check: `<v, z> >= <z, z>` for every input point.
    pub fn is_optimal_for(&self, points: &[Point]) -> bool {
        let zz = self.point.norm_sq();
        points.iter().all(|v| v.dot(&self.point) >= zz)
    }
}

/// Affine minimizer of the squared norm over `aff(points)`: solves the
/// KKT system on the Gram matrix. Returns the affine coefficients.
fn affine_minimizer(points: &[&Point]) -> Result<Vec<Rat>> {
    let k = points.len();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(k + 1);
    for i in 0..k {
        let mut row: Vec<Rat> = (0..k).map(|j| points[i].dot(points[j])).collect();
        row.push(Rat::one()); // lambda column
        rows.push(row);
    }
    let mut last = vec![Rat::one(); k];
    last.push(Rat::zero());
    rows.push(last);
    let mut rhs = vec![Rat::zero(); k];
    rhs.push(Rat::one());
    let sol = linalg::solve(&Matrix::new(rows), &rhs).ok_or_else(|| {
        GeometryError::Internal("singular Gram system in Wolfe minor cycle".into())
    })?;
    if !sol.nullspace.is_empty() {
        return Err(GeometryError::Internal(
            "affinely dependent corral in Wolfe minor cycle".into(),
        ));
    }
    Ok(sol.particular[..k].to_vec())
}

/// Wolfe's minimum-norm-point algorithm over `conv(points)`.
///
/// Tie-breaks are deterministic: the entering point is the lowest index
/// minimizing `<p, x>`, and the minor cycle removes the lowest-index
/// blocking point.
pub fn min_norm_point(points: &[Point]) -> Result<MinNormResult> {
    if points.is_empty() {
        return Err(GeometryError::EmptyInput("min_norm_point"));
    }
    let dim = points[0].dim();
    for p in points {
        if p.dim() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
    }

    // Start from the input point of smallest norm.
    let start = (0..points.len())
        .min_by(|&a, &b| points[a].norm_sq().cmp(&points[b].norm_sq()))
        .unwrap();
    let mut corral: Vec<usize> = vec![start];
    let mut weights: Vec<Rat> = vec![Rat::one()];
    let mut x = points[start].clone();

    loop {
        // Major cycle: look for a point strictly below the supporting level.
        let xx = x.norm_sq();
        // min_by keeps the first minimum, i.e. the lowest index.
        let entering = (0..points.len())
            .map(|j| (j, points[j].dot(&x)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .unwrap();
        if entering.1 >= xx {
            let comb = ConvexCombination::new(corral, weights)?;
            return Ok(MinNormResult {
                squared_distance: xx,
                point: x,
                support: comb,
            });
        }
        corral.push(entering.0);
        weights.push(Rat::zero());

        // Minor cycles: restore the corral property.
        loop {
            let members: Vec<&Point> = corral.iter().map(|&i| &points[i]).collect();
            let aff = affine_minimizer(&members)?;
            if aff.iter().all(|a| a.is_positive()) {
                weights = aff;
                x = Point::weighted_sum(&members, &weights);
                break;
            }
            // Step as far as possible toward the affine minimizer while
            // staying in the simplex of the corral.
            // Only nonpositive affine coefficients can push a weight to zero.
            let mut theta: Option<Rat> = None;
            for (w, a) in weights.iter().zip(&aff) {
                if !a.is_positive() {
                    let denom = w - a;
                    let t = if denom.is_positive() {
                        w / &denom
                    } else {
                        Rat::one()
                    };
                    if theta.as_ref().map_or(true, |cur| &t < cur) {
                        theta = Some(t);
                    }
                }
            }
            let theta = theta.ok_or_else(|| {
                GeometryError::Internal("no blocking point in Wolfe minor cycle".into())
            })?;
            let one_minus = Rat::one() - &theta;
            for (w, a) in weights.iter_mut().zip(&aff) {
                *w = &*w * &one_minus + a * &theta;
            }
            // Remove the lowest-index point whose weight hit zero.
            let drop_pos = weights
                .iter()
                .enumerate()
                .filter(|(_, w)| w.is_zero() || w.is_negative())
                .min_by_key(|(pos, _)| corral[*pos])
                .map(|(pos, _)| pos)
                .ok_or_else(|| {
                    GeometryError::Internal("minor cycle step removed no point".into())
                })?;
            corral.remove(drop_pos);
            weights.remove(drop_pos);
            // Clamp exact zeros that remain representable as tiny negatives
            // cannot occur: arithmetic is exact, so any nonpositive weight is
            // exactly zero and stays for a later minor cycle.
            for w in weights.iter_mut() {
                if w.is_negative() {
                    *w = Rat::zero();
                }
            }
            // The current point is tracked implicitly through `weights`; it
            // is rebuilt when the minor loop exits with a corral.
        }
    }
}
