//! Exact rational linear algebra: Gaussian elimination, rank, affine
//! (in)dependence, barycentric coordinates.

use num_traits::{One, Zero};

use crate::error::{GeometryError, Result};
use crate::point::{Point, Rat};

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: Vec<Vec<Rat>>,
}

impl Matrix {
    pub fn new(rows: Vec<Vec<Rat>>) -> Self {
        Matrix { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// Applies the matrix to a point (matrix is `k x n`, point in `R^n`).
    pub fn apply(&self, p: &Point) -> Result<Point> {
        if self.ncols() != p.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.ncols(),
                got: p.dim(),
            });
        }
        Ok(Point::new(
            self.rows
                .iter()
                .map(|row| row.iter().zip(p.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }
}

/// Solution set of a linear system: a particular solution plus a nullspace
/// basis. The full set is `particular + span(nullspace)`.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub particular: Vec<Rat>,
    pub nullspace: Vec<Vec<Rat>>,
}

/// Solves `A x = b` exactly. Returns `None` when inconsistent.
pub fn solve(a: &Matrix, b: &[Rat]) -> Option<LinearSolution> {
    let m = a.nrows();
    let n = a.ncols();
    assert_eq!(m, b.len());
    // Augmented row-reduction.
    let mut aug: Vec<Vec<Rat>> = a
        .rows
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let inv = aug[row][col].clone();
        for v in aug[row].iter_mut() {
            *v = &*v / &inv;
        }
        for r in 0..m {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=n {
                    let delta = &aug[row][c] * &f;
                    aug[r][c] = &aug[r][c] - &delta;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in row..m {
        if !aug[r][n].is_zero() {
            return None;
        }
    }

    let mut particular = vec![Rat::zero(); n];
    for (r, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = aug[r][n].clone();
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &pc in &pivot_cols {
            v[pc] = true;
        }
        v
    };
    let mut nullspace = Vec::new();
    for free in 0..n {
        if is_pivot[free] {
            continue;
        }
        let mut vec_ = vec![Rat::zero(); n];
        vec_[free] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            vec_[pc] = -aug[r][free].clone();
        }
        nullspace.push(vec_);
    }
    Some(LinearSolution {
        particular,
        nullspace,
    })
}

pub fn rank(a: &Matrix) -> usize {
    let m = a.nrows();
    let n = a.ncols();
    let mut rows = a.rows.clone();
    let mut rk = 0usize;
    for col in 0..n {
        let Some(p) = (rk..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rk, p);
        let inv = rows[rk][col].clone();
        for v in rows[rk].iter_mut() {
            *v = &*v / &inv;
        }
        for r in 0..m {
            if r != rk && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..n {
                    let delta = &rows[rk][c] * &f;
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
        rk += 1;
        if rk == m {
            break;
        }
    }
    rk
}

/// Points are affinely independent iff the difference vectors to the first
/// point are linearly independent.
pub fn affinely_independent(points: &[&Point]) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let base = points[0];
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.sub(base).coords().to_vec())
        .collect();
    rank(&Matrix::new(diffs)) == points.len() - 1
}

/// A nontrivial affine dependency `sum g_i p_i = 0`, `sum g_i = 0`, if one
/// exists.
pub fn affine_dependency(points: &[&Point]) -> Option<Vec<Rat>> {
    if points.is_empty() {
        return None;
    }
    let dim = points[0].dim();
    // System: columns are the points, rows are coordinates plus the sum row.
    let mut rows = Vec::with_capacity(dim + 1);
    for c in 0..dim {
        rows.push(points.iter().map(|p| p.coord(c).clone()).collect());
    }
    rows.push(vec![Rat::one(); points.len()]);
    let sol = solve(&Matrix::new(rows), &vec![Rat::zero(); dim + 1])?;
    sol.nullspace.into_iter().next()
}

/// Solves `sum b_i v_i = p`, `sum b_i = 1` for affinely independent `vs`.
/// Returns `None` when `p` is outside the affine hull.
pub fn barycentric(p: &Point, vs: &[&Point]) -> Option<Vec<Rat>> {
    let dim = p.dim();
    let mut rows = Vec::with_capacity(dim + 1);
    for c in 0..dim {
        rows.push(vs.iter().map(|v| v.coord(c).clone()).collect());
    }
    rows.push(vec![Rat::one(); vs.len()]);
    let mut rhs: Vec<Rat> = p.coords().to_vec();
    rhs.push(Rat::one());
    let sol = solve(&Matrix::new(rows), &rhs)?;
    debug_assert!(sol.nullspace.is_empty() || !affinely_independent(vs));
    Some(sol.particular)
}

/// Orthogonal projection of `x` onto the orthogonal complement of
/// `span(directions)`. Directions must be linearly independent.
pub fn project_complement(x: &Point, directions: &[&Point]) -> Result<Point> {
    if directions.is_empty() {
        return Ok(x.clone());
    }
    let k = directions.len();
    let gram = Matrix::new(
        (0..k)
            .map(|i| (0..k).map(|j| directions[i].dot(directions[j])).collect())
            .collect(),
    );
    let rhs: Vec<Rat> = directions.iter().map(|d| d.dot(x)).collect();
    let sol = solve(&gram, &rhs).ok_or_else(|| {
        GeometryError::InvalidInput("linearly dependent direction list".into())
    })?;
    if !sol.nullspace.is_empty() {
        return Err(GeometryError::InvalidInput(
            "linearly dependent direction list".into(),
        ));
    }
    let mut out = x.clone();
    for (d, a) in directions.iter().zip(&sol.particular) {
        out = out.sub(&d.scale(a));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{rat, rat_int};

    fn pt(cs: &[i64]) -> Point {
        Point::from_ints(cs)
    }

    #[test]
    fn solve_unique() {
        let a = Matrix::new(vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(-1)],
        ]);
        let sol = solve(&a, &[rat_int(5), rat_int(1)]).unwrap();
        assert_eq!(sol.particular, vec![rat_int(2), rat_int(1)]);
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn solve_inconsistent() {
        let a = Matrix::new(vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(2), rat_int(2)],
        ]);
        assert!(solve(&a, &[rat_int(1), rat_int(3)]).is_none());
    }

    #[test]
    fn solve_underdetermined_has_nullspace() {
        let a = Matrix::new(vec![vec![rat_int(1), rat_int(1), rat_int(1)]]);
        let sol = solve(&a, &[rat_int(1)]).unwrap();
        assert_eq!(sol.nullspace.len(), 2);
    }

    #[test]
    fn affine_independence() {
        let p = [pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])];
        let refs: Vec<&Point> = p.iter().collect();
        assert!(affinely_independent(&refs));
        let q = [pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 2])];
        let refs: Vec<&Point> = q.iter().collect();
        assert!(!affinely_independent(&refs));
        let dep = affine_dependency(&refs).unwrap();
        // sum g_i q_i = 0 and sum g_i = 0
        let sum: Rat = dep.iter().cloned().sum();
        assert!(sum.is_zero());
        let combo = Point::weighted_sum(&refs, &dep);
        assert!(combo.is_zero());
    }

    #[test]
    fn barycentric_triangle() {
        let a = pt(&[0, 0]);
        let b = pt(&[1, 0]);
        let c = pt(&[0, 1]);
        let p = Point::new(vec![rat(1, 3), rat(1, 3)]);
        let bary = barycentric(&p, &[&a, &b, &c]).unwrap();
        assert_eq!(bary, vec![rat(1, 3), rat(1, 3), rat(1, 3)]);
    }

    #[test]
    fn complement_projection_is_orthogonal() {
        let d = pt(&[1, 1, 0]);
        let x = pt(&[3, 1, 2]);
        let proj = project_complement(&x, &[&d]).unwrap();
        assert!(proj.dot(&d).is_zero());
        // x - proj lies in span(d)
        let diff = x.sub(&proj);
        assert!(diff.coord(0) == diff.coord(1) && diff.coord(2).is_zero());
    }
}
