//! Deterministic instance generators: moment-curve and Veronese samples,
//! polytope skeletons, seeded loops, point clouds, and small families.
//! Every randomized generator is driven by an explicit seed.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compactum::PlCurve;
use crate::error::{GeometryError, Result};
use crate::kappa::{Family, VPolytope};
use crate::point::{rat, rat_int, Point, Rat};

/// Points `(t, t^2, ..., t^n)` of the moment curve at the given parameters.
pub fn moment_curve(n: usize, ts: &[Rat]) -> Result<Vec<Point>> {
    if n == 0 {
        return Err(GeometryError::InvalidInput("moment curve needs n >= 1".into()));
    }
    Ok(ts
        .iter()
        .map(|t| {
            let mut coords = Vec::with_capacity(n);
            let mut pow = Rat::one();
            for _ in 0..n {
                pow = &pow * t;
                coords.push(pow.clone());
            }
            Point::new(coords)
        })
        .collect())
}

/// Evenly spread rational parameters in `[lo, hi]`.
pub fn rational_grid(lo: i64, hi: i64, count: usize) -> Vec<Rat> {
    if count <= 1 {
        return vec![rat_int(lo)];
    }
    let span = rat_int(hi - lo);
    (0..count)
        .map(|i| rat_int(lo) + &span * rat(i as i64, count as i64 - 1))
        .collect()
}

/// Rational point on the unit sphere `S^{n-1}` from a rational parameter
/// vector `u in R^{n-1}` via the inverse stereographic map
/// `x = (2u, 1 - |u|^2) / (1 + |u|^2)`.
pub fn sphere_point(u: &[Rat]) -> Point {
    let norm_sq: Rat = u.iter().map(|c| c * c).sum();
    let denom = Rat::one() + &norm_sq;
    let mut coords: Vec<Rat> = u.iter().map(|c| rat_int(2) * c / &denom).collect();
    coords.push((Rat::one() - &norm_sq) / &denom);
    Point::new(coords)
}

/// Degree-2 Veronese image of `x`: all monomials `x_i x_j`, `i <= j`, in
/// lexicographic order of `(i, j)`.
pub fn veronese(x: &Point) -> Point {
    let n = x.dim();
    let mut coords = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            coords.push(x.coord(i) * x.coord(j));
        }
    }
    Point::new(coords)
}

/// Seeded Veronese images of rational sphere points in `S^{n-1}`; output
/// dimension `n(n+1)/2`. The `density` bound controls the stereographic
/// parameter denominators (larger = denser coverage of the sphere).
pub fn veronese_sphere(n: usize, count: usize, density: i64, seed: u64) -> Result<Vec<Point>> {
    if n < 2 {
        return Err(GeometryError::InvalidInput(
            "veronese sphere needs n >= 2".into(),
        ));
    }
    if density < 1 {
        return Err(GeometryError::InvalidInput("density must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let u: Vec<Rat> = (0..n - 1)
                .map(|_| rat(rng.gen_range(-density..=density), rng.gen_range(1..=density)))
                .collect();
            veronese(&sphere_point(&u))
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeletonKind {
    Crosspolytope,
    Simplex,
}

/// The `k`-skeleton of a crosspolytope or simplex in `R^n` as a union of
/// V-polytope faces.
pub fn polytope_skeleton(kind: SkeletonKind, n: usize, k: usize) -> Result<Vec<VPolytope>> {
    if n == 0 {
        return Err(GeometryError::InvalidInput("skeleton needs n >= 1".into()));
    }
    use itertools::Itertools;
    let faces: Vec<Vec<Point>> = match kind {
        SkeletonKind::Crosspolytope => {
            if k >= n {
                return Err(GeometryError::InvalidInput(format!(
                    "crosspolytope in R^{n} has proper faces of dimension < {n}, got k={k}"
                )));
            }
            // A k-face picks k+1 distinct axes and a sign for each.
            (0..n)
                .combinations(k + 1)
                .flat_map(|axes| {
                    (0..1usize << (k + 1)).map(move |signs| {
                        axes.iter()
                            .enumerate()
                            .map(|(pos, &axis)| {
                                let mut coords = vec![rat_int(0); n];
                                coords[axis] =
                                    rat_int(if signs >> pos & 1 == 0 { 1 } else { -1 });
                                Point::new(coords)
                            })
                            .collect()
                    })
                })
                .collect()
        }
        SkeletonKind::Simplex => {
            if k > n {
                return Err(GeometryError::InvalidInput(format!(
                    "simplex in R^{n} has faces of dimension <= {n}, got k={k}"
                )));
            }
            // Vertices: origin plus the standard basis.
            let vertices: Vec<Point> = std::iter::once(Point::zero(n))
                .chain((0..n).map(|i| {
                    let mut coords = vec![rat_int(0); n];
                    coords[i] = rat_int(1);
                    Point::new(coords)
                }))
                .collect();
            vertices
                .into_iter()
                .combinations(k + 1)
                .collect()
        }
    };
    faces.into_iter().map(VPolytope::new).collect()
}

/// Seeded closed PL loop around the origin in the plane: sorted angles
/// with rationalized radii, so the origin lies in the hull.
pub fn pl_loop(waypoint_count: usize, seed: u64) -> Result<PlCurve> {
    if waypoint_count < 3 {
        return Err(GeometryError::InvalidInput(
            "a loop needs at least 3 waypoints".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angles: Vec<f64> = (0..waypoint_count)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    let mut waypoints: Vec<Point> = angles
        .iter()
        .map(|a| {
            let r = rng.gen_range(1.0..3.0);
            Point::new(vec![
                crate::point::rat_from_f64_rounded(r * a.cos(), 8),
                crate::point::rat_from_f64_rounded(r * a.sin(), 8),
            ])
        })
        .collect();
    waypoints.push(waypoints[0].clone());
    PlCurve::new(waypoints)
}

/// Seeded connected PL curve (not closed) in `R^n` with integer waypoints.
pub fn random_curve(n: usize, waypoint_count: usize, range: i64, seed: u64) -> Result<PlCurve> {
    if waypoint_count == 0 {
        return Err(GeometryError::EmptyInput("random_curve"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PlCurve::new(
        (0..waypoint_count)
            .map(|_| {
                Point::new(
                    (0..n)
                        .map(|_| rat_int(rng.gen_range(-range..=range)))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Seeded integer point cloud in `R^n`.
pub fn random_points(n: usize, count: usize, range: i64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            Point::new(
                (0..n)
                    .map(|_| rat_int(rng.gen_range(-range..=range)))
                    .collect(),
            )
        })
        .collect()
}

/// Seeded family of one-vertex members.
pub fn singleton_family(n: usize, count: usize, range: i64, seed: u64) -> Result<Family> {
    let members = random_points(n, count, range, seed)
        .into_iter()
        .map(|p| VPolytope::new(vec![p]))
        .collect::<Result<_>>()?;
    Family::new(n, members)
}

/// Seeded square-edge family in the plane: the four edges of a randomly
/// placed axis-aligned square plus its center as a degenerate member.
/// Family Caratheodory number 2.
pub fn edge_family(seed: u64) -> Result<Family> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cx = rng.gen_range(-5i64..=5);
    let cy = rng.gen_range(-5i64..=5);
    let h = rng.gen_range(1i64..=4);
    let corner = |sx: i64, sy: i64| Point::from_ints(&[cx + sx * h, cy + sy * h]);
    let members = vec![
        VPolytope::new(vec![corner(-1, -1), corner(1, -1)])?,
        VPolytope::new(vec![corner(1, -1), corner(1, 1)])?,
        VPolytope::new(vec![corner(1, 1), corner(-1, 1)])?,
        VPolytope::new(vec![corner(-1, 1), corner(-1, -1)])?,
        VPolytope::new(vec![Point::from_ints(&[cx, cy])])?,
    ];
    Family::new(2, members)
}
