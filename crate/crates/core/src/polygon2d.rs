//! Exact planar convex-polygon primitives: hulls, clipping, areas, and
//! convex-cell subtraction. These back the exact coverage oracle in the
//! plane.

use num_traits::{Signed, Zero};

use crate::error::{GeometryError, Result};
use crate::point::{Point, Rat};

/// Twice the signed area of triangle `o, a, b`.
pub fn cross(o: &Point, a: &Point, b: &Point) -> Rat {
    let ax = a.coord(0) - o.coord(0);
    let ay = a.coord(1) - o.coord(1);
    let bx = b.coord(0) - o.coord(0);
    let by = b.coord(1) - o.coord(1);
    &ax * &by - &ay * &bx
}

/// Monotone-chain convex hull, counter-clockwise, collinear points dropped.
/// Collinear input collapses to its two extreme points, coincident input to
/// a single point.
pub fn convex_hull_2d(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // All points collinear: keep the two extremes.
        let mut ends = vec![pts[0].clone(), pts[pts.len() - 1].clone()];
        ends.dedup();
        return ends;
    }
    lower
}

/// Twice the (positive) area of a CCW convex polygon.
pub fn area2(poly: &[Point]) -> Rat {
    if poly.len() < 3 {
        return Rat::zero();
    }
    let mut acc = Rat::zero();
    for i in 1..poly.len() - 1 {
        acc += cross(&poly[0], &poly[i], &poly[i + 1]);
    }
    acc
}

/// Closed halfplane `a*x + b*y <= c`.
#[derive(Clone, Debug)]
pub struct Halfplane {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl Halfplane {
    pub fn eval(&self, p: &Point) -> Rat {
        &self.a * p.coord(0) + &self.b * p.coord(1) - &self.c
    }

    pub fn complement(&self) -> Halfplane {
        Halfplane {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
        }
    }
}

/// Inward halfplanes of a CCW convex polygon, one per edge.
pub fn halfplanes(poly: &[Point]) -> Vec<Halfplane> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        // Interior lies to the left of p -> q.
        let a = q.coord(1) - p.coord(1);
        let b = p.coord(0) - q.coord(0);
        let c = &a * p.coord(0) + &b * p.coord(1);
        out.push(Halfplane { a, b, c });
    }
    out
}

/// Sutherland-Hodgman clip of a CCW convex polygon against one halfplane.
pub fn clip(poly: &[Point], h: &Halfplane) -> Vec<Point> {
    if poly.is_empty() {
        return Vec::new();
    }
    let n = poly.len();
    let mut out: Vec<Point> = Vec::new();
    for i in 0..n {
        let cur = &poly[i];
        let nxt = &poly[(i + 1) % n];
        let vc = h.eval(cur);
        let vn = h.eval(nxt);
        if !vc.is_positive() {
            out.push(cur.clone());
        }
        if (vc.is_positive() && vn.is_negative()) || (vc.is_negative() && vn.is_positive()) {
            let t = &vc / &(&vc - &vn);
            out.push(cur.lerp(nxt, &t));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Exact closed point-in-convex-set test; handles degenerate polygons
/// (segment, single point).
pub fn point_in_convex(poly: &[Point], p: &Point) -> bool {
    match poly.len() {
        0 => false,
        1 => poly[0] == *p,
        2 => point_on_segment(&poly[0], &poly[1], p),
        n => (0..n).all(|i| !cross(&poly[i], &poly[(i + 1) % n], p).is_negative()),
    }
}

/// Exact test that `p` lies on the closed segment `[a, b]`.
pub fn point_on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    if !cross(a, b, p).is_zero() {
        return false;
    }
    let d = b.sub(a);
    let v = p.sub(a);
    let t_num = v.dot(&d);
    let len = d.norm_sq();
    if len.is_zero() {
        return p == a;
    }
    !t_num.is_negative() && t_num <= len
}

/// Splits `cell \ piece` into convex cells of positive area. Both inputs are
/// CCW convex polygons of positive area.
pub fn subtract_convex(cell: &[Point], piece: &[Point]) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    let mut remaining = cell.to_vec();
    for h in halfplanes(piece) {
        if remaining.is_empty() {
            break;
        }
        let outside = clip(&remaining, &h.complement());
        if area2(&outside).is_positive() {
            out.push(outside);
        }
        remaining = clip(&remaining, &h);
    }
    out
}

/// Intersection of a CCW convex polygon with the parametrized segment
/// `a + t (b - a)`, `t in [0, 1]`, as an exact parameter interval.
pub fn segment_param_interval(
    poly: &[Point],
    a: &Point,
    b: &Point,
) -> Option<(Rat, Rat)> {
    use num_traits::One;
    let mut lo = Rat::zero();
    let mut hi = Rat::one();
    let d = b.sub(a);
    let constraints: Vec<Halfplane> = match poly.len() {
        0 => return None,
        1 | 2 => {
            // Degenerate piece: intersect segments directly.
            return degenerate_param_interval(poly, a, b, &d);
        }
        _ => halfplanes(poly),
    };
    for h in constraints {
        // h.eval(a + t d) = eval(a) + t * (a*dx + b*dy) <= 0
        let base = h.eval(a);
        let slope = &h.a * d.coord(0) + &h.b * d.coord(1);
        if slope.is_zero() {
            if base.is_positive() {
                return None;
            }
        } else {
            let bound = -&base / &slope;
            if slope.is_positive() {
                if bound < hi {
                    hi = bound;
                }
            } else if bound > lo {
                lo = bound;
            }
        }
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

fn degenerate_param_interval(
    poly: &[Point],
    a: &Point,
    b: &Point,
    d: &Point,
) -> Option<(Rat, Rat)> {
    use num_traits::One;
    let param_of = |p: &Point| -> Option<Rat> {
        if !point_on_segment(a, b, p) {
            return None;
        }
        let len = d.norm_sq();
        if len.is_zero() {
            return Some(Rat::zero());
        }
        Some(p.sub(a).dot(d) / len)
    };
    if poly.len() == 1 {
        return param_of(&poly[0]).map(|t| (t.clone(), t));
    }
    let (p, q) = (&poly[0], &poly[1]);
    let cp = cross(a, b, p);
    let cq = cross(a, b, q);
    if cp.is_zero() && cq.is_zero() {
        // Collinear pieces project to a parameter interval.
        let len = d.norm_sq();
        if len.is_zero() {
            return if point_on_segment(p, q, a) {
                Some((Rat::zero(), Rat::zero()))
            } else {
                None
            };
        }
        let tp = p.sub(a).dot(d) / &len;
        let tq = q.sub(a).dot(d) / &len;
        let (mut lo, mut hi) = if tp <= tq { (tp, tq) } else { (tq, tp) };
        if lo < Rat::zero() {
            lo = Rat::zero();
        }
        if hi > Rat::one() {
            hi = Rat::one();
        }
        if lo > hi {
            None
        } else {
            Some((lo, hi))
        }
    } else if cp.is_zero() {
        param_of(p).map(|t| (t.clone(), t))
    } else if cq.is_zero() {
        param_of(q).map(|t| (t.clone(), t))
    } else if (cp.is_positive() && cq.is_positive())
        || (cp.is_negative() && cq.is_negative())
    {
        None
    } else {
        // Proper crossing of the supporting lines.
        let t = &cp / &(&cp - &cq);
        let x = p.lerp(q, &t);
        param_of(&x).map(|t| (t.clone(), t))
    }
}

/// Deterministic interior point of a positive-area convex polygon that
/// avoids a finite list of degenerate obstacles (segments and points).
/// Tries the vertex centroid first, then points pulled toward each vertex.
pub fn interior_point_avoiding(
    poly: &[Point],
    obstacles: &[Vec<Point>],
) -> Result<Point> {
    use crate::point::rat;
    let n = poly.len() as i64;
    let centroid = {
        let refs: Vec<&Point> = poly.iter().collect();
        let w = vec![rat(1, n); poly.len()];
        Point::weighted_sum(&refs, &w)
    };
    let blocked = |p: &Point| obstacles.iter().any(|ob| point_in_convex(ob, p));
    if !blocked(&centroid) {
        return Ok(centroid);
    }
    // The centroid can land on an obstacle (e.g. a diagonal); probe interior
    // points pulled asymmetrically toward vertex pairs so that no single
    // segment can block every candidate.
    for depth in 2..64i64 {
        for v in poly {
            let cand = centroid.lerp(v, &rat(1, depth));
            if !blocked(&cand) {
                return Ok(cand);
            }
        }
        for (i, vi) in poly.iter().enumerate() {
            for (j, vj) in poly.iter().enumerate() {
                if i == j {
                    continue;
                }
                let cand = centroid
                    .add(&vi.sub(&centroid).scale(&rat(1, depth + 1)))
                    .add(&vj.sub(&centroid).scale(&rat(1, 2 * depth + 3)));
                if !blocked(&cand) {
                    return Ok(cand);
                }
            }
        }
    }
    Err(GeometryError::Internal(
        "could not find an interior point clear of degenerate obstacles".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{rat, rat_int};

    fn pt(cs: &[i64]) -> Point {
        Point::from_ints(cs)
    }

    fn square() -> Vec<Point> {
        vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1]), pt(&[0, 1])]
    }

    #[test]
    fn hull_of_square_with_interior_point() {
        let mut pts = square();
        pts.push(Point::new(vec![rat(1, 2), rat(1, 2)]));
        let hull = convex_hull_2d(&pts);
        assert_eq!(hull.len(), 4);
        assert_eq!(area2(&hull), rat_int(2));
    }

    #[test]
    fn hull_of_collinear_points() {
        let hull = convex_hull_2d(&[pt(&[0, 0]), pt(&[2, 2]), pt(&[1, 1])]);
        assert_eq!(hull, vec![pt(&[0, 0]), pt(&[2, 2])]);
    }

    #[test]
    fn clip_square_in_half() {
        // x <= 1/2
        let h = Halfplane {
            a: rat_int(1),
            b: rat_int(0),
            c: rat(1, 2),
        };
        let clipped = clip(&square(), &h);
        assert_eq!(area2(&clipped), rat_int(1));
    }

    #[test]
    fn subtract_triangle_from_square() {
        let tri = vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])];
        let cells = subtract_convex(&square(), &tri);
        let total: Rat = cells.iter().map(|c| area2(c)).sum();
        assert_eq!(total, rat_int(1)); // half the square remains
    }

    #[test]
    fn subtract_self_leaves_nothing() {
        assert!(subtract_convex(&square(), &square()).is_empty());
    }

    #[test]
    fn segment_interval_through_square() {
        let a = Point::new(vec![rat(-1, 1), rat(1, 2)]);
        let b = Point::new(vec![rat_int(2), rat(1, 2)]);
        let (lo, hi) = segment_param_interval(&square(), &a, &b).unwrap();
        assert_eq!(lo, rat(1, 3));
        assert_eq!(hi, rat(2, 3));
    }

    #[test]
    fn interior_point_dodges_segment() {
        let diag = vec![pt(&[0, 0]), pt(&[1, 1])];
        let p = interior_point_avoiding(&square(), &[diag.clone()]).unwrap();
        assert!(point_in_convex(&square(), &p));
        assert!(!point_on_segment(&diag[0], &diag[1], &p));
    }
}
