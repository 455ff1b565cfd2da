//! Certified colorful Carathéodory solvers: the classic swap descent for
//! finite colors, and the crosspolytope parity descent for connected
//! (k-convex) colors.
//!
//! Both solvers drive the exact squared distance from the hull of the
//! current representatives to the target strictly downward, so termination
//! and certificate soundness are checked, not hoped for.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::compactum::Compactum;
use crate::error::{GeometryError, Result};
use crate::hull::{hull_membership, Membership};
use crate::kconvexity::hyperplane_curve_intersection;
use crate::minnorm::{min_norm_point, MinNormResult};
use crate::point::{rat, rat_serde, ConvexCombination, Point, Rat};
use crate::simplex::{line_simplex_intersection, Hyperplane};

/// A target point together with colored sets whose hulls all contain it.
#[derive(Clone, Debug)]
pub struct ColorSystem {
    pub colors: Vec<Compactum>,
    pub dim: usize,
    pub target: Point,
}

impl ColorSystem {
    /// Validates the hull condition on every color's representation; a
    /// violation reports the separating functional.
    pub fn new(colors: Vec<Compactum>, target: Point) -> Result<Self> {
        if colors.is_empty() {
            return Err(GeometryError::EmptyInput("ColorSystem"));
        }
        let dim = target.dim();
        for (i, color) in colors.iter().enumerate() {
            if color.dim()? != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: color.dim()?,
                });
            }
            match hull_membership(&target, &color.generators())? {
                Membership::Member(_) => {}
                Membership::NonMember { normal, margin } => {
                    return Err(GeometryError::InvalidInput(format!(
                        "target outside hull of color {i}: separator {normal:?} with margin {margin}"
                    )));
                }
            }
        }
        Ok(ColorSystem { colors, dim, target })
    }

    /// Convenience constructor with the origin as target.
    pub fn with_origin(colors: Vec<Compactum>) -> Result<Self> {
        let dim = colors
            .first()
            .ok_or(GeometryError::EmptyInput("ColorSystem"))?
            .dim()?;
        ColorSystem::new(colors, Point::zero(dim))
    }
}

/// Where a representative sits on its color's representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum RepSource {
    Vertex { index: usize },
    #[serde(rename_all = "camelCase")]
    OnSegment {
        segment: usize,
        #[serde(with = "rat_serde")]
        t: Rat,
    },
}

fn locate_source(color: &Compactum, p: &Point) -> Result<RepSource> {
    match color {
        Compactum::Curve(c) => {
            if let Some(i) = c.waypoints.iter().position(|w| w == p) {
                return Ok(RepSource::Vertex { index: i });
            }
            let (segment, t) = c.locate(p).ok_or_else(|| {
                GeometryError::Internal("representative left its curve".into())
            })?;
            Ok(RepSource::OnSegment { segment, t })
        }
        _ => color
            .generators()
            .iter()
            .position(|g| g == p)
            .map(|index| RepSource::Vertex { index })
            .ok_or_else(|| {
                GeometryError::Internal("representative is not a generator of its color".into())
            }),
    }
}

/// One representative per color plus the exact min-norm data of their hull,
/// taken relative to the target (so `min_norm.point = z - target`).
#[derive(Clone, Debug)]
pub struct RepresentativeState {
    pub reps: Vec<Point>,
    pub min_norm: MinNormResult,
}

impl RepresentativeState {
    pub fn from_reps(target: &Point, reps: Vec<Point>) -> Result<Self> {
        let translated: Vec<Point> = reps.iter().map(|r| r.sub(target)).collect();
        let min_norm = min_norm_point(&translated)?;
        Ok(RepresentativeState { reps, min_norm })
    }

    pub fn squared_distance(&self) -> &Rat {
        &self.min_norm.squared_distance
    }
}

/// Exact certificate: one representative per color whose convex combination
/// reproduces the target.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ColorfulCertificate {
    pub reps: Vec<Point>,
    pub rep_sources: Vec<RepSource>,
    /// Weights over all colors (zero-weight colors carry weight 0 and are
    /// omitted from the support).
    pub weights: ConvexCombination,
    /// Strictly decreasing squared distances, one per outer iteration.
    #[serde(with = "crate::point::rat_vec_serde")]
    pub distance_trace: Vec<Rat>,
}

/// Re-derives every claim of a certificate against the system.
pub fn verify_colorful_certificate(
    system: &ColorSystem,
    cert: &ColorfulCertificate,
) -> Result<bool> {
    if cert.reps.len() != system.colors.len() || cert.rep_sources.len() != cert.reps.len() {
        return Ok(false);
    }
    for (rep, color) in cert.reps.iter().zip(&system.colors) {
        if !color.contains_exact(rep)? {
            return Ok(false);
        }
    }
    if cert.weights.validate().is_err() {
        return Ok(false);
    }
    Ok(cert.weights.evaluate(&cert.reps) == system.target)
}

fn finish(
    system: &ColorSystem,
    state: &RepresentativeState,
    trace: Vec<Rat>,
) -> Result<ColorfulCertificate> {
    let mut weights = vec![Rat::zero(); state.reps.len()];
    for (pos, &i) in state.min_norm.support.indices.iter().enumerate() {
        weights[i] = state.min_norm.support.weights[pos].clone();
    }
    let comb = ConvexCombination::new(
        state.min_norm.support.indices.clone(),
        state.min_norm.support.weights.clone(),
    )?;
    debug_assert_eq!(comb.evaluate(&state.reps), system.target);
    let rep_sources = state
        .reps
        .iter()
        .zip(&system.colors)
        .map(|(r, c)| locate_source(c, r))
        .collect::<Result<_>>()?;
    Ok(ColorfulCertificate {
        reps: state.reps.clone(),
        rep_sources,
        weights: comb,
        distance_trace: trace,
    })
}

/// Lowest-index color absent from the min-norm support.
fn zero_weight_color(state: &RepresentativeState) -> Option<usize> {
    (0..state.reps.len()).find(|i| !state.min_norm.support.indices.contains(i))
}

/// Replaces the representative of `color` by the generator minimizing
/// `<x - target, z - target>`. The minimum is nonpositive because the
/// target lies in the color's hull, while every current support point
/// scores at least `|z - target|^2 > 0`, so the descent is strict.
fn swap_step(
    system: &ColorSystem,
    state: &RepresentativeState,
    color: usize,
) -> Result<RepresentativeState> {
    let z = &state.min_norm.point; // already target-relative
    let gens = system.colors[color].generators();
    let best = gens
        .iter()
        .min_by(|a, b| a.sub(&system.target).dot(z).cmp(&b.sub(&system.target).dot(z)))
        .ok_or(GeometryError::EmptyInput("swap_step"))?
        .clone();
    debug_assert!(!best.sub(&system.target).dot(z).is_positive());
    let mut reps = state.reps.clone();
    reps[color] = best;
    let next = RepresentativeState::from_reps(&system.target, reps)?;
    if next.squared_distance() >= state.squared_distance() {
        return Err(GeometryError::Internal(
            "zero-coefficient swap failed to decrease the distance".into(),
        ));
    }
    Ok(next)
}

/// Colorful Carathéodory for finite colors: with `n+1` colors in `R^n`
/// whose hulls all contain the target, produces one representative per
/// color whose hull contains it too. Pure swap descent; the exact strict
/// decrease bounds the iteration count by the number of representative
/// systems.
pub fn colorful_caratheodory(system: &ColorSystem) -> Result<ColorfulCertificate> {
    if system.colors.len() != system.dim + 1 {
        return Err(GeometryError::InvalidInput(format!(
            "expected {} colors in dimension {}, got {}",
            system.dim + 1,
            system.dim,
            system.colors.len()
        )));
    }
    let init: Vec<Point> = system
        .colors
        .iter()
        .map(|c| {
            c.generators()
                .into_iter()
                .min_by(|a, b| a.dist_sq(&system.target).cmp(&b.dist_sq(&system.target)))
                .ok_or(GeometryError::EmptyInput("colorful_caratheodory"))
        })
        .collect::<Result<_>>()?;
    let mut state = RepresentativeState::from_reps(&system.target, init)?;
    let budget = 16 + system
        .colors
        .iter()
        .map(|c| c.generators().len())
        .product::<usize>();
    let mut trace = Vec::new();
    for _ in 0..budget {
        trace.push(state.squared_distance().clone());
        if state.squared_distance().is_zero() {
            return finish(system, &state, trace);
        }
        // Distance positive forces the optimum onto a proper face, so some
        // color is missing from the corral.
        let color = zero_weight_color(&state).ok_or_else(|| {
            GeometryError::Internal(
                "positive distance with full-support corral in swap descent".into(),
            )
        })?;
        state = swap_step(system, &state, color)?;
    }
    Err(GeometryError::IterationBudget {
        iterations: budget,
        detail: "colorful swap descent did not converge".into(),
    })
}

/// One parity-descent step: enumerates the `2^{k+1}` facets of the
/// crosspolytope join `{x_1,y_1}*...*{x_{k+1},y_{k+1}}`, intersects each
/// with the line through the target and `z`, and adopts the facet whose
/// intersection lands closest to the target, strictly before `z`.
///
/// Degenerate facets are skipped; if no facet improves, the error carries
/// the intersection table for the caller's perturbation policy.
pub fn parity_descent_step(
    target: &Point,
    state: &RepresentativeState,
    y_reps: &[Point],
) -> Result<RepresentativeState> {
    let k1 = state.reps.len();
    if y_reps.len() != k1 {
        return Err(GeometryError::DimensionMismatch {
            expected: k1,
            got: y_reps.len(),
        });
    }
    if state.squared_distance().is_zero() {
        return Err(GeometryError::InvalidInput(
            "parity descent requires positive distance".into(),
        ));
    }
    if state.min_norm.support.support_size() != k1 {
        return Err(GeometryError::InvalidInput(
            "parity descent requires a full-support corral; apply the swap instead".into(),
        ));
    }
    let direction = &state.min_norm.point; // z - target, the line direction
    let one = Rat::from_integer(1.into());
    let mut best: Option<(Rat, usize)> = None;
    for mask in 0..(1usize << k1) {
        let facet: Vec<Point> = (0..k1)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    y_reps[i].clone()
                } else {
                    state.reps[i].clone()
                }
            })
            .collect();
        let hit = match line_simplex_intersection(target, direction, &facet) {
            Ok(h) => h,
            Err(GeometryError::DegenerateSimplex) => continue,
            Err(e) => return Err(e),
        };
        let Some((lo, hi)) = hit else { continue };
        // Smallest parameter in the intersection that lies in [0, 1).
        if hi.is_negative() || lo >= one {
            continue;
        }
        let t = if lo.is_negative() { Rat::zero() } else { lo };
        if best.as_ref().map_or(true, |(bt, _)| &t < bt) {
            best = Some((t, mask));
        }
    }
    let Some((_, mask)) = best else {
        return Err(GeometryError::ParityDegeneracy);
    };
    let reps: Vec<Point> = (0..k1)
        .map(|i| {
            if mask & (1 << i) != 0 {
                y_reps[i].clone()
            } else {
                state.reps[i].clone()
            }
        })
        .collect();
    let next = RepresentativeState::from_reps(target, reps)?;
    if next.squared_distance() >= state.squared_distance() {
        return Err(GeometryError::Internal(
            "parity descent step failed to decrease the distance".into(),
        ));
    }
    Ok(next)
}

/// Intersection points of each color with the flat through the target
/// parallel to `aff(reps)`. For `k = n-1` the flat is a hyperplane with
/// normal `z - target`, and connectivity of the curve guarantees a
/// crossing; `nudge` shifts each crossing along its segment for the
/// perturbation retry.
fn curve_y_reps(
    system: &ColorSystem,
    state: &RepresentativeState,
    nudge: Option<&Rat>,
) -> Result<Vec<Point>> {
    let normal = state.min_norm.point.clone();
    let h = Hyperplane::new(normal.clone(), normal.dot(&system.target))?;
    system
        .colors
        .iter()
        .enumerate()
        .map(|(i, color)| {
            let Compactum::Curve(curve) = color else {
                return Err(GeometryError::Capability(format!(
                    "color {i} is not a curve; general-k colors need a flat oracle"
                )));
            };
            let y = hyperplane_curve_intersection(curve, &h).ok_or_else(|| {
                GeometryError::Internal(format!(
                    "color {i} misses the target hyperplane despite containing \
                     the target in its hull"
                ))
            })?;
            let Some(eps) = nudge else { return Ok(y) };
            // Exact symbolic perturbation: slide along the containing
            // segment by eps, staying on the curve.
            let Some((seg, t)) = curve.locate(&y) else {
                return Ok(y);
            };
            let one = Rat::from_integer(1.into());
            let t2 = if &t + eps <= one { &t + eps } else { &t - eps };
            Ok(curve.point_at(seg, &t2))
        })
        .collect()
}

/// Exact finishing move for curve colors: the join of one segment per
/// color is the hull of the segments' endpoints (segments are convex), so
/// membership of the target in the curve join reduces to finitely many
/// hull checks. Endpoint weights regroup into one on-segment point per
/// color. The parity descent converges geometrically but need not reach
/// zero in finitely many steps; this enumeration guarantees termination.
fn join_enumeration_certificate(
    system: &ColorSystem,
    mut trace: Vec<Rat>,
) -> Result<ColorfulCertificate> {
    let segments: Vec<Vec<(Point, Point)>> = system
        .colors
        .iter()
        .map(|color| {
            let Compactum::Curve(curve) = color else {
                return Err(GeometryError::Capability(
                    "join enumeration needs curve colors".into(),
                ));
            };
            Ok(if curve.waypoints.len() == 1 {
                vec![(curve.waypoints[0].clone(), curve.waypoints[0].clone())]
            } else {
                curve
                    .segments()
                    .map(|(a, b)| (a.clone(), b.clone()))
                    .collect()
            })
        })
        .collect::<Result<_>>()?;
    for combo in segments.iter().multi_cartesian_product() {
        let endpoints: Vec<Point> = combo
            .iter()
            .flat_map(|(u, v)| [u.clone(), v.clone()])
            .collect();
        let Membership::Member(comb) = hull_membership(&system.target, &endpoints)? else {
            continue;
        };
        let mut w = vec![Rat::zero(); endpoints.len()];
        for (&i, wi) in comb.indices.iter().zip(&comb.weights) {
            w[i] = wi.clone();
        }
        let mut reps = Vec::new();
        let mut color_weights = Vec::new();
        for (i, (u, v)) in combo.iter().enumerate() {
            let lambda = &w[2 * i] + &w[2 * i + 1];
            if lambda.is_zero() {
                reps.push(u.clone());
            } else {
                let rep = u
                    .scale(&(&w[2 * i] / &lambda))
                    .add(&v.scale(&(&w[2 * i + 1] / &lambda)));
                reps.push(rep);
            }
            color_weights.push(lambda);
        }
        let weights = ConvexCombination::from_weights(&color_weights)?;
        debug_assert_eq!(weights.evaluate(&reps), system.target);
        let rep_sources = reps
            .iter()
            .zip(&system.colors)
            .map(|(r, c)| locate_source(c, r))
            .collect::<Result<_>>()?;
        trace.push(Rat::zero());
        return Ok(ColorfulCertificate {
            reps,
            rep_sources,
            weights,
            distance_trace: trace,
        });
    }
    Err(GeometryError::Internal(
        "no segment combination contains the target despite valid hull \
         preconditions"
            .into(),
    ))
}

/// k-convex colorful Carathéodory: `k+1` colors in `R^n`, each an
/// `(n-k)`-convex compactum whose hull contains the target. Dispatches to
/// the finite solver at `k = n`, to exact membership at `k = 0`, and runs
/// the hyperplane parity descent at `k = n-1` (curves) or via flat oracles
/// otherwise.
pub fn kconv_colorful(system: &ColorSystem, k: usize) -> Result<ColorfulCertificate> {
    let n = system.dim;
    if system.colors.len() != k + 1 {
        return Err(GeometryError::InvalidInput(format!(
            "expected {} colors for k={k}, got {}",
            k + 1,
            system.colors.len()
        )));
    }
    if k == 0 {
        // A 0-dimensional join point: the target must lie on the color.
        let color = &system.colors[0];
        if !color.contains_exact(&system.target)? {
            return Err(GeometryError::InvalidInput(
                "k=0 requires the target to lie on the color itself".into(),
            ));
        }
        return Ok(ColorfulCertificate {
            reps: vec![system.target.clone()],
            rep_sources: vec![locate_source(color, &system.target)?],
            weights: ConvexCombination::singleton(0),
            distance_trace: vec![Rat::zero()],
        });
    }
    if k == n {
        return colorful_caratheodory(system);
    }
    if k != n - 1 {
        return Err(GeometryError::Capability(format!(
            "k={k} in dimension {n} needs flat-intersection oracles; only k in {{0, n-1, n}} \
             is supported on finite representations"
        )));
    }

    let init: Vec<Point> = system
        .colors
        .iter()
        .map(|c| {
            c.generators()
                .into_iter()
                .min_by(|a, b| a.dist_sq(&system.target).cmp(&b.dist_sq(&system.target)))
                .ok_or(GeometryError::EmptyInput("kconv_colorful"))
        })
        .collect::<Result<_>>()?;
    let mut state = RepresentativeState::from_reps(&system.target, init)?;
    // The descent usually lands in a couple of steps; when it only
    // converges in the limit (each parity step also compounds coefficient
    // sizes), the exact join enumeration takes over.
    let budget = 8 * (k + 2);
    let max_parity_steps = 4;
    let mut parity_steps = 0;
    let mut trace = Vec::new();
    for _ in 0..budget {
        trace.push(state.squared_distance().clone());
        if state.squared_distance().is_zero() {
            return finish(system, &state, trace);
        }
        if let Some(color) = zero_weight_color(&state) {
            state = swap_step(system, &state, color)?;
            continue;
        }
        if parity_steps == max_parity_steps {
            return join_enumeration_certificate(system, trace);
        }
        parity_steps += 1;
        let y = curve_y_reps(system, &state, None)?;
        state = match parity_descent_step(&system.target, &state, &y) {
            Ok(next) => next,
            Err(GeometryError::ParityDegeneracy) => {
                let y = curve_y_reps(system, &state, Some(&rat(1, 1024)))?;
                match parity_descent_step(&system.target, &state, &y) {
                    Ok(next) => next,
                    Err(GeometryError::ParityDegeneracy) => {
                        return join_enumeration_certificate(system, trace)
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(e) => return Err(e),
        };
    }
    join_enumeration_certificate(system, trace)
}

/// Brute-force oracle: does some choice of one generator per color put the
/// target in the hull of the chosen points? Intended for small instances.
pub fn colorful_exists_brute_force(system: &ColorSystem) -> Result<bool> {
    let gens: Vec<Vec<Point>> = system.colors.iter().map(|c| c.generators()).collect();
    for choice in gens.iter().multi_cartesian_product() {
        let pts: Vec<Point> = choice.into_iter().cloned().collect();
        if hull_membership(&system.target, &pts)?.is_member() {
            return Ok(true);
        }
    }
    Ok(false)
}
