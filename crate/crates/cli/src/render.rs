//! Deterministic SVG rendering for planar instances.
//!
//! Output is byte-identical across runs: coordinates are printed with a fixed
//! precision, colors come from a fixed palette, and nothing depends on time,
//! environment, or hash ordering.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use cara_core::colorful::ColorfulCertificate;
use cara_core::compactum::Compactum;
use cara_core::kappa::VPolytope;
use cara_core::point::Point;
use cara_core::tverberg::TverbergCertificate;

use crate::commands::{load_instance, require_planar, Instance};
use crate::spec::RenderSpec;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 40.0;
const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#bcbd22",
];

struct Frame {
    min_x: f64,
    min_y: f64,
    scale: f64,
}

impl Frame {
    fn fit(points: &[Point]) -> Frame {
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for p in points {
            let c = p.to_f64();
            min_x = min_x.min(c[0]);
            max_x = max_x.max(c[0]);
            min_y = min_y.min(c[1]);
            max_y = max_y.max(c[1]);
        }
        let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
        Frame {
            min_x,
            min_y,
            scale: (WIDTH - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let c = p.to_f64();
        (
            MARGIN + (c[0] - self.min_x) * self.scale,
            // Flip y so the picture matches the usual orientation.
            HEIGHT - MARGIN - (c[1] - self.min_y) * self.scale,
        )
    }
}

fn fmt(v: f64) -> String {
    // Fixed precision keeps the output byte-stable; avoid "-0.00".
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn circle(out: &mut String, frame: &Frame, p: &Point, r: f64, fill: &str) {
    let (x, y) = frame.map(p);
    out.push_str(&format!(
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>\n",
        fmt(x),
        fmt(y),
        fmt(r)
    ));
}

fn polyline(out: &mut String, frame: &Frame, pts: &[&Point], stroke: &str, close: bool, fill: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = frame.map(p);
            format!("{},{}", fmt(x), fmt(y))
        })
        .collect();
    let tag = if close { "polygon" } else { "polyline" };
    out.push_str(&format!(
        "<{tag} points=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>\n",
        coords.join(" ")
    ));
}

/// Planar convex hull in counterclockwise order (monotone chain, exact).
fn hull_2d(pts: &[Point]) -> Vec<Point> {
    let mut sorted: Vec<Point> = pts.to_vec();
    sorted.sort_by(|a, b| a.coord(0).cmp(b.coord(0)).then(a.coord(1).cmp(b.coord(1))));
    sorted.dedup();
    if sorted.len() <= 2 {
        return sorted;
    }
    let cross = |o: &Point, a: &Point, b: &Point| {
        let oa = a.sub(o);
        let ob = b.sub(o);
        oa.coord(0) * ob.coord(1) - oa.coord(1) * ob.coord(0)
    };
    let zero = cara_core::point::rat_int(0);
    let build = |iter: Box<dyn Iterator<Item = &Point> + '_>| {
        let mut chain: Vec<Point> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && cross(&chain[chain.len() - 2], &chain[chain.len() - 1], p) <= zero
            {
                chain.pop();
            }
            chain.push(p.clone());
        }
        chain
    };
    let mut lower = build(Box::new(sorted.iter()));
    let mut upper = build(Box::new(sorted.iter().rev()));
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    lower
}

fn draw_polytope(out: &mut String, frame: &Frame, m: &VPolytope, color: &str) {
    match m.vertices.len() {
        1 => circle(out, frame, &m.vertices[0], 4.0, color),
        2 => {
            let refs: Vec<&Point> = m.vertices.iter().collect();
            polyline(out, frame, &refs, color, false, "none");
        }
        _ => {
            let hull = hull_2d(&m.vertices);
            let refs: Vec<&Point> = hull.iter().collect();
            polyline(out, frame, &refs, color, true, "none");
        }
    }
}

fn draw_compactum(out: &mut String, frame: &Frame, set: &Compactum, color: &str) {
    match set {
        Compactum::PointCloud(pts) => {
            let hull = hull_2d(pts);
            if hull.len() >= 3 {
                let refs: Vec<&Point> = hull.iter().collect();
                polyline(out, frame, &refs, "#aaaaaa", true, "none");
            }
            for p in pts {
                circle(out, frame, p, 3.0, color);
            }
        }
        Compactum::Curve(c) => {
            let refs: Vec<&Point> = c.waypoints.iter().collect();
            polyline(out, frame, &refs, color, false, "none");
        }
        Compactum::PolytopeUnion(u) => {
            for m in u {
                draw_polytope(out, frame, m, color);
            }
        }
        Compactum::Oracle(_) => {}
    }
}

pub fn render(spec_path: &Path, out_path: &Path) -> Result<bool> {
    let text =
        fs::read_to_string(spec_path).with_context(|| format!("reading {}", spec_path.display()))?;
    let spec: RenderSpec =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", spec_path.display()))?;
    let base = spec_path.parent().unwrap_or(Path::new("."));
    let instance = load_instance(&base.join(&spec.instance_path))?;

    let all_points: Vec<Point> = match &instance {
        Instance::Family(f) => f.union_vertices(&(0..f.len()).collect::<Vec<_>>()),
        Instance::Set(c) => c.generators(),
    };
    let dim = all_points.first().map_or(0, |p| p.dim());
    require_planar(dim)?;
    let frame = Frame::fit(&all_points);

    let mut body = String::new();
    match &instance {
        Instance::Family(family) => {
            // With a Tverberg certificate, color members by part and mark the
            // witness; otherwise cycle the palette per member.
            let mut part_of: Vec<Option<usize>> = vec![None; family.len()];
            let mut witness = None;
            if let Some(cert_rel) = &spec.certificate_path {
                let cert_text = fs::read_to_string(base.join(cert_rel))
                    .with_context(|| format!("reading {cert_rel}"))?;
                let cert: TverbergCertificate = serde_json::from_str(&cert_text)
                    .with_context(|| format!("parsing {cert_rel}"))?;
                for (part, members) in cert.partition.iter().enumerate() {
                    for &m in members {
                        part_of[m] = Some(part);
                    }
                }
                witness = Some(cert.witness);
            }
            for (i, member) in family.members.iter().enumerate() {
                let color = PALETTE[part_of[i].unwrap_or(i) % PALETTE.len()];
                draw_polytope(&mut body, &frame, member, color);
            }
            if let Some(w) = witness {
                circle(&mut body, &frame, &w, 6.0, "#000000");
                circle(&mut body, &frame, &w, 3.0, "#ffffff");
            }
        }
        Instance::Set(set) => {
            draw_compactum(&mut body, &frame, set, PALETTE[0]);
            if let Some(cert_rel) = &spec.certificate_path {
                let cert_text = fs::read_to_string(base.join(cert_rel))
                    .with_context(|| format!("reading {cert_rel}"))?;
                let cert: ColorfulCertificate = serde_json::from_str(&cert_text)
                    .with_context(|| format!("parsing {cert_rel}"))?;
                for (i, rep) in cert.reps.iter().enumerate() {
                    circle(&mut body, &frame, rep, 4.0, PALETTE[(i + 1) % PALETTE.len()]);
                }
            }
        }
    }

    let svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n{body}</svg>\n"
    );
    if let Some(parent) = out_path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(out_path, svg).with_context(|| format!("writing {}", out_path.display()))?;
    println!("{}", out_path.display());
    Ok(true)
}
