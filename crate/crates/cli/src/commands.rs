//! Generate, run, and verify subcommands.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use cara_core::colorful::{
    colorful_caratheodory, kconv_colorful, verify_colorful_certificate, ColorSystem,
    ColorfulCertificate,
};
use cara_core::compactum::Compactum;
use cara_core::generate as gen;
use cara_core::hull::convm_membership;
use cara_core::kappa::{
    caratheodory_number_pointset, family_caratheodory_number, Family, KappaConfig,
};
use cara_core::kconvexity::{
    check_k_convexity, find_avoiding_flat, FlatSearchBudget, FlatSearchOutcome, KConvexityVerdict,
};
use cara_core::tverberg::{
    lift, sarkaria_equiv_check, tverberg_partition, verify_certificate, LiftedPoint,
    TverbergCertificate,
};
use itertools::Itertools;
use serde_json::json;

use crate::spec::{
    AvoidFlatInstance, ColorfulInstance, Experiment, GeneratorSpec, PolytopeKind, QueryInstance,
    RunSpec, Task, TverbergInstance, VerifySpec,
};

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, serde_json::to_string_pretty(value)?)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Soft time budget from `CARA_BUDGET_MS`; `None` means unbounded.
fn soft_budget_ms() -> Option<u128> {
    std::env::var("CARA_BUDGET_MS").ok()?.parse().ok()
}

pub fn generate(spec_path: &Path, seed: u64, out: &Path) -> Result<bool> {
    let spec: GeneratorSpec = read_json(spec_path)?;
    fs::create_dir_all(out)?;
    let target = out.join("instance.json");
    match spec {
        GeneratorSpec::RandomPoints { n, count, range } => {
            let pts = gen::random_points(n, count, range, seed);
            write_json(&target, &Compactum::PointCloud(pts))?;
        }
        GeneratorSpec::MomentCurve { n, count, range } => {
            let ts = gen::rational_grid(-range, range, count);
            let pts = gen::moment_curve(n, &ts)?;
            write_json(&target, &Compactum::PointCloud(pts))?;
        }
        GeneratorSpec::VeroneseSphere { n, count, density } => {
            let pts = gen::veronese_sphere(n, count, density, seed)?;
            write_json(&target, &Compactum::PointCloud(pts))?;
        }
        GeneratorSpec::PolytopeSkeleton { polytope, n, k } => {
            let kind = match polytope {
                PolytopeKind::Crosspolytope => gen::SkeletonKind::Crosspolytope,
                PolytopeKind::Simplex => gen::SkeletonKind::Simplex,
            };
            let faces = gen::polytope_skeleton(kind, n, k)?;
            write_json(&target, &Compactum::PolytopeUnion(faces))?;
        }
        GeneratorSpec::PlLoop { count } => {
            let curve = gen::pl_loop(count, seed)?;
            write_json(&target, &Compactum::Curve(curve))?;
        }
        GeneratorSpec::SingletonFamily { n, count, range } => {
            let family = gen::singleton_family(n, count, range, seed)?;
            write_json(&target, &family)?;
        }
        GeneratorSpec::EdgeFamily {} => {
            let family = gen::edge_family(seed)?;
            write_json(&target, &family)?;
        }
    }
    println!("{}", target.display());
    Ok(true)
}

struct Row {
    id: String,
    task: &'static str,
    result: String,
    certificate: String,
    iterations: usize,
    wall_ms: u128,
    valid: bool,
}

pub fn run(spec_path: &Path, seed: u64, out: &Path) -> Result<bool> {
    let spec: RunSpec = read_json(spec_path)?;
    let base = spec_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    fs::create_dir_all(out)?;
    let budget = soft_budget_ms();
    let started = Instant::now();
    let mut rows = Vec::new();
    let mut all_valid = true;
    for exp in spec.experiments() {
        if let Some(limit) = budget {
            if started.elapsed().as_millis() > limit {
                rows.push(Row {
                    id: exp.id.clone(),
                    task: task_name(&exp.task),
                    result: "skipped=budget".into(),
                    certificate: String::new(),
                    iterations: 0,
                    wall_ms: 0,
                    valid: false,
                });
                all_valid = false;
                continue;
            }
        }
        let clock = Instant::now();
        let row = run_experiment(&exp, &base, seed, out);
        let mut row = match row {
            Ok(r) => r,
            Err(e) => Row {
                id: exp.id.clone(),
                task: task_name(&exp.task),
                result: format!("error={}", first_line(&format!("{e:#}"))),
                certificate: String::new(),
                iterations: 0,
                wall_ms: 0,
                valid: false,
            },
        };
        row.wall_ms = clock.elapsed().as_millis();
        all_valid &= row.valid;
        rows.push(row);
    }
    let mut csv = String::from("instance,task,result,certificate,iterations,wall_ms\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.id, r.task, r.result, r.certificate, r.iterations, r.wall_ms
        ));
    }
    let report = out.join("report.csv");
    fs::write(&report, csv)?;
    println!("{}", report.display());
    Ok(all_valid)
}

fn task_name(task: &Task) -> &'static str {
    match task {
        Task::Convm { .. } => "convm",
        Task::KappaPointset {} => "kappaPointset",
        Task::KappaFamily {} => "kappaFamily",
        Task::KconvCheck { .. } => "kconvCheck",
        Task::Colorful {} => "colorful",
        Task::KconvColorful { .. } => "kconvColorful",
        Task::AvoidFlat { .. } => "avoidFlat",
        Task::Tverberg {} => "tverberg",
        Task::SarkariaCheck { .. } => "sarkariaCheck",
    }
}

fn first_line(s: &str) -> String {
    s.lines().next().unwrap_or("").replace(',', ";")
}

fn run_experiment(exp: &Experiment, base: &Path, seed: u64, out: &Path) -> Result<Row> {
    let input = base.join(&exp.input_path);
    let cert_path = |suffix: &str| -> PathBuf { out.join(format!("{}.{suffix}.json", exp.id)) };
    let mut row = Row {
        id: exp.id.clone(),
        task: task_name(&exp.task),
        result: String::new(),
        certificate: String::new(),
        iterations: 0,
        wall_ms: 0,
        valid: false,
    };
    match &exp.task {
        Task::Convm { m } => {
            let q: QueryInstance = read_json(&input)?;
            let verdict = convm_membership(&q.point, &q.set.generators(), *m)?;
            let member = verdict.is_member();
            let path = cert_path("convm");
            write_json(&path, &json!({ "m": m, "member": member }))?;
            row.result = format!("member={member}");
            row.certificate = path.display().to_string();
            row.valid = true;
        }
        Task::KappaPointset {} => {
            let set: Compactum = read_json(&input)?;
            let bound = caratheodory_number_pointset(&set.generators(), &KappaConfig::default())?;
            row.result = format!(
                "lower={};upper={};exact={}",
                bound.lower,
                bound.upper.map_or("?".into(), |u| u.to_string()),
                bound.upper_exact
            );
            row.valid = true;
        }
        Task::KappaFamily {} => {
            let family: Family = read_json(&input)?;
            let bound = family_caratheodory_number(&family, &KappaConfig::default())?;
            row.result = format!(
                "lower={};upper={};exact={}",
                bound.lower,
                bound.upper.map_or("?".into(), |u| u.to_string()),
                bound.upper_exact
            );
            row.valid = true;
        }
        Task::KconvCheck {
            k,
            trials,
            samples_per_trial,
            tol,
        } => {
            let set: Compactum = read_json(&input)?;
            let verdict = check_k_convexity(&set, *k, *trials, *samples_per_trial, *tol, seed)?;
            row.result = match &verdict {
                KConvexityVerdict::Counterexample { distance_sq, .. } => {
                    format!("counterexample=true;distanceSq={distance_sq}")
                }
                KConvexityVerdict::NoCounterexampleFound { trials } => {
                    format!("counterexample=false;trials={trials}")
                }
            };
            row.valid = true;
        }
        Task::Colorful {} => {
            let inst: ColorfulInstance = read_json(&input)?;
            let system = ColorSystem::new(inst.colors, inst.target)?;
            let cert = colorful_caratheodory(&system)?;
            row.valid = verify_colorful_certificate(&system, &cert)?;
            row.iterations = cert.distance_trace.len();
            let path = cert_path("colorful");
            write_json(&path, &cert)?;
            row.certificate = path.display().to_string();
            row.result = format!("valid={}", row.valid);
        }
        Task::KconvColorful { k } => {
            let inst: ColorfulInstance = read_json(&input)?;
            let system = ColorSystem::new(inst.colors, inst.target)?;
            let cert = kconv_colorful(&system, *k)?;
            row.valid = verify_colorful_certificate(&system, &cert)?;
            row.iterations = cert.distance_trace.len();
            let path = cert_path("kconvColorful");
            write_json(&path, &cert)?;
            row.certificate = path.display().to_string();
            row.result = format!("valid={}", row.valid);
        }
        Task::AvoidFlat { k } => {
            let inst: AvoidFlatInstance = read_json(&input)?;
            let budget = FlatSearchBudget {
                seed,
                ..Default::default()
            };
            let search = find_avoiding_flat(&inst.point, &inst.sets, *k, &budget)?;
            match search.outcome {
                FlatSearchOutcome::Found(cert) => {
                    row.valid =
                        cara_core::kconvexity::verify_flat_certificate(&cert, &inst.sets)?;
                    let path = cert_path("avoidFlat");
                    write_json(
                        &path,
                        &json!({
                            "base": cert.base,
                            "directions": cert.directions,
                            "clearanceSq": cara_core::point::rat_to_string(&cert.clearance_sq),
                        }),
                    )?;
                    row.certificate = path.display().to_string();
                    row.result = format!("found=true;valid={}", row.valid);
                }
                FlatSearchOutcome::Exhausted { attempts } => {
                    row.result = format!("found=false;attempts={attempts}");
                }
            }
        }
        Task::Tverberg {} => {
            let inst: TverbergInstance = read_json(&input)?;
            let cert = tverberg_partition(&inst.family, inst.r, inst.kappa)?;
            row.valid = verify_certificate(&inst.family, &cert)?;
            row.iterations = cert.iterations;
            let path = cert_path("tverberg");
            write_json(&path, &cert)?;
            row.certificate = path.display().to_string();
            row.result = format!("valid={}", row.valid);
        }
        Task::SarkariaCheck { r } => {
            let family: Family = read_json(&input)?;
            let l = lift(&family, *r)?;
            let mut cases = 0usize;
            let mut equivalent = 0usize;
            for reps in l.lifted_colors.iter().multi_cartesian_product() {
                let reps: Vec<LiftedPoint> = reps.into_iter().cloned().collect();
                let (lhs, rhs) = sarkaria_equiv_check(&l, &reps)?;
                cases += 1;
                if lhs == rhs {
                    equivalent += 1;
                }
            }
            row.result = format!("cases={cases};equivalent={equivalent}");
            row.valid = cases == equivalent;
        }
    }
    Ok(row)
}

pub fn verify(spec_path: &Path) -> Result<bool> {
    let spec: VerifySpec = read_json(spec_path)?;
    let base = spec_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let ok = match spec {
        VerifySpec::Tverberg {
            instance_path,
            certificate_path,
        } => {
            let inst: TverbergInstance = read_json(&base.join(instance_path))?;
            let cert: TverbergCertificate = read_json(&base.join(certificate_path))?;
            if cert.r != inst.r {
                bail!("certificate r={} does not match instance r={}", cert.r, inst.r);
            }
            verify_certificate(&inst.family, &cert)?
        }
        VerifySpec::Colorful {
            instance_path,
            certificate_path,
        } => {
            let inst: ColorfulInstance = read_json(&base.join(instance_path))?;
            let system = ColorSystem::new(inst.colors, inst.target)?;
            let cert: ColorfulCertificate = read_json(&base.join(certificate_path))?;
            verify_colorful_certificate(&system, &cert)?
        }
    };
    println!("valid={ok}");
    Ok(ok)
}

// Shared by render: load either a family or a compactum from a file.
pub enum Instance {
    Family(Family),
    Set(Compactum),
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(t) = serde_json::from_str::<TverbergInstance>(&text) {
        return Ok(Instance::Family(t.family));
    }
    if let Ok(f) = serde_json::from_str::<Family>(&text) {
        return Ok(Instance::Family(f));
    }
    if let Ok(c) = serde_json::from_str::<Compactum>(&text) {
        return Ok(Instance::Set(c));
    }
    bail!("{} is neither a family nor a set instance", path.display());
}

/// Dimension-2 guard shared by rendering.
pub fn require_planar(dim: usize) -> Result<()> {
    if dim != 2 {
        bail!("rendering supports dimension 2 only, got {dim}");
    }
    Ok(())
}
