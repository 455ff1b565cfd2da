//! On-disk spec and instance formats.

use cara_core::compactum::Compactum;
use cara_core::kappa::Family;
use cara_core::point::Point;
use cara_core::tverberg::KappaChoice;
use serde::{Deserialize, Serialize};

/// What to generate; all randomness comes from the command-line seed.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
pub enum GeneratorSpec {
    #[serde(rename_all = "camelCase")]
    RandomPoints { n: usize, count: usize, range: i64 },
    #[serde(rename_all = "camelCase")]
    MomentCurve {
        n: usize,
        count: usize,
        #[serde(default = "default_range")]
        range: i64,
    },
    #[serde(rename_all = "camelCase")]
    VeroneseSphere {
        n: usize,
        count: usize,
        #[serde(default = "default_density")]
        density: i64,
    },
    #[serde(rename_all = "camelCase")]
    PolytopeSkeleton {
        polytope: PolytopeKind,
        n: usize,
        k: usize,
    },
    #[serde(rename_all = "camelCase")]
    PlLoop { count: usize },
    #[serde(rename_all = "camelCase")]
    SingletonFamily { n: usize, count: usize, range: i64 },
    #[serde(rename_all = "camelCase")]
    EdgeFamily {},
}

fn default_range() -> i64 {
    3
}

fn default_density() -> i64 {
    6
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PolytopeKind {
    Crosspolytope,
    Simplex,
}

/// One experiment: a task plus its instance file and parameters.
/// (`deny_unknown_fields` does not combine with `flatten`, so unknown keys
/// are tolerated here.)
#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Experiment {
    pub id: String,
    #[serde(flatten)]
    pub task: Task,
    pub input_path: String,
}

/// Batch spec: either a single experiment or a list.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RunSpec {
    Batch { experiments: Vec<Experiment> },
    Single(Experiment),
}

impl RunSpec {
    pub fn experiments(self) -> Vec<Experiment> {
        match self {
            RunSpec::Batch { experiments } => experiments,
            RunSpec::Single(e) => vec![e],
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "task", rename_all = "camelCase")]
pub enum Task {
    #[serde(rename_all = "camelCase")]
    Convm { m: usize },
    KappaPointset {},
    KappaFamily {},
    #[serde(rename_all = "camelCase")]
    KconvCheck {
        k: usize,
        #[serde(default = "default_trials")]
        trials: usize,
        #[serde(default = "default_trials")]
        samples_per_trial: usize,
        #[serde(default = "default_tol")]
        tol: f64,
    },
    Colorful {},
    #[serde(rename_all = "camelCase")]
    KconvColorful { k: usize },
    #[serde(rename_all = "camelCase")]
    AvoidFlat { k: usize },
    Tverberg {},
    #[serde(rename_all = "camelCase")]
    SarkariaCheck { r: usize },
}

fn default_trials() -> usize {
    16
}

fn default_tol() -> f64 {
    1e-6
}

/// A compactum plus a query point, for membership-style tasks.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryInstance {
    pub set: Compactum,
    pub point: Point,
}

/// Colored sets with a target, for the colorful solvers.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ColorfulInstance {
    pub colors: Vec<Compactum>,
    pub target: Point,
}

/// Obstacle sets and a base point, for the avoiding-flat search.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AvoidFlatInstance {
    pub point: Point,
    pub sets: Vec<Compactum>,
}

/// A family with Tverberg parameters.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TverbergInstance {
    pub family: Family,
    pub r: usize,
    pub kappa: KappaChoice,
}

/// Render spec: instance file plus optional certificate.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RenderSpec {
    pub instance_path: String,
    #[serde(default)]
    pub certificate_path: Option<String>,
}

/// Verify spec: instance file plus certificate and its kind.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum VerifySpec {
    #[serde(rename_all = "camelCase")]
    Tverberg {
        instance_path: String,
        certificate_path: String,
    },
    #[serde(rename_all = "camelCase")]
    Colorful {
        instance_path: String,
        certificate_path: String,
    },
}
