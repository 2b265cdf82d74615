use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use speclab::bounds::{SearchConfig, FEASIBILITY_TOL, GAMMA_W_TOL, RATIO_SLACK};
use speclab::campaign::{Suite, Tolerances};
use speclab::domain::DEFAULT_NODES;

#[derive(Parser, Debug)]
#[command(
    name = "speclab",
    version,
    about = "Spectral-set laboratory for small matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Suppress stage timings on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Numerical range polygon (CSV) and numerical radius.
    Range(RangeArgs),
    /// Extremal pair, main bound, measure fit and numerical-radius check.
    Analyze(AnalyzeArgs),
    /// Randomized verification campaign.
    Verify(VerifyArgs),
    /// Regression report for the two-disk example.
    #[command(name = "example-rs")]
    ExampleRs(ExampleArgs),
    /// Node-wise λ_min of the double-layer potential (CSV).
    Potential(PotentialArgs),
    /// Atomic measure fitted to a searched extremal vector (CSV).
    Measure(MeasureArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ProblemArgs {
    /// Matrix JSON `{"dim": n, "re": [[..]], "im": [[..]]}`.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Domain JSON (disk, union or ellipse).
    #[arg(long)]
    pub domain: PathBuf,
    /// Quadrature nodes per boundary component.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SearchArgs {
    /// Polynomial degree per component (default 2·dim).
    #[arg(long)]
    pub deg: Option<usize>,
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
    /// Nelder–Mead evaluations per real parameter.
    #[arg(long, default_value_t = 64)]
    pub evals_per_param: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative improvement below which the ascent stops.
    #[arg(long, default_value_t = 1e-13)]
    pub tol_search: f64,
    /// Orthogonality tolerance (default 1e-4·value⁴).
    #[arg(long)]
    pub tol_orth: Option<f64>,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        SearchConfig {
            deg: self.deg,
            starts: self.starts,
            evals_per_param: self.evals_per_param,
            seed: self.seed,
            tol: self.tol_search,
            orth_tol: self.tol_orth,
            ..SearchConfig::default()
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RangeArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Support angles sampled on [0, 2π).
    #[arg(long, default_value_t = 360)]
    pub angles: usize,
    /// CSV destination; the CSV goes to stdout and the radius to stderr
    /// when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Antilinear map: `cauchy`, `two-point` or a JSON file.
    #[arg(long, default_value = "cauchy")]
    pub phi: String,
    /// Random functions used for the ‖Φ‖ estimate.
    #[arg(long, default_value_t = 32)]
    pub phi_samples: usize,
    #[arg(long, default_value_t = speclab::bounds::DEFAULT_MOMENT_DEGREE)]
    pub moment_deg: usize,
    #[arg(long, default_value_t = FEASIBILITY_TOL)]
    pub tol_feasible: f64,
    #[arg(long, default_value_t = GAMMA_W_TOL)]
    pub tol_gamma_w: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    /// cp, oa, vn, compress or identities.
    pub suite: Suite,
    /// Polynomials per matrix (cp/oa/vn, default 200) or instances
    /// (compress/identities, default 100).
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub matrices: usize,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long, default_value_t = 8)]
    pub deg: usize,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Hypothesis margin of generated domains.
    #[arg(long, default_value_t = 0.05)]
    pub margin: f64,
    #[arg(long, default_value_t = RATIO_SLACK)]
    pub tol_ratio: f64,
    #[arg(long, default_value_t = Tolerances::default().compression)]
    pub tol_compress: f64,
    #[arg(long, default_value_t = Tolerances::default().exactness)]
    pub tol_exact: f64,
    #[arg(long, default_value_t = Tolerances::default().dlp_total)]
    pub tol_dlp: f64,
    #[arg(long, default_value_t = Tolerances::default().route_agreement)]
    pub tol_route: f64,
    #[arg(long, default_value_t = Tolerances::default().psd)]
    pub tol_psd: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExampleArgs {
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random polynomials for the identity checks.
    #[arg(long, default_value_t = 50)]
    pub functions: usize,
    /// Degree of the random polynomials.
    #[arg(long, default_value_t = 6)]
    pub deg: usize,
    /// Rotation angle applied to x₀ in the strict-maximum check.
    #[arg(long, default_value_t = 0.01)]
    pub perturbation: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value_t = speclab::bounds::DEFAULT_MOMENT_DEGREE)]
    pub moment_deg: usize,
    #[arg(long, default_value_t = FEASIBILITY_TOL)]
    pub tol_feasible: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
