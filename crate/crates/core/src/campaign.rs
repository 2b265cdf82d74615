//! Randomized verification campaigns over seeded instance families.
//!
//! Instance `j` of a campaign seeded with `s` draws from the ChaCha stream
//! `(s, j)`, so the worst case reported by any suite can be replayed alone.

use std::f64::consts::{PI, SQRT_2};
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{verify_inequality, BoundsError, VerifyConfig};
use crate::calculus::{
    poly_apply, poly_apply_vec, AntilinearMap, BoundaryFunction, CalculusContext,
};
use crate::domain::{AdmissibilityMode, Domain, DEFAULT_NODES};
use crate::linalg::{herm_min_eig, krylov_compress, op_norm, vec_norm, ComplexMatrix};
use crate::par;
use crate::random::{
    gaussian_matrix, gaussian_poly, gaussian_vector, matrix_with_norm, norm_disk, range_disk,
    range_ellipse, trial_rng,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Cp,
    Oa,
    Vn,
    Compress,
    Identities,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cp" => Ok(Self::Cp),
            "oa" => Ok(Self::Oa),
            "vn" => Ok(Self::Vn),
            "compress" => Ok(Self::Compress),
            "identities" => Ok(Self::Identities),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    /// Polynomials per matrix for the theorem suites, instances otherwise.
    pub trials: usize,
    /// Matrices per theorem suite.
    pub matrices: usize,
    pub dim: usize,
    pub deg: usize,
    pub nodes: usize,
    /// Hypothesis margin for generated domains.
    pub margin: f64,
    pub tol: Tolerances,
}

/// Pass thresholds of the campaign metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub ratio_slack: f64,
    pub compression: f64,
    pub exactness: f64,
    pub unitality: f64,
    pub multiplicativity: f64,
    pub dlp_total: f64,
    pub route_agreement: f64,
    pub hermiticity: f64,
    pub resolvent: f64,
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ratio_slack: crate::bounds::RATIO_SLACK,
            compression: 1e-9,
            exactness: 1e-9,
            unitality: 1e-10,
            multiplicativity: 1e-8,
            dlp_total: 1e-8,
            route_agreement: 1e-7,
            hermiticity: 1e-12,
            resolvent: crate::calculus::RESOLVENT_TOL,
            psd: crate::bounds::PSD_TOL,
        }
    }
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 200,
            matrices: 20,
            dim: 4,
            deg: 8,
            nodes: DEFAULT_NODES,
            margin: 0.05,
            tol: Tolerances::default(),
        }
    }
}

/// Worst value of one measured quantity across a campaign.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub worst: f64,
    pub tol: f64,
    /// Instance index attaining `worst`.
    pub worst_case: usize,
    pub cases: usize,
    pub passed: bool,
}

impl Metric {
    /// Collects `(case, value)` pairs; passes iff every value is `≤ tol`.
    fn at_most(name: &str, tol: f64, values: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut worst = f64::NEG_INFINITY;
        let mut worst_case = 0;
        let mut cases = 0;
        let mut nan = false;
        for (i, v) in values {
            cases += 1;
            nan |= !v.is_finite();
            if v > worst || !v.is_finite() {
                worst = v;
                worst_case = i;
            }
        }
        Self {
            name: name.to_string(),
            worst,
            tol,
            worst_case,
            cases,
            passed: !nan && worst <= tol,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub metrics: Vec<Metric>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: Suite, seed: u64, metrics: Vec<Metric>) -> Self {
        let passed = metrics.iter().all(|m| m.passed);
        Self {
            suite,
            seed,
            metrics,
            passed,
        }
    }

    pub fn metric(&self, name: &str) -> Option<&Metric> {
        self.metrics.iter().find(|m| m.name == name)
    }
}

/// Seed of the polynomial stream for matrix `j`.
fn poly_seed(seed: u64, j: usize) -> u64 {
    seed.wrapping_add((j as u64 + 1) << 32)
}

pub fn theorem_constant(suite: Suite) -> Option<f64> {
    match suite {
        Suite::Cp => Some(1.0 + SQRT_2),
        Suite::Oa => Some(2.0),
        Suite::Vn => Some(1.0),
        _ => None,
    }
}

/// Matrix and domain for instance `j` of a theorem suite.
pub fn theorem_instance(
    suite: Suite,
    cfg: &CampaignConfig,
    j: usize,
) -> Result<(ComplexMatrix, Domain, AdmissibilityMode), BoundsError> {
    let mut rng = trial_rng(cfg.seed, j as u64);
    Ok(match suite {
        Suite::Vn => {
            let m = matrix_with_norm(&mut rng, cfg.dim, 0.8)?;
            (
                m,
                Domain::disk(Complex64::new(0.0, 0.0), 1.0)?,
                AdmissibilityMode::NormCircle,
            )
        }
        Suite::Oa => {
            let m = gaussian_matrix(&mut rng, cfg.dim);
            let d = range_disk(&m, cfg.margin)?;
            (m, d, AdmissibilityMode::NumericalRange)
        }
        Suite::Cp => {
            let m = gaussian_matrix(&mut rng, cfg.dim);
            let d = range_ellipse(&mut rng, &m, cfg.margin)?;
            (m, d, AdmissibilityMode::NumericalRange)
        }
        _ => unreachable!("not a theorem suite"),
    })
}

/// Max of `‖p(M)‖/‖p‖_∂Ω` over `matrices × trials` random instances.
pub fn theorem_suite(suite: Suite, cfg: &CampaignConfig) -> Result<SuiteReport, BoundsError> {
    let kappa = theorem_constant(suite).expect("theorem suite");
    let mut ratios = Vec::with_capacity(cfg.matrices);
    let mut margins = Vec::with_capacity(cfg.matrices);
    for j in 0..cfg.matrices {
        let (m, dom, mode) = theorem_instance(suite, cfg, j)?;
        let vcfg = VerifyConfig {
            mode,
            kappa,
            trials: cfg.trials,
            deg: cfg.deg,
            seed: poly_seed(cfg.seed, j),
            nodes: cfg.nodes,
            slack: cfg.tol.ratio_slack,
        };
        let r = verify_inequality(&m, &dom, &vcfg)?;
        ratios.push((j, r.max_ratio));
        margins.push((j, -r.min_margin));
    }
    let ratio = Metric::at_most("max_ratio", kappa * (1.0 + cfg.tol.ratio_slack), ratios);
    // hypothesis margins must be at least `cfg.margin`
    let margin = Metric::at_most("neg_hypothesis_margin", -cfg.margin + 1e-12, margins);
    Ok(SuiteReport::new(suite, cfg.seed, vec![ratio, margin]))
}

/// `‖p(M)x - Π* p(M↓) Π x‖` for random `(M, x, p)` with `deg p ≤ d`.
pub fn compression_suite(cfg: &CampaignConfig) -> Result<SuiteReport, BoundsError> {
    let errors = par::map_indexed(cfg.trials, |j| {
        let mut rng = trial_rng(cfg.seed, j as u64);
        let dim = rng.random_range(2..=cfg.dim.max(2) + 2);
        let m =
            gaussian_matrix(&mut rng, dim).scale(Complex64::new(1.0 / (dim as f64).sqrt(), 0.0));
        let x = gaussian_vector(&mut rng, dim);
        let d = rng.random_range(0..=dim);
        let p = gaussian_poly(&mut rng, d);
        let k = krylov_compress(&m, &x, d)?;
        let direct = poly_apply_vec(&m, &p, &x);
        let compressed = k.lift(&poly_apply_vec(&k.compressed, &p, &k.project(&x)));
        let diff: Vec<Complex64> = direct.iter().zip(&compressed).map(|(a, b)| a - b).collect();
        Ok::<f64, BoundsError>(vec_norm(&diff))
    });
    let errs: Vec<(usize, f64)> = errors
        .into_iter()
        .enumerate()
        .map(|(j, e)| e.map(|v| (j, v)))
        .collect::<Result<_, _>>()?;
    Ok(SuiteReport::new(
        Suite::Compress,
        cfg.seed,
        vec![Metric::at_most(
            "compression_error",
            cfg.tol.compression,
            errs,
        )],
    ))
}

/// Admissible context for instance `j`: alternately a disk and an ellipse
/// around the numerical range of a Gaussian matrix.
pub fn random_context(cfg: &CampaignConfig, j: usize) -> Result<CalculusContext, BoundsError> {
    let mut rng = trial_rng(cfg.seed, j as u64);
    let m = gaussian_matrix(&mut rng, cfg.dim);
    let margin = 0.5;
    let dom = if j.is_multiple_of(2) {
        range_disk(&m, margin)?
    } else {
        range_ellipse(&mut rng, &m, margin)?
    };
    Ok(CalculusContext::new(m, dom, cfg.nodes)?)
}

/// Relative errors `‖γ(p) - p(M)‖/(1 + ‖p(M)‖)` over `trials` contexts.
pub fn calculus_exactness(cfg: &CampaignConfig) -> Result<Metric, BoundsError> {
    let errs = par::map_indexed(cfg.trials, |j| {
        let ctx = random_context(cfg, j)?;
        let mut rng = trial_rng(poly_seed(cfg.seed, j), 0);
        let deg = rng.random_range(0..=cfg.deg);
        let p = gaussian_poly(&mut rng, deg);
        let direct = poly_apply(ctx.matrix(), &p);
        let quad = ctx.gamma(&BoundaryFunction::polynomial(p))?;
        Ok::<f64, BoundsError>(quad.distance(&direct) / (1.0 + op_norm(&direct)?))
    });
    let errs: Vec<(usize, f64)> = errs
        .into_iter()
        .enumerate()
        .map(|(j, e)| e.map(|v| (j, v)))
        .collect::<Result<_, _>>()?;
    Ok(Metric::at_most("poly_exactness", cfg.tol.exactness, errs))
}

struct ContextChecks {
    unitality: f64,
    multiplicativity: f64,
    dlp_total: f64,
    route_agreement: f64,
    hermiticity: f64,
    resolvent: f64,
}

fn context_checks(cfg: &CampaignConfig, j: usize) -> Result<ContextChecks, BoundsError> {
    let ctx = random_context(cfg, j)?;
    let n = ctx.dim();
    let identity = ComplexMatrix::identity(n);
    let mut rng = trial_rng(poly_seed(cfg.seed, j), 1);
    let p = gaussian_poly(&mut rng, cfg.deg / 2);
    let q = gaussian_poly(&mut rng, cfg.deg / 2);
    let mut pq = vec![Complex64::new(0.0, 0.0); p.len() + q.len() - 1];
    for (a, pa) in p.iter().enumerate() {
        for (b, qb) in q.iter().enumerate() {
            pq[a + b] += pa * qb;
        }
    }
    let gp = ctx.gamma(&BoundaryFunction::polynomial(p))?;
    let gq = ctx.gamma(&BoundaryFunction::polynomial(q.clone()))?;
    let gpq = ctx.gamma(&BoundaryFunction::polynomial(pq))?;
    let prod = &gp * &gq;
    let multiplicativity = gpq.distance(&prod) / op_norm(&prod)?.max(f64::MIN_POSITIVE);

    let one = BoundaryFunction::constant(Complex64::new(1.0, 0.0));
    let unitality = ctx.gamma(&one)?.distance(&identity);
    let dlp_total = ctx
        .dlp_total()
        .distance(&identity.scale(Complex64::new(2.0, 0.0)));
    let f = BoundaryFunction::polynomial(q);
    let route_a = ctx.gamma_phi(&AntilinearMap::ConjugateCauchy, &f)?;
    let route_b = ctx.gamma_phi_potential(&f)?;
    let sup = f.sup_norm(ctx.quadrature())?;
    let route_agreement = route_a.distance(&route_b) / sup;
    let hermiticity = (0..ctx.nodes().len())
        .map(|i| ctx.potential(i).hermitian_defect())
        .fold(0.0, f64::max);
    Ok(ContextChecks {
        unitality,
        multiplicativity,
        dlp_total,
        route_agreement,
        hermiticity,
        resolvent: ctx.max_resolvent_residual(),
    })
}

/// `-min_i λ_min(2πr P(σ_i) - I)` for a random `M` with `‖M‖ < r` on the
/// origin disk of radius `r`.
pub fn vn_psd_defect(cfg: &CampaignConfig, j: usize) -> Result<f64, BoundsError> {
    let mut rng = trial_rng(cfg.seed, j as u64);
    let r = rng.random_range(0.5..2.0);
    let ratio = rng.random_range(0.1..0.95);
    let m = matrix_with_norm(&mut rng, cfg.dim, r * ratio)?;
    let ctx = CalculusContext::new(m, Domain::disk(Complex64::new(0.0, 0.0), r)?, cfg.nodes)?;
    let identity = ComplexMatrix::identity(ctx.dim());
    let mut worst = f64::INFINITY;
    for i in 0..ctx.nodes().len() {
        let mut h = ctx.potential(i).scale(Complex64::new(2.0 * PI * r, 0.0));
        h.add_scaled(Complex64::new(-1.0, 0.0), &identity);
        worst = worst.min(herm_min_eig(&h)?);
    }
    Ok(-worst)
}

/// The calculus and potential identities over `trials` random contexts and
/// `trials/2` norm-disk instances.
pub fn identities_suite(cfg: &CampaignConfig) -> Result<SuiteReport, BoundsError> {
    let checks = par::map_indexed(cfg.trials, |j| context_checks(cfg, j))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let column = |f: fn(&ContextChecks) -> f64| -> Vec<(usize, f64)> {
        checks.iter().enumerate().map(|(j, c)| (j, f(c))).collect()
    };
    let psd = par::map_indexed(cfg.trials.div_ceil(2), |j| vn_psd_defect(cfg, j))
        .into_iter()
        .enumerate()
        .map(|(j, v)| v.map(|v| (j, v)))
        .collect::<Result<Vec<_>, _>>()?;
    let metrics = vec![
        Metric::at_most("unitality", cfg.tol.unitality, column(|c| c.unitality)),
        calculus_exactness(cfg)?,
        Metric::at_most(
            "multiplicativity",
            cfg.tol.multiplicativity,
            column(|c| c.multiplicativity),
        ),
        Metric::at_most("dlp_total", cfg.tol.dlp_total, column(|c| c.dlp_total)),
        Metric::at_most(
            "route_agreement",
            cfg.tol.route_agreement,
            column(|c| c.route_agreement),
        ),
        Metric::at_most(
            "hermiticity",
            cfg.tol.hermiticity,
            column(|c| c.hermiticity),
        ),
        Metric::at_most(
            "resolvent_residual",
            cfg.tol.resolvent,
            column(|c| c.resolvent),
        ),
        Metric::at_most("vn_psd_defect", cfg.tol.psd, psd),
    ];
    Ok(SuiteReport::new(Suite::Identities, cfg.seed, metrics))
}

pub fn run_suite(suite: Suite, cfg: &CampaignConfig) -> Result<SuiteReport, BoundsError> {
    match suite {
        Suite::Cp | Suite::Oa | Suite::Vn => theorem_suite(suite, cfg),
        Suite::Compress => compression_suite(cfg),
        Suite::Identities => identities_suite(cfg),
    }
}

/// Norm-disk instance helper shared with callers that need `r > ‖M‖`.
pub fn norm_disk_instance(
    cfg: &CampaignConfig,
    j: usize,
    norm: f64,
) -> Result<(ComplexMatrix, Domain), BoundsError> {
    let mut rng = trial_rng(cfg.seed, j as u64);
    let m = matrix_with_norm(&mut rng, cfg.dim, norm)?;
    let d = norm_disk(&m, cfg.margin)?;
    Ok((m, d))
}
