use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::family::PolyFamily;
use super::search::{run_search, ExtremalPair, NumericalRadius, SearchConfig};
use super::BoundsError;
use crate::calculus::{horner, poly_apply, CalculusContext};
use crate::domain::{AdmissibilityMode, Domain, DEFAULT_NODES};
use crate::linalg::{op_norm, ComplexMatrix};
use crate::par;
use crate::random::{gaussian_poly, trial_rng};

/// Default relative slack in `max ratio ≤ κ(1 + slack)`.
pub const RATIO_SLACK: f64 = 1e-6;
/// Tolerance for `|2‖γ‖_w - (1/‖γ‖ + ‖γ‖)|`.
pub const GAMMA_W_TOL: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub mode: AdmissibilityMode,
    pub kappa: f64,
    pub trials: usize,
    pub deg: usize,
    pub seed: u64,
    pub nodes: usize,
    /// Relative slack in the pass test `max ratio ≤ κ(1 + slack)`.
    pub slack: f64,
}

impl VerifyConfig {
    pub fn new(mode: AdmissibilityMode, kappa: f64) -> Self {
        Self {
            mode,
            kappa,
            trials: 200,
            deg: 8,
            seed: 0,
            nodes: DEFAULT_NODES,
            slack: RATIO_SLACK,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: AdmissibilityMode,
    pub kappa: f64,
    pub trials: usize,
    pub deg: usize,
    pub seed: u64,
    pub max_ratio: f64,
    pub worst_trial: usize,
    pub min_margin: f64,
    pub passed: bool,
}

/// Boundary sup-norm of a polynomial: node maximum refined by golden-section
/// search around the best nodes.
fn boundary_sup(dom: &Domain, quad: &crate::domain::Quadrature, p: &[Complex64]) -> f64 {
    let nodes = quad.nodes();
    let mut vals: Vec<(usize, f64)> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (i, horner(p, n.point).norm()))
        .collect();
    let mut best = vals.iter().map(|v| v.1).fold(0.0, f64::max);
    vals.sort_by(|a, b| b.1.total_cmp(&a.1));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for &(i, _) in vals.iter().take(3) {
        let n = &nodes[i];
        let curve = &dom.components()[n.component];
        let h = quad.spacing(n.component);
        let f = |s: f64| horner(p, curve.point(s.rem_euclid(curve.length()))).norm();
        let (mut lo, mut hi) = (n.s - h, n.s + h);
        while hi - lo > 1e-10 * h.max(1e-300) {
            let x1 = hi - ratio * (hi - lo);
            let x2 = lo + ratio * (hi - lo);
            let (f1, f2) = (f(x1), f(x2));
            best = best.max(f1).max(f2);
            if f1 < f2 {
                lo = x1;
            } else {
                hi = x2;
            }
        }
    }
    best
}

/// Samples `‖p(M)‖ / ‖p‖_∂Ω` over random Gaussian polynomials after checking
/// the hypothesis of the chosen mode.
pub fn verify_inequality(
    m: &ComplexMatrix,
    dom: &Domain,
    cfg: &VerifyConfig,
) -> Result<VerifyReport, BoundsError> {
    let adm = dom.admissibility(m, cfg.mode)?;
    if !adm.passed {
        return Err(BoundsError::Hypothesis {
            mode: cfg.mode,
            min_margin: adm.min_margin,
            required: adm.required_margin,
            details: adm.describe_failures(),
        });
    }
    let quad = dom.quadrature(cfg.nodes)?;
    let ratios = par::map_indexed(cfg.trials, |t| {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let p = gaussian_poly(&mut rng, cfg.deg);
        let num = op_norm(&poly_apply(m, &p))?;
        let den = boundary_sup(dom, &quad, &p);
        Ok::<f64, BoundsError>(num / den)
    });
    let mut max_ratio = f64::NEG_INFINITY;
    let mut worst_trial = 0;
    for (t, r) in ratios.into_iter().enumerate() {
        let r = r?;
        if r > max_ratio {
            max_ratio = r;
            worst_trial = t;
        }
    }
    Ok(VerifyReport {
        mode: cfg.mode,
        kappa: cfg.kappa,
        trials: cfg.trials,
        deg: cfg.deg,
        seed: cfg.seed,
        max_ratio,
        worst_trial,
        min_margin: adm.min_margin,
        passed: max_ratio <= cfg.kappa * (1.0 + cfg.slack),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaWReport {
    /// Searched `sup_{‖f‖ ≤ 1} w(γ(f))`.
    pub w_est: f64,
    pub gamma_value: f64,
    /// `|2 w_est - (1/value + value)|`.
    pub residual: f64,
    pub passed: bool,
}

/// Estimates `‖γ‖_w` by the same parametrized search with the numerical
/// radius as objective and compares with `(1/‖γ‖ + ‖γ‖)/2`.
pub fn gamma_w_identity_check(
    ctx: &CalculusContext,
    pair: &ExtremalPair,
    cfg: &SearchConfig,
) -> Result<GammaWReport, BoundsError> {
    let fam = PolyFamily::gamma(ctx, cfg.degree_for(ctx.dim()))?;
    let w_est = run_search(&fam, &NumericalRadius, cfg)?.value;
    let v = pair.value;
    let residual = (2.0 * w_est - (1.0 / v + v)).abs();
    Ok(GammaWReport {
        w_est,
        gamma_value: v,
        residual,
        passed: residual <= GAMMA_W_TOL,
    })
}
