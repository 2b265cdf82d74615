//! Spectral-constant machinery: extremal pairs and measures, the main bound
//! `d/2 + √(d²/4 + c)`, the Caldwell functional, the Crouzeix–Greenbaum-type
//! bound and randomized verification of `‖p(M)‖ ≤ κ sup |p|`.

mod family;
mod measure;
mod nelder_mead;
mod search;
mod verify;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{
    AntilinearMap, BoundaryFunction, CalculusContext, CalculusError, LambdaProfile,
};
use crate::domain::{AdmissibilityMode, DomainError};
use crate::linalg::{inner, LinalgError};

pub use family::PolyFamily;
pub use measure::{
    fit_extremal_measure, nnls, AtomicMeasure, DEFAULT_MOMENT_DEGREE, FEASIBILITY_TOL,
};
pub use nelder_mead::{maximize, NelderMeadConfig, NelderMeadResult};
pub use search::{search_extremal_pair, ExtremalPair, SearchConfig};
pub use verify::{
    gamma_w_identity_check, verify_inequality, GammaWReport, VerifyConfig, VerifyReport,
    GAMMA_W_TOL, RATIO_SLACK,
};

/// `λ_min(P)` values at or above this count as nonnegative.
pub const PSD_TOL: f64 = 1e-8;
/// Slack allowed between the searched lower value and a proven upper bound.
pub const CONSISTENCY_TOL: f64 = 1e-6;
/// Searched values at or below `1 + UNITAL_TOL` count as `‖γ‖ = 1`.
pub const UNITAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("{name} must be finite and nonnegative, got {value}")]
    NegativeInput { name: &'static str, value: f64 },
    #[error("objective is not finite at coefficients {coeffs:?}")]
    NonFiniteObjective { coeffs: Vec<f64> },
    #[error("search produced no candidate")]
    EmptySearch,
    #[error("function vanishes on the boundary nodes")]
    ZeroFunction,
    #[error("hypothesis for {mode:?} mode fails: smallest margin {min_margin:.3e}, required > {required:.3e}\n{details}")]
    Hypothesis {
        mode: AdmissibilityMode,
        min_margin: f64,
        required: f64,
        details: String,
    },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `d/2 + √(d²/4 + c)`.
pub fn main_bound(d: f64, c: f64) -> Result<f64, BoundsError> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(BoundsError::NegativeInput {
            name: "d",
            value: d,
        });
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(BoundsError::NegativeInput {
            name: "c",
            value: c,
        });
    }
    Ok(d / 2.0 + (d * d / 4.0 + c).sqrt())
}

/// `d + √(d² + φ + ω)`, never below 1 since `γ(1) = I`.
pub fn cg_formula(d: f64, phi_norm: f64, omega_norm: f64) -> f64 {
    (d + (d * d + phi_norm + omega_norm).sqrt()).max(1.0)
}

/// `ω(f) = ∮ f·λ_min(P) ds`.
pub fn caldwell_omega(
    ctx: &CalculusContext,
    profile: &LambdaProfile,
    f: &BoundaryFunction,
) -> Result<Complex64, BoundsError> {
    let values = f.node_values(ctx.quadrature())?;
    Ok(values
        .iter()
        .zip(&profile.values)
        .zip(&profile.weights)
        .map(|((v, l), w)| v * (l * w))
        .sum())
}

/// `∮ ‖P(σ)‖ ds`, a bound for `‖γ_Φ‖` with the conjugate Cauchy transform
/// that needs no sign information.
pub fn potential_norm_integral(ctx: &CalculusContext) -> Result<f64, BoundsError> {
    let mut acc = 0.0;
    for (i, n) in ctx.nodes().iter().enumerate() {
        let p = ctx.potential(i);
        let e = crate::linalg::hermitian_eigen(p)?;
        let top = e.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        acc += top * n.weight;
    }
    Ok(acc)
}

/// Sampled lower estimate of `‖Φ‖ = sup ‖Φ(f)‖/‖f‖` over random members of
/// the degree-`deg` family, always including the constant function.
pub fn phi_norm_estimate(
    ctx: &CalculusContext,
    map: &AntilinearMap,
    deg: usize,
    samples: usize,
    seed: u64,
) -> Result<f64, BoundsError> {
    let quad = ctx.quadrature();
    let fam = PolyFamily::gamma(ctx, deg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ratio = |f: &BoundaryFunction| -> Result<f64, BoundsError> {
        let sup = f.sup_norm(quad)?;
        Ok(map.apply(ctx.domain(), quad, f)?.sup_norm(quad)? / sup)
    };
    let mut best = ratio(&BoundaryFunction::constant(Complex64::new(1.0, 0.0)))?;
    for _ in 0..samples {
        if let Some(a) = search::random_member(&fam, &mut rng) {
            best = best.max(ratio(&fam.to_function(&a))?);
        }
    }
    Ok(best)
}

/// Searched `sup ‖γ_Φ(f)‖` over the family, used as `d` for explicit maps.
pub fn gamma_phi_norm_estimate(
    ctx: &CalculusContext,
    map: &AntilinearMap,
    cfg: &SearchConfig,
) -> Result<f64, BoundsError> {
    let fam = PolyFamily::gamma_phi(ctx, map, cfg.degree_for(ctx.dim()))?;
    Ok(search::run_search(&fam, &search::OpNorm, cfg)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub cp: Verdict,
    pub oa: Verdict,
    pub vn: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub search: u64,
    pub phi_norm: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    /// `2` when every node has `λ_min(P) ≥ -1e-8`.
    pub d_convex: Option<f64>,
    /// `2 - ∮ λ_min(P) ds`.
    pub d_caldwell: f64,
    /// Searched `‖γ_Φ‖`, used when `Φ` is an explicit map.
    pub d_phi: Option<f64>,
    pub d: f64,
    /// Product term entering `kappa_main`.
    pub c: f64,
    /// `|⟨γ(Φ(f₀)f₀)x₀, x₀⟩|` for the searched pair itself.
    pub c_pair: f64,
    /// The search found no value above 1, so the bound is applied in its
    /// contrapositive form `‖γ‖ ≤ max(1, bound)`.
    pub unital_case: bool,
    pub kappa_main: f64,
    pub gamma_lower: f64,
    pub cg_bound: f64,
    /// Sampled lower estimate of `‖Φ‖` entering `cg_bound`.
    pub phi_norm_est: f64,
    pub lambda_min: f64,
    pub consistent: bool,
    pub verdicts: Verdicts,
    pub seeds: Seeds,
}

#[derive(Debug, Clone, Copy)]
pub struct BoundOptions {
    pub search: SearchConfig,
    /// Random members used for `‖Φ‖_est`.
    pub phi_samples: usize,
    pub phi_seed: u64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            search: SearchConfig::default(),
            phi_samples: 32,
            phi_seed: 0,
        }
    }
}

/// `c = |⟨γ(Φ(f₀)f₀)x₀, x₀⟩|` from node values of the pointwise product.
pub fn product_term(
    ctx: &CalculusContext,
    map: &AntilinearMap,
    pair: &ExtremalPair,
) -> Result<f64, BoundsError> {
    let quad = ctx.quadrature();
    let phi_f0 = ctx.phi(map, &pair.f0)?;
    let prod = phi_f0.product(&pair.f0, quad)?;
    let g = ctx.gamma(&prod)?;
    Ok(inner(&g.matvec(&pair.x0), &pair.x0).norm())
}

/// True when `Φ(f)` is a constant function for every `f`: the conjugate
/// Cauchy transform of a disk, or an explicit map on a single component.
pub fn phi_is_constant(ctx: &CalculusContext, map: &AntilinearMap) -> bool {
    match map {
        AntilinearMap::ConjugateCauchy => ctx.domain().single_disk().is_some(),
        AntilinearMap::ExplicitPiecewise { .. } => ctx.domain().component_count() == 1,
    }
}

/// Upper bounds for `inf_ω ‖γ_Φ - ω‖` (with ω = 0 where noted).
#[derive(Debug, Clone, Copy)]
struct DChoice {
    d_convex: Option<f64>,
    d_caldwell: f64,
    d_phi: Option<f64>,
    used: f64,
    /// Bound on `‖γ_Φ‖` itself, for the ω = 0 variant of the CG bound.
    zero_omega: f64,
}

fn choose_d(
    ctx: &CalculusContext,
    map: &AntilinearMap,
    profile: &LambdaProfile,
    search: &SearchConfig,
) -> Result<DChoice, BoundsError> {
    let d_convex = (profile.min >= -PSD_TOL).then_some(2.0_f64);
    let d_caldwell = profile.caldwell_bound;
    if map.is_conjugate_cauchy() {
        let used = d_convex.map_or(d_caldwell, |d| d.min(d_caldwell));
        let zero_omega = match d_convex {
            Some(d) => d,
            None => potential_norm_integral(ctx)?,
        };
        Ok(DChoice {
            d_convex,
            d_caldwell,
            d_phi: None,
            used,
            zero_omega,
        })
    } else {
        let d_phi = gamma_phi_norm_estimate(ctx, map, search)?;
        Ok(DChoice {
            d_convex,
            d_caldwell,
            d_phi: Some(d_phi),
            used: d_phi,
            zero_omega: d_phi,
        })
    }
}

/// The Crouzeix–Greenbaum-type bound `d + √(d² + ‖Φ‖ [+ ‖ω‖])`.
///
/// With `omega_zero` the bound uses `ω = 0` and `d ≥ ‖γ_Φ‖`; otherwise the
/// Caldwell functional with `d = 2 - ∮λ_min` and `‖ω‖ ≤ ∮|λ_min|` (only
/// meaningful for the conjugate Cauchy transform).
pub fn cg_bound(
    ctx: &CalculusContext,
    map: &AntilinearMap,
    omega_zero: bool,
    opts: &BoundOptions,
) -> Result<f64, BoundsError> {
    let profile = ctx.lambda_min_profile()?;
    let choice = choose_d(ctx, map, &profile, &opts.search)?;
    let phi_norm = phi_norm_estimate(
        ctx,
        map,
        opts.search.degree_for(ctx.dim()),
        opts.phi_samples,
        opts.phi_seed,
    )?;
    Ok(if omega_zero {
        cg_formula(choice.zero_omega, phi_norm, 0.0)
    } else {
        cg_formula(profile.caldwell_bound, phi_norm, profile.abs_integral())
    })
}

fn theorem_verdicts(ctx: &CalculusContext, gamma_lower: f64) -> Result<Verdicts, BoundsError> {
    let dom = ctx.domain();
    let m = ctx.matrix();
    let slack = 1.0 + CONSISTENCY_TOL;
    let judge = |applies: bool, kappa: f64| {
        if !applies {
            Verdict::NotApplicable
        } else if gamma_lower <= kappa * slack {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    };
    let range_ok = dom.is_convex()
        && dom
            .admissibility(m, AdmissibilityMode::NumericalRange)?
            .passed;
    let cp = judge(range_ok, 1.0 + 2f64.sqrt());
    let oa = judge(range_ok && dom.single_disk().is_some(), 2.0);
    let vn_ok = dom.origin_disk_radius().is_some()
        && dom.admissibility(m, AdmissibilityMode::NormCircle)?.passed;
    let vn = judge(vn_ok, 1.0);
    Ok(Verdicts { cp, oa, vn })
}

/// Evaluates the main bound for a pair, together with the CG comparison
/// value and the theorem verdicts.
pub fn evaluate_main_bound(
    ctx: &CalculusContext,
    map: &AntilinearMap,
    pair: &ExtremalPair,
    opts: &BoundOptions,
) -> Result<BoundReport, BoundsError> {
    let profile = ctx.lambda_min_profile()?;
    let choice = choose_d(ctx, map, &profile, &opts.search)?;
    let c_pair = product_term(ctx, map, pair)?;
    // Either ‖γ‖ = 1, or ‖γ‖ > 1 and every extremal pair is orthogonal, which
    // makes c vanish when Φ(f₀) is constant. The searched pair may be a
    // non-orthogonal one of norm 1 (a unimodular constant, say).
    let unital_case = pair.value <= 1.0 + UNITAL_TOL;
    let (c, kappa_main) = if unital_case {
        let c = if phi_is_constant(ctx, map) {
            0.0
        } else {
            c_pair
        };
        (c, main_bound(choice.used.max(0.0), c)?.max(1.0))
    } else {
        (c_pair, main_bound(choice.used.max(0.0), c_pair)?)
    };
    let phi_norm_est = phi_norm_estimate(
        ctx,
        map,
        opts.search.degree_for(ctx.dim()),
        opts.phi_samples,
        opts.phi_seed,
    )?;
    let cg = cg_formula(choice.zero_omega, phi_norm_est, 0.0);
    Ok(BoundReport {
        d_convex: choice.d_convex,
        d_caldwell: choice.d_caldwell,
        d_phi: choice.d_phi,
        d: choice.used,
        c,
        c_pair,
        unital_case,
        kappa_main,
        gamma_lower: pair.value,
        cg_bound: cg,
        phi_norm_est,
        lambda_min: profile.min,
        consistent: pair.value <= kappa_main + CONSISTENCY_TOL,
        verdicts: theorem_verdicts(ctx, pair.value)?,
        seeds: Seeds {
            search: opts.search.seed,
            phi_norm: opts.phi_seed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_bound_values() {
        let s2 = 2f64.sqrt();
        assert!((main_bound(2.0, 1.0).unwrap() - (1.0 + s2)).abs() < 1e-15);
        assert_eq!(main_bound(2.0, 0.0).unwrap(), 2.0);
        assert_eq!(main_bound(0.0, 1.0).unwrap(), 1.0);
        assert!(main_bound(-1.0, 0.0).is_err());
        assert!(main_bound(1.0, f64::NAN).is_err());
    }

    #[test]
    fn cg_formula_guard_and_values() {
        assert_eq!(cg_formula(0.0, 0.0, 0.0), 1.0);
        assert!((cg_formula(2.0, 1.0, 0.0) - (2.0 + 5f64.sqrt())).abs() < 1e-15);
    }
}
