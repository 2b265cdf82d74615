//! Multi-start searches over polynomial families for quantities of the form
//! `sup_{‖f‖ ≤ 1} F(T(f))`, where `T` is tabulated by a [`PolyFamily`] and
//! `F` is a norm-like, positively homogeneous objective.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::family::PolyFamily;
use super::nelder_mead::{maximize, NelderMeadConfig};
use super::BoundsError;
use crate::calculus::{BoundaryFunction, CalculusContext};
use crate::linalg::{self, inner, vec_norm, ComplexMatrix};
use crate::random::{complex_gaussian, trial_rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Polynomial degree per component; `None` means `2·dim`.
    pub deg: Option<usize>,
    pub starts: usize,
    /// Nelder–Mead budget per real parameter.
    pub evals_per_param: usize,
    pub seed: u64,
    /// Relative improvement below which an ascent counts as stalled.
    pub tol: f64,
    /// Orthogonality tolerance; `None` means `1e-4·value⁴`.
    pub orth_tol: Option<f64>,
    pub max_rounds: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            deg: None,
            starts: 16,
            evals_per_param: 64,
            seed: 0,
            tol: 1e-13,
            orth_tol: None,
            max_rounds: 25,
        }
    }
}

impl SearchConfig {
    pub fn degree_for(&self, dim: usize) -> usize {
        self.deg.unwrap_or(2 * dim)
    }

    pub fn orth_tol_for(&self, value: f64) -> f64 {
        self.orth_tol.unwrap_or(1e-4 * value.powi(4))
    }
}

/// What the search maximizes, given the image matrix `T(f)` of a member
/// normalized to unit sup-norm.
pub(crate) trait Scorer {
    type State: Clone;
    /// Full objective together with the state that attains it.
    fn full(&self, m: &ComplexMatrix) -> Result<(f64, Self::State), BoundsError>;
    /// Objective with the state held fixed; never exceeds `full`.
    fn partial(&self, m: &ComplexMatrix, state: &Self::State) -> f64;
    /// Whether `partial` depends on the state at all (enables alternation).
    fn alternates(&self) -> bool;
}

/// `‖T(f) x‖` with `x` alternated to the top right singular vector.
pub(crate) struct NormAlternating;

impl Scorer for NormAlternating {
    type State = Vec<Complex64>;

    fn full(&self, m: &ComplexMatrix) -> Result<(f64, Self::State), BoundsError> {
        let pair = linalg::top_singular_pair(m)?;
        Ok((pair.value, pair.vector))
    }

    fn partial(&self, m: &ComplexMatrix, x: &Self::State) -> f64 {
        vec_norm(&m.matvec(x))
    }

    fn alternates(&self) -> bool {
        true
    }
}

/// Operator norm, without alternation.
pub(crate) struct OpNorm;

impl Scorer for OpNorm {
    type State = ();

    fn full(&self, m: &ComplexMatrix) -> Result<(f64, ()), BoundsError> {
        Ok((linalg::op_norm(m)?, ()))
    }

    fn partial(&self, m: &ComplexMatrix, _: &()) -> f64 {
        linalg::op_norm(m).unwrap_or(f64::NAN)
    }

    fn alternates(&self) -> bool {
        false
    }
}

/// Numerical radius `w(T(f))`.
pub(crate) struct NumericalRadius;

impl Scorer for NumericalRadius {
    type State = ();

    fn full(&self, m: &ComplexMatrix) -> Result<(f64, ()), BoundsError> {
        Ok((linalg::numerical_radius(m)?, ()))
    }

    fn partial(&self, m: &ComplexMatrix, _: &()) -> f64 {
        linalg::numerical_radius(m).unwrap_or(f64::NAN)
    }

    fn alternates(&self) -> bool {
        false
    }
}

/// Best member found by [`run_search`].
#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome<S> {
    pub coeffs: Vec<Complex64>,
    pub value: f64,
    pub state: S,
    /// Best value after every accepted step; nondecreasing.
    pub history: Vec<f64>,
    pub evaluations: usize,
}

struct Candidate<S> {
    coeffs: Vec<Complex64>,
    value: f64,
    state: S,
}

fn normalized(fam: &PolyFamily, a: &[Complex64]) -> Option<Vec<Complex64>> {
    let s = fam.sup_norm(a);
    if s > 0.0 && s.is_finite() {
        Some(a.iter().map(|z| z / s).collect())
    } else {
        None
    }
}

fn evaluate<S: Scorer>(
    fam: &PolyFamily,
    scorer: &S,
    a: &[Complex64],
) -> Result<Option<Candidate<S::State>>, BoundsError> {
    let Some(a) = normalized(fam, a) else {
        return Ok(None);
    };
    let (value, state) = scorer.full(&fam.image(&a))?;
    if !value.is_finite() {
        return Err(BoundsError::NonFiniteObjective {
            coeffs: a.iter().flat_map(|z| [z.re, z.im]).collect(),
        });
    }
    Ok(Some(Candidate {
        coeffs: a,
        value,
        state,
    }))
}

/// Alternating ascent from `start`, restricted to degrees `≤ active_deg`.
fn ascend<S: Scorer>(
    fam: &PolyFamily,
    scorer: &S,
    start: Candidate<S::State>,
    active_deg: usize,
    cfg: &SearchConfig,
    evaluations: &mut usize,
) -> Result<Candidate<S::State>, BoundsError> {
    let mut cur = start;
    let n_params = fam.param_len(active_deg);
    let nm = NelderMeadConfig {
        max_evals: cfg.evals_per_param * n_params,
        ..NelderMeadConfig::default()
    };
    for _round in 0..cfg.max_rounds.max(1) {
        let state = cur.state.clone();
        let objective = |p: &[f64]| {
            let a = fam.coeffs_from_params(p, active_deg);
            let s = fam.sup_norm(&a);
            if s <= 0.0 {
                return f64::NEG_INFINITY;
            }
            scorer.partial(&fam.image(&a), &state) / s
        };
        let mut p = fam.params_from_coeffs(&cur.coeffs, active_deg);
        let mut inner_best = objective(&p);
        // restart on stall: a fresh simplex around the last optimum
        for _restart in 0..4 {
            let r = maximize(&objective, &p, &nm);
            *evaluations += r.evals;
            let gained = r.value - inner_best;
            if r.value > inner_best {
                p = r.x;
                inner_best = r.value;
            }
            if gained <= cfg.tol * inner_best.abs() {
                break;
            }
        }
        let candidate = evaluate(fam, scorer, &fam.coeffs_from_params(&p, active_deg))?;
        let improved = match candidate {
            Some(c) if c.value > cur.value => {
                let gain = c.value - cur.value;
                cur = c;
                gain > cfg.tol * cur.value
            }
            _ => false,
        };
        if !improved || !scorer.alternates() {
            break;
        }
    }
    Ok(cur)
}

/// Coordinate ascent over the phases of piecewise-unimodular members. For a
/// convex objective the supremum over piecewise constants is attained on
/// this torus.
fn torus_polish<S: Scorer>(
    fam: &PolyFamily,
    scorer: &S,
    start: Candidate<S::State>,
    evaluations: &mut usize,
) -> Result<Candidate<S::State>, BoundsError> {
    let stride = fam.deg() + 1;
    let mut phases: Vec<f64> = (0..fam.components())
        .map(|c| {
            let z = start.coeffs[c * stride];
            if z.norm() > 0.0 {
                z.arg()
            } else {
                0.0
            }
        })
        .collect();
    let build = |phases: &[f64]| {
        let mut a = vec![Complex64::new(0.0, 0.0); fam.coeff_len()];
        for (c, t) in phases.iter().enumerate() {
            a[c * stride] = Complex64::from_polar(1.0, *t);
        }
        a
    };
    let score = |phases: &[f64], evaluations: &mut usize| -> Result<f64, BoundsError> {
        *evaluations += 1;
        Ok(scorer.full(&fam.image(&build(phases)))?.0)
    };
    let mut best = score(&phases, evaluations)?;
    for _sweep in 0..200 {
        let before = best;
        // the overall phase is irrelevant, so component 0 stays fixed
        for c in 1..fam.components() {
            const GRID: usize = 24;
            let mut trial = phases.clone();
            let mut top = (phases[c], best);
            for g in 0..GRID {
                trial[c] = phases[c] + TAU * g as f64 / GRID as f64;
                let v = score(&trial, evaluations)?;
                if v > top.1 {
                    top = (trial[c], v);
                }
            }
            let h = TAU / GRID as f64;
            let (mut lo, mut hi) = (top.0 - h, top.0 + h);
            let ratio = (5f64.sqrt() - 1.0) / 2.0;
            while hi - lo > 1e-12 {
                let x1 = hi - ratio * (hi - lo);
                let x2 = lo + ratio * (hi - lo);
                trial[c] = x1;
                let f1 = score(&trial, evaluations)?;
                trial[c] = x2;
                let f2 = score(&trial, evaluations)?;
                if f1 > top.1 {
                    top = (x1, f1);
                }
                if f2 > top.1 {
                    top = (x2, f2);
                }
                if f1 < f2 {
                    lo = x1;
                } else {
                    hi = x2;
                }
            }
            if top.1 > best {
                phases[c] = top.0;
                best = top.1;
            }
        }
        if best - before <= 1e-15 * best {
            break;
        }
    }
    let polished = evaluate(fam, scorer, &build(&phases))?.expect("unimodular member is nonzero");
    Ok(if polished.value > start.value {
        polished
    } else {
        start
    })
}

fn stage_degrees(max_deg: usize) -> Vec<usize> {
    let mut out = vec![0];
    let mut d = 1;
    while d < max_deg {
        out.push(d);
        d *= 2;
    }
    if max_deg > 0 {
        out.push(max_deg);
    }
    out.dedup();
    out
}

/// Degree continuation: piecewise constants first (with a phase polish),
/// then increasing degrees seeded by the best member so far.
pub(crate) fn run_search<S: Scorer>(
    fam: &PolyFamily,
    scorer: &S,
    cfg: &SearchConfig,
) -> Result<SearchOutcome<S::State>, BoundsError> {
    let mut rng = trial_rng(cfg.seed, 0);
    let len = fam.coeff_len();
    let stride = fam.deg() + 1;
    let one = Complex64::new(1.0, 0.0);

    let mut starts: Vec<Vec<Complex64>> = Vec::new();
    let mut constant = vec![Complex64::new(0.0, 0.0); len];
    let mut linear = constant.clone();
    for c in 0..fam.components() {
        constant[c * stride] = one;
        if fam.deg() >= 1 {
            linear[c * stride + 1] = one;
        }
    }
    starts.push(constant);
    if fam.deg() >= 1 {
        starts.push(linear);
    }
    while starts.len() < cfg.starts.max(1) {
        starts.push((0..len).map(|_| complex_gaussian(&mut rng)).collect());
    }

    let mut evaluations = 0usize;
    let mut history: Vec<f64> = Vec::new();
    let mut best: Option<Candidate<S::State>> = None;
    let offer =
        |c: Candidate<S::State>, best: &mut Option<Candidate<S::State>>, history: &mut Vec<f64>| {
            let better = match best {
                Some(b) => c.value > b.value * (1.0 + 1e-15),
                None => true,
            };
            if better {
                history.push(c.value);
                *best = Some(c);
            }
        };

    let truncate = |a: &[Complex64], d: usize| -> Vec<Complex64> {
        let mut t = a.to_vec();
        for c in 0..fam.components() {
            for k in (d + 1)..stride {
                t[c * stride + k] = Complex64::new(0.0, 0.0);
            }
        }
        t
    };

    for &d in &stage_degrees(fam.deg()) {
        let mut pool: Vec<Vec<Complex64>> = Vec::new();
        if let Some(b) = &best {
            pool.push(b.coeffs.clone());
        }
        if d == 0 {
            pool.extend(starts.iter().map(|s| truncate(s, 0)));
        } else {
            let extra = (cfg.starts / 4).max(1);
            pool.extend(
                starts
                    .iter()
                    .skip(if d == 1 { 1 } else { 2 })
                    .take(extra)
                    .map(|s| truncate(s, d)),
            );
        }
        for a in pool {
            let Some(start) = evaluate(fam, scorer, &a)? else {
                continue;
            };
            let mut cand = ascend(fam, scorer, start, d, cfg, &mut evaluations)?;
            if d == 0 {
                cand = torus_polish(fam, scorer, cand, &mut evaluations)?;
            }
            offer(cand, &mut best, &mut history);
        }
    }

    let best = best.ok_or(BoundsError::EmptySearch)?;
    debug_assert!(history.windows(2).all(|w| w[1] >= w[0]));
    Ok(SearchOutcome {
        coeffs: best.coeffs,
        value: best.value,
        state: best.state,
        history,
        evaluations,
    })
}

/// Candidate extremal pair `(f₀, x₀)` with `value = ‖γ(f₀)x₀‖`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtremalPair {
    pub f0: BoundaryFunction,
    pub x0: Vec<Complex64>,
    pub value: f64,
    /// Best value after each accepted improvement.
    pub history: Vec<f64>,
    pub evaluations: usize,
    pub deg: usize,
    pub seed: u64,
}

impl ExtremalPair {
    /// Builds a pair from explicit data, normalizing `f₀` on the nodes and `x₀`.
    pub fn from_parts(
        ctx: &CalculusContext,
        f0: BoundaryFunction,
        x0: &[Complex64],
    ) -> Result<Self, BoundsError> {
        let sup = f0.sup_norm(ctx.quadrature())?;
        if sup == 0.0 {
            return Err(BoundsError::ZeroFunction);
        }
        let f0 = f0.scaled(Complex64::new(1.0 / sup, 0.0));
        let x0 = linalg::normalize(x0)?;
        let value = vec_norm(&ctx.gamma(&f0)?.matvec(&x0));
        Ok(Self {
            f0,
            x0,
            value,
            history: vec![value],
            evaluations: 0,
            deg: 0,
            seed: 0,
        })
    }

    /// `⟨γ(f₀)x₀, x₀⟩`.
    pub fn diagonal_value(&self, ctx: &CalculusContext) -> Result<Complex64, BoundsError> {
        Ok(inner(&ctx.gamma(&self.f0)?.matvec(&self.x0), &self.x0))
    }

    /// `|(value² - 1)·⟨γ(f₀)x₀, x₀⟩|`.
    pub fn orthogonality_residual(&self, ctx: &CalculusContext) -> Result<f64, BoundsError> {
        Ok((self.value * self.value - 1.0).abs() * self.diagonal_value(ctx)?.norm())
    }

    /// `‖γ(f₀)*γ(f₀)x₀ - value²·x₀‖`.
    pub fn cstar_residual(&self, ctx: &CalculusContext) -> Result<f64, BoundsError> {
        let g = ctx.gamma(&self.f0)?;
        let y = g.adjoint().matvec(&g.matvec(&self.x0));
        let v2 = self.value * self.value;
        Ok(y.iter()
            .zip(&self.x0)
            .map(|(a, b)| (a - b * v2).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn is_monotone(&self) -> bool {
        self.history.windows(2).all(|w| w[1] >= w[0])
    }
}

/// Alternating multi-start search for an extremal pair of `γ`.
pub fn search_extremal_pair(
    ctx: &CalculusContext,
    cfg: &SearchConfig,
) -> Result<ExtremalPair, BoundsError> {
    let deg = cfg.degree_for(ctx.dim());
    let fam = PolyFamily::gamma(ctx, deg)?;
    let out = run_search(&fam, &NormAlternating, cfg)?;
    Ok(ExtremalPair {
        f0: fam.to_function(&out.coeffs),
        x0: out.state,
        value: out.value,
        history: out.history,
        evaluations: out.evaluations,
        deg,
        seed: cfg.seed,
    })
}

/// Random unit-sup-norm member of the degree-`deg` family, used by sampled
/// estimates.
pub(crate) fn random_member<R: Rng + ?Sized>(
    fam: &PolyFamily,
    rng: &mut R,
) -> Option<Vec<Complex64>> {
    let a: Vec<Complex64> = (0..fam.coeff_len())
        .map(|_| complex_gaussian(rng))
        .collect();
    normalized(fam, &a)
}
