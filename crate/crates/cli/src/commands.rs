use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use speclab::bounds::{
    evaluate_main_bound, fit_extremal_measure, gamma_w_identity_check, search_extremal_pair,
    BoundOptions, BoundReport, ExtremalPair, GammaWReport,
};
use speclab::calculus::{AntilinearMap, CalculusContext};
use speclab::campaign::{run_suite, CampaignConfig, Suite, SuiteReport, Tolerances};
use speclab::domain::AdmissibilityReport;
use speclab::example::{run_example, ExampleConfig, ExampleReport};
use speclab::linalg::{numerical_radius, numerical_range, spectrum};

use crate::args::{
    AnalyzeArgs, ExampleArgs, MeasureArgs, PotentialArgs, ProblemArgs, RangeArgs, VerifyArgs,
};
use crate::error::CliError;
use crate::io::{emit, load_domain, load_map, load_matrix, to_json};

/// Envelope of every JSON report. Timings are kept out of it so identical
/// inputs give identical bytes; they go to stderr instead.
#[derive(Serialize)]
struct Report<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a C,
    results: R,
}

fn report<C: Serialize, R: Serialize>(command: &'static str, config: &C, results: R) -> String {
    to_json(&Report {
        tool: "speclab",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        results,
    })
}

pub struct Clock {
    start: Instant,
    quiet: bool,
}

impl Clock {
    pub fn new(quiet: bool) -> Self {
        Self {
            start: Instant::now(),
            quiet,
        }
    }

    fn lap(&mut self, stage: &str) {
        if !self.quiet {
            eprintln!(
                "timing {stage}: {:.3} s",
                self.start.elapsed().as_secs_f64()
            );
        }
        self.start = Instant::now();
    }
}

fn context(p: &ProblemArgs, clock: &mut Clock) -> Result<CalculusContext, CliError> {
    let m = load_matrix(&p.matrix)?;
    let dom = load_domain(&p.domain)?;
    let ctx = CalculusContext::new(m, dom, p.nodes)?;
    clock.lap("context");
    Ok(ctx)
}

pub fn range(args: &RangeArgs, clock: &mut Clock) -> Result<(), CliError> {
    let m = load_matrix(&args.matrix)?;
    let poly = numerical_range(&m, args.angles)?;
    let radius = numerical_radius(&m)?;
    let mut csv = String::from("theta,h,vertex_re,vertex_im\n");
    for ((t, h), v) in poly
        .angles
        .iter()
        .zip(&poly.support_values)
        .zip(&poly.vertices)
    {
        let _ = writeln!(csv, "{t:.17e},{h:.17e},{:.17e},{:.17e}", v.re, v.im);
    }
    clock.lap("range");
    emit(args.out.as_deref(), &csv)?;
    let line = format!("numerical_radius {radius:.17e}");
    if args.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

#[derive(Serialize)]
struct PairSummary {
    value: f64,
    diagonal_value: Complex64,
    orthogonality_residual: f64,
    orthogonality_tol: f64,
    cstar_residual: f64,
    evaluations: usize,
    monotone: bool,
    pair: ExtremalPair,
}

#[derive(Serialize)]
struct MeasureSummary {
    atoms: usize,
    total_mass: f64,
    component_masses: Vec<f64>,
    residual: f64,
    tol: f64,
    feasible: bool,
}

#[derive(Serialize)]
struct AnalyzeResults<'a> {
    admissibility: &'a AdmissibilityReport,
    spectrum: Vec<Complex64>,
    map: &'a AntilinearMap,
    extremal_pair: PairSummary,
    bound: BoundReport,
    measure: MeasureSummary,
    gamma_w: GammaWReport,
}

fn summarize_pair(
    ctx: &CalculusContext,
    pair: ExtremalPair,
    search: &speclab::bounds::SearchConfig,
) -> Result<PairSummary, CliError> {
    Ok(PairSummary {
        value: pair.value,
        diagonal_value: pair.diagonal_value(ctx)?,
        orthogonality_residual: pair.orthogonality_residual(ctx)?,
        orthogonality_tol: search.orth_tol_for(pair.value),
        cstar_residual: pair.cstar_residual(ctx)?,
        evaluations: pair.evaluations,
        monotone: pair.is_monotone(),
        pair,
    })
}

pub fn analyze(args: &AnalyzeArgs, clock: &mut Clock) -> Result<(), CliError> {
    let map = load_map(&args.phi)?;
    let ctx = context(&args.problem, clock)?;
    let search = args.search.config();
    let pair = search_extremal_pair(&ctx, &search)?;
    clock.lap("search");
    let opts = BoundOptions {
        search,
        phi_samples: args.phi_samples,
        phi_seed: args.search.seed,
    };
    let bound = evaluate_main_bound(&ctx, &map, &pair, &opts)?;
    clock.lap("bound");
    let fit = fit_extremal_measure(&ctx, &pair.x0, args.moment_deg)?;
    clock.lap("measure");
    let mut gamma_w = gamma_w_identity_check(&ctx, &pair, &search)?;
    gamma_w.passed = gamma_w.residual <= args.tol_gamma_w;
    clock.lap("gamma_w");

    let results = AnalyzeResults {
        admissibility: ctx.admissibility(),
        spectrum: spectrum(ctx.matrix())?,
        map: &map,
        measure: MeasureSummary {
            atoms: fit.atoms.len(),
            total_mass: fit.total_mass(),
            component_masses: (0..ctx.domain().component_count())
                .map(|c| fit.component_mass(c))
                .collect(),
            residual: fit.residual,
            tol: args.tol_feasible,
            feasible: fit.residual <= args.tol_feasible,
        },
        extremal_pair: summarize_pair(&ctx, pair, &search)?,
        bound,
        gamma_w,
    };
    emit(args.out.as_deref(), &report("analyze", args, results))
}

#[derive(Serialize)]
struct VerifyEcho<'a> {
    args: &'a VerifyArgs,
    campaign: CampaignConfig,
}

pub fn verify(args: &VerifyArgs, clock: &mut Clock) -> Result<(), CliError> {
    let default_trials = match args.suite {
        Suite::Cp | Suite::Oa | Suite::Vn => 200,
        Suite::Compress | Suite::Identities => 100,
    };
    let cfg = CampaignConfig {
        seed: args.seed,
        trials: args.trials.unwrap_or(default_trials),
        matrices: args.matrices,
        dim: args.dim,
        deg: args.deg,
        nodes: args.nodes,
        margin: args.margin,
        tol: Tolerances {
            ratio_slack: args.tol_ratio,
            compression: args.tol_compress,
            exactness: args.tol_exact,
            dlp_total: args.tol_dlp,
            route_agreement: args.tol_route,
            psd: args.tol_psd,
            ..Tolerances::default()
        },
    };
    let r: SuiteReport = run_suite(args.suite, &cfg)?;
    clock.lap("verify");
    for m in &r.metrics {
        eprintln!(
            "{} {:<22} worst {:.3e} (case {}, seed {}) tol {:.3e}",
            if m.passed { "PASS" } else { "FAIL" },
            m.name,
            m.worst,
            m.worst_case,
            cfg.seed,
            m.tol
        );
    }
    let echo = VerifyEcho {
        args,
        campaign: cfg,
    };
    emit(args.out.as_deref(), &report("verify", &echo, &r))?;
    if r.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = r
            .metrics
            .iter()
            .filter(|m| !m.passed)
            .map(|m| m.name.as_str())
            .collect();
        Err(CliError::Verification(failed.join(", ")))
    }
}

pub fn example_rs(args: &ExampleArgs, clock: &mut Clock) -> Result<(), CliError> {
    let mut cfg = ExampleConfig {
        nodes: args.nodes,
        seed: args.seed,
        random_functions: args.functions,
        deg: args.deg,
        perturbation: args.perturbation,
        ..ExampleConfig::default()
    };
    cfg.search.seed = args.seed;
    let r: ExampleReport = run_example(&cfg)?;
    clock.lap("example");
    for c in &r.checks {
        eprintln!(
            "{} {:<18} value {:.15} expected {:.15} error {:.3e} tol {:.1e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.expected,
            c.error,
            c.tol
        );
    }
    emit(args.out.as_deref(), &report("example-rs", &cfg, &r))?;
    if r.passed {
        Ok(())
    } else {
        Err(CliError::Verification("example checks".into()))
    }
}

pub fn potential(args: &PotentialArgs, clock: &mut Clock) -> Result<(), CliError> {
    let ctx = context(&args.problem, clock)?;
    let profile = ctx.lambda_min_profile()?;
    clock.lap("profile");
    emit(args.out.as_deref(), &profile.to_csv())?;
    eprintln!(
        "lambda_min {:.6e} integral {:.6e} caldwell_bound {:.6e}",
        profile.min, profile.integral, profile.caldwell_bound
    );
    Ok(())
}

pub fn measure(args: &MeasureArgs, clock: &mut Clock) -> Result<(), CliError> {
    let ctx = context(&args.problem, clock)?;
    let search = args.search.config();
    let pair = search_extremal_pair(&ctx, &search)?;
    clock.lap("search");
    let fit = fit_extremal_measure(&ctx, &pair.x0, args.moment_deg)?;
    clock.lap("measure");
    emit(args.out.as_deref(), &fit.to_csv())?;
    eprintln!(
        "value {:.12} atoms {} mass {:.12} residual {:.3e} feasible {}",
        pair.value,
        fit.atoms.len(),
        fit.total_mass(),
        fit.residual,
        fit.residual <= args.tol_feasible
    );
    Ok(())
}
