//! Subcommand orchestration and artifact persistence.
//!
//! Every subcommand produces a list of [`Check`]s, a JSON results block and
//! a set of CSV files. They are written under `<output_dir>/<subcommand>/`
//! together with `report.json`, `manifest.json` and the materialized
//! `config.toml`. Nothing written depends on the worker count.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use vvwave_core::diagnostics::{
    all_passed, commutator_study, cutoff_equivalence, empirical_moment, energy_identity_report, holder_h_neg3,
    moment_uniformity, par_map, shared_noise_batch, stopping_consistency, temporal_continuity_check, Check, RunSetup,
};
use vvwave_core::integrator::cfl_guideline;
use vvwave_core::io::{write_spectral_binary, write_spectral_csv, write_trajectory_csv_sampled};
use vvwave_core::wave_speed::SpeedKind;
use vvwave_core::{Error as CoreError, Field, SigmaProfile, SigmaSpec, State, Trajectory};

use crate::config::{CommutatorFields, Config, ConfigError};

/// Drift of `mean(R - S)` tolerated on any trajectory.
pub const MEAN_DRIFT_TOLERANCE: f64 = 1e-12;

/// Below this, energy residuals are roundoff and are not expected to halve.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    Simulate,
    Ensemble,
    EnergyCheck,
    CommutatorStudy,
    ConvergenceStudy,
    CutoffCheck,
    HolderStudy,
    ContinuityStudy,
}

impl Subcommand {
    pub const ALL: [Subcommand; 8] = [
        Self::Simulate,
        Self::Ensemble,
        Self::EnergyCheck,
        Self::CommutatorStudy,
        Self::ConvergenceStudy,
        Self::CutoffCheck,
        Self::HolderStudy,
        Self::ContinuityStudy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Simulate => "simulate",
            Self::Ensemble => "ensemble",
            Self::EnergyCheck => "energy-check",
            Self::CommutatorStudy => "commutator-study",
            Self::ConvergenceStudy => "convergence-study",
            Self::CutoffCheck => "cutoff-check",
            Self::HolderStudy => "holder-study",
            Self::ContinuityStudy => "continuity-study",
        }
    }

    /// Whether `--modes` takes a list of orders rather than a single order.
    pub fn takes_order_list(self) -> bool {
        matches!(self, Self::Ensemble | Self::ConvergenceStudy)
    }

    /// Config section that `--paths` overrides, if any.
    pub fn paths_section(self) -> Option<&'static str> {
        match self {
            Self::Ensemble => Some("ensemble"),
            Self::ConvergenceStudy => Some("convergence"),
            Self::HolderStudy => Some("holder"),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    /// Bad configuration or precondition (exit code 2).
    Config(ConfigError),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(e) => write!(f, "{e}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

fn precondition(key: &str, message: impl Into<String>) -> RunError {
    RunError::Config(ConfigError { issues: vec![crate::config::Issue { key: key.into(), message: message.into() }] })
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub dir: PathBuf,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Set when the run aborted (blow-up or numerical failure).
    pub error: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

struct Study {
    checks: Vec<Check>,
    results: Value,
    files: Vec<(String, Vec<u8>)>,
}

impl Study {
    fn new() -> Self {
        Self { checks: Vec::new(), results: json!({}), files: Vec::new() }
    }

    fn csv(&mut self, name: &str, text: String) {
        self.files.push((name.to_string(), text.into_bytes()));
    }
}

type StudyResult = Result<Study, CoreError>;

/// SHA-256 of the compact JSON rendering of the materialized config.
pub fn config_hash(config: &Config) -> String {
    let text = serde_json::to_string(&config.to_json()).expect("json values always serialize");
    Sha256::digest(text.as_bytes()).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Run a subcommand and persist everything it produces.
pub fn execute(sub: Subcommand, config: &Config, workers: usize) -> Result<Outcome, RunError> {
    warn_on_cfl(sub, config);
    let result = match sub {
        Subcommand::Simulate => simulate(config),
        Subcommand::Ensemble => ensemble(config, workers),
        Subcommand::EnergyCheck => energy_check(config)?,
        Subcommand::CommutatorStudy => commutator(config),
        Subcommand::ConvergenceStudy => convergence(config, workers),
        Subcommand::CutoffCheck => cutoff(config),
        Subcommand::HolderStudy => holder(config, workers),
        Subcommand::ContinuityStudy => continuity(config),
    };
    let (study, error) = match result {
        Ok(s) => (s, None),
        Err(e @ (CoreError::BlowUp { .. } | CoreError::NumericalFailure(_))) => (Study::new(), Some(e.to_string())),
        Err(e) => return Err(precondition(sub.name(), e.to_string())),
    };
    let passed = error.is_none() && all_passed(&study.checks);
    let dir = Path::new(&config.run.output_dir).join(sub.name());
    fs::create_dir_all(&dir)?;
    for (name, bytes) in &study.files {
        let path = dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, bytes)?;
    }
    let report = json!({
        "subcommand": sub.name(),
        "passed": passed,
        "error": error,
        "checks": study.checks,
        "results": study.results,
    });
    fs::write(dir.join("report.json"), pretty(&report))?;
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": sub.name(),
        "seed": config.run.seed,
        "config_sha256": config_hash(config),
        "config_file": "config.toml",
        "rerun": format!("vvwave {} --config config.toml", sub.name()),
        "config": config.to_json(),
    });
    fs::write(dir.join("manifest.json"), pretty(&manifest))?;
    fs::write(dir.join("config.toml"), config.to_toml())?;
    Ok(Outcome { dir, passed, checks: study.checks, error })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn warn_on_cfl(sub: Subcommand, config: &Config) {
    let Ok(params) = config.params() else { return };
    let order = match sub {
        Subcommand::Ensemble => config.ensemble.orders.iter().copied().max(),
        Subcommand::ConvergenceStudy => config.convergence.orders.iter().copied().max(),
        Subcommand::CommutatorStudy => None,
        _ => Some(config.grid.modes),
    };
    if let Some(n) = order {
        let guide = cfl_guideline(&params, n);
        if config.time.dt > guide {
            eprintln!("warning: dt = {} exceeds the stability guideline {guide:.3e} at N = {n}", config.time.dt);
        }
    }
}

fn mean_drift(traj: &Trajectory<f64>) -> f64 {
    let m0 = traj.mean_difference.first().copied().unwrap_or(0.0);
    traj.mean_difference.iter().map(|m| (m - m0).abs()).fold(0.0, f64::max)
}

fn spectral_csv(field: &Field) -> String {
    let mut buf = Vec::new();
    write_spectral_csv(&mut buf, field).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

fn simulate(config: &Config) -> StudyResult {
    let setup = config.setup()?;
    let cadence = config.time.sample_cadence;
    let snap = if config.run.snapshots { cadence } else { 0 };
    let traj = setup.run(config.grid.modes, config.run.seed, snap)?;
    let mut study = Study::new();
    let drift = mean_drift(&traj);
    study.checks.push(Check::at_most("mean_difference_drift", drift, MEAN_DRIFT_TOLERANCE));
    let mut results = json!({
        "steps": traj.len() - 1,
        "samples": traj.len(),
        "final_energy": traj.energy.last(),
        "max_energy": traj.energy.iter().copied().fold(0.0, f64::max),
        "mean_difference_drift": drift,
        "stopping": traj.stopped.map(|e| json!({"step": e.step, "t": e.t, "energy": e.energy})),
    });
    if setup.params.sigma.is_zero() {
        let rep = energy_identity_report(&traj)?;
        study.checks.push(Check::at_most("energy_identity_residual", rep.max_residual, config.energy.tolerance));
        results["energy_identity"] = json!(rep);
    }
    study.results = results;

    let mut buf = Vec::new();
    write_trajectory_csv_sampled(&mut buf, &traj, cadence).expect("writing to memory");
    study.files.push(("trajectory.csv".into(), buf));
    study.csv("final_r.csv", spectral_csv(&traj.final_state.r));
    study.csv("final_s.csv", spectral_csv(&traj.final_state.s));
    if config.run.snapshots {
        let mut index = String::from("index,t\n");
        for (i, st) in traj.snapshots.iter().enumerate() {
            let _ = writeln!(index, "{i},{}", st.t);
            for (tag, f) in [("r", &st.r), ("s", &st.s)] {
                let mut bin = Vec::new();
                write_spectral_binary(&mut bin, f).expect("writing to memory");
                study.files.push((format!("snapshots/{i:06}_{tag}.bin"), bin));
            }
        }
        study.csv("snapshots/index.csv", index);
    }
    Ok(study)
}

fn ensemble(config: &Config, workers: usize) -> StudyResult {
    let setup = config.setup()?;
    let ens = &config.ensemble;
    let seeds = config.seeds(ens.paths);
    let rep = moment_uniformity(&setup, &ens.orders, &seeds, ens.p, (ens.band[0], ens.band[1]), workers)?;
    let mut study = Study::new();
    study.checks.extend(rep.checks.iter().cloned());
    let failures: usize = rep.summaries.iter().map(|s| s.failures).sum();
    study.checks.push(Check::at_most("blown_up_paths", failures as f64, 0.0));

    let mut exponents = ens.exponents.clone();
    exponents.sort_by(f64::total_cmp);
    exponents.dedup();
    let mut paths = String::from("order,seed,status,sup_energy,dissipation_integral\n");
    let mut moments = String::from("order,p,sup_energy_moment,radius,normalized,dissipation_moment,dissipation_radius\n");
    for s in &rep.summaries {
        let mut k = 0;
        for seed in &s.seeds {
            if s.failed_seeds.contains(seed) {
                let _ = writeln!(paths, "{},{seed},blow-up,,", s.order);
            } else {
                let _ = writeln!(paths, "{},{seed},ok,{},{}", s.order, s.sup_energy[k], s.dissipation_integral[k]);
                k += 1;
            }
        }
        let scaled: Vec<f64> = s.dissipation_integral.iter().map(|d| setup.params.nu * d).collect();
        let mut normalized = Vec::new();
        for &p in &exponents {
            let a = empirical_moment(&s.sup_energy, p);
            let b = empirical_moment(&scaled, p);
            let _ = writeln!(moments, "{},{p},{},{},{},{},{}", s.order, a.value, a.radius, a.normalized, b.value, b.radius);
            if p > 0.0 {
                normalized.push(a.normalized);
            }
        }
        let monotone = normalized.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
        study.checks.push(Check::holds(format!("normalized_moments_monotone_in_p_N{}", s.order), monotone));
    }
    let mut ratios = String::from("order_from,order_to,ratio,interval_lo,interval_hi\n");
    for (i, r) in rep.ratios.iter().enumerate() {
        let (lo, hi) = rep.ratio_intervals[i];
        let _ = writeln!(ratios, "{},{},{r},{lo},{hi}", rep.orders[i], rep.orders[i + 1]);
    }
    study.csv("paths.csv", paths);
    study.csv("moments.csv", moments);
    study.csv("ratios.csv", ratios);
    study.results = json!({
        "orders": rep.orders,
        "p": rep.p,
        "moments": rep.moments,
        "radii": rep.radii,
        "ratios": rep.ratios,
        "ratio_intervals": rep.ratio_intervals,
        "failures": failures,
        "seeds": seeds,
    });
    Ok(study)
}

/// Closed-form solution for constant speed with no noise: each mode is
/// damped by viscosity and transported with speed `c0` (R to the left, S to
/// the right).
pub fn linear_exact(initial: &State, nu: f64, c0: f64, t: f64) -> (Field, Field) {
    let order = initial.order;
    let evolve = |f: &Field, sign: f64| {
        let mut out = Field::zeros(order - 1);
        for k in 0..order {
            let w = std::f64::consts::TAU * k as f64;
            let g = Complex::new(-nu * w * w * t, sign * w * c0 * t).exp();
            out = out.with_mode(k, f.coeff(k as i64) * g);
        }
        out
    };
    (evolve(&initial.r, 1.0), evolve(&initial.s, -1.0))
}

fn energy_check(config: &Config) -> Result<StudyResult, RunError> {
    if config.sigma != (SigmaSpec::Constant { value: 0.0 }) {
        return Err(precondition("sigma", "energy-check needs sigma = 0 (kind = \"constant\", value = 0)"));
    }
    let speed = config.wave_speed().map_err(|e| precondition("speed", e.to_string()))?;
    let c0 = match speed.kind() {
        SpeedKind::Constant { c0 } => Some(*c0),
        _ => None,
    };
    if config.energy.exact_tolerance.is_some() && c0.is_none() {
        return Err(precondition("energy.exact_tolerance", "a closed-form solution exists only for constant speed"));
    }
    Ok(energy_runs(config, c0))
}

fn energy_runs(config: &Config, c0: Option<f64>) -> StudyResult {
    let base = config.setup()?;
    let n = config.grid.modes;
    let mut study = Study::new();
    let mut rows = String::from("dt,steps,max_residual,worst_step,mean_drift,exact_error\n");
    let mut residuals = Vec::new();
    let mut exact_errors = Vec::new();
    let mut coarse: Option<Trajectory<f64>> = None;
    for (i, dt) in [config.time.dt, 0.5 * config.time.dt].into_iter().enumerate() {
        let setup = RunSetup { dt, ..base.clone() };
        let traj = setup.run(n, config.run.seed, 0)?;
        let rep = energy_identity_report(&traj)?;
        let drift = mean_drift(&traj);
        study.checks.push(Check::at_most(format!("mean_difference_drift_run{i}"), drift, MEAN_DRIFT_TOLERANCE));
        let exact = c0.map(|c0| {
            let (r, s) = linear_exact(&setup.initial(n).expect("validated"), setup.params.nu, c0, config.time.horizon);
            (traj.final_state.r.distance(&r).powi(2) + traj.final_state.s.distance(&s).powi(2)).sqrt()
        });
        let _ = writeln!(
            rows,
            "{dt},{},{},{},{drift},{}",
            rep.steps,
            rep.max_residual,
            rep.worst_step,
            exact.map(|e| e.to_string()).unwrap_or_default()
        );
        residuals.push(rep.max_residual);
        exact_errors.push(exact);
        if i == 0 {
            coarse = Some(traj);
        }
    }
    study.checks.push(Check::at_most("energy_identity_residual", residuals[0], config.energy.tolerance));
    if residuals[0] > ROUNDOFF_FLOOR {
        study.checks.push(Check::at_most("residual_ratio_half_dt", residuals[1] / residuals[0], 0.5));
    } else {
        study.checks.push(Check::at_most("residual_half_dt_at_roundoff", residuals[1], ROUNDOFF_FLOOR));
    }
    if let (Some(tol), Some(err)) = (config.energy.exact_tolerance, exact_errors[0]) {
        study.checks.push(Check::at_most("exact_solution_l2_error", err, tol));
    }

    let traj = coarse.expect("the coarse run always exists");
    let mut balance = String::from("t,energy,dissipation,step_residual\n");
    let e0 = traj.energy[0];
    for j in 0..traj.len() {
        let res = if j + 1 < traj.len() {
            let h = traj.times[j + 1] - traj.times[j];
            let r = traj.energy[j + 1] - traj.energy[j]
                + traj.params.nu * (traj.dissipation[j] + traj.dissipation[j + 1]) * h;
            if e0 > 0.0 {
                (r / e0).to_string()
            } else {
                r.to_string()
            }
        } else {
            String::new()
        };
        if j % config.time.sample_cadence == 0 || j + 1 == traj.len() {
            let _ = writeln!(balance, "{},{},{},{res}", traj.times[j], traj.energy[j], traj.dissipation[j]);
        }
    }
    study.csv("residuals.csv", rows);
    study.csv("balance.csv", balance);
    study.results = json!({
        "dt": [config.time.dt, 0.5 * config.time.dt],
        "max_residual": residuals,
        "exact_error": exact_errors,
    });
    Ok(study)
}

/// `R = sin(2 pi x) + 0.3 cos(4 pi x)`, `S = 0.2 sin(2 pi x)`.
pub fn standard_commutator_fields() -> (Field, Field) {
    (Field::sine(1, 1.0).with_cosine(2, 0.3), Field::sine(1, 0.2))
}

fn commutator(config: &Config) -> StudyResult {
    let (r, s) = match config.commutator.fields {
        CommutatorFields::Standard => standard_commutator_fields(),
        CommutatorFields::Initial => config.initial_fields(),
    };
    let speed = config.wave_speed()?;
    let rep = commutator_study(&r, &s, &speed, &config.commutator.deltas, config.commutator.grid)?;
    let mut study = Study::new();
    study.checks = rep.checks.clone();
    let mut text = String::from("delta,transport_r,nonlinear_r,transport_s,nonlinear_s\n");
    for (i, d) in rep.deltas.iter().enumerate() {
        let f = rep.families();
        let _ = writeln!(text, "{d},{},{},{},{}", f[0].1.errors[i], f[1].1.errors[i], f[2].1.errors[i], f[3].1.errors[i]);
    }
    study.csv("commutators.csv", text);
    let mut families = serde_json::Map::new();
    for (name, t) in rep.families() {
        families.insert(name.into(), json!({"errors": t.errors, "slope": t.slope, "reduction": t.reduction()}));
    }
    study.results = json!({"deltas": rep.deltas, "families": families});
    Ok(study)
}

fn convergence(config: &Config, workers: usize) -> StudyResult {
    let setup = config.setup()?;
    let conv = &config.convergence;
    let seeds = config.seeds(conv.paths);
    let batch = shared_noise_batch(&setup, &conv.orders, &seeds, conv.final_ratio, workers)?;
    let mut study = Study::new();
    study.checks = batch.checks.clone();
    let pairs: Vec<String> = conv.orders.windows(2).map(|w| format!("d_{}_{}", w[1], w[0])).collect();
    let mut text = format!("seed,{}\n", pairs.join(","));
    for run in &batch.runs {
        let cols: Vec<String> = run.differences.iter().map(f64::to_string).collect();
        let _ = writeln!(text, "{},{}", run.seed, cols.join(","));
    }
    let mut medians = String::from("order_coarse,order_fine,median_difference\n");
    for (w, m) in conv.orders.windows(2).zip(&batch.medians) {
        let _ = writeln!(medians, "{},{},{m}", w[0], w[1]);
    }
    study.csv("differences.csv", text);
    study.csv("medians.csv", medians);
    study.results = json!({
        "orders": batch.orders,
        "medians": batch.medians,
        "fraction_decreasing": batch.fraction_decreasing,
        "seeds": seeds,
    });
    Ok(study)
}

fn cutoff(config: &Config) -> StudyResult {
    let setup = config.setup()?;
    let n = config.grid.modes;
    let rep = cutoff_equivalence(&setup, n, config.run.seed, config.cutoff.k)?;
    let mut study = Study::new();
    study.checks.push(Check::at_most("max_norm_over_k", rep.max_energy.sqrt() / rep.k, 1.0));
    study.checks.push(Check::at_most("max_trajectory_difference", rep.max_difference, config.cutoff.tolerance));
    let mut text = String::from("k,steps,max_difference,max_energy\n");
    let _ = writeln!(text, "{},{},{},{}", rep.k, rep.steps, rep.max_difference, rep.max_energy);
    let mut results = json!({"equivalence": rep});
    if let Some(level) = config.cutoff.stop_level {
        let stop = stopping_consistency(&setup, n, config.run.seed, level)?;
        study.checks.push(Check::holds("stopping_step_matches_first_crossing", stop.consistent()));
        let _ = writeln!(text);
        let _ = writeln!(text, "stop_level,recorded_step,recomputed_step");
        let fmt = |s: Option<usize>| s.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(text, "{level},{},{}", fmt(stop.recorded), fmt(stop.recomputed));
        results["stopping"] = json!(stop);
    }
    study.csv("cutoff.csv", text);
    study.results = results;
    Ok(study)
}

fn holder(config: &Config, workers: usize) -> StudyResult {
    let setup = config.setup()?;
    let h = &config.holder;
    let n = config.grid.modes;
    let cadence = config.time.sample_cadence;
    let noisy = !setup.params.sigma.is_zero();
    let seeds = if noisy { config.seeds(h.paths) } else { Vec::new() };
    let reports = par_map(workers, seeds.len(), |i| {
        setup.run(n, seeds[i], cadence).and_then(|t| holder_h_neg3(&t.snapshots, h.gamma))
    })?
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let mut quiet = setup.clone();
    quiet.params.sigma = SigmaProfile::zero();
    let det = holder_h_neg3(&quiet.run(n, config.run.seed, cadence)?.snapshots, h.gamma)?;

    let mut study = Study::new();
    let mut summary = String::from("run,exponent,sup_ratio\n");
    let mut curves = String::from("run,lag,mean_increment\n");
    for (seed, rep) in seeds.iter().zip(&reports) {
        study.checks.push(Check::within(format!("exponent_seed{seed}"), rep.exponent, h.band[0], h.band[1]));
        let _ = writeln!(summary, "{seed},{},{}", rep.exponent, rep.sup_ratio);
        for (lag, m) in rep.lags.iter().zip(&rep.mean_increments) {
            let _ = writeln!(curves, "{seed},{lag},{m}");
        }
    }
    study.checks.push(Check::at_least("deterministic_exponent", det.exponent, h.deterministic_min));
    let _ = writeln!(summary, "deterministic,{},{}", det.exponent, det.sup_ratio);
    for (lag, m) in det.lags.iter().zip(&det.mean_increments) {
        let _ = writeln!(curves, "deterministic,{lag},{m}");
    }
    study.csv("holder.csv", summary);
    study.csv("increments.csv", curves);
    study.results = json!({
        "gamma": h.gamma,
        "seeds": seeds,
        "exponents": reports.iter().map(|r| r.exponent).collect::<Vec<_>>(),
        "sup_ratios": reports.iter().map(|r| r.sup_ratio).collect::<Vec<_>>(),
        "deterministic": det,
    });
    Ok(study)
}

fn continuity(config: &Config) -> StudyResult {
    let setup = config.setup()?;
    let traj = setup.run(config.grid.modes, config.run.seed, config.time.sample_cadence)?;
    let rep = temporal_continuity_check(&traj.snapshots, config.continuity.levels)?;
    let mut study = Study::new();
    study.checks.push(Check::holds("modulus_vanishes_under_refinement", rep.vanishes_under_refinement()));
    if !setup.params.sigma.is_zero() {
        let band = config.continuity.band;
        study.checks.push(Check::within("increment_exponent", rep.exponent, band[0], band[1]));
    }
    study.checks.push(Check::at_most("mean_difference_drift", mean_drift(&traj), MEAN_DRIFT_TOLERANCE));
    let mut text = String::from("cadence,modulus,rms_increment\n");
    for i in 0..rep.cadences.len() {
        let _ = writeln!(text, "{},{},{}", rep.cadences[i], rep.moduli[i], rep.rms_increments[i]);
    }
    study.csv("continuity.csv", text);
    study.results = json!(rep);
    Ok(study)
}
