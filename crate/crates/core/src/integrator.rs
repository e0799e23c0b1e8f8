//! Time stepping: exponential (integrating-factor) Euler-Maruyama.
//!
//! Each Fourier mode is advanced by
//!
//! ```text
//! X(t + dt) = exp(-nu (2 pi k)^2 dt) [ X + dt * explicit_drift(X) + dW * g(X) ]
//! ```
//!
//! so viscosity is treated exactly and never limits the step size.

use num_complex::Complex;

use crate::dynamics::{stopping_predicate, DriftForm, Galerkin, SdeParams, SystemState, DEFAULT_OVERSAMPLE};
use crate::error::{Error, Result};
use crate::noise::BrownianPath;
use crate::scalar::Real;
use crate::spectral::{Norm, SpectralField};

/// Energies above this are reported as a blow-up.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<T> {
    pub dt: f64,
    pub horizon: f64,
    pub form: DriftForm<T>,
    pub oversample: usize,
    /// Record the first time `||R||^2 + ||S||^2 >= level`.
    pub stop_level: Option<T>,
    /// Keep a full snapshot every this many steps (0 keeps only the end points).
    pub snapshot_every: usize,
    /// Fail when `|mean(R - S)|` drifts more than this from its initial value.
    pub mean_tolerance: Option<f64>,
}

impl<T: Real> SimConfig<T> {
    pub fn new(dt: f64, horizon: f64) -> Self {
        Self {
            dt,
            horizon,
            form: DriftForm::Divergence,
            oversample: DEFAULT_OVERSAMPLE,
            stop_level: None,
            snapshot_every: 0,
            mean_tolerance: None,
        }
    }

    pub fn with_form(mut self, form: DriftForm<T>) -> Self {
        self.form = form;
        self
    }

    pub fn with_stop_level(mut self, level: T) -> Self {
        self.stop_level = Some(level);
        self
    }

    pub fn with_snapshots(mut self, every: usize) -> Self {
        self.snapshot_every = every;
        self
    }

    pub fn with_oversample(mut self, factor: usize) -> Self {
        self.oversample = factor;
        self
    }

    pub fn with_mean_tolerance(mut self, tol: f64) -> Self {
        self.mean_tolerance = Some(tol);
        self
    }

    /// Number of steps, provided `horizon / dt` is an integer.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidConfiguration(format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.horizon >= 0.0) || !self.horizon.is_finite() {
            return Err(Error::InvalidConfiguration(format!("horizon must be >= 0, got {}", self.horizon)));
        }
        let ratio = self.horizon / self.dt;
        let n = ratio.round();
        if (ratio - n).abs() > 1e-9 * n.max(1.0) {
            let suggestion = if n >= 1.0 { self.horizon / n } else { self.horizon };
            return Err(Error::InvalidConfiguration(format!(
                "horizon {} is not a whole number of steps of {}; nearest aligned step is {suggestion}",
                self.horizon, self.dt
            )));
        }
        Ok(n as usize)
    }
}

/// Depth of the smallest dyadic path over `[0, H]`, `H >= horizon`, whose
/// finest step equals `dt`.
pub fn aligned_path_depth(dt: f64, horizon: f64) -> Result<(f64, u32)> {
    let steps = SimConfig::<f64>::new(dt, horizon).steps()?.max(1);
    let depth = (steps as f64).log2().ceil() as u32;
    Ok((dt * (1u64 << depth) as f64, depth))
}

/// A path suitable for [`simulate`] with the given step and horizon.
pub fn aligned_path(seed: u64, dt: f64, horizon: f64) -> Result<BrownianPath> {
    let (h, depth) = aligned_path_depth(dt, horizon)?;
    BrownianPath::generate(seed, h, depth)
}

/// First crossing of the stopping level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingEvent {
    pub step: usize,
    pub t: f64,
    pub energy: f64,
}

/// Scalar history (one entry per step, including `t = 0`) and snapshots.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    pub times: Vec<f64>,
    pub norm_r: Vec<f64>,
    pub norm_s: Vec<f64>,
    pub energy: Vec<f64>,
    pub dissipation: Vec<f64>,
    pub mean_difference: Vec<f64>,
    pub brownian: Vec<f64>,
    pub snapshots: Vec<SystemState<T>>,
    pub stopped: Option<StoppingEvent>,
    pub final_state: SystemState<T>,
    pub dt: f64,
    pub params: SdeParams<T>,
}

impl<T: Real> Trajectory<T> {
    fn push(&mut self, state: &SystemState<T>, w: f64) {
        let nr = state.r.norm(Norm::L2).as_f64();
        let ns = state.s.norm(Norm::L2).as_f64();
        self.times.push(state.t.as_f64());
        self.norm_r.push(nr);
        self.norm_s.push(ns);
        self.energy.push(nr * nr + ns * ns);
        self.dissipation.push(state.dissipation().as_f64());
        self.mean_difference.push(state.mean_difference().as_f64());
        self.brownian.push(w);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Step driver bound to one Galerkin evaluator.
pub struct Stepper<T: Real> {
    engine: Galerkin<T>,
    form: DriftForm<T>,
}

impl<T: Real> Stepper<T> {
    pub fn new(order: usize, oversample: usize, params: SdeParams<T>, form: DriftForm<T>) -> Result<Self> {
        Ok(Self { engine: Galerkin::new(order, oversample, params)?, form })
    }

    pub fn engine(&mut self) -> &mut Galerkin<T> {
        &mut self.engine
    }

    /// One step of size `dt` driven by the increment `dw`.
    pub fn step(&mut self, state: &SystemState<T>, dt: f64, dw: f64) -> Result<SystemState<T>> {
        let terms = self.engine.drift_terms(state, self.form)?;
        let explicit = terms.explicit();
        let g = self.engine.noise_coefficient(state)?;
        let nu = self.engine.params().nu;
        let dt_t = T::lit(dt);
        let dw_t = T::lit(dw);
        let advance = |x: &SpectralField<T>, f: &SpectralField<T>| -> SpectralField<T> {
            let coeffs: Vec<Complex<T>> = x
                .coeffs()
                .iter()
                .zip(f.coeffs())
                .zip(g.coeffs())
                .enumerate()
                .map(|(k, ((&xk, &fk), &gk))| {
                    let w = T::two_pi() * T::from_usize_lossy(k);
                    let decay = (-nu * w * w * dt_t).exp();
                    (xk + fk * dt_t + gk * dw_t) * decay
                })
                .collect();
            SpectralField::from_coeffs_unchecked(coeffs)
        };
        let r = advance(&state.r, &explicit.r);
        let s = advance(&state.s, &explicit.s);
        Ok(SystemState { t: state.t + dt_t, r, s, order: state.order })
    }
}

/// Integrate from `initial` to `config.horizon` along `path`.
///
/// The path's finest step must divide `dt` by a power of two and the path
/// must cover the horizon.
pub fn simulate<T: Real>(
    initial: &SystemState<T>,
    params: &SdeParams<T>,
    path: &BrownianPath,
    config: &SimConfig<T>,
) -> Result<Trajectory<T>> {
    let steps = config.steps()?;
    let increments = path_increments(path, config.dt, steps)?;
    let mut stepper = Stepper::new(initial.order, config.oversample, params.clone(), config.form)?;
    let initial = SystemState::new(initial.t, initial.r.clone(), initial.s.clone(), initial.order)?;
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        norm_r: Vec::with_capacity(steps + 1),
        norm_s: Vec::with_capacity(steps + 1),
        energy: Vec::with_capacity(steps + 1),
        dissipation: Vec::with_capacity(steps + 1),
        mean_difference: Vec::with_capacity(steps + 1),
        brownian: Vec::with_capacity(steps + 1),
        snapshots: vec![initial.clone()],
        stopped: None,
        final_state: initial.clone(),
        dt: config.dt,
        params: params.clone(),
    };
    let mut w = 0.0;
    traj.push(&initial, w);
    let mean0 = initial.mean_difference().as_f64();
    let initial_t = initial.t;
    let mut state = initial;
    if let Some(level) = config.stop_level {
        if stopping_predicate(&state, level) {
            traj.stopped = Some(StoppingEvent { step: 0, t: state.t.as_f64(), energy: state.energy().as_f64() });
        }
    }
    for (j, &dw) in increments.iter().enumerate() {
        let mut next = stepper.step(&state, config.dt, dw)?;
        // avoid accumulating rounding in the clock
        next.t = initial_t + T::lit((j + 1) as f64 * config.dt);
        w += dw;
        let energy = next.energy().as_f64();
        if !next.is_finite() || !energy.is_finite() || energy > BLOW_UP_THRESHOLD {
            return Err(Error::BlowUp { t: next.t.as_f64(), norm: energy.sqrt() });
        }
        if let Some(tol) = config.mean_tolerance {
            let mean = next.mean_difference().as_f64();
            if (mean - mean0).abs() > tol {
                return Err(Error::MeanViolation { mean: mean - mean0, tolerance: tol });
            }
        }
        traj.push(&next, w);
        state = next;
        let step = j + 1;
        if config.snapshot_every > 0 && step % config.snapshot_every == 0 {
            traj.snapshots.push(state.clone());
        }
        if let (Some(level), None) = (config.stop_level, traj.stopped) {
            if stopping_predicate(&state, level) {
                traj.stopped = Some(StoppingEvent { step, t: state.t.as_f64(), energy });
            }
        }
    }
    if traj.snapshots.last().map(|s| s.t) != Some(state.t) {
        traj.snapshots.push(state.clone());
    }
    traj.final_state = state;
    Ok(traj)
}

/// `steps` increments of size `dt` from a path with step `dt / 2^j`.
pub fn path_increments(path: &BrownianPath, dt: f64, steps: usize) -> Result<Vec<f64>> {
    let h = path.step();
    let ratio = dt / h;
    let j = ratio.log2().round();
    if !(j >= 0.0) || (ratio - 2f64.powi(j as i32)).abs() > 1e-9 * ratio || j as u32 > path.depth() {
        return Err(Error::InvalidConfiguration(format!(
            "time step {dt} is not a dyadic multiple of the path step {h}"
        )));
    }
    let inc = path.increments(path.depth() - j as u32)?;
    if inc.len() < steps {
        return Err(Error::InvalidConfiguration(format!(
            "path covers {} steps of {dt} but {steps} are needed",
            inc.len()
        )));
    }
    Ok(inc[..steps].to_vec())
}

/// Advisory step-size bound `0.5 / (2 pi (N - 1) (kappa + 2 |sigma| |sigma'|))`.
///
/// Viscosity is integrated exactly, so only transport and noise enter.
pub fn cfl_guideline<T: Real>(params: &SdeParams<T>, order: usize) -> f64 {
    let k = std::f64::consts::TAU * order.saturating_sub(1).max(1) as f64;
    let kappa = params.speed.kappa().as_f64();
    let noise = 2.0 * params.sigma.sup().as_f64() * params.sigma.sup_prime().as_f64();
    0.5 / (k * (kappa + noise))
}
