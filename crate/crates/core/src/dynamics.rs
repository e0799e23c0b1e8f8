//! Drift and diffusion of the Galerkin system in Ito form.
//!
//! Two drifts are provided. The divergence form
//!
//! ```text
//! dR = nu R_xx + dx P_N[c(u) R] - P_N[c~(u) (R - S)^2] + P_N[sigma dx(sigma dx(R + S))]
//! dS = nu S_xx - dx P_N[c(u) S] - P_N[c~(u) (R - S)^2] + P_N[sigma dx(sigma dx(R + S))]
//! ```
//!
//! and the cut-off form, which uses `P_N[c(u) R_x]` for transport and
//! `+- P_N[c~(u) (Q_k(R) - Q_k(S))]` for the nonlinearity. Both share the
//! noise coefficient `P_N[sigma dx(R + S)]`. Products and compositions are
//! evaluated on an oversampled collocation grid and projected back.

use crate::error::{Error, Result};
use crate::noise::SigmaProfile;
use crate::reconstruction::{invert_pointwise, Reconstructor};
use crate::scalar::Real;
use crate::spectral::{oversampled_len, Collocation, Norm, SpectralField};
use crate::wave_speed::WaveSpeed;

/// Default collocation oversampling relative to `2N - 1` modes.
pub const DEFAULT_OVERSAMPLE: usize = 4;

/// `(R, S)` at time `t` for Galerkin order `N` (modes `|k| <= N - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState<T> {
    pub t: T,
    pub r: SpectralField<T>,
    pub s: SpectralField<T>,
    pub order: usize,
}

impl<T: Real> SystemState<T> {
    /// Apply `P_N` to arbitrary fields and store them with exactly `N - 1` modes.
    pub fn projected(t: T, r: &SpectralField<T>, s: &SpectralField<T>, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("Galerkin order must be at least 1".into()));
        }
        let k = order - 1;
        Ok(Self { t, r: r.project(order).resized(k), s: s.project(order).resized(k), order })
    }

    /// Fields must already be band-limited at `N - 1`.
    pub fn new(t: T, r: SpectralField<T>, s: SpectralField<T>, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("Galerkin order must be at least 1".into()));
        }
        let k = order - 1;
        for (name, f) in [("R", &r), ("S", &s)] {
            if f.coeffs().iter().skip(order).any(|c| c.norm_sqr() != T::zero()) {
                return Err(Error::InvalidArgument(format!("{name} has modes beyond N - 1 = {k}")));
            }
        }
        Ok(Self { t, r: r.resized(k), s: s.resized(k), order })
    }

    pub fn zero(order: usize) -> Self {
        let k = order.max(1) - 1;
        Self { t: T::zero(), r: SpectralField::zeros(k), s: SpectralField::zeros(k), order: order.max(1) }
    }

    /// `int R^2 + S^2 dx`.
    pub fn energy(&self) -> T {
        let a = self.r.norm(Norm::L2);
        let b = self.s.norm(Norm::L2);
        a * a + b * b
    }

    /// `int |R_x|^2 + |S_x|^2 dx`.
    pub fn dissipation(&self) -> T {
        let a = self.r.norm(Norm::H1Semi);
        let b = self.s.norm(Norm::H1Semi);
        a * a + b * b
    }

    /// `mean(R - S)`.
    pub fn mean_difference(&self) -> T {
        self.r.mean() - self.s.mean()
    }

    pub fn is_finite(&self) -> bool {
        self.r.is_finite() && self.s.is_finite()
    }
}

/// Physical parameters of the SDE.
#[derive(Debug, Clone, PartialEq)]
pub struct SdeParams<T> {
    pub nu: T,
    pub speed: WaveSpeed<T>,
    pub sigma: SigmaProfile<T>,
    pub cutoff_k: Option<T>,
}

impl<T: Real> SdeParams<T> {
    pub fn new(nu: T, speed: WaveSpeed<T>, sigma: SigmaProfile<T>, cutoff_k: Option<T>) -> Result<Self> {
        if !(nu >= T::zero()) || !nu.is_finite() {
            return Err(Error::InvalidConfiguration(format!("viscosity must be finite and >= 0, got {nu}")));
        }
        if let Some(k) = cutoff_k {
            if !(k > T::zero()) {
                return Err(Error::InvalidConfiguration(format!("cut-off level must be positive, got {k}")));
            }
        }
        Ok(Self { nu, speed, sigma, cutoff_k })
    }
}

/// A pair of spectral fields, one per equation.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPair<T> {
    pub r: SpectralField<T>,
    pub s: SpectralField<T>,
}

/// The drift split into its physical pieces.
#[derive(Debug, Clone)]
pub struct DriftTerms<T> {
    pub viscous_r: SpectralField<T>,
    pub viscous_s: SpectralField<T>,
    pub transport_r: SpectralField<T>,
    pub transport_s: SpectralField<T>,
    pub nonlinear_r: SpectralField<T>,
    pub nonlinear_s: SpectralField<T>,
    /// `P_N[sigma dx(sigma dx(R + S))]`, common to both equations.
    pub ito: SpectralField<T>,
}

impl<T: Real> DriftTerms<T> {
    /// Everything except the viscous part, which the integrator treats exactly.
    pub fn explicit(&self) -> FieldPair<T> {
        FieldPair {
            r: &(&self.transport_r + &self.nonlinear_r) + &self.ito,
            s: &(&self.transport_s + &self.nonlinear_s) + &self.ito,
        }
    }

    pub fn total(&self) -> FieldPair<T> {
        let e = self.explicit();
        FieldPair { r: &e.r + &self.viscous_r, s: &e.s + &self.viscous_s }
    }
}

/// Which algebraic form of the drift to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriftForm<T> {
    Divergence,
    Cutoff(T),
}

/// Smooth cut-off `chi`: one on `[0, k]`, zero beyond `k + 1`, quintic
/// smoothstep in between (C^2 at both ends).
pub fn chi<T: Real>(r: T, k: T) -> T {
    let r = r.abs();
    if r <= k {
        T::one()
    } else if r >= k + T::one() {
        T::zero()
    } else {
        let t = r - k;
        let s = t * t * t * (T::lit(10.0) + t * (T::lit(-15.0) + T::lit(6.0) * t));
        T::one() - s
    }
}

/// `Q_k(f) = chi(||f||_{L2}) f^2`, computed exactly (modes up to `2K`).
pub fn cutoff_q<T: Real>(f: &SpectralField<T>, k: T) -> SpectralField<T> {
    let weight = chi(f.norm(Norm::L2), k);
    let kmax = f.max_mode();
    if weight == T::zero() {
        return SpectralField::zeros(2 * kmax);
    }
    let m = oversampled_len(kmax, DEFAULT_OVERSAMPLE);
    let mut plan = Collocation::new(m).expect("power-of-two grid");
    let values: Vec<T> = plan.synthesize_vec(f).into_iter().map(|v| weight * v * v).collect();
    plan.analyse(&values, 2 * kmax)
}

/// `||R||^2 + ||S||^2 >= k` (closed first-crossing convention).
pub fn stopping_predicate<T: Real>(state: &SystemState<T>, k: T) -> bool {
    state.energy() >= k
}

/// Reusable evaluator of drift and diffusion at a fixed Galerkin order.
#[derive(Clone)]
pub struct Galerkin<T: Real> {
    order: usize,
    params: SdeParams<T>,
    plan: Collocation<T>,
    sigma: Vec<T>,
    sigma_sigma_prime: Vec<T>,
    sigma_sq: Vec<T>,
    potential: Vec<T>,
    u: Vec<T>,
    r: Vec<T>,
    s: Vec<T>,
    rx: Vec<T>,
    sx: Vec<T>,
    work: Vec<T>,
}

impl<T: Real> Galerkin<T> {
    pub fn new(order: usize, oversample: usize, params: SdeParams<T>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("Galerkin order must be at least 1".into()));
        }
        if oversample < 2 {
            return Err(Error::InvalidConfiguration(format!("oversampling factor must be >= 2, got {oversample}")));
        }
        let m = oversampled_len(order - 1, oversample);
        let plan = Collocation::new(m)?;
        let sigma = params.sigma.eval_sigma(m).into_values();
        let sigma_prime = params.sigma.eval_sigma_prime(m).into_values();
        let sigma_sigma_prime = sigma.iter().zip(&sigma_prime).map(|(&a, &b)| a * b).collect();
        let sigma_sq = sigma.iter().map(|&a| a * a).collect();
        let z = vec![T::zero(); m];
        Ok(Self {
            order,
            params,
            plan,
            sigma,
            sigma_sigma_prime,
            sigma_sq,
            potential: z.clone(),
            u: z.clone(),
            r: z.clone(),
            s: z.clone(),
            rx: z.clone(),
            sx: z.clone(),
            work: z,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grid_len(&self) -> usize {
        self.plan.len()
    }

    pub fn params(&self) -> &SdeParams<T> {
        &self.params
    }

    fn max_mode(&self) -> usize {
        self.order - 1
    }

    fn check_state(&self, state: &SystemState<T>) -> Result<()> {
        if state.order != self.order || state.r.max_mode() != self.max_mode() || state.s.max_mode() != self.max_mode() {
            return Err(Error::InvalidArgument(format!(
                "state of order {} does not match evaluator of order {}",
                state.order, self.order
            )));
        }
        Ok(())
    }

    /// `u_N` on the collocation grid (left in `self.u`).
    fn reconstruct(&mut self, state: &SystemState<T>, form: DriftForm<T>) -> Result<()> {
        let g = match form {
            DriftForm::Divergence => Reconstructor::potential(&state.r, &state.s)?,
            DriftForm::Cutoff(_) => Reconstructor::potential_mean_free(&state.r, &state.s)?,
        };
        if self.params.speed.is_constant() {
            return Ok(());
        }
        self.plan.synthesize(&g, &mut self.potential);
        invert_pointwise(&self.params.speed, &self.potential, &mut self.u)
    }

    /// `P_N` of the grid function in `self.work`.
    fn project_work(&mut self) -> SpectralField<T> {
        let k = self.max_mode();
        self.plan.analyse(&self.work, k)
    }

    /// The wave field `u_N` on the collocation grid.
    pub fn wave_field(&mut self, state: &SystemState<T>) -> Result<Vec<T>> {
        self.check_state(state)?;
        self.reconstruct(state, DriftForm::Divergence)?;
        if self.params.speed.is_constant() {
            return Ok(vec![T::zero(); self.grid_len()]);
        }
        Ok(self.u.clone())
    }

    /// All drift contributions in the requested form.
    pub fn drift_terms(&mut self, state: &SystemState<T>, form: DriftForm<T>) -> Result<DriftTerms<T>> {
        self.check_state(state)?;
        if let DriftForm::Cutoff(k) = form {
            if !(k > T::zero()) {
                return Err(Error::InvalidArgument(format!("cut-off level must be positive, got {k}")));
            }
        }
        self.reconstruct(state, form)?;
        let kmax = self.max_mode();
        let speed = self.params.speed.clone();
        let constant_speed = speed.is_constant();

        self.plan.synthesize(&state.r, &mut self.r);
        self.plan.synthesize(&state.s, &mut self.s);

        let (transport_r, transport_s) = match form {
            DriftForm::Divergence => {
                let tr = self.product_with_speed(&speed, constant_speed, Field::R).derivative();
                let ts = -&self.product_with_speed(&speed, constant_speed, Field::S).derivative();
                (tr, ts)
            }
            DriftForm::Cutoff(_) => {
                self.plan.synthesize(&state.r.derivative(), &mut self.rx);
                self.plan.synthesize(&state.s.derivative(), &mut self.sx);
                let tr = self.product_with_speed(&speed, constant_speed, Field::Rx);
                let ts = -&self.product_with_speed(&speed, constant_speed, Field::Sx);
                (tr, ts)
            }
        };

        let (nonlinear_r, nonlinear_s) = if constant_speed {
            (SpectralField::zeros(kmax), SpectralField::zeros(kmax))
        } else {
            match form {
                DriftForm::Divergence => {
                    for i in 0..self.work.len() {
                        let q = self.r[i] - self.s[i];
                        self.work[i] = speed.eval_c_tilde(self.u[i]) * q * q;
                    }
                    let n = -&self.project_work();
                    (n.clone(), n)
                }
                DriftForm::Cutoff(k) => {
                    let chi_r = chi(state.r.norm(Norm::L2), k);
                    let chi_s = chi(state.s.norm(Norm::L2), k);
                    for i in 0..self.work.len() {
                        let (rv, sv) = (self.r[i], self.s[i]);
                        self.work[i] = speed.eval_c_tilde(self.u[i]) * (chi_r * rv * rv - chi_s * sv * sv);
                    }
                    let n = self.project_work();
                    let neg = -&n;
                    (n, neg)
                }
            }
        };

        let ito = if self.params.sigma.is_zero() {
            SpectralField::zeros(kmax)
        } else {
            let z = &state.r + &state.s;
            let zx = self.plan.synthesize_vec(&z.derivative());
            let zxx = self.plan.synthesize_vec(&z.second_derivative());
            for i in 0..self.work.len() {
                self.work[i] = self.sigma_sigma_prime[i] * zx[i] + self.sigma_sq[i] * zxx[i];
            }
            self.project_work()
        };

        let viscous_r = state.r.second_derivative().scale(self.params.nu);
        let viscous_s = state.s.second_derivative().scale(self.params.nu);
        Ok(DriftTerms { viscous_r, viscous_s, transport_r, transport_s, nonlinear_r, nonlinear_s, ito })
    }

    fn product_with_speed(&mut self, speed: &WaveSpeed<T>, constant: bool, which: Field) -> SpectralField<T> {
        let src = match which {
            Field::R => &self.r,
            Field::S => &self.s,
            Field::Rx => &self.rx,
            Field::Sx => &self.sx,
        };
        if constant {
            let c0 = speed.eval_c(T::zero());
            for (w, &v) in self.work.iter_mut().zip(src.iter()) {
                *w = c0 * v;
            }
        } else {
            for ((w, &v), &u) in self.work.iter_mut().zip(src.iter()).zip(&self.u) {
                *w = speed.eval_c(u) * v;
            }
        }
        self.project_work()
    }

    /// Total drift of the divergence-form system.
    pub fn drift_limit(&mut self, state: &SystemState<T>) -> Result<FieldPair<T>> {
        Ok(self.drift_terms(state, DriftForm::Divergence)?.total())
    }

    /// Total drift of the cut-off system at level `k`.
    pub fn drift_cutoff(&mut self, state: &SystemState<T>, k: T) -> Result<FieldPair<T>> {
        Ok(self.drift_terms(state, DriftForm::Cutoff(k))?.total())
    }

    /// `P_N[sigma dx(R + S)]`, returned once; it is the same in both equations.
    pub fn noise_coefficient(&mut self, state: &SystemState<T>) -> Result<SpectralField<T>> {
        self.check_state(state)?;
        let kmax = self.max_mode();
        if self.params.sigma.is_zero() {
            return Ok(SpectralField::zeros(kmax));
        }
        let zx = (&state.r + &state.s).derivative();
        self.plan.synthesize(&zx, &mut self.rx);
        for i in 0..self.work.len() {
            self.work[i] = self.sigma[i] * self.rx[i];
        }
        Ok(self.project_work())
    }

    pub fn diffusion(&mut self, state: &SystemState<T>) -> Result<FieldPair<T>> {
        let g = self.noise_coefficient(state)?;
        Ok(FieldPair { r: g.clone(), s: g })
    }

    /// `<R, transport_R + nonlinear_R> + <S, transport_S + nonlinear_S>`,
    /// which vanishes for the exact system.
    pub fn energy_exchange(&mut self, state: &SystemState<T>, form: DriftForm<T>) -> Result<T> {
        let d = self.drift_terms(state, form)?;
        let fr = &d.transport_r + &d.nonlinear_r;
        let fs = &d.transport_s + &d.nonlinear_s;
        Ok(state.r.inner(&fr) + state.s.inner(&fs))
    }
}

#[derive(Clone, Copy)]
enum Field {
    R,
    S,
    Rx,
    Sx,
}

/// One-off divergence-form drift with the default oversampling.
pub fn drift_limit<T: Real>(state: &SystemState<T>, params: &SdeParams<T>) -> Result<FieldPair<T>> {
    Galerkin::new(state.order, DEFAULT_OVERSAMPLE, params.clone())?.drift_limit(state)
}

/// One-off cut-off drift with the default oversampling.
pub fn drift_cutoff<T: Real>(state: &SystemState<T>, params: &SdeParams<T>, k: T) -> Result<FieldPair<T>> {
    Galerkin::new(state.order, DEFAULT_OVERSAMPLE, params.clone())?.drift_cutoff(state, k)
}

pub fn diffusion<T: Real>(state: &SystemState<T>, params: &SdeParams<T>) -> Result<FieldPair<T>> {
    Galerkin::new(state.order, DEFAULT_OVERSAMPLE, params.clone())?.diffusion(state)
}
