//! The wave speed `c(u)`, its derivative, `c~ = c' / (4c)`, the antiderivative
//! `F(u) = int_0^u c`, and the inverse `F^-1`.
//!
//! Every speed is bounded in `[1/kappa, kappa]` with `|c'| <= kappa`; the
//! constructors reject parameters that violate the bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Iteration cap for [`WaveSpeed::eval_f_inverse`].
pub const INVERSE_MAX_ITERATIONS: usize = 200;

/// Kappa used when the tight bound of a preset is not strictly above one.
const FALLBACK_KAPPA: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub enum SpeedKind<T> {
    /// `c = c0`; `c~` vanishes and the system is linear.
    Constant { c0: T },
    /// `c = (3 + cos u) / 2`.
    Cosine,
    /// `c = sqrt(alpha^2 cos^2 u + beta^2 sin^2 u)`.
    LiquidCrystal { alpha: T, beta: T, series: Vec<T> },
    /// Piecewise-linear table, optionally Gaussian smoothed.
    Tabulated(Table<T>),
}

/// Piecewise-linear speed stored as a base value plus ramp kinks:
/// `c(u) = c_left + sum_i ds_i * ramp_h(u - u_i)`, constant outside the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<T> {
    nodes: Vec<(T, T)>,
    left_value: T,
    kinks: Vec<(T, T)>,
    /// Gaussian smoothing width; zero means the raw interpolant.
    width: T,
}

impl<T: Real> Table<T> {
    fn new(nodes: Vec<(T, T)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidConfiguration("a tabulated speed needs at least two nodes".into()));
        }
        if nodes.iter().any(|(u, c)| !u.is_finite() || !c.is_finite()) {
            return Err(Error::InvalidConfiguration("tabulated speed contains non-finite values".into()));
        }
        if nodes.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidConfiguration("tabulated nodes must be strictly increasing in u".into()));
        }
        let slopes: Vec<T> = nodes.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        let mut kinks = Vec::with_capacity(nodes.len());
        let mut prev = T::zero();
        for (i, &(u, _)) in nodes.iter().enumerate() {
            let next = slopes.get(i).copied().unwrap_or(T::zero());
            kinks.push((u, next - prev));
            prev = next;
        }
        Ok(Self { left_value: nodes[0].1, nodes, kinks, width: T::zero() })
    }

    pub fn nodes(&self) -> &[(T, T)] {
        &self.nodes
    }

    pub fn width(&self) -> T {
        self.width
    }

    fn c(&self, u: T) -> T {
        self.kinks.iter().fold(self.left_value, |acc, &(ui, ds)| acc + ds * ramp(u - ui, self.width))
    }

    fn c_prime(&self, u: T) -> T {
        self.kinks.iter().fold(T::zero(), |acc, &(ui, ds)| acc + ds * ramp_slope(u - ui, self.width))
    }

    fn antiderivative(&self, u: T) -> T {
        self.kinks.iter().fold(self.left_value * u, |acc, &(ui, ds)| {
            acc + ds * (ramp_integral(u - ui, self.width) - ramp_integral(-ui, self.width))
        })
    }

    fn value_range(&self) -> (T, T) {
        self.nodes.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &(_, c)| (lo.min(c), hi.max(c)))
    }

    fn max_slope(&self) -> T {
        self.nodes
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
            .fold(T::zero(), T::max)
    }
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// `E[(x + h Z)_+]`, the Gaussian-smoothed ramp.
fn ramp<T: Real>(x: T, h: T) -> T {
    if h == T::zero() {
        return x.max(T::zero());
    }
    let (xf, hf) = (x.as_f64(), h.as_f64());
    let z = xf / hf;
    T::lit(xf * std_normal_cdf(z) + hf * std_normal_pdf(z))
}

fn ramp_slope<T: Real>(x: T, h: T) -> T {
    if h == T::zero() {
        return if x >= T::zero() { T::one() } else { T::zero() };
    }
    T::lit(std_normal_cdf((x / h).as_f64()))
}

fn ramp_integral<T: Real>(x: T, h: T) -> T {
    if h == T::zero() {
        return if x > T::zero() { x * x / T::lit(2.0) } else { T::zero() };
    }
    let (xf, hf) = (x.as_f64(), h.as_f64());
    let z = xf / hf;
    T::lit(0.5 * ((xf * xf + hf * hf) * std_normal_cdf(z) + xf * hf * std_normal_pdf(z)))
}

/// Wave speed together with its bound constant kappa.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSpeed<T> {
    kind: SpeedKind<T>,
    kappa: T,
}

/// Serializable description of a preset, used in configs and manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpeedSpec {
    Constant { c0: f64 },
    Cosine,
    LiquidCrystal { alpha: f64, beta: f64 },
    Tabulated { nodes: Vec<(f64, f64)>, width: f64 },
}

impl<T: Real> WaveSpeed<T> {
    /// `c = c0`. Kappa defaults to the tight bound `max(c0, 1/c0)` (2 when that is 1).
    pub fn constant(c0: T, kappa: Option<T>) -> Result<Self> {
        if !(c0 > T::zero()) || !c0.is_finite() {
            return Err(Error::InvalidConfiguration(format!("constant speed must be positive, got {c0}")));
        }
        let tight = c0.max(c0.recip());
        Self::validated(SpeedKind::Constant { c0 }, tight, T::zero(), kappa)
    }

    /// `c = (3 + cos u) / 2`, bounded in `[1, 2]` with `|c'| <= 1/2`.
    pub fn cosine(kappa: Option<T>) -> Result<Self> {
        Self::validated(SpeedKind::Cosine, T::lit(2.0), T::lit(0.5), kappa)
    }

    pub fn liquid_crystal(alpha: T, beta: T, kappa: Option<T>) -> Result<Self> {
        if !(alpha > T::zero() && beta > T::zero()) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidConfiguration("liquid-crystal constants must be positive".into()));
        }
        let lo = alpha.min(beta);
        let hi = alpha.max(beta);
        let slope = (beta * beta - alpha * alpha).abs() / (T::lit(2.0) * lo);
        let series = liquid_crystal_series(alpha.as_f64(), beta.as_f64())?
            .into_iter()
            .map(T::lit)
            .collect();
        Self::validated(SpeedKind::LiquidCrystal { alpha, beta, series }, hi.max(lo.recip()), slope, kappa)
    }

    /// Piecewise-linear speed through `(u, c)` nodes, constant outside them.
    pub fn tabulated(nodes: Vec<(T, T)>, kappa: Option<T>) -> Result<Self> {
        let table = Table::new(nodes)?;
        let (lo, hi) = table.value_range();
        if !(lo > T::zero()) {
            return Err(Error::InvalidConfiguration("tabulated speed must stay positive".into()));
        }
        let slope = table.max_slope();
        Self::validated(SpeedKind::Tabulated(table), hi.max(lo.recip()), slope, kappa)
    }

    /// Parse a two-column `u,c` CSV. Lines starting with `#` and a non-numeric
    /// header row are skipped.
    pub fn tabulated_from_csv(text: &str, kappa: Option<T>) -> Result<Self> {
        let mut nodes = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (a, b) = match (cols.next(), cols.next(), cols.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::InvalidConfiguration(format!(
                        "line {}: expected two comma-separated columns",
                        lineno + 1
                    )))
                }
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(u), Ok(c)) => nodes.push((T::lit(u), T::lit(c))),
                _ if nodes.is_empty() => continue,
                _ => {
                    return Err(Error::InvalidConfiguration(format!("line {}: unparsable number", lineno + 1)))
                }
            }
        }
        Self::tabulated(nodes, kappa)
    }

    pub fn from_spec(spec: &SpeedSpec, kappa: Option<f64>) -> Result<Self> {
        let kappa = kappa.map(T::lit);
        match spec {
            SpeedSpec::Constant { c0 } => Self::constant(T::lit(*c0), kappa),
            SpeedSpec::Cosine => Self::cosine(kappa),
            SpeedSpec::LiquidCrystal { alpha, beta } => Self::liquid_crystal(T::lit(*alpha), T::lit(*beta), kappa),
            SpeedSpec::Tabulated { nodes, width } => {
                let mut w = Self::tabulated(nodes.iter().map(|&(u, c)| (T::lit(u), T::lit(c))).collect(), kappa)?;
                if let SpeedKind::Tabulated(t) = &mut w.kind {
                    t.width = T::lit(*width);
                }
                Ok(w)
            }
        }
    }

    pub fn to_spec(&self) -> SpeedSpec {
        match &self.kind {
            SpeedKind::Constant { c0 } => SpeedSpec::Constant { c0: c0.as_f64() },
            SpeedKind::Cosine => SpeedSpec::Cosine,
            SpeedKind::LiquidCrystal { alpha, beta, .. } => {
                SpeedSpec::LiquidCrystal { alpha: alpha.as_f64(), beta: beta.as_f64() }
            }
            SpeedKind::Tabulated(t) => SpeedSpec::Tabulated {
                nodes: t.nodes.iter().map(|&(u, c)| (u.as_f64(), c.as_f64())).collect(),
                width: t.width.as_f64(),
            },
        }
    }

    fn validated(kind: SpeedKind<T>, tight: T, slope: T, kappa: Option<T>) -> Result<Self> {
        let needed = tight.max(slope);
        let kappa = match kappa {
            Some(k) => {
                if !(k > T::one()) || !k.is_finite() {
                    return Err(Error::InvalidConfiguration(format!("kappa must exceed 1, got {k}")));
                }
                if k < needed {
                    return Err(Error::InvalidConfiguration(format!(
                        "speed needs kappa >= {needed} but kappa = {k} was given"
                    )));
                }
                k
            }
            None if needed > T::one() => needed,
            None => T::lit(FALLBACK_KAPPA),
        };
        Ok(Self { kind, kappa })
    }

    pub fn kind(&self) -> &SpeedKind<T> {
        &self.kind
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    /// True when `c'` vanishes identically.
    pub fn is_constant(&self) -> bool {
        matches!(self.kind, SpeedKind::Constant { .. })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            SpeedKind::Constant { .. } => "constant",
            SpeedKind::Cosine => "cosine",
            SpeedKind::LiquidCrystal { .. } => "liquid-crystal",
            SpeedKind::Tabulated(_) => "tabulated",
        }
    }

    pub fn eval_c(&self, u: T) -> T {
        match &self.kind {
            SpeedKind::Constant { c0 } => *c0,
            SpeedKind::Cosine => (T::lit(3.0) + u.cos()) / T::lit(2.0),
            SpeedKind::LiquidCrystal { alpha, beta, .. } => {
                let (s, c) = u.sin_cos();
                (*alpha * *alpha * c * c + *beta * *beta * s * s).sqrt()
            }
            SpeedKind::Tabulated(t) => t.c(u),
        }
    }

    pub fn eval_c_prime(&self, u: T) -> T {
        match &self.kind {
            SpeedKind::Constant { .. } => T::zero(),
            SpeedKind::Cosine => -u.sin() / T::lit(2.0),
            SpeedKind::LiquidCrystal { alpha, beta, .. } => {
                let (s, c) = u.sin_cos();
                (*beta * *beta - *alpha * *alpha) * s * c / self.eval_c(u)
            }
            SpeedKind::Tabulated(t) => t.c_prime(u),
        }
    }

    /// `c'(u) / (4 c(u))`.
    pub fn eval_c_tilde(&self, u: T) -> T {
        self.eval_c_prime(u) / (T::lit(4.0) * self.eval_c(u))
    }

    /// `F(u) = int_0^u c(r) dr`.
    pub fn eval_f(&self, u: T) -> T {
        match &self.kind {
            SpeedKind::Constant { c0 } => *c0 * u,
            SpeedKind::Cosine => (T::lit(3.0) * u + u.sin()) / T::lit(2.0),
            SpeedKind::LiquidCrystal { series, .. } => eval_sine_series(series, u),
            SpeedKind::Tabulated(t) => t.antiderivative(u),
        }
    }

    /// Solve `F(u) = v` by Newton's method safeguarded with the monotone
    /// bracket `F^-1(v) in [v/kappa, kappa v]` (ordered by the sign of v).
    pub fn eval_f_inverse(&self, v: T) -> Result<T> {
        self.eval_f_inverse_from(v, v / self.eval_c(T::zero()))
    }

    /// As [`eval_f_inverse`](Self::eval_f_inverse) with an explicit first guess.
    pub fn eval_f_inverse_from(&self, v: T, guess: T) -> Result<T> {
        if !v.is_finite() {
            return Err(Error::NumericalFailure(format!("cannot invert F at non-finite value {v}")));
        }
        if v == T::zero() {
            return Ok(T::zero());
        }
        if let SpeedKind::Constant { c0 } = self.kind {
            return Ok(v / c0);
        }
        let (a, b) = (v / self.kappa, v * self.kappa);
        let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
        let tol = T::solver_tolerance() * v.abs().max(T::one());
        let mut u = if guess > lo && guess < hi { guess } else { (lo + hi) / T::lit(2.0) };
        let mut converged = false;
        for _ in 0..INVERSE_MAX_ITERATIONS {
            let residual = self.eval_f(u) - v;
            if residual == T::zero() {
                return Ok(u);
            }
            if residual > T::zero() {
                hi = hi.min(u);
            } else {
                lo = lo.max(u);
            }
            let newton = u - residual / self.eval_c(u);
            let next = if newton > lo && newton < hi { newton } else { (lo + hi) / T::lit(2.0) };
            if converged || next == u {
                return Ok(next);
            }
            // One more Newton step after reaching the tolerance drives the
            // error down to roundoff.
            converged = residual.abs() <= tol;
            u = next;
        }
        Err(Error::NumericalFailure(format!(
            "F^-1 did not converge within {INVERSE_MAX_ITERATIONS} iterations for v = {v}"
        )))
    }

    /// The smoothed approximant `c_N`. Presets are already smooth and are
    /// returned unchanged; tabulated speeds get Gaussian smoothing of width
    /// `1/level` (composed in quadrature with any existing smoothing).
    pub fn smooth_speed(&self, level: usize) -> Self {
        match &self.kind {
            SpeedKind::Tabulated(t) if level > 0 => {
                let extra = T::one() / T::from_usize_lossy(level);
                let mut table = t.clone();
                table.width = (t.width * t.width + extra * extra).sqrt();
                Self { kind: SpeedKind::Tabulated(table), kappa: self.kappa }
            }
            _ => self.clone(),
        }
    }
}

/// `a_0 u + sum_n a_n sin(2 n u) / (2 n)`, the antiderivative of the cosine
/// series `a_0 + sum_n a_n cos(2 n u)`.
fn eval_sine_series<T: Real>(series: &[T], u: T) -> T {
    let theta = u + u;
    let (s1, c1) = theta.sin_cos();
    let two_c = c1 + c1;
    let mut acc = series[0] * u;
    let (mut s_prev, mut s_cur) = (T::zero(), s1);
    for (n, &a) in series.iter().enumerate().skip(1) {
        acc = acc + a * s_cur / T::from_usize_lossy(2 * n);
        let s_next = two_c * s_cur - s_prev;
        s_prev = s_cur;
        s_cur = s_next;
    }
    acc
}

/// Cosine coefficients of `theta -> sqrt(A + B cos theta)` by the periodic
/// trapezoid rule, which is spectrally accurate for this analytic integrand.
fn liquid_crystal_series(alpha: f64, beta: f64) -> Result<Vec<f64>> {
    const POINTS: usize = 1024;
    const MAX_TERMS: usize = 400;
    let a = 0.5 * (alpha * alpha + beta * beta);
    let b = 0.5 * (alpha * alpha - beta * beta);
    let samples: Vec<f64> = (0..POINTS)
        .map(|j| (a + b * (std::f64::consts::TAU * j as f64 / POINTS as f64).cos()).sqrt())
        .collect();
    let a0 = samples.iter().sum::<f64>() / POINTS as f64;
    let mut series = vec![a0];
    for n in 1..MAX_TERMS {
        let an = 2.0
            * samples
                .iter()
                .enumerate()
                .map(|(j, s)| s * (std::f64::consts::TAU * (n * j) as f64 / POINTS as f64).cos())
                .sum::<f64>()
            / POINTS as f64;
        if an.abs() < 1e-17 * a0 {
            return Ok(series);
        }
        series.push(an);
    }
    Err(Error::InvalidConfiguration(format!(
        "liquid-crystal anisotropy alpha/beta = {} is too large for the series representation",
        alpha / beta
    )))
}
