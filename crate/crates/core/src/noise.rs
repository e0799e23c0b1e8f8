//! Scalar Brownian motion with reproducible dyadic refinement, and the
//! spatial noise profile `sigma(x)`.
//!
//! Every Gaussian draw is a pure function of `(seed, level, index)`, so a path
//! generated at depth `L` and later refined to `L + j` is bit-identical to a
//! path generated at `L + j` directly, and paths for different seeds can be
//! built on any number of threads without shared state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::GridField;

/// Deepest supported dyadic level.
pub const MAX_DEPTH: u32 = 40;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based 64-bit hash of `(seed, stream, counter)`.
#[inline]
pub fn keyed_u64(seed: u64, stream: u64, counter: u64) -> u64 {
    let key = splitmix(seed ^ splitmix(stream.wrapping_mul(0xD6E8_FEB8_6659_FD93)));
    splitmix(key ^ counter.wrapping_mul(GOLDEN))
}

/// Uniform on the open interval `(0, 1)`.
#[inline]
pub fn keyed_uniform(seed: u64, stream: u64, counter: u64) -> f64 {
    ((keyed_u64(seed, stream, counter) >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Standard normal via Box-Muller on two keyed uniforms.
#[inline]
pub fn keyed_normal(seed: u64, stream: u64, index: u64) -> f64 {
    let u1 = keyed_uniform(seed, stream, index.wrapping_mul(2));
    let u2 = keyed_uniform(seed, stream, index.wrapping_mul(2).wrapping_add(1));
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Realization of `W` on the dyadic grid `j T / 2^depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianPath {
    seed: u64,
    horizon: f64,
    depth: u32,
    values: Vec<f64>,
}

impl BrownianPath {
    /// Draw `W(T) ~ N(0, T)` and bridge down to `depth`.
    pub fn generate(seed: u64, horizon: f64, depth: u32) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::InvalidArgument(format!("path depth {depth} exceeds {MAX_DEPTH}")));
        }
        if !(horizon >= 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidArgument(format!("path horizon must be finite and >= 0, got {horizon}")));
        }
        let top = horizon.sqrt() * keyed_normal(seed, 0, 0);
        let base = Self { seed, horizon, depth: 0, values: vec![0.0, top] };
        Ok(base.refine(depth))
    }

    /// Fill midpoints by the Brownian bridge, `extra_levels` times.
    pub fn refine(&self, extra_levels: u32) -> Self {
        let mut values = self.values.clone();
        let mut depth = self.depth;
        for _ in 0..extra_levels {
            let level = depth + 1;
            let coarse_step = self.horizon / (1u64 << depth) as f64;
            let spread = (coarse_step / 4.0).sqrt();
            let mut next = Vec::with_capacity(2 * values.len() - 1);
            for (j, pair) in values.windows(2).enumerate() {
                let mid = 0.5 * (pair[0] + pair[1]) + spread * keyed_normal(self.seed, level as u64, j as u64);
                next.push(pair[0]);
                next.push(mid);
            }
            next.push(*values.last().expect("path has endpoints"));
            values = next;
            depth = level;
        }
        Self { seed: self.seed, horizon: self.horizon, depth, values }
    }

    /// The same realization viewed at a coarser level.
    pub fn subsample(&self, depth: u32) -> Result<Self> {
        if depth > self.depth {
            return Err(Error::InvalidArgument(format!(
                "cannot subsample a depth-{} path to depth {depth}",
                self.depth
            )));
        }
        let stride = 1usize << (self.depth - depth);
        Ok(Self {
            seed: self.seed,
            horizon: self.horizon,
            depth,
            values: self.values.iter().step_by(stride).copied().collect(),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `W` at times `j T / 2^depth`, `j = 0..=2^depth`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.horizon / (1u64 << self.depth) as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.values.len()).map(move |j| j as f64 * h)
    }

    /// Increments over steps of size `T / 2^depth` for `depth <= self.depth`.
    pub fn increments(&self, depth: u32) -> Result<Vec<f64>> {
        let coarse = self.subsample(depth)?;
        Ok(coarse.values.windows(2).map(|w| w[1] - w[0]).collect())
    }

    /// `sum (dW)^2` at the finest level.
    pub fn quadratic_variation(&self) -> f64 {
        self.values.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum()
    }
}

/// Spatial noise amplitude `sigma(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaProfile<T> {
    Constant(T),
    /// `a + b sin(2 pi x)` with `a > |b|`.
    Sine { a: T, b: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SigmaSpec {
    Constant { value: f64 },
    Sine { a: f64, b: f64 },
}

impl<T: Real> SigmaProfile<T> {
    pub fn constant(value: T) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidConfiguration("sigma must be finite".into()));
        }
        Ok(Self::Constant(value))
    }

    pub fn sine(a: T, b: T) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || !(a > b.abs()) {
            return Err(Error::InvalidConfiguration(format!("sine sigma needs a > |b|, got a = {a}, b = {b}")));
        }
        Ok(Self::Sine { a, b })
    }

    pub fn zero() -> Self {
        Self::Constant(T::zero())
    }

    pub fn from_spec(spec: &SigmaSpec) -> Result<Self> {
        match *spec {
            SigmaSpec::Constant { value } => Self::constant(T::lit(value)),
            SigmaSpec::Sine { a, b } => Self::sine(T::lit(a), T::lit(b)),
        }
    }

    pub fn to_spec(&self) -> SigmaSpec {
        match *self {
            Self::Constant(v) => SigmaSpec::Constant { value: v.as_f64() },
            Self::Sine { a, b } => SigmaSpec::Sine { a: a.as_f64(), b: b.as_f64() },
        }
    }

    /// True when the noise and Ito correction vanish identically.
    pub fn is_zero(&self) -> bool {
        matches!(*self, Self::Constant(v) if v == T::zero())
    }

    pub fn eval(&self, x: T) -> T {
        match *self {
            Self::Constant(v) => v,
            Self::Sine { a, b } => a + b * (T::two_pi() * x).sin(),
        }
    }

    pub fn eval_prime(&self, x: T) -> T {
        match *self {
            Self::Constant(_) => T::zero(),
            Self::Sine { b, .. } => b * T::two_pi() * (T::two_pi() * x).cos(),
        }
    }

    pub fn eval_second(&self, x: T) -> T {
        match *self {
            Self::Constant(_) => T::zero(),
            Self::Sine { b, .. } => {
                let w = T::two_pi();
                -b * w * w * (w * x).sin()
            }
        }
    }

    pub fn eval_sigma(&self, m: usize) -> GridField<T> {
        GridField::from_fn(m, |x| self.eval(x))
    }

    pub fn eval_sigma_prime(&self, m: usize) -> GridField<T> {
        GridField::from_fn(m, |x| self.eval_prime(x))
    }

    pub fn eval_sigma_second(&self, m: usize) -> GridField<T> {
        GridField::from_fn(m, |x| self.eval_second(x))
    }

    /// `||sigma||_inf`.
    pub fn sup(&self) -> T {
        match *self {
            Self::Constant(v) => v.abs(),
            Self::Sine { a, b } => a + b.abs(),
        }
    }

    /// `||sigma'||_inf`.
    pub fn sup_prime(&self) -> T {
        match *self {
            Self::Constant(_) => T::zero(),
            Self::Sine { b, .. } => b.abs() * T::two_pi(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_at_zero_and_is_deterministic() {
        for seed in 0..20 {
            let p = BrownianPath::generate(seed, 1.0, 6).unwrap();
            assert_eq!(p.values()[0], 0.0);
            assert_eq!(p.values().len(), 65);
            assert_eq!(p, BrownianPath::generate(seed, 1.0, 6).unwrap());
        }
        assert_ne!(BrownianPath::generate(1, 1.0, 4).unwrap(), BrownianPath::generate(2, 1.0, 4).unwrap());
    }

    #[test]
    fn coarse_levels_embed_bit_exactly() {
        let fine = BrownianPath::generate(42, 1.0, 12).unwrap();
        let coarse = BrownianPath::generate(42, 1.0, 10).unwrap();
        assert_eq!(fine.subsample(10).unwrap(), coarse);
        assert_eq!(coarse.refine(2), fine);
        assert_eq!(coarse.refine(1).refine(1), coarse.refine(2));
        assert!(coarse.subsample(11).is_err());
    }

    #[test]
    fn depth_cap() {
        assert!(BrownianPath::generate(0, 1.0, MAX_DEPTH + 1).is_err());
        assert!(BrownianPath::generate(0, -1.0, 2).is_err());
    }

    #[test]
    fn increments_sum_to_endpoint() {
        let p = BrownianPath::generate(9, 2.0, 8).unwrap();
        let inc = p.increments(5).unwrap();
        assert_eq!(inc.len(), 32);
        let total: f64 = inc.iter().sum();
        assert!((total - p.values()[256]).abs() < 1e-12);
        assert_eq!(p.step(), 2.0 / 256.0);
    }

    #[test]
    fn sigma_presets() {
        let c = SigmaProfile::<f64>::constant(0.5).unwrap();
        assert_eq!(c.eval_prime(0.3), 0.0);
        assert_eq!(c.eval_second(0.3), 0.0);
        let s = SigmaProfile::<f64>::sine(1.0, 0.5).unwrap();
        assert!((s.eval(0.25) - 1.5).abs() < 1e-15);
        assert!(SigmaProfile::<f64>::sine(0.5, 0.5).is_err());
        assert!(SigmaProfile::<f64>::sine(0.5, -0.7).is_err());
        assert!(SigmaProfile::<f64>::zero().is_zero());
    }

    #[test]
    fn sigma_second_derivative_matches_finite_difference() {
        let s = SigmaProfile::<f64>::sine(1.0, 0.5).unwrap();
        let x = 0.137;
        let mut errs = Vec::new();
        for &h in &[1e-2, 5e-3] {
            let fd = (s.eval(x + h) - 2.0 * s.eval(x) + s.eval(x - h)) / (h * h);
            errs.push((fd - s.eval_second(x)).abs());
        }
        // second-order accurate: halving h quarters the error
        assert!(errs[1] < errs[0] / 3.5, "{errs:?}");
        let fd1 = (s.eval(x + 1e-5) - s.eval(x - 1e-5)) / 2e-5;
        assert!((fd1 - s.eval_prime(x)).abs() < 1e-8);
    }
}
