//! Real periodic fields on the unit torus `[0, 1)`.
//!
//! A [`SpectralField`] stores the complex Fourier coefficients `c_k` of a
//! real function `f(x) = sum_k c_k exp(2 pi i k x)` for `k = 0..=K`; the
//! negative half is implied by Hermitian symmetry, so every field is real by
//! construction. A [`GridField`] holds collocation values at `x_m = m / M`.
//! [`Collocation`] owns the FFT plans that move between the two.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Oversampling factor used for sup and L1 norms.
pub const NORM_OVERSAMPLE: usize = 4;

/// Which norm to evaluate with [`SpectralField::norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    L2,
    /// `||f'||_{L2}`.
    H1Semi,
    /// Weighted by `(1 + (2 pi k)^2)^-3` on `|c_k|^2`.
    HNeg3,
    Linf,
    L1,
}

/// Smallest power of two holding `factor * (2K + 1)` points.
pub fn oversampled_len(max_mode: usize, factor: usize) -> usize {
    (factor.max(1) * (2 * max_mode + 1)).next_power_of_two().max(2)
}

/// Fourier coefficients `c_0..=c_K` of a real periodic function.
#[derive(Clone, PartialEq)]
pub struct SpectralField<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: fmt::Debug> fmt::Debug for SpectralField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralField")
            .field("max_mode", &(self.coeffs.len().saturating_sub(1)))
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<T: Real> SpectralField<T> {
    /// Build from nonnegative-frequency coefficients. `coeffs[0]` must be real.
    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a field needs at least the k = 0 coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite Fourier coefficient".into()));
        }
        if coeffs[0].im != T::zero() {
            return Err(Error::InvalidArgument(format!(
                "mean coefficient must be real, got imaginary part {:e}",
                coeffs[0].im
            )));
        }
        Ok(Self { coeffs })
    }

    pub(crate) fn from_coeffs_unchecked(mut coeffs: Vec<Complex<T>>) -> Self {
        debug_assert!(!coeffs.is_empty());
        coeffs[0].im = T::zero();
        Self { coeffs }
    }

    pub fn zeros(max_mode: usize) -> Self {
        Self { coeffs: vec![Complex::new(T::zero(), T::zero()); max_mode + 1] }
    }

    pub fn constant(max_mode: usize, value: T) -> Self {
        let mut f = Self::zeros(max_mode);
        f.coeffs[0].re = value;
        f
    }

    /// `amplitude * sin(2 pi k x)`.
    pub fn sine(k: usize, amplitude: T) -> Self {
        Self::zeros(k).with_sine(k, amplitude)
    }

    /// `amplitude * cos(2 pi k x)`.
    pub fn cosine(k: usize, amplitude: T) -> Self {
        Self::zeros(k).with_cosine(k, amplitude)
    }

    /// Add `amplitude * sin(2 pi k x)`, growing the storage if needed.
    pub fn with_sine(self, k: usize, amplitude: T) -> Self {
        if k == 0 {
            return self;
        }
        let half = amplitude / T::lit(2.0);
        self.with_mode(k, Complex::new(T::zero(), -half))
    }

    /// Add `amplitude * cos(2 pi k x)`, growing the storage if needed.
    pub fn with_cosine(self, k: usize, amplitude: T) -> Self {
        if k == 0 {
            let mut f = self;
            f.coeffs[0].re = f.coeffs[0].re + amplitude;
            return f;
        }
        let half = amplitude / T::lit(2.0);
        self.with_mode(k, Complex::new(half, T::zero()))
    }

    /// Add `c` to coefficient `k >= 1` (and `conj(c)` to `-k`).
    pub fn with_mode(mut self, k: usize, c: Complex<T>) -> Self {
        if k == 0 {
            self.coeffs[0].re = self.coeffs[0].re + c.re;
            return self;
        }
        if k > self.max_mode() {
            self.coeffs.resize(k + 1, Complex::new(T::zero(), T::zero()));
        }
        self.coeffs[k] = self.coeffs[k] + c;
        self
    }

    /// Highest stored frequency `K`.
    pub fn max_mode(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients for `k = 0..=K`.
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }


    /// Coefficient at any integer frequency; zero beyond `K`.
    pub fn coeff(&self, k: i64) -> Complex<T> {
        let idx = k.unsigned_abs() as usize;
        match self.coeffs.get(idx) {
            Some(c) if k < 0 => c.conj(),
            Some(c) => *c,
            None => Complex::new(T::zero(), T::zero()),
        }
    }

    /// Spatial mean, i.e. `c_0`.
    pub fn mean(&self) -> T {
        self.coeffs[0].re
    }

    /// Copy with storage resized to `max_mode`, zero padding or truncating.
    pub fn resized(&self, max_mode: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(max_mode + 1, Complex::new(T::zero(), T::zero()));
        Self { coeffs }
    }

    /// The L2 projection `P_N` onto frequencies `|k| <= N - 1`.
    pub fn project(&self, order: usize) -> Self {
        let keep = order.max(1).min(self.coeffs.len());
        let mut coeffs = self.coeffs[..keep].to_vec();
        if order == 0 {
            coeffs[0] = Complex::new(T::zero(), T::zero());
        }
        Self { coeffs }
    }

    /// Spectral `d/dx`: `c_k -> 2 pi i k c_k`.
    pub fn derivative(&self) -> Self {
        let two_pi = T::two_pi();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let w = two_pi * T::from_usize_lossy(k);
                Complex::new(-w * c.im, w * c.re)
            })
            .collect();
        Self { coeffs }
    }

    /// Second derivative `-(2 pi k)^2 c_k`.
    pub fn second_derivative(&self) -> Self {
        let two_pi = T::two_pi();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let w = two_pi * T::from_usize_lossy(k);
                c.scale(-w * w)
            })
            .collect();
        Self { coeffs }
    }

    /// Zero-mean antiderivative, the inverse of `d/dx` on mean-free fields.
    ///
    /// Rejects inputs whose mean exceeds [`Real::mean_tolerance`].
    pub fn antiderivative(&self) -> Result<Self> {
        self.antiderivative_with_tolerance(T::mean_tolerance())
    }

    pub fn antiderivative_with_tolerance(&self, tolerance: T) -> Result<Self> {
        let mean = self.mean();
        if !(mean.abs() <= tolerance) {
            return Err(Error::MeanViolation { mean: mean.as_f64(), tolerance: tolerance.as_f64() });
        }
        let two_pi = T::two_pi();
        let mut coeffs: Vec<Complex<T>> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == 0 {
                    return Complex::new(T::zero(), T::zero());
                }
                // c / (i w) = (c.im - i c.re) / w
                let w = two_pi * T::from_usize_lossy(k);
                Complex::new(c.im / w, -c.re / w)
            })
            .collect();
        coeffs[0] = Complex::new(T::zero(), T::zero());
        Ok(Self { coeffs })
    }

    /// Convolution with the periodized heat kernel of variance `delta^2`.
    pub fn mollify(&self, delta: T) -> Result<Self> {
        if !(delta > T::zero()) || !delta.is_finite() {
            return Err(Error::InvalidArgument(format!("mollifier width must be positive, got {delta}")));
        }
        let two_pi_sq_delta_sq = T::lit(2.0) * T::PI() * T::PI() * delta * delta;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == 0 {
                    *c
                } else {
                    let kk = T::from_usize_lossy(k);
                    c.scale((-two_pi_sq_delta_sq * kk * kk).exp())
                }
            })
            .collect();
        Ok(Self { coeffs })
    }

    /// `<f, g>_{L2}` over the torus.
    pub fn inner(&self, other: &Self) -> T {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut acc = T::zero();
        for k in 1..n {
            let a = self.coeffs[k];
            let b = other.coeffs[k];
            acc = acc + a.re * b.re + a.im * b.im;
        }
        self.coeffs[0].re * other.coeffs[0].re + T::lit(2.0) * acc
    }

    pub fn norm(&self, which: Norm) -> T {
        match which {
            Norm::L2 => self.weighted_sq(|_| T::one()).sqrt(),
            Norm::H1Semi => {
                let two_pi = T::two_pi();
                self.weighted_sq(|k| {
                    let w = two_pi * T::from_usize_lossy(k);
                    w * w
                })
                .sqrt()
            }
            Norm::HNeg3 => {
                let two_pi = T::two_pi();
                self.weighted_sq(|k| {
                    let w = two_pi * T::from_usize_lossy(k);
                    (T::one() + w * w).powi(-3)
                })
                .sqrt()
            }
            Norm::Linf => {
                let grid = self.to_grid(oversampled_len(self.max_mode(), NORM_OVERSAMPLE));
                grid.values().iter().fold(T::zero(), |m, v| m.max(v.abs()))
            }
            Norm::L1 => {
                let grid = self.to_grid(oversampled_len(self.max_mode(), NORM_OVERSAMPLE));
                grid.norm_l1()
            }
        }
    }

    /// `||f||_{H1}` including the L2 part.
    pub fn norm_h1(&self) -> T {
        let two_pi = T::two_pi();
        self.weighted_sq(|k| {
            let w = two_pi * T::from_usize_lossy(k);
            T::one() + w * w
        })
        .sqrt()
    }

    fn weighted_sq(&self, weight: impl Fn(usize) -> T) -> T {
        let mut acc = T::zero();
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            acc = acc + weight(k) * c.norm_sqr();
        }
        weight(0) * self.coeffs[0].norm_sqr() + T::lit(2.0) * acc
    }

    /// `||self - other||_{L2}` with zero padding of the shorter field.
    pub fn distance(&self, other: &Self) -> T {
        (self - other).norm(Norm::L2)
    }

    /// Largest coefficient-wise deviation, over `k >= 0`.
    pub fn max_coeff_diff(&self, other: &Self) -> T {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n as i64).fold(T::zero(), |m, k| m.max((self.coeff(k) - other.coeff(k)).norm()))
    }

    pub fn scale(&self, factor: T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.scale(factor)).collect() }
    }

    /// Sample on `m` equispaced points. `m` must exceed `2K`.
    pub fn to_grid(&self, m: usize) -> GridField<T> {
        let mut plan = Collocation::new(m).expect("grid size must be a power of two");
        let mut out = vec![T::zero(); m];
        plan.synthesize(self, &mut out);
        GridField { values: out }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n as i64).map(|k| op(self.coeff(k), other.coeff(k))).collect();
        Self { coeffs }
    }
}

impl<T: Real> Add for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn add(self, rhs: Self) -> SpectralField<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Real> Sub for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn sub(self, rhs: Self) -> SpectralField<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Real> Neg for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn neg(self) -> SpectralField<T> {
        SpectralField { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<T: Real> Mul<T> for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn mul(self, rhs: T) -> SpectralField<T> {
        self.scale(rhs)
    }
}

/// Values of a real periodic function at `x_m = m / M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T> {
    values: Vec<T>,
}

impl<T: Real> GridField<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn from_fn(m: usize, f: impl Fn(T) -> T) -> Self {
        let mf = T::from_usize_lossy(m);
        Self { values: (0..m).map(|i| f(T::from_usize_lossy(i) / mf)).collect() }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, m: usize) -> T {
        T::from_usize_lossy(m) / T::from_usize_lossy(self.len())
    }

    pub fn mean(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v) / T::from_usize_lossy(self.len())
    }

    /// Trapezoid (spectrally accurate) approximation of `||f||_{L2}`.
    pub fn norm_l2(&self) -> T {
        (self.values.iter().fold(T::zero(), |a, &v| a + v * v) / T::from_usize_lossy(self.len())).sqrt()
    }

    pub fn norm_l1(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v.abs()) / T::from_usize_lossy(self.len())
    }

    pub fn norm_linf(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.len(), other.len(), "grid sizes differ");
        Self { values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect() }
    }

    /// Discrete Fourier coefficients up to `K = M/2 - 1`; the Nyquist mode is dropped.
    pub fn to_spectral(&self) -> Result<SpectralField<T>> {
        let m = self.len();
        let mut plan = Collocation::new(m)?;
        Ok(plan.analyse(&self.values, max_resolved_mode(m)))
    }
}

/// Highest frequency representable on `m` points with Hermitian pairs.
pub fn max_resolved_mode(m: usize) -> usize {
    (m.saturating_sub(1)) / 2
}

/// FFT plans and a scratch buffer for one grid size.
pub struct Collocation<T: Real> {
    len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    buffer: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
}

impl<T: Real> Clone for Collocation<T> {
    fn clone(&self) -> Self {
        Self {
            len: self.len,
            forward: Arc::clone(&self.forward),
            inverse: Arc::clone(&self.inverse),
            buffer: self.buffer.clone(),
            scratch: self.scratch.clone(),
        }
    }
}

impl<T: Real> Collocation<T> {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidArgument("grid must have at least one point".into()));
        }
        if !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("grid size {len} is not a power of two")));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        let zero = Complex::new(T::zero(), T::zero());
        Ok(Self { len, forward, inverse, buffer: vec![zero; len], scratch: vec![zero; scratch_len] })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Coefficients `0..=max_mode` of the samples, normalized so `c_0` is the mean.
    pub fn analyse(&mut self, values: &[T], max_mode: usize) -> SpectralField<T> {
        assert_eq!(values.len(), self.len, "sample count does not match the plan");
        let max_mode = max_mode.min(max_resolved_mode(self.len));
        for (b, &v) in self.buffer.iter_mut().zip(values) {
            *b = Complex::new(v, T::zero());
        }
        self.forward.process_with_scratch(&mut self.buffer, &mut self.scratch);
        let inv_m = T::one() / T::from_usize_lossy(self.len);
        let coeffs = self.buffer[..=max_mode].iter().map(|c| c.scale(inv_m)).collect();
        SpectralField::from_coeffs_unchecked(coeffs)
    }

    /// Evaluate the field at the grid points into `out`.
    pub fn synthesize(&mut self, field: &SpectralField<T>, out: &mut [T]) {
        assert_eq!(out.len(), self.len, "output length does not match the plan");
        let kmax = field.max_mode();
        assert!(
            self.len == 1 || kmax <= max_resolved_mode(self.len),
            "grid of {} points cannot resolve mode {}",
            self.len,
            kmax
        );
        let zero = Complex::new(T::zero(), T::zero());
        self.buffer.iter_mut().for_each(|b| *b = zero);
        let c = field.coeffs();
        self.buffer[0] = Complex::new(c[0].re, T::zero());
        for (k, &ck) in c.iter().enumerate().skip(1) {
            self.buffer[k] = ck;
            self.buffer[self.len - k] = ck.conj();
        }
        self.inverse.process_with_scratch(&mut self.buffer, &mut self.scratch);
        for (o, b) in out.iter_mut().zip(&self.buffer) {
            *o = b.re;
        }
    }

    pub fn synthesize_vec(&mut self, field: &SpectralField<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.len];
        self.synthesize(field, &mut out);
        out
    }

    pub fn grid(&mut self, field: &SpectralField<T>) -> GridField<T> {
        GridField::new(self.synthesize_vec(field))
    }
}
