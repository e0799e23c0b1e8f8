//! Recovery of the wave field `u = F^-1( (1/2) dx^-1 (R - S) )` from the
//! Riemann invariants, and residuals of the identities it must satisfy.
//!
//! The zero-mean antiderivative fixes the constant of integration so that
//! `F(u)` has zero spatial average.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{max_resolved_mode, Collocation, GridField, SpectralField};
use crate::wave_speed::WaveSpeed;

/// Wave field on a collocation grid together with its self-checks.
#[derive(Debug, Clone)]
pub struct ReconstructedField<T> {
    pub u: GridField<T>,
    /// `||2 dx F(u) - (R - S)||_{L2}`.
    pub residual_constitutive: T,
    /// `|mean F(u)|`.
    pub residual_mean_f: T,
}

/// Reusable reconstruction on a fixed grid.
#[derive(Clone)]
pub struct Reconstructor<T: Real> {
    plan: Collocation<T>,
    potential: Vec<T>,
}

impl<T: Real> Reconstructor<T> {
    pub fn new(grid_len: usize) -> Result<Self> {
        Ok(Self { plan: Collocation::new(grid_len)?, potential: vec![T::zero(); grid_len] })
    }

    pub fn grid_len(&self) -> usize {
        self.plan.len()
    }

    /// `(1/2) dx^-1 (R - S)` as a spectral field.
    pub fn potential(r: &SpectralField<T>, s: &SpectralField<T>) -> Result<SpectralField<T>> {
        let q = r - s;
        Ok(q.antiderivative()?.scale(T::lit(0.5)))
    }

    /// [`Self::potential`] of the mean-free part of `R - S`. The cut-off system
    /// does not conserve `mean(R - S)` once `chi(||R||) != chi(||S||)`.
    pub fn potential_mean_free(r: &SpectralField<T>, s: &SpectralField<T>) -> Result<SpectralField<T>> {
        let q = r - s;
        let mean = q.mean();
        let q = q.with_cosine(0, -mean);
        Ok(q.antiderivative()?.scale(T::lit(0.5)))
    }

    /// Write `u` at the grid points into `out`.
    pub fn wave_field(
        &mut self,
        r: &SpectralField<T>,
        s: &SpectralField<T>,
        speed: &WaveSpeed<T>,
        out: &mut [T],
    ) -> Result<()> {
        let kmax = r.max_mode().max(s.max_mode());
        check_grid(self.plan.len(), kmax)?;
        let g = Self::potential(r, s)?;
        self.plan.synthesize(&g, &mut self.potential);
        invert_pointwise(speed, &self.potential, out)
    }
}

fn check_grid(m: usize, max_mode: usize) -> Result<()> {
    if max_mode > max_resolved_mode(m) {
        return Err(Error::InvalidArgument(format!(
            "grid of {m} points cannot represent fields with modes up to {max_mode}"
        )));
    }
    Ok(())
}

/// `out[i] = F^-1(values[i])`, warm-starting each solve from its neighbour.
pub(crate) fn invert_pointwise<T: Real>(speed: &WaveSpeed<T>, values: &[T], out: &mut [T]) -> Result<()> {
    let mut prev: Option<(T, T)> = None;
    for (o, &v) in out.iter_mut().zip(values) {
        let u = match prev {
            Some((pv, pu)) => {
                let guess = pu + (v - pv) / speed.eval_c(pu);
                speed.eval_f_inverse_from(v, guess)?
            }
            None => speed.eval_f_inverse(v)?,
        };
        *o = u;
        prev = Some((v, u));
    }
    Ok(())
}

/// Reconstruct `u` on a grid of `m` points (power of two, `m > 2K`).
pub fn build_u<T: Real>(
    r: &SpectralField<T>,
    s: &SpectralField<T>,
    speed: &WaveSpeed<T>,
    m: usize,
) -> Result<ReconstructedField<T>> {
    let mut engine = Reconstructor::new(m)?;
    let mut u = vec![T::zero(); m];
    engine.wave_field(r, s, speed, &mut u)?;
    let u = GridField::new(u);

    let f_of_u = u.map(|x| speed.eval_f(x));
    let residual_mean_f = f_of_u.mean().abs();
    let mut plan = engine.plan;
    let dfu = plan.analyse(f_of_u.values(), max_resolved_mode(m)).derivative();
    let dfu = plan.grid(&dfu);
    let q = plan.grid(&(r - s));
    let residual_constitutive =
        dfu.zip_map(&q, |d, qv| T::lit(2.0) * d - qv).norm_l2();
    Ok(ReconstructedField { u, residual_constitutive, residual_mean_f })
}

/// Spectral derivative of grid samples.
fn grid_derivative<T: Real>(plan: &mut Collocation<T>, values: &GridField<T>) -> GridField<T> {
    let d = plan.analyse(values.values(), max_resolved_mode(plan.len())).derivative();
    plan.grid(&d)
}

/// `||2 c(u) dx u - (R - S)||_{L2}` on the grid of `u`.
pub fn constitutive_residual<T: Real>(
    r: &SpectralField<T>,
    s: &SpectralField<T>,
    u: &GridField<T>,
    speed: &WaveSpeed<T>,
) -> Result<T> {
    let m = u.len();
    check_grid(m, r.max_mode().max(s.max_mode()))?;
    let mut plan = Collocation::new(m)?;
    let du = grid_derivative(&mut plan, u);
    let q = plan.grid(&(r - s));
    let lhs = GridField::new(
        u.values()
            .iter()
            .zip(du.values())
            .map(|(&x, &d)| T::lit(2.0) * speed.eval_c(x) * d)
            .collect(),
    );
    Ok(lhs.zip_map(&q, |a, b| a - b).norm_l2())
}

/// `||dx c(u) - 2 c~(u) (R - S)||_{L2}` on the grid of `u`.
pub fn c_derivative_identity_residual<T: Real>(
    r: &SpectralField<T>,
    s: &SpectralField<T>,
    u: &GridField<T>,
    speed: &WaveSpeed<T>,
) -> Result<T> {
    let m = u.len();
    check_grid(m, r.max_mode().max(s.max_mode()))?;
    if speed.is_constant() {
        return Ok(T::zero());
    }
    let mut plan = Collocation::new(m)?;
    let c_of_u = u.map(|x| speed.eval_c(x));
    let dc = grid_derivative(&mut plan, &c_of_u);
    let q = plan.grid(&(r - s));
    let rhs = GridField::new(
        u.values()
            .iter()
            .zip(q.values())
            .map(|(&x, &qv)| T::lit(2.0) * speed.eval_c_tilde(x) * qv)
            .collect(),
    );
    Ok(dc.zip_map(&rhs, |a, b| a - b).norm_l2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn unit_speed_antisymmetric_pair() {
        let r = SpectralField::sine(1, 1.0);
        let s = SpectralField::sine(1, -1.0);
        let w = WaveSpeed::constant(1.0, None).unwrap();
        let rec = build_u(&r, &s, &w, 64).unwrap();
        let expected = GridField::from_fn(64, |x: f64| -(TAU * x).cos() / TAU);
        let err = rec.u.zip_map(&expected, |a, b| a - b).norm_linf();
        assert!(err < 1e-15, "{err}");
        assert!(rec.residual_constitutive <= 1e-10);
        assert!(rec.residual_mean_f <= 1e-10);
        assert!(constitutive_residual(&r, &s, &rec.u, &w).unwrap() <= 1e-10);
    }

    #[test]
    fn equal_invariants_give_zero_field() {
        let r = SpectralField::sine(2, 0.4).with_cosine(1, 0.3).with_cosine(0, 0.2);
        for w in [WaveSpeed::cosine(None).unwrap(), WaveSpeed::liquid_crystal(1.0, 1.5, None).unwrap()] {
            let rec = build_u(&r, &r, &w, 32).unwrap();
            assert!(rec.u.values().iter().all(|&x| x == 0.0));
            assert_eq!(constitutive_residual(&r, &r, &rec.u, &w).unwrap(), 0.0);
            assert_eq!(c_derivative_identity_residual(&r, &r, &rec.u, &w).unwrap(), 0.0);
        }
    }

    #[test]
    fn cosine_speed_residual_is_small() {
        let r = SpectralField::sine(1, 1.0);
        let s = SpectralField::zeros(1);
        let w = WaveSpeed::cosine(None).unwrap();
        let rec = build_u(&r, &s, &w, 512).unwrap();
        let res = constitutive_residual(&r, &s, &rec.u, &w).unwrap();
        assert!(res <= 1e-8, "{res}");
    }

    #[test]
    fn perturbed_field_residual_matches_direct_quadrature() {
        let r = SpectralField::sine(1, 1.0);
        let s = SpectralField::sine(1, -1.0);
        let w = WaveSpeed::constant(1.0, None).unwrap();
        let u = GridField::from_fn(128, |x: f64| -(TAU * x).cos() / TAU + 0.1 * (TAU * x).sin());
        // 2 * d/dx (0.1 sin 2 pi x) = 0.4 pi cos 2 pi x, whose L2 norm is 0.4 pi / sqrt 2.
        let expected = 0.4 * std::f64::consts::PI / 2f64.sqrt();
        let res = constitutive_residual(&r, &s, &u, &w).unwrap();
        assert!((res - expected).abs() < 1e-13, "{res} vs {expected}");
    }

    #[test]
    fn c_derivative_identity_holds_and_improves_with_grid() {
        let r = SpectralField::sine(1, 3.0).with_cosine(2, 1.0);
        let s = SpectralField::cosine(1, 2.0);
        let w = WaveSpeed::cosine(None).unwrap();
        let coarse = build_u(&r, &s, &w, 8).unwrap();
        let fine = build_u(&r, &s, &w, 512).unwrap();
        let e_coarse = c_derivative_identity_residual(&r, &s, &coarse.u, &w).unwrap();
        let e_fine = c_derivative_identity_residual(&r, &s, &fine.u, &w).unwrap();
        assert!(e_fine <= 1e-6, "{e_fine}");
        assert!(e_fine < e_coarse, "{e_fine} {e_coarse}");
    }

    #[test]
    fn mean_violation_is_reported() {
        let r = SpectralField::constant(1, 0.5).with_sine(1, 1.0);
        let s = SpectralField::zeros(1);
        let w = WaveSpeed::cosine(None).unwrap();
        assert!(matches!(build_u(&r, &s, &w, 16), Err(Error::MeanViolation { .. })));
    }

    #[test]
    fn constant_shift_of_both_invariants_is_invisible() {
        let r = SpectralField::sine(1, 0.8).with_cosine(2, 0.1);
        let s = SpectralField::cosine(1, -0.2);
        let w = WaveSpeed::cosine(None).unwrap();
        let base = build_u(&r, &s, &w, 32).unwrap();
        let shift = SpectralField::constant(0, 0.75);
        let moved = build_u(&(&r + &shift), &(&s + &shift), &w, 32).unwrap();
        assert_eq!(base.u, moved.u);
    }

    #[test]
    fn undersized_grid_is_rejected() {
        let r = SpectralField::sine(9, 1.0);
        let s = SpectralField::zeros(1);
        let w = WaveSpeed::cosine(None).unwrap();
        assert!(build_u(&r, &s, &w, 16).is_err());
    }
}
