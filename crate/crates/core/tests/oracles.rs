//! Comparisons against independent reference computations: naive DFTs,
//! closed-form linear solutions and direct quadrature.

use std::f64::consts::{PI, TAU};

use num_complex::Complex;
use vvwave_core::diagnostics::random_field;
use vvwave_core::integrator::Stepper;
use vvwave_core::*;

type C = Complex<f64>;

/// `sum_{|k| <= K} c_k e^{2 pi i k x}` at `x_j = j / m`, from the `k >= 0` half.
fn synth(c: &[C], m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| {
            let x = j as f64 / m as f64;
            c.iter().enumerate().fold(0.0, |acc, (k, ck)| {
                let e = C::new(0.0, TAU * k as f64 * x).exp();
                acc + if k == 0 { ck.re } else { 2.0 * (ck * e).re }
            })
        })
        .collect()
}

fn analyse(v: &[f64], kmax: usize) -> Vec<C> {
    let m = v.len() as f64;
    (0..=kmax)
        .map(|k| {
            v.iter().enumerate().fold(C::new(0.0, 0.0), |acc, (j, &vj)| {
                acc + vj * C::new(0.0, -TAU * k as f64 * j as f64 / m).exp()
            }) / m
        })
        .collect()
}

fn deriv(c: &[C]) -> Vec<C> {
    c.iter().enumerate().map(|(k, ck)| ck * C::new(0.0, TAU * k as f64)).collect()
}

fn half(f: &Field, kmax: usize) -> Vec<C> {
    (0..=kmax as i64).map(|k| f.coeff(k)).collect()
}

/// One integrating-factor Euler-Maruyama step written out term by term.
fn reference_step(state: &State, params: &Params, m: usize, dt: f64, dw: f64) -> (Vec<C>, Vec<C>) {
    let kmax = state.order - 1;
    let r = half(&state.r, kmax);
    let s = half(&state.s, kmax);
    let z: Vec<C> = r.iter().zip(&s).map(|(a, b)| a + b).collect();
    let u = build_u(&state.r, &state.s, &params.speed, m).unwrap().u.into_values();
    let (rg, sg) = (synth(&r, m), synth(&s, m));
    let zx = synth(&deriv(&z), m);
    let x: Vec<f64> = (0..m).map(|j| j as f64 / m as f64).collect();
    let sigma: Vec<f64> = x.iter().map(|&x| params.sigma.eval(x)).collect();
    let c: Vec<f64> = u.iter().map(|&v| params.speed.eval_c(v)).collect();
    let ct: Vec<f64> = u.iter().map(|&v| params.speed.eval_c_tilde(v)).collect();

    let prod = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).collect::<Vec<f64>>();
    let tr = deriv(&analyse(&prod(&c, &rg), kmax));
    let ts: Vec<C> = deriv(&analyse(&prod(&c, &sg), kmax)).iter().map(|v| -v).collect();
    let q2: Vec<f64> = rg.iter().zip(&sg).map(|(a, b)| (a - b) * (a - b)).collect();
    let nl: Vec<C> = analyse(&prod(&ct, &q2), kmax).iter().map(|v| -v).collect();
    let w = prod(&sigma, &zx);
    let wx = synth(&deriv(&analyse(&w, kmax + 1)), m);
    let ito = analyse(&prod(&sigma, &wx), kmax);
    let g = analyse(&w, kmax);

    let advance = |x: &[C], t: &[C]| -> Vec<C> {
        (0..=kmax)
            .map(|k| {
                let decay = (-params.nu * (TAU * k as f64).powi(2) * dt).exp();
                (x[k] + dt * (t[k] + nl[k] + ito[k]) + dw * g[k]) * decay
            })
            .collect()
    };
    (advance(&r, &tr), advance(&s, &ts))
}

fn max_diff(a: &[C], f: &Field) -> f64 {
    a.iter().enumerate().map(|(k, c)| (c - f.coeff(k as i64)).norm()).fold(0.0, f64::max)
}

#[test]
fn one_step_matches_reference_implementation() {
    let speeds = [
        WaveSpeed::cosine(None).unwrap(),
        WaveSpeed::liquid_crystal(1.0, 1.4, None).unwrap(),
        WaveSpeed::constant(1.3, None).unwrap(),
    ];
    for (i, speed) in speeds.into_iter().enumerate() {
        let params = SdeParams::new(0.05, speed, SigmaProfile::sine(0.2, 0.1).unwrap(), None).unwrap();
        let order = 12;
        let r = random_field(40 + i as u64, 0, 6, 0.6, 1.5);
        let s = random_field(40 + i as u64, 1, 6, 0.6, 1.5);
        let state = SystemState::projected(0.0, &r, &s, order).unwrap();
        let mut stepper = Stepper::new(order, 4, params.clone(), DriftForm::Divergence).unwrap();
        let m = stepper.engine().grid_len();
        let (dt, dw) = (1e-3, 0.021);
        let next = stepper.step(&state, dt, dw).unwrap();
        let (er, es) = reference_step(&state, &params, m, dt, dw);
        let d = max_diff(&er, &next.r).max(max_diff(&es, &next.s));
        assert!(d < 1e-14, "{}: step differs from the reference by {d:e}", params.speed.name());
    }
}

#[test]
fn single_mode_linear_run_approaches_exact_decay() {
    let nu = 0.05;
    let params = SdeParams::new(nu, WaveSpeed::constant(1.0, None).unwrap(), SigmaProfile::zero(), None).unwrap();
    let t_end = 0.25;
    let initial = SystemState::projected(0.0, &Field::sine(1, 1.0), &Field::zeros(0), 8).unwrap();
    let mut errors = Vec::new();
    let mut field_errors = Vec::new();
    for steps in [1usize << 10, 1 << 12] {
        let dt = t_end / steps as f64;
        let path = vvwave_core::integrator::aligned_path(0, dt, t_end).unwrap();
        let traj = simulate(&initial, &params, &path, &SimConfig::new(dt, t_end)).unwrap();
        let exact_norm = (-4.0 * PI * PI * nu * t_end).exp() / 2f64.sqrt();
        let norm = traj.norm_r.last().copied().unwrap();
        errors.push((norm - exact_norm).abs());
        // the field itself is R(t, x) = e^{-4 pi^2 nu t} sin(2 pi (x + t))
        let g = |x: f64| (-4.0 * PI * PI * nu * t_end).exp() * (TAU * (x + t_end)).sin();
        let exact = GridField::from_fn(64, g).to_spectral().unwrap();
        field_errors.push(traj.final_state.r.resized(31).distance(&exact));
    }
    // first order in dt: a quarter of the step gives a quarter of the error
    let ratio = field_errors[0] / field_errors[1];
    assert!((3.2..4.8).contains(&ratio), "field errors {field_errors:?}");
    assert!(errors[1] < errors[0], "norm errors {errors:?}");
}

#[test]
fn explicit_transport_amplification_matches_closed_form() {
    // viscosity is integrated exactly, so the only norm error is the
    // explicit Euler factor |1 + 2 pi i c dt| per step
    let (nu, c0, t_end, steps) = (0.05, 1.0, 0.25, 1usize << 10);
    let dt = t_end / steps as f64;
    let params = SdeParams::new(nu, WaveSpeed::constant(c0, None).unwrap(), SigmaProfile::zero(), None).unwrap();
    let initial = SystemState::projected(0.0, &Field::sine(1, 1.0), &Field::zeros(0), 8).unwrap();
    let path = vvwave_core::integrator::aligned_path(0, dt, t_end).unwrap();
    let traj = simulate(&initial, &params, &path, &SimConfig::new(dt, t_end)).unwrap();
    let growth = (1.0 + (TAU * c0 * dt).powi(2)).powf(steps as f64 / 2.0);
    let predicted = (-4.0 * PI * PI * nu * t_end).exp() / 2f64.sqrt() * growth;
    let norm = traj.norm_r.last().copied().unwrap();
    assert!((norm - predicted).abs() < 1e-13, "norm {norm}, predicted {predicted}");
}

/// Composite Simpson rule with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Simpson on each piece between the breakpoints that fall inside `[0, u]`.
fn piecewise_simpson(f: impl Fn(f64) -> f64 + Copy, u: f64, breaks: &[f64]) -> f64 {
    let (lo, hi) = (u.min(0.0), u.max(0.0));
    let mut cuts = vec![lo];
    cuts.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
    cuts.push(hi);
    let total: f64 = cuts.windows(2).map(|w| simpson(f, w[0], w[1], 2000)).sum();
    if u < 0.0 {
        -total
    } else {
        total
    }
}

#[test]
fn antiderivatives_match_simpson_quadrature() {
    let nodes: Vec<(f64, f64)> = vec![(-2.0, 1.2), (-0.5, 1.8), (0.3, 1.1), (1.7, 1.6)];
    let breaks: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    let speeds = [
        WaveSpeed::liquid_crystal(1.0, 1.5, None).unwrap(),
        WaveSpeed::liquid_crystal(1.3, 0.8, None).unwrap(),
        WaveSpeed::cosine(None).unwrap(),
        WaveSpeed::tabulated(nodes.clone(), None).unwrap(),
        WaveSpeed::from_spec(&SpeedSpec::Tabulated { nodes, width: 0.2 }, None).unwrap(),
    ];
    for speed in &speeds {
        for &u in &[-2.7, -1.0, -0.2, 0.4, 1.3, 2.9] {
            // split at the table nodes, where the unsmoothed profile has kinks
            let q = piecewise_simpson(|v| speed.eval_c(v), u, &breaks);
            let f = speed.eval_f(u);
            assert!((f - q).abs() < 1e-9, "{}: F({u}) = {f}, quadrature {q}", speed.name());
            let back = speed.eval_f_inverse(f).unwrap();
            assert!((back - u).abs() < 1e-10, "{}: F^-1(F({u})) = {back}", speed.name());
        }
    }
}

#[test]
fn diffusion_matches_grid_product_oracle() {
    let params = SdeParams::new(0.0, WaveSpeed::cosine(None).unwrap(), SigmaProfile::sine(0.4, 0.25).unwrap(), None).unwrap();
    let order = 10;
    let state = SystemState::projected(0.0, &Field::sine(3, 0.7), &Field::cosine(3, -0.2), order).unwrap();
    let g = diffusion(&state, &params).unwrap();
    assert_eq!(g.r, g.s);
    let z = half(&(&state.r + &state.s), order - 1);
    let m = 128;
    let zx = synth(&deriv(&z), m);
    let w: Vec<f64> = (0..m).map(|j| params.sigma.eval(j as f64 / m as f64) * zx[j]).collect();
    let expected = analyse(&w, order - 1);
    assert!(max_diff(&expected, &g.r) < 1e-12);

    let constant = SdeParams::new(0.0, WaveSpeed::cosine(None).unwrap(), SigmaProfile::constant(0.3).unwrap(), None).unwrap();
    let g = diffusion(&state, &constant).unwrap();
    let expected = (&state.r + &state.s).derivative().scale(0.3);
    assert!(g.r.distance(&expected) < 1e-13);
}

#[test]
fn parseval_energy_matches_oversampled_quadrature() {
    for seed in 0..20 {
        let r = random_field(seed, 0, 24, 1.0, 1.0);
        let s = random_field(seed, 1, 24, 1.0, 1.0);
        let st = SystemState::projected(0.0, &r, &s, 25).unwrap();
        let (e, d) = diagnostics::energy(&st);
        let m = 256;
        let quad = |f: &Field| synth(&half(f, 24), m).iter().map(|v| v * v).sum::<f64>() / m as f64;
        let eq = quad(&st.r) + quad(&st.s);
        let dq = quad(&st.r.derivative()) + quad(&st.s.derivative());
        assert!((e - eq).abs() <= 1e-12 * eq, "energy {e} vs {eq}");
        assert!((d - dq).abs() <= 1e-12 * dq, "dissipation {d} vs {dq}");
    }
}

#[test]
fn single_precision_run_tracks_double_precision() {
    let p64 = SdeParams::new(0.05, WaveSpeed::cosine(None).unwrap(), SigmaProfile::sine(0.1, 0.05).unwrap(), None).unwrap();
    let p32 = SdeParams::<f32>::new(
        0.05,
        WaveSpeed::cosine(None).unwrap(),
        SigmaProfile::sine(0.1f32, 0.05).unwrap(),
        None,
    )
    .unwrap();
    let r = SpectralField::<f64>::sine(1, 0.5);
    let s = SpectralField::<f64>::sine(1, -0.5);
    let r32 = SpectralField::<f32>::sine(1, 0.5);
    let s32 = SpectralField::<f32>::sine(1, -0.5);
    let (dt, t_end) = (1e-3, 0.1);
    let path = vvwave_core::integrator::aligned_path(3, dt, t_end).unwrap();
    let cfg64 = SimConfig::<f64>::new(dt, t_end);
    let cfg32 = SimConfig::<f32>::new(dt, t_end);
    let a = simulate(&SystemState::projected(0.0, &r, &s, 16).unwrap(), &p64, &path, &cfg64).unwrap();
    let b = simulate(&SystemState::projected(0.0f32, &r32, &s32, 16).unwrap(), &p32, &path, &cfg32).unwrap();
    let ea = a.energy.last().unwrap();
    let eb = b.energy.last().unwrap();
    assert!((ea - eb).abs() < 1e-4 * ea, "f64 {ea} vs f32 {eb}");
}
