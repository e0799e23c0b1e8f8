//! Invariants that must hold for arbitrary inputs.

use proptest::prelude::*;
use vvwave_core::diagnostics::random_field;
use vvwave_core::dynamics::{chi, cutoff_q, stopping_predicate};
use vvwave_core::integrator::{aligned_path, Stepper};
use vvwave_core::noise::{keyed_normal, keyed_u64};
use vvwave_core::spectral::oversampled_len;
use vvwave_core::*;

fn field(seed: u64, stream: u64, modes: usize, amp: f64) -> Field {
    random_field(seed, stream, modes, amp, 1.0)
}

fn speeds() -> Vec<Speed> {
    vec![
        WaveSpeed::constant(1.4, None).unwrap(),
        WaveSpeed::cosine(None).unwrap(),
        WaveSpeed::liquid_crystal(1.0, 1.5, None).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_inverts_antiderivative(seed in any::<u64>(), modes in 1usize..40, amp in 0.01f64..10.0) {
        let f = field(seed, 0, modes, amp);
        let back = f.antiderivative().unwrap().derivative();
        prop_assert!(back.max_coeff_diff(&f) <= 1e-13 * amp.max(1.0));
        let g = f.derivative().antiderivative().unwrap();
        prop_assert!(g.max_coeff_diff(&f) <= 1e-13 * amp.max(1.0));
    }

    #[test]
    fn projection_commutes_with_derivative(seed in any::<u64>(), modes in 2usize..40, n in 1usize..40) {
        let f = field(seed, 0, modes, 1.0);
        prop_assert_eq!(f.project(n).derivative(), f.derivative().project(n));
    }

    #[test]
    fn parseval_matches_grid_quadrature(seed in any::<u64>(), modes in 1usize..60) {
        let f = field(seed, 0, modes, 1.0);
        let m = oversampled_len(modes, 2);
        let quad = f.to_grid(m).norm_l2();
        let spec = f.norm(Norm::L2);
        prop_assert!((quad - spec).abs() <= 1e-12 * spec);
    }

    #[test]
    fn mollifier_keeps_mean_and_contracts(seed in any::<u64>(), delta in 1e-3f64..0.5, mean in -2.0f64..2.0) {
        let f = field(seed, 0, 20, 1.0).with_cosine(0, mean);
        let g = f.mollify(delta).unwrap();
        prop_assert!((g.mean() - f.mean()).abs() < 1e-15);
        prop_assert!(g.norm(Norm::L2) <= f.norm(Norm::L2) * (1.0 + 1e-15));
    }

    #[test]
    fn chi_is_a_monotone_switch(r in 0.0f64..10.0, dr in 0.0f64..1.0, k in 0.1f64..5.0) {
        let a = chi(r, k);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(chi(r + dr, k) <= a);
        if r <= k { prop_assert_eq!(a, 1.0); }
        if r >= k + 1.0 { prop_assert_eq!(a, 0.0); }
    }

    #[test]
    fn cutoff_square_below_threshold(seed in any::<u64>(), modes in 1usize..12) {
        let f = field(seed, 0, modes, 0.5);
        let k = f.norm(Norm::L2) * 2.0;
        let q = cutoff_q(&f, k);
        let m = oversampled_len(2 * modes, 2);
        let direct = f.to_grid(m).map(|v| v * v).to_spectral().unwrap().resized(2 * modes);
        prop_assert!(q.max_coeff_diff(&direct) < 1e-14);
        let big = f.scale(4.0 / f.norm(Norm::L2));
        prop_assert_eq!(cutoff_q(&big, 2.5), Field::zeros(2 * modes));
    }

    #[test]
    fn stopping_predicate_is_the_closed_energy_set(seed in any::<u64>(), scale in 0.1f64..3.0) {
        let st = SystemState::projected(0.0, &field(seed, 0, 8, 1.0), &field(seed, 1, 8, 1.0), 9).unwrap();
        let e = st.energy();
        prop_assert!(stopping_predicate(&st, e));
        prop_assert_eq!(stopping_predicate(&st, e * scale), scale <= 1.0);
    }

    #[test]
    fn constitutive_identity_for_random_pairs(seed in any::<u64>(), which in 0usize..3, amp in 0.05f64..1.5) {
        let r = field(seed, 0, 12, amp);
        let s = field(seed, 1, 12, amp);
        let speed = &speeds()[which];
        let u = build_u(&r, &s, speed, 512).unwrap();
        let res = constitutive_residual(&r, &s, &u.u, speed).unwrap();
        prop_assert!(res < 1e-8, "{} residual {res:e}", speed.name());
    }

    #[test]
    fn drift_and_noise_preserve_mean_difference(seed in any::<u64>(), which in 0usize..3, cutoff in proptest::bool::ANY) {
        let params = SdeParams::new(0.1, speeds()[which].clone(), SigmaProfile::sine(0.2, 0.1).unwrap(), None).unwrap();
        let st = SystemState::projected(0.0, &field(seed, 0, 10, 0.7), &field(seed, 1, 10, 0.7), 16).unwrap();
        let d = drift_limit(&st, &params).unwrap();
        prop_assert!((d.r.mean() - d.s.mean()).abs() < 1e-14);
        if cutoff {
            // inactive cut-off: the non-divergence form agrees up to the
            // reconstruction residual
            let c = drift_cutoff(&st, &params, 1e3).unwrap();
            prop_assert!((c.r.mean() - c.s.mean()).abs() < 1e-8, "{:e}", c.r.mean() - c.s.mean());
        }
        let g = diffusion(&st, &params).unwrap();
        prop_assert_eq!(g.r.mean() - g.s.mean(), 0.0);
        prop_assert!(d.r.max_mode() <= 15 && g.r.max_mode() <= 15);
    }

    #[test]
    fn transport_and_nonlinearity_exchange_no_energy(seed in any::<u64>(), which in 0usize..3) {
        let params = SdeParams::new(0.0, speeds()[which].clone(), SigmaProfile::zero(), None).unwrap();
        let st = SystemState::projected(0.0, &field(seed, 0, 10, 0.7), &field(seed, 1, 10, 0.7), 16).unwrap();
        let mut engine = Galerkin::new(16, 4, params).unwrap();
        let x = engine.energy_exchange(&st, DriftForm::Divergence).unwrap();
        prop_assert!(x.abs() < 1e-10, "exchange {x:e}");
    }

    #[test]
    fn field_files_round_trip(seed in any::<u64>(), modes in 0usize..30, amp in 1e-6f64..1e6) {
        let f = field(seed, 0, modes.max(1), amp).with_cosine(0, amp).resized(modes);
        let mut text = Vec::new();
        vvwave_core::io::write_spectral_csv(&mut text, &f).unwrap();
        prop_assert_eq!(&vvwave_core::io::read_spectral_csv(&text[..]).unwrap(), &f);
        let mut bin = Vec::new();
        vvwave_core::io::write_spectral_binary(&mut bin, &f).unwrap();
        prop_assert_eq!(&vvwave_core::io::read_spectral_binary(&bin[..]).unwrap(), &f);
        let g = f.to_grid(oversampled_len(modes, 2));
        let mut gtext = Vec::new();
        vvwave_core::io::write_grid_csv(&mut gtext, &g).unwrap();
        let back = vvwave_core::io::read_grid_csv(&gtext[..]).unwrap();
        prop_assert_eq!(back.values(), g.values());
    }

    #[test]
    fn keyed_streams_are_pure(seed in any::<u64>(), stream in any::<u64>(), i in any::<u64>()) {
        prop_assert_eq!(keyed_u64(seed, stream, i), keyed_u64(seed, stream, i));
        let z = keyed_normal(seed, stream, i);
        prop_assert!(z.is_finite());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mean_difference_is_conserved_along_noisy_runs(seed in any::<u64>(), which in 0usize..3) {
        let params = SdeParams::new(0.05, speeds()[which].clone(), SigmaProfile::sine(0.1, 0.05).unwrap(), None).unwrap();
        let r = field(seed, 0, 6, 0.5).with_cosine(0, 0.3);
        let s = field(seed, 1, 6, 0.5).with_cosine(0, 0.3);
        let st = SystemState::projected(0.0, &r, &s, 16).unwrap();
        let path = aligned_path(seed, 1e-3, 0.2).unwrap();
        let traj = simulate(&st, &params, &path, &SimConfig::new(1e-3, 0.2)).unwrap();
        for m in &traj.mean_difference {
            prop_assert!(m.abs() <= 1e-12);
        }
    }

    #[test]
    fn rerun_with_same_path_is_bit_identical(seed in any::<u64>()) {
        let params = SdeParams::new(0.05, WaveSpeed::cosine(None).unwrap(), SigmaProfile::sine(0.1, 0.05).unwrap(), None).unwrap();
        let st = SystemState::projected(0.0, &field(seed, 0, 6, 0.5), &field(seed, 1, 6, 0.5), 12).unwrap();
        let mut a = Stepper::new(12, 4, params.clone(), DriftForm::Divergence).unwrap();
        let mut b = Stepper::new(12, 4, params, DriftForm::Divergence).unwrap();
        let (mut x, mut y) = (st.clone(), st);
        for j in 0..20u64 {
            let dw = 0.03 * keyed_normal(seed, 9, j);
            x = a.step(&x, 1e-3, dw).unwrap();
            y = b.step(&y, 1e-3, dw).unwrap();
        }
        prop_assert_eq!(x.r, y.r);
        prop_assert_eq!(x.s, y.s);
    }

    #[test]
    fn coarse_paths_embed_in_fine_ones(seed in any::<u64>(), depth in 2u32..10, extra in 1u32..4) {
        let p = BrownianPath::generate(seed, 1.0, depth).unwrap();
        let fine = p.refine(extra);
        let coarse = fine.subsample(depth).unwrap();
        prop_assert_eq!(coarse.values(), p.values());
        let direct = BrownianPath::generate(seed, 1.0, depth + extra).unwrap();
        prop_assert_eq!(direct.values(), fine.values());
    }
}
