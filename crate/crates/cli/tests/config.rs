use clap::Parser;
use vvwave_cli::config::nearest_aligned_step;
use vvwave_cli::{load, parse_config, Cli};

#[test]
fn empty_config_gives_the_reference_defaults() {
    let c = parse_config("").unwrap();
    assert_eq!(c.grid.modes, 128);
    assert_eq!(c.physics.nu, 0.05);
    assert_eq!(c.time.horizon, 0.5);
    assert_eq!(c.time.dt, 1e-4);
    assert_eq!(c.ensemble.orders, vec![32, 64, 128]);
    assert_eq!(c.wave_speed().unwrap().name(), "cosine");
    let (r, s) = c.initial_fields();
    assert!((r.mean() - s.mean()).abs() < 1e-15);
}

#[test]
fn every_issue_is_reported_at_once() {
    let text = r#"
        [grid]
        modes = 0
        [physics]
        nu = -1.0
        [time]
        dt = -0.1
        [sigma]
        kind = "sine"
        a = 0.1
        b = 0.5
    "#;
    let err = parse_config(text).unwrap_err();
    for key in ["grid.modes", "physics.nu", "time.dt"] {
        assert!(err.mentions(key), "{key} missing from:\n{err}");
    }
    assert!(err.issues.iter().any(|i| i.key.starts_with("sigma")), "{err}");
    let shown = err.to_string();
    assert!(shown.lines().count() > err.issues.len(), "{shown}");
}

#[test]
fn nonzero_mean_data_is_rejected_by_name() {
    let text = r#"
        [initial]
        kind = "fourier-modes"
        r = [{ k = 0, cos = 0.5 }, { k = 1, sin = 0.3 }]
        s = [{ k = 1, sin = 0.3 }]
    "#;
    let err = parse_config(text).unwrap_err();
    assert!(err.mentions("initial"), "{err}");
    assert!(err.to_string().contains("zero-mean"), "{err}");
}

#[test]
fn equal_means_are_accepted() {
    let text = r#"
        [initial]
        kind = "fourier-modes"
        r = [{ k = 0, cos = 0.5 }, { k = 1, sin = 0.3 }]
        s = [{ k = 0, cos = 0.5 }]
    "#;
    parse_config(text).unwrap();
}

#[test]
fn misaligned_step_suggests_a_divisor() {
    let err = parse_config("[time]\nhorizon = 0.5\ndt = 0.3\n").unwrap_err();
    assert!(err.mentions("time.dt"), "{err}");
    assert!(err.to_string().contains("use dt = 0.25"), "{err}");
    // nearest whole number of steps, recomputed here
    for (dt, t) in [(0.3f64, 0.5f64), (1e-4 * 1.3, 0.5), (0.07, 1.0)] {
        let n = (t / dt).round().max(1.0);
        assert!((nearest_aligned_step(dt, t) - t / n).abs() < 1e-15);
    }
}

#[test]
fn unknown_sections_and_keys_are_errors() {
    let err = parse_config("[grid]\nmodez = 4\n[plotting]\nx = 1\n").unwrap_err();
    assert!(err.mentions("grid.modez"), "{err}");
    assert!(err.mentions("plotting"), "{err}");
    let err = parse_config("[speed]\nkind = \"cosine\"\nc0 = 2.0\n").unwrap_err();
    assert!(err.mentions("speed.c0"), "{err}");
}

#[test]
fn command_line_overrides_reach_their_sections() {
    let cli = Cli::parse_from(["vvwave", "ensemble", "--modes", "16,32", "--paths", "9", "--seed", "7", "--nu", "0.2"]);
    let c = load(&cli).unwrap();
    assert_eq!(c.ensemble.orders, vec![16, 32]);
    assert_eq!(c.ensemble.paths, 9);
    assert_eq!(c.run.seed, 7);
    assert_eq!(c.physics.nu, 0.2);
    assert_eq!(c.seeds(3), vec![7, 8, 9]);

    let cli = Cli::parse_from(["vvwave", "simulate", "--modes", "24", "--dt", "1e-3"]);
    let c = load(&cli).unwrap();
    assert_eq!((c.grid.modes, c.time.dt), (24, 1e-3));
}

#[test]
fn overrides_that_do_not_apply_are_rejected() {
    for args in [
        vec!["vvwave", "simulate", "--deltas", "0.1,0.05"],
        vec!["vvwave", "simulate", "--modes", "16,32"],
        vec!["vvwave", "simulate", "--paths", "4"],
        vec!["vvwave", "commutator-study", "--modes", "16"],
    ] {
        let cli = Cli::parse_from(&args);
        assert!(load(&cli).is_err(), "{args:?} accepted");
    }
}

#[test]
fn materialized_config_reparses_identically() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/holder.toml")).unwrap();
    let c = parse_config(&text).unwrap();
    let again = parse_config(&c.to_toml()).unwrap();
    assert_eq!(again.to_json(), c.to_json());
}
