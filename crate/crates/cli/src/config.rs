//! Experiment configuration.
//!
//! The file format is TOML with fixed sections. Every key has a default, so
//! an empty file is a valid configuration; the fully materialized result is
//! what goes into the run manifest. Validation collects every problem it
//! finds, each tagged with the dotted path of the offending key.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};
use toml::{Table, Value};
use vvwave_core::diagnostics::{random_field, RunSetup};
use vvwave_core::{Field, Params, SdeParams, Sigma, SigmaProfile, SigmaSpec, SimConfig, Speed, SpeedSpec, WaveSpeed};

/// Tolerance on `|mean(R0 - S0)|` at load time.
pub const MEAN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub key: String,
    pub message: String,
}

/// All violations found in one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub issues: Vec<Issue>,
}

impl ConfigError {
    fn single(key: &str, message: impl Into<String>) -> Self {
        Self { issues: vec![Issue { key: key.into(), message: message.into() }] }
    }

    pub fn mentions(&self, key: &str) -> bool {
        self.issues.iter().any(|i| i.key == key)
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} configuration error(s):", self.issues.len())?;
        for i in &self.issues {
            writeln!(f, "  {}: {}", i.key, i.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSection {
    pub modes: usize,
    pub oversample: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysicsSection {
    pub nu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedSection {
    #[serde(flatten)]
    pub spec: SpeedSpec,
    pub kappa: f64,
    pub smoothing_level: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSection {
    pub horizon: f64,
    pub dt: f64,
    pub sample_cadence: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mode {
    pub k: usize,
    pub cos: f64,
    pub sin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialSection {
    FourierModes {
        r: Vec<Mode>,
        s: Vec<Mode>,
    },
    Random {
        #[serde(serialize_with = "seed_value")]
        seed: u64,
        max_mode: usize,
        amplitude: f64,
        decay: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSection {
    #[serde(serialize_with = "seed_value")]
    pub seed: u64,
    pub output_dir: String,
    pub snapshots: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSection {
    pub paths: usize,
    pub orders: Vec<usize>,
    pub p: f64,
    pub exponents: Vec<f64>,
    pub band: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSection {
    pub orders: Vec<usize>,
    pub paths: usize,
    pub final_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommutatorFields {
    Standard,
    Initial,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorSection {
    pub deltas: Vec<f64>,
    pub grid: usize,
    pub fields: CommutatorFields,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderSection {
    pub paths: usize,
    pub gamma: f64,
    pub band: [f64; 2],
    pub deterministic_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuitySection {
    pub levels: usize,
    pub band: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergySection {
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutoffSection {
    pub k: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_level: Option<f64>,
}

/// A fully validated experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub grid: GridSection,
    pub physics: PhysicsSection,
    pub speed: SpeedSection,
    pub sigma: SigmaSpec,
    pub time: TimeSection,
    pub initial: InitialSection,
    pub run: RunSection,
    pub ensemble: EnsembleSection,
    pub convergence: ConvergenceSection,
    pub commutator: CommutatorSection,
    pub holder: HolderSection,
    pub continuity: ContinuitySection,
    pub energy: EnergySection,
    pub cutoff: CutoffSection,
}

// TOML integers are signed, so seeds past i64::MAX are written as strings.
fn seed_value<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(*seed) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&seed.to_string()),
    }
}

impl Config {
    pub fn wave_speed(&self) -> vvwave_core::Result<Speed> {
        let base = WaveSpeed::from_spec(&self.speed.spec, Some(self.speed.kappa))?;
        Ok(base.smooth_speed(self.speed.smoothing_level))
    }

    pub fn sigma_profile(&self) -> vvwave_core::Result<Sigma> {
        SigmaProfile::from_spec(&self.sigma)
    }

    pub fn params(&self) -> vvwave_core::Result<Params> {
        SdeParams::new(self.physics.nu, self.wave_speed()?, self.sigma_profile()?, self.physics.cutoff_k)
    }

    pub fn initial_fields(&self) -> (Field, Field) {
        initial_fields(&self.initial)
    }

    pub fn setup(&self) -> vvwave_core::Result<RunSetup> {
        let (r0, s0) = self.initial_fields();
        let mut setup = RunSetup::new(self.params()?, r0, s0, self.time.dt, self.time.horizon);
        setup.oversample = self.grid.oversample;
        Ok(setup)
    }

    /// Seeds `run.seed, run.seed + 1, ...` for an ensemble of `n` paths.
    pub fn seeds(&self, n: usize) -> Vec<u64> {
        (0..n as u64).map(|i| self.run.seed.wrapping_add(i)).collect()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("materialized configs are always representable")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("materialized configs are always representable")
    }
}

fn initial_fields(initial: &InitialSection) -> (Field, Field) {
    match initial {
        InitialSection::FourierModes { r, s } => (modes_field(r), modes_field(s)),
        InitialSection::Random { seed, max_mode, amplitude, decay } => (
            random_field(*seed, 0, *max_mode, *amplitude, *decay),
            random_field(*seed, 1, *max_mode, *amplitude, *decay),
        ),
    }
}

fn modes_field(modes: &[Mode]) -> Field {
    modes
        .iter()
        .fold(Field::zeros(0), |f, m| f.with_cosine(m.k, m.cos).with_sine(m.k, m.sin))
}

/// Parse configuration text. Tabulated speed files are resolved against the
/// current directory.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    parse_config_in(text, Path::new("."))
}

/// Parse configuration text, resolving relative file references against `base`.
pub fn parse_config_in(text: &str, base: &Path) -> Result<Config, ConfigError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::single("<file>", e.to_string()))?;
    from_table(&table, base)
}

pub fn load_table(path: &Path) -> Result<Table, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::single("<file>", format!("cannot read {}: {e}", path.display())))?;
    text.parse().map_err(|e: toml::de::Error| ConfigError::single("<file>", e.to_string()))
}

/// Set `section.key` in a raw table, creating the section if needed.
pub fn set_key(table: &mut Table, section: &str, key: &str, value: Value) {
    let entry = table.entry(section.to_string()).or_insert_with(|| Value::Table(Table::new()));
    if let Value::Table(t) = entry {
        t.insert(key.to_string(), value);
    }
}

const SECTIONS: &[&str] = &[
    "grid",
    "physics",
    "speed",
    "sigma",
    "time",
    "initial",
    "run",
    "ensemble",
    "convergence",
    "commutator",
    "holder",
    "continuity",
    "energy",
    "cutoff",
];

struct Reader {
    issues: Vec<Issue>,
}

/// One section, with a record of the keys read so leftovers can be flagged.
struct Section<'a> {
    name: &'static str,
    table: Option<&'a Table>,
    used: Vec<&'static str>,
}

impl<'a> Section<'a> {
    fn raw(&mut self, key: &'static str) -> Option<&'a Value> {
        self.used.push(key);
        self.table.and_then(|t| t.get(key))
    }

    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }
}

fn expect_float(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

impl Reader {
    fn push(&mut self, key: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue { key: key.into(), message: message.into() });
    }

    fn section<'a>(&mut self, root: &'a Table, name: &'static str) -> Section<'a> {
        let table = match root.get(name) {
            None => None,
            Some(Value::Table(t)) => Some(t),
            Some(_) => {
                self.push(name, "expected a table");
                None
            }
        };
        Section { name, table, used: Vec::new() }
    }

    fn finish(&mut self, sec: Section<'_>) {
        if let Some(t) = sec.table {
            for key in t.keys() {
                if !sec.used.contains(&key.as_str()) {
                    self.push(sec.path(key), "unknown key");
                }
            }
        }
    }

    fn float(&mut self, sec: &mut Section<'_>, key: &'static str, default: f64, rule: Rule) -> f64 {
        self.opt_float(sec, key, rule).unwrap_or(default)
    }

    fn opt_float(&mut self, sec: &mut Section<'_>, key: &'static str, rule: Rule) -> Option<f64> {
        let v = sec.raw(key)?;
        match expect_float(v) {
            Some(x) => match rule.check(x) {
                Ok(()) => Some(x),
                Err(m) => {
                    self.push(sec.path(key), m);
                    None
                }
            },
            None => {
                self.push(sec.path(key), format!("expected a number, found {}", v.type_str()));
                None
            }
        }
    }

    fn count(&mut self, sec: &mut Section<'_>, key: &'static str, default: usize, min: usize) -> usize {
        let Some(v) = sec.raw(key) else { return default };
        match v.as_integer() {
            Some(i) if i >= min as i64 => i as usize,
            Some(i) => {
                self.push(sec.path(key), format!("must be at least {min}, got {i}"));
                default
            }
            None => {
                self.push(sec.path(key), format!("expected an integer, found {}", v.type_str()));
                default
            }
        }
    }

    fn seed(&mut self, sec: &mut Section<'_>, key: &'static str, default: u64) -> u64 {
        let Some(v) = sec.raw(key) else { return default };
        let parsed = match v {
            Value::Integer(i) => u64::try_from(*i).ok(),
            Value::String(s) => s.parse().ok(),
            _ => None,
        };
        parsed.unwrap_or_else(|| {
            self.push(sec.path(key), "expected a non-negative 64-bit integer");
            default
        })
    }

    fn boolean(&mut self, sec: &mut Section<'_>, key: &'static str, default: bool) -> bool {
        let Some(v) = sec.raw(key) else { return default };
        v.as_bool().unwrap_or_else(|| {
            self.push(sec.path(key), format!("expected a boolean, found {}", v.type_str()));
            default
        })
    }

    fn string(&mut self, sec: &mut Section<'_>, key: &'static str) -> Option<String> {
        let v = sec.raw(key)?;
        match v.as_str() {
            Some(s) => Some(s.to_string()),
            None => {
                self.push(sec.path(key), format!("expected a string, found {}", v.type_str()));
                None
            }
        }
    }

    fn floats(&mut self, sec: &mut Section<'_>, key: &'static str, default: &[f64], rule: Rule) -> Vec<f64> {
        let Some(v) = sec.raw(key) else { return default.to_vec() };
        let Some(items) = v.as_array() else {
            self.push(sec.path(key), format!("expected an array, found {}", v.type_str()));
            return default.to_vec();
        };
        let mut out = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            match expect_float(item).map(|x| (x, rule.check(x))) {
                Some((x, Ok(()))) => out.push(x),
                Some((_, Err(m))) => self.push(format!("{}[{i}]", sec.path(key)), m),
                None => self.push(format!("{}[{i}]", sec.path(key)), "expected a number"),
            }
        }
        out
    }

    fn counts(&mut self, sec: &mut Section<'_>, key: &'static str, default: &[usize], min: usize) -> Vec<usize> {
        let Some(v) = sec.raw(key) else { return default.to_vec() };
        let Some(items) = v.as_array() else {
            self.push(sec.path(key), format!("expected an array, found {}", v.type_str()));
            return default.to_vec();
        };
        let mut out = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            match item.as_integer() {
                Some(n) if n >= min as i64 => out.push(n as usize),
                _ => self.push(format!("{}[{i}]", sec.path(key)), format!("expected an integer >= {min}")),
            }
        }
        out
    }

    fn band(&mut self, sec: &mut Section<'_>, key: &'static str, default: [f64; 2]) -> [f64; 2] {
        let v = self.floats(sec, key, &default, Rule::Finite);
        match v.as_slice() {
            [lo, hi] if lo < hi => [*lo, *hi],
            _ => {
                self.push(sec.path(key), "expected two increasing numbers [lo, hi]");
                default
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Rule {
    Finite,
    NonNegative,
    Positive,
}

impl Rule {
    fn check(self, x: f64) -> Result<(), String> {
        match self {
            _ if !x.is_finite() => Err(format!("must be finite, got {x}")),
            Rule::NonNegative if x < 0.0 => Err(format!("must be >= 0, got {x}")),
            Rule::Positive if x <= 0.0 => Err(format!("must be > 0, got {x}")),
            _ => Ok(()),
        }
    }
}

fn strictly_increasing<T: PartialOrd>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// The step closest to `dt` that divides `horizon` into a whole number of steps.
pub fn nearest_aligned_step(dt: f64, horizon: f64) -> f64 {
    let n = (horizon / dt).round().max(1.0);
    horizon / n
}

/// Validate a raw table into a [`Config`].
pub fn from_table(root: &Table, base: &Path) -> Result<Config, ConfigError> {
    let mut rd = Reader { issues: Vec::new() };
    for key in root.keys() {
        if !SECTIONS.contains(&key.as_str()) {
            rd.push(key.clone(), "unknown section");
        }
    }

    let mut sec = rd.section(root, "grid");
    let grid = GridSection { modes: rd.count(&mut sec, "modes", 128, 2), oversample: rd.count(&mut sec, "oversample", 4, 2) };
    rd.finish(sec);

    let mut sec = rd.section(root, "physics");
    let physics = PhysicsSection {
        nu: rd.float(&mut sec, "nu", 0.05, Rule::NonNegative),
        cutoff_k: rd.opt_float(&mut sec, "cutoff_k", Rule::Positive),
    };
    rd.finish(sec);

    let speed = read_speed(&mut rd, root, base);

    let mut sec = rd.section(root, "sigma");
    let kind = rd.string(&mut sec, "kind").unwrap_or_else(|| "sine".into());
    let sigma = match kind.as_str() {
        "sine" => {
            let a = rd.float(&mut sec, "a", 0.1, Rule::Finite);
            let b = rd.float(&mut sec, "b", 0.05, Rule::Finite);
            if !(a > b.abs()) {
                rd.push("sigma.a", format!("sine sigma needs a > |b|, got a = {a}, b = {b}"));
            }
            SigmaSpec::Sine { a, b }
        }
        "constant" => SigmaSpec::Constant { value: rd.float(&mut sec, "value", 0.0, Rule::Finite) },
        other => {
            rd.push("sigma.kind", format!("unknown sigma kind {other:?}; expected \"sine\" or \"constant\""));
            SigmaSpec::Constant { value: 0.0 }
        }
    };
    rd.finish(sec);

    let mut sec = rd.section(root, "time");
    let time = TimeSection {
        horizon: rd.float(&mut sec, "horizon", 0.5, Rule::NonNegative),
        dt: rd.float(&mut sec, "dt", 1e-4, Rule::Positive),
        sample_cadence: rd.count(&mut sec, "sample_cadence", 10, 1),
    };
    rd.finish(sec);
    if let Err(e) = SimConfig::<f64>::new(time.dt, time.horizon).steps() {
        let suggestion = nearest_aligned_step(time.dt, time.horizon);
        rd.push(
            "time.dt",
            format!("dt = {} does not divide horizon = {} into whole steps ({e}); use dt = {suggestion}", time.dt, time.horizon),
        );
    }

    let mut sec = rd.section(root, "run");
    let run = RunSection {
        seed: rd.seed(&mut sec, "seed", 0),
        output_dir: rd.string(&mut sec, "output_dir").unwrap_or_else(|| "out".into()),
        snapshots: rd.boolean(&mut sec, "snapshots", false),
    };
    rd.finish(sec);

    let initial = read_initial(&mut rd, root);
    let (r0, s0) = initial_fields(&initial);
    let mean = r0.mean() - s0.mean();
    if mean.abs() > MEAN_TOLERANCE {
        rd.push("initial", format!("mean(R0 - S0) = {mean} but the zero-mean constraint requires 0"));
    }

    let mut sec = rd.section(root, "ensemble");
    let ensemble = EnsembleSection {
        paths: rd.count(&mut sec, "paths", 32, 8),
        orders: rd.counts(&mut sec, "orders", &[32, 64, 128], 2),
        p: rd.float(&mut sec, "p", 2.0, Rule::NonNegative),
        exponents: rd.floats(&mut sec, "exponents", &[2.0, 3.0], Rule::NonNegative),
        band: rd.band(&mut sec, "band", [0.8, 1.25]),
    };
    if !strictly_increasing(&ensemble.orders) || ensemble.orders.is_empty() {
        rd.push("ensemble.orders", "must be a non-empty strictly increasing list");
    }
    rd.finish(sec);

    let mut sec = rd.section(root, "convergence");
    let convergence = ConvergenceSection {
        orders: rd.counts(&mut sec, "orders", &[32, 64, 128, 256], 2),
        paths: rd.count(&mut sec, "paths", 16, 1),
        final_ratio: rd.float(&mut sec, "final_ratio", 0.25, Rule::Positive),
    };
    if convergence.orders.len() < 3 || !strictly_increasing(&convergence.orders) {
        rd.push("convergence.orders", "need at least three strictly increasing orders");
    }
    rd.finish(sec);

    let mut sec = rd.section(root, "commutator");
    let deltas = rd.floats(&mut sec, "deltas", &[0.2, 0.1, 0.05, 0.025, 0.0125], Rule::Positive);
    if deltas.len() < 2 || deltas.windows(2).any(|w| !(w[1] < w[0])) {
        rd.push("commutator.deltas", "need at least two strictly decreasing values");
    }
    let grid_len = rd.count(&mut sec, "grid", 1024, 16);
    let fields = match rd.string(&mut sec, "fields").as_deref() {
        None | Some("standard") => CommutatorFields::Standard,
        Some("initial") => CommutatorFields::Initial,
        Some(other) => {
            rd.push("commutator.fields", format!("expected \"standard\" or \"initial\", got {other:?}"));
            CommutatorFields::Standard
        }
    };
    let commutator = CommutatorSection { deltas, grid: grid_len, fields };
    rd.finish(sec);

    let mut sec = rd.section(root, "holder");
    let holder = HolderSection {
        paths: rd.count(&mut sec, "paths", 16, 1),
        gamma: rd.float(&mut sec, "gamma", 0.5, Rule::Positive),
        band: rd.band(&mut sec, "band", [0.4, 0.65]),
        deterministic_min: rd.float(&mut sec, "deterministic_min", 0.9, Rule::Finite),
    };
    rd.finish(sec);

    let mut sec = rd.section(root, "continuity");
    let continuity =
        ContinuitySection { levels: rd.count(&mut sec, "levels", 4, 2), band: rd.band(&mut sec, "band", [0.35, 0.65]) };
    rd.finish(sec);

    let mut sec = rd.section(root, "energy");
    let energy = EnergySection {
        tolerance: rd.float(&mut sec, "tolerance", 5e-3, Rule::Positive),
        exact_tolerance: rd.opt_float(&mut sec, "exact_tolerance", Rule::Positive),
    };
    rd.finish(sec);

    let mut sec = rd.section(root, "cutoff");
    let cutoff = CutoffSection {
        k: rd.float(&mut sec, "k", 1e6, Rule::Positive),
        tolerance: rd.float(&mut sec, "tolerance", 1e-10, Rule::Positive),
        stop_level: rd.opt_float(&mut sec, "stop_level", Rule::Positive),
    };
    rd.finish(sec);

    if rd.issues.is_empty() {
        Ok(Config {
            grid,
            physics,
            speed: speed.expect("speed is always resolved when there are no issues"),
            sigma,
            time,
            initial,
            run,
            ensemble,
            convergence,
            commutator,
            holder,
            continuity,
            energy,
            cutoff,
        })
    } else {
        Err(ConfigError { issues: rd.issues })
    }
}

fn read_speed(rd: &mut Reader, root: &Table, base: &Path) -> Option<SpeedSection> {
    let mut sec = rd.section(root, "speed");
    let kind = rd.string(&mut sec, "kind").unwrap_or_else(|| "cosine".into());
    let kappa = rd.opt_float(&mut sec, "kappa", Rule::Positive);
    let smoothing_level = rd.count(&mut sec, "smoothing_level", 0, 0);
    let built = match kind.as_str() {
        "constant" => WaveSpeed::constant(rd.float(&mut sec, "c0", 1.0, Rule::Positive), kappa),
        "cosine" => WaveSpeed::cosine(kappa),
        "liquid-crystal" => {
            let alpha = rd.float(&mut sec, "alpha", 1.0, Rule::Positive);
            let beta = rd.float(&mut sec, "beta", 1.5, Rule::Positive);
            WaveSpeed::liquid_crystal(alpha, beta, kappa)
        }
        "tabulated" => {
            let width = rd.float(&mut sec, "width", 0.0, Rule::NonNegative);
            let spec = match (rd.string(&mut sec, "file"), sec.raw("nodes")) {
                (Some(_), Some(_)) => {
                    rd.push("speed.nodes", "give either `file` or `nodes`, not both");
                    None
                }
                (Some(file), None) => read_table_file(rd, &base.join(PathBuf::from(file)), width),
                (None, Some(nodes)) => read_nodes(rd, nodes, width),
                (None, None) => {
                    rd.push("speed.file", "a tabulated speed needs `file` or `nodes`");
                    None
                }
            };
            match spec {
                Some(spec) => WaveSpeed::from_spec(&spec, kappa),
                None => {
                    rd.finish(sec);
                    return None;
                }
            }
        }
        other => {
            rd.push(
                "speed.kind",
                format!("unknown speed kind {other:?}; expected constant, cosine, liquid-crystal or tabulated"),
            );
            rd.finish(sec);
            return None;
        }
    };
    rd.finish(sec);
    match built {
        Ok(speed) => Some(SpeedSection { spec: speed.to_spec(), kappa: speed.kappa(), smoothing_level }),
        Err(e) => {
            rd.push("speed", e.to_string());
            None
        }
    }
}

fn read_table_file(rd: &mut Reader, path: &Path, width: f64) -> Option<SpeedSpec> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            rd.push("speed.file", format!("cannot read {}: {e}", path.display()));
            return None;
        }
    };
    match WaveSpeed::<f64>::tabulated_from_csv(&text, None) {
        Ok(speed) => match speed.to_spec() {
            SpeedSpec::Tabulated { nodes, .. } => Some(SpeedSpec::Tabulated { nodes, width }),
            _ => unreachable!("a tabulated speed maps to a tabulated spec"),
        },
        Err(e) => {
            rd.push("speed.file", format!("{}: {e}", path.display()));
            None
        }
    }
}

fn read_nodes(rd: &mut Reader, nodes: &Value, width: f64) -> Option<SpeedSpec> {
    let parsed = nodes.as_array().and_then(|items| {
        items
            .iter()
            .map(|p| match p.as_array().map(Vec::as_slice) {
                Some([u, c]) => Some((expect_float(u)?, expect_float(c)?)),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
    });
    match parsed {
        Some(nodes) => Some(SpeedSpec::Tabulated { nodes, width }),
        None => {
            rd.push("speed.nodes", "expected an array of [u, c] pairs");
            None
        }
    }
}

fn read_modes(rd: &mut Reader, sec: &mut Section<'_>, key: &'static str, default: Vec<Mode>) -> Vec<Mode> {
    let Some(v) = sec.raw(key) else { return default };
    let Some(items) = v.as_array() else {
        rd.push(sec.path(key), "expected an array of {k, cos, sin} tables");
        return default;
    };
    let mut out = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let path = format!("{}[{i}]", sec.path(key));
        let Some(t) = item.as_table() else {
            rd.push(path, "expected a table {k, cos, sin}");
            continue;
        };
        for extra in t.keys().filter(|k| !["k", "cos", "sin"].contains(&k.as_str())) {
            rd.push(format!("{path}.{extra}"), "unknown key");
        }
        let k = match t.get("k").and_then(Value::as_integer) {
            Some(k) if k >= 0 => k as usize,
            _ => {
                rd.push(format!("{path}.k"), "expected a non-negative integer");
                continue;
            }
        };
        let mut amp = |name: &str| match t.get(name) {
            None => 0.0,
            Some(v) => expect_float(v).filter(|x| x.is_finite()).unwrap_or_else(|| {
                rd.push(format!("{path}.{name}"), "expected a finite number");
                0.0
            }),
        };
        let cos = amp("cos");
        let sin = amp("sin");
        out.push(Mode { k, cos, sin });
    }
    out
}

fn read_initial(rd: &mut Reader, root: &Table) -> InitialSection {
    let mut sec = rd.section(root, "initial");
    let kind = rd.string(&mut sec, "kind").unwrap_or_else(|| "fourier-modes".into());
    let initial = match kind.as_str() {
        "fourier-modes" => InitialSection::FourierModes {
            r: read_modes(rd, &mut sec, "r", vec![Mode { k: 1, cos: 0.0, sin: 0.5 }]),
            s: read_modes(rd, &mut sec, "s", vec![Mode { k: 1, cos: 0.0, sin: -0.5 }]),
        },
        "random" => InitialSection::Random {
            seed: rd.seed(&mut sec, "seed", 0),
            max_mode: rd.count(&mut sec, "max_mode", 16, 1),
            amplitude: rd.float(&mut sec, "amplitude", 0.5, Rule::NonNegative),
            decay: rd.float(&mut sec, "decay", 2.0, Rule::Finite),
        },
        other => {
            rd.push("initial.kind", format!("unknown initial kind {other:?}; expected fourier-modes or random"));
            InitialSection::FourierModes { r: Vec::new(), s: Vec::new() }
        }
    };
    rd.finish(sec);
    initial
}
