//! Plain-text key-value configuration.
//!
//! One `key = value` pair per line, `#` starts a comment. Keys live in a flat
//! namespace. Physical quantities take either SI units (rad/s, s) under the
//! bare key or a suffixed form: `_GHz` and `_MHz` for frequencies (cycles,
//! converted with 2 pi), `_ns` for times and `_dBm` for powers. Powers only
//! exist in dBm. Grids are written `min, max, count` with an optional fourth
//! token `log`; lists are comma separated.
//!
//! Values are stored in each key's canonical unit so that writing and
//! re-reading a configuration reproduces it exactly.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use crate::dynamics::{IntegratorMethod, IntegratorOptions};
use crate::params::SystemParams;
use crate::protocols::{DetectionConfig, OperatingPoint, ReadoutModel, ResetConfig, SimSettings};
use crate::pulse::PulseTiming;
use crate::response::PdiffScan;
use crate::sweep::{linspace, logspace};

/// Device defaults shipped with the crate.
pub const BUNDLED_DEVICE_CFG: &str = include_str!("../paper_device.cfg");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` is a {quantity} quantity; {hint}")]
    UnitMismatch { line: usize, key: String, quantity: &'static str, hint: String },
    #[error("line {line}: `{key}` = {value} is out of range ({reason})")]
    OutOfRange { line: usize, key: String, value: String, reason: &'static str },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Frequency,
    Time,
    Power,
    Scalar,
    Integer,
    Flag,
    Text,
    Choice(&'static [&'static str]),
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::Frequency => "frequency",
            Quantity::Time => "time",
            Quantity::Power => "power",
            Quantity::Scalar => "dimensionless",
            Quantity::Integer => "integer",
            Quantity::Flag => "boolean",
            Quantity::Text => "text",
            Quantity::Choice(_) => "choice",
        }
    }

    /// Conversion of a value in unit `suffix` to SI, or `None` when the suffix does not apply.
    fn unit(self, suffix: &str) -> Option<Unit> {
        match (self, suffix) {
            (Quantity::Frequency, "GHz") => Some(Unit::Mul(2.0 * PI * 1e9)),
            (Quantity::Frequency, "MHz") => Some(Unit::Mul(2.0 * PI * 1e6)),
            (Quantity::Time, "ns") => Some(Unit::Div(1e9)),
            (Quantity::Power, "dBm") => Some(Unit::Mul(1.0)),
            (Quantity::Power, _) => None,
            (Quantity::Frequency | Quantity::Time, "") => Some(Unit::Mul(1.0)),
            (_, "") => Some(Unit::Mul(1.0)),
            _ => None,
        }
    }

    fn hint(self) -> &'static str {
        match self {
            Quantity::Frequency => "use the bare key (rad/s) or the _GHz / _MHz suffix",
            Quantity::Time => "use the bare key (s) or the _ns suffix",
            Quantity::Power => "powers need the _dBm suffix",
            _ => "it takes no unit suffix",
        }
    }
}

/// Scale to SI; exact powers of ten divide so that e.g. 85 ns maps to 85e-9 s.
#[derive(Debug, Clone, Copy)]
enum Unit {
    Mul(f64),
    Div(f64),
}

impl Unit {
    fn to_si(self, v: f64) -> f64 {
        match self {
            Unit::Mul(f) => v * f,
            Unit::Div(f) => v / f,
        }
    }

    fn from_si(self, v: f64) -> f64 {
        match self {
            Unit::Mul(f) => v / f,
            Unit::Div(f) => v * f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Single,
    Grid,
    List,
}

#[derive(Debug, Clone, Copy)]
enum Range {
    Any,
    Positive,
    NonNegative,
    Fraction,
    HalfOpen,
    AtLeastOne,
}

impl Range {
    fn check(self, v: f64) -> Result<(), &'static str> {
        let ok = v.is_finite()
            && match self {
                Range::Any => true,
                Range::Positive => v > 0.0,
                Range::NonNegative => v >= 0.0,
                Range::Fraction => (0.0..=1.0).contains(&v),
                Range::HalfOpen => (0.0..0.5).contains(&v),
                Range::AtLeastOne => v >= 1.0,
            };
        if ok {
            return Ok(());
        }
        Err(match self {
            Range::Any => "must be finite",
            Range::Positive => "must be positive",
            Range::NonNegative => "must be non-negative",
            Range::Fraction => "must lie in [0, 1]",
            Range::HalfOpen => "must lie in [0, 0.5)",
            Range::AtLeastOne => "must be at least 1",
        })
    }
}

struct KeySpec {
    name: &'static str,
    quantity: Quantity,
    /// Unit the value is stored and written in.
    unit: &'static str,
    shape: Shape,
    range: Range,
}

const fn key(name: &'static str, quantity: Quantity, unit: &'static str, shape: Shape, range: Range) -> KeySpec {
    KeySpec { name, quantity, unit, shape, range }
}

use Quantity::*;
use Range::*;
use Shape::*;

const INTEGRATORS: &[&str] = &["adaptive", "fixed"];

#[rustfmt::skip]
const KEYS: &[KeySpec] = &[
    // device
    key("omega_ge", Frequency, "GHz", Single, Positive),
    key("omega_r", Frequency, "GHz", Single, Positive),
    key("chi", Frequency, "MHz", Single, Positive),
    key("kappa", Frequency, "MHz", Single, Positive),
    key("kappa_ext_ratio", Scalar, "", Single, Fraction),
    key("gamma", Frequency, "MHz", Single, NonNegative),
    key("gamma_phi", Frequency, "MHz", Single, NonNegative),
    key("init_excited_pop", Scalar, "", Single, Fraction),
    key("calib_anchor", Power, "dBm", Single, Any),
    key("calib_detuning", Frequency, "MHz", Single, Positive),
    // detection
    key("drive_detuning", Frequency, "MHz", Single, Positive),
    key("P_d", Power, "dBm", Single, Any),
    key("omega_s", Frequency, "GHz", Single, Positive),
    key("t_s", Time, "ns", Single, Positive),
    key("n_s", Scalar, "", Single, NonNegative),
    key("t_rise", Time, "ns", Single, Positive),
    key("readout_length", Time, "ns", Single, Positive),
    key("eps_ge", Scalar, "", Single, HalfOpen),
    key("eps_eg", Scalar, "", Single, HalfOpen),
    // reset
    key("P_dr", Power, "dBm", Single, Any),
    key("omega_rst", Frequency, "GHz", Single, Positive),
    key("n_rst", Scalar, "", Single, NonNegative),
    key("reset_stage", Time, "ns", Single, Positive),
    key("initial_pi", Flag, "", Single, Any),
    // continuous-wave spectroscopy
    key("probe_flux", Scalar, "", Single, Positive),
    key("pdiff_detuning", Frequency, "MHz", Single, Positive),
    key("pdiff_gamma", Frequency, "MHz", Single, NonNegative),
    key("pdiff_target_db", Scalar, "", Single, Positive),
    key("P_s", Power, "dBm", Single, Any),
    key("P_s_lo", Power, "dBm", Single, Any),
    key("P_s_hi", Power, "dBm", Single, Any),
    key("pdiff_scan_lo", Power, "dBm", Single, Any),
    key("pdiff_scan_hi", Power, "dBm", Single, Any),
    key("pdiff_scan_points", Integer, "", Single, AtLeastOne),
    // numerics
    key("n_max", Integer, "", Single, AtLeastOne),
    key("reset_n_max", Integer, "", Single, AtLeastOne),
    key("integrator", Choice(INTEGRATORS), "", Single, Any),
    key("max_step", Time, "ns", Single, Positive),
    key("rtol", Scalar, "", Single, Positive),
    key("atol", Scalar, "", Single, Positive),
    key("fock_check", Flag, "", Single, Any),
    key("samples", Integer, "", Single, AtLeastOne),
    // sweeps
    key("rabi_grid", Frequency, "MHz", Grid, NonNegative),
    key("reflect_power_grid", Power, "dBm", Grid, Any),
    key("reflect_freq_grid", Frequency, "GHz", Grid, Positive),
    key("power_grid", Power, "dBm", Grid, Any),
    key("freq_grid", Frequency, "GHz", Grid, Positive),
    key("reset_power_grid", Power, "dBm", Grid, Any),
    key("reset_freq_grid", Frequency, "GHz", Grid, Positive),
    key("t_s_list", Time, "ns", List, Positive),
    key("n_s_list", Scalar, "", List, Positive),
    // run
    key("out_dir", Text, "", Single, Any),
    key("workers", Integer, "", Single, AtLeastOne),
    key("strict", Flag, "", Single, Any),
];

impl KeySpec {
    fn canonical_unit(&self) -> Unit {
        self.quantity.unit(self.unit).expect("canonical unit is valid")
    }
}

fn spec(name: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.name == name)
}

/// Evenly spaced grid description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl GridSpec {
    fn points(&self, unit: Unit) -> Vec<f64> {
        let v = if self.log { logspace(self.min, self.max, self.count) } else { linspace(self.min, self.max, self.count) };
        v.into_iter().map(|x| unit.to_si(x)).collect()
    }
}

/// A stored value, in the key's canonical unit.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Integer(u64),
    Flag(bool),
    Text(String),
    Grid(GridSpec),
    List(Vec<f64>),
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

impl Value {
    fn canonical(&self) -> String {
        match self {
            Value::Number(v) => fmt_num(*v),
            Value::Integer(v) => v.to_string(),
            Value::Flag(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Grid(g) => {
                let mut s = format!("{}, {}, {}", fmt_num(g.min), fmt_num(g.max), g.count);
                if g.log {
                    s.push_str(", log");
                }
                s
            }
            Value::List(v) => v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(", "),
        }
    }
}

/// Splits `name_SUFFIX` into its base key and unit suffix.
fn split_key(raw: &str) -> (&str, &str) {
    for suffix in ["GHz", "MHz", "ns", "dBm"] {
        if let Some(base) = raw.strip_suffix(suffix).and_then(|b| b.strip_suffix('_')) {
            if !base.is_empty() {
                return (base, suffix);
            }
        }
    }
    (raw, "")
}

fn parse_number(text: &str, line: usize, key: &str) -> Result<f64, ConfigError> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| ConfigError::Syntax { line, msg: format!("`{key}`: `{}` is not a number", text.trim()) })
}

/// Parsed configuration with every key present.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<&'static str, Value>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::defaults()
    }
}

impl RunConfig {
    /// The bundled device defaults.
    pub fn defaults() -> Self {
        let mut cfg = RunConfig { values: BTreeMap::new() };
        cfg.apply(BUNDLED_DEVICE_CFG).expect("bundled configuration is valid");
        debug_assert!(KEYS.iter().all(|k| cfg.values.contains_key(k.name)));
        cfg
    }

    /// Defaults overridden by `text`.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::defaults();
        cfg.apply(text)?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> crate::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::parse(&text)?)
    }

    /// Applies every assignment in `text` on top of the current values.
    pub fn apply(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((k, v)) = content.split_once('=') else {
                return Err(ConfigError::Syntax { line, msg: format!("expected `key = value`, got `{content}`") });
            };
            let k = k.trim();
            let (spec, _) = self.assign(k, v.trim(), line)?;
            if !seen.insert(spec.name) {
                return Err(ConfigError::Duplicate { line, key: k.to_string() });
            }
        }
        Ok(())
    }

    /// Sets one key from text, as a line of a configuration file would.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        self.assign(key.trim(), value.trim(), 0).map(|_| ())
    }

    fn assign(&mut self, raw_key: &str, text: &str, line: usize) -> Result<(&'static KeySpec, Value), ConfigError> {
        let (base, suffix) = split_key(raw_key);
        let spec = match spec(base) {
            Some(s) => s,
            // a literal key that happens to end like a suffix
            None => spec(raw_key).ok_or_else(|| ConfigError::UnknownKey { line, key: raw_key.to_string() })?,
        };
        let suffix = if spec.name == raw_key { "" } else { suffix };
        let given = spec.quantity.unit(suffix).ok_or_else(|| ConfigError::UnitMismatch {
            line,
            key: raw_key.to_string(),
            quantity: spec.quantity.name(),
            hint: spec.quantity.hint().to_string(),
        })?;
        let canonical = spec.canonical_unit();
        let convert = |v: f64| if suffix == spec.unit { v } else { canonical.from_si(given.to_si(v)) };
        let range_err = |reason| ConfigError::OutOfRange {
            line,
            key: raw_key.to_string(),
            value: text.to_string(),
            reason,
        };
        let value = match (spec.shape, spec.quantity) {
            (Single, Flag) => match text {
                "true" => Value::Flag(true),
                "false" => Value::Flag(false),
                _ => return Err(ConfigError::Syntax { line, msg: format!("`{raw_key}` expects true or false") }),
            },
            (Single, Text) => {
                if text.is_empty() {
                    return Err(ConfigError::Syntax { line, msg: format!("`{raw_key}` is empty") });
                }
                Value::Text(text.to_string())
            }
            (Single, Choice(options)) => {
                if !options.contains(&text) {
                    return Err(ConfigError::Syntax {
                        line,
                        msg: format!("`{raw_key}` expects one of {}", options.join(", ")),
                    });
                }
                Value::Text(text.to_string())
            }
            (Single, Integer) => {
                let v: u64 = text.parse().map_err(|_| ConfigError::Syntax {
                    line,
                    msg: format!("`{raw_key}`: `{text}` is not a non-negative integer"),
                })?;
                spec.range.check(v as f64).map_err(range_err)?;
                Value::Integer(v)
            }
            (Single, _) => {
                let v = convert(parse_number(text, line, raw_key)?);
                spec.range.check(v).map_err(range_err)?;
                Value::Number(v)
            }
            (Grid, _) => {
                let parts: Vec<&str> = text.split(',').map(str::trim).collect();
                let log = match parts.get(3) {
                    None => false,
                    Some(&"log") => true,
                    Some(&"linear") => false,
                    Some(other) => {
                        return Err(ConfigError::Syntax { line, msg: format!("`{raw_key}`: unknown grid scale `{other}`") })
                    }
                };
                if parts.len() < 3 || parts.len() > 4 {
                    return Err(ConfigError::Syntax { line, msg: format!("`{raw_key}` expects `min, max, count[, log]`") });
                }
                let min = convert(parse_number(parts[0], line, raw_key)?);
                let max = convert(parse_number(parts[1], line, raw_key)?);
                let count: usize = parts[2].parse().map_err(|_| ConfigError::Syntax {
                    line,
                    msg: format!("`{raw_key}`: grid count `{}` is not an integer", parts[2]),
                })?;
                spec.range.check(min).map_err(range_err)?;
                spec.range.check(max).map_err(range_err)?;
                if count == 0 {
                    return Err(range_err("grid needs at least one point"));
                }
                if count > 1 && !(max > min) {
                    return Err(range_err("grid maximum must exceed its minimum"));
                }
                if log && !(min > 0.0) {
                    return Err(range_err("log grids need positive bounds"));
                }
                Value::Grid(GridSpec { min, max, count, log })
            }
            (List, _) => {
                let mut v = Vec::new();
                for part in text.split(',') {
                    let x = convert(parse_number(part, line, raw_key)?);
                    spec.range.check(x).map_err(range_err)?;
                    v.push(x);
                }
                Value::List(v)
            }
        };
        self.values.insert(spec.name, value.clone());
        Ok((spec, value))
    }

    /// Canonical text form: every key in table order with its canonical unit suffix.
    pub fn to_canonical_string(&self) -> String {
        let mut s = String::new();
        for k in KEYS {
            let name = if k.unit.is_empty() { k.name.to_string() } else { format!("{}_{}", k.name, k.unit) };
            let _ = writeln!(s, "{name} = {}", self.values[k.name].canonical());
        }
        s
    }

    /// Raw stored value of a base key.
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    fn spec_of(&self, key: &str) -> &'static KeySpec {
        spec(key).unwrap_or_else(|| panic!("unknown configuration key `{key}`"))
    }

    fn si(&self, key: &str) -> f64 {
        let s = self.spec_of(key);
        match &self.values[s.name] {
            Value::Number(v) => s.canonical_unit().to_si(*v),
            Value::Integer(v) => *v as f64,
            other => panic!("`{key}` is not a number: {other:?}"),
        }
    }

    /// Scalar value in SI units (rad/s, s; dBm for powers). Panics on an unknown or non-numeric key.
    pub fn number(&self, key: &str) -> f64 {
        self.si(key)
    }

    /// Like [`RunConfig::number`], returning `None` for unknown or non-numeric keys.
    pub fn try_number(&self, key: &str) -> Option<f64> {
        let s = spec(key)?;
        match self.values.get(s.name)? {
            Value::Number(v) => Some(s.canonical_unit().to_si(*v)),
            Value::Integer(v) => Some(*v as f64),
            _ => None,
        }
    }

    fn integer(&self, key: &str) -> usize {
        match self.values[self.spec_of(key).name] {
            Value::Integer(v) => v as usize,
            ref other => panic!("`{key}` is not an integer: {other:?}"),
        }
    }

    fn flag(&self, key: &str) -> bool {
        match self.values[self.spec_of(key).name] {
            Value::Flag(b) => b,
            ref other => panic!("`{key}` is not a flag: {other:?}"),
        }
    }

    fn text(&self, key: &str) -> &str {
        match &self.values[self.spec_of(key).name] {
            Value::Text(s) => s,
            other => panic!("`{key}` is not text: {other:?}"),
        }
    }

    /// Grid points in SI units (dBm for powers).
    pub fn grid(&self, key: &str) -> Vec<f64> {
        let s = self.spec_of(key);
        let unit = s.canonical_unit();
        match &self.values[s.name] {
            Value::Grid(g) => g.points(unit),
            Value::List(v) => v.iter().map(|x| unit.to_si(*x)).collect(),
            other => panic!("`{key}` is not a grid: {other:?}"),
        }
    }

    /// Device parameters, with the drive calibration fitted to the anchor.
    pub fn params(&self) -> crate::Result<SystemParams> {
        let mut p = SystemParams {
            omega_ge: self.si("omega_ge"),
            omega_r: self.si("omega_r"),
            chi: self.si("chi"),
            kappa: self.si("kappa"),
            kappa_ext_ratio: self.si("kappa_ext_ratio"),
            gamma: self.si("gamma"),
            gamma_phi: self.si("gamma_phi"),
            init_excited_pop: self.si("init_excited_pop"),
            drive_power_to_rabi: 1.0,
        };
        p.validate()?;
        p.drive_power_to_rabi = crate::ladder::fit_drive_calibration(
            &p,
            p.omega_ge - self.si("calib_detuning"),
            self.si("calib_anchor"),
        )?;
        Ok(p)
    }

    /// Parameters for the two-dip spectroscopy (qubit decay replaced by `pdiff_gamma`).
    pub fn pdiff_params(&self) -> crate::Result<SystemParams> {
        let mut p = self.params()?;
        p.gamma = self.si("pdiff_gamma");
        Ok(p)
    }

    pub fn omega_d(&self, params: &SystemParams) -> f64 {
        params.omega_ge - self.si("drive_detuning")
    }

    pub fn pdiff_omega_d(&self, params: &SystemParams) -> f64 {
        params.omega_ge - self.si("pdiff_detuning")
    }

    pub fn operating_point(&self, params: &SystemParams) -> OperatingPoint {
        OperatingPoint::from_dbm(params, self.omega_d(params), self.si("P_d"), self.si("omega_s"))
    }

    pub fn detection(&self, params: &SystemParams) -> DetectionConfig {
        DetectionConfig { op: self.operating_point(params), t_s: self.si("t_s"), n_s: self.si("n_s") }
    }

    pub fn readout(&self) -> ReadoutModel {
        ReadoutModel { eps_ge: self.si("eps_ge"), eps_eg: self.si("eps_eg") }
    }

    pub fn reset(&self, params: &SystemParams) -> ResetConfig {
        ResetConfig {
            omega_d: self.omega_d(params),
            rabi: params.rabi_from_dbm(self.si("P_dr")),
            omega_rst: self.si("omega_rst"),
            n_rst: self.si("n_rst"),
            stage: self.si("reset_stage"),
            with_initial_pi: self.flag("initial_pi"),
        }
    }

    pub fn settings(&self) -> SimSettings {
        let method = match self.text("integrator") {
            "fixed" => IntegratorMethod::FixedRk4,
            _ => IntegratorMethod::AdaptiveRk45,
        };
        SimSettings {
            n_max: self.integer("n_max"),
            reset_n_max: self.integer("reset_n_max"),
            integrator: IntegratorOptions {
                method,
                max_step: self.si("max_step"),
                rtol: self.si("rtol"),
                atol: self.si("atol"),
                fock_convergence: self.flag("fock_check"),
                samples: self.integer("samples"),
            },
            timing: PulseTiming { t_rise: self.si("t_rise"), readout_length: self.si("readout_length") },
        }
    }

    pub fn probe_amp(&self) -> f64 {
        self.si("probe_flux").sqrt()
    }

    pub fn pdiff_scan(&self) -> PdiffScan {
        PdiffScan {
            p_lo_dbm: self.si("pdiff_scan_lo"),
            p_hi_dbm: self.si("pdiff_scan_hi"),
            coarse_points: self.integer("pdiff_scan_points"),
        }
    }

    pub fn workers(&self) -> usize {
        self.integer("workers")
    }

    pub fn strict(&self) -> bool {
        self.flag("strict")
    }

    pub fn out_dir(&self) -> &str {
        self.text("out_dir")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_has_a_default() {
        let cfg = RunConfig::defaults();
        for k in KEYS {
            assert!(cfg.get(k.name).is_some(), "{}", k.name);
        }
    }

    #[test]
    fn suffix_conversion() {
        let cfg = RunConfig::parse("t_s_ns = 85\nchi = 1e8\n").unwrap();
        assert_eq!(cfg.number("t_s"), 85e-9);
        assert!((cfg.number("chi") - 1e8).abs() < 1e-6);
        let cfg = RunConfig::parse("t_s = 1e-7").unwrap();
        assert!((cfg.number("t_s") - 1e-7).abs() < 1e-20);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = RunConfig::parse("\n\nkappa_ext_ratio = 1.2").unwrap_err();
        assert!(matches!(e, ConfigError::OutOfRange { line: 3, .. }), "{e}");
        let e = RunConfig::parse("# c\nbogus = 1").unwrap_err();
        assert!(matches!(e, ConfigError::UnknownKey { line: 2, .. }));
        let e = RunConfig::parse("t_s_GHz = 1").unwrap_err();
        assert!(matches!(e, ConfigError::UnitMismatch { line: 1, .. }));
        let e = RunConfig::parse("P_d = -70").unwrap_err();
        assert!(matches!(e, ConfigError::UnitMismatch { .. }));
        let e = RunConfig::parse("n_s_ns = 1").unwrap_err();
        assert!(matches!(e, ConfigError::UnitMismatch { .. }));
        let e = RunConfig::parse("chi_MHz = 30\nchi_MHz = 31").unwrap_err();
        assert!(matches!(e, ConfigError::Duplicate { line: 2, .. }));
        let e = RunConfig::parse("chi_MHz 30").unwrap_err();
        assert!(matches!(e, ConfigError::Syntax { line: 1, .. }));
    }

    #[test]
    fn grids_and_lists() {
        let cfg = RunConfig::parse("power_grid_dBm = -80, -70, 3\nt_s_list_ns = 10, 20\nn_s_list = 0.1, 10, 3, log")
            .unwrap_err();
        assert!(matches!(cfg, ConfigError::Syntax { line: 3, .. }));
        let cfg = RunConfig::parse("power_grid_dBm = -80, -70, 3\nt_s_list_ns = 10, 20\nrabi_grid_MHz = 1, 100, 3, log")
            .unwrap();
        assert_eq!(cfg.grid("power_grid"), vec![-80.0, -75.0, -70.0]);
        assert_eq!(cfg.grid("t_s_list"), vec![10e-9, 20e-9]);
        let r = cfg.grid("rabi_grid");
        assert!((r[1] / r[0] - 10.0).abs() < 1e-9);
    }
}
