//! `key = value` scenario documents.
//!
//! ```text
//! # Figure 1 at a larger damping rate
//! scenario = fig1
//! gamma = 0.8
//! out = fig1.csv
//! ```
//!
//! Blank lines and `#` comments are ignored. Unknown keys are rejected.
//! Keys absent from the document take per-scenario defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}config error for '{key}': {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(line: Option<usize>, key: &str, message: impl Into<String>) -> Self {
        Self {
            line,
            key: key.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Fig1,
    Fig2,
    Fig3,
    Kraus2x2,
    Custom,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fig1 => "fig1",
            Scenario::Fig2 => "fig2",
            Scenario::Fig3 => "fig3",
            Scenario::Kraus2x2 => "kraus2x2",
            Scenario::Custom => "custom",
        }
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fig1" => Ok(Scenario::Fig1),
            "fig2" => Ok(Scenario::Fig2),
            "fig3" => Ok(Scenario::Fig3),
            "kraus2x2" => Ok(Scenario::Kraus2x2),
            "custom" => Ok(Scenario::Custom),
            other => Err(format!("unknown scenario '{other}'")),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Local environment model for the `custom` scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Dissipation,
    Dephasing,
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dissipation" => Ok(ModelKind::Dissipation),
            "dephasing" => Ok(ModelKind::Dephasing),
            other => Err(format!("unknown model '{other}' (expected dissipation or dephasing)")),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Dissipation => "dissipation",
            ModelKind::Dephasing => "dephasing",
        })
    }
}

/// One fully resolved experiment.
///
/// Times are in units of `1/omega`. `gamma` is the damping rate (`γ_a` in
/// `kraus2x2`, where `gamma_b` is the second particle's rate).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub d: usize,
    pub omega: f64,
    pub gamma: f64,
    pub gamma_b: f64,
    pub t_max: f64,
    pub dt: f64,
    pub record_stride: usize,
    pub d_min: usize,
    pub d_max: usize,
    pub model: ModelKind,
    pub tol: f64,
    pub output: Option<PathBuf>,
}

pub const KEYS: &[&str] = &[
    "scenario",
    "d",
    "omega",
    "gamma",
    "gamma_b",
    "t_max",
    "dt",
    "record_stride",
    "d_min",
    "d_max",
    "model",
    "tol",
    "out",
];

impl ScenarioConfig {
    pub fn defaults(scenario: Scenario) -> Self {
        let base = Self {
            scenario,
            d: 2,
            omega: 1.0,
            gamma: 0.6,
            gamma_b: 0.6,
            t_max: 5.0,
            dt: 1e-3,
            record_stride: 50,
            d_min: 3,
            d_max: 9,
            model: ModelKind::Dissipation,
            tol: 1e-8,
            output: None,
        };
        match scenario {
            Scenario::Fig1 => base,
            Scenario::Fig2 => Self {
                gamma: 0.2,
                gamma_b: 0.2,
                t_max: 10.0,
                ..base
            },
            Scenario::Fig3 => Self { t_max: 3.0, ..base },
            Scenario::Kraus2x2 => Self {
                gamma: 1.0,
                gamma_b: 1.0,
                dt: 0.01,
                record_stride: 1,
                ..base
            },
            Scenario::Custom => Self {
                d: 3,
                gamma: 0.2,
                gamma_b: 0.2,
                t_max: 2.0,
                ..base
            },
        }
    }

    /// Parses a document, then applies `overrides` (same keys, no line).
    pub fn parse_with_overrides(text: &str, overrides: &[(&str, String)]) -> Result<Self, ConfigError> {
        let mut entries: BTreeMap<String, (String, Option<usize>)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::new(Some(line), content, "expected 'key = value'"))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(ConfigError::new(Some(line), key, "unknown key"));
            }
            if value.is_empty() {
                return Err(ConfigError::new(Some(line), key, "missing value"));
            }
            if entries
                .insert(key.to_string(), (value.to_string(), Some(line)))
                .is_some()
            {
                return Err(ConfigError::new(Some(line), key, "duplicate key"));
            }
        }
        for (key, value) in overrides {
            if !KEYS.contains(key) {
                return Err(ConfigError::new(None, key, "unknown key"));
            }
            entries.insert(key.to_string(), (value.clone(), None));
        }
        Self::from_entries(&entries)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::parse_with_overrides(text, &[])
    }

    fn from_entries(entries: &BTreeMap<String, (String, Option<usize>)>) -> Result<Self, ConfigError> {
        let (scenario_text, line) = entries
            .get("scenario")
            .ok_or_else(|| ConfigError::new(None, "scenario", "missing required key"))?;
        let scenario: Scenario = scenario_text
            .parse()
            .map_err(|e: String| ConfigError::new(*line, "scenario", e))?;
        let mut cfg = Self::defaults(scenario);
        let mut gamma_b_set = false;

        for (key, (value, line)) in entries {
            let line = *line;
            match key.as_str() {
                "scenario" => {}
                "d" => cfg.d = parse_value(key, value, line)?,
                "omega" => cfg.omega = parse_value(key, value, line)?,
                "gamma" => cfg.gamma = parse_value(key, value, line)?,
                "gamma_b" => {
                    cfg.gamma_b = parse_value(key, value, line)?;
                    gamma_b_set = true;
                }
                "t_max" => cfg.t_max = parse_value(key, value, line)?,
                "dt" => cfg.dt = parse_value(key, value, line)?,
                "record_stride" => cfg.record_stride = parse_value(key, value, line)?,
                "d_min" => cfg.d_min = parse_value(key, value, line)?,
                "d_max" => cfg.d_max = parse_value(key, value, line)?,
                "model" => cfg.model = value.parse().map_err(|e: String| ConfigError::new(line, key, e))?,
                "tol" => cfg.tol = parse_value(key, value, line)?,
                "out" => cfg.output = Some(PathBuf::from(value)),
                _ => unreachable!("keys are checked on read"),
            }
        }
        if !gamma_b_set {
            cfg.gamma_b = cfg.gamma;
        }
        cfg.validate(|key| entries.get(key).and_then(|(_, l)| *l))?;
        Ok(cfg)
    }

    fn validate(&self, line_of: impl Fn(&str) -> Option<usize>) -> Result<(), ConfigError> {
        let err = |key: &str, msg: &str| Err(ConfigError::new(line_of(key), key, msg));
        let positive = [
            ("omega", self.omega),
            ("t_max", self.t_max),
            ("dt", self.dt),
            ("tol", self.tol),
        ];
        for (key, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return err(key, "must be a finite number > 0");
            }
        }
        for (key, v) in [("gamma", self.gamma), ("gamma_b", self.gamma_b)] {
            if !(v >= 0.0) || !v.is_finite() {
                return err(key, "must be a finite number >= 0");
            }
        }
        if self.record_stride == 0 {
            return err("record_stride", "must be >= 1");
        }
        if self.d < 2 {
            return err("d", "must be >= 2");
        }
        if self.d_min < 2 {
            return err("d_min", "must be >= 2");
        }
        if self.d_max < self.d_min {
            return err("d_max", "must be >= d_min");
        }
        if self.dt > self.t_max {
            return err("dt", "must not exceed t_max");
        }
        Ok(())
    }

    /// Writes every key; parsing the result yields an equal config.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("scenario = {}\n", self.scenario));
        s.push_str(&format!("d = {}\n", self.d));
        s.push_str(&format!("omega = {}\n", self.omega));
        s.push_str(&format!("gamma = {}\n", self.gamma));
        s.push_str(&format!("gamma_b = {}\n", self.gamma_b));
        s.push_str(&format!("t_max = {}\n", self.t_max));
        s.push_str(&format!("dt = {}\n", self.dt));
        s.push_str(&format!("record_stride = {}\n", self.record_stride));
        s.push_str(&format!("d_min = {}\n", self.d_min));
        s.push_str(&format!("d_max = {}\n", self.d_max));
        s.push_str(&format!("model = {}\n", self.model));
        s.push_str(&format!("tol = {}\n", self.tol));
        if let Some(out) = &self.output {
            s.push_str(&format!("out = {}\n", out.display()));
        }
        s
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: Option<usize>) -> Result<T, ConfigError> {
    value.parse().map_err(|_| {
        ConfigError::new(
            line,
            key,
            format!("cannot parse '{value}' as {}", std::any::type_name::<T>()),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_fig1_gets_defaults() {
        let cfg = ScenarioConfig::parse("scenario=fig1").unwrap();
        assert_eq!(cfg, ScenarioConfig::defaults(Scenario::Fig1));
        assert_eq!(cfg.gamma, 0.6);
        assert_eq!(cfg.t_max, 5.0);
        assert_eq!(cfg.dt, 1e-3);
        assert_eq!(cfg.record_stride, 50);
    }

    #[test]
    fn negative_gamma_is_rejected() {
        let err = ScenarioConfig::parse("scenario = fig1\ngamma=-1\n").unwrap_err();
        assert_eq!(err.key, "gamma");
        assert_eq!(err.line, Some(2));
    }

    #[test]
    fn round_trip() {
        let doc = "# comment\nscenario = kraus2x2  # trailing\ngamma = 0.35\nt_max = 2.5\nout = /tmp/x.csv\n";
        let cfg = ScenarioConfig::parse(doc).unwrap();
        assert_eq!(cfg.gamma_b, 0.35);
        let again = ScenarioConfig::parse(&cfg.to_config_string()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn errors_name_key_and_line() {
        let err = ScenarioConfig::parse("scenario = fig1\n\nspeed = 3\n").unwrap_err();
        assert_eq!((err.key.as_str(), err.line), ("speed", Some(3)));

        let err = ScenarioConfig::parse("scenario = fig9").unwrap_err();
        assert_eq!((err.key.as_str(), err.line), ("scenario", Some(1)));

        let err = ScenarioConfig::parse("gamma = 1").unwrap_err();
        assert_eq!(err.key, "scenario");

        let err = ScenarioConfig::parse("scenario = fig2\nd_min = three").unwrap_err();
        assert_eq!((err.key.as_str(), err.line), ("d_min", Some(2)));

        let err = ScenarioConfig::parse("scenario = fig2\nd_min = 5\nd_max = 4").unwrap_err();
        assert_eq!(err.key, "d_max");

        let err = ScenarioConfig::parse("scenario = fig1\njunk line").unwrap_err();
        assert_eq!(err.line, Some(2));

        let err = ScenarioConfig::parse("scenario = fig1\ndt = 0.1\ndt = 0.2").unwrap_err();
        assert_eq!((err.key.as_str(), err.line), ("dt", Some(3)));

        assert!(ScenarioConfig::parse("scenario = custom\nmodel = heating").is_err());
    }

    #[test]
    fn overrides_win() {
        let cfg =
            ScenarioConfig::parse_with_overrides("scenario = fig3\ngamma = 0.1", &[("gamma", "0.9".into())]).unwrap();
        assert_eq!(cfg.gamma, 0.9);
        let err = ScenarioConfig::parse_with_overrides("scenario = fig3", &[("gamma", "-2".into())]).unwrap_err();
        assert_eq!((err.key.as_str(), err.line), ("gamma", None));
    }
}
