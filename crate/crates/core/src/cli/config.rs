//! Run configuration assembled from command-line flags, an optional
//! `key=value` config file, a preset and built-in defaults, in that
//! order of precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::complex::parse_complex;
use super::CliError;
use crate::observables::{CoherentInputs, DEFAULT_CLASSIFICATION_TOL};
use crate::oracle::TruncationSpec;
use crate::sweep::{Axis, LengthScale, Preset, SecondaryAxis, SecondaryKind};

/// Keys accepted in config files; each mirrors the `--key` flag.
pub const KEYS: [&str; 13] = [
    "k", "gamma-nl", "delta-k", "alpha", "beta", "gamma", "z", "gamma-z", "secondary", "preset",
    "tol", "cutoffs", "out",
];

pub const DEFAULT_CUTOFFS: (usize, usize, usize) = (12, 12, 8);
pub const DEFAULT_ORACLE_TOL: f64 = 1e-10;

/// Raw textual settings keyed by flag name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn parse_config(text: &str, origin: &Path) -> Result<Self, CliError> {
        let mut settings = Settings::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::invalid(format!(
                    "{}:{}: expected key=value",
                    origin.display(),
                    n + 1
                )));
            };
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::invalid(format!(
                    "{}:{}: unknown key {key:?}",
                    origin.display(),
                    n + 1
                )));
            }
            settings.set(&key, value.trim());
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_config(&text, path)
    }

    /// `self` wins over `lower`. The two length flags count as one setting.
    pub fn over(mut self, lower: &Settings) -> Settings {
        let has_length = self.get("z").is_some() || self.get("gamma-z").is_some();
        for (key, value) in &lower.values {
            let length_key = key == "z" || key == "gamma-z";
            if self.values.contains_key(key) || (length_key && has_length) {
                continue;
            }
            self.values.insert(key.clone(), value.clone());
        }
        self
    }
}

/// Length axis as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthRange {
    pub axis: Axis,
    pub scale: LengthScale,
}

/// Typed view over merged [`Settings`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k: Option<Complex64>,
    pub gamma_nl: Option<Complex64>,
    pub delta_k: Option<f64>,
    pub alpha: Option<Complex64>,
    pub beta: Option<Complex64>,
    pub gamma: Option<Complex64>,
    pub length: Option<LengthRange>,
    pub secondary: Option<SecondaryAxis>,
    pub preset: Option<Preset>,
    pub tol: Option<f64>,
    pub cutoffs: Option<TruncationSpec>,
    pub out: Option<PathBuf>,
}

fn flag_error(key: &str, value: &str, why: impl std::fmt::Display) -> CliError {
    CliError::invalid(format!("--{key} {value:?}: {why}"))
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    let v: f64 = value.trim().parse().map_err(|_| flag_error(key, value, "not a number"))?;
    if !v.is_finite() {
        return Err(flag_error(key, value, "must be finite"));
    }
    Ok(v)
}

/// `min:max:count` or a single value.
pub fn parse_range(key: &str, value: &str) -> Result<Axis, CliError> {
    let parts: Vec<&str> = value.split(':').collect();
    let axis = match parts.as_slice() {
        [single] => Axis::point(parse_f64(key, single)?),
        [min, max, count] => {
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| flag_error(key, value, "count must be a positive integer"))?;
            Axis {
                min: parse_f64(key, min)?,
                max: parse_f64(key, max)?,
                count,
            }
        }
        _ => return Err(flag_error(key, value, "expected min:max:count or a single value")),
    };
    Axis::new(axis.min, axis.max, axis.count).map_err(|e| flag_error(key, value, e))
}

fn parse_cutoffs(value: &str) -> Result<TruncationSpec, CliError> {
    let parts: Result<Vec<usize>, _> = value.split(['/', ',']).map(|p| p.trim().parse()).collect();
    match parts.as_deref() {
        Ok([a, b, c]) => TruncationSpec::new(*a, *b, *c).map_err(|e| flag_error("cutoffs", value, e)),
        _ => Err(flag_error("cutoffs", value, "expected n_a/n_b1/n_b2")),
    }
}

fn parse_secondary(value: &str) -> Result<SecondaryAxis, CliError> {
    let Some((name, range)) = value.split_once('=') else {
        return Err(flag_error("secondary", value, "expected name=min:max:count"));
    };
    let kind: SecondaryKind = name.trim().parse().map_err(|e| flag_error("secondary", value, e))?;
    Ok(SecondaryAxis {
        kind,
        axis: parse_range("secondary", range)?,
    })
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let complex = |key: &str| -> Result<Option<Complex64>, CliError> {
            s.get(key)
                .map(|v| parse_complex(v).map_err(|e| flag_error(key, v, e)))
                .transpose()
        };
        let length = match (s.get("z"), s.get("gamma-z")) {
            (Some(_), Some(_)) => {
                return Err(CliError::invalid("--z and --gamma-z are mutually exclusive"))
            }
            (Some(v), None) => Some(LengthRange {
                axis: parse_range("z", v)?,
                scale: LengthScale::Physical,
            }),
            (None, Some(v)) => Some(LengthRange {
                axis: parse_range("gamma-z", v)?,
                scale: LengthScale::Rescaled,
            }),
            (None, None) => None,
        };
        if let Some(l) = &length {
            if l.axis.min < 0.0 {
                return Err(CliError::invalid("propagation lengths must be non-negative"));
            }
        }
        let tol = s.get("tol").map(|v| parse_f64("tol", v)).transpose()?;
        if tol.is_some_and(|t| t < 0.0) {
            return Err(CliError::invalid("--tol must be non-negative"));
        }
        Ok(Self {
            k: complex("k")?,
            gamma_nl: complex("gamma-nl")?,
            delta_k: s.get("delta-k").map(|v| parse_f64("delta-k", v)).transpose()?,
            alpha: complex("alpha")?,
            beta: complex("beta")?,
            gamma: complex("gamma")?,
            length,
            secondary: s.get("secondary").map(parse_secondary).transpose()?,
            preset: s
                .get("preset")
                .map(|v| v.parse::<Preset>().map_err(|e| flag_error("preset", v, e)))
                .transpose()?,
            tol,
            cutoffs: s.get("cutoffs").map(parse_cutoffs).transpose()?,
            out: s.get("out").map(PathBuf::from),
        })
    }

    /// Fills unset device, input and axis values from the preset, if any.
    pub fn apply_preset(&mut self) {
        let Some(preset) = self.preset else { return };
        let spec = preset.spec();
        self.k.get_or_insert(spec.k);
        self.gamma_nl.get_or_insert(spec.gamma_nl);
        self.delta_k.get_or_insert(spec.delta_k);
        self.alpha.get_or_insert(spec.inputs.alpha);
        self.beta.get_or_insert(spec.inputs.beta);
        self.gamma.get_or_insert(spec.inputs.gamma);
        self.length.get_or_insert(LengthRange {
            axis: spec.z_axis,
            scale: spec.z_scale,
        });
        if self.secondary.is_none() {
            self.secondary = spec.secondary;
        }
    }

    pub fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T, CliError> {
        value.ok_or_else(|| CliError::invalid(format!("missing required parameter --{flag}")))
    }

    pub fn inputs(&self) -> Result<CoherentInputs, CliError> {
        Ok(CoherentInputs::new(
            Self::require(self.alpha, "alpha")?,
            Self::require(self.beta, "beta")?,
            Self::require(self.gamma, "gamma")?,
        ))
    }

    pub fn length(&self) -> Result<LengthRange, CliError> {
        self.length
            .ok_or_else(|| CliError::invalid("missing required parameter --z or --gamma-z"))
    }

    pub fn classification_tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_CLASSIFICATION_TOL)
    }

    pub fn oracle_tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_ORACLE_TOL)
    }

    pub fn truncation(&self) -> TruncationSpec {
        self.cutoffs.unwrap_or_else(|| {
            let (a, b, c) = DEFAULT_CUTOFFS;
            TruncationSpec::new(a, b, c).expect("default cutoffs are valid")
        })
    }
}
