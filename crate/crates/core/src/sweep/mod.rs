//! Parameter grids of the Zeno parameter over propagation length and one
//! optional secondary axis.
//!
//! Rows are always ordered by `(secondary index, z index)` whatever the
//! execution schedule. Cells whose parameters are rejected by the model keep
//! their place in the grid and carry the error instead of a sample.

mod presets;
mod validation;

pub use presets::Preset;
pub use validation::{validate_against_oracle, CellComparison, ContractionMode, OracleValidationReport, ValidationOptions};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{CouplerParams, ModelThresholds};
use crate::observables::{zeno_sample, CoherentInputs, ZenoSample, DEFAULT_CLASSIFICATION_TOL};

/// Inclusive, evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let axis = Self { min, max, count };
        axis.check()?;
        Ok(axis)
    }

    pub fn point(value: f64) -> Self {
        Self {
            min: value,
            max: value,
            count: 1,
        }
    }

    fn check(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParameter("axis count must be at least 1".into()));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(Error::InvalidParameter(format!(
                "axis bounds must be finite with min <= max, got {}:{}",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        if self.count <= 1 {
            0.0
        } else {
            (self.max - self.min) / (self.count - 1) as f64
        }
    }

    /// `min + i * step`, with the last point pinned to `max`.
    pub fn value(&self, i: usize) -> f64 {
        if self.count > 1 && i == self.count - 1 {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// Whether z-axis values are physical lengths or rescaled lengths `Γz`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthScale {
    Physical,
    Rescaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SecondaryKind {
    /// Phase mismatch `Δk`.
    DeltaK,
    /// `|k|`, keeping the phase of the base `k`.
    KMagnitude,
    /// Phase `φ` of `γ`, keeping `|γ|`.
    Phi,
    /// `|Γ|`, keeping the phase of the base `Γ`.
    GammaNl,
}

impl SecondaryKind {
    pub fn name(&self) -> &'static str {
        match self {
            SecondaryKind::DeltaK => "delta_k",
            SecondaryKind::KMagnitude => "k_magnitude",
            SecondaryKind::Phi => "phi",
            SecondaryKind::GammaNl => "gamma_nl",
        }
    }
}

impl fmt::Display for SecondaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SecondaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta_k" => Ok(SecondaryKind::DeltaK),
            "k_magnitude" => Ok(SecondaryKind::KMagnitude),
            "phi" => Ok(SecondaryKind::Phi),
            "gamma_nl" => Ok(SecondaryKind::GammaNl),
            other => Err(Error::InvalidParameter(format!("unknown secondary axis {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondaryAxis {
    pub kind: SecondaryKind,
    pub axis: Axis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub k: Complex64,
    pub gamma_nl: Complex64,
    pub delta_k: f64,
    pub inputs: CoherentInputs,
    pub z_axis: Axis,
    pub z_scale: LengthScale,
    pub secondary: Option<SecondaryAxis>,
    pub classification_tol: f64,
    pub thresholds: ModelThresholds,
}

impl SweepSpec {
    /// Single-axis scan over rescaled length `Γz`.
    pub fn rescaled(k: Complex64, gamma_nl: Complex64, delta_k: f64, inputs: CoherentInputs, z_axis: Axis) -> Self {
        Self {
            k,
            gamma_nl,
            delta_k,
            inputs,
            z_axis,
            z_scale: LengthScale::Rescaled,
            secondary: None,
            classification_tol: DEFAULT_CLASSIFICATION_TOL,
            thresholds: ModelThresholds::default(),
        }
    }

    pub fn with_secondary(mut self, kind: SecondaryKind, axis: Axis) -> Self {
        self.secondary = Some(SecondaryAxis { kind, axis });
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.z_axis.check()?;
        if self.z_axis.min < 0.0 {
            return Err(Error::InvalidParameter("z axis must be non-negative".into()));
        }
        if let Some(s) = &self.secondary {
            s.axis.check()?;
        }
        if !(self.k.is_finite() && self.gamma_nl.is_finite() && self.delta_k.is_finite() && self.inputs.is_finite()) {
            return Err(Error::InvalidParameter("sweep parameters must be finite".into()));
        }
        if self.classification_tol.is_nan() || self.classification_tol < 0.0 {
            return Err(Error::InvalidParameter("classification tolerance must be >= 0".into()));
        }
        let gamma_swept = matches!(self.secondary, Some(SecondaryAxis { kind: SecondaryKind::GammaNl, .. }));
        if self.z_scale == LengthScale::Rescaled && !gamma_swept && self.gamma_nl.norm() == 0.0 {
            return Err(Error::InvalidParameter(
                "a rescaled length axis needs a non-zero nonlinear coupling".into(),
            ));
        }
        Ok(())
    }

    pub fn secondary_count(&self) -> usize {
        self.secondary.map_or(1, |s| s.axis.count)
    }

    pub fn cell_count(&self) -> usize {
        self.secondary_count() * self.z_axis.count
    }

    /// Device and inputs at secondary index `j` (raw, unvalidated).
    pub fn cell_setup(&self, j: usize) -> (Option<f64>, Complex64, Complex64, f64, CoherentInputs) {
        let (mut k, mut gamma_nl, mut delta_k, mut inputs) = (self.k, self.gamma_nl, self.delta_k, self.inputs);
        let value = self.secondary.map(|s| {
            let v = s.axis.value(j);
            match s.kind {
                SecondaryKind::DeltaK => delta_k = v,
                SecondaryKind::KMagnitude => k = Complex64::from_polar(v, self.k.arg()),
                SecondaryKind::Phi => inputs = inputs.with_phi(v),
                SecondaryKind::GammaNl => gamma_nl = Complex64::from_polar(v, self.gamma_nl.arg()),
            }
            v
        });
        (value, k, gamma_nl, delta_k, inputs)
    }

    /// Physical length of z-axis point `i` given the cell's nonlinear coupling.
    fn physical_z(&self, i: usize, gamma_nl: Complex64) -> Result<(f64, f64)> {
        let v = self.z_axis.value(i);
        match self.z_scale {
            LengthScale::Physical => Ok((v, v * gamma_nl.norm())),
            LengthScale::Rescaled => {
                let g = gamma_nl.norm();
                if g == 0.0 {
                    Err(Error::InvalidParameter("rescaled length undefined for zero nonlinear coupling".into()))
                } else {
                    Ok((v / g, v))
                }
            }
        }
    }

    fn evaluate_cell(&self, j: usize, i: usize) -> SweepRow {
        let (secondary_value, k, gamma_nl, delta_k, inputs) = self.cell_setup(j);
        let (z, gamma_z) = match self.physical_z(i, gamma_nl) {
            Ok(pair) => pair,
            Err(e) => {
                return SweepRow {
                    secondary_index: j,
                    secondary_value,
                    z_index: i,
                    z: f64::NAN,
                    gamma_z: self.z_axis.value(i),
                    outcome: Err(e),
                }
            }
        };
        let outcome = CouplerParams::with_thresholds(k, gamma_nl, delta_k, self.thresholds)
            .and_then(|p| zeno_sample(&p, &inputs, z, self.classification_tol));
        SweepRow {
            secondary_index: j,
            secondary_value,
            z_index: i,
            z,
            gamma_z,
            outcome,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub secondary_index: usize,
    pub secondary_value: Option<f64>,
    pub z_index: usize,
    pub z: f64,
    pub gamma_z: f64,
    pub outcome: Result<ZenoSample>,
}

impl SweepRow {
    pub fn sample(&self) -> Option<&ZenoSample> {
        self.outcome.as_ref().ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn row(&self, secondary_index: usize, z_index: usize) -> &SweepRow {
        &self.rows[secondary_index * self.spec.z_axis.count + z_index]
    }

    pub fn samples(&self) -> impl Iterator<Item = &ZenoSample> {
        self.rows.iter().filter_map(SweepRow::sample)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Evaluates every grid cell in parallel.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with(spec, Execution::Parallel)
}

pub fn run_sweep_with(spec: &SweepSpec, execution: Execution) -> Result<SweepResult> {
    spec.validate()?;
    let nz = spec.z_axis.count;
    let cell = |flat: usize| spec.evaluate_cell(flat / nz, flat % nz);
    let rows = match execution {
        Execution::Serial => (0..spec.cell_count()).map(cell).collect(),
        // indexed collect keeps lexicographic order
        Execution::Parallel => (0..spec.cell_count()).into_par_iter().map(cell).collect(),
    };
    Ok(SweepResult {
        spec: spec.clone(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionAxis {
    Z,
    Secondary,
}

/// Adjacent cells `(secondary index, z index)` whose `ΔN_Z` have strictly
/// opposite signs beyond the classification tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub axis: TransitionAxis,
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub from_value: f64,
    pub to_value: f64,
}

pub fn find_transitions(result: &SweepResult) -> Vec<Transition> {
    let tol = result.spec.classification_tol;
    let nz = result.spec.z_axis.count;
    let ns = result.spec.secondary_count();
    let value = |j: usize, i: usize| result.row(j, i).sample().map(|s| s.delta_n_z);
    let crosses = |a: f64, b: f64| (a < -tol && b > tol) || (a > tol && b < -tol);

    let mut out = Vec::new();
    let mut consider = |axis, from: (usize, usize), to: (usize, usize)| {
        if let (Some(a), Some(b)) = (value(from.0, from.1), value(to.0, to.1)) {
            if crosses(a, b) {
                out.push(Transition {
                    axis,
                    from,
                    to,
                    from_value: a,
                    to_value: b,
                });
            }
        }
    };
    for j in 0..ns {
        for i in 0..nz {
            if i + 1 < nz {
                consider(TransitionAxis::Z, (j, i), (j, i + 1));
            }
            if j + 1 < ns {
                consider(TransitionAxis::Secondary, (j, i), (j + 1, i));
            }
        }
    }
    out
}
