use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::SweepSpec;
use crate::error::{Error, Result};
use crate::model::CouplerParams;
use crate::observables::zeno_parameter;
use crate::oracle::{oracle_zeno_parameter_with, MomentumOperator, OracleOptions, TruncationSpec};

/// What is held fixed when the nonlinear coupling is halved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionMode {
    /// Same physical length `z`: the neglected terms scale as `Γ²`.
    FixedLength,
    /// Same rescaled length `Γz` (so `z` doubles).
    FixedRescaledLength,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    pub seed: u64,
    pub oracle: OracleOptions,
    pub contraction: ContractionMode,
    /// Largest `|α|`, `|β|` accepted.
    pub max_amplitude: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            oracle: OracleOptions::with_tol(1e-11),
            contraction: ContractionMode::FixedLength,
            max_amplitude: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellComparison {
    pub secondary_index: usize,
    pub z_index: usize,
    pub z: f64,
    pub gamma_nl: Complex64,
    pub perturbative: f64,
    pub oracle: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleValidationReport {
    pub cells: Vec<CellComparison>,
    pub max_discrepancy: f64,
    /// The same cells with `Γ` halved.
    pub halved: Vec<CellComparison>,
    pub halved_max_discrepancy: f64,
    /// `max_discrepancy / halved_max_discrepancy`; `None` when the halved
    /// discrepancy vanishes.
    pub contraction_ratio: Option<f64>,
}

fn compare(
    spec: &SweepSpec,
    truncation: &TruncationSpec,
    options: &ValidationOptions,
    cell: (usize, usize),
    gamma_scale: f64,
    z_scale: f64,
) -> Result<Option<CellComparison>> {
    let (j, i) = cell;
    let (_, k, gamma_nl, delta_k, inputs) = spec.cell_setup(j);
    let row = spec.evaluate_cell(j, i);
    if row.outcome.is_err() {
        // degenerate or otherwise unevaluable cells are not compared
        return Ok(None);
    }
    let gamma_nl = gamma_nl * gamma_scale;
    let z = row.z * z_scale;
    let params = CouplerParams::with_thresholds(k, gamma_nl, delta_k, spec.thresholds)?;
    let perturbative = zeno_parameter(&params, &inputs, z)?;
    let op = MomentumOperator::new(k, gamma_nl, delta_k);
    let oracle = oracle_zeno_parameter_with(&op, &inputs, z, truncation, &options.oracle)?;
    Ok(Some(CellComparison {
        secondary_index: j,
        z_index: i,
        z,
        gamma_nl,
        perturbative,
        oracle,
        discrepancy: (perturbative - oracle).abs(),
    }))
}

fn run_cells(
    spec: &SweepSpec,
    truncation: &TruncationSpec,
    options: &ValidationOptions,
    cells: &[(usize, usize)],
    gamma_scale: f64,
    z_scale: f64,
) -> Result<Vec<CellComparison>> {
    let results: Vec<Result<Option<CellComparison>>> = cells
        .par_iter()
        .map(|&cell| compare(spec, truncation, options, cell, gamma_scale, z_scale))
        .collect();
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        if let Some(c) = r? {
            out.push(c);
        }
    }
    Ok(out)
}

fn max_discrepancy(cells: &[CellComparison]) -> f64 {
    cells.iter().map(|c| c.discrepancy).fold(0.0, f64::max)
}

/// Compares perturbative and exact `ΔN_Z` at `sample_count` randomly chosen
/// cells of `spec`, then repeats with `Γ` halved.
pub fn validate_against_oracle(
    spec: &SweepSpec,
    truncation: &TruncationSpec,
    sample_count: usize,
    options: &ValidationOptions,
) -> Result<OracleValidationReport> {
    spec.validate()?;
    let limit = options.max_amplitude;
    if spec.inputs.alpha.norm() > limit || spec.inputs.beta.norm() > limit {
        return Err(Error::InvalidParameter(format!(
            "oracle validation needs |alpha|, |beta| <= {limit}"
        )));
    }
    let total = spec.cell_count();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut picked: Vec<usize> = sample(&mut rng, total, sample_count.min(total)).into_vec();
    picked.sort_unstable();
    let nz = spec.z_axis.count;
    let cells: Vec<(usize, usize)> = picked.into_iter().map(|f| (f / nz, f % nz)).collect();

    let z_scale = match options.contraction {
        ContractionMode::FixedLength => 1.0,
        ContractionMode::FixedRescaledLength => 2.0,
    };
    let full = run_cells(spec, truncation, options, &cells, 1.0, 1.0)?;
    let halved = run_cells(spec, truncation, options, &cells, 0.5, z_scale)?;
    let max_full = max_discrepancy(&full);
    let max_half = max_discrepancy(&halved);
    Ok(OracleValidationReport {
        cells: full,
        max_discrepancy: max_full,
        halved,
        halved_max_discrepancy: max_half,
        contraction_ratio: (max_half > 0.0).then(|| max_full / max_half),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::CoherentInputs;
    use crate::sweep::Axis;

    fn spec(gamma: f64, inputs: CoherentInputs) -> SweepSpec {
        SweepSpec {
            z_scale: crate::sweep::LengthScale::Physical,
            ..SweepSpec::rescaled(
                Complex64::new(0.1, 0.0),
                Complex64::new(gamma, 0.0),
                1e-4,
                inputs,
                Axis::new(0.0, 30.0, 4).unwrap(),
            )
        }
    }

    #[test]
    fn linear_limit_and_zero_length_agree() {
        let t = TruncationSpec::new(10, 10, 6).unwrap();
        let s = spec(0.0, CoherentInputs::real(1.0, 1.0, 0.5));
        let r = validate_against_oracle(&s, &t, 4, &ValidationOptions::default()).unwrap();
        assert_eq!(r.cells.len(), 4);
        for c in &r.cells {
            assert!(c.discrepancy <= 1e-10, "{c:?}");
        }
        let z0 = r.cells.iter().find(|c| c.z_index == 0).unwrap();
        assert_eq!(z0.perturbative, 0.0);
        assert!(z0.oracle.abs() < 1e-14);
    }

    #[test]
    fn rejects_large_amplitudes() {
        let t = TruncationSpec::new(10, 10, 6).unwrap();
        let s = spec(0.001, CoherentInputs::real(5.0, 2.0, 1.0));
        assert!(validate_against_oracle(&s, &t, 2, &ValidationOptions::default()).is_err());
    }
}
