use num_complex::Complex64;
use rayon::prelude::*;

use super::checks::{run_suite, Injection, SuiteConfig};
use super::config::{LengthRange, RunConfig};
use super::table::{format_number, OutputTable};
use super::{CliError, EXIT_INVALID, EXIT_VALIDATION};
use crate::error::Error;
use crate::model::{compute_coefficients, CouplerParams, ModeCoefficients, ModelThresholds};
use crate::observables::zeno_sample;
use crate::oracle::{propagate_with, MomentumOperator, OracleOptions};
use crate::sweep::{run_sweep, LengthScale, SweepSpec};

/// Short status marker for a failed row.
pub fn status_of(e: &Error) -> &'static str {
    match e {
        Error::InvalidParameter(_) => "invalid_parameter",
        Error::DegenerateParameters { .. } => "degenerate",
        Error::ExcessiveTruncationLoss { .. } => "truncation_loss",
        Error::NonConvergence { .. } => "non_convergence",
        Error::InternalConsistency(_) => "internal_consistency",
    }
}

fn emit(table: &OutputTable, config: &RunConfig) -> Result<(), CliError> {
    table.write_to(config.out.as_deref()).map_err(|e| CliError {
        code: EXIT_INVALID,
        message: format!("cannot write output: {e}"),
    })
}

fn warn_if_strong(ratio: f64) {
    let limit = ModelThresholds::default().perturbativity;
    if ratio > limit {
        eprintln!("warning: |gamma_nl|/|k| = {ratio:e} exceeds {limit}; the first-order solution may be inaccurate");
    }
}

fn reject_secondary(config: &RunConfig) -> Result<(), CliError> {
    match config.secondary {
        Some(_) => Err(CliError::invalid("--secondary only applies to the sweep command")),
        None => Ok(()),
    }
}

fn device(config: &RunConfig) -> Result<CouplerParams, CliError> {
    let params = CouplerParams::new(
        RunConfig::require(config.k, "k")?,
        RunConfig::require(config.gamma_nl, "gamma-nl")?,
        RunConfig::require(config.delta_k, "delta-k")?,
    )?;
    if params.perturbativity_warning() {
        warn_if_strong(params.gamma_nl().norm() / params.k().norm());
    }
    Ok(params)
}

/// `(z, Γz)` pairs of the length axis.
fn lengths(range: &LengthRange, gamma_nl: Complex64) -> Result<Vec<(f64, f64)>, CliError> {
    let g = gamma_nl.norm();
    if range.scale == LengthScale::Rescaled && g == 0.0 {
        return Err(CliError::invalid("--gamma-z needs a non-zero --gamma-nl; use --z"));
    }
    Ok(range
        .axis
        .values()
        .into_iter()
        .map(|v| match range.scale {
            LengthScale::Physical => (v, v * g),
            LengthScale::Rescaled => (v / g, v),
        })
        .collect())
}

pub fn coeffs(config: &RunConfig) -> Result<(), CliError> {
    reject_secondary(config)?;
    let params = device(config)?;
    let points = lengths(&config.length()?, params.gamma_nl())?;
    let mut columns = vec!["z".to_string(), "gamma_z".to_string()];
    for name in ModeCoefficients::NAMES {
        columns.push(format!("{name}_re"));
        columns.push(format!("{name}_im"));
    }
    columns.push("status".into());
    let mut table = OutputTable::new(columns);
    for (z, gz) in points {
        let mut row = vec![format_number(z), format_number(gz)];
        let (values, status) = match compute_coefficients(&params, z) {
            Ok(c) => (c.all(), "ok"),
            Err(e) => ([Complex64::new(f64::NAN, f64::NAN); 12], status_of(&e)),
        };
        for v in values {
            row.push(format_number(v.re));
            row.push(format_number(v.im));
        }
        row.push(status.into());
        table.push(row);
    }
    emit(&table, config)
}

const ZENO_COLUMNS: [&str; 5] = ["n_b2", "n_b2_uncoupled", "delta_n_z", "classification", "status"];

fn zeno_cells(outcome: &crate::error::Result<crate::observables::ZenoSample>) -> Vec<String> {
    match outcome {
        Ok(s) => vec![
            format_number(s.n_b2),
            format_number(s.n_b2_uncoupled),
            format_number(s.delta_n_z),
            s.classification.to_string(),
            "ok".into(),
        ],
        Err(e) => vec![
            format_number(f64::NAN),
            format_number(f64::NAN),
            format_number(f64::NAN),
            String::new(),
            status_of(e).into(),
        ],
    }
}

pub fn zeno(config: &RunConfig) -> Result<(), CliError> {
    reject_secondary(config)?;
    let params = device(config)?;
    let inputs = config.inputs()?;
    let points = lengths(&config.length()?, params.gamma_nl())?;
    let tol = config.classification_tol();
    let mut table = OutputTable::new(["z", "gamma_z"].into_iter().chain(ZENO_COLUMNS));
    for (z, gz) in points {
        let mut row = vec![format_number(z), format_number(gz)];
        row.extend(zeno_cells(&zeno_sample(&params, &inputs, z, tol)));
        table.push(row);
    }
    emit(&table, config)
}

pub fn sweep(config: &RunConfig) -> Result<(), CliError> {
    let length = config.length()?;
    let spec = SweepSpec {
        k: RunConfig::require(config.k, "k")?,
        gamma_nl: RunConfig::require(config.gamma_nl, "gamma-nl")?,
        delta_k: RunConfig::require(config.delta_k, "delta-k")?,
        inputs: config.inputs()?,
        z_axis: length.axis,
        z_scale: length.scale,
        secondary: config.secondary,
        classification_tol: config.classification_tol(),
        thresholds: ModelThresholds::default(),
    };
    if let Some(preset) = config.preset {
        eprintln!("note: {preset}: {}", preset.note());
    }
    let worst_ratio = (0..spec.secondary_count())
        .map(|j| {
            let (_, k, g, _, _) = spec.cell_setup(j);
            g.norm() / k.norm()
        })
        .fold(0.0, f64::max);
    warn_if_strong(worst_ratio);

    let result = run_sweep(&spec)?;
    let axis_name = spec.secondary.map_or("none", |s| s.kind.name());
    let mut table = OutputTable::new(
        [
            "secondary_axis",
            "secondary_index",
            "secondary_value",
            "z_index",
            "z",
            "gamma_z",
        ]
        .into_iter()
        .chain(ZENO_COLUMNS),
    );
    for row in &result.rows {
        let mut cells = vec![
            axis_name.to_string(),
            row.secondary_index.to_string(),
            format_number(row.secondary_value.unwrap_or(f64::NAN)),
            row.z_index.to_string(),
            format_number(row.z),
            format_number(row.gamma_z),
        ];
        cells.extend(zeno_cells(&row.outcome));
        table.push(cells);
    }
    emit(&table, config)
}

pub fn oracle(config: &RunConfig) -> Result<(), CliError> {
    reject_secondary(config)?;
    let k = RunConfig::require(config.k, "k")?;
    let gamma_nl = RunConfig::require(config.gamma_nl, "gamma-nl")?;
    let delta_k = RunConfig::require(config.delta_k, "delta-k")?;
    if !(k.is_finite() && gamma_nl.is_finite()) {
        return Err(CliError::invalid("couplings must be finite"));
    }
    if k.norm() > 0.0 {
        warn_if_strong(gamma_nl.norm() / k.norm());
    }
    let op = MomentumOperator::new(k, gamma_nl, delta_k);
    let inputs = config.inputs()?;
    let points = lengths(&config.length()?, gamma_nl)?;
    let truncation = config.truncation();
    let options = OracleOptions::with_tol(config.oracle_tol());

    let reports: Vec<_> = points
        .par_iter()
        .map(|&(z, _)| propagate_with(&op, &inputs, z, &truncation, &options))
        .collect();
    let mut table = OutputTable::new([
        "z",
        "gamma_z",
        "n_a",
        "n_b1",
        "n_b2",
        "conservation_drift",
        "norm_drift",
        "steps_used",
        "status",
    ]);
    for ((z, gz), report) in points.into_iter().zip(reports) {
        let report = report?;
        let [na, nb1, nb2] = report.mean_numbers();
        table.push(vec![
            format_number(z),
            format_number(gz),
            format_number(na),
            format_number(nb1),
            format_number(nb2),
            format_number(report.conservation_drift),
            format_number(report.norm_drift),
            report.steps_used.to_string(),
            "ok".into(),
        ]);
    }
    emit(&table, config)
}

pub fn validate(config: &RunConfig, inject: Option<Injection>) -> Result<(), CliError> {
    let suite = SuiteConfig {
        truncation: config.truncation(),
        oracle_tol: config.oracle_tol(),
        inject,
    };
    let outcomes = run_suite(&suite)?;
    let bound = |b: Option<f64>| b.map(format_number).unwrap_or_default();
    let mut table = OutputTable::new(["check", "measured", "lower", "upper", "passed"]);
    for c in &outcomes {
        table.push(vec![
            c.name.to_string(),
            format_number(c.measured),
            bound(c.lower),
            bound(c.upper),
            c.passed().to_string(),
        ]);
    }
    emit(&table, config)?;
    let failed: Vec<&str> = outcomes.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError {
            code: EXIT_VALIDATION,
            message: format!("failed checks: {}", failed.join(", ")),
        })
    }
}
