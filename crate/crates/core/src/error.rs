use std::fmt;

use thiserror::Error;

/// Field mode of the coupler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Linear (probe) waveguide mode `a`.
    Probe,
    /// Fundamental mode `b1` of the nonlinear waveguide.
    Fundamental,
    /// Second-harmonic mode `b2` of the nonlinear waveguide.
    SecondHarmonic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Mode::Probe => "a",
            Mode::Fundamental => "b1",
            Mode::SecondHarmonic => "b2",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "degenerate parameters: |4|k|^2 - dk^2| = {gap:e} is below the resonance threshold {threshold:e}"
    )]
    DegenerateParameters { gap: f64, threshold: f64 },

    #[error("truncation loss {loss:e} in mode {mode} exceeds the limit {limit:e}; raise the cutoff")]
    ExcessiveTruncationLoss { mode: Mode, loss: f64, limit: f64 },

    #[error("propagation did not converge after {steps} steps (last change {change:e}, tolerance {tol:e})")]
    NonConvergence { steps: usize, change: f64, tol: f64 },

    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
