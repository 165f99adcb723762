//! Photon statistics of an asymmetric nonlinear optical coupler: a linear
//! waveguide (probe mode `a`) evanescently coupled to a quadratic waveguide
//! operating under second-harmonic generation (modes `b1`, `b2`).
//!
//! [`model`] evaluates the first-order closed-form field-operator
//! coefficients, [`observables`] turns them into coherent-state photon
//! numbers and the Zeno parameter, [`oracle`] propagates the full state in a
//! truncated Fock space as an independent check, and [`sweep`] builds the
//! parameter grids. [`cli`] backs the `zeno-coupler` binary.

pub mod cli;
pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod sweep;

pub use error::{Error, Mode, Result};
pub use model::{compute_coefficients, compute_h2_prime, g_pm, CouplerParams, ModeCoefficients, ModelThresholds};
pub use observables::{
    classify, mean_photon_b2, mean_photon_b2_uncoupled, mode_means, zeno_parameter, zeno_sample,
    Classification, CoherentInputs, ModeMeans, ZenoSample,
};

pub use num_complex::Complex64;
