//! Coherent-state photon-number expectations and the Zeno parameter.
//!
//! For the input `|α⟩|β⟩|γ⟩` every annihilation operator acting to the right
//! is replaced by its eigenvalue, so each first-order correction is a term
//! `X + conj(X)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{compute_coefficients, compute_h2_prime_with, CouplerParams, ModeCoefficients};

/// Default absolute tolerance below which `ΔN_Z` is classified as null.
pub const DEFAULT_CLASSIFICATION_TOL: f64 = 1e-12;

const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-10;

/// Coherent amplitudes of the probe (`alpha`), fundamental (`beta`) and
/// second-harmonic (`gamma`) modes at `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentInputs {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl CoherentInputs {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::new(alpha.into(), beta.into(), gamma.into())
    }

    /// No second-harmonic seed: `|γ| = 0`.
    pub fn is_spontaneous(&self) -> bool {
        self.gamma.norm() == 0.0
    }

    /// Phase `φ` of `γ = |γ| e^{iφ}`.
    pub fn phi(&self) -> f64 {
        self.gamma.arg()
    }

    /// Same inputs with `γ` rotated to phase `phi`, keeping `|γ|`.
    pub fn with_phi(&self, phi: f64) -> Self {
        Self {
            gamma: Complex64::from_polar(self.gamma.norm(), phi),
            ..*self
        }
    }

    pub(crate) fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite() && self.gamma.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// `ΔN_Z < 0`: second-harmonic generation is inhibited by the probe.
    Zeno,
    /// `ΔN_Z > 0`: generation is enhanced.
    AntiZeno,
    Null,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Zeno => "Zeno",
            Classification::AntiZeno => "AntiZeno",
            Classification::Null => "Null",
        })
    }
}

impl FromStr for Classification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Zeno" => Ok(Classification::Zeno),
            "AntiZeno" => Ok(Classification::AntiZeno),
            "Null" => Ok(Classification::Null),
            other => Err(Error::InvalidParameter(format!("unknown classification {other:?}"))),
        }
    }
}

/// One point of a Zeno-parameter scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoSample {
    pub z: f64,
    pub n_b2: f64,
    pub n_b2_uncoupled: f64,
    pub delta_n_z: f64,
    pub classification: Classification,
}

/// Mean photon numbers of the three modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMeans {
    pub n_a: f64,
    pub n_b1: f64,
    pub n_b2: f64,
}

impl ModeMeans {
    /// `⟨N_a + N_b1 + 2 N_b2⟩`, conserved by the exact dynamics.
    pub fn conserved_combination(&self) -> f64 {
        self.n_a + self.n_b1 + 2.0 * self.n_b2
    }
}

pub fn classify(delta_n_z: f64, tol: f64) -> Classification {
    if delta_n_z < -tol {
        Classification::Zeno
    } else if delta_n_z > tol {
        Classification::AntiZeno
    } else {
        Classification::Null
    }
}

/// `X + conj(X)` as a real number.
fn hermitian_sum(x: Complex64) -> Result<f64> {
    let s = x + x.conj();
    if s.im.abs() > IMAGINARY_RESIDUE_LIMIT {
        return Err(Error::InternalConsistency(format!(
            "expectation value has imaginary residue {:e}",
            s.im
        )));
    }
    Ok(s.re)
}

/// `h2 β² + h3 α β + h4 α²`: the part of `b2(z)` that is quadratic in the inputs.
fn generated_amplitude(coeffs: &ModeCoefficients, inputs: &CoherentInputs) -> Complex64 {
    let CoherentInputs { alpha, beta, .. } = *inputs;
    coeffs.h[1] * beta * beta + coeffs.h[2] * alpha * beta + coeffs.h[3] * alpha * alpha
}

fn h2_prime(params: &CouplerParams, z: f64) -> Complex64 {
    compute_h2_prime_with(
        params.gamma_nl(),
        params.delta_k(),
        z,
        params.thresholds().series_switch,
    )
}

/// `⟨N_b2(z)⟩` from precomputed coefficients.
pub fn mean_photon_b2_from(coeffs: &ModeCoefficients, inputs: &CoherentInputs) -> Result<f64> {
    let gamma = inputs.gamma;
    let correction = hermitian_sum(generated_amplitude(coeffs, inputs) * gamma.conj())?;
    Ok(gamma.norm_sqr() + correction)
}

/// `⟨N_b2(z)⟩ = |γ|² + [ (h2 β² + h3 α β + h4 α²) γ* + c.c. ]`.
pub fn mean_photon_b2(params: &CouplerParams, inputs: &CoherentInputs, z: f64) -> Result<f64> {
    let coeffs = compute_coefficients(params, z)?;
    mean_photon_b2_from(&coeffs, inputs)
}

/// Reference `⟨N_b2(z)⟩` without the probe waveguide (`k = 0`, `α = 0`).
/// `inputs.alpha` is ignored.
pub fn mean_photon_b2_uncoupled(
    gamma_nl: Complex64,
    delta_k: f64,
    inputs: &CoherentInputs,
    z: f64,
) -> f64 {
    let h2p = crate::model::compute_h2_prime(gamma_nl, delta_k, z);
    uncoupled_from(h2p, inputs)
}

fn uncoupled_from(h2p: Complex64, inputs: &CoherentInputs) -> f64 {
    let x = h2p * inputs.beta * inputs.beta * inputs.gamma.conj();
    inputs.gamma.norm_sqr() + (x + x.conj()).re
}

/// `ΔN_Z = [ ((h2 - h2') β² + h3 α β + h4 α²) γ* + c.c. ]`.
pub fn zeno_parameter(params: &CouplerParams, inputs: &CoherentInputs, z: f64) -> Result<f64> {
    let coeffs = compute_coefficients(params, z)?;
    zeno_parameter_from(&coeffs, h2_prime(params, z), inputs)
}

pub fn zeno_parameter_from(
    coeffs: &ModeCoefficients,
    h2p: Complex64,
    inputs: &CoherentInputs,
) -> Result<f64> {
    let CoherentInputs { alpha, beta, gamma } = *inputs;
    let c = (coeffs.h[1] - h2p) * beta * beta
        + coeffs.h[2] * alpha * beta
        + coeffs.h[3] * alpha * alpha;
    hermitian_sum(c * gamma.conj())
}

/// Full sample at `z`, classified with absolute tolerance `tol`.
pub fn zeno_sample(
    params: &CouplerParams,
    inputs: &CoherentInputs,
    z: f64,
    tol: f64,
) -> Result<ZenoSample> {
    let coeffs = compute_coefficients(params, z)?;
    let h2p = h2_prime(params, z);
    let n_b2 = mean_photon_b2_from(&coeffs, inputs)?;
    let n_b2_uncoupled = uncoupled_from(h2p, inputs);
    let delta_n_z = zeno_parameter_from(&coeffs, h2p, inputs)?;
    Ok(ZenoSample {
        z,
        n_b2,
        n_b2_uncoupled,
        delta_n_z,
        classification: classify(delta_n_z, tol),
    })
}

/// `(⟨N_a⟩, ⟨N_b1⟩, ⟨N_b2⟩)` to first order in `Γ`.
pub fn mode_means(params: &CouplerParams, inputs: &CoherentInputs, z: f64) -> Result<ModeMeans> {
    let coeffs = compute_coefficients(params, z)?;
    let CoherentInputs { alpha, beta, gamma } = *inputs;
    let [f1, f2, f3, f4] = coeffs.f;
    let [g1, g2, g3, g4] = coeffs.g;

    // ⟨A† A⟩ with A = L + N, L linear in the inputs, N = c3 b1† b2 + c4 a† b2;
    // the N† N term is second order and dropped.
    let mean = |linear: Complex64, c3: Complex64, c4: Complex64| -> Result<f64> {
        let cross = linear.conj() * (c3 * beta.conj() * gamma + c4 * alpha.conj() * gamma);
        Ok(linear.norm_sqr() + hermitian_sum(cross)?)
    };
    Ok(ModeMeans {
        n_a: mean(f1 * alpha + f2 * beta, f3, f4)?,
        n_b1: mean(g1 * alpha + g2 * beta, g3, g4)?,
        n_b2: mean_photon_b2_from(&coeffs, inputs)?,
    })
}
