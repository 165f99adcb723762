//! Device parameters and the closed-form spatial coefficients of the
//! first-order (in the nonlinear coupling) field-operator solution.
//!
//! With `a`, `b1`, `b2` the probe, fundamental and second-harmonic modes,
//! the evolved operators are
//!
//! ```text
//! a(z)  = f1 a + f2 b1 + f3 b1† b2 + f4 a† b2
//! b1(z) = g1 a + g2 b1 + g3 b1† b2 + g4 a† b2
//! b2(z) = h1 b2 + h2 b1² + h3 b1 a + h4 a²
//! ```
//!
//! Every division by the phase mismatch goes through
//! `(1 - exp(-i dk z)) / dk`, which is finite as `dk -> 0` and is evaluated
//! by a short series below the switch threshold.

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Numerical guards applied when evaluating the coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelThresholds {
    /// Reject when `|4|k|^2 - dk^2| < degeneracy * |k|^2`.
    pub degeneracy: f64,
    /// Use the series for `G-/dk` when `|dk z|` and `|dk|/|k|` are both below this.
    pub series_switch: f64,
    /// `|Γ|/|k|` above which the weak-nonlinearity warning is raised.
    pub perturbativity: f64,
}

impl Default for ModelThresholds {
    fn default() -> Self {
        Self {
            degeneracy: 1e-9,
            series_switch: 1e-6,
            perturbativity: 0.1,
        }
    }
}

/// Couplings of the asymmetric coupler: linear `k`, nonlinear `Γ` and the
/// phase mismatch `Δk` (all in inverse length units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerParams {
    k: Complex64,
    gamma_nl: Complex64,
    delta_k: f64,
    thresholds: ModelThresholds,
}

impl CouplerParams {
    pub fn new(k: Complex64, gamma_nl: Complex64, delta_k: f64) -> Result<Self> {
        Self::with_thresholds(k, gamma_nl, delta_k, ModelThresholds::default())
    }

    pub fn with_thresholds(
        k: Complex64,
        gamma_nl: Complex64,
        delta_k: f64,
        thresholds: ModelThresholds,
    ) -> Result<Self> {
        if !(k.is_finite() && gamma_nl.is_finite() && delta_k.is_finite()) {
            return Err(Error::InvalidParameter(
                "couplings and phase mismatch must be finite".into(),
            ));
        }
        if !(thresholds.degeneracy >= 0.0 && thresholds.series_switch >= 0.0) {
            return Err(Error::InvalidParameter(
                "thresholds must be non-negative".into(),
            ));
        }
        let k_abs = k.norm();
        if k_abs == 0.0 {
            return Err(Error::InvalidParameter(
                "linear coupling k must be non-zero; use the uncoupled reference for k = 0".into(),
            ));
        }
        let gap = (4.0 * k_abs * k_abs - delta_k * delta_k).abs();
        let threshold = thresholds.degeneracy * k_abs * k_abs;
        if gap < threshold {
            return Err(Error::DegenerateParameters { gap, threshold });
        }
        Ok(Self {
            k,
            gamma_nl,
            delta_k,
            thresholds,
        })
    }

    /// Real-valued convenience constructor.
    pub fn real(k: f64, gamma_nl: f64, delta_k: f64) -> Result<Self> {
        Self::new(Complex64::new(k, 0.0), Complex64::new(gamma_nl, 0.0), delta_k)
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn gamma_nl(&self) -> Complex64 {
        self.gamma_nl
    }

    pub fn delta_k(&self) -> f64 {
        self.delta_k
    }

    pub fn thresholds(&self) -> ModelThresholds {
        self.thresholds
    }

    /// True when `|Γ|/|k|` exceeds the weak-nonlinearity bound.
    pub fn perturbativity_warning(&self) -> bool {
        self.gamma_nl.norm() / self.k.norm() > self.thresholds.perturbativity
    }

    /// Same device with a different nonlinear coupling.
    pub fn with_gamma_nl(&self, gamma_nl: Complex64) -> Result<Self> {
        Self::with_thresholds(self.k, gamma_nl, self.delta_k, self.thresholds)
    }
}

/// The twelve coefficients at propagation distance `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients {
    pub z: f64,
    /// `f1..f4`
    pub f: [Complex64; 4],
    /// `g1..g4`
    pub g: [Complex64; 4],
    /// `h1..h4`
    pub h: [Complex64; 4],
}

impl ModeCoefficients {
    /// The seven coefficients that are first order in `Γ`:
    /// `f3, f4, g3, g4, h2, h3, h4`.
    pub fn nonlinear(&self) -> [Complex64; 7] {
        [
            self.f[2], self.f[3], self.g[2], self.g[3], self.h[1], self.h[2], self.h[3],
        ]
    }

    /// All twelve in the order `f1..f4, g1..g4, h1..h4`.
    pub fn all(&self) -> [Complex64; 12] {
        let mut out = [Complex64::new(0.0, 0.0); 12];
        out[..4].copy_from_slice(&self.f);
        out[4..8].copy_from_slice(&self.g);
        out[8..].copy_from_slice(&self.h);
        out
    }

    pub const NAMES: [&'static str; 12] = [
        "f1", "f2", "f3", "f4", "g1", "g2", "g3", "g4", "h1", "h2", "h3", "h4",
    ];
}

/// `(G-, G+) = (1 - exp(-i dk z), 1 + exp(-i dk z))`.
pub fn g_pm(delta_k: f64, z: f64) -> (Complex64, Complex64) {
    let x = delta_k * z;
    let (s, c) = x.sin_cos();
    let half = (0.5 * x).sin();
    // 1 - cos x = 2 sin^2(x/2) avoids cancellation for small x
    let g_minus = Complex64::new(2.0 * half * half, s);
    let g_plus = Complex64::new(1.0 + c, -s);
    (g_minus, g_plus)
}

/// `G- / dk = (1 - exp(-i dk z)) / dk`, finite at `dk = 0` where it equals `i z`.
fn mismatch_quotient(delta_k: f64, z: f64, series: bool) -> Complex64 {
    if series {
        // i z + dk z^2 / 2 - i dk^2 z^3 / 6
        let z2 = z * z;
        Complex64::new(0.5 * delta_k * z2, z - delta_k * delta_k * z2 * z / 6.0)
    } else {
        g_pm(delta_k, z).0 / delta_k
    }
}

fn check_length(z: f64) -> Result<()> {
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "propagation distance must be finite and non-negative, got {z}"
        )));
    }
    Ok(())
}

/// Evaluates `f1..f4`, `g1..g4`, `h1..h4` at distance `z`.
pub fn compute_coefficients(params: &CouplerParams, z: f64) -> Result<ModeCoefficients> {
    check_length(z)?;
    let k = params.k;
    let kc = k.conj();
    let gamma = params.gamma_nl;
    let gamma_c = gamma.conj();
    let dk = params.delta_k;
    let k_abs = k.norm();
    let k_abs2 = k_abs * k_abs;

    let denom = 4.0 * k_abs2 - dk * dk;
    let gap = denom.abs();
    let threshold = params.thresholds.degeneracy * k_abs2;
    if gap < threshold {
        return Err(Error::DegenerateParameters { gap, threshold });
    }

    let switch = params.thresholds.series_switch;
    let series = (dk * z).abs() < switch && dk.abs() / k_abs < switch;
    let q = mismatch_quotient(dk, z, series);
    let (g_minus, g_plus) = g_pm(dk, z);
    // G+ - 1
    let phase = Complex64::from_polar(1.0, -dk * z);
    let phase_c = phase.conj();

    let (sin_kz, cos_kz) = (k_abs * z).sin_cos();
    let f1 = Complex64::new(cos_kz, 0.0);
    let f2 = -I * kc / k_abs * sin_kz;
    let g1 = -f2.conj();
    let g2 = f1;

    let f3 = 2.0 * kc * gamma_c / denom * (g_minus * f1 + f2 / kc * (dk - 2.0 * k_abs2 * q));
    let f4 = 4.0 * kc * kc * gamma_c * q * f1 / denom + 2.0 * kc * gamma_c * g_plus * f2 / denom;
    let g3 = 2.0 * gamma_c * k * g_plus * f2 / denom
        - 2.0 * gamma_c * (2.0 * k_abs2 - dk * dk) * f1 * q / denom;
    // 4|k|^2/dk - 2(2|k|^2 - dk^2)(G+ - 1)/dk regrouped as 4|k|^2 G-/dk + 2 dk (G+ - 1)
    let g4 = 2.0 * gamma_c * f2 * (2.0 * k_abs2 * q + dk * phase) / denom
        + 2.0 * kc * gamma_c * g_minus * f1 / denom;

    let (sin_2kz, cos_2kz) = (2.0 * k_abs * z).sin_cos();
    let brace_sin = 2.0 * k_abs * phase_c * sin_2kz - I * dk * (1.0 - phase_c * cos_2kz);
    let q_c = q.conj();
    let h1 = Complex64::new(1.0, 0.0);
    let h2 = gamma * q_c / 2.0 - I * gamma / (2.0 * denom) * brace_sin;
    let h3 = -gamma * k_abs / (kc * denom)
        * (I * dk * phase_c * sin_2kz + 2.0 * k_abs * (1.0 - phase_c * cos_2kz));
    let ratio = k_abs2 / (kc * kc);
    let h4 = -gamma * ratio * q_c / 2.0 - I * gamma * ratio / (2.0 * denom) * brace_sin;

    Ok(ModeCoefficients {
        z,
        f: [f1, f2, f3, f4],
        g: [g1, g2, g3, g4],
        h: [h1, h2, h3, h4],
    })
}

/// `h2` of the uncoupled device (`k = 0`): `Γ (1 - exp(i dk z)) / dk`.
pub fn compute_h2_prime(gamma_nl: Complex64, delta_k: f64, z: f64) -> Complex64 {
    compute_h2_prime_with(gamma_nl, delta_k, z, ModelThresholds::default().series_switch)
}

pub fn compute_h2_prime_with(
    gamma_nl: Complex64,
    delta_k: f64,
    z: f64,
    series_switch: f64,
) -> Complex64 {
    let series = (delta_k * z).abs() < series_switch;
    // (1 - exp(i dk z)) / dk is the conjugate of G-/dk
    gamma_nl * mismatch_quotient(delta_k, z, series).conj()
}
