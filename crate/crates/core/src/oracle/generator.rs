use num_complex::Complex64;

use super::basis::{FockStateVector, TruncationSpec};
use crate::model::CouplerParams;

/// Momentum operator (in units of ħ)
///
/// ```text
/// G(z) = -k a b1† - Γ e^{i dk z} b1² b2† + H.c.
/// ```
///
/// Unlike [`CouplerParams`] this accepts `k = 0`, which is the uncoupled
/// reference device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumOperator {
    pub k: Complex64,
    pub gamma_nl: Complex64,
    pub delta_k: f64,
}

impl From<&CouplerParams> for MomentumOperator {
    fn from(p: &CouplerParams) -> Self {
        Self {
            k: p.k(),
            gamma_nl: p.gamma_nl(),
            delta_k: p.delta_k(),
        }
    }
}

impl From<CouplerParams> for MomentumOperator {
    fn from(p: CouplerParams) -> Self {
        Self::from(&p)
    }
}

impl MomentumOperator {
    pub fn new(k: Complex64, gamma_nl: Complex64, delta_k: f64) -> Self {
        Self { k, gamma_nl, delta_k }
    }

    /// The same operator with the probe decoupled.
    pub fn uncoupled(&self) -> Self {
        Self {
            k: Complex64::new(0.0, 0.0),
            ..*self
        }
    }

    /// Upper bound on `‖G(z)‖₂`, valid for every `z` (maximum absolute
    /// column sum; the operator is Hermitian so this also bounds the spectral norm).
    pub fn norm_bound(&self, t: &TruncationSpec) -> f64 {
        let k = self.k.norm();
        let g = self.gamma_nl.norm();
        let mut best: f64 = 0.0;
        for i in 0..t.dimension() {
            let (na, nb1, nb2) = t.occupation(i);
            let (na, nb1, nb2) = (na as f64, nb1 as f64, nb2 as f64);
            let mut s = 0.0;
            if (na as usize) > 0 && (nb1 as usize) < t.n_b1_max {
                s += k * (na * (nb1 + 1.0)).sqrt();
            }
            if (nb1 as usize) > 0 && (na as usize) < t.n_a_max {
                s += k * ((na + 1.0) * nb1).sqrt();
            }
            if (nb1 as usize) >= 2 && (nb2 as usize) < t.n_b2_max {
                s += g * (nb1 * (nb1 - 1.0) * (nb2 + 1.0)).sqrt();
            }
            if (nb2 as usize) > 0 && (nb1 as usize) + 2 <= t.n_b1_max {
                s += g * ((nb1 + 1.0) * (nb1 + 2.0) * nb2).sqrt();
            }
            best = best.max(s);
        }
        best
    }

    /// `out = scale * G(z) * input` on the truncated basis (gather form:
    /// each output amplitude collects its four possible sources).
    pub fn apply_into(
        &self,
        z: f64,
        t: &TruncationSpec,
        scale: Complex64,
        input: &[Complex64],
        out: &mut [Complex64],
    ) {
        let phase = Complex64::from_polar(1.0, self.delta_k * z);
        // coefficients of the four terms
        let c_ab = -self.k * scale; // a b1†
        let c_ba = -self.k.conj() * scale; // a† b1
        let c_up = -self.gamma_nl * phase * scale; // b1² b2†
        let c_down = -(self.gamma_nl * phase).conj() * scale; // b1†² b2

        let sb2 = t.n_b2_max + 1;
        let sb1 = (t.n_b1_max + 1) * sb2;
        for (i, slot) in out.iter_mut().enumerate() {
            let (na, nb1, nb2) = t.occupation(i);
            let mut acc = Complex64::new(0.0, 0.0);
            // a b1† |na+1, nb1-1, nb2⟩
            if nb1 > 0 && na < t.n_a_max {
                let amp = ((na + 1) as f64 * nb1 as f64).sqrt();
                acc += c_ab * amp * input[i + sb1 - sb2];
            }
            // a† b1 |na-1, nb1+1, nb2⟩
            if na > 0 && nb1 < t.n_b1_max {
                let amp = (na as f64 * (nb1 + 1) as f64).sqrt();
                acc += c_ba * amp * input[i - sb1 + sb2];
            }
            // b1² b2† |na, nb1+2, nb2-1⟩
            if nb2 > 0 && nb1 + 2 <= t.n_b1_max {
                let amp = ((nb1 + 2) as f64 * (nb1 + 1) as f64 * nb2 as f64).sqrt();
                acc += c_up * amp * input[i + 2 * sb2 - 1];
            }
            // b1†² b2 |na, nb1-2, nb2+1⟩
            if nb1 >= 2 && nb2 < t.n_b2_max {
                let amp = (nb1 as f64 * (nb1 - 1) as f64 * (nb2 + 1) as f64).sqrt();
                acc += c_down * amp * input[i - 2 * sb2 + 1];
            }
            *slot = acc;
        }
    }
}

/// `G(z) |ψ⟩` for the given device.
pub fn apply_generator(
    op: &MomentumOperator,
    z: f64,
    state: &FockStateVector,
) -> FockStateVector {
    let t = state.truncation;
    let mut out = vec![Complex64::new(0.0, 0.0); t.dimension()];
    op.apply_into(z, &t, Complex64::new(1.0, 0.0), &state.amplitudes, &mut out);
    FockStateVector {
        amplitudes: out,
        truncation: t,
        norm_deficit: 0.0,
    }
}
