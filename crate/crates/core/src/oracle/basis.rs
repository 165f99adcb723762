use num_complex::Complex64;

use crate::error::{Error, Mode, Result};
use crate::observables::CoherentInputs;

/// Default cap on the truncated Hilbert-space dimension.
pub const DEFAULT_MAX_DIMENSION: usize = 4_000_000;

/// Initial per-mode tail probability above which a cutoff is rejected.
pub const TAIL_LIMIT: f64 = 1e-6;

/// Per-mode Fock cutoffs; occupations run over `0..=max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationSpec {
    pub n_a_max: usize,
    pub n_b1_max: usize,
    pub n_b2_max: usize,
}

impl TruncationSpec {
    pub fn new(n_a_max: usize, n_b1_max: usize, n_b2_max: usize) -> Result<Self> {
        Self::with_max_dimension(n_a_max, n_b1_max, n_b2_max, DEFAULT_MAX_DIMENSION)
    }

    pub fn with_max_dimension(
        n_a_max: usize,
        n_b1_max: usize,
        n_b2_max: usize,
        max_dimension: usize,
    ) -> Result<Self> {
        let spec = Self {
            n_a_max,
            n_b1_max,
            n_b2_max,
        };
        if n_a_max < 1 || n_b1_max < 1 || n_b2_max < 1 {
            return Err(Error::InvalidParameter("every Fock cutoff must be at least 1".into()));
        }
        let dim = (n_a_max + 1)
            .checked_mul(n_b1_max + 1)
            .and_then(|d| d.checked_mul(n_b2_max + 1));
        match dim {
            Some(d) if d <= max_dimension => Ok(spec),
            _ => Err(Error::InvalidParameter(format!(
                "truncated dimension exceeds the memory guard of {max_dimension}"
            ))),
        }
    }

    pub fn dimension(&self) -> usize {
        (self.n_a_max + 1) * (self.n_b1_max + 1) * (self.n_b2_max + 1)
    }

    /// Row-major index of `|n_a, n_b1, n_b2⟩`.
    #[inline]
    pub fn index(&self, n_a: usize, n_b1: usize, n_b2: usize) -> usize {
        (n_a * (self.n_b1_max + 1) + n_b1) * (self.n_b2_max + 1) + n_b2
    }

    /// Inverse of [`index`](Self::index).
    #[inline]
    pub fn occupation(&self, index: usize) -> (usize, usize, usize) {
        let n_b2 = index % (self.n_b2_max + 1);
        let rest = index / (self.n_b2_max + 1);
        (rest / (self.n_b1_max + 1), rest % (self.n_b1_max + 1), n_b2)
    }

    pub(crate) fn max_for(&self, mode: Mode) -> usize {
        match mode {
            Mode::Probe => self.n_a_max,
            Mode::Fundamental => self.n_b1_max,
            Mode::SecondHarmonic => self.n_b2_max,
        }
    }
}

/// Amplitudes over the truncated three-mode Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockStateVector {
    pub amplitudes: Vec<Complex64>,
    pub truncation: TruncationSpec,
    /// Probability mass discarded (then renormalized away) at construction.
    pub norm_deficit: f64,
}

/// Truncated coherent expansion `e^{-|μ|²/2} μⁿ/√n!` for `n = 0..=max`, and
/// the exact probability of `n > max`.
fn coherent_expansion(mu: Complex64, max: usize) -> (Vec<Complex64>, f64) {
    let mut coeffs = Vec::with_capacity(max + 1);
    let mut c = Complex64::new((-0.5 * mu.norm_sqr()).exp(), 0.0);
    coeffs.push(c);
    for n in 1..=max {
        c = c * mu / (n as f64).sqrt();
        coeffs.push(c);
    }
    // tail summed term by term so tiny deficits keep full relative precision
    let mut tail = 0.0;
    let mut p = c.norm_sqr();
    let mean = mu.norm_sqr();
    let mut n = max;
    loop {
        n += 1;
        p *= mean / n as f64;
        tail += p;
        if p <= tail * 1e-17 || p == 0.0 {
            break;
        }
    }
    (coeffs, tail)
}

/// Product coherent state `|α⟩|β⟩|γ⟩` in the truncated basis, renormalized.
pub fn build_coherent_state(
    inputs: &CoherentInputs,
    truncation: &TruncationSpec,
) -> Result<FockStateVector> {
    if !inputs.is_finite() {
        return Err(Error::InvalidParameter("coherent amplitudes must be finite".into()));
    }
    let modes = [
        (Mode::Probe, inputs.alpha),
        (Mode::Fundamental, inputs.beta),
        (Mode::SecondHarmonic, inputs.gamma),
    ];
    let mut factors = Vec::with_capacity(3);
    let mut log_kept = 0.0;
    for (mode, mu) in modes {
        let (coeffs, tail) = coherent_expansion(mu, truncation.max_for(mode));
        if tail > TAIL_LIMIT {
            return Err(Error::ExcessiveTruncationLoss {
                mode,
                loss: tail,
                limit: TAIL_LIMIT,
            });
        }
        log_kept += (-tail).ln_1p();
        factors.push(coeffs);
    }

    let mut amplitudes = Vec::with_capacity(truncation.dimension());
    for ca in &factors[0] {
        for cb in &factors[1] {
            let ab = ca * cb;
            for cc in &factors[2] {
                amplitudes.push(ab * cc);
            }
        }
    }
    let mut state = FockStateVector {
        amplitudes,
        truncation: *truncation,
        norm_deficit: -log_kept.exp_m1(),
    };
    state.normalize();
    Ok(state)
}

impl FockStateVector {
    /// Basis vector `|n_a, n_b1, n_b2⟩`.
    pub fn basis(truncation: &TruncationSpec, n_a: usize, n_b1: usize, n_b2: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); truncation.dimension()];
        amplitudes[truncation.index(n_a, n_b1, n_b2)] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            truncation: *truncation,
            norm_deficit: 0.0,
        }
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes.iter_mut().for_each(|c| *c /= n);
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockStateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `(⟨N_a⟩, ⟨N_b1⟩, ⟨N_b2⟩)` divided by the squared norm.
    pub fn mean_numbers(&self) -> [f64; 3] {
        let mut sums = [0.0; 3];
        let mut total = 0.0;
        for (i, c) in self.amplitudes.iter().enumerate() {
            let p = c.norm_sqr();
            let (na, nb1, nb2) = self.truncation.occupation(i);
            sums[0] += p * na as f64;
            sums[1] += p * nb1 as f64;
            sums[2] += p * nb2 as f64;
            total += p;
        }
        sums.map(|s| s / total)
    }

    /// `⟨N_a + N_b1 + 2 N_b2⟩`.
    pub fn conserved_combination(&self) -> f64 {
        let [na, nb1, nb2] = self.mean_numbers();
        na + nb1 + 2.0 * nb2
    }

    /// Probability of each mode sitting at its cutoff level.
    pub fn boundary_occupation(&self) -> [f64; 3] {
        let t = self.truncation;
        let mut out = [0.0; 3];
        for (i, c) in self.amplitudes.iter().enumerate() {
            let (na, nb1, nb2) = t.occupation(i);
            let p = c.norm_sqr();
            if na == t.n_a_max {
                out[0] += p;
            }
            if nb1 == t.n_b1_max {
                out[1] += p;
            }
            if nb2 == t.n_b2_max {
                out[2] += p;
            }
        }
        out
    }

    /// `b2 |ψ⟩` (not renormalized).
    pub fn annihilate_second_harmonic(&self) -> FockStateVector {
        let t = self.truncation;
        let mut out = vec![Complex64::new(0.0, 0.0); t.dimension()];
        for (i, c) in self.amplitudes.iter().enumerate() {
            let (na, nb1, nb2) = t.occupation(i);
            if nb2 > 0 {
                out[t.index(na, nb1, nb2 - 1)] += c * (nb2 as f64).sqrt();
            }
        }
        FockStateVector {
            amplitudes: out,
            truncation: t,
            norm_deficit: 0.0,
        }
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
