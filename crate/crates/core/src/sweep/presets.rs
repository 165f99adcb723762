use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{Axis, SecondaryKind, SweepSpec};
use crate::error::{Error, Result};
use crate::observables::CoherentInputs;

/// Reference grids. Only the device and inputs are fixed by the model setup,
/// so the ranges below are choices; [`Preset::note`] records them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `Γz` scan at `k = 0.1, Γ = 0.001, Δk = 1e-4, α = 5, β = 2, γ = 1`.
    Fig2,
    /// `(Γz, Δk)` surface; `Δk` crosses the `2|k|` resonance where the
    /// Zeno/anti-Zeno transition sits.
    Fig3,
    /// `(Γz, |k|)` surface at `Δk = 1e-4`.
    Fig4,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Fig2, Preset::Fig3, Preset::Fig4];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    pub fn spec(&self) -> SweepSpec {
        let base = SweepSpec::rescaled(
            Complex64::new(0.1, 0.0),
            Complex64::new(0.001, 0.0),
            1e-4,
            CoherentInputs::real(5.0, 2.0, 1.0),
            Axis {
                min: 0.0,
                max: 0.1,
                count: 101,
            },
        );
        let surface_z = Axis {
            min: 0.0,
            max: 0.1,
            count: 51,
        };
        match self {
            Preset::Fig2 => base,
            Preset::Fig3 => SweepSpec { z_axis: surface_z, ..base }.with_secondary(
                SecondaryKind::DeltaK,
                Axis {
                    min: 1e-4,
                    max: 0.4,
                    count: 81,
                },
            ),
            Preset::Fig4 => SweepSpec { z_axis: surface_z, ..base }.with_secondary(
                SecondaryKind::KMagnitude,
                Axis {
                    min: 0.05,
                    max: 0.5,
                    count: 46,
                },
            ),
        }
    }

    pub fn note(&self) -> &'static str {
        match self {
            Preset::Fig2 => "gamma_z range [0, 0.1] is an implementation choice",
            Preset::Fig3 => {
                "gamma_z range [0, 0.1] and delta_k range [1e-4, 0.4] are implementation choices; \
                 delta_k crosses 2|k| = 0.2, cells inside the resonance guard are marked degenerate"
            }
            Preset::Fig4 => "gamma_z range [0, 0.1] and |k| range [0.05, 0.5] are implementation choices",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown preset {s:?} (expected fig2, fig3 or fig4)")))
    }
}
