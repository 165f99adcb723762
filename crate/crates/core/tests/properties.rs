use std::f64::consts::PI;

use proptest::prelude::*;
use zeno_coupler::cli::complex::{format_complex, parse_complex};
use zeno_coupler::observables::zeno_parameter;
use zeno_coupler::{
    compute_coefficients, compute_h2_prime, mean_photon_b2, mean_photon_b2_uncoupled, CoherentInputs, Complex64,
    CouplerParams,
};

fn complex(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| Complex64::new(re, im))
}

prop_compose! {
    fn device()(k_mag in 0.02f64..1.0, k_arg in -PI..PI, ratio in 1e-4f64..0.05, g_arg in -PI..PI,
                dk in -0.5f64..0.5) -> (Complex64, Complex64, f64) {
        (Complex64::from_polar(k_mag, k_arg), Complex64::from_polar(k_mag * ratio, g_arg), dk)
    }
}

fn params((k, g, dk): (Complex64, Complex64, f64)) -> Option<CouplerParams> {
    CouplerParams::new(k, g, dk).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn linear_block_is_unitary(dev in device(), z in 0.0f64..300.0) {
        let Some(p) = params(dev) else { return Ok(()) };
        let c = compute_coefficients(&p, z).unwrap();
        let [f1, f2, ..] = c.f;
        let [g1, g2, ..] = c.g;
        prop_assert!((f1.norm_sqr() + f2.norm_sqr() - 1.0).abs() <= 1e-12);
        prop_assert!((f1 - g2).norm() <= 1e-12);
        prop_assert!((f2 + g1.conj()).norm() <= 1e-12);
        prop_assert_eq!(c.h[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn nonlinear_coefficients_are_linear_in_gamma(dev in device(), z in 0.0f64..300.0, s in 0.1f64..10.0) {
        let Some(p) = params(dev) else { return Ok(()) };
        let scaled = p.with_gamma_nl(p.gamma_nl() * s).unwrap();
        let a = compute_coefficients(&p, z).unwrap();
        let b = compute_coefficients(&scaled, z).unwrap();
        let scale = a.nonlinear().iter().map(|v| v.norm()).fold(0.0, f64::max) * s;
        for (x, y) in a.nonlinear().iter().zip(b.nonlinear()) {
            prop_assert!((y - x * s).norm() <= 1e-13 * scale.max(f64::MIN_POSITIVE));
        }
        prop_assert_eq!(&a.f[..2], &b.f[..2]);
    }

    #[test]
    fn zero_length_is_identity(dev in device(), a in complex(3.0), b in complex(3.0), g in complex(3.0)) {
        let Some(p) = params(dev) else { return Ok(()) };
        let c = compute_coefficients(&p, 0.0).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        for v in c.nonlinear() {
            prop_assert_eq!(v, zero);
        }
        let inputs = CoherentInputs::new(a, b, g);
        prop_assert_eq!(zeno_parameter(&p, &inputs, 0.0).unwrap(), 0.0);
        prop_assert!((mean_photon_b2(&p, &inputs, 0.0).unwrap() - g.norm_sqr()).abs() <= 1e-15 * g.norm_sqr().max(1.0));
    }

    #[test]
    fn spontaneous_seed_gives_null(dev in device(), a in complex(3.0), b in complex(3.0), z in 0.0f64..300.0) {
        let Some(p) = params(dev) else { return Ok(()) };
        let inputs = CoherentInputs::new(a, b, Complex64::new(0.0, 0.0));
        prop_assert_eq!(zeno_parameter(&p, &inputs, z).unwrap(), 0.0);
    }

    #[test]
    fn seed_phase_enters_as_a_sinusoid(z in 0.0f64..100.0, phi in -PI..PI) {
        let p = CouplerParams::real(0.1, 0.001, 1e-4).unwrap();
        let base = CoherentInputs::real(5.0, 2.0, 1.0);
        let at = |phi: f64| zeno_parameter(&p, &base.with_phi(phi), z).unwrap();
        prop_assert!((at(phi) + at(phi + PI)).abs() <= 1e-13);
        let rebuilt = at(0.0) * phi.cos() + at(PI / 2.0) * phi.sin();
        prop_assert!((at(phi) - rebuilt).abs() <= 1e-12);
    }

    #[test]
    fn zeno_parameter_is_the_photon_number_difference(dev in device(), a in complex(2.0), b in complex(2.0),
                                                    g in complex(2.0), z in 0.0f64..200.0) {
        let Some(p) = params(dev) else { return Ok(()) };
        let inputs = CoherentInputs::new(a, b, g);
        let diff = mean_photon_b2(&p, &inputs, z).unwrap()
            - mean_photon_b2_uncoupled(p.gamma_nl(), p.delta_k(), &inputs, z);
        let dz = zeno_parameter(&p, &inputs, z).unwrap();
        prop_assert!((diff - dz).abs() <= 1e-10 * (1.0 + g.norm_sqr()));
    }

    #[test]
    fn complex_text_round_trips(re in any::<f64>(), im in any::<f64>()) {
        prop_assume!(re.is_finite() && im.is_finite());
        let z = Complex64::new(re, im);
        let back = parse_complex(&format_complex(z)).unwrap();
        prop_assert_eq!(back.re.to_bits(), re.to_bits());
        prop_assert_eq!(back.im.to_bits(), im.to_bits());
    }
}

#[test]
fn weak_coupling_recovers_the_bare_second_harmonic_coefficient() {
    let p = CouplerParams::real(1e-8, 0.001, 1e-4).unwrap();
    let h2 = compute_coefficients(&p, 100.0).unwrap().h[1];
    let h2p = compute_h2_prime(p.gamma_nl(), p.delta_k(), 100.0);
    assert!((h2 - h2p).norm() / h2p.norm() < 1e-6);
}
