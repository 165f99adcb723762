use zeno_coupler::oracle::{
    build_coherent_state, evolve_fixed_steps, oracle_zeno_parameter, propagate, MomentumOperator, TruncationSpec,
};
use zeno_coupler::sweep::{validate_against_oracle, Axis, LengthScale, SweepSpec, ValidationOptions};
use zeno_coupler::{zeno_parameter, CoherentInputs, Complex64, CouplerParams};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn midpoint_steps_are_second_order() {
    let t = TruncationSpec::new(12, 12, 8).unwrap();
    let op = MomentumOperator::new(c(0.1), c(0.01), 0.05);
    let psi0 = build_coherent_state(&CoherentInputs::real(1.0, 1.0, 0.5), &t).unwrap();
    let nb2 = |steps| evolve_fixed_steps(&op, &psi0, 20.0, steps).mean_numbers()[2];
    let (a, b, d) = (nb2(8), nb2(16), nb2(32));
    let ratio = (a - b) / (b - d);
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
}

#[test]
fn strong_mismatch_matches_reference_propagation() {
    // sparse-matrix propagation with scipy's expm_multiply, 400 midpoint steps
    let reference = [1.1990702255081898, 1.0805956762631908, 0.11016704827261273];
    let t = TruncationSpec::new(12, 12, 8).unwrap();
    let op = MomentumOperator::new(c(0.1), c(0.01), 0.05);
    let inputs = CoherentInputs::real(1.0, 1.0, 0.5);
    let psi0 = build_coherent_state(&inputs, &t).unwrap();
    let fixed = evolve_fixed_steps(&op, &psi0, 20.0, 400).mean_numbers();
    for (got, want) in fixed.iter().zip(reference) {
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
    // the converged run removes the O(h^2) bias of the 400-step value, about 1.7e-7 in n_b2
    let r = propagate(&op, &inputs, 20.0, &t, 1e-9).unwrap();
    let nb2 = r.mean_numbers()[2];
    assert!((reference[2] - nb2 - 1.71e-7).abs() < 5e-9, "{nb2}");
    assert!(r.conservation_drift < 1e-10);
}

#[test]
fn perturbative_error_is_second_order_at_fixed_length() {
    let t = TruncationSpec::new(12, 12, 8).unwrap();
    let inputs = CoherentInputs::real(1.0, 1.0, 0.5);
    let err = |gamma: f64| {
        let p = CouplerParams::real(0.1, gamma, 1e-4).unwrap();
        let exact = oracle_zeno_parameter(&MomentumOperator::from(&p), &inputs, 50.0, &t, 1e-11).unwrap();
        (zeno_parameter(&p, &inputs, 50.0).unwrap() - exact).abs()
    };
    let ratio = err(1e-3) / err(5e-4);
    assert!((3.0..=5.0).contains(&ratio), "{ratio}");
}

#[test]
fn sampled_validation_of_a_small_grid() {
    let t = TruncationSpec::new(12, 12, 8).unwrap();
    let spec = SweepSpec {
        z_scale: LengthScale::Physical,
        ..SweepSpec::rescaled(c(0.1), c(1e-3), 1e-4, CoherentInputs::real(1.0, 1.0, 0.5), Axis::new(10.0, 50.0, 5).unwrap())
    };
    let report = validate_against_oracle(&spec, &t, 3, &ValidationOptions::default()).unwrap();
    assert_eq!(report.cells.len(), 3);
    assert_eq!(report.halved.len(), 3);
    for cell in &report.cells {
        assert!(cell.discrepancy < 1e-3, "{cell:?}");
    }
    let ratio = report.contraction_ratio.unwrap();
    assert!(ratio > 2.5, "{ratio}");
    let again = validate_against_oracle(&spec, &t, 3, &ValidationOptions::default()).unwrap();
    assert_eq!(report, again);
}
