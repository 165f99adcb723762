use num_complex::Complex64;

use super::basis::norm;

/// Truncation degree of the Taylor series per sub-step. With the scaled
/// operator norm at most 1 the remainder is below `e / 19! < 3e-17`.
pub const TAYLOR_DEGREE: usize = 18;

/// Overwrites `v` with `exp(t A) v`.
///
/// `apply(scale, x, out)` must write `scale * A x` into `out`, and `norm_bound`
/// must bound `‖A‖₂`. The interval is split into `s` sub-steps with
/// `|t| norm_bound / s <= 1`, each summed as a Taylor series that stops early
/// once a term falls below machine precision (later terms can only shrink).
pub fn expmv_taylor<F>(
    apply: F,
    t: Complex64,
    norm_bound: f64,
    v: &mut [Complex64],
    scratch: &mut [Complex64],
) where
    F: Fn(Complex64, &[Complex64], &mut [Complex64]),
{
    let reach = t.norm() * norm_bound;
    if reach == 0.0 {
        return;
    }
    let substeps = reach.ceil().max(1.0) as usize;
    let dt = t / substeps as f64;
    let mut term = v.to_vec();
    for _ in 0..substeps {
        let base = norm(v);
        term.copy_from_slice(v);
        for j in 1..=TAYLOR_DEGREE {
            apply(dt / j as f64, &term, scratch);
            term.copy_from_slice(scratch);
            let mut size = 0.0;
            for (acc, x) in v.iter_mut().zip(term.iter()) {
                *acc += x;
                size += x.norm_sqr();
            }
            if size.sqrt() <= 1e-17 * base {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 2x2 Hermitian test operator [[a, b], [conj(b), d]].
    fn two_level(a: f64, b: Complex64, d: f64) -> impl Fn(Complex64, &[Complex64], &mut [Complex64]) {
        move |s, x, out| {
            out[0] = s * (a * x[0] + b * x[1]);
            out[1] = s * (b.conj() * x[0] + d * x[1]);
        }
    }

    #[test]
    fn rotation_is_exact() {
        // exp(i θ σx) = cos θ + i sin θ σx
        let theta: f64 = 7.3;
        let mut v = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let mut scratch = vec![Complex64::new(0.0, 0.0); 2];
        expmv_taylor(
            two_level(0.0, Complex64::new(1.0, 0.0), 0.0),
            Complex64::new(0.0, theta),
            1.0,
            &mut v,
            &mut scratch,
        );
        assert!((v[0] - Complex64::new(theta.cos(), 0.0)).norm() < 1e-14);
        assert!((v[1] - Complex64::new(0.0, theta.sin())).norm() < 1e-14);
    }

    #[test]
    fn diagonal_phases_and_decay() {
        let mut v = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let mut scratch = vec![Complex64::new(0.0, 0.0); 2];
        let t = Complex64::new(-0.5, 2.0);
        expmv_taylor(two_level(1.5, Complex64::new(0.0, 0.0), -0.7), t, 1.5, &mut v, &mut scratch);
        let e0 = (t * 1.5).exp() * 0.6;
        let e1 = (t * -0.7).exp() * Complex64::new(0.0, 0.8);
        assert!((v[0] - e0).norm() < 1e-13 * e0.norm());
        assert!((v[1] - e1).norm() < 1e-13 * e1.norm().max(1.0));
    }

    #[test]
    fn zero_time_is_identity() {
        let mut v = vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5)];
        let before = v.clone();
        let mut scratch = vec![Complex64::new(0.0, 0.0); 2];
        expmv_taylor(two_level(1.0, Complex64::new(1.0, 1.0), 2.0), Complex64::new(0.0, 0.0), 3.0, &mut v, &mut scratch);
        assert_eq!(v, before);
    }
}
