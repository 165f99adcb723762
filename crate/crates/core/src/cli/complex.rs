//! Text encodings of complex parameters: `re`, `re+imI`, `re-imI`, `imI`
//! and polar `mag@phase_rad`.

use num_complex::Complex64;

fn parse_real(text: &str, original: &str) -> Result<f64, String> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse {original:?} as a complex number"))?;
    if !v.is_finite() {
        return Err(format!("{original:?} is not finite"));
    }
    Ok(v)
}

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty complex value".into());
    }
    if let Some((mag, phase)) = s.split_once('@') {
        let mag = parse_real(mag, text)?;
        let phase = parse_real(phase, text)?;
        if mag < 0.0 {
            return Err(format!("{text:?}: polar magnitude must be non-negative"));
        }
        return Ok(Complex64::from_polar(mag, phase));
    }
    let Some(body) = s.strip_suffix('I') else {
        return Ok(Complex64::new(parse_real(s, text)?, 0.0));
    };
    // the sign that separates the parts is the last one not belonging to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re = parse_real(&body[..i], text)?;
            let im_text = body[i..].strip_prefix('+').unwrap_or(&body[i..]);
            Ok(Complex64::new(re, parse_real(im_text, text)?))
        }
        None => Ok(Complex64::new(0.0, parse_real(body, text)?)),
    }
}

/// Rectangular `re+imI` form; `parse_complex(&format_complex(z)) == z` for finite `z`.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:?}{}{:?}I", z.re, sign, z.im.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_complex("0.1").unwrap(), Complex64::new(0.1, 0.0));
        assert_eq!(parse_complex("-2").unwrap(), Complex64::new(-2.0, 0.0));
        assert_eq!(parse_complex("1+2I").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("1-2I").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(parse_complex("-1e-3-2.5e+2I").unwrap(), Complex64::new(-1e-3, -250.0));
        assert_eq!(parse_complex("1e-5+3E-7I").unwrap(), Complex64::new(1e-5, 3e-7));
        assert_eq!(parse_complex("-0.5I").unwrap(), Complex64::new(0.0, -0.5));
        let polar = parse_complex("2@1.5707963267948966").unwrap();
        assert!((polar - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn rejected_forms() {
        for bad in ["", "abc", "1+I", "nan", "inf", "1+2", "1@", "-1@0.3", "1+2j"] {
            assert!(parse_complex(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn signed_zero_survives() {
        let z = Complex64::new(-0.0, -0.0);
        let back = parse_complex(&format_complex(z)).unwrap();
        assert!(back.re.is_sign_negative() && back.im.is_sign_negative());
    }

    proptest! {
        #[test]
        fn format_then_parse_is_identity(re in proptest::num::f64::NORMAL | proptest::num::f64::ZERO,
                                         im in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
            let z = Complex64::new(re, im);
            let back = parse_complex(&format_complex(z)).unwrap();
            prop_assert_eq!(back.re.to_bits(), re.to_bits());
            prop_assert_eq!(back.im.to_bits(), im.to_bits());
        }

        #[test]
        fn real_text_round_trips(re in -1e6f64..1e6) {
            prop_assert_eq!(parse_complex(&format!("{re:?}")).unwrap(), Complex64::new(re, 0.0));
        }
    }
}
