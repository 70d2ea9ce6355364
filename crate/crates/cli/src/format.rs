//! Numeric output formatting: floats at a fixed number of significant
//! digits, rationals as exact `num/den` strings.

use num_rational::BigRational;

/// Default significant digits for float output.
pub const FLOAT_SIG_DIGITS: usize = 12;

/// Render a float with `sig` significant digits, preferring plain
/// decimal notation for moderate exponents.
pub fn fmt_sig(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let formatted = format!("{:.*e}", sig.saturating_sub(1), v);
    let (mantissa, exponent) = formatted
        .split_once('e')
        .expect("exponent format always contains e");
    let exp: i32 = exponent.parse().expect("valid exponent");
    if !(-7..16).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    // expand into plain decimal
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = 1 + exp; // digits before the decimal point
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(&digits);
    } else if (point as usize) >= digits.len() {
        out.push_str(&digits);
        for _ in 0..point as usize - digits.len() {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    trim_zeros(&out).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.')
}

/// Float with the default precision.
pub fn fmt_float(v: f64) -> String {
    fmt_sig(v, FLOAT_SIG_DIGITS)
}

/// Exact fraction string `num/den` (plain integer when den = 1).
pub fn fmt_rational(v: &BigRational) -> String {
    v.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn plain_decimals() {
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(2.0), "2");
        assert_eq!(fmt_float(0.25), "0.25");
        assert_eq!(fmt_float(-1057.151483), "-1057.151483");
        assert_eq!(fmt_sig(1.0 / 3.0, 5), "0.33333");
    }

    #[test]
    fn extreme_exponents_stay_scientific() {
        assert_eq!(fmt_sig(1.5e-20, 3), "1.5e-20");
        assert_eq!(fmt_sig(-2.5e24, 3), "-2.5e24");
    }

    #[test]
    fn roundtrips_at_stated_precision() {
        for v in [1.234567890123e-3, 6.488, 1057.151, 0.561215, 9.9999e14] {
            let s = fmt_float(v);
            let back: f64 = s.parse().unwrap();
            assert!(
                ((back - v) / v).abs() < 1e-11,
                "{v} -> {s} -> {back}"
            );
        }
    }

    #[test]
    fn rational_formatting() {
        let r = BigRational::new(BigInt::from(-3), BigInt::from(8));
        assert_eq!(fmt_rational(&r), "-3/8");
        let whole = BigRational::from_integer(BigInt::from(7));
        assert_eq!(fmt_rational(&whole), "7");
    }
}
