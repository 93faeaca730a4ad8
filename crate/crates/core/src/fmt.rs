//! Fixed-precision float formatting for report files.
//!
//! Report outputs must be byte-identical across runs and platforms, so all
//! floats are printed through [`fmt_sig`] (12 significant digits, `.` decimal
//! separator, no locale) rather than `Display`.

/// Number of significant digits used in CSV/JSON report files.
pub const REPORT_SIG_DIGITS: usize = 12;

/// Format `x` with `sig` significant digits, trimming trailing zeros.
///
/// Behaves like C's `%.{sig}g`: fixed notation while the exponent fits,
/// scientific (`1.5e-7`) otherwise.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    if x < 0.0 {
        return format!("-{}", fmt_sig(-x, sig));
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    debug_assert_eq!(digits.len(), sig);

    if exp >= -4 && exp < sig as i32 {
        if exp >= 0 {
            let split = exp as usize + 1;
            let int_part = &digits[..split];
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let frac = digits.trim_end_matches('0');
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), frac)
        }
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    }
}

/// [`fmt_sig`] at the report precision.
pub fn fmt_report(x: f64) -> String {
    fmt_sig(x, REPORT_SIG_DIGITS)
}
