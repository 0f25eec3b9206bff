//! Locale-free numeric text: decimal, `.` separator, at most 9 significant digits.

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Formats `x` with [`SIGNIFICANT_DIGITS`] significant digits, trailing zeros
/// removed. Positional notation is used for decimal exponents in [-5, 15),
/// scientific (`1.5e-7`) otherwise.
pub fn number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..15).contains(&exponent) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exponent)
    }
}

/// `x` rounded to the same digits [`number`] prints.
pub fn rounded(x: f64) -> f64 {
    if x.is_finite() {
        number(x).parse().expect("formatted number parses")
    } else {
        x
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// JSON number rounded to the text precision; non-finite values become null.
pub fn json_number(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(rounded(x))
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}
