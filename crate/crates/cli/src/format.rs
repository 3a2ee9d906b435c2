//! Number formatting shared by the CSV and JSON writers.

/// Rounds to 12 significant digits and maps `-0` to `0`.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest decimal that round-trips the 12-digit rounding of `x`.
pub fn num(x: f64) -> String {
    let r = round12(x);
    if r.is_nan() {
        "nan".into()
    } else if r.is_infinite() {
        if r > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{r}")
    }
}

pub fn json_num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(round12(x))
        .map_or(serde_json::Value::Null, serde_json::Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(0.45), "0.45");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(-1e-20 * 0.0), "0");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(123456.7890123456), "123456.789012");
    }

    #[test]
    fn json_numbers() {
        assert_eq!(json_num(0.375).to_string(), "0.375");
        assert_eq!(json_num(-0.0).to_string(), "0.0");
        assert_eq!(json_num(f64::NAN), serde_json::Value::Null);
    }
}
