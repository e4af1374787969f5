//! Deterministic text emission helpers shared by the report serializers.
//!
//! All numeric output uses Rust's shortest round-trip `Display` for `f64`,
//! so identical inputs produce byte-identical CSV/JSON on every platform.

/// Shortest round-trip decimal; non-finite values become JSON `null`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "null".to_string()
    }
}

pub fn fmt_opt_f64(v: Option<f64>) -> String {
    match v {
        Some(x) => fmt_f64(x),
        None => "null".to_string(),
    }
}

pub fn fmt_opt_bool(v: Option<bool>) -> String {
    match v {
        Some(true) => "true".to_string(),
        Some(false) => "false".to_string(),
        None => "null".to_string(),
    }
}

/// Values within 1e−9 of an integer print as that integer (when exactly
/// representable); everything else prints shortest round-trip.
pub fn fmt_integerish(v: f64) -> String {
    let r = v.round();
    if (v - r).abs() <= 1e-9 && r.abs() < 9.0e15 {
        format!("{}", r as i64)
    } else {
        fmt_f64(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_shortest_round_trip() {
        assert_eq!(fmt_f64(2.5), "2.5");
        assert_eq!(fmt_f64(3.0), "3");
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(f64::NAN), "null");
    }

    #[test]
    fn integerish_formatting() {
        assert_eq!(fmt_integerish(349525.0), "349525");
        assert_eq!(fmt_integerish(349525.0 + 5e-10), "349525");
        assert_eq!(fmt_integerish(2.875), "2.875");
        assert_eq!(fmt_integerish(-2.0), "-2");
    }
}
