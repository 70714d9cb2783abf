//! Deterministic number formatting for CSV rows and tables.

/// Shortest decimal that round-trips to `v` (never more than 17 significant
/// digits). Plain notation for exponents in `[-5, 16]`, scientific outside.
pub fn number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..=16).contains(&exp) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}
