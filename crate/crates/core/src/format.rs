//! Deterministic number formatting for exported tables.

/// Rounds to `sig` significant digits, then prints the shortest decimal that
/// round-trips to the rounded value.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{:.*e}", sig.max(1) - 1, x).parse().expect("valid float");
    format!("{rounded}")
}
