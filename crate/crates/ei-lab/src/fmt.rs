//! Locale-independent numeric formatting for CSV and console output.

/// Format with 9 significant digits, positional where reasonable and
/// scientific otherwise. Deterministic for a fixed build, `.` decimal
/// separator always.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}
