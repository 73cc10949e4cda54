//! Round-trippable number formatting shared by every CSV writer.

/// Formats `v` with 17 significant digits in scientific notation, which
/// parses back to the identical `f64`.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}
