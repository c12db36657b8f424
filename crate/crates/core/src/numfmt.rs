//! Shared float-to-text rule for machine-readable output.
//!
//! Everything printed to JSON or CSV goes through `float17`: 17 significant
//! digits in scientific notation, enough for an exact f64 round trip and
//! byte-identical re-runs.

pub fn float17(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    format!("{x:.16e}")
}
