//! Deterministic JSON/CSV rendering.
//!
//! Every number in a report is rounded to 12 significant digits before
//! serialization, so identical inputs produce byte-identical output
//! regardless of how the value was computed.

use serde::Serialize;
use serde_json::Value;

/// Significant digits kept in emitted reports.
pub const REPORT_SIG_DIGITS: i32 = 12;

/// Values below this magnitude are pure rounding noise at report scale.
const SNAP_TO_ZERO: f64 = 1e-12;

/// Rounds to 12 significant digits, snapping sub-noise values to zero.
pub fn round_report_value(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 || x.abs() < SNAP_TO_ZERO {
        return if x.is_finite() { 0.0 } else { x };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(REPORT_SIG_DIGITS - 1 - magnitude);
    (x * scale).round() / scale
}

fn round_tree(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(round_report_value(f)) {
                        *value = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_tree),
        Value::Object(map) => map.values_mut().for_each(round_tree),
        _ => {}
    }
}

/// Serializes with stable field order and rounded numbers; trailing
/// newline included.
pub fn to_stable_json<T: Serialize>(value: &T) -> String {
    let mut tree = serde_json::to_value(value).expect("report serialization cannot fail");
    round_tree(&mut tree);
    let mut out = serde_json::to_string_pretty(&tree).expect("json rendering cannot fail");
    out.push('\n');
    out
}

/// One CSV cell with the same numeric formatting as the JSON reports.
pub fn format_number(x: f64) -> String {
    serde_json::to_string(&round_report_value(x)).expect("finite number renders")
}
