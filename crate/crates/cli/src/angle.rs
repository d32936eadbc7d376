//! Angle arguments: plain radians (`0.785`) or multiples of π (`0.25pi`, `pi`,
//! `-pi`).

use std::f64::consts::PI;

pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim().to_ascii_lowercase();
    let value = match t.strip_suffix("pi") {
        Some(coeff) => {
            let coeff = coeff.trim().trim_end_matches('*');
            let c = match coeff {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| format!("invalid angle {text:?}"))?,
            };
            c * PI
        }
        None => t.parse::<f64>().map_err(|_| format!("invalid angle {text:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("angle {text:?} is not finite"))
    }
}

/// Comma-separated angles; blank items are skipped.
pub fn parse_angle_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(parse_angle).collect()
}
