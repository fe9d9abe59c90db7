//! Parsing of CLI quantities with optional units and SI prefixes, e.g.
//! `150GHz`, `4mm`, `18.5f`, `30deg`. A bare number takes the quantity's
//! default I/O unit (GHz, mm, degrees, ohms, farads).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Frequency,
    Length,
    Angle,
    Resistance,
    Capacitance,
}

impl Quantity {
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Quantity::Frequency => &[("Hz", 1.0), ("hz", 1.0)],
            Quantity::Length => &[("m", 1.0)],
            Quantity::Angle => &[
                ("deg", 1.0),
                ("°", 1.0),
                ("rad", 180.0 / std::f64::consts::PI),
            ],
            Quantity::Resistance => &[("ohms", 1.0), ("ohm", 1.0), ("Ω", 1.0)],
            Quantity::Capacitance => &[("F", 1.0)],
        }
    }

    /// Multiplier applied to a bare number.
    fn default_scale(self) -> f64 {
        match self {
            Quantity::Frequency => 1e9,
            Quantity::Length => 1e-3,
            Quantity::Angle | Quantity::Resistance | Quantity::Capacitance => 1.0,
        }
    }

    fn allows_prefix(self) -> bool {
        self != Quantity::Angle
    }
}

fn prefix_scale(p: &str) -> Option<f64> {
    Some(match p {
        "" => 1.0,
        "T" => 1e12,
        "G" => 1e9,
        "M" => 1e6,
        "k" => 1e3,
        "m" => 1e-3,
        "u" | "µ" => 1e-6,
        "n" => 1e-9,
        "p" => 1e-12,
        "f" => 1e-15,
        _ => return None,
    })
}

/// Parse `text` into SI units (Hz, m, Ω, F) or degrees for angles.
pub fn parse_quantity(text: &str, kind: Quantity) -> Result<f64> {
    let text = text.trim();
    let split = text
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(text.len()))
        .rev()
        .find(|&i| i > 0 && text[..i].parse::<f64>().is_ok())
        .ok_or_else(|| Error::domain(format!("`{text}` does not start with a number")))?;
    let value: f64 = text[..split].parse().expect("checked above");
    let suffix = text[split..].trim();
    if suffix.is_empty() {
        return Ok(value * kind.default_scale());
    }
    let bad = || Error::domain(format!("unrecognised unit `{suffix}` in `{text}`"));
    let (prefix, unit_scale) = kind
        .units()
        .iter()
        .find_map(|(u, s)| suffix.strip_suffix(u).map(|p| (p, *s)))
        .unwrap_or((suffix, 1.0));
    if !kind.allows_prefix() && !prefix.is_empty() {
        return Err(bad());
    }
    let p = prefix_scale(prefix).ok_or_else(bad)?;
    Ok(value * p * unit_scale)
}

pub fn frequency_hz(s: &str) -> Result<f64, String> {
    parse_quantity(s, Quantity::Frequency).map_err(|e| e.to_string())
}

pub fn length_m(s: &str) -> Result<f64, String> {
    parse_quantity(s, Quantity::Length).map_err(|e| e.to_string())
}

pub fn angle_deg(s: &str) -> Result<f64, String> {
    parse_quantity(s, Quantity::Angle).map_err(|e| e.to_string())
}

pub fn ohms(s: &str) -> Result<f64, String> {
    parse_quantity(s, Quantity::Resistance).map_err(|e| e.to_string())
}

pub fn farads(s: &str) -> Result<f64, String> {
    parse_quantity(s, Quantity::Capacitance).map_err(|e| e.to_string())
}
