//! Deterministic text outputs: pattern CSV, state-map CSV, metrics JSON.
//!
//! Floats are written with 9 significant digits, rounded first and then
//! printed in their shortest round-trip form, so identical inputs always give
//! identical bytes.

use std::collections::HashMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::farfield::{FarFieldPattern, PatternMetrics};
use crate::primitives::ArrayLayout;
use crate::synthesis::StateMap;

pub const PATTERN_HEADER: &str = "theta_deg,phi_deg,value_db,re,im";
pub const STATEMAP_HEADER: &str = "ix,iy,state,ideal_phase_deg,residual_deg";

/// Round to 9 significant digits. Zero (of either sign) becomes +0.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn fmt9(x: f64) -> String {
    format!("{}", sig9(x))
}

/// Hex SHA-256 of the scenario bytes.
pub fn scenario_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn pattern_csv(pattern: &FarFieldPattern, scenario_hash: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# normalization={}\n",
        pattern.normalization.name()
    ));
    out.push_str(&format!("# freq_ghz={}\n", fmt9(pattern.frequency.ghz())));
    out.push_str(&format!("# scenario_hash={scenario_hash}\n"));
    out.push_str(PATTERN_HEADER);
    out.push('\n');
    for (i, z) in pattern.field.iter().enumerate() {
        let (theta, phi) = pattern.angles(i);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt9(theta.to_degrees()),
            fmt9(phi.to_degrees()),
            fmt9(pattern.value_db(i)),
            fmt9(z.re),
            fmt9(z.im)
        ));
    }
    out
}

pub fn statemap_csv(map: &StateMap) -> String {
    let layout = map.layout();
    let mut out = String::from(STATEMAP_HEADER);
    out.push('\n');
    for i in 0..layout.len() {
        let (ix, iy) = layout.coords(i);
        out.push_str(&format!(
            "{ix},{iy},{},{},{}\n",
            map.state(i),
            fmt9(map.ideal_phases()[i].to_degrees()),
            fmt9(map.residuals()[i].to_degrees())
        ));
    }
    out
}

/// Parse a state-map CSV back onto `layout`. Every element must appear
/// exactly once; row order is free.
pub fn read_statemap_csv(text: &str, layout: &ArrayLayout) -> Result<StateMap> {
    #[derive(serde::Deserialize)]
    struct Row {
        ix: usize,
        iy: usize,
        state: String,
        ideal_phase_deg: f64,
        residual_deg: f64,
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::domain(format!("state map: {e}")))?;
    if header.iter().collect::<Vec<_>>().join(",") != STATEMAP_HEADER {
        return Err(Error::domain(format!(
            "state map: header must be `{STATEMAP_HEADER}`"
        )));
    }
    let n = layout.len();
    let mut states: Vec<Option<String>> = vec![None; n];
    let mut ideal = vec![0.0; n];
    let mut residual = vec![0.0; n];
    let mut seen = HashMap::new();
    for row in reader.deserialize::<Row>() {
        let row = row.map_err(|e| Error::domain(format!("state map: {e}")))?;
        if row.ix >= layout.nx() || row.iy >= layout.ny() {
            return Err(Error::domain(format!(
                "state map: element ({}, {}) outside {}×{} layout",
                row.ix,
                row.iy,
                layout.nx(),
                layout.ny()
            )));
        }
        let i = layout.index(row.ix, row.iy);
        if seen.insert(i, ()).is_some() {
            return Err(Error::domain(format!(
                "state map: duplicate element ({}, {})",
                row.ix, row.iy
            )));
        }
        states[i] = Some(row.state);
        ideal[i] = row.ideal_phase_deg.to_radians();
        residual[i] = row.residual_deg.to_radians();
    }
    let states = states
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| {
                let (ix, iy) = layout.coords(i);
                Error::domain(format!("state map: element ({ix}, {iy}) missing"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    StateMap::from_parts(layout.clone(), states, ideal, residual)
}

/// Metrics as written to JSON, rounded to 9 significant digits.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MetricsRecord {
    pub peak_deg: f64,
    pub peak_db: f64,
    pub sll_db: Option<f64>,
    pub hpbw_deg: Option<f64>,
    pub pointing_error_deg: f64,
}

impl From<&PatternMetrics> for MetricsRecord {
    fn from(m: &PatternMetrics) -> Self {
        MetricsRecord {
            peak_deg: sig9(m.peak_deg),
            peak_db: sig9(m.peak_db),
            sll_db: m.sll_db.map(sig9),
            hpbw_deg: m.hpbw_deg.map(sig9),
            pointing_error_deg: sig9(m.pointing_error_deg),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farfield::{scattered_pattern_from_coefficients, ElementModel, PatternGrid};
    use crate::primitives::{Direction, Frequency};
    use num_complex::Complex64;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt9(1.0), "1");
        assert_eq!(fmt9(-90.0), "-90");
        assert_eq!(fmt9(-0.0), "0");
        assert_eq!(fmt9(std::f64::consts::PI), "3.14159265");
        assert_eq!(fmt9(1.234_567_891_23e-5), "0.0000123456789");
        assert_eq!(fmt9(29.977_2e0), "29.9772");
    }

    #[test]
    fn statemap_csv_round_trip() {
        let layout = ArrayLayout::grid(3, 2, 1e-3).unwrap();
        let states: Vec<String> = ["000", "180", "000", "180", "180", "000"]
            .map(String::from)
            .to_vec();
        let map =
            StateMap::from_parts(layout.clone(), states, vec![0.1; 6], vec![-0.2; 6]).unwrap();
        let text = statemap_csv(&map);
        let back = read_statemap_csv(&text, &layout).unwrap();
        assert_eq!(back.states(), map.states());
        assert_eq!(statemap_csv(&back), text);
    }

    #[test]
    fn statemap_csv_rejects_gaps() {
        let layout = ArrayLayout::grid(2, 1, 1e-3).unwrap();
        let text = format!("{STATEMAP_HEADER}\n0,0,000,0,0\n");
        assert!(read_statemap_csv(&text, &layout).is_err());
        let text = format!("{STATEMAP_HEADER}\n0,0,000,0,0\n0,0,000,0,0\n");
        assert!(read_statemap_csv(&text, &layout).is_err());
        let text = format!("{STATEMAP_HEADER}\n0,0,000,0,0\n5,0,000,0,0\n");
        assert!(read_statemap_csv(&text, &layout).is_err());
    }

    #[test]
    fn pattern_csv_layout() {
        let l = ArrayLayout::grid(2, 1, 1e-3).unwrap();
        let grid = PatternGrid::cut_deg(0.0, 45.0).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); 2];
        let p = scattered_pattern_from_coefficients(
            &l,
            &ones,
            Frequency::from_ghz(140.0).unwrap(),
            Direction::broadside(),
            &ElementModel::default(),
            &grid,
        );
        let text = pattern_csv(&p, "abc");
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# normalization=PeakZeroDb");
        assert_eq!(lines[1], "# freq_ghz=140");
        assert_eq!(lines[2], "# scenario_hash=abc");
        assert_eq!(lines[3], PATTERN_HEADER);
        assert_eq!(lines.len(), 4 + 5);
        assert!(lines[6].starts_with("0,0,0,1,0"));
    }

    #[test]
    fn hash_is_sha256_hex() {
        assert_eq!(
            scenario_hash(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
