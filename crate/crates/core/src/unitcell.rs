//! Per-state unit-cell frequency responses and the scalar cell metrics
//! (insertion loss, phase difference, fractional bandwidth).
//!
//! Tables are stored on a shared frequency grid and interpolated linearly in
//! rectangular (re, im) form. Nothing is extrapolated outside the grid.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result, TableError};
use crate::primitives::{ComplexCoefficient, Frequency};

pub const CSV_HEADER: &str = "freq_ghz,state,mag_db,phase_deg";

// Relative slack on passivity checks, absorbs dB round-off in files.
const PASSIVITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Reflective,
    Transmissive,
}

impl CellKind {
    pub fn name(self) -> &'static str {
        match self {
            CellKind::Reflective => "reflective",
            CellKind::Transmissive => "transmissive",
        }
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Substrate description carried along with a table. Informational only.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CellMetadata {
    pub eps_r: Option<f64>,
    pub tan_delta: Option<f64>,
    pub thickness_m: Option<f64>,
    pub description: Option<String>,
}

/// Complex reflection or transmission coefficient per state over frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitCellStateTable {
    kind: CellKind,
    active: bool,
    freqs: Vec<f64>,
    samples: BTreeMap<String, Vec<Complex64>>,
    metadata: CellMetadata,
}

impl UnitCellStateTable {
    /// Build and validate a table. `samples` maps state name to one
    /// `(frequency, coefficient)` list per state.
    pub fn new(
        kind: CellKind,
        active: bool,
        samples: BTreeMap<String, Vec<(Frequency, ComplexCoefficient)>>,
        metadata: CellMetadata,
    ) -> Result<Self, TableError> {
        let samples = samples
            .into_iter()
            .map(|(s, rows)| {
                (
                    s,
                    rows.into_iter().map(|(f, c)| (f, c.to_complex())).collect(),
                )
            })
            .collect();
        Self::from_complex_samples(kind, active, samples, metadata)
    }

    /// Same as [`UnitCellStateTable::new`] with rectangular-form samples,
    /// stored bit-for-bit.
    pub fn from_complex_samples(
        kind: CellKind,
        active: bool,
        samples: BTreeMap<String, Vec<(Frequency, Complex64)>>,
        metadata: CellMetadata,
    ) -> Result<Self, TableError> {
        if samples.len() < 2 {
            return Err(TableError::TooFewStates(samples.len()));
        }
        let mut grid: Option<(&str, Vec<f64>)> = None;
        let mut stored = BTreeMap::new();
        for (state, rows) in &samples {
            if rows.is_empty() {
                return Err(TableError::EmptyState(state.clone()));
            }
            for w in rows.windows(2) {
                if w[1].0.hz() <= w[0].0.hz() {
                    return Err(TableError::NonMonotone {
                        state: state.clone(),
                        freq_ghz: w[1].0.ghz(),
                    });
                }
            }
            let freqs: Vec<f64> = rows.iter().map(|(f, _)| f.hz()).collect();
            match &grid {
                None => grid = Some((state, freqs)),
                Some((reference, g)) => {
                    if *g != freqs {
                        return Err(TableError::MismatchedGrids {
                            state: state.clone(),
                            reference: reference.to_string(),
                        });
                    }
                }
            }
            if !active {
                if let Some((f, c)) = rows.iter().find(|(_, c)| c.norm() > 1.0 + PASSIVITY_SLACK) {
                    return Err(TableError::Passivity {
                        state: state.clone(),
                        freq_ghz: f.ghz(),
                        magnitude: c.norm(),
                    });
                }
            }
            stored.insert(state.clone(), rows.iter().map(|(_, c)| *c).collect());
        }
        let (_, freqs) = grid.expect("at least two states checked above");
        Ok(UnitCellStateTable {
            kind,
            active,
            freqs,
            samples: stored,
            metadata,
        })
    }

    /// Parse the state-table CSV format.
    ///
    /// ```text
    /// #kind=transmissive
    /// #active=false
    /// freq_ghz,state,mag_db,phase_deg
    /// 140,000,-0.69,12.5
    /// ```
    ///
    /// Comment lines start with `#`. Recognised `#key=value` comments are
    /// `kind`, `active`, `eps_r`, `tan_delta`, `thickness_mm` and
    /// `description`; any other comment is ignored. `kind` defaults to
    /// reflective.
    pub fn from_csv_str(text: &str) -> Result<Self, TableError> {
        let mut kind = CellKind::Reflective;
        let mut active = false;
        let mut metadata = CellMetadata::default();
        for (i, line) in text.lines().enumerate() {
            let Some(body) = line.trim().strip_prefix('#') else {
                continue;
            };
            let Some((key, value)) = body.split_once('=') else {
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            let schema = |message: String| TableError::Schema {
                line: i + 1,
                message,
            };
            let number = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| schema(format!("`{key}` expects a number, got `{v}`")))
            };
            match key {
                "kind" => {
                    kind = match value.to_ascii_lowercase().as_str() {
                        "reflective" => CellKind::Reflective,
                        "transmissive" => CellKind::Transmissive,
                        other => return Err(schema(format!("unknown kind `{other}`"))),
                    }
                }
                "active" => {
                    active = value.parse().map_err(|_| {
                        schema(format!("`active` expects true/false, got `{value}`"))
                    })?
                }
                "eps_r" => metadata.eps_r = Some(number(value)?),
                "tan_delta" => metadata.tan_delta = Some(number(value)?),
                "thickness_mm" => metadata.thickness_m = Some(number(value)? * 1e-3),
                "description" => metadata.description = Some(value.to_string()),
                _ => {}
            }
        }

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = reader.headers().map_err(|_| TableError::BadHeader)?;
        if header.iter().collect::<Vec<_>>() != ["freq_ghz", "state", "mag_db", "phase_deg"] {
            return Err(TableError::BadHeader);
        }

        #[derive(Deserialize)]
        struct Row {
            freq_ghz: f64,
            state: String,
            mag_db: f64,
            phase_deg: f64,
        }

        let mut samples: BTreeMap<String, Vec<(Frequency, ComplexCoefficient)>> = BTreeMap::new();
        for record in reader.deserialize::<Row>() {
            let record = record.map_err(|e| TableError::Schema {
                line: e.position().map_or(0, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            let f = Frequency::from_ghz(record.freq_ghz).map_err(|e| TableError::Schema {
                line: 0,
                message: e.to_string(),
            })?;
            if record.state.is_empty() {
                return Err(TableError::Schema {
                    line: 0,
                    message: "empty state name".into(),
                });
            }
            let c =
                ComplexCoefficient::from_db_deg(record.mag_db, record.phase_deg).map_err(|e| {
                    TableError::Schema {
                        line: 0,
                        message: e.to_string(),
                    }
                })?;
            samples.entry(record.state).or_default().push((f, c));
        }
        Self::new(kind, active, samples, metadata)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_csv_str(&text)?)
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn is_active(&self) -> bool {
        self.active
    }

    pub fn metadata(&self) -> &CellMetadata {
        &self.metadata
    }

    /// State names in lexicographic order.
    pub fn states(&self) -> impl Iterator<Item = &str> {
        self.samples.keys().map(String::as_str)
    }

    pub fn has_state(&self, state: &str) -> bool {
        self.samples.contains_key(state)
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.freqs
    }

    /// `(f_min, f_max)` in Hz.
    pub fn range(&self) -> (f64, f64) {
        (self.freqs[0], *self.freqs.last().expect("non-empty grid"))
    }

    pub fn contains(&self, f: Frequency) -> bool {
        let (lo, hi) = self.range();
        (lo..=hi).contains(&f.hz())
    }

    /// Linearly interpolated complex coefficient (rectangular form).
    pub fn complex_at(&self, state: &str, f: Frequency) -> Result<Complex64> {
        let values = self
            .samples
            .get(state)
            .ok_or_else(|| Error::UnknownState(state.to_string()))?;
        let (lo, hi) = self.range();
        let hz = f.hz();
        if !(lo..=hi).contains(&hz) {
            return Err(Error::OutOfRange {
                freq_ghz: f.ghz(),
                lo_ghz: lo / 1e9,
                hi_ghz: hi / 1e9,
            });
        }
        // first index with freq > hz; hz >= lo so idx >= 1
        let idx = self.freqs.partition_point(|&g| g <= hz);
        let i = idx - 1;
        if self.freqs[i] == hz || i + 1 == self.freqs.len() {
            return Ok(values[i]);
        }
        let t = (hz - self.freqs[i]) / (self.freqs[i + 1] - self.freqs[i]);
        Ok(values[i] + (values[i + 1] - values[i]) * t)
    }

    pub fn coefficient_at(&self, state: &str, f: Frequency) -> Result<ComplexCoefficient> {
        self.complex_at(state, f)
            .map(ComplexCoefficient::from_complex)
    }

    /// −20·log10|coefficient| of a state, in dB.
    pub fn insertion_loss_db(&self, state: &str, f: Frequency) -> Result<f64> {
        Ok(-20.0 * self.complex_at(state, f)?.norm().log10())
    }

    /// Wrapped phase of `state_a` relative to `state_b`, degrees in (−180, 180].
    pub fn phase_difference(&self, state_a: &str, state_b: &str, f: Frequency) -> Result<f64> {
        let a = self.coefficient_at(state_a, f)?;
        let b = self.coefficient_at(state_b, f)?;
        Ok(crate::primitives::wrap_phase(a.phase() - b.phase()).to_degrees())
    }

    /// Width of the contiguous band around `f_center` where the state's
    /// insertion loss stays below `threshold_db`, as a percentage of
    /// `f_center`. Returns 0 when the centre itself fails the threshold.
    /// Band edges are located by bisection on the interpolated response and
    /// clipped to the table range.
    pub fn fractional_bandwidth(
        &self,
        state: &str,
        threshold_db: f64,
        f_center: Frequency,
    ) -> Result<f64> {
        let loss = |hz: f64| -> f64 {
            let f = Frequency::new(hz).expect("grid frequencies are positive");
            self.insertion_loss_db(state, f)
                .expect("frequency inside range")
        };
        let fc = f_center.hz();
        if self.insertion_loss_db(state, f_center)? >= threshold_db {
            return Ok(0.0);
        }
        let passes = |hz: f64| loss(hz) < threshold_db;
        let refine = |mut good: f64, mut bad: f64| {
            for _ in 0..200 {
                let mid = 0.5 * (good + bad);
                if mid == good || mid == bad {
                    break;
                }
                if passes(mid) {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            0.5 * (good + bad)
        };

        let (lo, hi) = self.range();
        let mut f_hi = hi;
        let mut prev = fc;
        for &g in self.freqs.iter().filter(|&&g| g > fc) {
            if !passes(g) {
                f_hi = refine(prev, g);
                break;
            }
            prev = g;
        }
        let mut f_lo = lo;
        let mut prev = fc;
        for &g in self.freqs.iter().rev().filter(|&&g| g < fc) {
            if !passes(g) {
                f_lo = refine(prev, g);
                break;
            }
            prev = g;
        }
        Ok(100.0 * (f_hi - f_lo) / fc)
    }
}

/// Lossy-but-ideal 1-bit cell: exactly 0° and 180°, frequency-flat.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealOneBitCell {
    pub kind: CellKind,
    /// Loss of the 0° ("000") and 180° ("180") states, dB ≥ 0.
    pub loss_db: [f64; 2],
}

impl IdealOneBitCell {
    pub const STATE_0: &'static str = "000";
    pub const STATE_180: &'static str = "180";

    pub fn lossless(kind: CellKind) -> Self {
        IdealOneBitCell {
            kind,
            loss_db: [0.0, 0.0],
        }
    }

    /// Flat table over 1 GHz – 10 THz. The 180° state is stored as −1 so
    /// that both states are exactly real.
    pub fn to_table(&self) -> Result<UnitCellStateTable> {
        if self.loss_db.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return Err(Error::domain("ideal cell loss must be ≥ 0 dB"));
        }
        let edges = [Frequency::from_ghz(1.0)?, Frequency::from_ghz(10_000.0)?];
        let mut samples = BTreeMap::new();
        for (name, loss, sign) in [
            (Self::STATE_0, self.loss_db[0], 1.0),
            (Self::STATE_180, self.loss_db[1], -1.0),
        ] {
            let c = Complex64::new(sign * 10f64.powf(-loss / 20.0), 0.0);
            samples.insert(name.to_string(), edges.iter().map(|&f| (f, c)).collect());
        }
        Ok(UnitCellStateTable::from_complex_samples(
            self.kind,
            false,
            samples,
            CellMetadata {
                description: Some("ideal 1-bit cell".into()),
                ..Default::default()
            },
        )?)
    }
}
