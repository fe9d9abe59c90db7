//! Scenario files: a versioned TOML description of one synthesis run, its
//! validation into typed module inputs, and the end-to-end pipeline.
//!
//! ```toml
//! schema_version = 1
//! mode = "reflect-steer"        # or "transmit-collimate", "grating"
//! freq_ghz = 140.0
//!
//! [array]
//! nx = 20
//! ny = 20
//! pitch_mm = 1.0                # or pitch_wavelengths = 0.5
//!
//! [cell]
//! ideal = { kind = "reflective", loss_db = [0.0, 0.0] }
//! # table = "fixtures/pcm.csv"  # path relative to this file
//!
//! [target]
//! theta_deg = 30.0
//! phi_deg = 0.0
//!
//! [incidence]                   # reflect-steer only, default normal
//! theta_deg = 0.0
//!
//! [feed]                        # transmit-collimate only, all optional
//! f_over_d = 0.7
//! edge_taper_db = -10.0
//! # q_f = 4.6                   # overrides edge_taper_db
//! offset_mm = [0.0, 0.0]
//!
//! [grating]                     # grating only
//! channel_spacing_mm = 2.0
//! fill_pattern = [1, 0]
//! aperture_mm = 24.0
//! incidence_deg = 0.0
//!
//! [element]
//! q_e = 0.5
//!
//! [output]
//! prefix = "run"                # default: scenario file stem
//! cut_phi_deg = 0.0
//! grid_deg = 0.1
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::Result;
use crate::farfield::{
    self, aperture_gain_limit, illumination, pattern_metrics, ElementModel, FarFieldPattern,
    PatternGrid, PatternMetrics,
};
use crate::grating::{self, FloquetMode, GratingConfig};
use crate::io::{self, sig9, MetricsRecord};
use crate::primitives::{ArrayLayout, Direction, Frequency};
use crate::synthesis::{self, FeedSpec, StateMap};
use crate::unitcell::{CellKind, IdealOneBitCell, UnitCellStateTable};

pub const SCHEMA_VERSION: u32 = 1;

/// Validation failure, pointing at a field and, when known, its line.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "`{}` (line {line}): {}", self.field, self.message),
            None => write!(f, "`{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ValidationError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ReflectSteer,
    TransmitCollimate,
    Grating,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::ReflectSteer => "reflect-steer",
            Mode::TransmitCollimate => "transmit-collimate",
            Mode::Grating => "grating",
        }
    }
}

type S<T> = Spanned<T>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema_version: S<u32>,
    mode: S<Mode>,
    freq_ghz: S<f64>,
    array: Option<S<RawArray>>,
    cell: Option<S<RawCell>>,
    target: Option<S<RawAngles>>,
    incidence: Option<S<RawAngles>>,
    feed: Option<S<RawFeed>>,
    grating: Option<S<RawGrating>>,
    element: Option<S<RawElement>>,
    output: Option<S<RawOutput>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArray {
    nx: S<i64>,
    ny: S<i64>,
    pitch_mm: Option<S<f64>>,
    pitch_wavelengths: Option<S<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCell {
    table: Option<S<String>>,
    ideal: Option<S<RawIdeal>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdeal {
    kind: S<String>,
    #[serde(default)]
    loss_db: Option<S<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAngles {
    theta_deg: S<f64>,
    #[serde(default)]
    phi_deg: Option<S<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFeed {
    f_over_d: Option<S<f64>>,
    edge_taper_db: Option<S<f64>>,
    q_f: Option<S<f64>>,
    offset_mm: Option<S<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrating {
    channel_spacing_mm: S<f64>,
    fill_pattern: Option<S<Vec<u8>>>,
    aperture_mm: S<f64>,
    incidence_deg: Option<S<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElement {
    q_e: S<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    prefix: Option<S<String>>,
    cut_phi_deg: Option<S<f64>>,
    grid_deg: Option<S<f64>>,
}

/// Where and how outputs are sampled and named.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub prefix: String,
    pub cut_phi_deg: f64,
    pub grid_deg: f64,
}

#[derive(Debug, Clone)]
pub enum ScenarioKind {
    ReflectSteer {
        layout: ArrayLayout,
        table: UnitCellStateTable,
        target: Direction,
        incidence: Direction,
    },
    TransmitCollimate {
        layout: ArrayLayout,
        table: UnitCellStateTable,
        target: Direction,
        feed: FeedSpec,
    },
    Grating {
        config: GratingConfig,
        aperture: f64,
    },
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub mode: Mode,
    pub frequency: Frequency,
    pub kind: ScenarioKind,
    pub element: ElementModel,
    pub output: OutputSpec,
    /// SHA-256 of the scenario file bytes.
    pub hash: String,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line(&self, span: std::ops::Range<usize>) -> usize {
        self.text[..span.start.min(self.text.len())]
            .matches('\n')
            .count()
            + 1
    }

    fn err<T>(&self, field: &str, value: &S<T>, message: impl Into<String>) -> ValidationError {
        ValidationError {
            field: field.to_string(),
            line: Some(self.line(value.span())),
            message: message.into(),
        }
    }

    fn missing(&self, field: &str, within: Option<std::ops::Range<usize>>) -> ValidationError {
        ValidationError {
            field: field.to_string(),
            line: within.map(|s| self.line(s)),
            message: "required for this mode".into(),
        }
    }
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> std::result::Result<Self, ValidationError> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| ValidationError {
            field: "<file>".into(),
            line: None,
            message: format!("{}: {e}", path.display()),
        })?;
        let text = String::from_utf8(bytes).map_err(|_| ValidationError {
            field: "<file>".into(),
            line: None,
            message: "scenario is not valid UTF-8".into(),
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".into());
        Self::parse(&text, &base, &stem)
    }

    /// Parse scenario text. Relative table paths resolve against `base_dir`;
    /// `default_prefix` names outputs unless `[output] prefix` is given.
    pub fn parse(
        text: &str,
        base_dir: &Path,
        default_prefix: &str,
    ) -> std::result::Result<Self, ValidationError> {
        let ctx = Ctx { text };
        let raw: RawScenario = toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let field = message
                .split('`')
                .nth(1)
                .filter(|_| message.contains("field"))
                .unwrap_or("<document>")
                .to_string();
            ValidationError {
                field,
                line: e.span().map(|s| ctx.line(s)),
                message,
            }
        })?;

        if *raw.schema_version.get_ref() != SCHEMA_VERSION {
            return Err(ctx.err(
                "schema_version",
                &raw.schema_version,
                format!("unsupported schema version, expected {SCHEMA_VERSION}"),
            ));
        }
        let frequency = Frequency::from_ghz(*raw.freq_ghz.get_ref())
            .map_err(|e| ctx.err("freq_ghz", &raw.freq_ghz, e.to_string()))?;
        let mode = *raw.mode.get_ref();

        let element = match &raw.element {
            None => ElementModel::default(),
            Some(el) => {
                let el = el.get_ref();
                ElementModel::new(*el.q_e.get_ref())
                    .map_err(|e| ctx.err("element.q_e", &el.q_e, e.to_string()))?
            }
        };

        let output = match &raw.output {
            None => OutputSpec {
                prefix: default_prefix.to_string(),
                cut_phi_deg: 0.0,
                grid_deg: farfield::DEFAULT_GRID_DEG,
            },
            Some(o) => {
                let o = o.get_ref();
                let grid_deg = o
                    .grid_deg
                    .as_ref()
                    .map_or(farfield::DEFAULT_GRID_DEG, |g| *g.get_ref());
                if let Some(g) = &o.grid_deg {
                    if !(grid_deg > 0.0 && grid_deg <= 90.0) {
                        return Err(ctx.err("output.grid_deg", g, "must lie in (0, 90]"));
                    }
                }
                let prefix = match &o.prefix {
                    Some(p) if p.get_ref().is_empty() || p.get_ref().contains(['/', '\\']) => {
                        return Err(ctx.err("output.prefix", p, "must be a plain file name"));
                    }
                    Some(p) => p.get_ref().clone(),
                    None => default_prefix.to_string(),
                };
                OutputSpec {
                    prefix,
                    cut_phi_deg: o.cut_phi_deg.as_ref().map_or(0.0, |p| *p.get_ref()),
                    grid_deg,
                }
            }
        };

        let kind = match mode {
            Mode::ReflectSteer | Mode::TransmitCollimate => {
                let layout = Self::layout(&ctx, &raw, frequency)?;
                let table = Self::table(&ctx, &raw, base_dir, mode, frequency)?;
                let target = match &raw.target {
                    Some(t) => Self::direction(&ctx, "target", t)?,
                    None => return Err(ctx.missing("target", None)),
                };
                if mode == Mode::ReflectSteer {
                    let incidence = match &raw.incidence {
                        Some(i) => Self::direction(&ctx, "incidence", i)?,
                        None => Direction::broadside(),
                    };
                    ScenarioKind::ReflectSteer {
                        layout,
                        table,
                        target,
                        incidence,
                    }
                } else {
                    let feed = Self::feed(&ctx, &raw, &layout)?;
                    ScenarioKind::TransmitCollimate {
                        layout,
                        table,
                        target,
                        feed,
                    }
                }
            }
            Mode::Grating => {
                let Some(g) = &raw.grating else {
                    return Err(ctx.missing("grating", None));
                };
                let span = g.span();
                let g = g.get_ref();
                let fill: Vec<bool> = match &g.fill_pattern {
                    None => vec![true],
                    Some(p) => {
                        if p.get_ref().is_empty() || p.get_ref().iter().any(|&b| b > 1) {
                            return Err(ctx.err(
                                "grating.fill_pattern",
                                p,
                                "expects a non-empty list of 0/1",
                            ));
                        }
                        p.get_ref().iter().map(|&b| b == 1).collect()
                    }
                };
                let incidence = g
                    .incidence_deg
                    .as_ref()
                    .map_or(0.0, |i| *i.get_ref())
                    .to_radians();
                let config = GratingConfig::new(
                    *g.channel_spacing_mm.get_ref() * 1e-3,
                    fill,
                    incidence,
                    frequency,
                )
                .map_err(|e| ValidationError {
                    field: "grating".into(),
                    line: Some(ctx.line(span.clone())),
                    message: e.to_string(),
                })?;
                let aperture = *g.aperture_mm.get_ref() * 1e-3;
                if !(aperture >= config.period()) {
                    return Err(ctx.err(
                        "grating.aperture_mm",
                        &g.aperture_mm,
                        "narrower than one grating period",
                    ));
                }
                ScenarioKind::Grating { config, aperture }
            }
        };

        Ok(Scenario {
            mode,
            frequency,
            kind,
            element,
            output,
            hash: io::scenario_hash(text.as_bytes()),
        })
    }

    fn layout(
        ctx: &Ctx,
        raw: &RawScenario,
        f: Frequency,
    ) -> std::result::Result<ArrayLayout, ValidationError> {
        let Some(array) = &raw.array else {
            return Err(ctx.missing("array", None));
        };
        let span = array.span();
        let a = array.get_ref();
        let count = |name: &str, v: &S<i64>| -> std::result::Result<usize, ValidationError> {
            usize::try_from(*v.get_ref())
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| ctx.err(name, v, "must be at least 1"))
        };
        let nx = count("array.nx", &a.nx)?;
        let ny = count("array.ny", &a.ny)?;
        let pitch = match (&a.pitch_mm, &a.pitch_wavelengths) {
            (Some(p), None) => {
                let v = *p.get_ref() * 1e-3;
                if !(v > 0.0) {
                    return Err(ctx.err("array.pitch_mm", p, "must be positive"));
                }
                v
            }
            (None, Some(p)) => {
                let v = *p.get_ref() * f.wavelength();
                if !(v > 0.0) {
                    return Err(ctx.err("array.pitch_wavelengths", p, "must be positive"));
                }
                v
            }
            _ => {
                return Err(ValidationError {
                    field: "array.pitch_mm".into(),
                    line: Some(ctx.line(span)),
                    message: "give exactly one of pitch_mm or pitch_wavelengths".into(),
                })
            }
        };
        Ok(ArrayLayout::grid(nx, ny, pitch).expect("validated above"))
    }

    fn table(
        ctx: &Ctx,
        raw: &RawScenario,
        base: &Path,
        mode: Mode,
        f: Frequency,
    ) -> std::result::Result<UnitCellStateTable, ValidationError> {
        let Some(cell) = &raw.cell else {
            return Err(ctx.missing("cell", None));
        };
        let span = cell.span();
        let c = cell.get_ref();
        let expected = if mode == Mode::TransmitCollimate {
            CellKind::Transmissive
        } else {
            CellKind::Reflective
        };
        let (table, field, line) = match (&c.table, &c.ideal) {
            (Some(path), None) => {
                let full: PathBuf = base.join(path.get_ref());
                if !full.is_file() {
                    return Err(ctx.err(
                        "cell.table",
                        path,
                        format!("file not found: {}", full.display()),
                    ));
                }
                let table = UnitCellStateTable::load(&full)
                    .map_err(|e| ctx.err("cell.table", path, e.to_string()))?;
                (table, "cell.table", ctx.line(path.span()))
            }
            (None, Some(ideal)) => {
                let i = ideal.get_ref();
                let kind = match i.kind.get_ref().as_str() {
                    "reflective" => CellKind::Reflective,
                    "transmissive" => CellKind::Transmissive,
                    other => {
                        return Err(ctx.err(
                            "cell.ideal.kind",
                            &i.kind,
                            format!("unknown kind `{other}`"),
                        ))
                    }
                };
                let loss_db = i.loss_db.as_ref().map_or([0.0, 0.0], |l| *l.get_ref());
                let table = IdealOneBitCell { kind, loss_db }
                    .to_table()
                    .map_err(|e| ctx.err("cell.ideal", ideal, e.to_string()))?;
                (table, "cell.ideal", ctx.line(ideal.span()))
            }
            _ => {
                return Err(ValidationError {
                    field: "cell".into(),
                    line: Some(ctx.line(span)),
                    message: "give exactly one of `table` or `ideal`".into(),
                })
            }
        };
        let fail = |message: String| ValidationError {
            field: field.into(),
            line: Some(line),
            message,
        };
        if table.kind() != expected {
            return Err(fail(format!(
                "{} mode needs a {expected} cell, got {}",
                mode.name(),
                table.kind()
            )));
        }
        if !table.contains(f) {
            let (lo, hi) = table.range();
            return Err(fail(format!(
                "frequency {} GHz outside table range [{}, {}] GHz",
                f.ghz(),
                lo / 1e9,
                hi / 1e9
            )));
        }
        Ok(table)
    }

    fn direction(
        ctx: &Ctx,
        name: &str,
        a: &S<RawAngles>,
    ) -> std::result::Result<Direction, ValidationError> {
        let angles = a.get_ref();
        let theta = *angles.theta_deg.get_ref();
        let phi = angles.phi_deg.as_ref().map_or(0.0, |p| *p.get_ref());
        if !(0.0..90.0).contains(&theta) {
            return Err(ctx.err(
                &format!("{name}.theta_deg"),
                &angles.theta_deg,
                "must lie in [0, 90)",
            ));
        }
        Direction::from_degrees(theta, phi).map_err(|e| {
            ctx.err(
                &format!("{name}.theta_deg"),
                &angles.theta_deg,
                e.to_string(),
            )
        })
    }

    fn feed(
        ctx: &Ctx,
        raw: &RawScenario,
        layout: &ArrayLayout,
    ) -> std::result::Result<FeedSpec, ValidationError> {
        let default = || FeedSpec::default_for(layout).expect("default feed is valid");
        let Some(feed) = &raw.feed else {
            return Ok(default());
        };
        let fd_raw = feed.get_ref();
        let f_over_d = fd_raw
            .f_over_d
            .as_ref()
            .map_or(synthesis::DEFAULT_F_OVER_D, |v| *v.get_ref());
        if let Some(v) = &fd_raw.f_over_d {
            if !(f_over_d > 0.0) {
                return Err(ctx.err("feed.f_over_d", v, "must be positive"));
            }
        }
        let taper = fd_raw
            .edge_taper_db
            .as_ref()
            .map_or(synthesis::DEFAULT_EDGE_TAPER_DB, |v| *v.get_ref());
        let mut spec = match &fd_raw.q_f {
            Some(q) => {
                let (w, h) = layout.aperture();
                FeedSpec::new([0.0, 0.0, f_over_d * w.max(h)], *q.get_ref())
                    .map_err(|e| ctx.err("feed.q_f", q, e.to_string()))?
            }
            None => FeedSpec::for_aperture(layout, f_over_d, taper).map_err(|e| {
                match &fd_raw.edge_taper_db {
                    Some(t) => ctx.err("feed.edge_taper_db", t, e.to_string()),
                    None => ctx.err("feed", feed, e.to_string()),
                }
            })?,
        };
        if let Some(off) = &fd_raw.offset_mm {
            let [dx, dy] = *off.get_ref();
            spec = spec.with_offset(dx * 1e-3, dy * 1e-3);
        }
        Ok(spec)
    }

    pub fn grid(&self) -> Result<PatternGrid> {
        PatternGrid::cut_deg(self.output.cut_phi_deg, self.output.grid_deg)
    }

    /// Quantized state map, or `None` in grating mode.
    pub fn synthesize(&self) -> Result<Option<StateMap>> {
        match &self.kind {
            ScenarioKind::ReflectSteer {
                layout,
                table,
                target,
                ..
            } => {
                let profile = synthesis::steering_profile(layout, self.frequency, *target);
                synthesis::quantize(&profile, table, self.frequency).map(Some)
            }
            ScenarioKind::TransmitCollimate {
                layout,
                table,
                target,
                feed,
            } => {
                let profile =
                    synthesis::collimation_profile(layout, self.frequency, feed, *target)?;
                synthesis::quantize(&profile, table, self.frequency).map(Some)
            }
            ScenarioKind::Grating { .. } => Ok(None),
        }
    }

    /// Pattern and summary for an already synthesized (or re-loaded) state map.
    pub fn evaluate(&self, statemap: Option<&StateMap>) -> Result<Evaluation> {
        let grid = self.grid()?;
        let f = self.frequency;
        let need_map =
            || statemap.ok_or_else(|| crate::Error::domain("this mode needs a state map"));
        let (pattern, target, details) = match &self.kind {
            ScenarioKind::ReflectSteer {
                layout,
                table,
                target,
                incidence,
            } => {
                let map = need_map()?;
                let p = farfield::scattered_pattern(
                    layout,
                    map,
                    table,
                    f,
                    *incidence,
                    &self.element,
                    &grid,
                )?;
                let details = Details::Reflect {
                    elements: layout.len(),
                    pitch_wavelengths: sig9(layout.pitch_in_wavelengths(f)),
                    grating_lobe_capable: layout.grating_lobe_capable(f),
                    max_abs_residual_deg: sig9(map.max_abs_residual().to_degrees()),
                };
                (p, *target, details)
            }
            ScenarioKind::TransmitCollimate {
                layout,
                table,
                target,
                feed,
            } => {
                let map = need_map()?;
                let p = farfield::transmit_gain_pattern(
                    layout,
                    map,
                    table,
                    f,
                    feed,
                    &self.element,
                    &grid,
                )?;
                let coefficients = map.coefficients(table, f)?;
                let target_gain = farfield::transmit_gain_at(
                    layout,
                    &coefficients,
                    f,
                    feed,
                    &self.element,
                    *target,
                );
                let limit = aperture_gain_limit(layout, f);
                let details = Details::Transmit {
                    elements: layout.len(),
                    pitch_wavelengths: sig9(layout.pitch_in_wavelengths(f)),
                    target_gain_dbi: sig9(farfield::to_db(target_gain)),
                    aperture_limit_dbi: sig9(farfield::to_db(limit)),
                    aperture_efficiency: sig9(target_gain / limit),
                    spillover_efficiency: sig9(
                        illumination(layout, f, feed, &self.element).spillover_efficiency(),
                    ),
                    focal_distance_mm: sig9(feed.focal_distance() * 1e3),
                    feed_q_f: sig9(feed.q_f),
                    max_abs_residual_deg: sig9(map.max_abs_residual().to_degrees()),
                };
                (p, *target, details)
            }
            ScenarioKind::Grating { config, aperture } => {
                let p = grating::splitter_pattern(config, *aperture, &self.element, &grid)?;
                let modes = grating::floquet_modes(config);
                let target =
                    Direction::in_cut(config.incidence(), self.output.cut_phi_deg.to_radians())?;
                let details = Details::Grating {
                    period_mm: sig9(config.period() * 1e3),
                    propagating: modes.iter().filter(|m| m.propagating).count(),
                    modes: modes.iter().map(ModeRecord::from).collect(),
                };
                (p, target, details)
            }
        };
        let metrics = pattern_metrics(&pattern, target)?;
        Ok(Evaluation {
            summary: Summary {
                schema_version: SCHEMA_VERSION,
                mode: self.mode,
                scenario_hash: self.hash.clone(),
                freq_ghz: sig9(f.ghz()),
                normalization: pattern.normalization.name(),
                metrics: MetricsRecord::from(&metrics),
                details,
            },
            metrics,
            pattern,
        })
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ModeRecord {
    pub n: i64,
    pub theta_deg: f64,
    pub propagating: bool,
}

impl From<&FloquetMode> for ModeRecord {
    fn from(m: &FloquetMode) -> Self {
        ModeRecord {
            n: m.order,
            theta_deg: sig9(m.theta.to_degrees()),
            propagating: m.propagating,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(untagged)]
pub enum Details {
    Reflect {
        elements: usize,
        pitch_wavelengths: f64,
        grating_lobe_capable: bool,
        max_abs_residual_deg: f64,
    },
    Transmit {
        elements: usize,
        pitch_wavelengths: f64,
        target_gain_dbi: f64,
        aperture_limit_dbi: f64,
        aperture_efficiency: f64,
        spillover_efficiency: f64,
        focal_distance_mm: f64,
        feed_q_f: f64,
        max_abs_residual_deg: f64,
    },
    Grating {
        period_mm: f64,
        propagating: usize,
        modes: Vec<ModeRecord>,
    },
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Summary {
    pub schema_version: u32,
    pub mode: Mode,
    pub scenario_hash: String,
    pub freq_ghz: f64,
    pub normalization: &'static str,
    pub metrics: MetricsRecord,
    pub details: Details,
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub pattern: FarFieldPattern,
    pub metrics: PatternMetrics,
    pub summary: Summary,
}

/// Paths of the files written by [`run`].
#[derive(Debug, Clone)]
pub struct RunOutputs {
    pub pattern: PathBuf,
    pub statemap: Option<PathBuf>,
    pub summary: PathBuf,
}

/// Full pipeline: synthesize, evaluate, write `<prefix>_pattern.csv`,
/// `<prefix>_statemap.csv` (array modes) and `<prefix>_summary.json`.
pub fn run(scenario: &Scenario, out_dir: &Path) -> Result<(RunOutputs, Evaluation)> {
    let map = scenario.synthesize()?;
    let eval = scenario.evaluate(map.as_ref())?;
    std::fs::create_dir_all(out_dir).map_err(|e| crate::Error::io(out_dir, e))?;
    let write = |name: String, body: String| -> Result<PathBuf> {
        let path = out_dir.join(name);
        std::fs::write(&path, body).map_err(|e| crate::Error::io(&path, e))?;
        Ok(path)
    };
    let prefix = &scenario.output.prefix;
    let pattern = write(
        format!("{prefix}_pattern.csv"),
        io::pattern_csv(&eval.pattern, &scenario.hash),
    )?;
    let statemap = map
        .as_ref()
        .map(|m| write(format!("{prefix}_statemap.csv"), io::statemap_csv(m)))
        .transpose()?;
    let summary = write(format!("{prefix}_summary.json"), io::to_json(&eval.summary))?;
    Ok((
        RunOutputs {
            pattern,
            statemap,
            summary,
        },
        eval,
    ))
}
