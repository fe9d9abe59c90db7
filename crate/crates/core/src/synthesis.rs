//! Ideal phase profiles (plane-wave steering, feed collimation) and their
//! nearest-state quantization onto a unit-cell state table.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::primitives::{wrap_phase, ArrayLayout, Direction, Frequency};
use crate::unitcell::UnitCellStateTable;

// Residuals closer than this are treated as ties.
const TIE_EPS: f64 = 1e-12;

/// Ideal continuous phase per element, wrapped to (−π, π].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    layout: ArrayLayout,
    phases: Vec<f64>,
}

impl PhaseProfile {
    pub fn new(layout: ArrayLayout, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != layout.len() {
            return Err(Error::domain(format!(
                "{} phases for {} elements",
                phases.len(),
                layout.len()
            )));
        }
        let phases = phases.into_iter().map(wrap_phase).collect();
        Ok(PhaseProfile { layout, phases })
    }

    pub fn layout(&self) -> &ArrayLayout {
        &self.layout
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Same profile with a constant phase added to every element.
    pub fn shifted(&self, delta: f64) -> Self {
        PhaseProfile {
            layout: self.layout.clone(),
            phases: self.phases.iter().map(|p| wrap_phase(p + delta)).collect(),
        }
    }

    /// Unit-magnitude weights `exp(j·phase)`.
    pub fn weights(&self) -> Vec<Complex64> {
        self.phases
            .iter()
            .map(|&p| Complex64::from_polar(1.0, p))
            .collect()
    }
}

/// Feed horn for transmissive arrays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedSpec {
    /// `(x, y, z)` in meters; z is the focal distance on the broadside axis.
    pub position: [f64; 3],
    /// Power pattern exponent, `cos^(2 q_f) θ`.
    pub q_f: f64,
}

pub const DEFAULT_F_OVER_D: f64 = 0.7;
pub const DEFAULT_EDGE_TAPER_DB: f64 = -10.0;

impl FeedSpec {
    pub fn new(position: [f64; 3], q_f: f64) -> Result<Self> {
        if !(position[2].is_finite() && position[2] > 0.0) {
            return Err(Error::domain(
                "feed must sit off the array plane (focal distance > 0)",
            ));
        }
        if !(q_f.is_finite() && q_f >= 0.0) {
            return Err(Error::domain(format!(
                "feed exponent q_f must be ≥ 0, got {q_f}"
            )));
        }
        Ok(FeedSpec { position, q_f })
    }

    /// On-axis feed at `F = f_over_d · D`, `D` the larger aperture side,
    /// with `q_f` chosen for the requested edge taper.
    pub fn for_aperture(layout: &ArrayLayout, f_over_d: f64, edge_taper_db: f64) -> Result<Self> {
        let (w, h) = layout.aperture();
        let d = w.max(h);
        let focal = f_over_d * d;
        let q_f = q_for_edge_taper(focal, d / 2.0, edge_taper_db)?;
        Self::new([0.0, 0.0, focal], q_f)
    }

    /// F/D = 0.7 and −10 dB edge taper.
    pub fn default_for(layout: &ArrayLayout) -> Result<Self> {
        Self::for_aperture(layout, DEFAULT_F_OVER_D, DEFAULT_EDGE_TAPER_DB)
    }

    pub fn with_offset(mut self, dx: f64, dy: f64) -> Self {
        self.position[0] += dx;
        self.position[1] += dy;
        self
    }

    pub fn focal_distance(&self) -> f64 {
        self.position[2]
    }

    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        let [fx, fy, fz] = self.position;
        ((x - fx).powi(2) + (y - fy).powi(2) + fz * fz).sqrt()
    }
}

/// Feed exponent giving `taper_db` power illumination at a point
/// `half_width` off-axis, relative to the aperture centre, counting both the
/// feed pattern and the 1/r² spreading: `cos^(2q+2) θ_e = 10^(taper/10)`.
/// Clamped at 0 when spreading alone already exceeds the requested taper.
pub fn q_for_edge_taper(focal: f64, half_width: f64, taper_db: f64) -> Result<f64> {
    if !(focal > 0.0 && half_width > 0.0 && taper_db < 0.0) {
        return Err(Error::domain(
            "edge taper needs positive focal distance, half width and a negative dB taper",
        ));
    }
    let cos_edge = focal / focal.hypot(half_width);
    let total = (taper_db / 10.0) / cos_edge.log10();
    Ok(((total - 2.0) / 2.0).max(0.0))
}

/// Plane-wave steering under normal incidence:
/// `phase_i = −k0 (x_i u0 + y_i v0)`, zero at the array centre.
pub fn steering_profile(layout: &ArrayLayout, f: Frequency, target: Direction) -> PhaseProfile {
    let k0 = f.wavenumber();
    let phases = layout
        .positions()
        .iter()
        .map(|&(x, y)| wrap_phase(-k0 * (x * target.u() + y * target.v())))
        .collect();
    PhaseProfile {
        layout: layout.clone(),
        phases,
    }
}

/// Feed collimation plus steering:
/// `phase_i = k0 ((r_i − r_0) − (x_i u0 + y_i v0))`, where `r_i` is the
/// feed-to-element distance and `r_0` the feed-to-centre distance.
pub fn collimation_profile(
    layout: &ArrayLayout,
    f: Frequency,
    feed: &FeedSpec,
    target: Direction,
) -> Result<PhaseProfile> {
    if !(feed.focal_distance() > 0.0) {
        return Err(Error::domain("feed lies in the array plane"));
    }
    let k0 = f.wavenumber();
    let r0 = feed.distance_to(0.0, 0.0);
    let phases = layout
        .positions()
        .iter()
        .map(|&(x, y)| {
            let r = feed.distance_to(x, y);
            wrap_phase(k0 * ((r - r0) - (x * target.u() + y * target.v())))
        })
        .collect();
    Ok(PhaseProfile {
        layout: layout.clone(),
        phases,
    })
}

/// Discrete state assignment per element.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMap {
    layout: ArrayLayout,
    states: Vec<String>,
    ideal: Vec<f64>,
    residual: Vec<f64>,
}

impl StateMap {
    /// Assignment without synthesis history: ideal phases and residuals are zero.
    pub fn from_states(layout: ArrayLayout, states: Vec<String>) -> Result<Self> {
        let n = layout.len();
        Self::from_parts(layout, states, vec![0.0; n], vec![0.0; n])
    }

    pub fn from_parts(
        layout: ArrayLayout,
        states: Vec<String>,
        ideal: Vec<f64>,
        residual: Vec<f64>,
    ) -> Result<Self> {
        let n = layout.len();
        if states.len() != n || ideal.len() != n || residual.len() != n {
            return Err(Error::domain(format!(
                "state map arrays must have {n} entries"
            )));
        }
        Ok(StateMap {
            layout,
            states,
            ideal,
            residual,
        })
    }

    pub fn layout(&self) -> &ArrayLayout {
        &self.layout
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &str {
        &self.states[index]
    }

    pub fn ideal_phases(&self) -> &[f64] {
        &self.ideal
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residual
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Fails with the first state name the table does not define.
    pub fn check_bound(&self, table: &UnitCellStateTable) -> Result<()> {
        match self.states.iter().find(|s| !table.has_state(s)) {
            Some(s) => Err(Error::UnknownState(s.clone())),
            None => Ok(()),
        }
    }

    /// Complex coefficient of each element's state at `f`.
    pub fn coefficients(&self, table: &UnitCellStateTable, f: Frequency) -> Result<Vec<Complex64>> {
        self.check_bound(table)?;
        let per_state: Vec<(&str, Complex64)> = table
            .states()
            .map(|s| Ok((s, table.complex_at(s, f)?)))
            .collect::<Result<_>>()?;
        Ok(self
            .states
            .iter()
            .map(|s| {
                per_state
                    .iter()
                    .find(|(name, _)| name == s)
                    .map(|(_, c)| *c)
                    .expect("bound state")
            })
            .collect())
    }

    /// Phases the assigned states actually realise at `f`.
    pub fn realized_profile(
        &self,
        table: &UnitCellStateTable,
        f: Frequency,
    ) -> Result<PhaseProfile> {
        let phases = self
            .coefficients(table, f)?
            .iter()
            .map(|c| c.arg())
            .collect();
        PhaseProfile::new(self.layout.clone(), phases)
    }
}

/// Assign each element the state whose phase is nearest (wrapped) to the
/// ideal phase. Ties go to the lexicographically smallest state name.
pub fn quantize(
    profile: &PhaseProfile,
    table: &UnitCellStateTable,
    f: Frequency,
) -> Result<StateMap> {
    // BTreeMap iteration order is lexicographic, first strict winner wins ties
    let options: Vec<(String, f64)> = table
        .states()
        .map(|s| Ok((s.to_string(), table.coefficient_at(s, f)?.phase())))
        .collect::<Result<_>>()?;
    let mut states = Vec::with_capacity(profile.phases.len());
    let mut residual = Vec::with_capacity(profile.phases.len());
    for &ideal in &profile.phases {
        let mut best: Option<(&str, f64)> = None;
        for (name, phase) in &options {
            let r = wrap_phase(phase - ideal);
            match best {
                Some((_, b)) if r.abs() >= b.abs() - TIE_EPS => {}
                _ => best = Some((name, r)),
            }
        }
        let (name, r) = best.expect("table has at least two states");
        states.push(name.to_string());
        residual.push(r);
    }
    Ok(StateMap {
        layout: profile.layout.clone(),
        states,
        ideal: profile.phases.clone(),
        residual,
    })
}
