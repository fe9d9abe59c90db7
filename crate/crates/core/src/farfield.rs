//! Far-field patterns of reflective and transmissive arrays, directivity by
//! sphere integration, pattern metrics, and free-space path loss.
//!
//! Every pattern is a scalar array-factor sum with a `cos^q_e θ` element
//! factor. Angles are evaluated in parallel, but each angle's sum runs in
//! element order, so results do not depend on the thread count.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::primitives::{ArrayLayout, Direction, Frequency};
use crate::synthesis::{FeedSpec, StateMap};
use crate::unitcell::{CellKind, UnitCellStateTable};

/// Lowest level reported for a null, dB.
pub const DB_FLOOR: f64 = -300.0;
pub const DEFAULT_GRID_DEG: f64 = 0.1;
pub const DEFAULT_Q_E: f64 = 0.5;

/// Element pattern: field `cos^q_e θ` on the front hemisphere, zero behind
/// (isotropic everywhere when `q_e = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementModel {
    q_e: f64,
}

impl Default for ElementModel {
    fn default() -> Self {
        ElementModel { q_e: DEFAULT_Q_E }
    }
}

impl ElementModel {
    pub fn new(q_e: f64) -> Result<Self> {
        if !(q_e.is_finite() && q_e >= 0.0) {
            return Err(Error::domain(format!(
                "element exponent q_e must be ≥ 0, got {q_e}"
            )));
        }
        Ok(ElementModel { q_e })
    }

    pub fn isotropic() -> Self {
        ElementModel { q_e: 0.0 }
    }

    pub fn q_e(&self) -> f64 {
        self.q_e
    }

    pub fn field(&self, cos_theta: f64) -> f64 {
        if self.q_e == 0.0 {
            1.0
        } else if cos_theta <= 0.0 {
            0.0
        } else {
            cos_theta.powf(self.q_e)
        }
    }
}

/// Sampling of observation directions.
#[derive(Debug, Clone, PartialEq)]
pub enum PatternGrid {
    /// Signed angles inside the plane of azimuth `phi`, strictly increasing.
    Cut { phi: f64, theta: Vec<f64> },
    /// Full sphere; values are stored theta-major (`i_theta * phi.len() + i_phi`).
    Sphere { theta: Vec<f64>, phi: Vec<f64> },
}

impl PatternGrid {
    /// Cut from −90° to +90° with the given step (radians). The samples are
    /// symmetric about broadside to the last bit.
    pub fn cut(phi: f64, step: f64) -> Result<Self> {
        Self::cut_span(phi, PI / 2.0, step)
    }

    pub fn cut_span(phi: f64, max_theta: f64, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::domain("angular grid resolution must be positive"));
        }
        if !(max_theta > 0.0 && max_theta <= PI) {
            return Err(Error::domain("cut span must lie in (0, π]"));
        }
        let n = ((max_theta / step) + 1e-9).floor() as i64;
        let theta = (-n..=n).map(|k| k as f64 * step).collect();
        Ok(PatternGrid::Cut { phi, theta })
    }

    /// Cut in degrees, the I/O form.
    pub fn cut_deg(phi_deg: f64, step_deg: f64) -> Result<Self> {
        if !(step_deg.is_finite() && step_deg > 0.0) {
            return Err(Error::domain("angular grid resolution must be positive"));
        }
        let n = ((90.0 / step_deg) + 1e-9).floor() as i64;
        let theta = (-n..=n)
            .map(|k| (k as f64 * step_deg).to_radians())
            .collect();
        Ok(PatternGrid::Cut {
            phi: phi_deg.to_radians(),
            theta,
        })
    }

    /// Full sphere with inclusive end points on both axes.
    pub fn sphere(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 2 {
            return Err(Error::domain(
                "sphere grid needs at least 2 intervals per axis",
            ));
        }
        let theta = (0..=n_theta)
            .map(|i| PI * i as f64 / n_theta as f64)
            .collect();
        let phi = (0..=n_phi)
            .map(|j| 2.0 * PI * j as f64 / n_phi as f64)
            .collect();
        Ok(PatternGrid::Sphere { theta, phi })
    }

    pub fn directions(&self) -> Vec<Direction> {
        match self {
            PatternGrid::Cut { phi, theta } => theta
                .iter()
                .map(|&t| Direction::in_cut(t, *phi).expect("cut angles are in range"))
                .collect(),
            PatternGrid::Sphere { theta, phi } => theta
                .iter()
                .flat_map(|&t| {
                    phi.iter().map(move |&p| {
                        Direction::new(t.min(PI), p).expect("sphere angles are in range")
                    })
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PatternGrid::Cut { theta, .. } => theta.len(),
            PatternGrid::Sphere { theta, phi } => theta.len() * phi.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// Power relative to the pattern maximum.
    PeakZeroDb,
    /// Realized gain, dBi.
    AbsoluteGainDbi,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Normalization::PeakZeroDb => "PeakZeroDb",
            Normalization::AbsoluteGainDbi => "AbsoluteGainDbi",
        }
    }
}

/// Sampled far field. `|field|²` is the linear value named by
/// `normalization` (relative power, or gain).
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldPattern {
    pub grid: PatternGrid,
    pub field: Vec<Complex64>,
    pub normalization: Normalization,
    pub frequency: Frequency,
}

impl FarFieldPattern {
    pub fn value_db(&self, index: usize) -> f64 {
        (10.0 * self.field[index].norm_sqr().log10()).max(DB_FLOOR)
    }

    pub fn values_db(&self) -> Vec<f64> {
        (0..self.field.len()).map(|i| self.value_db(i)).collect()
    }

    /// `(theta, phi)` of sample `index`, radians. Cut samples report the
    /// signed in-cut angle.
    pub fn angles(&self, index: usize) -> (f64, f64) {
        match &self.grid {
            PatternGrid::Cut { phi, theta } => (theta[index], *phi),
            PatternGrid::Sphere { theta, phi } => {
                (theta[index / phi.len()], phi[index % phi.len()])
            }
        }
    }

    pub fn cut_angles(&self) -> Option<&[f64]> {
        match &self.grid {
            PatternGrid::Cut { theta, .. } => Some(theta),
            PatternGrid::Sphere { .. } => None,
        }
    }

    fn normalized(grid: PatternGrid, mut field: Vec<Complex64>, frequency: Frequency) -> Self {
        let peak = field.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if peak > 0.0 {
            for z in &mut field {
                *z /= peak;
            }
        }
        FarFieldPattern {
            grid,
            field,
            normalization: Normalization::PeakZeroDb,
            frequency,
        }
    }
}

/// Array sum `EF(θ) · Σ w_i exp(j k0 (x_i u + y_i v))` at one direction.
pub fn array_field(
    layout: &ArrayLayout,
    weights: &[Complex64],
    k0: f64,
    element: &ElementModel,
    dir: &Direction,
) -> Complex64 {
    let ef = element.field(dir.cos_theta());
    if ef == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (u, v) = (dir.u(), dir.v());
    let mut sum = Complex64::new(0.0, 0.0);
    for (&(x, y), w) in layout.positions().iter().zip(weights) {
        let arg = k0 * (x * u + y * v);
        sum += w * Complex64::new(arg.cos(), arg.sin());
    }
    sum * ef
}

fn evaluate(
    layout: &ArrayLayout,
    weights: &[Complex64],
    k0: f64,
    element: &ElementModel,
    grid: &PatternGrid,
) -> Vec<Complex64> {
    grid.directions()
        .par_iter()
        .map(|d| array_field(layout, weights, k0, element, d))
        .collect()
}

/// Element weights `Γ_i · exp(j k0 (x_i u_inc + y_i v_inc))` for a unit
/// plane wave from `incidence`.
pub fn reflect_weights(
    layout: &ArrayLayout,
    coefficients: &[Complex64],
    f: Frequency,
    incidence: Direction,
) -> Vec<Complex64> {
    let k0 = f.wavenumber();
    layout
        .positions()
        .iter()
        .zip(coefficients)
        .map(|(&(x, y), g)| {
            let arg = k0 * (x * incidence.u() + y * incidence.v());
            g * Complex64::new(arg.cos(), arg.sin())
        })
        .collect()
}

/// Peak-normalized scattered pattern of a reflective array under plane-wave
/// illumination.
pub fn scattered_pattern(
    layout: &ArrayLayout,
    statemap: &StateMap,
    table: &UnitCellStateTable,
    f: Frequency,
    incidence: Direction,
    element: &ElementModel,
    grid: &PatternGrid,
) -> Result<FarFieldPattern> {
    let coefficients = statemap.coefficients(table, f)?;
    Ok(scattered_pattern_from_coefficients(
        layout,
        &coefficients,
        f,
        incidence,
        element,
        grid,
    ))
}

pub fn scattered_pattern_from_coefficients(
    layout: &ArrayLayout,
    coefficients: &[Complex64],
    f: Frequency,
    incidence: Direction,
    element: &ElementModel,
    grid: &PatternGrid,
) -> FarFieldPattern {
    let weights = reflect_weights(layout, coefficients, f, incidence);
    let field = evaluate(layout, &weights, f.wavenumber(), element, grid);
    FarFieldPattern::normalized(grid.clone(), field, f)
}

/// Feed power captured by each element and the resulting complex
/// excitation of the transmitting side.
#[derive(Debug, Clone, PartialEq)]
pub struct Illumination {
    /// Power intercepted per element, fraction of total feed power.
    pub power: Vec<f64>,
    /// Excitation `sqrt(P_i · A_e)/λ · exp(−j k0 r_i)`, scaled so that
    /// `4π |Σ ...|²` is gain.
    pub excitation: Vec<Complex64>,
}

impl Illumination {
    /// Fraction of feed power intercepted by the aperture.
    pub fn spillover_efficiency(&self) -> f64 {
        self.power.iter().sum()
    }
}

/// Feed illumination of each element.
///
/// The feed radiates unit total power with intensity
/// `U(ψ) = (2q_f+1)/(2π) · cos^(2q_f) ψ`, ψ measured from the feed axis
/// (pointed at the array centre). Element `i` intercepts
/// `P_i = U(ψ_i)/r_i² · A_e · EF(θ_i)²`, with `θ_i` the incidence angle on
/// the element and `A_e` the cell area.
pub fn illumination(
    layout: &ArrayLayout,
    f: Frequency,
    feed: &FeedSpec,
    element: &ElementModel,
) -> Illumination {
    let lambda = f.wavelength();
    let k0 = f.wavenumber();
    let a_e = layout.cell_area();
    let [fx, fy, fz] = feed.position;
    let r0 = feed.distance_to(0.0, 0.0);
    let axis = [-fx / r0, -fy / r0, -fz / r0];
    let norm = (2.0 * feed.q_f + 1.0) / (2.0 * PI);
    let mut power = Vec::with_capacity(layout.len());
    let mut excitation = Vec::with_capacity(layout.len());
    for &(x, y) in layout.positions() {
        let r = feed.distance_to(x, y);
        let dir = [(x - fx) / r, (y - fy) / r, -fz / r];
        let cos_psi = dir[0] * axis[0] + dir[1] * axis[1] + dir[2] * axis[2];
        let intensity = if cos_psi > 0.0 {
            norm * cos_psi.powf(2.0 * feed.q_f)
        } else {
            0.0
        };
        let capture = element.field(fz / r).powi(2);
        let p = intensity / (r * r) * a_e * capture;
        power.push(p);
        excitation.push(Complex64::from_polar((p * a_e).sqrt() / lambda, -k0 * r));
    }
    Illumination { power, excitation }
}

/// Realized gain pattern (dBi) of a transmissive array for arbitrary cell
/// transmission coefficients. Spillover counts as loss.
pub fn transmit_gain_from_coefficients(
    layout: &ArrayLayout,
    coefficients: &[Complex64],
    f: Frequency,
    feed: &FeedSpec,
    element: &ElementModel,
    grid: &PatternGrid,
) -> FarFieldPattern {
    let weights = transmit_weights(layout, coefficients, f, feed, element);
    let scale = (4.0 * PI).sqrt();
    let field = evaluate(layout, &weights, f.wavenumber(), element, grid)
        .into_iter()
        .map(|z| z * scale)
        .collect();
    FarFieldPattern {
        grid: grid.clone(),
        field,
        normalization: Normalization::AbsoluteGainDbi,
        frequency: f,
    }
}

fn transmit_weights(
    layout: &ArrayLayout,
    coefficients: &[Complex64],
    f: Frequency,
    feed: &FeedSpec,
    element: &ElementModel,
) -> Vec<Complex64> {
    illumination(layout, f, feed, element)
        .excitation
        .iter()
        .zip(coefficients)
        .map(|(b, t)| b * t)
        .collect()
}

/// Realized gain pattern of a quantized transmissive array.
pub fn transmit_gain_pattern(
    layout: &ArrayLayout,
    statemap: &StateMap,
    table: &UnitCellStateTable,
    f: Frequency,
    feed: &FeedSpec,
    element: &ElementModel,
    grid: &PatternGrid,
) -> Result<FarFieldPattern> {
    if table.kind() != CellKind::Transmissive {
        return Err(Error::KindMismatch {
            expected: CellKind::Transmissive.name(),
            found: table.kind().name(),
        });
    }
    let coefficients = statemap.coefficients(table, f)?;
    Ok(transmit_gain_from_coefficients(
        layout,
        &coefficients,
        f,
        feed,
        element,
        grid,
    ))
}

/// Realized gain (linear) in one direction.
pub fn transmit_gain_at(
    layout: &ArrayLayout,
    coefficients: &[Complex64],
    f: Frequency,
    feed: &FeedSpec,
    element: &ElementModel,
    dir: Direction,
) -> f64 {
    let weights = transmit_weights(layout, coefficients, f, feed, element);
    4.0 * PI * array_field(layout, &weights, f.wavenumber(), element, &dir).norm_sqr()
}

/// Maximum gain of a uniformly excited aperture, `4πA/λ²` (linear).
pub fn aperture_gain_limit(layout: &ArrayLayout, f: Frequency) -> f64 {
    4.0 * PI * layout.area() / f.wavelength().powi(2)
}

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Directivity (dBi) of a full-sphere pattern by trapezoidal integration.
pub fn directivity(pattern: &FarFieldPattern) -> Result<f64> {
    let PatternGrid::Sphere { theta, phi } = &pattern.grid else {
        return Err(Error::domain("directivity needs a full-sphere pattern"));
    };
    let np = phi.len();
    let power: Vec<f64> = pattern.field.iter().map(|z| z.norm_sqr()).collect();
    let ring = |i: usize| -> f64 {
        let row = &power[i * np..(i + 1) * np];
        (1..np)
            .map(|j| 0.5 * (row[j] + row[j - 1]) * (phi[j] - phi[j - 1]))
            .sum::<f64>()
            * theta[i].sin()
    };
    let rings: Vec<f64> = (0..theta.len()).map(ring).collect();
    let total: f64 = (1..theta.len())
        .map(|i| 0.5 * (rings[i] + rings[i - 1]) * (theta[i] - theta[i - 1]))
        .sum();
    let peak = power.iter().cloned().fold(0.0, f64::max);
    if !(total > 0.0) {
        return Err(Error::domain("pattern carries no power"));
    }
    Ok(to_db(4.0 * PI * peak / total))
}

/// Summary numbers of a cut pattern. Angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternMetrics {
    pub peak_deg: f64,
    pub peak_db: f64,
    /// Highest sidelobe relative to the peak (≤ 0); `None` without sidelobes.
    pub sll_db: Option<f64>,
    /// `None` when a −3 dB crossing falls outside the cut.
    pub hpbw_deg: Option<f64>,
    pub pointing_error_deg: f64,
}

/// Local maximum refined by a parabola through the three samples around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lobe {
    pub angle: f64,
    pub level_db: f64,
    pub index: usize,
}

fn refine_peak(theta: &[f64], db: &[f64], i: usize) -> Lobe {
    let (a, b, c) = (db[i - 1], db[i], db[i + 1]);
    let denom = a - 2.0 * b + c;
    let delta = if denom < 0.0 {
        0.5 * (a - c) / denom
    } else {
        0.0
    };
    let step = if delta >= 0.0 {
        theta[i + 1] - theta[i]
    } else {
        theta[i] - theta[i - 1]
    };
    Lobe {
        angle: theta[i] + delta * step,
        level_db: b - 0.25 * (a - c) * delta,
        index: i,
    }
}

/// All interior local maxima of a cut, strongest first in angle order.
pub fn find_lobes(pattern: &FarFieldPattern) -> Result<Vec<Lobe>> {
    let theta = pattern
        .cut_angles()
        .ok_or_else(|| Error::domain("lobe search needs a cut pattern"))?;
    let db = pattern.values_db();
    if db.len() < 3 {
        return Err(Error::UndefinedMetrics("fewer than 3 samples".into()));
    }
    Ok((1..db.len() - 1)
        .filter(|&i| db[i] > DB_FLOOR && db[i] >= db[i - 1] && db[i] > db[i + 1])
        .map(|i| refine_peak(theta, &db, i))
        .collect())
}

/// Lobes within `below_peak_db` of the strongest one.
pub fn significant_lobes(pattern: &FarFieldPattern, below_peak_db: f64) -> Result<Vec<Lobe>> {
    let lobes = find_lobes(pattern)?;
    let top = lobes
        .iter()
        .map(|l| l.level_db)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(lobes
        .into_iter()
        .filter(|l| l.level_db >= top - below_peak_db)
        .collect())
}

// Lobes this close to the maximum count as equal peaks.
const PEAK_TIE_DB: f64 = 0.01;

/// Peak, sidelobe level, beamwidth and pointing error of a cut.
///
/// Among peaks level with the maximum (within 0.01 dB, e.g. the mirror lobe
/// of a 1-bit array) the one nearest `target` is taken as the main beam.
pub fn pattern_metrics(pattern: &FarFieldPattern, target: Direction) -> Result<PatternMetrics> {
    let PatternGrid::Cut { phi, theta } = &pattern.grid else {
        return Err(Error::domain("pattern metrics need a cut pattern"));
    };
    let db = pattern.values_db();
    let lobes = find_lobes(pattern)?;
    if lobes.is_empty() {
        return Err(Error::UndefinedMetrics("no interior peak".into()));
    }
    let target_angle = (target.u() * phi.cos() + target.v() * phi.sin())
        .clamp(-1.0, 1.0)
        .asin();
    let top = lobes
        .iter()
        .map(|l| l.level_db)
        .fold(f64::NEG_INFINITY, f64::max);
    let main = *lobes
        .iter()
        .filter(|l| l.level_db >= top - PEAK_TIE_DB)
        .min_by(|a, b| {
            (a.angle - target_angle)
                .abs()
                .total_cmp(&(b.angle - target_angle).abs())
        })
        .expect("top lobe qualifies");

    // null-to-null extent of the main beam
    let mut lo = main.index;
    while lo > 0 && db[lo - 1] < db[lo] {
        lo -= 1;
    }
    let mut hi = main.index;
    while hi + 1 < db.len() && db[hi + 1] < db[hi] {
        hi += 1;
    }
    let sll_db = lobes
        .iter()
        .filter(|l| l.index < lo || l.index > hi)
        .map(|l| (l.level_db - main.level_db).min(0.0))
        .reduce(f64::max);

    let half = main.level_db - 3.0;
    let crossing = |j: usize, k: usize| -> f64 {
        // linear in dB between samples j (above) and k (below)
        let t = (db[j] - half) / (db[j] - db[k]);
        theta[j] + t * (theta[k] - theta[j])
    };
    let left = (1..=main.index)
        .rev()
        .find(|&j| db[j - 1] < half)
        .map(|j| crossing(j, j - 1));
    let right = (main.index..db.len() - 1)
        .find(|&j| db[j + 1] < half)
        .map(|j| crossing(j, j + 1));
    let hpbw_deg = match (left, right) {
        (Some(l), Some(r)) => Some((r - l).to_degrees()),
        _ => None,
    };

    Ok(PatternMetrics {
        peak_deg: main.angle.to_degrees(),
        peak_db: main.level_db,
        sll_db,
        hpbw_deg,
        pointing_error_deg: (main.angle - target_angle).abs().to_degrees(),
    })
}

/// Free-space path loss `20·log10(4πd/λ)`, dB.
pub fn fspl(f: Frequency, distance: f64) -> Result<f64> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(Error::domain(format!(
            "distance must be positive, got {distance} m"
        )));
    }
    Ok(20.0 * (4.0 * PI * distance / f.wavelength()).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::{quantize, steering_profile};
    use crate::unitcell::IdealOneBitCell;
    use approx::assert_relative_eq;

    fn ghz(g: f64) -> Frequency {
        Frequency::from_ghz(g).unwrap()
    }

    fn uniform(layout: &ArrayLayout) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); layout.len()]
    }

    #[test]
    fn single_element_follows_element_factor() {
        let l = ArrayLayout::grid(1, 1, 1e-3).unwrap();
        let grid = PatternGrid::cut_deg(0.0, 1.0).unwrap();
        let el = ElementModel::new(0.5).unwrap();
        let p = scattered_pattern_from_coefficients(
            &l,
            &uniform(&l),
            ghz(140.0),
            Direction::broadside(),
            &el,
            &grid,
        );
        for (i, &t) in p.cut_angles().unwrap().iter().enumerate() {
            assert_relative_eq!(p.field[i].norm(), t.cos().max(0.0).sqrt(), epsilon = 1e-12);
        }
        let m = pattern_metrics(&p, Direction::broadside()).unwrap();
        assert!(m.peak_deg.abs() < 1e-9);
    }

    #[test]
    fn uniform_state_gives_specular_beam() {
        let l = ArrayLayout::grid(12, 12, 1e-3).unwrap();
        let grid = PatternGrid::cut_deg(0.0, 0.1).unwrap();
        let f = ghz(140.0);
        let el = ElementModel::default();
        let normal = scattered_pattern_from_coefficients(
            &l,
            &uniform(&l),
            f,
            Direction::broadside(),
            &el,
            &grid,
        );
        let m = pattern_metrics(&normal, Direction::broadside()).unwrap();
        assert!(m.peak_deg.abs() < 1e-6);

        let inc = Direction::from_degrees(20.0, 0.0).unwrap();
        let oblique = scattered_pattern_from_coefficients(&l, &uniform(&l), f, inc, &el, &grid);
        let spec = Direction::in_cut(-20f64.to_radians(), 0.0).unwrap();
        let m = pattern_metrics(&oblique, spec).unwrap();
        assert!((m.peak_deg + 20.0).abs() < 0.5, "{m:?}");
    }

    #[test]
    fn linearity_under_common_scale() {
        let l = ArrayLayout::grid(6, 6, 1e-3).unwrap();
        let f = ghz(140.0);
        let grid = PatternGrid::cut_deg(0.0, 0.5).unwrap();
        let el = ElementModel::default();
        let coeffs: Vec<Complex64> = (0..36)
            .map(|i| Complex64::from_polar(1.0, i as f64 * 0.37))
            .collect();
        let scaled: Vec<Complex64> = coeffs
            .iter()
            .map(|c| c * Complex64::from_polar(0.3, 1.1))
            .collect();
        let a =
            scattered_pattern_from_coefficients(&l, &coeffs, f, Direction::broadside(), &el, &grid);
        let b =
            scattered_pattern_from_coefficients(&l, &scaled, f, Direction::broadside(), &el, &grid);
        for (x, y) in a.values_db().iter().zip(b.values_db()) {
            if *x > -200.0 {
                assert_relative_eq!(*x, y, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn uniform_row_beamwidth() {
        let f = ghz(140.0);
        let lambda = f.wavelength();
        let n = 20.0;
        let d = lambda / 2.0;
        let l = ArrayLayout::grid(20, 1, d).unwrap();
        let grid = PatternGrid::cut_deg(0.0, 0.01).unwrap();
        let p = scattered_pattern_from_coefficients(
            &l,
            &uniform(&l),
            f,
            Direction::broadside(),
            &ElementModel::isotropic(),
            &grid,
        );
        let m = pattern_metrics(&p, Direction::broadside()).unwrap();
        let oracle = (0.886 * lambda / (n * d)).to_degrees();
        assert_relative_eq!(m.hpbw_deg.unwrap(), oracle, max_relative = 0.01);
        // first sidelobe of a uniform aperture ≈ −13.2 dB
        assert!((m.sll_db.unwrap() + 13.2).abs() < 0.3, "{m:?}");
    }

    #[test]
    fn two_equal_peaks_give_zero_sll() {
        let f = ghz(140.0);
        let l = ArrayLayout::grid(20, 20, 1e-3).unwrap();
        let table = IdealOneBitCell::lossless(CellKind::Reflective)
            .to_table()
            .unwrap();
        let target = Direction::from_degrees(30.0, 0.0).unwrap();
        let map = quantize(&steering_profile(&l, f, target), &table, f).unwrap();
        let grid = PatternGrid::cut_deg(0.0, 0.1).unwrap();
        let p = scattered_pattern(
            &l,
            &map,
            &table,
            f,
            Direction::broadside(),
            &ElementModel::default(),
            &grid,
        )
        .unwrap();
        let m = pattern_metrics(&p, target).unwrap();
        assert!(m.sll_db.unwrap().abs() < 1e-6, "{m:?}");
        assert!(m.pointing_error_deg <= 2.0);
    }

    #[test]
    fn monotone_pattern_is_undefined() {
        let f = ghz(140.0);
        let grid = PatternGrid::Cut {
            phi: 0.0,
            theta: vec![0.0, 0.1, 0.2, 0.3],
        };
        let p = FarFieldPattern {
            grid,
            field: [1.0, 0.8, 0.5, 0.1]
                .iter()
                .map(|&a| Complex64::new(a, 0.0))
                .collect(),
            normalization: Normalization::PeakZeroDb,
            frequency: f,
        };
        assert!(matches!(
            pattern_metrics(&p, Direction::broadside()),
            Err(Error::UndefinedMetrics(_))
        ));
    }

    #[test]
    fn directivity_isotropic_is_zero_dbi() {
        let l = ArrayLayout::grid(1, 1, 1e-3).unwrap();
        let grid = PatternGrid::sphere(90, 180).unwrap();
        let p = scattered_pattern_from_coefficients(
            &l,
            &uniform(&l),
            ghz(140.0),
            Direction::broadside(),
            &ElementModel::isotropic(),
            &grid,
        );
        assert!(directivity(&p).unwrap().abs() < 1e-3);
    }

    #[test]
    fn directivity_of_cut_rejected() {
        let l = ArrayLayout::grid(1, 1, 1e-3).unwrap();
        let grid = PatternGrid::cut_deg(0.0, 1.0).unwrap();
        let p = scattered_pattern_from_coefficients(
            &l,
            &uniform(&l),
            ghz(140.0),
            Direction::broadside(),
            &ElementModel::default(),
            &grid,
        );
        assert!(directivity(&p).is_err());
    }

    #[test]
    fn two_element_directivity() {
        let f = ghz(140.0);
        let l = ArrayLayout::grid(2, 1, f.wavelength() / 2.0).unwrap();
        let grid = PatternGrid::sphere(360, 720).unwrap();
        // isotropic pair at λ/2: D = 2 / (1 + sinc(kd)) = 2 exactly
        let iso = scattered_pattern_from_coefficients(
            &l,
            &uniform(&l),
            f,
            Direction::broadside(),
            &ElementModel::isotropic(),
            &grid,
        );
        assert_relative_eq!(directivity(&iso).unwrap(), to_db(2.0), epsilon = 0.01);
        // cosθ power elements, front hemisphere only:
        // ∫|F|² = 2π + 2·∫_disk cos(πu) du dv = 2π + 4·J1(π)
        let j1_pi = 0.284_615_343_179_752_8;
        let oracle = to_db(16.0 * PI / (2.0 * PI + 4.0 * j1_pi));
        let cos = scattered_pattern_from_coefficients(
            &l,
            &uniform(&l),
            f,
            Direction::broadside(),
            &ElementModel::default(),
            &grid,
        );
        assert_relative_eq!(directivity(&cos).unwrap(), oracle, epsilon = 0.02);
    }

    #[test]
    fn fspl_values() {
        let f = ghz(140.0);
        assert_relative_eq!(fspl(f, 1.0).unwrap(), 75.37, epsilon = 0.01);
        assert!(fspl(f, f.wavelength() / (4.0 * PI)).unwrap().abs() < 1e-12);
        assert_relative_eq!(
            fspl(f, 2.0).unwrap() - fspl(f, 1.0).unwrap(),
            20.0 * 2f64.log10(),
            epsilon = 1e-12
        );
        assert!(fspl(f, 0.0).is_err());
    }

    #[test]
    fn transmit_requires_transmissive_table() {
        let f = ghz(140.0);
        let l = ArrayLayout::grid(4, 4, 1e-3).unwrap();
        let table = IdealOneBitCell::lossless(CellKind::Reflective)
            .to_table()
            .unwrap();
        let map = StateMap::from_states(l.clone(), vec!["000".into(); 16]).unwrap();
        let feed = FeedSpec::default_for(&l).unwrap();
        let grid = PatternGrid::cut_deg(0.0, 1.0).unwrap();
        let r = transmit_gain_pattern(&l, &map, &table, f, &feed, &ElementModel::default(), &grid);
        assert!(matches!(r, Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn far_feed_efficiency_approaches_aperture_limit() {
        // near-uniform illumination: gain per intercepted power → 4πA/λ²
        let f = ghz(140.0);
        let l = ArrayLayout::grid(10, 10, f.wavelength() / 2.0).unwrap();
        let el = ElementModel::default();
        let feed = FeedSpec::new([0.0, 0.0, 2.0], 0.0).unwrap();
        let profile =
            crate::synthesis::collimation_profile(&l, f, &feed, Direction::broadside()).unwrap();
        let g = transmit_gain_at(
            &l,
            &profile.weights(),
            f,
            &feed,
            &el,
            Direction::broadside(),
        );
        let captured = illumination(&l, f, &feed, &el).spillover_efficiency();
        assert_relative_eq!(
            to_db(g / captured),
            to_db(aperture_gain_limit(&l, f)),
            epsilon = 0.01
        );
        assert_relative_eq!(to_db(aperture_gain_limit(&l, f)), 24.97, epsilon = 0.01);
    }

    #[test]
    fn spillover_efficiency_below_one() {
        let f = ghz(140.0);
        let l = ArrayLayout::grid(10, 10, f.wavelength() / 2.0).unwrap();
        let feed = FeedSpec::default_for(&l).unwrap();
        let eta = illumination(&l, f, &feed, &ElementModel::default()).spillover_efficiency();
        assert!(eta > 0.5 && eta < 1.0, "{eta}");
    }
}
