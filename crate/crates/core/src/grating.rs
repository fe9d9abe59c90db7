//! Floquet-mode analysis of the liquid-metal strip grating used as a
//! reconfigurable beam splitter. Filling or emptying channels changes the
//! effective period and with it the set of propagating diffraction orders.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::farfield::{scattered_pattern, ElementModel, FarFieldPattern, PatternGrid};
use crate::primitives::{ArrayLayout, Direction, Frequency};
use crate::synthesis::StateMap;
use crate::unitcell::{CellKind, CellMetadata, UnitCellStateTable};

/// Orders with `|sin θ_n| > 1 − GRAZING_TOL` are grazing and not counted as
/// propagating beams.
pub const GRAZING_TOL: f64 = 1e-3;

/// Names used for the two channel states in splitter patterns.
pub const FILLED: &str = "filled";
pub const EMPTY: &str = "empty";

#[derive(Debug, Clone, PartialEq)]
pub struct GratingConfig {
    channel_spacing: f64,
    fill_pattern: Vec<bool>,
    incidence: f64,
    frequency: Frequency,
    grazing_tol: f64,
}

impl GratingConfig {
    /// `fill_pattern` repeats across the channels; `incidence` is signed,
    /// radians, measured so that the n = 0 order leaves at `incidence`.
    pub fn new(
        channel_spacing: f64,
        fill_pattern: Vec<bool>,
        incidence: f64,
        frequency: Frequency,
    ) -> Result<Self> {
        if !(channel_spacing.is_finite() && channel_spacing > 0.0) {
            return Err(Error::domain("channel spacing must be positive"));
        }
        if !fill_pattern.iter().any(|&b| b) {
            return Err(Error::domain(
                "fill pattern needs at least one filled channel",
            ));
        }
        if !(incidence.is_finite() && incidence.abs() < FRAC_PI_2) {
            return Err(Error::domain("incidence angle must lie in (−90°, 90°)"));
        }
        Ok(GratingConfig {
            channel_spacing,
            fill_pattern,
            incidence,
            frequency,
            grazing_tol: GRAZING_TOL,
        })
    }

    /// Every channel filled at spacing `period`.
    pub fn with_period(period: f64, frequency: Frequency, incidence: f64) -> Result<Self> {
        Self::new(period, vec![true], incidence, frequency)
    }

    pub fn with_grazing_tol(mut self, tol: f64) -> Self {
        self.grazing_tol = tol.max(0.0);
        self
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn incidence(&self) -> f64 {
        self.incidence
    }

    pub fn channel_spacing(&self) -> f64 {
        self.channel_spacing
    }

    pub fn fill_pattern(&self) -> &[bool] {
        &self.fill_pattern
    }

    /// Channel spacing times the shortest repeat of the fill pattern.
    pub fn period(&self) -> f64 {
        let n = self.fill_pattern.len();
        let repeat = (1..=n)
            .find(|&p| {
                n.is_multiple_of(p)
                    && (0..n).all(|i| self.fill_pattern[i] == self.fill_pattern[i % p])
            })
            .unwrap_or(n);
        self.channel_spacing * repeat as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloquetMode {
    pub order: i64,
    /// Radians; ±π/2 for orders just past grazing.
    pub theta: f64,
    pub propagating: bool,
}

/// Diffraction orders with a real angle, `|sin θ_inc + nλ/P| ≤ 1`, sorted by
/// order. Grazing orders are listed but flagged non-propagating.
pub fn floquet_modes(cfg: &GratingConfig) -> Vec<FloquetMode> {
    let s0 = cfg.incidence.sin();
    let ratio = cfg.frequency.wavelength() / cfg.period();
    let n_lo = ((-1.0 - s0) / ratio).floor() as i64 - 1;
    let n_hi = ((1.0 - s0) / ratio).ceil() as i64 + 1;
    (n_lo..=n_hi)
        .filter_map(|n| {
            let s = s0 + n as f64 * ratio;
            (s.abs() <= 1.0 + 1e-12).then(|| FloquetMode {
                order: n,
                theta: s.clamp(-1.0, 1.0).asin(),
                propagating: s.abs() < 1.0 - cfg.grazing_tol,
            })
        })
        .collect()
}

/// Propagating (non-grazing) orders only.
pub fn propagating_modes(cfg: &GratingConfig) -> Vec<FloquetMode> {
    floquet_modes(cfg)
        .into_iter()
        .filter(|m| m.propagating)
        .collect()
}

/// Period whose first order leaves at `angle` under normal incidence,
/// `P = λ / sin(angle)`.
pub fn period_for_split(f: Frequency, angle: f64) -> Result<f64> {
    if !(angle > 0.0 && angle <= FRAC_PI_2) {
        return Err(Error::domain("split angle must lie in (0°, 90°]"));
    }
    Ok(f.wavelength() / angle.sin())
}

/// Two-state flat table: filled channels reflect with Γ = 1, empty ones
/// contribute nothing.
pub fn channel_table() -> UnitCellStateTable {
    let edges = [1e9, 1e13].map(|hz| Frequency::new(hz).expect("positive"));
    let mut samples = BTreeMap::new();
    for (name, g) in [(FILLED, 1.0), (EMPTY, 0.0)] {
        let c = Complex64::new(g, 0.0);
        samples.insert(name.to_string(), edges.iter().map(|&f| (f, c)).collect());
    }
    UnitCellStateTable::from_complex_samples(
        CellKind::Reflective,
        false,
        samples,
        CellMetadata::default(),
    )
    .expect("static table is valid")
}

/// Channel layout and fill states across an aperture of `aperture_width`.
pub fn channel_layout(cfg: &GratingConfig, aperture_width: f64) -> Result<(ArrayLayout, StateMap)> {
    if !(aperture_width >= cfg.period()) {
        return Err(Error::domain(format!(
            "aperture {:.3} mm is narrower than one period {:.3} mm",
            aperture_width * 1e3,
            cfg.period() * 1e3
        )));
    }
    let channels = ((aperture_width / cfg.channel_spacing) + 1e-9).floor() as usize;
    let layout = ArrayLayout::grid(channels, 1, cfg.channel_spacing)?;
    let states = (0..channels)
        .map(|k| {
            if cfg.fill_pattern[k % cfg.fill_pattern.len()] {
                FILLED.to_string()
            } else {
                EMPTY.to_string()
            }
        })
        .collect();
    let map = StateMap::from_states(layout.clone(), states)?;
    Ok((layout, map))
}

/// Finite-aperture scattered pattern of the grating. Every filled channel is
/// an equal-amplitude reflecting strip; lobe positions follow the
/// propagating orders, relative lobe powers are not modelled.
pub fn splitter_pattern(
    cfg: &GratingConfig,
    aperture_width: f64,
    element: &ElementModel,
    grid: &PatternGrid,
) -> Result<FarFieldPattern> {
    let (layout, map) = channel_layout(cfg, aperture_width)?;
    let phi = match grid {
        PatternGrid::Cut { phi, .. } => *phi,
        PatternGrid::Sphere { .. } => 0.0,
    };
    // scattered_pattern puts the specular beam at −incidence
    let incidence = Direction::in_cut(-cfg.incidence, phi)?;
    scattered_pattern(
        &layout,
        &map,
        &channel_table(),
        cfg.frequency,
        incidence,
        element,
        grid,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farfield::significant_lobes;
    use approx::assert_relative_eq;

    fn ghz(g: f64) -> Frequency {
        Frequency::from_ghz(g).unwrap()
    }

    fn cfg(period_mm: f64) -> GratingConfig {
        GratingConfig::with_period(period_mm * 1e-3, ghz(150.0), 0.0).unwrap()
    }

    #[test]
    fn mode_counts_at_150ghz() {
        assert_eq!(propagating_modes(&cfg(2.0)).len(), 1);
        assert_eq!(propagating_modes(&cfg(4.0)).len(), 3);
        assert_eq!(propagating_modes(&cfg(6.0)).len(), 5);
        let all = floquet_modes(&cfg(2.0));
        assert_eq!(all.iter().map(|m| m.order).collect::<Vec<_>>(), [-1, 0, 1]);
        assert!(!all[0].propagating && all[1].propagating && !all[2].propagating);
    }

    #[test]
    fn split_angles() {
        let lambda = ghz(150.0).wavelength();
        let four = propagating_modes(&cfg(4.0));
        assert_relative_eq!(four[2].theta, (lambda / 4e-3).asin(), epsilon = 1e-12);
        assert_relative_eq!(four[2].theta.to_degrees(), 29.98, epsilon = 0.01);
        assert_relative_eq!(four[0].theta, -four[2].theta, epsilon = 1e-15);
        let six = propagating_modes(&cfg(6.0));
        assert_relative_eq!(six[3].theta.to_degrees(), 19.46, epsilon = 0.01);
        // arcsin(2λ/P) with λ = 1.998616 mm
        assert_relative_eq!(six[4].theta, (2.0 * lambda / 6e-3).asin(), epsilon = 1e-12);
        assert_relative_eq!(six[4].theta.to_degrees(), 41.775, epsilon = 0.001);
    }

    #[test]
    fn fill_pattern_sets_period() {
        let c = GratingConfig::new(2e-3, vec![true, false, false], 0.0, ghz(150.0)).unwrap();
        assert_relative_eq!(c.period(), 6e-3);
        let c = GratingConfig::new(2e-3, vec![true, true], 0.0, ghz(150.0)).unwrap();
        assert_relative_eq!(c.period(), 2e-3);
        let c = GratingConfig::new(1e-3, vec![true, false, true, false], 0.0, ghz(150.0)).unwrap();
        assert_relative_eq!(c.period(), 2e-3);
        assert!(GratingConfig::new(1e-3, vec![false], 0.0, ghz(150.0)).is_err());
        assert!(GratingConfig::new(0.0, vec![true], 0.0, ghz(150.0)).is_err());
    }

    #[test]
    fn period_for_split_examples() {
        let f = ghz(150.0);
        assert_relative_eq!(
            period_for_split(f, 30f64.to_radians()).unwrap() * 1e3,
            3.997,
            epsilon = 1e-3
        );
        assert_relative_eq!(
            period_for_split(f, FRAC_PI_2).unwrap(),
            f.wavelength(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            period_for_split(f, (1.0f64 / 3.0).asin()).unwrap() * 1e3,
            5.996,
            epsilon = 1e-3
        );
        assert!(period_for_split(f, 0.0).is_err());
    }

    #[test]
    fn oblique_incidence_shifts_orders() {
        let c = GratingConfig::with_period(4e-3, ghz(150.0), 10f64.to_radians()).unwrap();
        let modes = propagating_modes(&c);
        let zero = modes.iter().find(|m| m.order == 0).unwrap();
        assert_relative_eq!(zero.theta, 10f64.to_radians(), epsilon = 1e-12);
    }

    #[test]
    fn splitter_lobes_at_mode_angles() {
        let grid = PatternGrid::cut_deg(0.0, 0.05).unwrap();
        let el = ElementModel::default();
        for (p, expected) in [(2.0, 1usize), (4.0, 3), (6.0, 5)] {
            let c = cfg(p);
            let pat = splitter_pattern(&c, 24e-3, &el, &grid).unwrap();
            let lobes = significant_lobes(&pat, 6.0).unwrap();
            let modes = propagating_modes(&c);
            assert_eq!(lobes.len(), expected, "P = {p} mm: {lobes:?}");
            for (lobe, mode) in lobes.iter().zip(&modes) {
                assert!(
                    (lobe.angle - mode.theta).abs().to_degrees() < 0.5,
                    "P = {p}: {lobe:?} vs {mode:?}"
                );
            }
        }
    }

    #[test]
    fn narrow_aperture_rejected() {
        let grid = PatternGrid::cut_deg(0.0, 1.0).unwrap();
        assert!(splitter_pattern(&cfg(6.0), 5e-3, &ElementModel::default(), &grid).is_err());
    }

    proptest::proptest! {
        #[test]
        fn normal_incidence_counts_are_odd(p_over_lambda in 0.3f64..20.0) {
            let f = ghz(150.0);
            let c = GratingConfig::with_period(p_over_lambda * f.wavelength(), f, 0.0).unwrap();
            proptest::prop_assert_eq!(propagating_modes(&c).len() % 2, 1);
        }

        #[test]
        fn counts_monotone(p in 0.5e-3f64..10e-3, dp in 0.0f64..5e-3, g in 110.0f64..170.0, dg in 0.0f64..60.0) {
            let at = |period: f64, ghz_: f64| propagating_modes(&GratingConfig::with_period(period, ghz(ghz_), 0.0).unwrap()).len();
            proptest::prop_assert!(at(p + dp, g) >= at(p, g));
            proptest::prop_assert!(at(p, g + dg) >= at(p, g));
        }

        #[test]
        fn split_round_trip(angle in 0.05f64..1.4) {
            let f = ghz(150.0);
            let c = GratingConfig::with_period(period_for_split(f, angle).unwrap(), f, 0.0).unwrap();
            let first = floquet_modes(&c).into_iter().find(|m| m.order == 1).unwrap();
            proptest::prop_assert!((first.theta - angle).abs() < 1e-9);
        }
    }
}
