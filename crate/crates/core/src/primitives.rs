//! Units, geometry, and complex-coefficient primitives.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Wrap an angle in radians to (−π, π].
pub fn wrap_phase(rad: f64) -> f64 {
    let y = rad.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Wrap an angle in degrees to (−180, 180].
pub fn wrap_deg(deg: f64) -> f64 {
    let y = deg.rem_euclid(360.0);
    if y > 180.0 {
        y - 360.0
    } else {
        y
    }
}

/// A strictly positive frequency in hertz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Frequency(f64);

impl Frequency {
    pub fn new(hz: f64) -> Result<Self> {
        if hz.is_finite() && hz > 0.0 {
            Ok(Frequency(hz))
        } else {
            Err(Error::domain(format!(
                "frequency must be positive, got {hz} Hz"
            )))
        }
    }

    pub fn from_ghz(ghz: f64) -> Result<Self> {
        Self::new(ghz * 1e9)
    }

    pub fn hz(self) -> f64 {
        self.0
    }

    pub fn ghz(self) -> f64 {
        self.0 / 1e9
    }

    /// Free-space wavelength λ = c/f in meters.
    pub fn wavelength(self) -> f64 {
        SPEED_OF_LIGHT / self.0
    }

    /// Free-space wavenumber k0 = 2π/λ in rad/m.
    pub fn wavenumber(self) -> f64 {
        2.0 * PI / self.wavelength()
    }

    pub fn angular(self) -> f64 {
        2.0 * PI * self.0
    }
}

/// Free-space wavelength in meters. Fails on non-positive input.
pub fn wavelength(hz: f64) -> Result<f64> {
    Frequency::new(hz).map(Frequency::wavelength)
}

/// Observation or steering direction on the unit sphere.
///
/// `theta` is the polar angle from broadside, `phi` the azimuth of the cut.
/// Direction cosines are computed once at construction so that a signed
/// in-cut angle and its mirror produce exactly negated `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
    u: f64,
    v: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) || !(0.0..=PI).contains(&theta) {
            return Err(Error::domain(format!(
                "theta must lie in [0, π], got {theta} rad"
            )));
        }
        let s = theta.sin();
        Self::checked(theta, phi, s * phi.cos(), s * phi.sin())
    }

    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Result<Self> {
        Self::new(theta_deg.to_radians(), phi_deg.to_radians())
    }

    /// Direction at signed angle `theta` inside the plane of azimuth `phi`.
    /// Negative angles lie on the `phi + π` half of the cut.
    pub fn in_cut(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) || theta.abs() > PI {
            return Err(Error::domain(format!(
                "cut angle must lie in [−π, π], got {theta} rad"
            )));
        }
        let s = theta.sin();
        let (u, v) = (s * phi.cos(), s * phi.sin());
        let (polar, azimuth) = if theta < 0.0 {
            (-theta, phi + PI)
        } else {
            (theta, phi)
        };
        Self::checked(polar, azimuth, u, v)
    }

    pub fn broadside() -> Self {
        Direction {
            theta: 0.0,
            phi: 0.0,
            u: 0.0,
            v: 0.0,
        }
    }

    fn checked(theta: f64, phi: f64, u: f64, v: f64) -> Result<Self> {
        if u * u + v * v > 1.0 + 1e-12 {
            return Err(Error::domain("direction cosines violate u² + v² ≤ 1"));
        }
        Ok(Direction { theta, phi, u, v })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn cos_theta(&self) -> f64 {
        self.theta.cos()
    }
}

/// Reflection or transmission coefficient in polar form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexCoefficient {
    magnitude: f64,
    phase: f64,
}

impl ComplexCoefficient {
    pub fn new(magnitude: f64, phase: f64) -> Result<Self> {
        if !(magnitude.is_finite() && magnitude >= 0.0 && phase.is_finite()) {
            return Err(Error::domain(format!(
                "invalid coefficient magnitude {magnitude} / phase {phase}"
            )));
        }
        Ok(ComplexCoefficient {
            magnitude,
            phase: wrap_phase(phase),
        })
    }

    pub fn from_complex(z: Complex64) -> Self {
        ComplexCoefficient {
            magnitude: z.norm(),
            phase: wrap_phase(z.arg()),
        }
    }

    /// From the I/O form: magnitude in dB (20·log10) and phase in degrees.
    pub fn from_db_deg(mag_db: f64, phase_deg: f64) -> Result<Self> {
        Self::new(10f64.powf(mag_db / 20.0), phase_deg.to_radians())
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn mag_db(&self) -> f64 {
        20.0 * self.magnitude.log10()
    }

    pub fn phase_deg(&self) -> f64 {
        self.phase.to_degrees()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
}

/// Regular planar grid of elements centred on the origin.
///
/// Elements are indexed row-major with `ix` running fastest:
/// `index = iy * nx + ix`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayLayout {
    nx: usize,
    ny: usize,
    pitch_x: f64,
    pitch_y: f64,
    positions: Vec<(f64, f64)>,
}

impl ArrayLayout {
    /// Square-pitch grid.
    pub fn grid(nx: usize, ny: usize, pitch: f64) -> Result<Self> {
        Self::rect_grid(nx, ny, pitch, pitch)
    }

    pub fn rect_grid(nx: usize, ny: usize, pitch_x: f64, pitch_y: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::domain("element counts must be at least 1"));
        }
        if !(pitch_x > 0.0 && pitch_y > 0.0 && pitch_x.is_finite() && pitch_y.is_finite()) {
            return Err(Error::domain("pitch must be positive"));
        }
        let cx = (nx as f64 - 1.0) / 2.0;
        let cy = (ny as f64 - 1.0) / 2.0;
        let positions = (0..ny)
            .flat_map(|iy| {
                (0..nx).map(move |ix| ((ix as f64 - cx) * pitch_x, (iy as f64 - cy) * pitch_y))
            })
            .collect();
        Ok(ArrayLayout {
            nx,
            ny,
            pitch_x,
            pitch_y,
            positions,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn pitch_x(&self) -> f64 {
        self.pitch_x
    }

    pub fn pitch_y(&self) -> f64 {
        self.pitch_y
    }

    pub fn positions(&self) -> &[(f64, f64)] {
        &self.positions
    }

    pub fn position(&self, ix: usize, iy: usize) -> (f64, f64) {
        self.positions[self.index(ix, iy)]
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// `(ix, iy)` of a flat element index.
    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index % self.nx, index / self.nx)
    }

    /// Aperture extent `(nx·pitch_x, ny·pitch_y)` in meters.
    pub fn aperture(&self) -> (f64, f64) {
        (self.nx as f64 * self.pitch_x, self.ny as f64 * self.pitch_y)
    }

    pub fn area(&self) -> f64 {
        let (w, h) = self.aperture();
        w * h
    }

    pub fn cell_area(&self) -> f64 {
        self.pitch_x * self.pitch_y
    }

    /// Largest pitch in wavelengths at `f`.
    pub fn pitch_in_wavelengths(&self, f: Frequency) -> f64 {
        self.pitch_x.max(self.pitch_y) / f.wavelength()
    }

    /// True when either pitch exceeds λ/2, i.e. grating lobes can enter
    /// visible space for some scan angle.
    pub fn grating_lobe_capable(&self, f: Frequency) -> bool {
        self.pitch_in_wavelengths(f) > 0.5
    }
}
