//! Lumped parallel-RC switch models (RF-SOI CMOS, or any two-state device
//! described by an `(R, C)` pair per state) and their figures of merit.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::primitives::Frequency;

/// Default reference impedance for the series two-port, ohms.
pub const DEFAULT_Z0: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwitchState {
    On,
    Off,
}

/// Parallel-RC equivalent circuit for each switch state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchCircuit {
    r_on: f64,
    c_on: f64,
    r_off: f64,
    c_off: f64,
}

impl SwitchCircuit {
    pub fn new(r_on: f64, c_on: f64, r_off: f64, c_off: f64) -> Result<Self> {
        for (name, v) in [
            ("r_on", r_on),
            ("c_on", c_on),
            ("r_off", r_off),
            ("c_off", c_off),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if r_off <= r_on {
            return Err(Error::domain("r_off must exceed r_on"));
        }
        Ok(SwitchCircuit {
            r_on,
            c_on,
            r_off,
            c_off,
        })
    }

    /// 45 nm RF-SOI CMOS switch: 6.13 Ω / 18.5 fF ON, 4300 Ω / 19.0 fF OFF.
    pub fn rf_soi_45nm() -> Self {
        SwitchCircuit {
            r_on: 6.13,
            c_on: 18.5e-15,
            r_off: 4300.0,
            c_off: 19.0e-15,
        }
    }

    pub fn r_on(&self) -> f64 {
        self.r_on
    }

    pub fn c_on(&self) -> f64 {
        self.c_on
    }

    pub fn r_off(&self) -> f64 {
        self.r_off
    }

    pub fn c_off(&self) -> f64 {
        self.c_off
    }

    pub fn rc(&self, state: SwitchState) -> (f64, f64) {
        match state {
            SwitchState::On => (self.r_on, self.c_on),
            SwitchState::Off => (self.r_off, self.c_off),
        }
    }

    /// Z = R / (1 + jωRC) for the selected state.
    pub fn impedance(&self, state: SwitchState, f: Frequency) -> Complex64 {
        let (r, c) = self.rc(state);
        parallel_rc(r, c, f)
    }

    /// f_c = 1 / (2π·R_on·C_off).
    pub fn cutoff_frequency(&self) -> Frequency {
        Frequency::new(1.0 / (2.0 * PI * self.r_on * self.c_off))
            .expect("positive circuit values give a positive cutoff")
    }

    /// Insertion loss (ON) and isolation (OFF) in dB for the switch mounted
    /// in series in a `z0` line.
    pub fn insertion_loss_isolation(&self, f: Frequency, z0: f64) -> Result<SwitchLosses> {
        if !(z0.is_finite() && z0 > 0.0) {
            return Err(Error::domain(format!("z0 must be positive, got {z0}")));
        }
        Ok(SwitchLosses {
            insertion_loss_db: series_loss_db(self.impedance(SwitchState::On, f), z0),
            isolation_db: series_loss_db(self.impedance(SwitchState::Off, f), z0),
        })
    }
}

/// Parallel RC impedance. `c = 0` is the open-capacitor limit and returns `R`.
pub fn parallel_rc(r: f64, c: f64, f: Frequency) -> Complex64 {
    let wrc = f.angular() * r * c;
    Complex64::new(r, 0.0) / Complex64::new(1.0, wrc)
}

/// S21 of an impedance `z` in series between two `z0` ports.
pub fn series_s21(z: Complex64, z0: f64) -> Complex64 {
    Complex64::new(2.0 * z0, 0.0) / (Complex64::new(2.0 * z0, 0.0) + z)
}

/// −20·log10|S21| for a series impedance. Infinite impedance gives infinite loss.
pub fn series_loss_db(z: Complex64, z0: f64) -> f64 {
    if !z.norm().is_finite() {
        return f64::INFINITY;
    }
    -20.0 * series_s21(z, z0).norm().log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwitchLosses {
    pub insertion_loss_db: f64,
    pub isolation_db: f64,
}
