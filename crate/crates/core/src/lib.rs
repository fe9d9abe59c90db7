//! Synthesis and far-field prediction for 1-bit reconfigurable intelligent
//! surfaces in the D-band (110–170 GHz).
//!
//! The crate is organised bottom-up:
//!
//! - [`primitives`]: frequency, direction, complex coefficient and planar layout types
//! - [`switchmodel`]: parallel-RC switch equivalent circuits and their figures of merit
//! - [`unitcell`]: per-state unit-cell responses loaded from CSV, plus cell metrics
//! - [`synthesis`]: ideal phase profiles and nearest-state quantization
//! - [`farfield`]: scattered/transmitted patterns, directivity, pattern metrics, path loss
//! - [`grating`]: Floquet-mode analysis of the reconfigurable strip-grating splitter
//! - [`scenario`] and [`io`]: configuration files and deterministic file outputs for the CLI
//!
//! All quantities are SI internally (Hz, m, rad). GHz, mm and degrees only
//! appear at the I/O boundary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod farfield;
pub mod grating;
pub mod io;
pub mod primitives;
pub mod scenario;
pub mod switchmodel;
pub mod synthesis;
pub mod unitcell;
pub mod units;

pub use error::{Error, Result};
pub use primitives::{ArrayLayout, ComplexCoefficient, Direction, Frequency, SPEED_OF_LIGHT};
