//! Thermal averaging over atomic velocities.

pub mod grid;
pub mod sweep;

pub use grid::{doppler_shifts, v_rms, wavevector, Geometry, VelocityGrid};
pub use sweep::{absorption_feature, linspace, sweep, Feature, SweepOptions, SweepSpec, SweepTable};
