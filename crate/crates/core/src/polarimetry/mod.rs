//! Signal response, Jones optics and LCR polarimetry.

pub mod basis;
pub mod invert;
pub mod jones;
pub mod lcr;
pub mod response;

pub use basis::{ideal_probe_state, pump_coupling, rotated_basis};
pub use invert::{invert_least_squares, invert_scan, Inversion};
pub use jones::{chain_intensity, detector_intensity, propagate_cell, AnalyzerChain, JonesMatrix, JonesVector};
pub use lcr::{synthesize_scan, synthesize_voltage_scan, triangular_voltages, LcrCalibration, LcrScan};
pub use response::{coherence_sum, response_from_density, MediumParams, OpticalResponse};
