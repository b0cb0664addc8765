pub mod atom;
pub mod cli;
pub mod doppler;
pub mod error;
pub mod liouville;
pub mod polarimetry;
pub mod scenario;

pub use error::{Error, Result};
