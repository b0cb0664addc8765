//! Rotating-frame Hamiltonian, vectorized master equation and its solvers.

pub mod density;
pub mod fields;
pub mod hamiltonian;
pub mod liouvillian;
pub mod solve;

pub use density::{DensityMatrix, Tolerances};
pub use fields::{FieldSet, FieldSpec, Polarization};
pub use hamiltonian::{build_hamiltonian, level_energies};
pub use liouvillian::{vectorize, Liouvillian, Representation, StateLayout};
pub use solve::{evolve, residual, steady_state, steady_state_with, Route};

use crate::atom::{DecayNetwork, LevelScheme, TransitionTable};
use crate::error::Result;

/// A scheme with its transition table and decay network, built once and
/// shared by every solve.
#[derive(Clone, Debug)]
pub struct Model {
    pub scheme: LevelScheme,
    pub transitions: TransitionTable,
    pub decay: DecayNetwork,
    pub representation: Representation,
}

impl Model {
    pub fn new(scheme: LevelScheme) -> Result<Self> {
        let transitions = TransitionTable::from_scheme(&scheme)?;
        let decay = DecayNetwork::from_scheme(&scheme)?;
        Ok(Model { scheme, transitions, decay, representation: Representation::default() })
    }

    pub fn liouvillian(&self, fields: &FieldSet, shifts: (f64, f64)) -> Result<Liouvillian> {
        let h = build_hamiltonian(&self.scheme, &self.transitions, fields, shifts)?;
        vectorize(&h, &self.scheme, &self.decay, self.representation)
    }

    pub fn steady_state(&self, fields: &FieldSet, shifts: (f64, f64)) -> Result<DensityMatrix> {
        steady_state(&self.liouvillian(fields, shifts)?)
    }
}
