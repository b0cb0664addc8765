//! Level scheme, dipole strengths and decay branching for the 87Rb ladder.

pub mod angular;
pub mod branching;
pub mod decay;
pub mod levels;
pub mod strength;

pub use branching::{effective_branching, load_table1, BranchingTable};
pub use decay::{decay_distribution, DecayNetwork};
pub use levels::{CascadeRoute, DecayParams, LevelScheme, Manifold, SublevelId, Tier};
pub use strength::{relative_strength, DipoleLeg, FieldRole, Transition, TransitionTable};
