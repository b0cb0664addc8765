use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::fields::FieldSet;
use crate::atom::{FieldRole, LevelScheme, Tier, TransitionTable};
use crate::error::{Error, Result};

/// Rotating-frame energy of every level for the given detunings. The pump
/// frame puts the intermediate tier at -(δ_c + Δδ_c), the two-photon frame
/// puts the upper tier at -(δ_c + Δδ_c + δ_s + Δδ_s); hyperfine offsets add on top.
pub fn level_energies(scheme: &LevelScheme, fields: &FieldSet, shifts: (f64, f64)) -> Vec<f64> {
    let dc = fields.pump.detuning + shifts.0;
    let ds = fields.signal.detuning + shifts.1;
    (0..scheme.len())
        .map(|i| {
            let base = match scheme.level(i).tier() {
                Tier::Ground | Tier::Reservoir => 0.0,
                Tier::Intermediate => -dc,
                Tier::Upper => -(dc + ds),
            };
            base + scheme.energy_offset(i)
        })
        .collect()
}

/// RWA Hamiltonian (ħ = 1, units of Γ_a). `shifts` are the Doppler shifts
/// (Δδ_c, Δδ_s) added to the pump and signal detunings.
///
/// The coupling between `upper` and `lower` is (Ω/2)·a·ε_q*, where ε_q is
/// the field's amplitude on the spherical component of the transition.
pub fn build_hamiltonian(
    scheme: &LevelScheme,
    transitions: &TransitionTable,
    fields: &FieldSet,
    shifts: (f64, f64),
) -> Result<DMatrix<C64>> {
    fields.validate()?;
    let n = scheme.len();
    let mut h = DMatrix::zeros(n, n);
    for (i, e) in level_energies(scheme, fields, shifts).into_iter().enumerate() {
        h[(i, i)] = C64::new(e, 0.0);
    }
    for role in [FieldRole::Pump, FieldRole::Signal] {
        let f = fields.get(role);
        for t in transitions.for_field(role) {
            let (u, l) = (t.upper_index, t.lower_index);
            if u >= n || l >= n || scheme.level(u) != t.upper || scheme.level(l) != t.lower {
                return Err(Error::UnknownLevel(format!("{} -> {}", t.upper, t.lower)));
            }
            let g = f.polarization.component(t.q).conj() * (0.5 * f.rabi * t.strength);
            h[(u, l)] += g;
            h[(l, u)] += g.conj();
        }
    }
    Ok(h)
}
