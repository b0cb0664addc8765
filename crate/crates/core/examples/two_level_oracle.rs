//! Two-level atom against the textbook saturation formula.
//!
//! cargo run --example two_level_oracle

use waveplate::atom::{CascadeRoute, DecayParams, FieldRole, LevelScheme};
use waveplate::liouville::{FieldSet, FieldSpec, Model, Polarization};

fn main() -> waveplate::Result<()> {
    let gamma = 1.0;
    let d = DecayParams { gamma_a: gamma, gamma_g: 0.0, cascade: CascadeRoute::None, ..Default::default() };
    let model = Model::new(LevelScheme::two_level(d)?)?;

    println!("{:>6} {:>6} {:>14} {:>14} {:>9}", "rabi", "delta", "rho_ee", "analytic", "error");
    for (om, de) in [(0.1, 0.0), (1.0, 0.0), (1.0, 2.0), (5.0, 0.0), (5.0, -3.0), (20.0, 10.0)] {
        let f = FieldSet {
            pump: FieldSpec { role: FieldRole::Pump, rabi: om, detuning: de, polarization: Polarization::sigma_plus(), k: 0.0 },
            signal: FieldSpec { role: FieldRole::Signal, rabi: 0.0, detuning: 0.0, polarization: Polarization::y(), k: 0.0 },
        };
        let rho = model.steady_state(&f, (0.0, 0.0))?;
        let exact = 0.25 * om * om / (de * de + 0.25 * gamma * gamma + 0.5 * om * om);
        let got = rho.population(1);
        println!("{om:6.1} {de:6.1} {got:14.10} {exact:14.10} {:9.1e}", (got - exact).abs());
    }
    Ok(())
}
