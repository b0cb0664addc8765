//! Co- versus counter-propagating beams: the α₋ absorption feature.
//!
//! cargo run --release --example geometry_contrast [velocities]
//!
//! Below roughly 80 velocity nodes the co-propagating average is too coarse
//! and its feature breaks up into spikes.

use waveplate::doppler::{absorption_feature, linspace, sweep, Geometry, SweepOptions, VelocityGrid};
use waveplate::scenario::Scenario;

fn main() -> waveplate::Result<()> {
    let n_vel: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let s = Scenario::preset("fig7-full")?;
    let mut spec = s.sweep_spec();
    spec.detunings = linspace(-900.0, 500.0, 96);
    spec.grid = VelocityGrid::uniform(n_vel, s.grid.temperature, s.grid.mass, s.grid.span)?;

    for g in [Geometry::CounterPropagating, Geometry::CoPropagating] {
        spec.geometry = g;
        let r = sweep(&spec, &SweepOptions::default())?;
        let am: Vec<f64> = r.iter().map(|o| o.alpha_minus).collect();
        match absorption_feature(&spec.detunings, &am) {
            Some(f) => println!("{g:>8}: alpha_minus peak {:.3} at {:.1}, FWHM {:.1} gamma_a", f.depth, f.center, f.fwhm),
            None => println!("{g:>8}: no feature"),
        }
    }
    Ok(())
}
