//! Vectorized master equation of one velocity class, written as CSV with a
//! slot legend, plus the steady state it yields.
//!
//! cargo run --example liouvillian_dump [preset] [out.csv]

use waveplate::doppler::doppler_shifts;
use waveplate::liouville::{residual, steady_state};
use waveplate::scenario::Scenario;

fn main() -> waveplate::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let preset = args.first().map(String::as_str).unwrap_or("fig1-ideal");
    let s = Scenario::preset(preset)?;
    let shifts = doppler_shifts(150.0, s.geometry, s.fields.pump.k, s.fields.signal.k);
    let l = s.model.liouvillian(&s.fields, shifts)?;

    println!("{}: {} levels, {} real unknowns, |M|inf = {:.3}", s.name, s.model.scheme.len(), l.dim(), l.norm_inf());
    let rho = steady_state(&l)?;
    println!("steady-state residual {:.2e}", residual(&l, &rho));
    for (i, lvl) in s.model.scheme.levels().iter().enumerate() {
        println!("  {:<12} {:.6e}", lvl.to_string(), rho.population(i));
    }

    if let Some(path) = args.get(1) {
        l.write_csv(&s.model.scheme, std::fs::File::create(path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
