//! Doppler-averaged sweep of a preset, written as CSV.
//!
//! cargo run --release --example doppler_sweep -- [preset] [detunings] [velocities] [out.csv]
//!
//! Defaults to a coarse fig7-full run (64 x 100) that takes a few seconds
//! per core.

use std::fs::File;
use std::io::BufWriter;
use std::time::Instant;

use waveplate::doppler::{linspace, sweep, SweepOptions, VelocityGrid};
use waveplate::scenario::Scenario;

fn main() -> waveplate::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let preset = args.first().map(String::as_str).unwrap_or("fig7-full");
    let n_det: usize = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(64);
    let n_vel: usize = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(100);
    let out = args.get(3).cloned().unwrap_or_else(|| format!("{preset}.csv"));

    let s = Scenario::preset(preset)?;
    let mut spec = s.sweep_spec();
    spec.detunings = linspace(s.detunings[0], *s.detunings.last().unwrap(), n_det);
    if s.grid.len() > 1 {
        spec.grid = VelocityGrid::uniform(n_vel, s.grid.temperature, s.grid.mass, s.grid.span)?;
    }

    let t0 = Instant::now();
    let r = sweep(&spec, &SweepOptions { progress: true, ..Default::default() })?;
    eprintln!("{} x {} cells in {:.1} s", spec.detunings.len(), spec.grid.len(), t0.elapsed().as_secs_f64());

    waveplate::doppler::sweep::write_csv(BufWriter::new(File::create(&out)?), &spec.detunings, &r)?;

    let (i, best) = r
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.phi_d().abs().total_cmp(&b.1.phi_d().abs()))
        .expect("non-empty sweep");
    println!(
        "wrote {out}; largest |phi_d| = {:.1} deg (alpha_d {:.3}) at delta_s = {:.1}",
        best.phi_d().abs().to_degrees(),
        best.alpha_d(),
        spec.detunings[i]
    );
    Ok(())
}
