//! Probe polarization after a phase shift on the bright leg of the rotated
//! basis, for a few pump polarizations.
//!
//! cargo run --example probe_polarization

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use waveplate::polarimetry::jones::overlap;
use waveplate::polarimetry::{ideal_probe_state, JonesVector};

fn describe(v: &JonesVector) -> String {
    let named = [
        ("x", JonesVector::x_hat()),
        ("y", JonesVector::y_hat()),
        ("sigma+", JonesVector::sigma_plus()),
        ("sigma-", JonesVector::sigma_minus()),
    ];
    let (name, o) = named
        .iter()
        .map(|(n, b)| (*n, overlap(v, b)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    format!("closest {name:<6} |overlap| {o:.6}")
}

fn main() -> waveplate::Result<()> {
    let i = C64::i();
    let one = C64::new(1.0, 0.0);
    let pumps = [
        ("linear 45 deg", i / (i - 1.0), one / (i - 1.0)),
        ("sigma+ only", one, C64::new(0.0, 0.0)),
        ("equal real", one / 2f64.sqrt(), one / 2f64.sqrt()),
    ];
    for (name, a, b) in pumps {
        println!("pump {name}: alpha = {a:.3}, beta = {b:.3}");
        for phi in [0.0, PI / 2.0, PI, 3.0 * PI / 2.0] {
            let p = ideal_probe_state(a, b, phi)?;
            println!("  phi = {:5.1} deg  x = {:.3}  y = {:.3}  {}", phi.to_degrees(), p.x(), p.y(), describe(&p));
        }
    }
    Ok(())
}
