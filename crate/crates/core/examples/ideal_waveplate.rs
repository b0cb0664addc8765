//! Four-level ladder without Doppler averaging: differential phase and
//! absorption of the probe against signal detuning.
//!
//! cargo run --release --example ideal_waveplate [pump_rabi]

use waveplate::cli::scenario_response;
use waveplate::scenario::Scenario;

fn main() -> waveplate::Result<()> {
    let mut s = Scenario::preset("fig1-ideal")?;
    if let Some(r) = std::env::args().nth(1) {
        s.fields.pump.rabi = r.parse().map_err(|_| waveplate::Error::Config(format!("bad rabi '{r}'")))?;
    }
    println!("# pump rabi {} detuning {} (units of gamma_a)", s.fields.pump.rabi, s.fields.pump.detuning);
    println!("{:>9} {:>10} {:>10} {:>10}", "delta_s", "phi_d_deg", "alpha_d", "alpha_m");

    // The two-photon resonance sits near delta_s = -delta_c.
    let center = -s.fields.pump.detuning;
    for i in -20..=20 {
        let ds = center + 0.25 * i as f64;
        let r = scenario_response(&s, ds)?;
        println!("{ds:9.2} {:10.3} {:10.5} {:10.5}", r.phi_d_deg_wrapped(), r.alpha_d(), r.alpha_minus);
    }
    Ok(())
}
