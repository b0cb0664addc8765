//! Build a scenario from TOML text instead of a preset, then solve one cell.
//!
//! cargo run --example custom_scenario

use waveplate::cli::cmd_solve;
use waveplate::scenario::Scenario;

const TOML: &str = r#"
schema = "waveplate-scenario/1"
name = "reduced-linear-pump"
description = "Reduced scheme, linearly polarized pump at 30 degrees"

[scheme]
kind = "rb87_reduced"

[decay]
gamma_a = { value = 5.75, unit = "MHz" }
gamma_b = { value = 3.45, unit = "MHz" }
gamma_g = { value = 0.1, unit = "MHz" }

[pump]
rabi = { value = 40.0, unit = "gamma" }
detuning = { value = -500.0, unit = "MHz" }
polarization = { linear_deg = 30.0 }
wavelength_nm = 795.0

[signal]
rabi = { value = 0.1, unit = "gamma" }
detuning = { value = 0.0, unit = "gamma" }
polarization = "y"
wavelength_nm = 1323.0

[medium]
n_atom_per_cm3 = 5e11
length_cm = 7.5

[sweep]
detuning_min = { value = -200.0, unit = "gamma" }
detuning_max = { value = 200.0, unit = "gamma" }
points = 41
grid = { kind = "gauss_hermite", points = 24 }
"#;

fn main() -> waveplate::Result<()> {
    let s = Scenario::from_toml(TOML)?;
    println!("{} ({} levels): {}", s.name, s.model.scheme.len(), s.description);
    let report = cmd_solve(&s, 87.0, 0.0)?;
    print!("{report}");
    println!("excited population {:.3e}", report.excited_population());
    Ok(())
}
