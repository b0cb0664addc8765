//! The embedded effective-branching table next to the one built from
//! isotropic dipole strengths, plus a CSV export.
//!
//! cargo run --example branching_table [out.csv]

use waveplate::atom::branching::{rb87_cascade_from_dipole, HyperfineSublevel};
use waveplate::atom::load_table1;

fn main() -> waveplate::Result<()> {
    let printed = load_table1();
    let derived = rb87_cascade_from_dipole()?;

    let find = |term, f, mf| HyperfineSublevel { term, f, mf };
    println!("{:<12} {:<12} {:>9} {:>9}", "ground", "upper", "printed", "dipole");
    for (r, g) in printed.rows().iter().enumerate() {
        for (c, u) in printed.cols().iter().enumerate() {
            let p = printed.get(r, c);
            let d = derived
                .fraction(&find("5S1/2", g.f().unwrap(), g.mf.unwrap()), &find("6S1/2", u.f().unwrap(), u.mf.unwrap()))
                .unwrap_or(f64::NAN);
            if p != 0.0 || d.abs() > 1e-12 {
                println!("{:<12} {:<12} {p:9.6} {d:9.6}", g.to_string(), u.to_string());
            }
        }
    }
    let sums = printed.column_sums();
    println!("column sums: {}", sums.iter().map(|s| format!("{s:.5}")).collect::<Vec<_>>().join(" "));
    println!("reflection symmetric: {}", printed.is_reflection_symmetric());

    if let Some(path) = std::env::args().nth(1) {
        printed.write_csv(std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
