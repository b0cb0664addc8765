//! Forward-model an LCR voltage ramp, then recover (α_d, φ_d) from it two ways.
//!
//! cargo run --example lcr_inversion

use waveplate::polarimetry::{
    invert_least_squares, invert_scan, synthesize_voltage_scan, triangular_voltages, LcrCalibration,
};

fn main() -> waveplate::Result<()> {
    let (e0, alpha_minus, alpha_d, phi_d) = (2.0, 0.15, 0.2, 170f64.to_radians());
    // Retardance falls from π at 2 V to 0 at 8 V.
    let cal = LcrCalibration::new(vec![(2.0, 180.0), (8.0, 0.0)])?;
    let volts = triangular_voltages(10.0, 0.0, 51);
    let scan = synthesize_voltage_scan(e0, alpha_minus, alpha_d, phi_d, &volts, &cal);

    println!("{:>6} {:>9} {:>10}", "volts", "theta", "intensity");
    for (v, (t, i)) in volts.iter().zip(&scan.samples).step_by(10) {
        println!("{v:6.2} {:9.4} {i:10.6}", t);
    }

    let picks = [scan.samples[10], scan.samples[25], scan.samples[40]];
    let three = invert_scan(picks, e0, alpha_minus)?;
    println!(
        "3-point:       alpha_d {:.6}, phi_d {:.4} deg (or {:.4}), residual {:.1e}",
        three.alpha_d,
        three.phi_d.to_degrees(),
        360.0 - three.phi_d.to_degrees(),
        three.residual
    );

    // E0 unknown: fit the overall scale too.
    let all = invert_least_squares(&scan.samples, None, 0.0)?;
    println!(
        "least squares: alpha_d {:.6}, phi_d {:.4} deg, fitted E0 e^(-2 alpha_m) {:.6} (true {:.6})",
        all.alpha_d,
        all.phi_d.to_degrees(),
        all.fitted_scale,
        e0 * (-2.0 * alpha_minus).exp()
    );

    // Retardances that coincide carry no information.
    match invert_scan([scan.samples[10], scan.samples[10], scan.samples[40]], e0, alpha_minus) {
        Ok(_) => println!("degenerate triple unexpectedly inverted"),
        Err(e) => println!("degenerate triple rejected: {e}"),
    }
    Ok(())
}
