//! Pump-defined bright/dark basis of the four-level ladder and the ideal
//! probe polarization it produces.

use num_complex::Complex64 as C64;

use super::jones::JonesVector;
use crate::error::{Error, Result};

fn check_norm(alpha: C64, beta: C64) -> Result<()> {
    let n = alpha.norm_sqr() + beta.norm_sqr();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("|α|² + |β|² = {n}, expected 1")));
    }
    Ok(())
}

/// Coefficients on (|2⟩, |3⟩) of the state the pump α·σ+ + β·σ- couples to
/// and of its orthogonal dark partner: |+⟩ = α*|2⟩ + β*|3⟩, |−⟩ = α|3⟩ − β|2⟩.
pub fn rotated_basis(alpha: C64, beta: C64) -> Result<([C64; 2], [C64; 2])> {
    check_norm(alpha, beta)?;
    Ok(([alpha.conj(), beta.conj()], [-beta, alpha]))
}

/// ⟨state| V |1⟩ for the pump α·σ+ + β·σ-, up to the common Rabi factor.
pub fn pump_coupling(alpha: C64, beta: C64, state: [C64; 2]) -> C64 {
    state[0].conj() * alpha.conj() + state[1].conj() * beta.conj()
}

/// Probe polarization leaving an ideal medium that shifts the |+⟩ arm by φ,
/// for a y-polarized input:
/// p = i[((|α|²+β*α)e^{iφ} + (|β|²−β*α))σ- + ((|β|²+α*β)e^{iφ} + (|α|²−α*β))σ+]/√2.
pub fn ideal_probe_state(alpha: C64, beta: C64, phi: f64) -> Result<JonesVector> {
    check_norm(alpha, beta)?;
    let e = C64::new(0.0, phi).exp();
    let (aa, bb) = (alpha.norm_sqr(), beta.norm_sqr());
    let minus = (beta.conj() * alpha + aa) * e + (bb - beta.conj() * alpha);
    let plus = (alpha.conj() * beta + bb) * e + (aa - alpha.conj() * beta);
    let k = C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    Ok(JonesVector::from_circular(plus * k, minus * k))
}
