//! Phase and attenuation of the two circular signal components.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::atom::{FieldRole, TransitionTable};
use crate::error::{Error, Result};
use crate::liouville::{DensityMatrix, Polarization};

/// Vapor-cell parameters entering β±.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MediumParams {
    /// Atoms per cm³.
    pub n_atom: f64,
    /// Cell length, cm.
    pub length_cm: f64,
    /// Signal wavelength, nm.
    pub lambda_nm: f64,
    /// Decay rate in β±, units of Γ_a.
    pub gamma: f64,
    /// Rabi frequency of the weakest signal transition for unit polarization
    /// amplitude, units of Γ_a.
    pub omega_min: f64,
    /// Decay fraction of the weakest signal channel.
    pub b_min_sq: f64,
}

impl MediumParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n_atom", self.n_atom),
            ("length", self.length_cm),
            ("lambda", self.lambda_nm),
            ("gamma", self.gamma),
            ("omega_min", self.omega_min),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.b_min_sq > 0.0 && self.b_min_sq <= 1.0) {
            return Err(Error::invalid(format!("b_min_sq must lie in (0, 1], got {}", self.b_min_sq)));
        }
        Ok(())
    }

    fn lambda_cm(&self) -> f64 {
        self.lambda_nm * 1e-7
    }

    /// Signal wavevector, 1/cm.
    pub fn k(&self) -> f64 {
        2.0 * PI / self.lambda_cm()
    }

    /// β for a probe component whose weakest transition is driven at `omega_min`.
    pub fn beta(&self, omega_min: f64) -> f64 {
        self.b_min_sq * 3.0 * self.n_atom * self.gamma * self.lambda_cm().powi(3) / (4.0 * PI * PI * omega_min)
    }
}

/// Per-component response; differentials are always derived.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OpticalResponse {
    pub phi_plus: f64,
    pub phi_minus: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
}

impl OpticalResponse {
    pub fn phi_d(&self) -> f64 {
        self.phi_plus - self.phi_minus
    }

    pub fn alpha_d(&self) -> f64 {
        self.alpha_plus - self.alpha_minus
    }

    /// φ_d in degrees, wrapped into (-180, 180].
    pub fn phi_d_deg_wrapped(&self) -> f64 {
        let d = self.phi_d().to_degrees().rem_euclid(360.0);
        if d > 180.0 {
            d - 360.0
        } else {
            d
        }
    }

    pub fn scaled(&self, w: f64) -> Self {
        OpticalResponse {
            phi_plus: self.phi_plus * w,
            phi_minus: self.phi_minus * w,
            alpha_plus: self.alpha_plus * w,
            alpha_minus: self.alpha_minus * w,
        }
    }

    pub fn add(&self, o: &OpticalResponse) -> Self {
        OpticalResponse {
            phi_plus: self.phi_plus + o.phi_plus,
            phi_minus: self.phi_minus + o.phi_minus,
            alpha_plus: self.alpha_plus + o.alpha_plus,
            alpha_minus: self.alpha_minus + o.alpha_minus,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.phi_plus, self.phi_minus, self.alpha_plus, self.alpha_minus].iter().all(|v| v.is_finite())
    }
}

/// Strength-weighted sum of signal coherences of one circular component,
/// phase-referenced to that component's field: Σ a·ρ_lu·ε_q*/|ε_q|.
/// Positive imaginary part means absorption.
pub fn coherence_sum(rho: &DensityMatrix, transitions: &TransitionTable, signal: &Polarization, q: i32) -> Result<C64> {
    let mut any = false;
    let mut sum = C64::new(0.0, 0.0);
    for t in transitions.for_field(FieldRole::Signal).filter(|t| t.q == q) {
        any = true;
        sum += rho.rho[(t.lower_index, t.upper_index)] * t.strength;
    }
    if !any {
        return Err(Error::invalid(format!("no signal transitions with q = {q:+}")));
    }
    let e = signal.component(q);
    Ok(if e.norm() > 0.0 { sum * e.conj() / e.norm() } else { C64::new(0.0, 0.0) })
}

/// φ± = kL(β±/2)·Re S±, α± = kL·β±·Im S±/2, with β± evaluated at the Rabi
/// frequency each component actually drives its weakest line with.
/// A component absent from the signal polarization gets zero response.
pub fn response_from_density(
    rho: &DensityMatrix,
    transitions: &TransitionTable,
    signal: &Polarization,
    medium: &MediumParams,
) -> Result<OpticalResponse> {
    medium.validate()?;
    let kl = medium.k() * medium.length_cm;
    let mut out = [(0.0, 0.0); 2];
    for (slot, q) in [(0, 1), (1, -1)] {
        let s = coherence_sum(rho, transitions, signal, q)?;
        let amp = signal.component(q).norm();
        if amp > 0.0 {
            let beta = medium.beta(medium.omega_min * amp);
            out[slot] = (0.5 * kl * beta * s.re, 0.5 * kl * beta * s.im);
        }
    }
    Ok(OpticalResponse {
        phi_plus: out[0].0,
        phi_minus: out[1].0,
        alpha_plus: out[0].1,
        alpha_minus: out[1].1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::{decay::b_min_sq, DecayParams, DipoleLeg, LevelScheme};

    fn medium() -> MediumParams {
        MediumParams { n_atom: 1e12, length_cm: 7.5, lambda_nm: 1323.0, gamma: 0.6, omega_min: 0.1, b_min_sq: 1.0 / 12.0 }
    }

    #[test]
    fn phase_wraps_into_half_open_interval() {
        let at = |phi: f64| OpticalResponse { phi_plus: phi, ..Default::default() }.phi_d_deg_wrapped();
        assert_eq!(at(-1e-18), 0.0);
        assert!((at(PI) - 180.0).abs() < 1e-12);
        assert!((at(-PI) - 180.0).abs() < 1e-12);
        assert!((at(200f64.to_radians()) + 160.0).abs() < 1e-12);
    }

    #[test]
    fn populations_alone_give_no_response() {
        let s = LevelScheme::rb87_full(DecayParams::default()).unwrap();
        let t = TransitionTable::from_scheme(&s).unwrap();
        let rho = DensityMatrix::ground_mixture(&s);
        let r = response_from_density(&rho, &t, &Polarization::y(), &medium()).unwrap();
        assert_eq!(r, OpticalResponse::default());
    }

    #[test]
    fn strongest_to_weakest_signal_ratio_is_sqrt6() {
        let s = LevelScheme::rb87_full(DecayParams::default()).unwrap();
        let t = TransitionTable::from_scheme(&s).unwrap();
        let max = t.for_field(FieldRole::Signal).map(|e| e.strength.abs()).fold(0.0, f64::max);
        assert!((max - 6f64.sqrt()).abs() < 1e-12);
        assert!((b_min_sq(DipoleLeg::RB87_HALF_HALF, 1, 1, &[1, 2]).unwrap() - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn missing_polarization_channel_is_an_error() {
        let s = LevelScheme::two_level(DecayParams::default()).unwrap();
        let t = TransitionTable::from_scheme(&s).unwrap();
        let rho = DensityMatrix::ground_mixture(&s);
        assert!(response_from_density(&rho, &t, &Polarization::y(), &medium()).is_err());
    }

    #[test]
    fn beta_scale() {
        // 3·1e12·0.6·(1.323e-4)³/(4π²·0.1)/12
        let want = 3.0e12 * 0.6 * 1.323e-4f64.powi(3) / (4.0 * PI * PI * 0.1) / 12.0;
        let b = medium().beta(0.1);
        assert!((b - want).abs() < 1e-15 && (b - 0.08798).abs() < 1e-5, "{b}");
    }
}
