use num_complex::Complex64 as C64;

use crate::atom::FieldRole;
use crate::error::{Error, Result};

/// Polarization as amplitudes on the (σ+, σ-) basis, with
/// σ+ = -(x + iy)/√2 and σ- = (x - iy)/√2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Polarization {
    pub plus: C64,
    pub minus: C64,
}

const NORM_TOL: f64 = 1e-12;

impl Polarization {
    pub fn new(plus: C64, minus: C64) -> Result<Self> {
        let n = plus.norm_sqr() + minus.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("polarization |α|²+|β|² = {n}, expected 1")));
        }
        Ok(Polarization { plus, minus })
    }

    pub fn sigma_plus() -> Self {
        Polarization { plus: C64::new(1.0, 0.0), minus: C64::new(0.0, 0.0) }
    }

    pub fn sigma_minus() -> Self {
        Polarization { plus: C64::new(0.0, 0.0), minus: C64::new(1.0, 0.0) }
    }

    /// Linear polarization at `angle` (radians) from x toward y.
    pub fn linear(angle: f64) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (sin, cos) = angle.sin_cos();
        Polarization {
            plus: C64::new(-cos, sin) * s,
            minus: C64::new(cos, sin) * s,
        }
    }

    pub fn x() -> Self {
        Self::linear(0.0)
    }

    pub fn y() -> Self {
        Self::linear(std::f64::consts::FRAC_PI_2)
    }

    /// Amplitude on the spherical component `q` (π light is absent since
    /// both beams travel along the quantization axis).
    pub fn component(&self, q: i32) -> C64 {
        match q {
            1 => self.plus,
            -1 => self.minus,
            _ => C64::new(0.0, 0.0),
        }
    }
}

impl Default for Polarization {
    fn default() -> Self {
        Self::sigma_plus()
    }
}

/// One laser field. Frequencies in Γ_a.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSpec {
    pub role: FieldRole,
    /// Peak Rabi frequency of the weakest transition.
    pub rabi: f64,
    /// Laser minus reference-transition frequency.
    pub detuning: f64,
    pub polarization: Polarization,
    /// Wavevector magnitude in Γ_a per (m/s).
    pub k: f64,
}

impl FieldSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rabi >= 0.0 && self.rabi.is_finite()) {
            return Err(Error::invalid(format!("Rabi frequency must be finite and >= 0, got {}", self.rabi)));
        }
        if !self.detuning.is_finite() || !self.k.is_finite() {
            return Err(Error::invalid("non-finite detuning or wavevector"));
        }
        Polarization::new(self.polarization.plus, self.polarization.minus)?;
        Ok(())
    }
}

/// Pump (ground to intermediate) and signal (intermediate to upper).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSet {
    pub pump: FieldSpec,
    pub signal: FieldSpec,
}

impl FieldSet {
    pub fn get(&self, role: FieldRole) -> &FieldSpec {
        match role {
            FieldRole::Pump => &self.pump,
            FieldRole::Signal => &self.signal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pump.role != FieldRole::Pump || self.signal.role != FieldRole::Signal {
            return Err(Error::invalid("field roles swapped"));
        }
        self.pump.validate()?;
        self.signal.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_states_are_normalized() {
        for k in 0..16 {
            let p = Polarization::linear(k as f64 * 0.4);
            Polarization::new(p.plus, p.minus).unwrap();
        }
        assert!(Polarization::new(C64::new(1.0, 0.0), C64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn y_is_equal_weight_imaginary() {
        let y = Polarization::y();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((y.plus - C64::new(0.0, s)).norm() < 1e-15);
        assert!((y.minus - C64::new(0.0, s)).norm() < 1e-15);
    }
}
