//! Jones vectors and matrices on the (x, y) basis.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64 as C64;

use super::response::OpticalResponse;

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JonesVector(pub Vector2<C64>);

impl JonesVector {
    pub fn new(x: C64, y: C64) -> Self {
        JonesVector(Vector2::new(x, y))
    }

    pub fn x_hat() -> Self {
        Self::new(c(1.0, 0.0), c(0.0, 0.0))
    }

    pub fn y_hat() -> Self {
        Self::new(c(0.0, 0.0), c(1.0, 0.0))
    }

    /// σ+ = -(x + iy)/√2
    pub fn sigma_plus() -> Self {
        Self::new(c(-S, 0.0), c(0.0, -S))
    }

    /// σ- = (x - iy)/√2
    pub fn sigma_minus() -> Self {
        Self::new(c(S, 0.0), c(0.0, -S))
    }

    /// `plus·σ+ + minus·σ-`
    pub fn from_circular(plus: C64, minus: C64) -> Self {
        JonesVector(Self::sigma_plus().0 * plus + Self::sigma_minus().0 * minus)
    }

    /// Amplitudes on (σ+, σ-).
    pub fn to_circular(&self) -> (C64, C64) {
        (inner(&Self::sigma_plus(), self), inner(&Self::sigma_minus(), self))
    }

    pub fn x(&self) -> C64 {
        self.0[0]
    }

    pub fn y(&self) -> C64 {
        self.0[1]
    }

    pub fn norm(&self) -> f64 {
        self.intensity().sqrt()
    }

    /// |E|²
    pub fn intensity(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, k: C64) -> Self {
        JonesVector(self.0 * k)
    }
}

/// ⟨a|b⟩
pub fn inner(a: &JonesVector, b: &JonesVector) -> C64 {
    a.0[0].conj() * b.0[0] + a.0[1].conj() * b.0[1]
}

/// |⟨a|b⟩| / (|a||b|); 1 means equal up to a global phase.
pub fn overlap(a: &JonesVector, b: &JonesVector) -> f64 {
    inner(a, b).norm() / (a.norm() * b.norm())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JonesMatrix(pub Matrix2<C64>);

impl JonesMatrix {
    pub fn identity() -> Self {
        JonesMatrix(Matrix2::identity())
    }

    /// Coordinate rotation by `angle`: [[cos, sin], [-sin, cos]].
    pub fn rotation(angle: f64) -> Self {
        let (s, co) = angle.sin_cos();
        JonesMatrix(Matrix2::new(c(co, 0.0), c(s, 0.0), c(-s, 0.0), c(co, 0.0)))
    }

    /// Retarder with fast axis along x: diag(e^{iθ/2}, e^{-iθ/2}).
    pub fn retarder(theta: f64) -> Self {
        let h = 0.5 * theta;
        JonesMatrix(Matrix2::new(c(0.0, h).exp(), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -h).exp()))
    }

    /// Ideal linear polarizer transmitting along `axis` (radians from x).
    pub fn polarizer(axis: f64) -> Self {
        let (s, co) = axis.sin_cos();
        JonesMatrix(Matrix2::new(c(co * co, 0.0), c(co * s, 0.0), c(co * s, 0.0), c(s * s, 0.0)))
    }

    /// Retarder whose axis sits at `angle`: R(-angle)·J·R(angle).
    pub fn rotated(&self, angle: f64) -> Self {
        Self::rotation(-angle).then(self).then(&Self::rotation(angle))
    }

    /// Matrix product `self · other` (`other` acts first).
    pub fn then(&self, other: &JonesMatrix) -> Self {
        JonesMatrix(self.0 * other.0)
    }

    pub fn apply(&self, v: &JonesVector) -> JonesVector {
        JonesVector(self.0 * v.0)
    }
}

/// Field after the cell: each circular component scaled by e^{-α + iφ}.
pub fn propagate_cell(e_in: &JonesVector, r: &OpticalResponse) -> JonesVector {
    let (p, m) = e_in.to_circular();
    let tp = c(-r.alpha_plus, r.phi_plus).exp();
    let tm = c(-r.alpha_minus, r.phi_minus).exp();
    JonesVector::from_circular(p * tp, m * tm)
}

/// LCR at 45° followed by a polarizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyzerChain {
    /// Retarder axis angle, radians.
    pub lcr_axis: f64,
    /// Polarizer transmission axis, radians.
    pub polarizer_axis: f64,
}

impl Default for AnalyzerChain {
    /// LCR at 45°, polarizer along x (crossed with a y-polarized probe).
    fn default() -> Self {
        AnalyzerChain { lcr_axis: std::f64::consts::FRAC_PI_4, polarizer_axis: 0.0 }
    }
}

impl AnalyzerChain {
    pub fn matrix(&self, theta: f64) -> JonesMatrix {
        JonesMatrix::polarizer(self.polarizer_axis).then(&JonesMatrix::retarder(theta).rotated(self.lcr_axis))
    }

    /// Detected |E|² for a field `e_after` leaving the cell.
    pub fn intensity(&self, e_after: &JonesVector, theta: f64) -> f64 {
        self.matrix(theta).apply(e_after).intensity()
    }
}

/// Closed-form detector reading behind the default chain for a y-polarized
/// input of intensity `e0`.
pub fn detector_intensity(e0: f64, alpha_minus: f64, alpha_d: f64, phi_d: f64, theta: f64) -> f64 {
    let ed = (-alpha_d).exp();
    0.25 * e0
        * (-2.0 * alpha_minus).exp()
        * (1.0 + ed * ed + (1.0 - ed * ed) * theta.sin() - 2.0 * ed * phi_d.cos() * theta.cos())
}

/// Same reading computed through the explicit matrix chain.
pub fn chain_intensity(e0: f64, r: &OpticalResponse, theta: f64) -> f64 {
    let e_in = JonesVector::y_hat().scale(c(e0.sqrt(), 0.0));
    AnalyzerChain::default().intensity(&propagate_cell(&e_in, r), theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_round_trip() {
        for k in 0..20 {
            let v = JonesVector::new(c(0.3 * k as f64, -1.0), c(0.7, 0.1 * k as f64));
            let (p, m) = v.to_circular();
            let w = JonesVector::from_circular(p, m);
            assert!((w.0 - v.0).norm() < 1e-14);
        }
        let (p, m) = JonesVector::y_hat().to_circular();
        assert!((p - c(0.0, S)).norm() < 1e-15 && (m - c(0.0, S)).norm() < 1e-15);
    }

    #[test]
    fn unitary_elements_preserve_norm() {
        let v = JonesVector::new(c(0.3, -1.0), c(0.7, 0.2));
        for t in [0.0, 0.4, 1.9, 3.1] {
            for m in [JonesMatrix::rotation(t), JonesMatrix::retarder(t), JonesMatrix::retarder(t).rotated(0.7)] {
                assert!((m.apply(&v).norm() - v.norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_medium_and_half_wave_rotation() {
        let v = JonesVector::new(c(0.3, -1.0), c(0.7, 0.2));
        let out = propagate_cell(&v, &OpticalResponse::default());
        assert!((out.0 - v.0).norm() < 1e-15);
        let r = OpticalResponse { phi_minus: std::f64::consts::PI, ..Default::default() };
        let out = propagate_cell(&JonesVector::y_hat(), &r);
        assert!((overlap(&out, &JonesVector::x_hat()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn closed_form_matches_chain() {
        for k in 0..200 {
            let x = k as f64;
            let r = OpticalResponse {
                phi_plus: (1.3 * x).sin() * 4.0,
                phi_minus: (0.7 * x).cos() * 3.0,
                alpha_plus: 0.5 + 0.5 * (0.9 * x).sin(),
                alpha_minus: 0.4 + 0.4 * (1.1 * x).cos(),
            };
            let theta = (0.37 * x) % std::f64::consts::PI;
            let want = chain_intensity(2.5, &r, theta);
            let got = detector_intensity(2.5, r.alpha_minus, r.alpha_d(), r.phi_d(), theta);
            assert!((want - got).abs() < 1e-12, "{want} vs {got}");
        }
    }
}
