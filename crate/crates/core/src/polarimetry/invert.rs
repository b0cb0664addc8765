//! Recovering (α_d, φ_d) from LCR scan samples.
//!
//! The detector reading is linear in (P, Q, R):
//! `I(θ) = P + Q·sinθ + R·cosθ` with `P = K(1 + e^{-2α_d})`,
//! `Q = K(1 - e^{-2α_d})`, `R = -2K·e^{-α_d}·cosφ_d` and `K = (E0/4)e^{-2α₋}`.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use super::jones::detector_intensity;
use crate::error::{Error, Result};

/// Smallest |det| accepted for a three-point solve.
const MIN_DET: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inversion {
    pub alpha_d: f64,
    /// φ_d in [0, π]; `-phi_d` fits the data equally well.
    pub phi_d: f64,
    /// 4K = E0·e^{-2α₋} as implied by the samples.
    pub fitted_scale: f64,
    /// Largest |I_model - I_j| over the samples, model evaluated with the
    /// supplied E0 and α₋.
    pub residual: f64,
}

impl Inversion {
    /// Both φ_d branches, positive first.
    pub fn phi_d_branches(&self) -> [f64; 2] {
        [self.phi_d, -self.phi_d]
    }
}

fn extract(p: f64, q: f64, r: f64) -> Result<(f64, f64, f64)> {
    let (sum, diff) = (p + q, p - q);
    if !(sum > 0.0 && diff > 0.0) {
        return Err(Error::InconsistentSamples {
            reason: format!("e^(2α_d) = (P+Q)/(P-Q) is not positive (P = {p}, Q = {q})"),
            residual: sum.min(diff),
        });
    }
    let y = (sum / diff).sqrt();
    let a = 0.5 * sum;
    let cos_phi = -0.5 * r * y / a;
    if cos_phi.abs() > 1.0 + 1e-9 {
        return Err(Error::InconsistentSamples {
            reason: format!("|cos φ_d| = {} exceeds 1", cos_phi.abs()),
            residual: cos_phi.abs() - 1.0,
        });
    }
    Ok((y.ln(), cos_phi.clamp(-1.0, 1.0).acos(), 4.0 * a))
}

fn finish(alpha_d: f64, phi_d: f64, fitted_scale: f64, samples: &[(f64, f64)], e0: f64, alpha_minus: f64) -> Inversion {
    let residual = samples
        .iter()
        .map(|&(t, i)| (detector_intensity(e0, alpha_minus, alpha_d, phi_d, t) - i).abs())
        .fold(0.0, f64::max);
    Inversion { alpha_d, phi_d, fitted_scale, residual }
}

/// Closed-form inversion from exactly three samples `(θ_j, I_j)`.
pub fn invert_scan(samples: [(f64, f64); 3], e0: f64, alpha_minus: f64) -> Result<Inversion> {
    let [(t1, i1), (t2, i2), (t3, i3)] = samples;
    // det [1 S_j C_j] = S_{2-3} + S_{3-1} + S_{1-2}
    let det = (t2 - t3).sin() + (t3 - t1).sin() + (t1 - t2).sin();
    if !(det.abs() >= MIN_DET) {
        return Err(Error::IllConditioned(format!(
            "retardances {t1}, {t2}, {t3} give determinant {det:e}"
        )));
    }
    let m = Matrix3::new(1.0, t1.sin(), t1.cos(), 1.0, t2.sin(), t2.cos(), 1.0, t3.sin(), t3.cos());
    let x = m
        .lu()
        .solve(&Vector3::new(i1, i2, i3))
        .ok_or_else(|| Error::IllConditioned("singular three-point system".into()))?;
    let (alpha_d, phi_d, scale) = extract(x[0], x[1], x[2])?;
    Ok(finish(alpha_d, phi_d, scale, &samples, e0, alpha_minus))
}

/// Least-squares fit over all samples. `residual` in the result is the
/// RMS misfit of the unconstrained linear fit when E0 is unknown (`None`).
pub fn invert_least_squares(samples: &[(f64, f64)], e0: Option<f64>, alpha_minus: f64) -> Result<Inversion> {
    if samples.len() < 3 {
        return Err(Error::invalid("need at least three samples"));
    }
    let a = DMatrix::from_fn(samples.len(), 3, |r, c| match c {
        0 => 1.0,
        1 => samples[r].0.sin(),
        _ => samples[r].0.cos(),
    });
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > 1e-9 * smax) {
        return Err(Error::IllConditioned(format!("retardance samples span too little (σ_min/σ_max = {:e})", smin / smax)));
    }
    let x = svd.solve(&b, 1e-14).map_err(|e| Error::IllConditioned(e.to_string()))?;
    let (alpha_d, phi_d, scale) = extract(x[0], x[1], x[2])?;
    match e0 {
        Some(e0) => Ok(finish(alpha_d, phi_d, scale, samples, e0, alpha_minus)),
        None => {
            let rms = ((&a * &x - &b).norm_squared() / samples.len() as f64).sqrt();
            Ok(Inversion { alpha_d, phi_d, fitted_scale: scale, residual: rms })
        }
    }
}
