//! Thermal velocity quadrature and beam-geometry Doppler shifts.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BOLTZMANN: f64 = 1.380_649e-23;
const AMU: f64 = 1.660_539_066_60e-27;
/// Γ_a / 2π in Hz.
const GAMMA_A_HZ: f64 = 5.75e6;

pub const RB87_MASS_AMU: f64 = 86.909_180_53;
pub const DEFAULT_TEMPERATURE_K: f64 = 403.0;
pub const DEFAULT_SPAN: f64 = 4.0;

/// Wavevector in Γ_a per (m/s) for a vacuum wavelength in nm.
pub fn wavevector(lambda_nm: f64) -> f64 {
    1.0 / (lambda_nm * 1e-9 * GAMMA_A_HZ)
}

/// 1-D thermal RMS velocity sqrt(k_B T / m) in m/s.
pub fn v_rms(temperature_k: f64, mass_amu: f64) -> f64 {
    (BOLTZMANN * temperature_k / (mass_amu * AMU)).sqrt()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    #[default]
    #[serde(alias = "counter")]
    CounterPropagating,
    #[serde(alias = "co")]
    CoPropagating,
}


impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counter" | "counter_propagating" => Ok(Geometry::CounterPropagating),
            "co" | "co_propagating" => Ok(Geometry::CoPropagating),
            _ => Err(Error::invalid(format!("unknown geometry '{s}' (expected co or counter)"))),
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::CounterPropagating => "counter",
            Geometry::CoPropagating => "co",
        })
    }
}

/// Detuning shifts (Δδ_c, Δδ_s) seen by an atom moving at `v` along the pump.
pub fn doppler_shifts(v: f64, geometry: Geometry, k_pump: f64, k_signal: f64) -> (f64, f64) {
    match geometry {
        Geometry::CounterPropagating => (-k_pump * v, k_signal * v),
        Geometry::CoPropagating => (-k_pump * v, -k_signal * v),
    }
}

/// Velocity nodes with normalized weights.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityGrid {
    /// `(velocity m/s, weight)`, ascending in velocity.
    pub points: Vec<(f64, f64)>,
    pub temperature: f64,
    pub mass: f64,
    /// Largest |v| covered, in units of v_rms.
    pub span: f64,
}

fn check_thermal(temperature: f64, mass: f64, n: usize) -> Result<()> {
    if !(temperature > 0.0 && temperature.is_finite()) || !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::invalid(format!("temperature {temperature} K and mass {mass} u must be positive")));
    }
    if n == 0 {
        return Err(Error::invalid("velocity grid needs at least one point"));
    }
    Ok(())
}

impl VelocityGrid {
    /// Arbitrary nodes; weights are renormalized to sum to one.
    pub fn from_points(mut points: Vec<(f64, f64)>, temperature: f64, mass: f64) -> Result<Self> {
        check_thermal(temperature, mass, points.len())?;
        if points.iter().any(|p| !p.0.is_finite() || !(p.1 >= 0.0)) {
            return Err(Error::invalid("velocity grid points need finite v and weight >= 0"));
        }
        let total: f64 = points.iter().map(|p| p.1).sum();
        if !(total > 0.0) {
            return Err(Error::invalid("velocity grid weights sum to zero"));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        for p in &mut points {
            p.1 /= total;
        }
        let vr = v_rms(temperature, mass);
        let span = points.iter().map(|p| p.0.abs()).fold(0.0, f64::max) / vr;
        Ok(VelocityGrid { points, temperature, mass, span })
    }

    /// One atom at rest (or at `v`): the un-averaged response.
    pub fn single(v: f64) -> Self {
        VelocityGrid { points: vec![(v, 1.0)], temperature: DEFAULT_TEMPERATURE_K, mass: RB87_MASS_AMU, span: 0.0 }
    }

    /// `n` evenly spaced nodes over ±span·v_rms, Maxwell-weighted.
    pub fn uniform(n: usize, temperature: f64, mass: f64, span: f64) -> Result<Self> {
        check_thermal(temperature, mass, n)?;
        if !(span > 0.0) {
            return Err(Error::invalid(format!("span must be positive, got {span}")));
        }
        let vr = v_rms(temperature, mass);
        let points = (0..n)
            .map(|i| {
                let x = if n == 1 { 0.0 } else { -span + 2.0 * span * i as f64 / (n - 1) as f64 };
                (x * vr, (-0.5 * x * x).exp())
            })
            .collect();
        let mut g = Self::from_points(points, temperature, mass)?;
        g.span = span;
        Ok(g)
    }

    /// `n`-point Gauss–Hermite rule for the Maxwell distribution
    /// (Golub–Welsch), symmetrized about zero.
    pub fn gauss_hermite(n: usize, temperature: f64, mass: f64) -> Result<Self> {
        check_thermal(temperature, mass, n)?;
        let mut j = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            let b = (i as f64 / 2.0).sqrt();
            j[(i, i - 1)] = b;
            j[(i - 1, i)] = b;
        }
        let eig = SymmetricEigen::new(j);
        let mut nodes: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
        for i in 0..n / 2 {
            let k = n - 1 - i;
            let x = 0.5 * (nodes[k].0 - nodes[i].0);
            let w = 0.5 * (nodes[k].1 + nodes[i].1);
            nodes[i] = (-x, w);
            nodes[k] = (x, w);
        }
        if n % 2 == 1 {
            nodes[n / 2].0 = 0.0;
        }
        let vr = v_rms(temperature, mass);
        let points = nodes.into_iter().map(|(x, w)| (x * std::f64::consts::SQRT_2 * vr, w)).collect();
        Self::from_points(points, temperature, mass)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn v_rms(&self) -> f64 {
        v_rms(self.temperature, self.mass)
    }

    pub fn validate(&self) -> Result<()> {
        check_thermal(self.temperature, self.mass, self.points.len())?;
        let total: f64 = self.points.iter().map(|p| p.1).sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::invalid(format!("velocity weights sum to {total}, expected 1")));
        }
        Ok(())
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.points.len();
        (0..n).all(|i| {
            let (a, b) = (self.points[i], self.points[n - 1 - i]);
            (a.0 + b.0).abs() <= tol * (1.0 + a.0.abs()) && (a.1 - b.1).abs() <= tol
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_follow_geometry() {
        let (kp, ks) = (wavevector(795.0), wavevector(1323.0));
        assert_eq!(doppler_shifts(0.0, Geometry::CounterPropagating, kp, ks), (0.0, 0.0));
        for v in [1.0, 37.0, 250.0] {
            let (c, s) = doppler_shifts(v, Geometry::CounterPropagating, kp, ks);
            assert!(c * s < 0.0);
            assert!((c.abs() / s.abs() - 1323.0 / 795.0).abs() < 1e-12);
            let (c, s) = doppler_shifts(v, Geometry::CoPropagating, kp, ks);
            assert!(c * s > 0.0);
        }
        assert!((kp - 0.21877).abs() < 1e-4);
    }

    #[test]
    fn geometry_parses() {
        assert_eq!("co".parse::<Geometry>().unwrap(), Geometry::CoPropagating);
        assert_eq!("counter".parse::<Geometry>().unwrap(), Geometry::CounterPropagating);
        assert!("sideways".parse::<Geometry>().is_err());
    }

    #[test]
    fn thermal_velocity_at_cell_temperature() {
        let v = v_rms(DEFAULT_TEMPERATURE_K, RB87_MASS_AMU);
        assert!((v - 196.3).abs() < 0.5, "{v}");
    }

    #[test]
    fn gauss_hermite_moments() {
        let g = VelocityGrid::gauss_hermite(40, 403.0, RB87_MASS_AMU).unwrap();
        g.validate().unwrap();
        assert!(g.is_symmetric(1e-12));
        let vr = g.v_rms();
        let m2: f64 = g.points.iter().map(|p| p.1 * p.0 * p.0).sum::<f64>() / (vr * vr);
        let m4: f64 = g.points.iter().map(|p| p.1 * p.0.powi(4)).sum::<f64>() / vr.powi(4);
        assert!((m2 - 1.0).abs() < 1e-10 && (m4 - 3.0).abs() < 1e-9, "{m2} {m4}");
        let odd = VelocityGrid::gauss_hermite(201, 403.0, RB87_MASS_AMU).unwrap();
        assert_eq!(odd.points[100].0, 0.0);
        odd.validate().unwrap();
    }

    #[test]
    fn uniform_grid_is_symmetric_and_normalized() {
        let g = VelocityGrid::uniform(200, 403.0, RB87_MASS_AMU, DEFAULT_SPAN).unwrap();
        g.validate().unwrap();
        assert!(g.is_symmetric(1e-12));
        assert!((g.points[199].0 / g.v_rms() - 4.0).abs() < 1e-12);
        assert!(VelocityGrid::uniform(10, -1.0, 87.0, 4.0).is_err());
    }
}
