use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::atom::{LevelScheme, Tier};
use crate::error::{Error, Result};

/// Density matrix over all levels of a scheme, lumped slots included
/// (their coherences are identically zero).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub rho: DMatrix<C64>,
}

/// Bounds checked by [`DensityMatrix::check`].
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub trace: f64,
    pub hermitian: f64,
    pub positivity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { trace: 1e-8, hermitian: 1e-10, positivity: 1e-8 }
    }
}

impl DensityMatrix {
    pub fn zeros(n: usize) -> Self {
        DensityMatrix { rho: DMatrix::zeros(n, n) }
    }

    /// All population in level `i`.
    pub fn pure(n: usize, i: usize) -> Self {
        let mut d = Self::zeros(n);
        d.rho[(i, i)] = C64::new(1.0, 0.0);
        d
    }

    /// Ground population spread by degeneracy, as at thermal equilibrium.
    pub fn ground_mixture(scheme: &LevelScheme) -> Self {
        let mut d = Self::zeros(scheme.len());
        let slots: Vec<_> = scheme
            .in_tier(Tier::Ground)
            .map(|(i, l)| (i, if l.is_lumped() { l.manifold.degeneracy(scheme.nuclear_spin2) as f64 } else { 1.0 }))
            .collect();
        let w: f64 = slots.iter().map(|s| s.1).sum();
        for (i, v) in slots {
            d.rho[(i, i)] = C64::new(v / w, 0.0);
        }
        d
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn population(&self, i: usize) -> f64 {
        self.rho[(i, i)].re
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                err = err.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        err
    }

    pub fn min_population(&self) -> f64 {
        (0..self.dim()).map(|i| self.population(i)).fold(f64::INFINITY, f64::min)
    }

    /// Trace, Hermiticity and positivity of the diagonal.
    pub fn check(&self, tol: Tolerances) -> Result<()> {
        let t = self.trace();
        if (t - C64::new(1.0, 0.0)).norm() > tol.trace {
            return Err(Error::invalid(format!("trace {t} differs from 1")));
        }
        let h = self.hermiticity_error();
        if h > tol.hermitian {
            return Err(Error::invalid(format!("Hermiticity violated by {h:e}")));
        }
        let p = self.min_population();
        if p < -tol.positivity {
            return Err(Error::invalid(format!("negative population {p:e}")));
        }
        Ok(())
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (&self.rho - &other.rho).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
