use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::density::DensityMatrix;
use super::liouvillian::{Liouvillian, Representation};
use crate::error::{Error, Result};

/// Relative pivot size below which the factorization is treated as singular.
const PIVOT_TOL: f64 = 1e-13;
/// Relative singular value counted as zero when reporting the null space.
const NULL_TOL: f64 = 1e-11;
/// Residual bound relative to max(1, ‖M‖∞).
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Which linear solve backs [`steady_state`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Route {
    /// Hermiticity folded in: populations, Re ρ_ab and Im ρ_ab (a < b) as
    /// real unknowns, solved by real LU.
    #[default]
    RealReduced,
    /// Complex LU on the vectorized system.
    Complex,
}

/// The system A x = b whose solution is the steady state.
fn system(l: &Liouvillian) -> (Vec<(usize, usize, C64)>, DVector<C64>) {
    match l.representation {
        Representation::Homogeneous => {
            let tr = l.trace_slot();
            let mut a: Vec<_> = l.m.iter().copied().filter(|e| e.0 != tr).collect();
            for p in 0..l.dim() {
                if l.layout.is_population(p) {
                    a.push((tr, p, C64::new(1.0, 0.0)));
                }
            }
            let mut b = DVector::zeros(l.dim());
            b[tr] = C64::new(1.0, 0.0);
            (a, b)
        }
        Representation::TraceEliminated => (l.m.clone(), -&l.s),
    }
}

#[derive(Clone, Copy)]
enum Var {
    Pop(usize),
    /// Upper triangle: real part index; imaginary part is the next index.
    Upper(usize),
    /// Lower triangle, stored as the conjugate of the upper slot.
    Lower(usize),
}

fn real_vars(l: &Liouvillian) -> Vec<Var> {
    let n = l.dim();
    let mut next = 0;
    let mut upper_at = std::collections::HashMap::new();
    let mut vars = Vec::with_capacity(n);
    for slot in 0..n {
        let (i, j) = l.layout.entry(slot);
        if i == j {
            vars.push(Var::Pop(next));
            next += 1;
        } else if i < j {
            vars.push(Var::Upper(next));
            upper_at.insert((i, j), next);
            next += 2;
        } else {
            vars.push(Var::Lower(usize::MAX));
        }
    }
    for slot in 0..n {
        if let Var::Lower(_) = vars[slot] {
            let (i, j) = l.layout.entry(slot);
            vars[slot] = Var::Lower(upper_at[&(j, i)]);
        }
    }
    vars
}

fn check_pivots(diag: impl Iterator<Item = f64>, dense_for_svd: impl FnOnce() -> Vec<f64>) -> Result<()> {
    let d: Vec<f64> = diag.collect();
    let max = d.iter().copied().fold(0.0, f64::max);
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 || !(min > PIVOT_TOL * max) {
        let sv = dense_for_svd();
        let smax = sv.iter().copied().fold(0.0, f64::max);
        let nullity = sv.iter().filter(|&&s| s <= NULL_TOL * smax).count();
        if nullity > 0 || max == 0.0 {
            return Err(Error::NonUniqueSteadyState { nullity: nullity.max(1) });
        }
    }
    Ok(())
}

fn solve_real(l: &Liouvillian) -> Result<DVector<C64>> {
    let n = l.dim();
    let (a, b) = system(l);
    let vars = real_vars(l);
    let mut ar = DMatrix::<f64>::zeros(n, n);
    let mut br = DVector::<f64>::zeros(n);
    // Complex contribution `v` of row `r` into real row(s).
    let put = |ar: &mut DMatrix<f64>, r: usize, col: usize, v: C64| match vars[r] {
        Var::Pop(p) => ar[(p, col)] += v.re,
        Var::Upper(u) => {
            ar[(u, col)] += v.re;
            ar[(u + 1, col)] += v.im;
        }
        Var::Lower(_) => {}
    };
    let i = C64::new(0.0, 1.0);
    for &(r, c, v) in &a {
        match vars[c] {
            Var::Pop(p) => put(&mut ar, r, p, v),
            Var::Upper(u) => {
                put(&mut ar, r, u, v);
                put(&mut ar, r, u + 1, i * v);
            }
            Var::Lower(u) => {
                put(&mut ar, r, u, v);
                put(&mut ar, r, u + 1, -i * v);
            }
        }
    }
    for (r, v) in b.iter().enumerate() {
        match vars[r] {
            Var::Pop(p) => br[p] = v.re,
            Var::Upper(u) => {
                br[u] = v.re;
                br[u + 1] = v.im;
            }
            Var::Lower(_) => {}
        }
    }
    let lu = ar.clone().lu();
    check_pivots(lu.u().diagonal().iter().map(|x| x.abs()), || {
        ar.clone().singular_values().iter().copied().collect()
    })?;
    let y = lu
        .solve(&br)
        .ok_or(Error::NonUniqueSteadyState { nullity: 1 })?;
    Ok(DVector::from_fn(n, |slot, _| match vars[slot] {
        Var::Pop(p) => C64::new(y[p], 0.0),
        Var::Upper(u) => C64::new(y[u], y[u + 1]),
        Var::Lower(u) => C64::new(y[u], -y[u + 1]),
    }))
}

fn solve_complex(l: &Liouvillian) -> Result<DVector<C64>> {
    let n = l.dim();
    let (a, b) = system(l);
    let mut ad = DMatrix::<C64>::zeros(n, n);
    for (r, c, v) in a {
        ad[(r, c)] += v;
    }
    let lu = ad.clone().lu();
    check_pivots(lu.u().diagonal().iter().map(|x| x.norm()), || {
        ad.clone().singular_values().iter().copied().collect()
    })?;
    lu.solve(&b).ok_or(Error::NonUniqueSteadyState { nullity: 1 })
}

/// ‖M x + s‖∞ for the density matrix `rho`.
pub fn residual(l: &Liouvillian, rho: &DensityMatrix) -> f64 {
    l.apply(&l.to_state(rho)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Steady state with trace one.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    steady_state_with(l, Route::RealReduced)
}

pub fn steady_state_with(l: &Liouvillian, route: Route) -> Result<DensityMatrix> {
    let x = match route {
        Route::RealReduced => solve_real(l)?,
        Route::Complex => solve_complex(l)?,
    };
    let rho = l.from_state(&x);
    let res = residual(l, &rho);
    let tol = RESIDUAL_TOL * l.norm_inf().max(1.0);
    if !(res <= tol) {
        return Err(Error::Residual { residual: res, tolerance: tol });
    }
    Ok(rho)
}

/// Integrates dρ/dt = L(ρ) from `rho0` for `t_final`.
///
/// Each step applies the fourth-order Taylor propagator (what RK4 reduces to
/// for a linear system) with the largest step `h <= dt` that divides
/// `t_final`; the step power is taken by repeated squaring.
pub fn evolve(rho0: &DensityMatrix, l: &Liouvillian, t_final: f64, dt: f64) -> Result<DensityMatrix> {
    if !(t_final >= 0.0 && dt > 0.0 && t_final.is_finite()) {
        return Err(Error::invalid(format!("need t_final >= 0 and dt > 0, got {t_final}, {dt}")));
    }
    if rho0.dim() != l.layout.n_levels() {
        return Err(Error::DimensionMismatch("initial state does not match the Liouvillian".into()));
    }
    let steps = (t_final / dt).ceil().max(1.0) as u64;
    let h = t_final / steps as f64;
    let n = l.dim();
    let mut a = DMatrix::<C64>::zeros(n + 1, n + 1);
    for &(r, c, v) in &l.m {
        a[(r, c)] += v * h;
    }
    for (r, v) in l.s.iter().enumerate() {
        a[(r, n)] = v * h;
    }
    // I + A + A²/2 + A³/6 + A⁴/24 in Horner form.
    let id = DMatrix::<C64>::identity(n + 1, n + 1);
    let mut p = &id + &a * C64::new(0.25, 0.0);
    for k in [3.0, 2.0, 1.0] {
        p = &id + &a * &p * C64::new(1.0 / k, 0.0);
    }
    let mut k = steps;
    let mut acc = id;
    let mut base = p;
    while k > 0 {
        if k & 1 == 1 {
            acc = &acc * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    let mut x0 = DVector::<C64>::zeros(n + 1);
    x0.rows_mut(0, n).copy_from(&l.to_state(rho0));
    x0[n] = C64::new(1.0, 0.0);
    let x = acc * x0;
    let rho = l.from_state(&x.rows(0, n).into_owned());
    let drift = (rho.trace() - rho0.trace()).norm();
    let finite = rho.rho.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    let biggest = rho.rho.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !finite || !(drift <= 1e-3) || biggest > 1.0 + 1e-3 {
        return Err(Error::UnstableStep { drift: if drift.is_finite() { drift.max(biggest - 1.0) } else { f64::INFINITY } });
    }
    Ok(rho)
}
