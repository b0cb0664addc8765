//! Invariants over randomized inputs.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use waveplate::cli::scenario_response;
use waveplate::doppler::{doppler_shifts, Geometry, VelocityGrid};
use waveplate::liouville::{residual, Polarization};
use waveplate::polarimetry::{
    chain_intensity, detector_intensity, ideal_probe_state, invert_least_squares, invert_scan, synthesize_scan,
    JonesVector, OpticalResponse,
};
use waveplate::scenario::Scenario;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_form_matches_chain(
        e0 in 0.01..10.0f64, am in 0.0..3.0f64, ad in -1.0..3.0f64,
        pp in -10.0..10.0f64, pm in -10.0..10.0f64, th in -7.0..7.0f64,
    ) {
        let r = OpticalResponse { phi_plus: pp, phi_minus: pm, alpha_plus: am + ad, alpha_minus: am };
        let a = detector_intensity(e0, am, ad, pp - pm, th);
        prop_assert!((a - chain_intensity(e0, &r, th)).abs() <= 1e-12 * e0.max(1.0) * (2.0 * ad.abs()).exp());
    }

    #[test]
    fn detector_never_negative(am in 0.0..3.0f64, ad in -1.0..3.0f64, pd in -7.0..7.0f64, th in -7.0..7.0f64) {
        prop_assert!(detector_intensity(1.0, am, ad, pd, th) >= -1e-15);
    }

    #[test]
    fn three_point_inversion_round_trips(
        e0 in 0.1..5.0f64, am in 0.0..2.0f64, ad in -0.5..1.5f64, pd in 0.01..(PI - 0.01),
    ) {
        let s = synthesize_scan(e0, am, ad, pd, &[0.0, FRAC_PI_2, PI]).samples;
        let inv = invert_scan([s[0], s[1], s[2]], e0, am).unwrap();
        prop_assert!((inv.alpha_d - ad).abs() < 1e-9);
        prop_assert!((inv.phi_d - pd).abs() < 1e-6);
        prop_assert!(inv.residual < 1e-12 * e0);
    }

    #[test]
    fn least_squares_ignores_unknown_scale(
        e0 in 0.1..5.0f64, am in 0.0..2.0f64, ad in 0.0..1.0f64, pd in 0.05..(PI - 0.05), n in 4usize..40,
    ) {
        let th: Vec<f64> = (0..n).map(|i| i as f64 * PI / (n - 1) as f64).collect();
        let s = synthesize_scan(e0, am, ad, pd, &th).samples;
        let inv = invert_least_squares(&s, None, 0.0).unwrap();
        prop_assert!((inv.alpha_d - ad).abs() < 1e-8);
        prop_assert!((inv.phi_d - pd).abs() < 1e-6);
        prop_assert!((inv.fitted_scale - e0 * (-2.0 * am).exp()).abs() < 1e-9 * e0);
    }

    #[test]
    fn circular_components_round_trip(xr in -1.0..1.0f64, xi in -1.0..1.0f64, yr in -1.0..1.0f64, yi in -1.0..1.0f64) {
        let v = JonesVector::new(C64::new(xr, xi), C64::new(yr, yi));
        let (p, m) = v.to_circular();
        let w = JonesVector::from_circular(p, m);
        prop_assert!((w.x() - v.x()).norm() < 1e-14 && (w.y() - v.y()).norm() < 1e-14);
        prop_assert!((w.intensity() - v.intensity()).abs() < 1e-14);
    }

    #[test]
    fn probe_state_is_normalized(ar in -1.0..1.0f64, ai in -1.0..1.0f64, br in -1.0..1.0f64, bi in -1.0..1.0f64, phi in -7.0..7.0f64) {
        prop_assume!(ar * ar + ai * ai + br * br + bi * bi > 1e-3);
        let n = (ar * ar + ai * ai + br * br + bi * bi).sqrt();
        let p = ideal_probe_state(C64::new(ar, ai) / n, C64::new(br, bi) / n, phi).unwrap();
        prop_assert!((p.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shifts_flip_with_velocity(v in -1000.0..1000.0f64) {
        for g in [Geometry::CounterPropagating, Geometry::CoPropagating] {
            let a = doppler_shifts(v, g, 0.2188, 0.1315);
            let b = doppler_shifts(-v, g, 0.2188, 0.1315);
            prop_assert_eq!(a.0, -b.0);
            prop_assert_eq!(a.1, -b.1);
        }
    }

    #[test]
    fn thermal_grids_are_normalized_and_symmetric(n in 1usize..60, t in 250.0..500.0f64) {
        for g in [VelocityGrid::gauss_hermite(n, t, 86.909).unwrap(), VelocityGrid::uniform(n, t, 86.909, 4.0).unwrap()] {
            prop_assert!(g.validate().is_ok());
            prop_assert!(g.is_symmetric(1e-9));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn four_level_steady_state_is_physical(
        op in 0.0..40.0f64, dc in -200.0..200.0f64, os in 0.0..2.0f64, ds in -300.0..300.0f64,
        v in -600.0..600.0f64, ang in 0.0..PI,
    ) {
        let s = Scenario::preset("fig1-ideal").unwrap();
        let mut f = s.fields;
        f.pump.rabi = op;
        f.pump.detuning = dc;
        f.pump.polarization = Polarization::linear(ang);
        f.signal.rabi = os;
        f.signal.detuning = ds;
        let shifts = doppler_shifts(v, Geometry::CounterPropagating, f.pump.k, f.signal.k);
        let l = s.model.liouvillian(&f, shifts).unwrap();
        let rho = s.model.steady_state(&f, shifts).unwrap();
        prop_assert!((rho.trace() - 1.0).norm() < 1e-10);
        prop_assert!(rho.hermiticity_error() < 1e-12);
        prop_assert!(rho.min_population() > -1e-10);
        prop_assert!(residual(&l, &rho) <= 1e-9 * l.norm_inf());
    }

    #[test]
    fn response_is_linear_in_column_density(ds in -300.0..300.0f64, scale in 0.1..10.0f64) {
        let s = Scenario::preset("fig1-ideal").unwrap();
        let mut t = s.clone();
        t.medium.n_atom *= scale;
        let (a, b) = (scenario_response(&s, ds).unwrap(), scenario_response(&t, ds).unwrap());
        for (x, y) in [(a.phi_plus, b.phi_plus), (a.phi_minus, b.phi_minus), (a.alpha_plus, b.alpha_plus), (a.alpha_minus, b.alpha_minus)] {
            prop_assert!((x * scale - y).abs() <= 1e-12 * y.abs().max(1e-300) + 1e-300);
        }
    }
}
