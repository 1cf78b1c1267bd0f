use planck_radiation::constants::PhysicalConstants;
use planck_radiation::spectral::{planck_u, rayleigh_jeans_u, wien_u, SpectralParams};
use proptest::prelude::*;

fn reference() -> (SpectralParams, f64, f64) {
    let pc = PhysicalConstants::reference();
    (SpectralParams::from_hk(pc.h, pc.k).unwrap(), pc.k, pc.c)
}

#[test]
fn ordering_on_log_grid() {
    let (sp, k, c) = reference();
    let mut violations = 0;
    for i in 0..100 {
        let t = 10f64.powf(i as f64 * 4.0 / 99.0); // 1 K .. 10⁴ K
        for j in 0..100 {
            let nu = 10f64.powf(8.0 + j as f64 * 8.0 / 99.0); // 10⁸ .. 10¹⁶ Hz
            let w = wien_u(t, nu, &sp, c).unwrap();
            let p = planck_u(t, nu, &sp, c).unwrap();
            let r = rayleigh_jeans_u(t, nu, k, c).unwrap();
            if !(w <= p && p <= r) {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn limit_regimes() {
    let (sp, k, c) = reference();
    for &t in &[3.0, 300.0, 6000.0] {
        for &x in &[25.0, 30.0, 40.0, 100.0] {
            let nu = x * t / sp.a();
            let ratio = planck_u(t, nu, &sp, c).unwrap() / wien_u(t, nu, &sp, c).unwrap();
            assert!((ratio - 1.0).abs() < 2e-11, "x={x}");
        }
        for &x in &[1e-4, 1e-6, 1e-9] {
            let nu = x * t / sp.a();
            let ratio = planck_u(t, nu, &sp, c).unwrap() / rayleigh_jeans_u(t, nu, k, c).unwrap();
            assert!((ratio - 1.0).abs() < 1e-4, "x={x}");
        }
    }
}

proptest! {
    #[test]
    fn displacement_scaling(log_t in 0.0f64..4.0, x in 1e-3f64..60.0, which in 0usize..3) {
        let (sp, _, c) = reference();
        let t = 10f64.powf(log_t);
        let nu = x * t / sp.a();
        let lambda = [0.1, 2.0, 1e3][which];
        for law in [planck_u, wien_u] {
            let base = law(t, nu, &sp, c).unwrap();
            let scaled = law(lambda * t, lambda * nu, &sp, c).unwrap();
            prop_assert!((scaled / (lambda.powi(3) * base) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn planck_increases_with_temperature(log_t in 0.0f64..4.0, bump in 1e-6f64..1.0, log_nu in 9.0f64..15.0) {
        let (sp, _, c) = reference();
        let t = 10f64.powf(log_t);
        let nu = 10f64.powf(log_nu);
        prop_assume!(sp.reduced_frequency(t, nu) < 600.0);
        let lo = planck_u(t, nu, &sp, c).unwrap();
        let hi = planck_u(t * (1.0 + bump), nu, &sp, c).unwrap();
        prop_assert!(hi > lo);
    }

    #[test]
    fn ordering_random(log_t in -1.0f64..5.0, log_nu in 6.0f64..17.0) {
        let (sp, k, c) = reference();
        let (t, nu) = (10f64.powf(log_t), 10f64.powf(log_nu));
        let w = wien_u(t, nu, &sp, c).unwrap();
        let p = planck_u(t, nu, &sp, c).unwrap();
        let r = rayleigh_jeans_u(t, nu, k, c).unwrap();
        prop_assert!(w <= p && p <= r);
    }
}
