//! Radiation laws for the spectral energy density `u(T, ν)` in J/(m³·Hz).
//!
//! The laws are written in the `(a, b)` form, `u = (8πν²/c³)·bν/(exp(aν/T) − 1)`,
//! with `a` in K·s and `b` in J·s. Callers holding `h` and `k` go through
//! [`SpectralParams::from_hk`] (`a = h/k`, `b = h`).
//!
//! Every law is the field-oscillator relation [`bridge_u_from_e`] applied to
//! a mean oscillator energy, so the laws differ only in that energy.

use std::f64::consts::PI;

use crate::error::{non_negative, positive, Result};

/// The two constants of the Wien and Planck laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    a: f64,
    b: f64,
}

impl SpectralParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Ok(Self {
            a: positive("a", a)?,
            b: positive("b", b)?,
        })
    }

    /// `a = h/k`, `b = h`.
    pub fn from_hk(h: f64, k: f64) -> Result<Self> {
        positive("h", h)?;
        positive("k", k)?;
        Self::new(h / k, h)
    }

    /// Exponent slope, K·s.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Action quantum, J·s.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Boltzmann constant implied by the pair, `b/a`.
    pub fn k(&self) -> f64 {
        self.b / self.a
    }

    /// The dimensionless exponent `x = aν/T`.
    pub fn reduced_frequency(&self, t: f64, nu: f64) -> f64 {
        self.a * nu / t
    }
}

/// One `(ν, T, u)` observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSample {
    /// Hz
    pub nu: f64,
    /// K
    pub t: f64,
    /// J/(m³·Hz)
    pub u: f64,
}

impl SpectrumSample {
    pub fn new(nu: f64, t: f64, u: f64) -> Result<Self> {
        Ok(Self {
            nu: positive("nu", nu)?,
            t: positive("T", t)?,
            u: non_negative("u", u)?,
        })
    }
}

/// Which radiation law to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Planck,
    Wien,
    RayleighJeans,
}

/// Mode density factor `8πν²/c³`.
fn mode_density(nu: f64, c: f64) -> f64 {
    8.0 * PI * nu * nu / (c * c * c)
}

/// `1/(eˣ − 1)`, evaluated as `e⁻ˣ / (1 − e⁻ˣ)` with `1 − e⁻ˣ = −expm1(−x)`.
///
/// The form is accurate to a few ulp for every `x > 0`, with no small-x
/// branch: `expm1` carries the cancellation-prone region. It is also never
/// below `e⁻ˣ` in floating point (the divisor is at most one), which keeps
/// the Wien ≤ Planck ordering exact.
pub(crate) fn bose_factor(x: f64) -> f64 {
    (-x).exp() / -(-x).exp_m1()
}

/// Field-oscillator relation: `u = (8πν²/c³)·E`.
pub fn bridge_u_from_e(e: f64, nu: f64, c: f64) -> Result<f64> {
    non_negative("E", e)?;
    positive("nu", nu)?;
    Ok(mode_density(nu, c) * e)
}

/// Mean oscillator energy `bν/(exp(aν/T) − 1)`.
pub fn oscillator_energy(t: f64, nu: f64, sp: &SpectralParams) -> Result<f64> {
    positive("T", t)?;
    positive("nu", nu)?;
    Ok(sp.b * nu * bose_factor(sp.reduced_frequency(t, nu)))
}

/// Classical equipartition energy `kT`. `T = 0` is allowed and gives zero.
pub fn equipartition_energy(t: f64, k: f64) -> Result<f64> {
    non_negative("T", t)?;
    positive("k", k)?;
    Ok(k * t)
}

pub fn planck_u(t: f64, nu: f64, sp: &SpectralParams, c: f64) -> Result<f64> {
    bridge_u_from_e(oscillator_energy(t, nu, sp)?, nu, c)
}

/// Wien's law `(8πν³/c³)·b·exp(−aν/T)`.
pub fn wien_u(t: f64, nu: f64, sp: &SpectralParams, c: f64) -> Result<f64> {
    positive("T", t)?;
    positive("nu", nu)?;
    let e = sp.b * nu * (-sp.reduced_frequency(t, nu)).exp();
    bridge_u_from_e(e, nu, c)
}

/// Rayleigh-Jeans law `(8πν²/c³)·kT`.
pub fn rayleigh_jeans_u(t: f64, nu: f64, k: f64, c: f64) -> Result<f64> {
    positive("T", t)?;
    positive("nu", nu)?;
    bridge_u_from_e(equipartition_energy(t, k)?, nu, c)
}

/// Planck's law with the zero-point term: oscillator energy raised by `bν/2`.
pub fn zero_point_variant(t: f64, nu: f64, sp: &SpectralParams, c: f64) -> Result<f64> {
    let e = oscillator_energy(t, nu, sp)? + 0.5 * sp.b * nu;
    bridge_u_from_e(e, nu, c)
}

/// Evaluates `law` at `(T, ν)`; the Rayleigh-Jeans law uses `k = b/a`.
pub fn evaluate(law: Law, t: f64, nu: f64, sp: &SpectralParams, c: f64) -> Result<f64> {
    match law {
        Law::Planck => planck_u(t, nu, sp, c),
        Law::Wien => wien_u(t, nu, sp, c),
        Law::RayleighJeans => rayleigh_jeans_u(t, nu, sp.k(), c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::error::Error;
    use approx::assert_relative_eq;
    use std::f64::consts::LN_2;

    fn reference() -> (SpectralParams, f64, f64) {
        let pc = PhysicalConstants::reference();
        (SpectralParams::from_hk(pc.h, pc.k).unwrap(), pc.k, pc.c)
    }

    /// ν such that aν/T = x.
    fn nu_for(x: f64, t: f64, sp: &SpectralParams) -> f64 {
        x * t / sp.a()
    }

    #[test]
    fn planck_at_ln2_has_unit_denominator() {
        let (sp, _, c) = reference();
        let t = 1700.0;
        let nu = nu_for(LN_2, t, &sp);
        let u = planck_u(t, nu, &sp, c).unwrap();
        let expected = 8.0 * PI * nu * nu / c.powi(3) * sp.b() * nu;
        assert_relative_eq!(u, expected, max_relative = 1e-14);
        assert_relative_eq!(oscillator_energy(t, nu, &sp).unwrap(), sp.b() * nu, max_relative = 1e-14);
    }

    #[test]
    fn planck_small_x_matches_rayleigh_jeans() {
        let (sp, k, c) = reference();
        let t = 300.0;
        let nu = nu_for(1e-6, t, &sp);
        let p = planck_u(t, nu, &sp, c).unwrap();
        let rj = rayleigh_jeans_u(t, nu, k, c).unwrap();
        assert!((p / rj - 1.0).abs() < 5e-7);
        // series 1/(eˣ−1) ≈ 1/x − 1/2 + x/12
        assert_relative_eq!(p / rj, 1.0 - 0.5e-6 + 1e-12 / 12.0, max_relative = 1e-13);
    }

    #[test]
    fn wien_two_regimes() {
        let (sp, _, c) = reference();
        let t = 5000.0;
        // x → 0: exp term → 1
        let nu = nu_for(1e-12, t, &sp);
        let expected = 8.0 * PI * nu.powi(3) / c.powi(3) * sp.b();
        assert_relative_eq!(wien_u(t, nu, &sp, c).unwrap(), expected, max_relative = 1e-11);
        // x = 30: wien/planck − 1 = −e⁻³⁰
        let nu = nu_for(30.0, t, &sp);
        let ratio = wien_u(t, nu, &sp, c).unwrap() / planck_u(t, nu, &sp, c).unwrap();
        assert_relative_eq!(ratio - 1.0, -(-30.0f64).exp(), max_relative = 1e-2);
    }

    #[test]
    fn room_temperature_rayleigh_jeans_ratio() {
        let (_, k, c) = reference();
        let nu = 1e13;
        let ratio = rayleigh_jeans_u(290.0, nu, k, c).unwrap() / rayleigh_jeans_u(1700.0, nu, k, c).unwrap();
        assert!((ratio - 0.1706).abs() < 1e-4);
        let doubled = rayleigh_jeans_u(580.0, nu, k, c).unwrap() / rayleigh_jeans_u(290.0, nu, k, c).unwrap();
        assert_relative_eq!(doubled, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn oscillator_energy_limits() {
        let (sp, k, _) = reference();
        let t = 300.0;
        let e_small = oscillator_energy(t, nu_for(1e-9, t, &sp), &sp).unwrap();
        assert_relative_eq!(e_small, k * t, max_relative = 1e-8);
        assert_relative_eq!(e_small, equipartition_energy(t, k).unwrap(), max_relative = 1e-8);
        let nu = nu_for(30.0, t, &sp);
        let e_big = oscillator_energy(t, nu, &sp).unwrap();
        assert_relative_eq!(e_big, sp.b() * nu * (-30.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn equipartition_values() {
        assert_eq!(equipartition_energy(0.0, 1.381e-23).unwrap(), 0.0);
        assert_relative_eq!(equipartition_energy(290.0, 1.381e-23).unwrap(), 4.0049e-21, max_relative = 1e-4);
        let (_, k, c) = reference();
        let nu = 3e12;
        let e = equipartition_energy(400.0, k).unwrap();
        assert_eq!(bridge_u_from_e(e, nu, c).unwrap(), rayleigh_jeans_u(400.0, nu, k, c).unwrap());
    }

    #[test]
    fn bridge_linear_and_quadratic() {
        let c = 3e8;
        assert_eq!(bridge_u_from_e(0.0, 1e14, c).unwrap(), 0.0);
        let u1 = bridge_u_from_e(1e-20, 1e14, c).unwrap();
        let u2 = bridge_u_from_e(1e-20, 2e14, c).unwrap();
        assert_relative_eq!(u2 / u1, 4.0, max_relative = 1e-15);
        let (sp, _, c) = reference();
        for &(t, nu) in &[(10.0, 1e9), (300.0, 1e13), (6000.0, 1e15)] {
            let via_bridge = bridge_u_from_e(oscillator_energy(t, nu, &sp).unwrap(), nu, c).unwrap();
            assert_eq!(via_bridge, planck_u(t, nu, &sp, c).unwrap());
        }
    }

    #[test]
    fn zero_point_term() {
        let (sp, k, c) = reference();
        let nu = 1e14;
        // T → 0: energy tends to bν/2
        let u0 = zero_point_variant(1e-3, nu, &sp, c).unwrap();
        let e0 = u0 / (8.0 * PI * nu * nu / c.powi(3));
        assert_relative_eq!(e0, 0.5 * sp.b() * nu, max_relative = 1e-14);
        for &t in &[10.0, 300.0, 3000.0, 1e5] {
            let diff = zero_point_variant(t, nu, &sp, c).unwrap() - planck_u(t, nu, &sp, c).unwrap();
            assert_relative_eq!(diff, 8.0 * PI * nu * nu / c.powi(3) * sp.b() * nu / 2.0, max_relative = 1e-9);
        }
        // x → 0: variant / RJ → 1
        let t = 1e4;
        let nu = nu_for(1e-7, t, &sp);
        let ratio = zero_point_variant(t, nu, &sp, c).unwrap() / rayleigh_jeans_u(t, nu, k, c).unwrap();
        assert_relative_eq!(ratio, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn no_cancellation_at_tiny_x() {
        let (sp, k, c) = reference();
        let t = 1e4;
        let nu = nu_for(1e-12, t, &sp);
        let p = planck_u(t, nu, &sp, c).unwrap();
        assert!(p.is_finite());
        assert_relative_eq!(p, rayleigh_jeans_u(t, nu, k, c).unwrap(), max_relative = 1e-9);
    }

    #[test]
    fn domain_errors() {
        let (sp, k, c) = reference();
        assert!(matches!(planck_u(0.0, 1e12, &sp, c), Err(Error::Domain { name: "T", .. })));
        assert!(matches!(wien_u(300.0, -1.0, &sp, c), Err(Error::Domain { name: "nu", .. })));
        assert!(rayleigh_jeans_u(-5.0, 1e12, k, c).is_err());
        assert!(oscillator_energy(300.0, 0.0, &sp).is_err());
        assert!(SpectralParams::new(0.0, 1.0).is_err());
        assert!(SpectralParams::new(1.0, f64::NAN).is_err());
        assert!(bridge_u_from_e(-1.0, 1.0, c).is_err());
    }
}
