//! Frequency integrals of the radiation laws and the location of the
//! spectral maximum.
//!
//! Integrals over `[0, ∞)` are truncated where `x = aν/T` reaches
//! [`REDUCED_CUTOFF`]; the integrands are smooth and decay like `x³e⁻ˣ`,
//! so the remainder is bounded analytically ([`bose_tail_bound`]) and
//! folded into the reported error instead of transforming the interval.

use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::error::{positive, Error, Result};
use crate::numerics::{self, QuadratureResult};
use crate::spectral::{self, bose_factor, Law, SpectralParams};

/// Upper end of the reduced variable `x = aν/T` for the quadrature.
pub const REDUCED_CUTOFF: f64 = 50.0;

const REL_TOL: f64 = 1e-13;
const MAX_SEGMENTS: usize = 2000;

/// Upper bound on `∫_L^∞ x³/(eˣ − 1) dx`.
///
/// Uses `1/(eˣ − 1) ≤ e⁻ˣ/(1 − e⁻ᴸ)` and `∫_L^∞ x³e⁻ˣ = e⁻ᴸ(L³ + 3L² + 6L + 6)`.
/// The same bound covers the Wien integrand `x³e⁻ˣ`.
pub fn bose_tail_bound(cutoff: f64) -> f64 {
    let l = cutoff;
    (-l).exp() * (l.powi(3) + 3.0 * l * l + 6.0 * l + 6.0) / -(-l).exp_m1()
}

/// `x³/(eˣ − 1)`, extended by zero at `x = 0`.
pub fn bose_integrand(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.powi(3) * bose_factor(x)
    }
}

/// `∫₀^∞ x³/(eˣ − 1) dx` (closed form `π⁴/15`) by quadrature over
/// `[0, 50]`; the tail bound is included in `est_error`.
pub fn reduced_bose_integral() -> QuadratureResult {
    let mut r = numerics::integrate(bose_integrand, 0.0, REDUCED_CUTOFF, 1e-15, 0.0, MAX_SEGMENTS);
    r.est_error += bose_tail_bound(REDUCED_CUTOFF);
    r
}

/// Frequency-integrated energy density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalEnergy {
    /// J/m³
    pub result: QuadratureResult,
    /// Upper frequency limit used, Hz, when a cutoff was requested.
    pub cutoff: Option<f64>,
    /// Set for the Rayleigh-Jeans law, whose value grows as `cutoff³`
    /// without bound.
    pub divergent: bool,
}

/// `U(T) = ∫ u(T, ν) dν`, integrated directly in `ν`.
///
/// Planck and Wien are integrated over `[0, min(cutoff, 50·T/a)]`; the
/// Rayleigh-Jeans law needs an explicit cutoff and is flagged divergent.
pub fn total_energy_density(
    t: f64,
    law: Law,
    sp: &SpectralParams,
    c: f64,
    cutoff: Option<f64>,
) -> Result<TotalEnergy> {
    positive("T", t)?;
    if let Some(nu_c) = cutoff {
        positive("cutoff", nu_c)?;
    }
    let nu_scale = t / sp.a();
    let u = |nu: f64| {
        if nu <= 0.0 {
            0.0
        } else {
            spectral::evaluate(law, t, nu, sp, c).unwrap_or(f64::NAN)
        }
    };
    match law {
        Law::RayleighJeans => {
            let nu_c = cutoff.ok_or(Error::UltravioletCatastrophe)?;
            let result = numerics::integrate(u, 0.0, nu_c, REL_TOL, 0.0, MAX_SEGMENTS);
            Ok(TotalEnergy {
                result,
                cutoff,
                divergent: true,
            })
        }
        Law::Planck | Law::Wien => {
            let natural = REDUCED_CUTOFF * nu_scale;
            let upper = cutoff.map_or(natural, |nu_c| nu_c.min(natural));
            let mut result = numerics::integrate(u, 0.0, upper, REL_TOL, 0.0, MAX_SEGMENTS);
            if upper >= natural {
                result.est_error += 8.0 * PI * sp.b() / c.powi(3) * nu_scale.powi(4) * bose_tail_bound(REDUCED_CUTOFF);
            }
            Ok(TotalEnergy {
                result,
                cutoff,
                divergent: false,
            })
        }
    }
}

/// Closed form of the Planck integral, `(8πb/c³)(T/a)⁴·π⁴/15`.
pub fn planck_total_closed_form(t: f64, sp: &SpectralParams, c: f64) -> f64 {
    8.0 * PI * sp.b() / c.powi(3) * (t / sp.a()).powi(4) * PI.powi(4) / 15.0
}

/// Closed form of the Wien integral, `(8πb/c³)(T/a)⁴·Γ(4)`.
pub fn wien_total_closed_form(t: f64, sp: &SpectralParams, c: f64) -> f64 {
    8.0 * PI * sp.b() / c.powi(3) * (t / sp.a()).powi(4) * 6.0
}

/// Closed form of the Rayleigh-Jeans integral up to `cutoff`, `8πkTν_c³/(3c³)`.
pub fn rayleigh_jeans_total_closed_form(t: f64, k: f64, c: f64, cutoff: f64) -> f64 {
    8.0 * PI * k * t * cutoff.powi(3) / (3.0 * c.powi(3))
}

/// Root of `x = 3(1 − e⁻ˣ)` on `[2, 3]` by bisection down to the last
/// representable bracket.
pub fn peak_reduced_frequency() -> f64 {
    numerics::bisect(peak_condition, 2.0, 3.0, 0.0).expect("sign change on [2, 3]")
}

/// `x − 3(1 − e⁻ˣ)`; zero at the maximum of `x³/(eˣ − 1)`.
pub fn peak_condition(x: f64) -> f64 {
    x + 3.0 * (-x).exp_m1()
}

/// Maximizes `x³/(eˣ − 1)` directly by golden-section search.
///
/// Objective values at nearby points are compared through
/// `ln f(x₂) − ln f(x₁) = 3·ln(1 + d/x₁) − ln(1 + e^{x₁}·expm1(d)/expm1(x₁))`
/// with `d = x₂ − x₁`, which stays accurate where the two values agree to
/// more digits than a subtraction would resolve.
pub fn peak_reduced_frequency_golden() -> f64 {
    numerics::golden_section_max(compare_bose_objective, 2.0, 3.0, 1e-13)
}

fn compare_bose_objective(x1: f64, x2: f64) -> Ordering {
    let d = x2 - x1;
    let log_ratio = 3.0 * (d / x1).ln_1p() - (x1.exp() * d.exp_m1() / x1.exp_m1()).ln_1p();
    // log_ratio = ln f(x2) − ln f(x1)
    0.0.partial_cmp(&log_ratio).unwrap_or(Ordering::Equal)
}

/// Frequency of maximal Planck energy density, `(T/a)·x*`.
pub fn peak_frequency(t: f64, sp: &SpectralParams) -> Result<f64> {
    positive("T", t)?;
    Ok(t / sp.a() * peak_reduced_frequency())
}

/// Maximum of Wien's law: `d/dx x³e⁻ˣ = 0` at `x = 3`.
pub fn wien_peak_frequency(t: f64, sp: &SpectralParams) -> Result<f64> {
    positive("T", t)?;
    Ok(3.0 * t / sp.a())
}
