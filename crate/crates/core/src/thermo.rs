//! From oscillator entropy to oscillator energy through `dS/dE = 1/T`.
//!
//! The quantum of a mode is always `ε = hν`: callers supply `h` and `ν` and
//! [`EnergyQuantum::for_mode`] forms the product. The same module carries
//! the curvature route (`d²S/dE² = −α/(E(E + β))`, integrated once) and the
//! entropy that reproduces Wien's law.

use crate::error::{positive, Result};
use crate::numerics;
use crate::spectral::{bose_factor, SpectralParams};

/// Energy quantum `ε = hν` of an oscillator mode, J.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyQuantum(f64);

impl EnergyQuantum {
    pub fn for_mode(h: f64, nu: f64) -> Result<Self> {
        Ok(Self(positive("h", h)? * positive("nu", nu)?))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// First and second energy derivatives of the per-oscillator entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyDerivatives {
    /// Inverse temperature, 1/K.
    pub ds_de: f64,
    /// 1/(K·J); negative for a stable system.
    pub d2s_de2: f64,
}

/// `dS/dE = (k/ε)·ln(1 + ε/E)`.
pub fn ds_de(e: f64, quantum: EnergyQuantum, k: f64) -> Result<f64> {
    positive("E", e)?;
    let eps = quantum.value();
    Ok(k / eps * (eps / e).ln_1p())
}

/// `d²S/dE² = −k/(E(E + ε))`.
pub fn d2s_de2(e: f64, quantum: EnergyQuantum, k: f64) -> Result<f64> {
    positive("E", e)?;
    Ok(-k / (e * (e + quantum.value())))
}

pub fn entropy_derivatives(e: f64, quantum: EnergyQuantum, k: f64) -> Result<EntropyDerivatives> {
    Ok(EntropyDerivatives {
        ds_de: ds_de(e, quantum, k)?,
        d2s_de2: d2s_de2(e, quantum, k)?,
    })
}

/// Mean energy at temperature `T`: `E = hν/(exp(hν/kT) − 1)`, the solution
/// of `dS/dE = 1/T`.
pub fn energy_from_temperature(t: f64, nu: f64, h: f64, k: f64) -> Result<f64> {
    positive("T", t)?;
    positive("k", k)?;
    let eps = EnergyQuantum::for_mode(h, nu)?.value();
    Ok(eps * bose_factor(eps / (k * t)))
}

/// Solves `dS/dE = 1/T` numerically, bracketing between half the Wien
/// energy `ε·e^(−hν/kT)` and `2kT`. Used to check the closed form.
pub fn energy_from_temperature_by_bisection(t: f64, nu: f64, h: f64, k: f64) -> Result<f64> {
    positive("T", t)?;
    positive("k", k)?;
    let quantum = EnergyQuantum::for_mode(h, nu)?;
    let eps = quantum.value();
    let lo = 0.5 * eps * (-eps / (k * t)).exp();
    positive("Wien-energy bracket", lo)?;
    let hi = 2.0 * k * t;
    // dS/dE · T − 1 decreases through zero on the bracket
    let g = |e: f64| ds_de(e, quantum, k).map_or(f64::NAN, |d| d * t - 1.0);
    Ok(numerics::bisect_geometric(g, lo, hi, 1e-13).expect("bracket encloses the root"))
}

/// Planck's interpolation: integrate `d²S/dE² = −α/(E(E + β))` once to
/// `dS/dE = (α/β)·ln((E + β)/E)` and solve `dS/dE = 1/T`, giving
/// `E = β/(exp(β/(αT)) − 1)`.
pub fn october_interpolation(alpha: f64, beta: f64, t: f64) -> Result<f64> {
    positive("alpha", alpha)?;
    positive("beta", beta)?;
    positive("T", t)?;
    Ok(beta * bose_factor(beta / (alpha * t)))
}

/// `dS/dE` of the curvature route, `(α/β)·ln((E + β)/E)`.
pub fn october_ds_de(e: f64, alpha: f64, beta: f64) -> Result<f64> {
    positive("E", e)?;
    Ok(alpha / beta * (positive("beta", beta)? / e).ln_1p())
}

/// Entropy producing Wien's law: `S = −(E/(aν))·[ln(E/(bν)) − 1]`.
///
/// Defined for `E > 0`; above `E = bν` it decreases.
pub fn wien_entropy(e: f64, nu: f64, sp: &SpectralParams) -> Result<f64> {
    positive("E", e)?;
    positive("nu", nu)?;
    let scale = sp.a() * nu;
    Ok(-(e / scale) * ((e / (sp.b() * nu)).ln() - 1.0))
}

/// `dS/dE = −ln(E/(bν))/(aν)` of [`wien_entropy`].
pub fn wien_ds_de(e: f64, nu: f64, sp: &SpectralParams) -> Result<f64> {
    positive("E", e)?;
    positive("nu", nu)?;
    Ok(-(e / (sp.b() * nu)).ln() / (sp.a() * nu))
}

/// Solution of `wien_ds_de = 1/T`: `E = bν·exp(−aν/T)`.
pub fn wien_energy_from_temperature(t: f64, nu: f64, sp: &SpectralParams) -> Result<f64> {
    positive("T", t)?;
    positive("nu", nu)?;
    Ok(sp.b() * nu * (-sp.reduced_frequency(t, nu)).exp())
}

/// Tolerance of [`scaling_form_check`].
pub const SCALING_TOLERANCE: f64 = 1e-10;

/// Whether `S(λE, λν) = S(E, ν)`, i.e. `S` depends on `E/ν` only, within
/// a relative [`SCALING_TOLERANCE`].
pub fn scaling_form_check<S>(entropy: S, e: f64, nu: f64, lambda: f64) -> bool
where
    S: Fn(f64, f64) -> f64,
{
    if lambda.is_nan() || lambda <= 0.0 {
        return false;
    }
    let base = entropy(e, nu);
    let scaled = entropy(lambda * e, lambda * nu);
    if !(base.is_finite() && scaled.is_finite()) {
        return false;
    }
    (scaled - base).abs() <= SCALING_TOLERANCE * base.abs().max(f64::MIN_POSITIVE)
}
