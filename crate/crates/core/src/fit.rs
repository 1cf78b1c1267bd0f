//! Recovering `(a, b)` from spectra, and `N`, `e`, `h`, `k` from `(a, b)`.
//!
//! The fit minimises `Σ (ln u_model − ln u_obs)²`. Log residuals weight
//! every decade of the spectrum equally. Parameters are fitted as
//! `ln a` and `ln b`, which keeps both positive.
//!
//! Damping schedule (Marquardt scaling of the normal matrix diagonal):
//! start at `λ = 1e−3`; on an accepted step (objective strictly smaller)
//! divide `λ` by 10, down to `1e−12`; on a rejected step multiply by 10.
//! The fit converges once an accepted step changes every parameter by
//! less than `step_tolerance` relative, or once a rejected step is already
//! that small (no representable improvement left). Reaching
//! `max_iterations` (default 200) ends the fit with `converged = false`.

use std::f64::consts::PI;

use nalgebra::{SMatrix, SVector};
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::constants::PhysicalConstants;
use crate::error::{non_negative, positive, Error, Result};
use crate::spectral::{planck_u, SpectralParams, SpectrumSample};
use crate::table::SpectrumTable;

/// Builds Planck spectra on a `T × ν` grid with multiplicative Gaussian
/// noise `u·(1 + noise_rel·g)`, `g ~ N(0, 1)` from a seeded xoshiro256++.
///
/// Negative noisy values (only possible for large `noise_rel`) are
/// clamped to zero.
pub fn synthesize_spectrum(
    temperatures: &[f64],
    nu_grid: &[f64],
    sp: &SpectralParams,
    c: f64,
    noise_rel: f64,
    seed: u64,
) -> Result<SpectrumTable> {
    non_negative("noise_rel", noise_rel)?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(temperatures.len() * nu_grid.len());
    for &t in temperatures {
        for &nu in nu_grid {
            let clean = planck_u(t, nu, sp, c)?;
            let u = if noise_rel == 0.0 {
                clean
            } else {
                let g: f64 = StandardNormal.sample(&mut rng);
                (clean * (1.0 + noise_rel * g)).max(0.0)
            };
            rows.push(SpectrumSample::new(nu, t, u)?);
        }
    }
    SpectrumTable::new(
        rows,
        format!(
            "synthetic Planck spectrum a={:e} b={:e} noise_rel={} seed={}",
            sp.a(),
            sp.b(),
            noise_rel,
            seed
        ),
    )
}

/// Fit controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Starting point; estimated from the data when `None`.
    pub init: Option<SpectralParams>,
    /// Fit an overall amplitude factor instead of `b`.
    ///
    /// The amplitude and `b` only enter as a product, so with the amplitude
    /// free `b` stays at its starting value (which then has to come from
    /// `init`) and only `a` is determined by the data.
    pub free_amplitude: bool,
    pub max_iterations: usize,
    pub step_tolerance: f64,
    /// Log-residual RMS above which the model is reported as a misfit.
    pub misfit_rms: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            init: None,
            free_amplitude: false,
            max_iterations: 200,
            step_tolerance: 1e-12,
            misfit_rms: 0.05,
        }
    }
}

/// Outcome of [`fit_ab`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// K·s
    pub a: f64,
    /// J·s
    pub b: f64,
    /// Fitted amplitude factor when [`FitOptions::free_amplitude`] is set.
    pub amplitude: Option<f64>,
    /// RMS of the log residuals, i.e. a relative error.
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `residual_rms` exceeded [`FitOptions::misfit_rms`].
    pub misfit: bool,
    /// Half sum of squared residuals after the start and after each
    /// accepted step.
    pub objective_history: Vec<f64>,
}

impl FitResult {
    pub fn params(&self) -> Result<SpectralParams> {
        SpectralParams::new(self.a, self.b)
    }
}

/// `ln(eˣ − 1)` for `x > 0`, written as `x + ln(1 − e⁻ˣ)`.
fn ln_expm1(x: f64) -> f64 {
    x + (-(-x).exp_m1()).ln()
}

struct Problem<'a> {
    rows: &'a [SpectrumSample],
    ln_u: Vec<f64>,
    ln_mode: Vec<f64>,
    free_amplitude: bool,
    fixed_ln_b: f64,
}

impl Problem<'_> {
    /// θ = (ln a, ln b) or (ln a, ln A). Returns residuals and Jacobian rows.
    fn evaluate(&self, theta: &SVector<f64, 2>) -> (Vec<f64>, Vec<[f64; 2]>) {
        let a = theta[0].exp();
        let ln_scale = if self.free_amplitude {
            self.fixed_ln_b + theta[1]
        } else {
            theta[1]
        };
        let mut res = Vec::with_capacity(self.rows.len());
        let mut jac = Vec::with_capacity(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let x = a * row.nu / row.t;
            let model = self.ln_mode[i] + ln_scale - ln_expm1(x);
            res.push(model - self.ln_u[i]);
            jac.push([-x / -(-x).exp_m1(), 1.0]);
        }
        (res, jac)
    }

    fn objective(&self, theta: &SVector<f64, 2>) -> f64 {
        0.5 * self.evaluate(theta).0.iter().map(|r| r * r).sum::<f64>()
    }
}

/// Starting `(a, b)` from the Wien regime: regress
/// `ln u − 3 ln ν − ln(8π/c³)` on `ν/T` over the quarter of rows with the
/// largest `ν/T`; the slope is `−a` and the intercept `ln b`.
pub fn initial_guess(table: &SpectrumTable, c: f64) -> Result<SpectralParams> {
    let mut rows: Vec<&SpectrumSample> = table.rows().iter().collect();
    rows.sort_by(|p, q| (p.nu / p.t).total_cmp(&(q.nu / q.t)));
    let take = (rows.len() / 4).max(2).min(rows.len());
    let block = &rows[rows.len() - take..];
    let ln_mode_const = (8.0 * PI / c.powi(3)).ln();
    let pts: Vec<(f64, f64)> = block
        .iter()
        .map(|r| (r.nu / r.t, r.u.ln() - 3.0 * r.nu.ln() - ln_mode_const))
        .collect();
    let n = pts.len() as f64;
    let mz = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let szz: f64 = pts.iter().map(|p| (p.0 - mz).powi(2)).sum();
    let szy: f64 = pts.iter().map(|p| (p.0 - mz) * (p.1 - my)).sum();
    let slope = if szz > 0.0 { szy / szz } else { 0.0 };
    if slope < 0.0 && slope.is_finite() {
        return SpectralParams::new(-slope, (my - slope * mz).exp());
    }
    // not Wien-like: put x ≈ 1 at the block and match its amplitude
    let a = 1.0 / mz;
    let r = block[block.len() - 1];
    let x = a * r.nu / r.t;
    let b = r.u * c.powi(3) / (8.0 * PI * r.nu.powi(3)) * x.exp_m1();
    SpectralParams::new(a, b)
}

/// Fits Planck's law to a table by damped least squares on log residuals.
pub fn fit_ab(table: &SpectrumTable, c: f64, options: &FitOptions) -> Result<FitResult> {
    positive("c", c)?;
    let rows = table.rows();
    for r in rows {
        if r.u.is_nan() || r.u <= 0.0 {
            return Err(Error::Domain {
                name: "u",
                requirement: "positive for a log-space fit",
                value: r.u,
            });
        }
    }
    let mut ratios: Vec<f64> = rows.iter().map(|r| r.nu / r.t).collect();
    ratios.sort_by(f64::total_cmp);
    ratios.dedup();
    if ratios.len() < 2 {
        return Err(Error::IllPosed(
            "need at least two distinct values of ν/T".to_string(),
        ));
    }
    if options.free_amplitude && options.init.is_none() {
        return Err(Error::IllPosed(
            "a free amplitude needs an initial b to hold fixed".to_string(),
        ));
    }
    let init = match options.init {
        Some(p) => p,
        None => initial_guess(table, c)?,
    };
    let problem = Problem {
        rows,
        ln_u: rows.iter().map(|r| r.u.ln()).collect(),
        ln_mode: rows
            .iter()
            .map(|r| (8.0 * PI * r.nu.powi(3) / c.powi(3)).ln())
            .collect(),
        free_amplitude: options.free_amplitude,
        fixed_ln_b: init.b().ln(),
    };
    let mut theta = SVector::<f64, 2>::new(
        init.a().ln(),
        if options.free_amplitude { 0.0 } else { init.b().ln() },
    );
    let mut objective = problem.objective(&theta);
    let mut history = vec![objective];
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        let (res, jac) = problem.evaluate(&theta);
        let mut jtj = SMatrix::<f64, 2, 2>::zeros();
        let mut grad = SVector::<f64, 2>::zeros();
        for (r, j) in res.iter().zip(&jac) {
            for p in 0..2 {
                grad[p] += j[p] * r;
                for q in 0..2 {
                    jtj[(p, q)] += j[p] * j[q];
                }
            }
        }
        if grad.iter().all(|g| *g == 0.0) {
            converged = true;
            break;
        }
        let mut damped = jtj;
        for p in 0..2 {
            damped[(p, p)] *= 1.0 + lambda;
        }
        let Some(step) = damped.lu().solve(&(-grad)) else {
            lambda *= 10.0;
            continue;
        };
        let small = step.iter().all(|s| s.abs() < options.step_tolerance);
        let candidate = theta + step;
        let trial = problem.objective(&candidate);
        if trial < objective {
            theta = candidate;
            objective = trial;
            history.push(objective);
            lambda = (lambda / 10.0).max(1e-12);
            if small {
                converged = true;
                break;
            }
        } else {
            if small {
                converged = true;
                break;
            }
            lambda *= 10.0;
        }
    }
    let a = theta[0].exp();
    let (b, amplitude) = if options.free_amplitude {
        (init.b(), Some(theta[1].exp()))
    } else {
        (theta[1].exp(), None)
    };
    let residual_rms = (2.0 * objective / rows.len() as f64).sqrt();
    Ok(FitResult {
        a,
        b,
        amplitude,
        residual_rms,
        iterations,
        converged,
        misfit: residual_rms > options.misfit_rms,
        objective_history: history,
    })
}

/// Avogadro's number from a fit, `N = (a/b)·R`.
pub fn avogadro_from_ab(fit: &FitResult, r: f64) -> Result<f64> {
    if !fit.converged {
        return Err(Error::NotConverged {
            iterations: fit.iterations,
        });
    }
    positive("R", r)?;
    Ok(fit.a / fit.b * r)
}

/// Elementary charge `e = F/N`.
pub fn elementary_charge_from_n(n: f64, f: f64) -> Result<f64> {
    positive("N", n)?;
    positive("F", f)?;
    Ok(f / n)
}

/// Constants implied by a fit, compared against reference values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationCheck {
    /// Implied `h = b`.
    pub h: f64,
    /// Implied `k = b/a`.
    pub k: f64,
    pub h_rel_deviation: f64,
    pub k_rel_deviation: f64,
    pub consistent: bool,
}

/// Compares the fitted `b` and `b/a` against `pc.h` and `pc.k`.
///
/// A spectrum scaled by a calibration factor is fitted perfectly by a
/// rescaled `b`, so residuals alone cannot reveal it; this check can.
pub fn check_calibration(fit: &FitResult, pc: &PhysicalConstants, rel_tol: f64) -> CalibrationCheck {
    let h = fit.b;
    let k = fit.b / fit.a;
    let h_rel_deviation = (h / pc.h - 1.0).abs();
    let k_rel_deviation = (k / pc.k - 1.0).abs();
    CalibrationCheck {
        h,
        k,
        h_rel_deviation,
        k_rel_deviation,
        consistent: h_rel_deviation <= rel_tol && k_rel_deviation <= rel_tol,
    }
}

/// Geometric grid of `points` frequencies from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    positive("nu_min", lo)?;
    positive("nu_max", hi)?;
    if points == 0 || (points > 1 && hi <= lo) {
        return Err(Error::Domain {
            name: "nu_max",
            requirement: "greater than nu_min (with at least one point)",
            value: hi,
        });
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo * (ratio * i as f64).exp()
            }
        })
        .collect())
}
