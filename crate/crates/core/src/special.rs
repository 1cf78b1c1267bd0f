//! Log-factorials and log-binomials for large arguments.
//!
//! `ln n!` is split as Stirling's series plus a correction
//! `δ(n) = ln n! − [(n + ½)ln n − n + ½ln 2π]`. For `n < 16` the
//! correction comes from an exact table sum; above that from the
//! asymptotic series, which is below 1e−17 in absolute error there.
//! [`ln_binomial`] combines the corrections so the large `n ln n`
//! terms never cancel against each other.

use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SERIES_CUTOFF: u64 = 16;

/// `δ(n) = ln n! − (n + ½)ln n + n − ½ln 2π` for `n ≥ 1`.
fn stirling_correction(n: u64) -> f64 {
    debug_assert!(n >= 1);
    if n < SERIES_CUTOFF {
        let exact: f64 = (2..=n).map(|i| (i as f64).ln()).sum();
        let x = n as f64;
        return exact - ((x + 0.5) * x.ln() - x + LN_SQRT_2PI);
    }
    let x = n as f64;
    let x2 = x * x;
    // Bernoulli terms B_{2m} / (2m(2m−1) x^{2m−1})
    (1.0 / 12.0
        - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * x2)) / x2) / x2) / x2)
        / x
}

/// `ln n!`.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let x = n as f64;
    (x + 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_correction(n)
}

/// `ln Γ(x)` for real `x > 0`.
///
/// Shifts the argument up to at least 16 with `Γ(x + 1) = xΓ(x)` and then
/// applies Stirling's series.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0");
    let mut z = x;
    let mut shift = 1.0;
    while z < SERIES_CUTOFF as f64 {
        shift *= z;
        z += 1.0;
    }
    let z2 = z * z;
    let series = (1.0 / 12.0
        - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * z2)) / z2) / z2) / z2)
        / z;
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series - shift.ln()
}

/// `ln C(n, k)` without cancellation between the log-factorials.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_binomial requires k <= n");
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if k < 8 {
        // short product; exact enough and avoids the split entirely
        return (0..k)
            .map(|i| ((n - i) as f64 / (i + 1) as f64).ln())
            .sum();
    }
    let m = n - k;
    let (nf, kf, mf) = (n as f64, k as f64, m as f64);
    // n ln n − k ln k − m ln m = k ln(n/k) + m ln(n/m), both terms positive
    let entropy_part = kf * (nf / kf).ln() - mf * (-kf / nf).ln_1p();
    let prefactor = 0.5 * (nf / (2.0 * PI * kf * mf)).ln();
    entropy_part + prefactor + stirling_correction(n) - stirling_correction(k) - stirling_correction(m)
}
