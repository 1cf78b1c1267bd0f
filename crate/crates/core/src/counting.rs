//! Microstate counting for `p` indistinguishable quanta on `n`
//! distinguishable oscillators, Boltzmann entropy, and the per-oscillator
//! entropy of the large-`n` limit.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{non_negative, positive, Error, Result};
use crate::special;

/// `n + p − 1` up to which [`count_microstates`] carries the exact integer.
///
/// Above it only `ln W` is computed, through log-factorials.
pub const EXACT_LIMIT: u64 = 1000;

/// Maximum number of compositions [`enumerate_compositions`] will produce.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// `W(n, p) = (n + p − 1)! / ((n − 1)! p!)` together with `ln W`.
#[derive(Debug, Clone, PartialEq)]
pub struct MicrostateCount {
    pub n: u64,
    pub p: u64,
    /// Exact count; `None` when `n + p − 1` exceeds [`EXACT_LIMIT`].
    pub w: Option<BigUint>,
    pub ln_w: f64,
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            requirement: "at least 1",
            value: 0.0,
        });
    }
    Ok(())
}

pub fn count_microstates(n: u64, p: u64) -> Result<MicrostateCount> {
    check_n(n)?;
    if n + p - 1 <= EXACT_LIMIT {
        let w = exact_microstates(n, p)?;
        let ln_w = ln_biguint(&w);
        Ok(MicrostateCount { n, p, w: Some(w), ln_w })
    } else {
        Ok(MicrostateCount {
            n,
            p,
            w: None,
            ln_w: ln_microstates(n, p)?,
        })
    }
}

/// Exact `W(n, p)` for any size, by the multiplicative binomial formula.
pub fn exact_microstates(n: u64, p: u64) -> Result<BigUint> {
    check_n(n)?;
    let total = n + p - 1;
    let k = p.min(n - 1);
    let mut w = BigUint::one();
    for i in 0..k {
        // each partial product is itself a binomial coefficient, so the
        // division is exact
        w *= total - i;
        w /= i + 1;
    }
    Ok(w)
}

/// `ln W(n, p)` through log-factorials.
pub fn ln_microstates(n: u64, p: u64) -> Result<f64> {
    check_n(n)?;
    Ok(special::ln_binomial(n + p - 1, p))
}

/// Natural log of an arbitrarily large integer `≥ 1`.
pub fn ln_biguint(w: &BigUint) -> f64 {
    let bits = w.bits();
    if bits <= 1000 {
        return w.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (w >> shift).to_u64().expect("64 leading bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Every `n`-tuple of non-negative integers summing to `p`, in
/// lexicographic order.
///
/// Refuses when the count exceeds [`ENUMERATION_LIMIT`].
pub fn enumerate_compositions(n: u64, p: u64) -> Result<Compositions> {
    check_n(n)?;
    let w = exact_microstates(n, p)?;
    if w > BigUint::from(ENUMERATION_LIMIT) {
        return Err(Error::EnumerationTooLarge {
            n,
            p,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut first = vec![0u64; n as usize];
    first[n as usize - 1] = p;
    Ok(Compositions { next: Some(first) })
}

/// Iterator returned by [`enumerate_compositions`].
#[derive(Debug, Clone)]
pub struct Compositions {
    next: Option<Vec<u64>>,
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        let len = current.len();
        // Successor in lexicographic order: find the rightmost position
        // before the last that can be incremented by borrowing from the tail.
        let mut succ = current.clone();
        let tail_sum = |v: &[u64], from: usize| v[from..].iter().sum::<u64>();
        let mut i = len.saturating_sub(1);
        while i > 0 {
            i -= 1;
            if tail_sum(&succ, i + 1) > 0 {
                let rest = tail_sum(&succ, i + 1) - 1;
                succ[i] += 1;
                for slot in succ.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                succ[len - 1] = rest;
                self.next = Some(succ);
                return Some(current);
            }
        }
        Some(current)
    }
}

/// Boltzmann entropy `k·ln W`, given `ln W`.
pub fn boltzmann_entropy(ln_w: f64, k: f64) -> Result<f64> {
    non_negative("ln W", ln_w)?;
    Ok(k * ln_w)
}

/// Boltzmann entropy of an exact count.
pub fn boltzmann_entropy_of(w: &BigUint, k: f64) -> Result<f64> {
    if w.bits() == 0 {
        return Err(Error::Domain {
            name: "W",
            requirement: "at least 1",
            value: 0.0,
        });
    }
    boltzmann_entropy(ln_biguint(w), k)
}

/// Entropy of one oscillator with mean energy `E` and quantum `ε`:
/// `k[(1 + y)ln(1 + y) − y ln y]`, `y = E/ε`.
///
/// Evaluated as `k[ln(1 + y) + y·ln(1 + 1/y)]`, a sum of positive terms.
/// `S(0) = 0` is the continuous extension.
pub fn entropy_per_oscillator(e: f64, epsilon: f64, k: f64) -> Result<f64> {
    non_negative("E", e)?;
    positive("epsilon", epsilon)?;
    let y = e / epsilon;
    if y == 0.0 {
        return Ok(0.0);
    }
    Ok(k * (y.ln_1p() + y * y.recip().ln_1p()))
}

/// The two-term Stirling form `z ln z − z` of `ln z!`.
///
/// Only used to illustrate how the per-oscillator entropy follows from
/// `ln W`; numerical code uses [`special::ln_factorial`].
pub fn stirling_ln_factorial(z: f64) -> Result<f64> {
    positive("z", z)?;
    Ok(z * z.ln() - z)
}

/// A total energy expressed as an integer number of quanta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizedEnergy {
    pub e_total: f64,
    pub epsilon: f64,
    pub p: u64,
}

/// Rounds `E/ε` to a nearby integer, ties to even.
pub fn quantize_energy(e_total: f64, epsilon: f64) -> Result<QuantizedEnergy> {
    non_negative("E_total", e_total)?;
    positive("epsilon", epsilon)?;
    let quotient = e_total / epsilon;
    if quotient > u64::MAX as f64 {
        return Err(Error::Domain {
            name: "E_total/epsilon",
            requirement: "representable as a 64-bit quanta count",
            value: quotient,
        });
    }
    Ok(QuantizedEnergy {
        e_total,
        epsilon,
        p: quotient.round_ties_even() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn small_counts() {
        assert_eq!(count_microstates(2, 2).unwrap().w, Some(BigUint::from(3u32)));
        assert_eq!(count_microstates(1, 7).unwrap().w, Some(BigUint::one()));
        assert_eq!(count_microstates(5, 0).unwrap().w, Some(BigUint::one()));
        assert_eq!(count_microstates(5, 5).unwrap().w, Some(BigUint::from(126u32)));
        assert!(matches!(count_microstates(0, 3), Err(Error::Domain { name: "n", .. })));
    }

    #[test]
    fn large_counts_switch_to_log_path() {
        let c = count_microstates(1_000_000, 1_000_000).unwrap();
        assert!(c.w.is_none());
        assert!(c.ln_w > 1.38e6);
        let at_limit = count_microstates(500, 501).unwrap();
        assert!(at_limit.w.is_some());
        assert!(count_microstates(500, 502).unwrap().w.is_none());
    }

    #[test]
    fn enumeration_lists_in_order() {
        let all: Vec<_> = enumerate_compositions(2, 2).unwrap().collect();
        assert_eq!(all, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let unit: Vec<_> = enumerate_compositions(3, 1).unwrap().collect();
        assert_eq!(unit, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(enumerate_compositions(1, 4).unwrap().collect::<Vec<_>>(), vec![vec![4]]);
        assert_eq!(enumerate_compositions(4, 0).unwrap().collect::<Vec<_>>(), vec![vec![0; 4]]);
    }

    #[test]
    fn enumeration_guard() {
        // W(10, 20) = C(29, 9) = 10015005 > 10⁶
        assert!(matches!(
            enumerate_compositions(10, 20),
            Err(Error::EnumerationTooLarge { .. })
        ));
        // W(7, 20) = C(26, 6) = 230230
        assert_eq!(enumerate_compositions(7, 20).unwrap().count(), 230_230);
    }

    #[test]
    fn boltzmann_entropy_cases() {
        assert_eq!(boltzmann_entropy_of(&BigUint::one(), 1.380649e-23).unwrap(), 0.0);
        let w = count_microstates(2, 2).unwrap().w.unwrap();
        assert_relative_eq!(boltzmann_entropy_of(&w, 1.0).unwrap(), 3f64.ln(), max_relative = 1e-15);
        let s12 = boltzmann_entropy_of(&(BigUint::from(6u32) * BigUint::from(35u32)), 1.0).unwrap();
        let s1 = boltzmann_entropy_of(&BigUint::from(6u32), 1.0).unwrap();
        let s2 = boltzmann_entropy_of(&BigUint::from(35u32), 1.0).unwrap();
        assert_relative_eq!(s12, s1 + s2, max_relative = 1e-15);
        assert!(boltzmann_entropy_of(&BigUint::from(0u32), 1.0).is_err());
    }

    #[test]
    fn entropy_per_oscillator_cases() {
        assert_relative_eq!(entropy_per_oscillator(1.0, 1.0, 1.0).unwrap(), 2.0 * LN_2, max_relative = 1e-15);
        assert_eq!(entropy_per_oscillator(0.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(entropy_per_oscillator(1e-300, 1.0, 1.0).unwrap() < 1e-296);
        assert!(entropy_per_oscillator(-1.0, 1.0, 1.0).is_err());
        assert!(entropy_per_oscillator(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn entropy_from_large_count() {
        // (1/n) ln W(n, n) = 2 ln 2 − (½ ln(πn) + ln 2)/n + O(1/n²)
        let n = 1_000_000u64;
        let per = ln_microstates(n, n).unwrap() / n as f64;
        let s = entropy_per_oscillator(1.0, 1.0, 1.0).unwrap();
        let nf = n as f64;
        let predicted = -(0.5 * (std::f64::consts::PI * nf).ln() + LN_2) / nf;
        assert_relative_eq!(per - s, predicted, max_relative = 1e-4);
        assert!(((per - s) / s).abs() < 6e-6);
    }

    #[test]
    fn stirling_two_term_form() {
        let z = 1e6;
        let exact = special::ln_factorial(1_000_000);
        assert!(((stirling_ln_factorial(z).unwrap() - exact) / exact).abs() < 1e-6);
        assert_eq!(stirling_ln_factorial(1.0).unwrap(), -1.0);
        let rel10 = (stirling_ln_factorial(10.0).unwrap() - special::ln_factorial(10)).abs()
            / special::ln_factorial(10);
        assert!((rel10 - 0.1376).abs() < 1e-3, "{rel10}");
    }

    #[test]
    fn quantize_rounding() {
        let eps = 0.25;
        assert_eq!(quantize_energy(5.0 * eps, eps).unwrap().p, 5);
        assert_eq!(quantize_energy(2.5 * eps, eps).unwrap().p, 2);
        assert_eq!(quantize_energy(3.5 * eps, eps).unwrap().p, 4);
        assert_eq!(quantize_energy(2.4999 * eps, eps).unwrap().p, 2);
        let q = quantize_energy(7.3, 1.0).unwrap();
        assert!((q.e_total / q.epsilon - q.p as f64).abs() <= 0.5);
        assert!(quantize_energy(1.0, 0.0).is_err());
    }

    #[test]
    fn ln_of_huge_integer() {
        let w = exact_microstates(3000, 3000).unwrap();
        assert!(w.bits() > 1000);
        assert_relative_eq!(ln_biguint(&w), ln_microstates(3000, 3000).unwrap(), max_relative = 1e-13);
    }
}
