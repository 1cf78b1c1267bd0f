//! Adaptive Gauss-Kronrod quadrature, bisection and golden-section search.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Output of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Estimated absolute error, always non-negative.
    pub est_error: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

// 15-point Kronrod nodes on [−1, 1] (non-negative half) with the embedded
// 7-point Gauss rule on the odd indices.
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[lo, hi]`, bisecting the worst segment until the
/// summed error estimate is below `rel_tol·|value|` (or `abs_tol`) or
/// `max_segments` is reached.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_segments: usize,
) -> QuadratureResult {
    let (value, error) = kronrod15(&f, lo, hi);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { lo, hi, value, error });
    let mut total_value = value;
    let mut total_error = error;
    while total_error > abs_tol.max(rel_tol * total_value.abs()) && heap.len() < max_segments {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let (v1, e1) = kronrod15(&f, worst.lo, mid);
        let (v2, e2) = kronrod15(&f, mid, worst.hi);
        evaluations += 30;
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        heap.push(Segment { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Segment { lo: mid, hi: worst.hi, value: v2, error: e2 });
    }
    // resum to shed the drift of the running totals
    let value = heap.iter().map(|s| s.value).sum();
    let est_error = heap.iter().map(|s| s.error).sum::<f64>().max(0.0);
    QuadratureResult {
        value,
        est_error,
        evaluations,
    }
}

/// Finds a sign change of `f` in `[lo, hi]` by bisection.
///
/// Stops when the bracket is narrower than `abs_tol`, or when the
/// midpoint can no longer be separated from an endpoint.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, abs_tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    while hi - lo > abs_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Bisection on a logarithmic scale for positive brackets spanning many
/// decades, stopping at relative width `rel_tol`.
pub fn bisect_geometric<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Option<f64> {
    assert!(lo > 0.0 && hi > lo);
    bisect(|ln_x| f(ln_x.exp()), lo.ln(), hi.ln(), rel_tol).map(f64::exp)
}

/// Golden-section search for the maximum of an objective on `[lo, hi]`.
///
/// `compare(x1, x2)` orders the objective values at two abscissae; passing
/// a comparison rather than values lets callers compare near-equal values
/// without the rounding floor of a plain subtraction.
pub fn golden_section_max<C: Fn(f64, f64) -> Ordering>(
    compare: C,
    mut lo: f64,
    mut hi: f64,
    abs_tol: f64,
) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    while hi - lo > abs_tol {
        if compare(x1, x2) == Ordering::Less {
            // maximum lies right of x1
            lo = x1;
            x1 = x2;
            x2 = lo + inv_phi * (hi - lo);
        } else {
            hi = x2;
            x2 = x1;
            x1 = hi - inv_phi * (hi - lo);
        }
        if !(x1 > lo && x2 < hi) {
            break;
        }
    }
    0.5 * (lo + hi)
}
