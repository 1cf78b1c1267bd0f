//! Monte Carlo sampling of oscillator microstates.
//!
//! A microstate is a composition of `p` quanta over `n` oscillators. Each
//! of the `W(n, p)` compositions is drawn with probability exactly `1/W`
//! through the stars-and-bars bijection: choose `n − 1` bar positions
//! uniformly among `n + p − 1` slots (partial Fisher-Yates, no rejection),
//! and read the occupations off the gaps between bars.
//!
//! Random numbers come from xoshiro256++ seeded with SplitMix64
//! (`SeedableRng::seed_from_u64`). Bounded integers use Lemire's
//! multiply-shift method with rejection, so a stream is fully determined
//! by the seed. Shard `i` of a sharded run uses the seed's generator
//! advanced by `i` jumps of 2¹²⁸ steps.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::counting::{self, entropy_per_oscillator};
use crate::error::{Error, Result};
use crate::table::{format_sci, parse_csv_records};

/// Monte Carlo run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub n: u64,
    pub p: u64,
    pub samples: u64,
    pub seed: u64,
    /// Number of independent streams; results depend on it but not on
    /// thread scheduling.
    pub shards: u32,
}

impl SimConfig {
    pub fn new(n: u64, p: u64, samples: u64, seed: u64) -> Result<Self> {
        let cfg = Self {
            n,
            p,
            samples,
            seed,
            shards: 1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_shards(mut self, shards: u32) -> Result<Self> {
        self.shards = shards;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let fail = |name, requirement| Err(Error::Domain {
            name,
            requirement,
            value: 0.0,
        });
        if self.n == 0 {
            return fail("n", "at least 1");
        }
        if self.samples == 0 {
            return fail("samples", "at least 1");
        }
        if self.shards == 0 {
            return fail("shards", "at least 1");
        }
        if self.n + self.p - 1 > u32::MAX as u64 {
            return Err(Error::Domain {
                name: "n + p",
                requirement: "below 2^32",
                value: (self.n + self.p) as f64,
            });
        }
        Ok(())
    }
}

/// Generator for shard `shard` of a run seeded with `seed`.
pub fn shard_rng(seed: u64, shard: u32) -> Xoshiro256PlusPlus {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for _ in 0..shard {
        rng.jump();
    }
    rng
}

/// Uniform integer in `[0, bound)` (Lemire).
pub fn uniform_below<R: RngCore>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0);
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let m = (rng.next_u64() as u128) * (bound as u128);
        if (m as u64) >= threshold {
            return (m >> 64) as u64;
        }
    }
}

/// Draws uniformly distributed compositions of `p` quanta over `n`
/// oscillators.
#[derive(Debug, Clone)]
pub struct MicrostateSampler<R> {
    n: u64,
    p: u64,
    slots: Vec<u32>,
    bars: Vec<u32>,
    rng: R,
}

impl<R: RngCore> MicrostateSampler<R> {
    pub fn new(n: u64, p: u64, rng: R) -> Result<Self> {
        SimConfig::new(n, p, 1, 0)?;
        let slots = (0..(n + p - 1) as u32).collect();
        Ok(Self {
            n,
            p,
            slots,
            bars: Vec::with_capacity(n as usize - 1),
            rng,
        })
    }

    /// Chooses the `n − 1` bar slots.
    ///
    /// The slot array is left permuted between calls: a partial
    /// Fisher-Yates pass selects a uniform subset from any arrangement.
    fn draw_bars(&mut self) {
        let len = self.slots.len() as u64;
        let picks = self.n - 1;
        self.bars.clear();
        for i in 0..picks {
            let j = i + uniform_below(&mut self.rng, len - i);
            self.slots.swap(i as usize, j as usize);
            self.bars.push(self.slots[i as usize]);
        }
        self.bars.sort_unstable();
    }

    /// Writes one composition into `out` (length `n`).
    pub fn sample_into(&mut self, out: &mut [u64]) {
        assert_eq!(out.len() as u64, self.n);
        if self.n == 1 {
            out[0] = self.p;
            return;
        }
        self.draw_bars();
        let mut prev: i64 = -1;
        for (slot, &bar) in out.iter_mut().zip(&self.bars) {
            *slot = (bar as i64 - prev - 1) as u64;
            prev = bar as i64;
        }
        out[self.n as usize - 1] = (self.slots.len() as i64 - prev - 1) as u64;
    }

    pub fn sample(&mut self) -> Vec<u64> {
        let mut out = vec![0; self.n as usize];
        self.sample_into(&mut out);
        out
    }

    /// Quanta held by oscillator 0 in a fresh sample.
    pub fn sample_designated(&mut self) -> u64 {
        if self.n == 1 {
            return self.p;
        }
        self.draw_bars();
        self.bars[0] as u64
    }
}

/// One composition drawn with `rng`.
pub fn sample_microstate<R: RngCore>(n: u64, p: u64, rng: &mut R) -> Result<Vec<u64>> {
    Ok(MicrostateSampler::new(n, p, rng)?.sample())
}

/// Probability that a given oscillator holds `j` quanta,
/// `W(n − 1, p − j)/W(n, p)`.
pub fn occupancy_distribution_exact(n: u64, p: u64, j: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain {
            name: "n",
            requirement: "at least 2",
            value: n as f64,
        });
    }
    if j > p {
        return Err(Error::Domain {
            name: "j",
            requirement: "at most p",
            value: j as f64,
        });
    }
    let whole = counting::count_microstates(n, p)?;
    let part = counting::count_microstates(n - 1, p - j)?;
    match (&part.w, &whole.w) {
        (Some(a), Some(b)) if b.bits() < 1000 => {
            use num_traits::ToPrimitive;
            Ok(a.to_f64().unwrap() / b.to_f64().unwrap())
        }
        _ => Ok((part.ln_w - whole.ln_w).exp()),
    }
}

/// The whole exact marginal, `j = 0..=p`.
pub fn occupancy_pmf(n: u64, p: u64) -> Result<Vec<f64>> {
    (0..=p).map(|j| occupancy_distribution_exact(n, p, j)).collect()
}

/// Counts of the designated oscillator's occupation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyHistogram {
    /// `counts[j]` = samples in which oscillator 0 held `j` quanta.
    pub counts: Vec<u64>,
}

impl OccupancyHistogram {
    pub fn samples(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Adds another histogram bin by bin.
    pub fn merge(&mut self, other: &OccupancyHistogram) {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.samples() as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }
}

/// Histogram plus summary statistics of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub config: SimConfig,
    pub histogram: OccupancyHistogram,
    /// Mean quanta of the designated oscillator (`E/ε`); expectation `p/n`.
    pub mean_occupancy: f64,
    /// Shannon entropy of the observed occupancy distribution, in units of k.
    pub empirical_entropy: f64,
    /// Shannon entropy of the exact marginal (`None` for `n = 1`).
    pub exact_entropy: Option<f64>,
    /// `S(E)/k` of a single oscillator at `E/ε = p/n`, the large-`n` limit
    /// of both entropies above.
    pub limit_entropy: f64,
}

fn run_shard(cfg: &SimConfig, shard: u32, samples: u64) -> OccupancyHistogram {
    let mut sampler = MicrostateSampler::new(cfg.n, cfg.p, shard_rng(cfg.seed, shard))
        .expect("config validated");
    let mut counts = vec![0u64; cfg.p as usize + 1];
    for _ in 0..samples {
        counts[sampler.sample_designated() as usize] += 1;
    }
    OccupancyHistogram { counts }
}

pub fn run_simulation(cfg: &SimConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    let shards = cfg.shards as u64;
    let per = cfg.samples / shards;
    let extra = cfg.samples % shards;
    let share = |i: u64| per + u64::from(i < extra);
    let parts: Vec<OccupancyHistogram> = if shards == 1 {
        vec![run_shard(cfg, 0, cfg.samples)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..shards)
                .map(|i| scope.spawn(move || run_shard(cfg, i as u32, share(i))))
                .collect();
            handles.into_iter().map(|h| h.join().expect("shard panicked")).collect()
        })
    };
    let mut histogram = OccupancyHistogram {
        counts: vec![0; cfg.p as usize + 1],
    };
    for part in &parts {
        histogram.merge(part);
    }
    let freqs = histogram.frequencies();
    let mean_occupancy = freqs.iter().enumerate().map(|(j, f)| j as f64 * f).sum();
    let exact_entropy = if cfg.n >= 2 {
        Some(shannon_entropy(&occupancy_pmf(cfg.n, cfg.p)?))
    } else {
        None
    };
    Ok(SimulationReport {
        config: *cfg,
        mean_occupancy,
        empirical_entropy: shannon_entropy(&freqs),
        exact_entropy,
        limit_entropy: entropy_per_oscillator(cfg.p as f64 / cfg.n as f64, 1.0, 1.0)?,
        histogram,
    })
}

/// `−Σ pᵢ ln pᵢ`, skipping empty bins.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    -probabilities
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| q * q.ln())
        .sum::<f64>()
}

/// `KL(observed ‖ reference) = Σ oᵢ ln(oᵢ/rᵢ)`.
pub fn kl_divergence(observed: &[f64], reference: &[f64]) -> f64 {
    observed
        .iter()
        .zip(reference)
        .filter(|(&o, _)| o > 0.0)
        .map(|(&o, &r)| o * (o / r).ln())
        .sum()
}

/// A row of the histogram CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramRow {
    pub j: u64,
    pub observed: u64,
    /// `samples · P(j)`
    pub expected: f64,
    /// Binomial standard deviation `√(samples · P(j)(1 − P(j)))`.
    pub sigma: f64,
}

/// Observed against exact expectation per bin; requires `n ≥ 2`.
pub fn histogram_rows(report: &SimulationReport) -> Result<Vec<HistogramRow>> {
    let samples = report.histogram.samples() as f64;
    let pmf = occupancy_pmf(report.config.n, report.config.p)?;
    Ok(report
        .histogram
        .counts
        .iter()
        .zip(pmf)
        .enumerate()
        .map(|(j, (&observed, prob))| HistogramRow {
            j: j as u64,
            observed,
            expected: samples * prob,
            sigma: (samples * prob * (1.0 - prob)).sqrt(),
        })
        .collect())
}

pub const HISTOGRAM_HEADER: &str = "j,observed,expected,sigma";

pub fn histogram_csv(rows: &[HistogramRow]) -> String {
    let mut out = String::from(HISTOGRAM_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.j, r.observed, format_sci(r.expected), format_sci(r.sigma));
    }
    out
}

pub fn parse_histogram_csv(text: &str, source_name: &str) -> Result<Vec<HistogramRow>> {
    parse_csv_records(text, source_name, HISTOGRAM_HEADER, |fields, err| {
        let int = |s: &str| s.parse::<u64>().map_err(|_| err(format!("`{s}` is not an integer")));
        let real = |s: &str| s.parse::<f64>().map_err(|_| err(format!("`{s}` is not a number")));
        Ok(HistogramRow {
            j: int(fields[0])?,
            observed: int(fields[1])?,
            expected: real(fields[2])?,
            sigma: real(fields[3])?,
        })
    })
}

/// Goodness of fit of sampled whole compositions against the uniform law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub degrees_of_freedom: u64,
    pub p_value: f64,
}

/// Draws `samples` compositions and tests them against `1/W` each.
pub fn composition_chi_square(n: u64, p: u64, samples: u64, seed: u64) -> Result<ChiSquareTest> {
    let index: HashMap<Vec<u64>, usize> = counting::enumerate_compositions(n, p)?
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let w = index.len();
    if w < 2 {
        return Err(Error::Domain {
            name: "W(n, p)",
            requirement: "at least 2 for a goodness-of-fit test",
            value: w as f64,
        });
    }
    let mut sampler = MicrostateSampler::new(n, p, shard_rng(seed, 0))?;
    let mut counts = vec![0u64; w];
    let mut buf = vec![0; n as usize];
    for _ in 0..samples {
        sampler.sample_into(&mut buf);
        counts[index[&buf]] += 1;
    }
    let expected = samples as f64 / w as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = (w - 1) as u64;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    Ok(ChiSquareTest {
        statistic,
        degrees_of_freedom: dof,
        p_value: 1.0 - dist.cdf(statistic),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_oscillator_holds_everything() {
        let mut rng = shard_rng(1, 0);
        for _ in 0..10 {
            assert_eq!(sample_microstate(1, 5, &mut rng).unwrap(), vec![5]);
        }
    }

    #[test]
    fn samples_sum_to_p() {
        let mut s = MicrostateSampler::new(7, 13, shard_rng(9, 0)).unwrap();
        for _ in 0..1000 {
            let c = s.sample();
            assert_eq!(c.len(), 7);
            assert_eq!(c.iter().sum::<u64>(), 13);
        }
        let mut s = MicrostateSampler::new(4, 0, shard_rng(9, 0)).unwrap();
        assert_eq!(s.sample(), vec![0; 4]);
    }

    #[test]
    fn six_compositions_equally_often() {
        let mut s = MicrostateSampler::new(3, 2, shard_rng(2024, 0)).unwrap();
        let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
        for _ in 0..60_000 {
            *counts.entry(s.sample()).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let sigma = (10_000.0f64 * 5.0 / 6.0).sqrt();
        for (c, &k) in &counts {
            assert!((k as f64 - 10_000.0).abs() < 4.0 * sigma, "{c:?}: {k}");
        }
    }

    #[test]
    fn exact_marginals() {
        assert_relative_eq!(occupancy_distribution_exact(5, 5, 0).unwrap(), 4.0 / 9.0, max_relative = 1e-15);
        let total: f64 = occupancy_pmf(4, 6).unwrap().iter().sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-15);
        for j in 0..=2 {
            assert_relative_eq!(occupancy_distribution_exact(2, 2, j).unwrap(), 1.0 / 3.0, max_relative = 1e-15);
        }
        assert!(occupancy_distribution_exact(1, 2, 0).is_err());
        assert!(occupancy_distribution_exact(3, 2, 3).is_err());
        // log path for large systems still normalises
        let big: f64 = occupancy_pmf(700, 400).unwrap().iter().sum();
        assert_relative_eq!(big, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = SimConfig::new(5, 5, 20_000, 42).unwrap();
        assert_eq!(run_simulation(&cfg).unwrap(), run_simulation(&cfg).unwrap());
        let sharded = cfg.with_shards(3).unwrap();
        let a = run_simulation(&sharded).unwrap();
        assert_eq!(a, run_simulation(&sharded).unwrap());
        assert_eq!(a.histogram.samples(), 20_000);
        let other = SimConfig::new(5, 5, 20_000, 43).unwrap();
        assert_ne!(run_simulation(&cfg).unwrap().histogram, run_simulation(&other).unwrap().histogram);
    }

    #[test]
    fn merge_is_order_independent() {
        let a = OccupancyHistogram { counts: vec![1, 2, 3] };
        let b = OccupancyHistogram { counts: vec![4, 0, 1] };
        let mut ab = a.clone();
        ab.merge(&b);
        let mut ba = b.clone();
        ba.merge(&a);
        assert_eq!(ab, ba);
        assert_eq!(ab.samples(), 11);
    }

    #[test]
    fn oscillators_are_exchangeable() {
        let mut s = MicrostateSampler::new(4, 3, shard_rng(5, 0)).unwrap();
        let mut first = [0u64; 4];
        let mut last = [0u64; 4];
        let draws = 100_000;
        for _ in 0..draws {
            let c = s.sample();
            first[c[0] as usize] += 1;
            last[c[3] as usize] += 1;
        }
        for j in 0..4 {
            let prob = occupancy_distribution_exact(4, 3, j as u64).unwrap();
            let sigma = (draws as f64 * prob * (1.0 - prob)).sqrt();
            assert!((first[j] as f64 - last[j] as f64).abs() < 5.0 * sigma * 2f64.sqrt());
        }
    }

    #[test]
    fn uniform_below_in_range() {
        let mut rng = shard_rng(3, 0);
        let mut seen = [false; 7];
        for _ in 0..1000 {
            seen[uniform_below(&mut rng, 7) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn histogram_csv_round_trip() {
        let report = run_simulation(&SimConfig::new(3, 4, 1000, 7).unwrap()).unwrap();
        let rows = histogram_rows(&report).unwrap();
        let text = histogram_csv(&rows);
        let parsed = parse_histogram_csv(&text, "mem").unwrap();
        assert_eq!(histogram_csv(&parsed), text);
        assert_eq!(parsed.iter().map(|r| r.observed).sum::<u64>(), 1000);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(SimConfig::new(0, 3, 10, 1).is_err());
        assert!(SimConfig::new(3, 3, 0, 1).is_err());
        assert!(SimConfig::new(3, 3, 10, 1).unwrap().with_shards(0).is_err());
    }
}
