//! Distribution of the sneak-path rate over random data patterns.
//!
//! For Bernoulli(q) data and K scattered active selector failures the
//! fraction of 0-cells hit by a sneak path concentrates as the array grows;
//! its mean and variance admit closed forms keeping the O(1/N) terms, and
//! the distribution itself is well approximated by a Gaussian truncated to
//! [0, 1]. This module provides the closed forms, the truncated-Gaussian
//! model, and a seeded empirical sampler used to validate both.

use crate::bound::q_function;
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

fn validate(n: usize, k: usize, q: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("need at least one active failure".into()));
    }
    if 2 * k >= n {
        return Err(Error::Domain(format!(
            "k = {k} too large for n = {n}; the scattered analysis needs k < n/2"
        )));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain("q must lie in (0, 1)".into()));
    }
    Ok(())
}

/// Mean sneak-path rate: `1 - (1 - 2k/n)(1-q^2)^k - (2k/n)(1-q^2)^(k-1)`.
pub fn sp_rate_mean(n: usize, k: usize, q: f64) -> Result<f64> {
    validate(n, k, q)?;
    let ratio = 2.0 * k as f64 / n as f64;
    let base = 1.0 - q * q;
    Ok(1.0 - (1.0 - ratio) * base.powi(k as i32) - ratio * base.powi(k as i32 - 1))
}

/// Variance of the sneak-path rate: `(2/n)((1-2q^2+q^3)^k - (1-q^2)^(2k))`.
pub fn sp_rate_variance(n: usize, k: usize, q: f64) -> Result<f64> {
    validate(n, k, q)?;
    let a = 1.0 - 2.0 * q * q + q * q * q;
    let b = 1.0 - q * q;
    Ok(2.0 / n as f64 * (a.powi(k as i32) - b.powi(2 * k as i32)))
}

/// Mean sneak-path rate when two failures share a row or column and the
/// rest are scattered: `1 - (1-2q^2+q^3)(1-q^2)^(k-2)`. Requires k >= 2 and
/// always lies below the scattered-pattern asymptote `1 - (1-q^2)^k`.
pub fn nonscattered_mean(k: usize, q: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(
            "non-scattered pattern needs at least two failures".into(),
        ));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain("q must lie in (0, 1)".into()));
    }
    let a = 1.0 - 2.0 * q * q + q * q * q;
    let b = 1.0 - q * q;
    Ok(1.0 - a * b.powi(k as i32 - 2))
}

/// Design point for code construction: mean + 3 standard deviations,
/// clamped to [0, 1]. Codes built for this rate cover about 99.87% of data
/// patterns.
pub fn design_lambda(n: usize, k: usize, q: f64) -> Result<f64> {
    let mean = sp_rate_mean(n, k, q)?;
    let var = sp_rate_variance(n, k, q)?;
    Ok((mean + 3.0 * var.sqrt()).clamp(0.0, 1.0))
}

/// How the sneak-path rate distribution is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateModel {
    /// Normal(mean, variance) truncated to [0, 1] and renormalized.
    Gaussian,
    /// Histogram of sampled rates.
    EmpiricalHistogram,
}

/// Sneak-path rate distribution for a given array size, failure count, and
/// data prior.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpRateDistribution {
    pub n: usize,
    pub k: usize,
    pub q: f64,
    /// Mean of the underlying (untruncated) model.
    pub mean: f64,
    /// Variance of the underlying (untruncated) model.
    pub variance: f64,
    pub model: RateModel,
    /// Present for empirical models: normalized (bin center, mass) pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub histogram: Vec<(f64, f64)>,
}

impl SpRateDistribution {
    /// Mass that an untruncated Normal(mean, variance) puts on [0, 1].
    pub fn truncation_mass(&self) -> f64 {
        let sd = self.variance.sqrt();
        if sd == 0.0 {
            return 1.0;
        }
        q_function((0.0 - self.mean) / sd) - q_function((1.0 - self.mean) / sd)
    }

    /// Density of the truncated Gaussian model at `lambda` in [0, 1].
    pub fn gaussian_pdf(&self, lambda: f64) -> f64 {
        if !(0.0..=1.0).contains(&lambda) {
            return 0.0;
        }
        let sd = self.variance.sqrt();
        let z = (lambda - self.mean) / sd;
        let raw = (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt());
        raw / self.truncation_mass()
    }

    /// CDF of the truncated Gaussian model at `lambda`.
    pub fn gaussian_cdf(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        if lambda >= 1.0 {
            return 1.0;
        }
        let sd = self.variance.sqrt();
        let low = q_function((0.0 - self.mean) / sd);
        (low - q_function((lambda - self.mean) / sd)) / self.truncation_mass()
    }

    /// Draw from the truncated Gaussian model by rejection; the mass outside
    /// [0, 1] is negligible for all parameters of interest.
    pub fn sample_gaussian<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let sd = self.variance.sqrt();
        loop {
            let u: f64 = rng.gen();
            let v: f64 = rng.gen();
            // Box-Muller keeps the draw count per sample deterministic.
            let z = (-2.0 * u.max(f64::MIN_POSITIVE).ln()).sqrt()
                * (2.0 * std::f64::consts::PI * v).cos();
            let lambda = self.mean + sd * z;
            if (0.0..=1.0).contains(&lambda) {
                return lambda;
            }
        }
    }
}

/// Closed-form Gaussian model of the sneak-path rate for (n, k, q).
pub fn gaussian_model(n: usize, k: usize, q: f64) -> Result<SpRateDistribution> {
    Ok(SpRateDistribution {
        n,
        k,
        q,
        mean: sp_rate_mean(n, k, q)?,
        variance: sp_rate_variance(n, k, q)?,
        model: RateModel::Gaussian,
        histogram: Vec::new(),
    })
}

/// Result of empirical sneak-path rate sampling.
#[derive(Debug, Clone)]
pub struct EmpiricalRates {
    /// One sneak-path rate per retained sample.
    pub rates: Vec<f64>,
    /// Arrays redrawn because they contained no 0-cells.
    pub resampled: usize,
    pub mean: f64,
    pub variance: f64,
}

impl EmpiricalRates {
    /// Normalized histogram with `bins` equal-width bins on [0, 1].
    pub fn histogram(&self, bins: usize) -> Vec<(f64, f64)> {
        let mut counts = vec![0usize; bins];
        for &r in &self.rates {
            let idx = ((r * bins as f64) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        let total = self.rates.len() as f64;
        counts
            .iter()
            .enumerate()
            .map(|(i, &c)| ((i as f64 + 0.5) / bins as f64, c as f64 / total))
            .collect()
    }

    /// Kolmogorov-Smirnov distance between the sample and a reference CDF.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let mut sorted = self.rates.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = sorted.len() as f64;
        let mut worst = 0.0f64;
        for (i, &x) in sorted.iter().enumerate() {
            let f = cdf(x);
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            worst = worst.max((f - lo).abs()).max((hi - f).abs());
        }
        worst
    }

    pub fn into_distribution(self, n: usize, k: usize, q: f64, bins: usize) -> SpRateDistribution {
        let histogram = self.histogram(bins);
        SpRateDistribution {
            n,
            k,
            q,
            mean: self.mean,
            variance: self.variance,
            model: RateModel::EmpiricalHistogram,
            histogram,
        }
    }
}

/// Bit-packed square array for fast sneak-path rate sampling.
struct PackedArray {
    n: usize,
    words_per_row: usize,
    rows: Vec<u64>,
    ones: Vec<(usize, usize)>,
}

impl PackedArray {
    fn random<R: Rng + ?Sized>(n: usize, q: f64, rng: &mut R) -> Self {
        let words_per_row = n.div_ceil(64);
        let tail_bits = n - 64 * (words_per_row - 1);
        let tail_mask = if tail_bits == 64 {
            u64::MAX
        } else {
            (1u64 << tail_bits) - 1
        };
        let mut rows = vec![0u64; n * words_per_row];
        let mut ones = Vec::new();
        if (q - 0.5).abs() < 1e-15 {
            for r in 0..n {
                for w in 0..words_per_row {
                    let mut bits: u64 = rng.gen();
                    if w == words_per_row - 1 {
                        bits &= tail_mask;
                    }
                    rows[r * words_per_row + w] = bits;
                    let mut b = bits;
                    while b != 0 {
                        let c = b.trailing_zeros() as usize;
                        ones.push((r, 64 * w + c));
                        b &= b - 1;
                    }
                }
            }
        } else {
            for r in 0..n {
                for c in 0..n {
                    if rng.gen::<f64>() < q {
                        rows[r * words_per_row + c / 64] |= 1u64 << (c % 64);
                        ones.push((r, c));
                    }
                }
            }
        }
        Self {
            n,
            words_per_row,
            rows,
            ones,
        }
    }

    #[inline]
    fn row(&self, r: usize) -> &[u64] {
        &self.rows[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    #[inline]
    fn bit(&self, r: usize, c: usize) -> bool {
        self.rows[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    /// Count of sneak-path cells under the given active failures.
    fn sp_cell_count(&self, sfs: &[(usize, usize)]) -> usize {
        let wpr = self.words_per_row;
        let mut scratch = vec![0u64; wpr];
        let mut count = 0usize;
        for m in 0..self.n {
            scratch.iter_mut().for_each(|w| *w = 0);
            let mut any = false;
            for &(i, j) in sfs {
                if i != m && self.bit(m, j) {
                    // all columns n with x[i][n] = 1 are reachable from row m
                    for (s, &w) in scratch.iter_mut().zip(self.row(i)) {
                        *s |= w;
                    }
                    any = true;
                }
            }
            if !any {
                continue;
            }
            // restrict to 0-cells of row m
            for (s, &w) in scratch.iter_mut().zip(self.row(m)) {
                *s &= !w;
            }
            count += scratch.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        }
        count
    }
}

/// Sample the sneak-path rate distribution: for each retained sample, draw
/// Bernoulli(q) data, place k active failures uniformly among 1-cells with
/// pairwise-distinct rows and columns (by rejection), and record the
/// fraction of 0-cells under a sneak path. Deterministic given the rng
/// state.
pub fn empirical_distribution<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    q: f64,
    samples: usize,
    rng: &mut R,
) -> Result<EmpiricalRates> {
    validate(n, k, q)?;
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let mut rates = Vec::with_capacity(samples);
    let mut resampled = 0usize;
    while rates.len() < samples {
        let arr = PackedArray::random(n, q, rng);
        let zeros = n * n - arr.ones.len();
        if zeros == 0 || arr.ones.len() < k {
            resampled += 1;
            continue;
        }
        let Some(sfs) = sample_scattered_sfs(&arr.ones, k, rng, 10_000) else {
            resampled += 1;
            continue;
        };
        let sp = arr.sp_cell_count(&sfs);
        rates.push(sp as f64 / zeros as f64);
    }
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    let variance =
        rates.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / rates.len() as f64;
    Ok(EmpiricalRates {
        rates,
        resampled,
        mean,
        variance,
    })
}

/// Uniformly pick k of the listed 1-cells such that all rows and all columns
/// differ, retrying up to `max_attempts` whole draws.
pub(crate) fn sample_scattered_sfs<R: Rng + ?Sized>(
    ones: &[(usize, usize)],
    k: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Option<Vec<(usize, usize)>> {
    if ones.len() < k {
        return None;
    }
    let mut picks: Vec<(usize, usize)> = Vec::with_capacity(k);
    'attempt: for _ in 0..max_attempts {
        picks.clear();
        while picks.len() < k {
            let idx = rng.gen_range(0..ones.len());
            let cand = ones[idx];
            if picks.contains(&cand) {
                continue 'attempt;
            }
            picks.push(cand);
        }
        for (a, pa) in picks.iter().enumerate() {
            for pb in &picks[a + 1..] {
                if pa.0 == pb.0 || pa.1 == pb.1 {
                    continue 'attempt;
                }
            }
        }
        return Some(picks.clone());
    }
    None
}
