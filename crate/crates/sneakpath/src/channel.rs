//! Crossbar array channel model: sneak-path formation under selector
//! failures, noisy resistance readback, per-cell LLRs, and estimation of the
//! sneak-path rate from a read array.
//!
//! Bits are stored as resistance states: a 1 maps to the low-resistance state
//! `r1`, a 0 to the high-resistance state `r0`. A cell storing 0 that is
//! short-circuited by a sneak path reads back around the parasitic
//! combination `r0_prime` instead of `r0`.

use crate::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Physical resistances and read-noise level of the array.
///
/// `r0_prime` is always the parallel combination of `r0` and `rs`; it is
/// computed by the constructor and never stored independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub r0: f64,
    pub r1: f64,
    pub rs: f64,
    pub r0_prime: f64,
    pub sigma: f64,
}

impl ChannelParams {
    pub fn new(r0: f64, r1: f64, rs: f64, sigma: f64) -> Result<Self> {
        if !(r0 > 0.0 && r1 > 0.0 && rs > 0.0) {
            return Err(Error::Domain("resistances must be positive".into()));
        }
        if sigma <= 0.0 {
            return Err(Error::Domain("noise sigma must be positive".into()));
        }
        let r0_prime = effective_hrs_resistance(r0, rs)?;
        if !(r0 > r0_prime && r0_prime > r1) {
            return Err(Error::Domain(format!(
                "need r0 > r0' > r1, got r0={r0}, r0'={r0_prime}, r1={r1}"
            )));
        }
        Ok(Self {
            r0,
            r1,
            rs,
            r0_prime,
            sigma,
        })
    }

    /// The resistance set used throughout the literature this model follows:
    /// r0 = 1000, r1 = 100, rs = 250 (so r0' = 200).
    pub fn standard(sigma: f64) -> Result<Self> {
        Self::new(1000.0, 100.0, 250.0, sigma)
    }

    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        if sigma <= 0.0 {
            return Err(Error::Domain("noise sigma must be positive".into()));
        }
        self.sigma = sigma;
        Ok(self)
    }
}

/// Effective resistance of a 0-cell whose read path is shunted by the
/// parasitic resistance `rs` of a sneak path: `(1/r0 + 1/rs)^-1`.
pub fn effective_hrs_resistance(r0: f64, rs: f64) -> Result<f64> {
    if r0 <= 0.0 || rs <= 0.0 {
        return Err(Error::Domain(
            "effective_hrs_resistance requires positive resistances".into(),
        ));
    }
    Ok((r0.recip() + rs.recip()).recip())
}

/// Square binary data array stored in the crossbar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataArray {
    n: usize,
    bits: Vec<u8>,
}

impl DataArray {
    pub fn from_bits(n: usize, bits: Vec<u8>) -> Result<Self> {
        if bits.len() != n * n {
            return Err(Error::Domain(format!(
                "expected {} bits for a {n}x{n} array, got {}",
                n * n,
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Domain("data bits must be 0 or 1".into()));
        }
        Ok(Self { n, bits })
    }

    /// Bernoulli(q) random fill.
    pub fn random<R: Rng + ?Sized>(n: usize, q: f64, rng: &mut R) -> Self {
        let bits = (0..n * n)
            .map(|_| u8::from(rng.gen::<f64>() < q))
            .collect();
        Self { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.n + col]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

/// Selector-failure coordinates, 0-based `(row, col)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SfPattern {
    coords: Vec<(usize, usize)>,
}

impl SfPattern {
    pub fn new(coords: Vec<(usize, usize)>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[(usize, usize)] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Scattered patterns have pairwise-distinct rows and columns.
    pub fn is_scattered(&self) -> bool {
        for (i, a) in self.coords.iter().enumerate() {
            for b in &self.coords[i + 1..] {
                if a.0 == b.0 || a.1 == b.1 {
                    return false;
                }
            }
        }
        true
    }

    fn validate_against(&self, data: &DataArray) -> Result<()> {
        let n = data.n();
        for &(r, c) in &self.coords {
            if r >= n || c >= n {
                return Err(Error::Domain(format!(
                    "selector failure ({r}, {c}) outside {n}x{n} array"
                )));
            }
            if data.get(r, c) != 1 {
                return Err(Error::Precondition(format!(
                    "selector failure at ({r}, {c}) sits on a 0-cell; only active \
                     failures (on 1-cells) can be applied"
                )));
            }
        }
        Ok(())
    }
}

/// Noisy resistance readings of an N x N array.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadbackArray {
    n: usize,
    values: Vec<f64>,
}

impl ReadbackArray {
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Domain("readback size mismatch".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("readback values must be finite".into()));
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n + col]
    }
}

/// Parameters of the per-cell LLR: the sneak-path rate assumed by the
/// detector and the prior on storing a 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LlrParams {
    pub lambda: f64,
    pub q: f64,
}

impl LlrParams {
    pub fn new(lambda: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain("lambda must lie in [0, 1]".into()));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain("q must lie in (0, 1)".into()));
        }
        Ok(Self { lambda, q })
    }
}

/// Boolean mask of cells affected by a sneak path.
///
/// A cell `(m, n)` is marked iff it stores 0 and some active failure `(i, j)`
/// closes a loop through three 1-cells: `x[m][j] = x[i][j] = x[i][n] = 1`.
/// Runs in O(K N^2) for K failures.
pub fn apply_sneak_paths(data: &DataArray, active_sfs: &SfPattern) -> Result<Vec<bool>> {
    active_sfs.validate_against(data)?;
    let n = data.n();
    let mut mask = vec![false; n * n];
    for &(i, j) in active_sfs.coords() {
        // Row factor: x[m][j] = 1; column factor: x[i][n] = 1. The failure
        // cell itself satisfies x[i][j] = 1 by the active precondition.
        let col_hits: Vec<bool> = (0..n).map(|c| data.get(i, c) == 1).collect();
        for m in 0..n {
            if data.get(m, j) != 1 {
                continue;
            }
            let row_base = m * n;
            for (c, &hit) in col_hits.iter().enumerate() {
                if hit && data.bits[row_base + c] == 0 {
                    mask[row_base + c] = true;
                }
            }
        }
    }
    Ok(mask)
}

/// Noisy readback of the array under the given active selector failures.
///
/// Cells storing 1 read `r1`; 0-cells on a sneak path read `r0_prime`; clean
/// 0-cells read `r0`. All reads carry i.i.d. Gaussian noise of the
/// configured sigma, drawn from `rng` in row-major cell order, so results
/// are reproducible for a fixed seed.
pub fn read_array<R: Rng + ?Sized>(
    data: &DataArray,
    active_sfs: &SfPattern,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<ReadbackArray> {
    let mask = apply_sneak_paths(data, active_sfs)?;
    let n = data.n();
    let noise = Normal::new(0.0, params.sigma)
        .map_err(|e| Error::Domain(format!("invalid noise distribution: {e}")))?;
    let values = data
        .bits()
        .iter()
        .zip(&mask)
        .map(|(&bit, &sp)| {
            let level = if bit == 1 {
                params.r1
            } else if sp {
                params.r0_prime
            } else {
                params.r0
            };
            level + noise.sample(rng)
        })
        .collect();
    ReadbackArray::from_values(n, values)
}

/// Natural-log LLR of a single readback value: positive favors a stored 0.
///
/// Evaluated in log space; the naive density ratio overflows once `y` is a
/// few hundred sigma from the means.
pub fn cell_llr(y: f64, llr: &LlrParams, params: &ChannelParams) -> f64 {
    let inv2s2 = 0.5 / (params.sigma * params.sigma);
    let e_sp = -(y - params.r0_prime).powi(2) * inv2s2;
    let e_hrs = -(y - params.r0).powi(2) * inv2s2;
    let e_lrs = -(y - params.r1).powi(2) * inv2s2;
    let num = log_mix(llr.lambda, e_sp, 1.0 - llr.lambda, e_hrs);
    ((1.0 - llr.q) / llr.q).ln() + num - e_lrs
}

/// log(a e^x + b e^y) for a, b >= 0, a + b > 0.
fn log_mix(a: f64, x: f64, b: f64, y: f64) -> f64 {
    if a == 0.0 {
        return b.ln() + y;
    }
    if b == 0.0 {
        return a.ln() + x;
    }
    let la = a.ln() + x;
    let lb = b.ln() + y;
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    hi + (lo - hi).exp().ln_1p()
}

/// Hard-decision estimate of the sneak-path rate from a read array.
///
/// Each reading is assigned to the nearest of {r1, r0_prime, r0}; the
/// decision boundaries are the midpoints, with boundary ties going to the
/// lower-resistance class. The estimate is the fraction of r0_prime
/// decisions among all high-state decisions, and 0 when no cell lands in
/// either high band.
pub fn estimate_sp_rate(read: &ReadbackArray, params: &ChannelParams) -> f64 {
    let b_low = 0.5 * (params.r1 + params.r0_prime);
    let b_high = 0.5 * (params.r0_prime + params.r0);
    let mut n_sp = 0usize;
    let mut n_hrs = 0usize;
    for &y in read.values() {
        if y <= b_low {
            // r1 band
        } else if y <= b_high {
            n_sp += 1;
        } else {
            n_hrs += 1;
        }
    }
    if n_sp + n_hrs == 0 {
        0.0
    } else {
        n_sp as f64 / (n_sp + n_hrs) as f64
    }
}

/// The three readback classes of the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    /// Clean 0-cell read near r0.
    Hrs,
    /// 1-cell read near r1; its LLR is reported negated so that larger
    /// means are better for all three kinds.
    Lrs,
    /// 0-cell on a sneak path, read near r0_prime.
    Sp,
}

/// Closed-form Gaussian moments (mean, variance) of the per-class LLR, in
/// nats. The LRS moments are those of the negated LLR. For every kind the
/// variance equals twice the signal term of the mean.
pub fn llr_moment_model(
    kind: CellKind,
    llr: &LlrParams,
    params: &ChannelParams,
) -> Result<(f64, f64)> {
    if llr.lambda <= 0.0 || llr.lambda >= 1.0 {
        return Err(Error::Domain(
            "llr_moment_model requires lambda strictly inside (0, 1)".into(),
        ));
    }
    let s2 = params.sigma * params.sigma;
    let prior = llr.q / (llr.lambda * (1.0 - llr.q));
    Ok(match kind {
        CellKind::Hrs => {
            let gap = params.r0 - params.r1;
            let signal = gap * gap / (2.0 * s2);
            let mean = signal + ((1.0 - llr.q) * (1.0 - llr.lambda) / llr.q).ln();
            (mean, 2.0 * signal)
        }
        CellKind::Lrs => {
            let gap = params.r0_prime - params.r1;
            let signal = gap * gap / (2.0 * s2);
            (signal + prior.ln(), 2.0 * signal)
        }
        CellKind::Sp => {
            let gap = params.r0_prime - params.r1;
            let signal = gap * gap / (2.0 * s2);
            (signal - prior.ln(), 2.0 * signal)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(sigma: f64) -> ChannelParams {
        ChannelParams::standard(sigma).unwrap()
    }

    #[test]
    fn effective_resistance_paper_values() {
        assert_eq!(effective_hrs_resistance(1000.0, 250.0).unwrap(), 200.0);
        assert_eq!(effective_hrs_resistance(300.0, 300.0).unwrap(), 150.0);
        let near_r0 = effective_hrs_resistance(1000.0, 1e9).unwrap();
        assert!((near_r0 - 999.999).abs() < 1e-3);
        assert!(effective_hrs_resistance(-1.0, 5.0).is_err());
        assert!(effective_hrs_resistance(5.0, 0.0).is_err());
    }

    #[test]
    fn channel_params_recompute_r0_prime() {
        let p = params(30.0);
        assert_eq!(p.r0_prime, 200.0);
        assert!(ChannelParams::new(100.0, 100.0, 250.0, 30.0).is_err());
        assert!(ChannelParams::new(1000.0, 100.0, 250.0, 0.0).is_err());
    }

    /// The 4x4 closed-loop example: 1-cells at (0,1), (0,3), (2,3) and the
    /// failure at (0,3) sneak onto the 0-cell at (2,1).
    #[test]
    fn sneak_path_forms_closed_loop() {
        let mut bits = vec![0u8; 16];
        bits[1] = 1; // (0,1)
        bits[3] = 1; // (0,3)
        bits[11] = 1; // (2,3)
        let data = DataArray::from_bits(4, bits).unwrap();
        let mask = apply_sneak_paths(&data, &SfPattern::new(vec![(0, 3)])).unwrap();
        let expected: Vec<usize> = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        assert_eq!(expected, vec![2 * 4 + 1]);
    }

    #[test]
    fn empty_sf_set_yields_no_sneak_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let data = DataArray::random(16, 0.5, &mut rng);
        let mask = apply_sneak_paths(&data, &SfPattern::default()).unwrap();
        assert!(mask.iter().all(|&b| !b));
    }

    #[test]
    fn all_ones_array_has_no_sneak_paths() {
        let data = DataArray::from_bits(4, vec![1; 16]).unwrap();
        let mask = apply_sneak_paths(&data, &SfPattern::new(vec![(1, 2), (3, 0)])).unwrap();
        assert!(mask.iter().all(|&b| !b));
    }

    #[test]
    fn sneak_paths_never_hit_one_cells() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let data = DataArray::random(24, 0.5, &mut rng);
            let ones: Vec<(usize, usize)> = (0..24)
                .flat_map(|r| (0..24).map(move |c| (r, c)))
                .filter(|&(r, c)| data.get(r, c) == 1)
                .collect();
            if ones.len() < 3 {
                continue;
            }
            let sfs = SfPattern::new(vec![ones[0], ones[ones.len() / 2], ones[ones.len() - 1]]);
            let mask = apply_sneak_paths(&data, &sfs).unwrap();
            for (idx, &b) in mask.iter().enumerate() {
                if b {
                    assert_eq!(data.bits()[idx], 0);
                }
            }
        }
    }

    #[test]
    fn adding_an_sf_never_clears_mask_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let data = DataArray::random(16, 0.6, &mut rng);
            let ones: Vec<(usize, usize)> = (0..16)
                .flat_map(|r| (0..16).map(move |c| (r, c)))
                .filter(|&(r, c)| data.get(r, c) == 1)
                .collect();
            if ones.len() < 2 {
                continue;
            }
            let small = apply_sneak_paths(&data, &SfPattern::new(vec![ones[0]])).unwrap();
            let large =
                apply_sneak_paths(&data, &SfPattern::new(vec![ones[0], ones[1]])).unwrap();
            for (s, l) in small.iter().zip(&large) {
                assert!(!s || *l, "superset of failures lost a sneak path");
            }
        }
    }

    #[test]
    fn sf_on_zero_cell_is_rejected() {
        let data = DataArray::from_bits(2, vec![0, 1, 1, 0]).unwrap();
        let err = apply_sneak_paths(&data, &SfPattern::new(vec![(0, 0)]));
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn noiseless_read_levels() {
        let p = ChannelParams::new(1000.0, 100.0, 250.0, 1e-12).unwrap();
        let data = DataArray::from_bits(2, vec![1, 0, 1, 1]).unwrap();
        // SF at (1,0): loop (0,0)->(1,0)->(1,1) puts (0,1) on a sneak path.
        let sfs = SfPattern::new(vec![(1, 0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let read = read_array(&data, &sfs, &p, &mut rng).unwrap();
        assert!((read.get(0, 0) - 100.0).abs() < 1e-6);
        assert!((read.get(0, 1) - 200.0).abs() < 1e-6);
        assert!((read.get(1, 1) - 100.0).abs() < 1e-6);
    }

    #[test]
    fn read_is_deterministic_for_fixed_seed() {
        let p = params(30.0);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let data = DataArray::random(8, 0.5, &mut rng);
        let a = read_array(&data, &SfPattern::default(), &p, &mut ChaCha8Rng::seed_from_u64(9))
            .unwrap();
        let b = read_array(&data, &SfPattern::default(), &p, &mut ChaCha8Rng::seed_from_u64(9))
            .unwrap();
        assert_eq!(a, b);
    }

    /// Frozen oracle: log(0.5) - 100^2/(2*900) with the far mixture
    /// component contributing e^-444 ~ 0.
    #[test]
    fn llr_at_lrs_reading() {
        let p = params(30.0);
        let llr = LlrParams::new(0.5, 0.5).unwrap();
        let v = cell_llr(100.0, &llr, &p);
        let expect = 0.5f64.ln() - 10000.0 / 1800.0;
        assert!((v - expect).abs() < 1e-9, "got {v}, expected {expect}");
        assert!((v - (-6.248703)).abs() < 1e-4);
    }

    #[test]
    fn llr_lambda_one_reduces_to_two_gaussian_form() {
        let p = params(25.0);
        let llr = LlrParams::new(1.0, 0.4).unwrap();
        for &y in &[80.0, 150.0, 210.0, 400.0] {
            let v = cell_llr(y, &llr, &p);
            let algebraic = (0.6f64 / 0.4).ln()
                + (p.r0_prime - p.r1) * (2.0 * y - p.r0_prime - p.r1)
                    / (2.0 * p.sigma * p.sigma);
            assert!((v - algebraic).abs() < 1e-9);
        }
    }

    #[test]
    fn llr_midpoint_is_zero_at_lambda_one() {
        let p = params(30.0);
        let llr = LlrParams::new(1.0, 0.5).unwrap();
        let v = cell_llr(150.0, &llr, &p);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn llr_lambda_zero_is_exact_two_gaussian() {
        let p = params(30.0);
        let llr = LlrParams::new(0.0, 0.5).unwrap();
        for &y in &[50.0, 300.0, 550.0, 1200.0] {
            let v = cell_llr(y, &llr, &p);
            let direct = ((y - p.r1).powi(2) - (y - p.r0).powi(2)) / (2.0 * p.sigma * p.sigma);
            assert!((v - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn llr_is_finite_far_from_means() {
        let p = params(30.0);
        let llr = LlrParams::new(0.3, 0.5).unwrap();
        for &y in &[-1e5, 1e5, 1e7] {
            assert!(cell_llr(y, &llr, &p).is_finite());
        }
    }

    #[test]
    fn sp_rate_counts() {
        let p = params(30.0);
        // 10 readings in the r0' band, 30 in the r0 band, rest low.
        let mut values = vec![100.0; 60];
        values.extend(vec![200.0; 10]);
        values.extend(vec![1000.0; 30]);
        values.resize(100, 100.0);
        let read = ReadbackArray::from_values(10, values).unwrap();
        assert_eq!(estimate_sp_rate(&read, &p), 0.25);
    }

    #[test]
    fn sp_rate_zero_when_no_high_band() {
        let p = params(30.0);
        let read = ReadbackArray::from_values(4, vec![100.0; 16]).unwrap();
        assert_eq!(estimate_sp_rate(&read, &p), 0.0);
    }

    #[test]
    fn sp_rate_boundary_goes_to_lower_class() {
        let p = params(30.0);
        // exactly on the r1/r0' boundary -> r1 band; on r0'/r0 boundary -> r0' band
        let mut values = vec![150.0; 8];
        values.extend(vec![600.0; 8]);
        let read = ReadbackArray::from_values(4, values).unwrap();
        assert_eq!(estimate_sp_rate(&read, &p), 1.0);
    }

    #[test]
    fn sp_rate_separable_construction() {
        // sigma = 30 keeps 3 sigma into each decision band: construct
        // 5 sneak-path, 45 clean-high, 50 low cells and recover 0.1.
        let p = params(30.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let noise = Normal::new(0.0, 30.0).unwrap();
        let mut values = Vec::with_capacity(100);
        for i in 0..100 {
            let base = if i < 5 {
                200.0
            } else if i < 50 {
                1000.0
            } else {
                100.0
            };
            let mut v: f64 = base + noise.sample(&mut rng);
            while (v - base).abs() > 49.0 {
                v = base + noise.sample(&mut rng);
            }
            values.push(v);
        }
        let read = ReadbackArray::from_values(10, values).unwrap();
        assert!((estimate_sp_rate(&read, &p) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn moment_model_matches_hand_values() {
        let p = params(50.0);
        let llr = LlrParams::new(0.5, 0.5).unwrap();
        let (m_sp, v_sp) = llr_moment_model(CellKind::Sp, &llr, &p).unwrap();
        assert!((m_sp - (2.0 - 2f64.ln())).abs() < 1e-12);
        assert!((v_sp - 4.0).abs() < 1e-12);
        let (m_hrs, v_hrs) = llr_moment_model(CellKind::Hrs, &llr, &p).unwrap();
        assert!((m_hrs - (162.0 + 0.5f64.ln())).abs() < 1e-12);
        assert!((v_hrs - 324.0).abs() < 1e-12);
        let (_, v_lrs) = llr_moment_model(CellKind::Lrs, &llr, &p).unwrap();
        assert_eq!(v_lrs, v_sp);
    }

    #[test]
    fn moment_model_rejects_degenerate_lambda() {
        let p = params(50.0);
        for lambda in [0.0, 1.0] {
            let llr = LlrParams::new(lambda, 0.5).unwrap();
            assert!(llr_moment_model(CellKind::Sp, &llr, &p).is_err());
        }
    }

    /// Empirical check of the Gaussian moment model against sampled LLRs.
    #[test]
    fn moment_model_matches_sampled_llrs() {
        let p = params(50.0);
        let llr = LlrParams::new(0.5, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let noise = Normal::new(0.0, 50.0).unwrap();
        let samples = 200_000;
        for (kind, level, negate) in [
            (CellKind::Hrs, 1000.0, false),
            (CellKind::Lrs, 100.0, true),
            (CellKind::Sp, 200.0, false),
        ] {
            let (mean, var) = llr_moment_model(kind, &llr, &p).unwrap();
            let mut s = 0.0;
            let mut s2 = 0.0;
            for _ in 0..samples {
                let y = level + noise.sample(&mut rng);
                let mut l = cell_llr(y, &llr, &p);
                if negate {
                    l = -l;
                }
                s += l;
                s2 += l * l;
            }
            let emp_mean = s / samples as f64;
            let emp_var = s2 / samples as f64 - emp_mean * emp_mean;
            assert!(
                (emp_mean - mean).abs() / mean.abs() < 0.03,
                "{kind:?}: mean {emp_mean} vs model {mean}"
            );
            assert!(
                (emp_var - var).abs() / var < 0.03,
                "{kind:?}: var {emp_var} vs model {var}"
            );
        }
    }
}
