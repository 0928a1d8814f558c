//! Normal-approximation finite-length word-error bound over the sneak-path
//! rate decomposition.
//!
//! The array channel is a mixture of stationary channels indexed by the
//! sneak-path rate. Weighting the per-rate normal approximation
//! `Q(N (C - R) / sqrt(V))` by the rate distribution gives a finite-length
//! benchmark for an N x N array at rate R. The output is an approximation,
//! not an exact achievability or converse value.

use crate::channel::ChannelParams;
use crate::lambda::{capacity_approx, dispersion_approx, LambdaChannel};
use crate::numeric::GaussLegendre;
use crate::spstats::{RateModel, SpRateDistribution};
use crate::{Error, Result};

/// Upper tail of the standard normal, `Q(x) = P(Z > x)`, via the
/// complementary error function.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// A finite-length evaluation point: array side, code rate, sneak-path rate
/// distribution, and the physical channel with its input prior.
#[derive(Debug, Clone)]
pub struct BoundQuery {
    pub n: usize,
    pub rate: f64,
    pub dist: SpRateDistribution,
    pub params: ChannelParams,
    pub q: f64,
}

impl BoundQuery {
    fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0 && self.rate < 1.0) {
            return Err(Error::Domain("rate must lie in (0, 1)".into()));
        }
        if let RateModel::EmpiricalHistogram = self.dist.model {
            let mass: f64 = self.dist.histogram.iter().map(|(_, m)| m).sum();
            if (mass - 1.0).abs() > 1e-6 {
                return Err(Error::Domain(format!(
                    "histogram mass {mass} is not normalized"
                )));
            }
        }
        Ok(())
    }
}

/// Word-error term of a single mixture component. Rates where the
/// dispersion is numerically zero contribute the sharp limit: 0 when the
/// capacity clears the rate, 1 otherwise.
fn component_term(lambda: f64, query: &BoundQuery) -> Result<f64> {
    let ch = LambdaChannel::new(lambda, query.q, query.params)?;
    let c = capacity_approx(&ch)?;
    let v = dispersion_approx(&ch)?;
    if v < 1e-9 {
        return Ok(if c > query.rate { 0.0 } else { 1.0 });
    }
    Ok(q_function(query.n as f64 * (c - query.rate) / v.sqrt()))
}

/// Decomposition bound: the rate-distribution average of the per-component
/// normal approximation. Gaussian models integrate with a 201-node rule
/// over mean +- 6 sd intersected with [0, 1]; histogram models sum their
/// bins directly.
pub fn ppv_bound(query: &BoundQuery) -> Result<f64> {
    query.validate()?;
    match query.dist.model {
        RateModel::EmpiricalHistogram => {
            let mut acc = 0.0;
            for &(center, mass) in &query.dist.histogram {
                if mass > 0.0 {
                    acc += mass * component_term(center, query)?;
                }
            }
            Ok(acc.clamp(0.0, 1.0))
        }
        RateModel::Gaussian => {
            let sd = query.dist.variance.sqrt();
            if sd == 0.0 {
                return component_term(query.dist.mean, query);
            }
            let lo = (query.dist.mean - 6.0 * sd).max(0.0);
            let hi = (query.dist.mean + 6.0 * sd).min(1.0);
            let rule = GaussLegendre::new(201);
            let mut acc = 0.0;
            for (lambda, w) in rule.mapped(lo, hi) {
                acc += w * query.dist.gaussian_pdf(lambda) * component_term(lambda, query)?;
            }
            Ok(acc.clamp(0.0, 1.0))
        }
    }
}

/// Bound averaged over a distribution of active-failure counts; each count
/// contributes through its own rate distribution.
pub fn averaged_bound(
    n: usize,
    rate: f64,
    params: &ChannelParams,
    q: f64,
    sf_counts: &[(usize, f64)],
) -> Result<f64> {
    let mass: f64 = sf_counts.iter().map(|(_, p)| p).sum();
    if (mass - 1.0).abs() > 1e-9 || sf_counts.iter().any(|&(_, p)| p < 0.0) {
        return Err(Error::Domain(
            "failure-count weights must be a probability distribution".into(),
        ));
    }
    let mut acc = 0.0;
    for &(k, p) in sf_counts {
        if p == 0.0 {
            continue;
        }
        let query = BoundQuery {
            n,
            rate,
            dist: crate::spstats::gaussian_model(n, k, q)?,
            params: *params,
            q,
        };
        acc += p * ppv_bound(&query)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spstats::gaussian_model;

    #[test]
    fn q_function_anchor_values() {
        assert_eq!(q_function(0.0), 0.5);
        // high-precision erfc oracle value
        let q3 = q_function(3.0);
        assert!((q3 - 1.3498980316300945e-3).abs() / q3 < 1e-11, "{q3}");
        for &x in &[-2.5, -0.3, 0.7, 4.2] {
            assert!((q_function(x) + q_function(-x) - 1.0).abs() < 1e-14);
        }
        // deep tail stays positive and monotone
        assert!(q_function(38.0) > 0.0);
        assert!(q_function(38.0) < q_function(37.0));
    }

    fn query(sigma: f64) -> BoundQuery {
        BoundQuery {
            n: 128,
            rate: 0.5,
            dist: gaussian_model(128, 2, 0.5).unwrap(),
            params: ChannelParams::standard(sigma).unwrap(),
            q: 0.5,
        }
    }

    #[test]
    fn point_mass_reduces_to_single_term() {
        let mut q = query(60.0);
        q.dist.histogram = vec![(0.4316, 1.0)];
        q.dist.model = RateModel::EmpiricalHistogram;
        let direct = component_term(0.4316, &q).unwrap();
        let bound = ppv_bound(&q).unwrap();
        assert!((bound - direct).abs() < 1e-15);
    }

    #[test]
    fn unreachable_rate_saturates_to_one() {
        // far above the capacity of every component: sigma enormous
        let mut q = query(5000.0);
        q.rate = 0.9;
        let b = ppv_bound(&q).unwrap();
        assert!(b > 0.999, "{b}");
    }

    #[test]
    fn bound_monotone_in_sigma_and_rate() {
        let mut last = 0.0;
        for &sigma in &[50.0, 56.0, 60.0, 64.0, 68.0, 72.0] {
            let b = ppv_bound(&query(sigma)).unwrap();
            assert!(b >= last, "bound not monotone at sigma {sigma}");
            assert!((0.0..=1.0).contains(&b));
            last = b;
        }
        let base = ppv_bound(&query(60.0)).unwrap();
        let mut hi_rate = query(60.0);
        hi_rate.rate = 0.6;
        assert!(ppv_bound(&hi_rate).unwrap() >= base);
    }

    /// Frozen pipeline anchor from the development evaluation: the bound at
    /// (N=128, K=2, q=0.5, R=0.5) crosses 1e-4 between sigma 64 and 68.
    #[test]
    fn bound_waterfall_location() {
        let b64 = ppv_bound(&query(64.0)).unwrap();
        let b68 = ppv_bound(&query(68.0)).unwrap();
        assert!(b64 < 1e-4, "{b64}");
        assert!(b68 > 1e-4, "{b68}");
    }

    #[test]
    fn node_doubling_changes_little() {
        // evaluate with the default 201-node rule against a 403-node rule
        let q = query(62.0);
        let b1 = ppv_bound(&q).unwrap();
        let sd = q.dist.variance.sqrt();
        let lo = (q.dist.mean - 6.0 * sd).max(0.0);
        let hi = (q.dist.mean + 6.0 * sd).min(1.0);
        let rule = GaussLegendre::new(403);
        let mut b2 = 0.0;
        for (lambda, w) in rule.mapped(lo, hi) {
            b2 += w * q.dist.gaussian_pdf(lambda) * component_term(lambda, &q).unwrap();
        }
        assert!((b1 - b2).abs() <= 0.01 * b1.max(1e-300), "{b1} vs {b2}");
    }

    #[test]
    fn histogram_and_gaussian_models_agree() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let emp = crate::spstats::empirical_distribution(128, 2, 0.5, 20_000, &mut rng).unwrap();
        let mut q = query(64.0);
        let gaussian = ppv_bound(&q).unwrap();
        q.dist = emp.into_distribution(128, 2, 0.5, 400);
        let hist = ppv_bound(&q).unwrap();
        let rel = (gaussian - hist).abs() / gaussian.max(hist);
        assert!(rel < 0.25, "gaussian {gaussian} vs histogram {hist}");
    }

    #[test]
    fn averaged_bound_mixes_linearly() {
        let p = ChannelParams::standard(62.0).unwrap();
        let single = averaged_bound(128, 0.5, &p, 0.5, &[(2, 1.0)]).unwrap();
        let direct = ppv_bound(&query(62.0)).unwrap();
        assert!((single - direct).abs() < 1e-15);
        let b1 = averaged_bound(128, 0.5, &p, 0.5, &[(1, 1.0)]).unwrap();
        let mix = averaged_bound(128, 0.5, &p, 0.5, &[(1, 0.5), (2, 0.5)]).unwrap();
        assert!((mix - 0.5 * (b1 + direct)).abs() < 1e-12);
        // uniform mixture lies between the extremes
        let counts: Vec<(usize, f64)> = (1..=5).map(|k| (k, 0.2)).collect();
        let uni = averaged_bound(128, 0.5, &p, 0.5, &counts).unwrap();
        let per: Vec<f64> = (1..=5)
            .map(|k| averaged_bound(128, 0.5, &p, 0.5, &[(k, 1.0)]).unwrap())
            .collect();
        let lo = per.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = per.iter().cloned().fold(0.0f64, f64::max);
        assert!(uni >= lo && uni <= hi);
        assert!(averaged_bound(128, 0.5, &p, 0.5, &[(1, 0.7)]).is_err());
    }
}
