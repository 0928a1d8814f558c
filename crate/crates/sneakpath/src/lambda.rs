//! Capacity and dispersion of the stationary binary-input channel with a
//! two-Gaussian 0-output mixture.
//!
//! Under input prior Pr(1) = q, a 1 reads near `r1` while a 0 reads near
//! `r0_prime` with probability lambda (sneak path) and near `r0` otherwise.
//! The module provides a closed-form capacity approximation valid when
//! `(r0 - r0_prime)/sigma` is large, exact numerical values from the full
//! mixture densities, the matching dispersion pair, the noise level at which
//! capacity meets a target rate, and numeric verification of the error
//! bounds that justify the approximations.

use crate::channel::ChannelParams;
use crate::numeric::{adaptive_simpson, binary_entropy, log_mix_exp, GaussHermite};
use crate::{Error, Result};
use std::sync::OnceLock;

const LN2: f64 = std::f64::consts::LN_2;

fn hermite() -> &'static GaussHermite {
    static GH: OnceLock<GaussHermite> = OnceLock::new();
    GH.get_or_init(|| GaussHermite::new(127))
}

/// A fixed mixture channel: sneak-path probability, input prior, physical
/// parameters, and the derived half-distance-to-noise ratio
/// `gamma = (r0_prime - r1) / (2 sigma)`.
#[derive(Debug, Clone, Copy)]
pub struct LambdaChannel {
    pub lambda: f64,
    pub q: f64,
    pub params: ChannelParams,
    pub gamma: f64,
}

impl LambdaChannel {
    pub fn new(lambda: f64, q: f64, params: ChannelParams) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain("lambda must lie in [0, 1]".into()));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain("q must lie in (0, 1)".into()));
        }
        let gamma = (params.r0_prime - params.r1) / (2.0 * params.sigma);
        Ok(Self {
            lambda,
            q,
            params,
            gamma,
        })
    }

    /// Probability that the output lies in the low/parasitic bands:
    /// `q' = q + (1-q) lambda`.
    pub fn q_prime(&self) -> f64 {
        self.q + (1.0 - self.q) * self.lambda
    }
}

/// Capacity and dispersion of one mixture channel, both base-2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityDispersion {
    /// Bits per cell.
    pub capacity: f64,
    /// Bits^2 per cell.
    pub dispersion: f64,
}

/// Mutual information of a binary-input AWGN channel with prior Pr(1) = q
/// and SNR gamma^2, in bits. Evaluated by Gauss-Hermite quadrature over a
/// standard normal; absolute error well below 1e-6 on the ranges used here.
pub fn biawgn_capacity(q: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain("q must lie in [0, 1]".into()));
    }
    if gamma < 0.0 {
        return Err(Error::Domain("gamma must be nonnegative".into()));
    }
    // Degenerate prior carries no information.
    if q == 0.0 || q == 1.0 || gamma == 0.0 {
        return Ok(0.0);
    }
    let gh = hermite();
    let v = gh.expect_std_normal(|z| {
        let t = 2.0 * gamma * (z - gamma);
        -q * log_mix_exp(q, 1.0 - q, t) - (1.0 - q) * log_mix_exp(1.0 - q, q, t)
    });
    Ok(v / LN2)
}

/// Closed-form capacity approximation, in bits:
/// `H(q') - (1-q) H(lambda) + q' C_biawgn(q/q', gamma)`.
///
/// Exact at both endpoints: lambda = 0 gives H(q) and lambda = 1 gives the
/// plain binary-AWGN value.
pub fn capacity_approx(channel: &LambdaChannel) -> Result<f64> {
    let qp = channel.q_prime();
    Ok(binary_entropy(qp) - (1.0 - channel.q) * binary_entropy(channel.lambda)
        + qp * biawgn_capacity(channel.q / qp, channel.gamma)?)
}

/// Mutual information computed from the full mixture densities by adaptive
/// quadrature (no large-gap approximation); bits, absolute error <= 1e-5.
pub fn capacity_exact(channel: &LambdaChannel) -> Result<f64> {
    Ok(conditional_moments(channel, 1)[0] / LN2)
}

/// Dispersion from the closed-form approximation, in bits^2. The lambda = 0
/// limit is analytic: the channel degenerates to a noiseless source, whose
/// information-density variance is the varentropy of the input.
pub fn dispersion_approx(channel: &LambdaChannel) -> Result<f64> {
    let q = channel.q;
    let lam = channel.lambda;
    let c = capacity_approx(channel)?;
    if lam == 0.0 {
        let v = q * q.log2().powi(2) + (1.0 - q) * (1.0 - q).log2().powi(2) - c * c;
        return Ok(v.max(0.0));
    }
    let gamma = channel.gamma;
    let gh = hermite();
    let term1 = gh.expect_std_normal(|z| {
        let t = 2.0 * gamma * (z - gamma);
        (log_mix_exp(q, (1.0 - q) * lam, t) / LN2).powi(2)
    });
    let term2 = gh.expect_std_normal(|z| {
        let t = 2.0 * gamma * (z - gamma);
        (log_mix_exp(1.0 - q, q / lam, t) / LN2).powi(2)
    });
    let term3 = (1.0 - q).log2().powi(2);
    let v = q * term1 + (1.0 - q) * lam * term2 + (1.0 - q) * (1.0 - lam) * term3 - c * c;
    Ok(v.max(0.0))
}

/// Variance of the information density from the full mixture densities;
/// bits^2.
pub fn dispersion_exact(channel: &LambdaChannel) -> Result<f64> {
    let m = conditional_moments(channel, 2);
    let i = m[0] / LN2;
    Ok((m[1] / (LN2 * LN2) - i * i).max(0.0))
}

/// First `orders` moments of log(p(Y|X)/p(Y)) in nats, jointly over the
/// three output classes. `orders` is 1 or 2.
fn conditional_moments(channel: &LambdaChannel, orders: usize) -> [f64; 2] {
    let p = channel.params;
    let lam = channel.lambda;
    let q = channel.q;
    let sigma = p.sigma;
    let inv2s2 = 0.5 / (sigma * sigma);
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * sigma);

    // log p(y|0), log p(y|1), log p(y) without the shared normalizer, which
    // cancels in the ratio.
    let log_p0 = move |y: f64| {
        let e_sp = -(y - p.r0_prime).powi(2) * inv2s2;
        let e_h = -(y - p.r0).powi(2) * inv2s2;
        if lam == 0.0 {
            e_h
        } else if lam == 1.0 {
            e_sp
        } else {
            log_mix3(lam, e_sp, 1.0 - lam, e_h, 0.0, f64::NEG_INFINITY)
        }
    };
    let log_p1 = move |y: f64| -(y - p.r1).powi(2) * inv2s2;
    let log_py = move |y: f64| {
        let e_sp = -(y - p.r0_prime).powi(2) * inv2s2;
        let e_h = -(y - p.r0).powi(2) * inv2s2;
        let e_l = -(y - p.r1).powi(2) * inv2s2;
        log_mix3((1.0 - q) * lam, e_sp, (1.0 - q) * (1.0 - lam), e_h, q, e_l)
    };

    // classes: (mean, weight, log conditional density)
    enum Cond {
        Zero,
        One,
    }
    let classes = [
        (p.r1, q, Cond::One),
        (p.r0_prime, (1.0 - q) * lam, Cond::Zero),
        (p.r0, (1.0 - q) * (1.0 - lam), Cond::Zero),
    ];

    let span = 10.0 * sigma;
    let mut first = 0.0;
    let mut second = 0.0;
    for (mean, weight, cond) in classes {
        if weight == 0.0 {
            continue;
        }
        let log_cond = |y: f64| match cond {
            Cond::Zero => log_p0(y),
            Cond::One => log_p1(y),
        };
        let f1 = |y: f64| {
            let g = norm * (-(y - mean).powi(2) * inv2s2).exp();
            g * (log_cond(y) - log_py(y))
        };
        first += weight * adaptive_simpson(&f1, mean - span, mean + span, 1e-9);
        if orders > 1 {
            let f2 = |y: f64| {
                let g = norm * (-(y - mean).powi(2) * inv2s2).exp();
                g * (log_cond(y) - log_py(y)).powi(2)
            };
            second += weight * adaptive_simpson(&f2, mean - span, mean + span, 1e-9);
        }
    }
    [first, second]
}

/// log(a e^x + b e^y + c e^z), tolerating zero weights.
fn log_mix3(a: f64, x: f64, b: f64, y: f64, c: f64, z: f64) -> f64 {
    let terms = [(a, x), (b, y), (c, z)];
    let mut hi = f64::NEG_INFINITY;
    for &(w, e) in &terms {
        if w > 0.0 {
            hi = hi.max(w.ln() + e);
        }
    }
    let mut acc = 0.0;
    for &(w, e) in &terms {
        if w > 0.0 {
            acc += (w.ln() + e - hi).exp();
        }
    }
    hi + acc.ln()
}

/// Both capacity and dispersion from the closed-form route.
pub fn capacity_dispersion_approx(channel: &LambdaChannel) -> Result<CapacityDispersion> {
    Ok(CapacityDispersion {
        capacity: capacity_approx(channel)?,
        dispersion: dispersion_approx(channel)?,
    })
}

/// Largest noise level at which the capacity approximation still supports
/// `rate`; bisection to 0.01 resistance units.
pub fn shannon_limit_sigma(
    rate: f64,
    lambda: f64,
    q: f64,
    params: &ChannelParams,
) -> Result<f64> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::Domain("rate must lie in (0, 1)".into()));
    }
    let cap_at = |sigma: f64| -> Result<f64> {
        let p = params.with_sigma(sigma)?;
        capacity_approx(&LambdaChannel::new(lambda, q, p)?)
    };
    let mut lo = 0.5;
    if cap_at(lo)? < rate {
        return Err(Error::Domain(format!(
            "rate {rate} unreachable even at sigma = {lo}"
        )));
    }
    let mut hi = lo;
    loop {
        hi *= 2.0;
        if cap_at(hi)? < rate {
            break;
        }
        if hi > 1e6 {
            return Err(Error::Computation(
                "capacity never drops below the target rate; the infinite-noise \
                 floor already supports it"
                    .into(),
            ));
        }
    }
    while hi - lo > 0.01 {
        let mid = 0.5 * (lo + hi);
        if cap_at(mid)? >= rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Outcome of one analytic-bound verification.
#[derive(Debug, Clone, Copy)]
pub struct BoundCheck {
    pub lhs: f64,
    pub bound: f64,
    pub holds: bool,
}

fn appendix_common(delta_r: f64, sigma: f64, lambda: f64, delta: f64) -> Result<f64> {
    if delta <= 0.0 || lambda < delta {
        return Err(Error::Domain("need lambda >= delta > 0".into()));
    }
    if lambda < 1.0 {
        let tau = 0.5 * delta_r + sigma * sigma / delta_r * (lambda / (1.0 - lambda)).ln();
        if tau <= 0.0 || tau >= delta_r {
            return Err(Error::Domain(format!(
                "gap-to-noise too small: tau = {tau} outside (0, {delta_r})"
            )));
        }
    }
    // beta = (2 sigma^2 / delta_r) log((1-delta)/delta)
    Ok(2.0 * sigma * sigma / delta_r * ((1.0 - delta) / delta).ln())
}

/// Verifies the first-moment tail bound: the expected log-perturbation from
/// the far mixture component is at most `(1/delta) exp(-(dR-beta)^2/(8 s^2))`.
pub fn appendix_a_check(
    delta_r: f64,
    sigma: f64,
    lambda: f64,
    delta: f64,
) -> Result<BoundCheck> {
    let beta = appendix_common(delta_r, sigma, lambda, delta)?;
    let bound = delta.recip() * (-(delta_r - beta).powi(2) / (8.0 * sigma * sigma)).exp();
    let lhs = if lambda >= 1.0 {
        0.0
    } else {
        let c = (1.0 - lambda) / lambda;
        hermite().expect_std_normal(|zt| {
            let z = sigma * zt;
            let t = -delta_r * (delta_r - 2.0 * z) / (2.0 * sigma * sigma);
            ln1p_c_exp(c, t)
        })
    };
    Ok(BoundCheck {
        lhs,
        bound,
        holds: lhs <= bound,
    })
}

/// Verifies the second-moment analogue with bound
/// `(3 dR^4 / (4 s^4) + 3/(2 delta^2)) exp(-(dR-beta)^2/(8 s^2))`.
pub fn appendix_b_check(
    delta_r: f64,
    sigma: f64,
    lambda: f64,
    delta: f64,
) -> Result<BoundCheck> {
    let beta = appendix_common(delta_r, sigma, lambda, delta)?;
    let s2 = sigma * sigma;
    let coeff = 3.0 * delta_r.powi(4) / (4.0 * s2 * s2) + 1.5 / (delta * delta);
    let bound = coeff * (-(delta_r - beta).powi(2) / (8.0 * s2)).exp();
    let lhs = if lambda >= 1.0 {
        0.0
    } else {
        let c = (1.0 - lambda) / lambda;
        hermite().expect_std_normal(|zt| {
            let z = sigma * zt;
            let t = -delta_r * (delta_r - 2.0 * z) / (2.0 * s2);
            ln1p_c_exp(c, t).powi(2)
        })
    };
    Ok(BoundCheck {
        lhs,
        bound,
        holds: lhs <= bound,
    })
}

/// ln(1 + c e^t) for c > 0, stable across the full range of t.
fn ln1p_c_exp(c: f64, t: f64) -> f64 {
    let u = c.ln() + t;
    if u > 30.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}
