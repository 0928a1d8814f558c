//! Quadrature rules and small numeric helpers shared by the analysis modules.

/// Nodes and weights for an n-point Gauss-Hermite rule: integrates
/// `e^(-x^2) f(x)` over the real line exactly for polynomials up to
/// degree 2n-1.
///
/// Computed with Newton iteration on the orthonormal Hermite recurrence,
/// which stays bounded for large n.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two nodes");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let pi_m4 = std::f64::consts::PI.powf(-0.25);
        // Roots come in +/- pairs; solve for the positive half.
        let m = n.div_ceil(2);
        let mut z = 0.0;
        for i in 0..m {
            // Initial guesses from Numerical Recipes.
            z = match i {
                0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * (n as f64).powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                // Orthonormal Hermite polynomials via recurrence.
                let mut p1 = pi_m4;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                pp = (2.0 * n as f64).sqrt() * p2;
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        Self { nodes, weights }
    }

    /// Integral of `e^(-x^2) f(x)` over the real line.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Expectation `E[f(Z)]` for a standard normal `Z`.
    pub fn expect_std_normal<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let c = std::f64::consts::PI.sqrt().recip();
        c * self.integrate(|x| f(std::f64::consts::SQRT_2 * x))
    }
}

/// Nodes and weights for an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two nodes");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev initial guess, then Newton on the Legendre recurrence.
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = 1.0;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
                }
                pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over [a, b].
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }

    /// Nodes mapped to [a, b] together with their scaled weights.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// Adaptive Simpson quadrature of `f` on [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fb, fm, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1)
    }
}

/// log(a + b e^t) evaluated without overflow for any t; requires a, b >= 0
/// and a + b > 0.
pub fn log_mix_exp(a: f64, b: f64, t: f64) -> f64 {
    if b == 0.0 {
        return a.ln();
    }
    if a == 0.0 {
        return b.ln() + t;
    }
    let la = a.ln();
    let lb = b.ln() + t;
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    hi + (lo - hi).exp().ln_1p()
}

/// Binary entropy in bits; 0 at the endpoints.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Binomial coefficient as f64; n is small (check-node degrees).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_moments_of_std_normal() {
        let gh = GaussHermite::new(64);
        // E[1], E[Z^2], E[Z^4], E[Z^8] for Z ~ N(0,1).
        assert!((gh.expect_std_normal(|_| 1.0) - 1.0).abs() < 1e-14);
        assert!((gh.expect_std_normal(|z| z * z) - 1.0).abs() < 1e-13);
        assert!((gh.expect_std_normal(|z| z.powi(4)) - 3.0).abs() < 1e-12);
        assert!((gh.expect_std_normal(|z| z.powi(8)) - 105.0).abs() < 1e-10);
    }

    #[test]
    fn hermite_nonpolynomial() {
        // integral of e^(-x^2) cos x = sqrt(pi) e^(-1/4)
        let gh = GaussHermite::new(64);
        let expect = std::f64::consts::PI.sqrt() * (-0.25f64).exp();
        assert!((gh.integrate(|x| x.cos()) - expect).abs() < 1e-13);
    }

    #[test]
    fn legendre_exact_polynomials() {
        let gl = GaussLegendre::new(8);
        assert!((gl.integrate(0.0, 1.0, |x| x.powi(7)) - 0.125).abs() < 1e-14);
        assert!((gl.integrate(-2.0, 3.0, |_| 1.0) - 5.0).abs() < 1e-13);
    }

    #[test]
    fn legendre_weights_sum() {
        let gl = GaussLegendre::new(201);
        let total: f64 = gl.mapped(0.0, 2.0).map(|(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_gaussian_mass() {
        let f = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let v = adaptive_simpson(&f, -10.0, 10.0, 1e-12);
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn log_mix_exp_extremes() {
        // log(0.5 + 0.5 e^1000) = 1000 + log(0.5) + log(1 + e^-1000)
        let v = log_mix_exp(0.5, 0.5, 1000.0);
        assert!((v - (1000.0 + 0.5f64.ln())).abs() < 1e-12);
        let v = log_mix_exp(0.5, 0.5, -1000.0);
        assert!((v - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(7, 0), 1.0);
        assert_eq!(binomial(17, 17), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
    }
}
