//! Gauss-Legendre nodes and weights, plus small integration helpers.

use crate::C64;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Newton iteration on the Legendre polynomial from the Chebyshev-like
/// initial guess; converges to machine precision in a handful of steps.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // recurrence for P_n(x) and P_n'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A rule mapped onto [lo, hi].
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn on(n: usize, lo: f64, hi: f64) -> Self {
        let (x, w) = gauss_legendre(n);
        let c = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        Rule {
            nodes: x.iter().map(|&xi| mid + c * xi).collect(),
            weights: w.iter().map(|&wi| c * wi).collect(),
        }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> C64) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_real(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Tensor-product integral over [lo,hi]^2 of a complex integrand.
    pub fn integrate_2d(&self, mut f: impl FnMut(f64, f64) -> C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (&x1, &w1) in self.nodes.iter().zip(&self.weights) {
            for (&x2, &w2) in self.nodes.iter().zip(&self.weights) {
                acc += w1 * w2 * f(x1, x2);
            }
        }
        acc
    }

    pub fn integrate_2d_real(&self, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (&x1, &w1) in self.nodes.iter().zip(&self.weights) {
            for (&x2, &w2) in self.nodes.iter().zip(&self.weights) {
                acc += w1 * w2 * f(x1, x2);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = Rule::on(8, 0.0, 1.0);
        // degree 15 is exact for 8 points
        let val = rule.integrate_real(|x| x.powi(15));
        assert!((val - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_oscillatory_sine() {
        let rule = Rule::on(96, 0.0, 1.0);
        let val = rule.integrate_real(|x| (40.0 * x).sin());
        let exact = (1.0 - (40.0f64).cos()) / 40.0;
        assert!((val - exact).abs() < 1e-13);
    }
}
