//! Gauss–Legendre rules on the unit interval and collapsed (Duffy)
//! product rules on the reference triangle `(0,0), (1,0), (0,1)`.

use std::f64::consts::PI;

use crate::error::{DecError, Result};

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exactness: usize,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre_symmetric(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

impl QuadratureRule {
    /// `n`-point Gauss–Legendre rule on `[0, 1]`, exact to degree `2n - 1`.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n > 0);
        let (x, w) = gauss_legendre_symmetric(n);
        Self {
            dim: 1,
            nodes: x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
            weights: w.iter().map(|w| 0.5 * w).collect(),
            exactness: 2 * n - 1,
        }
    }

    /// Cheapest interval rule exact for polynomials of `degree`.
    pub fn interval(degree: usize) -> Self {
        Self::gauss_legendre(degree / 2 + 1)
    }

    /// Collapsed product rule on the reference triangle exact for
    /// polynomials of total degree `degree`. Weights sum to 1/2.
    pub fn triangle(degree: usize) -> Self {
        let n = (degree + 3) / 2;
        let line = Self::gauss_legendre(n);
        let mut nodes = Vec::with_capacity(2 * n * n);
        let mut weights = Vec::with_capacity(n * n);
        for (s, ws) in line.nodes.iter().zip(&line.weights) {
            for (t, wt) in line.nodes.iter().zip(&line.weights) {
                nodes.push(*s);
                nodes.push(t * (1.0 - s));
                weights.push(ws * wt * (1.0 - s));
            }
        }
        Self {
            dim: 2,
            nodes,
            weights,
            exactness: 2 * n - 2,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn exactness(&self) -> usize {
        self.exactness
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Iterate `(node, weight)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.nodes.chunks(self.dim).zip(self.weights.iter().copied())
    }

    pub fn require(&self, degree: usize) -> Result<()> {
        if degree > self.exactness {
            Err(DecError::QuadratureDegree {
                have: self.exactness,
                need: degree,
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    #[test]
    fn interval_rule_integrates_monomials() {
        for n in 1..=12 {
            let rule = QuadratureRule::gauss_legendre(n);
            for p in 0..=2 * n - 1 {
                let got: f64 = rule.iter().map(|(x, w)| w * x[0].powi(p as i32)).sum();
                let exact = 1.0 / (p + 1) as f64;
                assert!((got - exact).abs() <= 1e-14 * exact.max(1.0), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn triangle_monomials_up_to_degree_20() {
        let rule = QuadratureRule::triangle(20);
        assert!(rule.exactness() >= 20);
        for a in 0..=20usize {
            for b in 0..=20 - a {
                let got: f64 = rule
                    .iter()
                    .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32))
                    .sum();
                let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                assert!((got - exact).abs() <= 1e-13 * exact, "x^{a} y^{b}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn insufficient_rule_is_reported() {
        let rule = QuadratureRule::interval(3);
        assert!(rule.require(3).is_ok());
        assert!(matches!(rule.require(9), Err(DecError::QuadratureDegree { .. })));
    }
}
