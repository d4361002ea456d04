//! Gauss-Jacobi quadrature.
//!
//! Rules integrate (1-x)^a (1+x)^b f(x) over [-1, 1] exactly for
//! polynomial f of degree <= 2n-1. Every weakly singular integral in this
//! crate — the t^(α-2) blow-up of the family at 0 and the (t-σ)^(1-α)
//! kernels of the functional equations — is absorbed into such a weight,
//! so the quadrature only ever sees the regular factor.
//!
//! Nodes and weights come from the Golub-Welsch eigenvalue construction on
//! the symmetric Jacobi tridiagonal.

use crate::error::{Error, Result};
use crate::gamma::beta;
use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl JacobiRule {
    /// Build the n-point rule for the weight (1-x)^a (1+x)^b.
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > -1.0 && b.is_finite() && b > -1.0) {
            return Err(Error::InvalidJacobiExponent { a, b });
        }
        if n == 0 {
            return Err(Error::InvalidInput("jacobi rule needs n >= 1".into()));
        }

        let mut m = DMatrix::<f64>::zeros(n, n);
        m[(0, 0)] = (b - a) / (a + b + 2.0);
        for k in 1..n {
            let kf = k as f64;
            let denom = 2.0 * kf + a + b;
            m[(k, k)] = (b * b - a * a) / (denom * (denom + 2.0));
            // squared off-diagonal entry beta_k; k = 1 uses the form with
            // the (1+a+b) factor cancelled, which stays finite at a+b = -1
            let beta_k = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
            } else {
                4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
                    / (denom.powi(2) * (denom + 1.0) * (denom - 1.0))
            };
            let off = beta_k.sqrt();
            m[(k - 1, k)] = off;
            m[(k, k - 1)] = off;
        }

        let eig = m.symmetric_eigen();
        let mu0 = Self::moment_zero(a, b);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("finite nodes"));

        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(JacobiRule { a, b, nodes, weights })
    }

    /// Zeroth moment of the weight: ∫ (1-x)^a (1+x)^b dx = 2^(a+b+1) B(a+1, b+1).
    pub fn moment_zero(a: f64, b: f64) -> f64 {
        2f64.powf(a + b + 1.0) * beta(a + 1.0, b + 1.0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// ∫_{-1}^{1} (1-x)^a (1+x)^b f(x) dx. Summation is in ascending node
    /// order, so results are deterministic.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    pub fn sum_weights(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// A Jacobi rule mapped to [0, 1]: ∫_0^1 (1-u)^a u^b f(u) du = Σ w_i f(u_i).
///
/// The b-exponent sits at u = 0 and the a-exponent at u = 1, matching how
/// integrals over [0, t] are written throughout the crate (singularity of
/// the family at the left endpoint, kernel singularity at the right).
#[derive(Debug, Clone)]
pub struct UnitJacobiRule {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl UnitJacobiRule {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        Ok(JacobiRule::new(n, a, b)?.into())
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in (0, 1), ascending.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// ∫_0^1 (1-u)^a u^b f(u) du.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(u, w)| w * f(u)).sum()
    }

    /// ∫_0^L (L-σ)^a σ^b f(σ) dσ = L^(a+b+1) Σ w_i f(L u_i).
    pub fn integrate_scaled<F: FnMut(f64) -> f64>(&self, l: f64, mut f: F) -> f64 {
        let scale = l.powf(self.a + self.b + 1.0);
        scale * self.iter().map(|(u, w)| w * f(l * u)).sum::<f64>()
    }

    /// The scale factor L^(a+b+1) used by [`integrate_scaled`]; callers
    /// accumulating matrix-valued integrands apply it themselves.
    pub fn scale(&self, l: f64) -> f64 {
        l.powf(self.a + self.b + 1.0)
    }
}

impl From<JacobiRule> for UnitJacobiRule {
    fn from(rule: JacobiRule) -> Self {
        let factor = 2f64.powf(-(rule.a + rule.b + 1.0));
        UnitJacobiRule {
            a: rule.a,
            b: rule.b,
            nodes: rule.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            weights: rule.weights.iter().map(|w| w * factor).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    /// Moments m_k = ∫ x^k (1-x)^a (1+x)^b dx by the three-term recurrence
    /// m_{k+1} = (k m_{k-1} + (b-a) m_k) / (k+a+b+2), independent of the rule.
    fn weight_moments(a: f64, b: f64, up_to: usize) -> Vec<f64> {
        let mut m = vec![0.0; up_to + 1];
        m[0] = JacobiRule::moment_zero(a, b);
        if up_to >= 1 {
            m[1] = (b - a) / (a + b + 2.0) * m[0];
        }
        for k in 1..up_to {
            m[k + 1] = (k as f64 * m[k - 1] + (b - a) * m[k]) / (k as f64 + a + b + 2.0);
        }
        m
    }

    #[test]
    fn legendre_five_point() {
        let rule = JacobiRule::new(5, 0.0, 0.0).unwrap();
        let x_ref = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ];
        let w_ref = [
            0.236_926_885_056_189_08,
            0.478_628_670_499_366_47,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_47,
            0.236_926_885_056_189_08,
        ];
        for i in 0..5 {
            assert_abs_diff_eq!(rule.nodes()[i], x_ref[i], epsilon = 1e-13);
            assert_abs_diff_eq!(rule.weights()[i], w_ref[i], epsilon = 1e-13);
        }
        assert_relative_eq!(rule.sum_weights(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn chebyshev_weights_sum_to_pi() {
        // a = b = -1/2 exercises the a+b = -1 branch of the recurrence
        let rule = JacobiRule::new(8, -0.5, -0.5).unwrap();
        assert_relative_eq!(rule.sum_weights(), PI, max_relative = 1e-13);
    }

    #[test]
    fn family_weight_moment_alpha_15() {
        // a = 1-α, b = α-2 with α = 3/2: both exponents -1/2, μ0 = B(1/2,1/2) = π
        let alpha = 1.5;
        let rule = JacobiRule::new(10, 1.0 - alpha, alpha - 2.0).unwrap();
        assert_relative_eq!(rule.sum_weights(), PI, max_relative = 1e-12);
        assert_relative_eq!(
            rule.sum_weights(),
            JacobiRule::moment_zero(1.0 - alpha, alpha - 2.0),
            max_relative = 1e-12
        );
    }

    #[test]
    fn integrates_monomials_exactly() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, -0.5), (0.5, -0.25), (1.0 - 1.3, 1.3 - 2.0)] {
            let n = 9;
            let rule = JacobiRule::new(n, a, b).unwrap();
            let m = weight_moments(a, b, 2 * n - 1);
            for k in 0..=(2 * n - 1) {
                let q = rule.integrate(|x| x.powi(k as i32));
                assert_abs_diff_eq!(q, m[k], epsilon = 1e-12 * (1.0 + m[0].abs()));
            }
        }
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(matches!(
            JacobiRule::new(5, -1.0, 0.0),
            Err(Error::InvalidJacobiExponent { .. })
        ));
        assert!(matches!(
            JacobiRule::new(5, 0.0, -1.5),
            Err(Error::InvalidJacobiExponent { .. })
        ));
        assert!(matches!(
            JacobiRule::new(5, f64::NAN, 0.0),
            Err(Error::InvalidJacobiExponent { .. })
        ));
        assert!(JacobiRule::new(0, 0.0, 0.0).is_err());
    }

    #[test]
    fn single_node_rule() {
        let rule = JacobiRule::new(1, 0.0, 0.0).unwrap();
        assert_eq!(rule.len(), 1);
        assert_abs_diff_eq!(rule.nodes()[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(rule.weights()[0], 2.0, max_relative = 1e-14);
    }

    #[test]
    fn unit_rule_matches_beta_integral() {
        // ∫_0^1 (1-u)^a u^b du = B(a+1, b+1)
        let rule = UnitJacobiRule::new(12, -0.5, -0.5).unwrap();
        assert_relative_eq!(rule.integrate(|_| 1.0), PI, max_relative = 1e-12);
        // ∫_0^2 (2-σ)^(-1/2) σ^(-1/2) σ dσ = 2 B(1/2, 3/2) · 2^... = π
        let v = rule.integrate_scaled(2.0, |s| s);
        assert_relative_eq!(v, 2.0 * crate::gamma::beta(0.5, 1.5), max_relative = 1e-12);
    }

    #[test]
    fn unit_rule_smooth_integrand_converges() {
        // ∫_0^1 u^(-1/2) e^u du, reference from the series Σ 1/(k!(k+1/2))
        let reference: f64 = (0..60)
            .map(|k| {
                let kf = k as f64;
                1.0 / ((0..k).map(|j| (j + 1) as f64).product::<f64>() * (kf + 0.5))
            })
            .sum();
        let rule = UnitJacobiRule::new(10, 0.0, -0.5).unwrap();
        assert_relative_eq!(rule.integrate(f64::exp), reference, max_relative = 1e-13);
    }
}
