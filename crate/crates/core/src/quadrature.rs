//! Symmetric Gauss-Legendre angular quadrature sets.
//!
//! Directions mu_n in (-1, 1) are the roots of the Legendre polynomial of the
//! requested degree, with the weights that integrate polynomials up to degree
//! 2N-1 exactly. Nodes are stored in ascending order, so the negative
//! directions come first and direction n pairs with direction N-1-n.

use crate::error::{Error, Result};

/// Largest supported quadrature order.
pub const MAX_ORDER: usize = 64;

/// A symmetric angular quadrature set: directions mu_n with weights w_n.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSet {
    order: usize,
    mu: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureSet {
    /// Number of directions.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Directions, ascending; none is zero.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Weights, matching `mu` index for index; all positive, summing to 2.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Index of the direction with the same magnitude and opposite sign.
    pub fn mirror(&self, n: usize) -> usize {
        self.order - 1 - n
    }
}

/// Builds the Gauss-Legendre set of the given even order (2..=64).
///
/// Nodes are found by Newton iteration on the three-term Legendre recurrence
/// from the standard cosine initial guesses; each negative node is the exact
/// mirror of its positive partner, so the +/- pairing is bitwise.
pub fn gauss_legendre(order: usize) -> Result<QuadratureSet> {
    if order < 2 || order > MAX_ORDER || order % 2 != 0 {
        return Err(Error::InvalidQuadratureOrder { order });
    }
    let half = order / 2;
    // Positive roots in descending order (k = 1 targets the largest root).
    let mut positive = Vec::with_capacity(half);
    for k in 1..=half {
        let mut x = (std::f64::consts::PI * (k as f64 - 0.25) / (order as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(order, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        // One polishing step after convergence.
        let (p, dp) = legendre_with_derivative(order, x);
        x -= p / dp;
        let (_, dp) = legendre_with_derivative(order, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        positive.push((x, w));
    }
    let mut mu = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    for &(x, w) in &positive {
        mu.push(-x);
        weights.push(w);
    }
    for &(x, w) in positive.iter().rev() {
        mu.push(x);
        weights.push(w);
    }
    Ok(QuadratureSet { order, mu, weights })
}

/// Legendre polynomial of degree n and its derivative at x, by the three-term
/// recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 2..=n {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent root finder: bisection on sign changes of the Legendre
    /// polynomial, no Newton machinery shared with the implementation.
    fn bisection_roots(n: usize) -> Vec<f64> {
        let poly = |x: f64| legendre_with_derivative(n, x).0;
        let mut roots = Vec::new();
        let samples = 20 * n;
        let mut prev_x = -1.0 + 1e-12;
        let mut prev_p = poly(prev_x);
        for i in 1..=samples {
            let x = -1.0 + 2.0 * i as f64 / samples as f64 - 1e-12;
            let p = poly(x);
            if prev_p * p < 0.0 {
                let (mut lo, mut hi) = (prev_x, x);
                let mut plo = prev_p;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let pm = poly(mid);
                    if plo * pm <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        plo = pm;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev_x = x;
            prev_p = p;
        }
        roots
    }

    #[test]
    fn order_two_is_analytic() {
        let q = gauss_legendre(2).unwrap();
        let r = 1.0 / 3.0f64.sqrt();
        assert!((q.mu()[0] + r).abs() < 1e-15);
        assert!((q.mu()[1] - r).abs() < 1e-15);
        assert!((q.weights()[0] - 1.0).abs() < 1e-15);
        assert!((q.weights()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn order_four_matches_reference_values() {
        // Reference values computed with an independent library implementation.
        let q = gauss_legendre(4).unwrap();
        assert!((q.mu()[0] + 0.86113631159405257).abs() < 1e-14);
        assert!((q.mu()[1] + 0.33998104358485626).abs() < 1e-14);
        assert!((q.weights()[0] - 0.34785484513745368).abs() < 1e-14);
        assert!((q.weights()[1] - 0.65214515486254621).abs() < 1e-14);
    }

    #[test]
    fn order_ten_matches_bisection_oracle() {
        let q = gauss_legendre(10).unwrap();
        let roots = bisection_roots(10);
        assert_eq!(roots.len(), 10);
        for (a, b) in q.mu().iter().zip(roots.iter()) {
            assert!((a - b).abs() < 1e-13, "node {a} vs bisection {b}");
        }
    }

    #[test]
    fn order_ten_spot_values() {
        let q = gauss_legendre(10).unwrap();
        assert!((q.mu()[9] - 0.97390652851717174).abs() < 1e-14);
        assert!((q.weights()[9] - 0.066671344308688069).abs() < 1e-14);
        assert!((q.mu()[5] - 0.14887433898163122).abs() < 1e-14);
        assert!((q.weights()[5] - 0.29552422471475298).abs() < 1e-14);
    }

    #[test]
    fn order_sixty_four_spot_values() {
        let q = gauss_legendre(64).unwrap();
        assert!((q.mu()[63] - 0.99930504173577217).abs() < 1e-14);
        assert!((q.weights()[63] - 0.0017832807216942152).abs() < 1e-14);
    }

    #[test]
    fn moments_and_pairing_hold_for_all_orders() {
        for order in (2..=MAX_ORDER).step_by(2) {
            let q = gauss_legendre(order).unwrap();
            let sum_w: f64 = q.weights().iter().sum();
            let sum_wmu: f64 = q.weights().iter().zip(q.mu()).map(|(w, m)| w * m).sum();
            let sum_wmu2: f64 = q.weights().iter().zip(q.mu()).map(|(w, m)| w * m * m).sum();
            assert!((sum_w - 2.0).abs() < 1e-13, "order {order}: sum w = {sum_w}");
            assert!(sum_wmu.abs() < 1e-15, "order {order}: sum w mu = {sum_wmu}");
            assert!(
                (sum_wmu2 - 2.0 / 3.0).abs() < 1e-13,
                "order {order}: sum w mu^2 = {sum_wmu2}"
            );
            for n in 0..order {
                let m = q.mirror(n);
                assert_eq!(q.mu()[n], -q.mu()[m], "order {order} pairing");
                assert_eq!(q.weights()[n], q.weights()[m]);
            }
            for n in 1..order {
                assert!(q.mu()[n] > q.mu()[n - 1], "order {order} not ascending");
            }
            assert!(q.mu().iter().all(|&m| m != 0.0));
        }
    }

    #[test]
    fn rejects_bad_orders() {
        for order in [0, 1, 3, 7, 65, 66, 128] {
            assert!(matches!(
                gauss_legendre(order),
                Err(Error::InvalidQuadratureOrder { .. })
            ));
        }
    }
}
