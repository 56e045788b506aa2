//! Special functions: log-gamma, Jacobi polynomials, Gauss-Legendre rules.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
///
/// Lanczos approximation (g = 7, nine terms) with the reflection formula
/// below `x = 1/2`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_positive(x))
}

pub(crate) fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma_positive(1.0 - x);
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + sum.ln()
}

/// `ln n!`.
pub(crate) fn ln_factorial(n: u32) -> f64 {
    ln_gamma_positive(f64::from(n) + 1.0)
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` by the three-term recurrence in `n`.
pub fn jacobi(n: u32, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = a + b;
    let p1 = 0.5 * (a - b) + 0.5 * (ab + 2.0) * x;
    if n == 1 {
        return p1;
    }
    let (mut prev, mut cur) = (1.0, p1);
    let a2b2 = a * a - b * b;
    for k in 2..=n {
        let k = f64::from(k);
        let c = 2.0 * k + ab;
        let lead = 2.0 * k * (k + ab) * (c - 2.0);
        let mid = (c - 1.0) * (c * (c - 2.0) * x + a2b2);
        let tail = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let next = (mid * cur - tail * prev) / lead;
        prev = cur;
        cur = next;
    }
    cur
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// `(P_n(x), P_n'(x))` for the Legendre polynomial of degree `n >= 1`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl QuadratureRule {
    /// Newton iteration on `P_order`, converged to `|Δx| <= 1e-15`. Nodes are
    /// ascending and mirrored so the rule is exactly symmetric.
    pub fn gauss_legendre(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Domain("quadrature order must be >= 1".into()));
        }
        let n = order;
        let half = n.div_ceil(2);
        let mut pos = Vec::with_capacity(half);
        for i in 0..half {
            // i-th largest root
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            pos.push((x, w));
        }
        if n % 2 == 1 {
            // middle root is exactly zero
            let (_, d) = legendre_with_derivative(n.max(2), 0.0);
            let w = if n == 1 { 2.0 } else { 2.0 / (d * d) };
            let last = pos.len() - 1;
            pos[last] = (0.0, w);
        }
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for &(x, w) in &pos {
            if x != 0.0 {
                nodes.push(-x);
                weights.push(w);
            }
        }
        for &(x, w) in pos.iter().rev() {
            nodes.push(x);
            weights.push(w);
        }
        Ok(QuadratureRule { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_{-1}^{1} f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// `∫_a^b f` by the affine map of the rule.
    pub fn integrate_interval<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }

    /// Composite rule over consecutive breakpoints.
    pub fn integrate_panels<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        let mut acc = KahanSum::default();
        for pair in breaks.windows(2) {
            acc.add(self.integrate_interval(pair[0], pair[1], &mut f));
        }
        acc.value()
    }
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Stirling series after shifting the argument past 30 with the
    /// recurrence. Independent of the Lanczos path.
    fn ln_gamma_stirling(x: f64) -> f64 {
        let mut shift = 0.0;
        let mut y = x;
        while y < 30.0 {
            shift += y.ln();
            y += 1.0;
        }
        let inv = 1.0 / y;
        let inv2 = inv * inv;
        let series = inv
            * (1.0 / 12.0
                - inv2
                    * (1.0 / 360.0
                        - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
        (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series - shift
    }

    #[test]
    fn ln_gamma_known_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert_relative_eq!(ln_gamma(0.5).unwrap(), 0.5 * PI.ln(), max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(11.0).unwrap(), 3_628_800f64.ln(), max_relative = 1e-14);
        assert!((ln_gamma(0.5).unwrap() - 0.572_364_942_9).abs() < 1e-10);
        assert!((ln_gamma(11.0).unwrap() - 15.104_412_573_1).abs() < 1e-10);
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn ln_gamma_against_stirling() {
        let mut x = 1e-3;
        while x < 1e6 {
            let got = ln_gamma(x).unwrap();
            let want = ln_gamma_stirling(x);
            let err = (got - want).abs() / want.abs().max(1.0);
            assert!(err <= 1e-13, "x={x} got={got} want={want} err={err}");
            x *= 1.37;
        }
    }

    #[test]
    fn ln_gamma_recurrence() {
        for &x in &[0.5, 1.5, 10.25, 100.5] {
            let r = ln_gamma(x + 1.0).unwrap() - ln_gamma(x).unwrap() - f64::ln(x);
            assert!(r.abs() < 1e-12, "x={x} residual={r}");
        }
    }

    /// Explicit sum that follows from expanding the Rodrigues formula:
    /// P_n^{(a,b)}(x) = Σ_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^{n-s}.
    fn jacobi_rodrigues(n: u32, a: f64, b: f64, x: f64) -> f64 {
        let binom = |top: f64, k: u32| -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (top - f64::from(i)) / f64::from(i + 1))
        };
        (0..=n)
            .map(|s| {
                binom(f64::from(n) + a, n - s)
                    * binom(f64::from(n) + b, s)
                    * ((x - 1.0) / 2.0).powi(s as i32)
                    * ((x + 1.0) / 2.0).powi((n - s) as i32)
            })
            .sum()
    }

    #[test]
    fn jacobi_low_orders() {
        assert_eq!(jacobi(0, 3.3, -0.2, 0.7), 1.0);
        assert_eq!(jacobi(1, 2.0, 3.0, 0.0), -0.5);
        let x: f64 = 0.5;
        assert_relative_eq!(jacobi(3, 0.0, 0.0, x), (5.0 * x.powi(3) - 3.0 * x) / 2.0, max_relative = 1e-15);
        assert_relative_eq!(jacobi(3, 0.0, 0.0, 0.5), -0.4375, max_relative = 1e-15);
    }

    #[test]
    fn jacobi_recurrence_matches_rodrigues() {
        for n in 0..=5 {
            for &(a, b) in &[(0.0, 0.0), (1.5, 2.3), (-0.5, 0.7), (55.6, 1.8), (0.3, 9.0)] {
                for i in 0..=20 {
                    let x = -1.0 + 0.1 * f64::from(i);
                    let want = jacobi_rodrigues(n, a, b, x);
                    let got = jacobi(n, a, b, x);
                    let scale = want.abs().max(1e-3 * jacobi_rodrigues(n, a, b, 1.0).abs()).max(1e-300);
                    assert!((got - want).abs() / scale < 1e-10, "n={n} a={a} b={b} x={x}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn quadrature_small_orders() {
        let r1 = QuadratureRule::gauss_legendre(1).unwrap();
        assert_eq!(r1.nodes(), &[0.0]);
        assert_eq!(r1.weights(), &[2.0]);
        let r2 = QuadratureRule::gauss_legendre(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert_relative_eq!(r2.nodes()[0], -s, max_relative = 1e-15);
        assert_relative_eq!(r2.nodes()[1], s, max_relative = 1e-15);
        assert_relative_eq!(r2.weights()[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(r2.weights()[1], 1.0, max_relative = 1e-15);
        assert!(QuadratureRule::gauss_legendre(0).is_err());
    }

    #[test]
    fn quadrature_rule_invariants() {
        for order in [1, 2, 3, 7, 20, 64, 65, 200, 1000] {
            let r = QuadratureRule::gauss_legendre(order).unwrap();
            assert_eq!(r.order(), order);
            let wsum: f64 = r.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "order {order}: weight sum {wsum}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
            assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
            for i in 0..order {
                assert!((r.nodes()[i] + r.nodes()[order - 1 - i]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn quadrature_exactness() {
        for order in [1, 2, 5, 10, 20, 40] {
            let r = QuadratureRule::gauss_legendre(order).unwrap();
            for k in 0..2 * order {
                let got = r.integrate(|x| x.powi(k as i32));
                let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((got - want).abs() < 1e-12, "order {order} k {k}: {got} vs {want}");
            }
        }
        let r = QuadratureRule::gauss_legendre(20).unwrap();
        assert!((r.integrate(|x| x.powi(10)) - 2.0 / 11.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_orthogonality() {
        let rule = QuadratureRule::gauss_legendre(48).unwrap();
        // panels graded geometrically toward both endpoints absorb the
        // fractional powers of the weight
        let mut breaks: Vec<f64> = (1..=40).rev().map(|k| -1.0 + 0.5f64.powi(k)).collect();
        breaks.extend((-4..=4).map(|i| f64::from(i) / 10.0));
        breaks.extend((1..=40).map(|k| 1.0 - 0.5f64.powi(k)));
        breaks.insert(0, -1.0);
        breaks.push(1.0);
        // (2ε, 2η+1) of the 2p, D=2, α=0.75, 1/b=0.025 state
        let eta = (3.25f64.sqrt() - 1.0) / 2.0;
        let eps = 40.0 * (2.0f64 * 0.241_087_727_567_321_7).sqrt();
        for &(a, b) in &[(0.0, 0.0), (1.5, 2.3), (2.0 * eps, 2.0 * eta + 1.0)] {
            let inner = |n: u32, m: u32| {
                rule.integrate_panels(&breaks, |x| {
                    (1.0 - x).powf(a) * (1.0 + x).powf(b) * jacobi(n, a, b, x) * jacobi(m, a, b, x)
                })
            };
            for n in 0..=6 {
                let norm = inner(n, n);
                for m in 0..=6 {
                    if m != n {
                        let r = inner(n, m).abs() / norm;
                        assert!(r < 1e-10, "a={a} b={b} n={n} m={m}: {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn compensated_sum() {
        let mut k = KahanSum::default();
        for _ in 0..10 {
            k.add(0.1);
        }
        k.add(1e16);
        k.add(-1e16);
        assert_eq!(k.value(), 1.0);
    }
}
