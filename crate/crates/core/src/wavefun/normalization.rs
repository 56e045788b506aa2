//! Normalization of `g(z) = N z^ε (1-z)^{1+η} P_n^{(2ε,2η+1)}(1-2z)`.
//!
//! With `dr = -b dz/z`, unit norm in `r` requires `N = 1/sqrt(b I)` where
//!
//! ```text
//! I = ∫_0^1 z^{2ε-1} (1-z)^{2η+2} [P_n^{(2ε,2η+1)}(1-2z)]² dz.
//! ```
//!
//! Two independent routes compute `I`: a Gamma-function closed form and graded
//! Gauss-Legendre quadrature.

use crate::error::{Error, Result};
use crate::model::PotentialParams;
use crate::spectrum::SpectrumEntry;
use crate::specfun::{jacobi, ln_factorial, ln_gamma_positive, KahanSum, QuadratureRule};

/// Relative agreement between successive order doublings.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
/// Largest per-panel Gauss-Legendre order tried before giving up.
pub const QUADRATURE_ORDER_CAP: usize = 4096;

fn check_entry(epsilon: f64, eta: f64) -> Result<()> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("normalization needs epsilon > 0, got {epsilon}")));
    }
    if !(eta >= -0.5) {
        return Err(Error::Domain(format!("normalization needs eta >= -1/2, got {eta}")));
    }
    Ok(())
}

/// Closed form of `I` with `a = 2ε`, `b = 2η + 1`.
///
/// Writing `(1-z)^{b+1} = (1-z)^b - z(1-z)^b` splits `I` into two standard
/// Jacobi integrals,
///
/// ```text
/// ∫ z^{a-1}(1-z)^b P² dz = G/a,   ∫ z^a (1-z)^b P² dz = G/(2n+a+b+1),
/// G = Γ(n+a+1) Γ(n+b+1) / (n! Γ(n+a+b+1)),
/// ```
///
/// so `I = G (2n+b+1) / (a (2n+a+b+1))`, a single product with no
/// cancellation. At `n = 0` this is `B(2ε, 2η+3)`.
pub fn normalization_integral_closed_form(n: u32, epsilon: f64, eta: f64) -> Result<f64> {
    check_entry(epsilon, eta)?;
    let a = 2.0 * epsilon;
    let b = 2.0 * eta + 1.0;
    let nf = f64::from(n);
    let ln_g = ln_gamma_positive(nf + a + 1.0) + ln_gamma_positive(nf + b + 1.0)
        - ln_factorial(n)
        - ln_gamma_positive(nf + a + b + 1.0);
    let value = ln_g.exp() * (2.0 * nf + b + 1.0) / (a * (2.0 * nf + a + b + 1.0));
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Normalization(value))
    }
}

/// `N = 1/sqrt(s(n))` with `s(n) = b I` from the closed form.
pub fn normalization_closed_form(entry: &SpectrumEntry, b: f64) -> Result<f64> {
    let integral = normalization_integral_closed_form(entry.state.n, entry.epsilon, entry.eta)?;
    let s = b * integral;
    if s > 0.0 && s.is_finite() {
        Ok(1.0 / s.sqrt())
    } else {
        Err(Error::Normalization(s))
    }
}

/// The historical double sum for `s(n)`:
///
/// ```text
/// s(n) = b (-1)^n Γ(n+2η+2) Γ(n+2ε+1)² / Γ(n+2ε+2η+2)
///        × Σ_{p,r} (-1)^{p+r} Γ(n+2ε+r-p+1)(p+2η+2)
///          / [p! r! (n-p)! (n-r)! Γ(n+2ε-p+1) Γ(2ε+r+1) (n+2ε+r+2η+2)]
/// ```
///
/// It does not reproduce `b I`: at `n = 0` it returns `2ε · b I`, and the
/// ratio drifts with `n`. Nothing normalizes through it; it is evaluated only
/// so audits can report the discrepancy.
pub fn published_double_sum(entry: &SpectrumEntry, b: f64) -> Result<f64> {
    let (eps, eta) = (entry.epsilon, entry.eta);
    check_entry(eps, eta)?;
    let n = entry.state.n;
    let nf = f64::from(n);
    let two_eps = 2.0 * eps;
    let ln_pre = ln_gamma_positive(nf + 2.0 * eta + 2.0) + 2.0 * ln_gamma_positive(nf + two_eps + 1.0)
        - ln_gamma_positive(nf + two_eps + 2.0 * eta + 2.0);
    let mut terms = Vec::new();
    for p in 0..=n {
        for r in 0..=n {
            let (pf, rf) = (f64::from(p), f64::from(r));
            let ln_mag = ln_gamma_positive(nf + two_eps + rf - pf + 1.0) + (pf + 2.0 * eta + 2.0).ln()
                - ln_factorial(p)
                - ln_factorial(r)
                - ln_factorial(n - p)
                - ln_factorial(n - r)
                - ln_gamma_positive(nf + two_eps - pf + 1.0)
                - ln_gamma_positive(two_eps + rf + 1.0)
                - (nf + two_eps + rf + 2.0 * eta + 2.0).ln();
            let sign = if (n + p + r).is_multiple_of(2) { 1.0 } else { -1.0 };
            terms.push((sign, ln_mag));
        }
    }
    let scale = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let mut acc = KahanSum::default();
    for (sign, ln_mag) in terms {
        acc.add(sign * (ln_mag - scale).exp());
    }
    Ok(b * acc.value() * (scale + ln_pre).exp())
}

/// Integrate over consecutive panels with Gauss-Legendre, doubling the
/// per-panel order from 8 until two successive totals agree to `tol`.
pub(crate) fn adaptive_panels<F: Fn(f64) -> f64>(breaks: &[f64], f: F, tol: f64) -> Result<f64> {
    let mut order = 8;
    let mut previous = QuadratureRule::gauss_legendre(order)?.integrate_panels(breaks, &f);
    loop {
        order *= 2;
        if order > QUADRATURE_ORDER_CAP {
            return Err(Error::Quadrature { previous, last: previous });
        }
        let current = QuadratureRule::gauss_legendre(order)?.integrate_panels(breaks, &f);
        if (current - previous).abs() <= tol * current.abs() {
            return Ok(current);
        }
        if order == QUADRATURE_ORDER_CAP {
            return Err(Error::Quadrature { previous, last: current });
        }
        previous = current;
    }
}

/// Number of halving steps of the geometric panels at each end of `[0, 1]`.
const GRADED_LEVELS: i32 = 50;

/// `I` by quadrature. `[0, 1/2]` is split into panels `[2^{-k-1}, 2^{-k}]`
/// graded toward `z = 0`, and `[1/2, 1]` likewise toward `z = 1` in the
/// variable `w = 1 - z`. The two end caps below `2^{-50}` use the leading
/// power-law term, exact to `O(2^{-50})` relative to the cap.
pub fn normalization_integral_quadrature(n: u32, epsilon: f64, eta: f64) -> Result<f64> {
    check_entry(epsilon, eta)?;
    let (a, b) = (2.0 * epsilon, 2.0 * eta + 1.0);
    let mut breaks = vec![0.0];
    breaks.extend((1..=GRADED_LEVELS).rev().map(|k| 0.5f64.powi(k)));
    let edge = 0.5f64.powi(GRADED_LEVELS);

    // near z = 0 in z, near z = 1 in w; both halves share the same panel set
    let near_zero = |z: f64| {
        if z <= 0.0 {
            return 0.0;
        }
        let w = 1.0 - z;
        let p = jacobi(n, a, b, 1.0 - 2.0 * z);
        ((a - 1.0) * z.ln() + (b + 1.0) * w.ln()).exp() * p * p
    };
    let near_one = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let z = 1.0 - w;
        let p = jacobi(n, a, b, 2.0 * w - 1.0);
        ((a - 1.0) * z.ln() + (b + 1.0) * w.ln()).exp() * p * p
    };
    let inner = &breaks[1..];
    let lower = adaptive_panels(inner, near_zero, QUADRATURE_TOLERANCE * 1e-2)?;
    let upper = adaptive_panels(inner, near_one, QUADRATURE_TOLERANCE * 1e-2)?;

    // P_n^{(a,b)}(1) = C(n+a, n), P_n^{(a,b)}(-1) = (-1)^n C(n+b, n)
    let nf = f64::from(n);
    let p_at_one = (ln_gamma_positive(nf + a + 1.0) - ln_factorial(n) - ln_gamma_positive(a + 1.0)).exp();
    let p_at_minus_one = (ln_gamma_positive(nf + b + 1.0) - ln_factorial(n) - ln_gamma_positive(b + 1.0)).exp();
    let cap_zero = p_at_one * p_at_one * edge.powf(a) / a;
    let cap_one = p_at_minus_one * p_at_minus_one * edge.powf(b + 2.0) / (b + 2.0);
    Ok(lower + upper + cap_zero + cap_one)
}

/// `N = 1/sqrt(b I)` with `I` from quadrature.
pub fn normalization_quadrature(params: &PotentialParams, entry: &SpectrumEntry) -> Result<f64> {
    let integral = normalization_integral_quadrature(entry.state.n, entry.epsilon, entry.eta)?;
    Ok(1.0 / (params.b() * integral).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{QuantumState, Units};
    use crate::spectrum::energy;
    use approx::assert_relative_eq;

    fn beta_fn(x: f64, y: f64) -> f64 {
        (ln_gamma_positive(x) + ln_gamma_positive(y) - ln_gamma_positive(x + y)).exp()
    }

    #[test]
    fn ground_state_is_beta_function() {
        assert_relative_eq!(normalization_integral_closed_form(0, 1.0, 0.0).unwrap(), 1.0 / 12.0, max_relative = 1e-14);
        assert_relative_eq!(normalization_integral_quadrature(0, 1.0, 0.0).unwrap(), 1.0 / 12.0, max_relative = 1e-12);
        for &(eps, eta) in &[(0.3, -0.5), (2.5, 0.4), (27.8, 0.4), (140.0, 4.5)] {
            let want = beta_fn(2.0 * eps, 2.0 * eta + 3.0);
            assert_relative_eq!(normalization_integral_closed_form(0, eps, eta).unwrap(), want, max_relative = 1e-12);
            assert_relative_eq!(normalization_integral_quadrature(0, eps, eta).unwrap(), want, max_relative = 1e-10);
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for n in 0..=5 {
            for &(eps, eta) in &[(0.59, 1.2), (1.0, 0.0), (2.5, 0.4), (10.3, 1.2), (15.4, 0.4), (139.0, 4.5)] {
                let c = normalization_integral_closed_form(n, eps, eta).unwrap();
                let q = normalization_integral_quadrature(n, eps, eta).unwrap();
                assert!((c - q).abs() / q < 1e-9, "n={n} eps={eps} eta={eta}: {c} vs {q}");
            }
        }
    }

    #[test]
    fn published_sum_is_off_by_two_epsilon_at_ground_state() {
        let params = PotentialParams::from_ratio(2.0, 0.025, 0.75, Units::ATOMIC).unwrap();
        let entry = energy(&params, &QuantumState::new(0, 1, 2).unwrap()).unwrap();
        let published = published_double_sum(&entry, params.b()).unwrap();
        let exact = params.b() * normalization_integral_closed_form(0, entry.epsilon, entry.eta).unwrap();
        assert_relative_eq!(published / exact, 2.0 * entry.epsilon, max_relative = 1e-10);
        let entry = energy(&params, &QuantumState::new(1, 1, 2).unwrap()).unwrap();
        let published = published_double_sum(&entry, params.b()).unwrap();
        let exact = params.b() * normalization_integral_closed_form(1, entry.epsilon, entry.eta).unwrap();
        assert!((published / exact - 2.0 * entry.epsilon).abs() > 1e-3);
    }

    #[test]
    fn b_scaling() {
        let params = PotentialParams::new(30.0, 0.3, 5.0).unwrap();
        let entry = energy(&params, &QuantumState::new(1, 1, 3).unwrap()).unwrap();
        let n1 = normalization_closed_form(&entry, 5.0).unwrap();
        let n2 = normalization_closed_form(&entry, 20.0).unwrap();
        assert_relative_eq!(n2, n1 / 2.0, max_relative = 1e-14);
        let q = normalization_quadrature(&params, &entry).unwrap();
        assert_relative_eq!(q, n1, max_relative = 1e-9);
    }

    #[test]
    fn rejects_unbound_parameters() {
        assert!(normalization_integral_closed_form(0, 0.0, 0.0).is_err());
        assert!(normalization_integral_quadrature(0, -1.0, 0.0).is_err());
        assert!(normalization_integral_closed_form(0, 1.0, -0.7).is_err());
    }
}
