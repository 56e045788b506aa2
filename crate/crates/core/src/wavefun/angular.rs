//! Hyperspherical angular factors.
//!
//! Axis `j = 1` carries the azimuthal phase `e^{i l₁ θ₁}/sqrt(2π)`. For
//! `2 <= j <= D-1` the factor is
//!
//! ```text
//! H_j(θ) = N_j sin^{l_{j-1}}θ · P_{n_j}^{(Λ̃_{j-1}, Λ̃_{j-1})}(cos θ),
//! n_j = l_j - l_{j-1},   Λ̃_p = l_p + (p-1)/2,
//! ```
//!
//! normalized against the measure `sin^{j-1}θ dθ` on `[0, π]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{radial_wavefunction, RadialSolution};
use crate::error::{Error, Result};
use crate::model::{PotentialParams, QuantumState};
use crate::specfun::{jacobi, QuadratureRule};

/// Angular quantum numbers `l₁, l₂, …, l_{D-1} = l`. `l₁` may be negative;
/// its sign only enters the azimuthal phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngularMultiIndex {
    l_values: Vec<i32>,
}

impl AngularMultiIndex {
    pub fn new(l_values: Vec<i32>) -> Result<Self> {
        if l_values.is_empty() {
            return Err(Error::Hierarchy("need at least one angular quantum number".into()));
        }
        let mut prev = l_values[0].abs();
        for (i, &l) in l_values.iter().enumerate().skip(1) {
            if l < prev {
                return Err(Error::Hierarchy(format!(
                    "l_{} = {l} is below l_{} = {prev}",
                    i + 1,
                    i
                )));
            }
            prev = l;
        }
        Ok(AngularMultiIndex { l_values })
    }

    /// Dimension implied by the index length.
    pub fn dim(&self) -> u32 {
        self.l_values.len() as u32 + 1
    }

    /// The total orbital number `l = l_{D-1}`.
    pub fn l(&self) -> u32 {
        self.l_values.last().map(|v| v.unsigned_abs()).unwrap_or(0)
    }

    /// Signed `l₁`.
    pub fn azimuthal(&self) -> i32 {
        self.l_values[0]
    }

    /// `l_p` for `1 <= p <= D-1`, with `l₁` taken by magnitude.
    pub fn level(&self, p: usize) -> u32 {
        self.l_values[p - 1].unsigned_abs()
    }

    /// `Λ_p = l_p (l_p + p - 1)`.
    pub fn separation_constant(&self, p: usize) -> f64 {
        let l = f64::from(self.level(p));
        l * (l + p as f64 - 1.0)
    }

    /// `Λ̃_p = l_p + (p-1)/2`.
    pub fn jacobi_parameter(&self, p: usize) -> f64 {
        f64::from(self.level(p)) + (p as f64 - 1.0) / 2.0
    }

    /// `n_j = l_j - l_{j-1}` for `j >= 2`.
    pub fn axis_degree(&self, j: usize) -> u32 {
        self.level(j) - self.level(j - 1)
    }

    pub fn l_values(&self) -> &[i32] {
        &self.l_values
    }
}

fn check_axis(j: usize, multi: &AngularMultiIndex) -> Result<()> {
    let d = multi.dim() as usize;
    if j == 0 || j > d - 1 {
        return Err(Error::Hierarchy(format!("axis {j} outside 1..={}", d - 1)));
    }
    Ok(())
}

/// Un-normalized `sin^{l_{j-1}}θ P_{n_j}^{(Λ̃,Λ̃)}(cos θ)`.
fn polar_shape(j: usize, multi: &AngularMultiIndex, theta: f64) -> f64 {
    let power = multi.level(j - 1) as i32;
    let lt = multi.jacobi_parameter(j - 1);
    theta.sin().powi(power) * jacobi(multi.axis_degree(j), lt, lt, theta.cos())
}

/// `N_j` from `∫_0^π H² sin^{j-1}θ dθ = 1`, Gauss-Legendre in `θ` with order
/// doubling. The integrand is a smooth periodic function of `θ`.
fn polar_norm(j: usize, multi: &AngularMultiIndex) -> Result<f64> {
    let weight_power = (j - 1) as i32;
    let f = |t: f64| polar_shape(j, multi, t).powi(2) * t.sin().powi(weight_power);
    let mut order = 32 + 2 * (multi.level(j) as usize + j);
    let mut prev = QuadratureRule::gauss_legendre(order)?.integrate_interval(0.0, PI, f);
    loop {
        order *= 2;
        let cur = QuadratureRule::gauss_legendre(order)?.integrate_interval(0.0, PI, f);
        if (cur - prev).abs() <= 1e-14 * cur.abs() || order >= 4096 {
            return Ok(1.0 / cur.sqrt());
        }
        prev = cur;
    }
}

/// `e^{i l₁ θ₁}/sqrt(2π)`.
pub fn azimuthal_factor(l1: i32, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), f64::from(l1) * theta)
}

/// Normalized angular factor along axis `j` (complex only for `j = 1`).
pub fn angular_factor(j: usize, multi: &AngularMultiIndex, theta: f64) -> Result<Complex64> {
    check_axis(j, multi)?;
    if j == 1 {
        return Ok(azimuthal_factor(multi.azimuthal(), theta));
    }
    Ok(Complex64::new(polar_norm(j, multi)? * polar_shape(j, multi, theta), 0.0))
}

/// Full `ψ(r, θ₁, …, θ_{D-1}) = r^{-(D-1)/2} g(r) Π_j H_j(θ_j)` with the
/// angular normalizations cached.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    pub radial: RadialSolution,
    pub angular: AngularMultiIndex,
    polar_norms: Vec<f64>,
}

impl Wavefunction {
    pub fn new(params: &PotentialParams, state: &QuantumState, multi: AngularMultiIndex) -> Result<Self> {
        if multi.dim() != state.dim {
            return Err(Error::Hierarchy(format!(
                "multi-index has {} entries, dimension {} needs {}",
                multi.l_values.len(),
                state.dim,
                state.dim - 1
            )));
        }
        if multi.l() != state.l {
            return Err(Error::Hierarchy(format!("l_(D-1) = {} but state has l = {}", multi.l(), state.l)));
        }
        let radial = radial_wavefunction(params, state)?;
        let polar_norms = (2..state.dim as usize)
            .map(|j| polar_norm(j, &multi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Wavefunction { radial, angular: multi, polar_norms })
    }

    /// `R(r) = r^{-(D-1)/2} g(r)`.
    pub fn radial_part(&self, r: f64) -> f64 {
        let d = f64::from(self.radial.entry.state.dim);
        r.powf(-(d - 1.0) / 2.0) * self.radial.eval_r(r)
    }

    /// `point = [r, θ₁, …, θ_{D-1}]`.
    pub fn eval(&self, point: &[f64]) -> Result<Complex64> {
        let d = self.radial.entry.state.dim as usize;
        if point.len() != d {
            return Err(Error::Domain(format!("expected {d} coordinates, got {}", point.len())));
        }
        let mut value = azimuthal_factor(self.angular.azimuthal(), point[1]) * self.radial_part(point[0]);
        for j in 2..d {
            value *= self.polar_norms[j - 2] * polar_shape(j, &self.angular, point[j]);
        }
        Ok(value)
    }
}

/// One-shot evaluation of the total wavefunction.
pub fn total_wavefunction(
    params: &PotentialParams,
    state: &QuantumState,
    multi: &AngularMultiIndex,
    point: &[f64],
) -> Result<Complex64> {
    Wavefunction::new(params, state, multi.clone())?.eval(point)
}
