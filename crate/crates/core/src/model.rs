//! Physical parameters and the Manning-Rosen potential.
//!
//! ```text
//! V(r) = -(ħ²/2μb²) [ A t - α(α-1) t² ],   t = e^{-r/b} / (1 - e^{-r/b}) = 1 / expm1(r/b)
//! ```
//!
//! The quantity `t` is evaluated as `1/expm1(r/b)`, which keeps full relative
//! precision down to `r/b ~ 1e-300` and underflows cleanly to zero at large `r`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant and reduced mass. Atomic units by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub mu: f64,
}

impl Units {
    pub const ATOMIC: Units = Units { hbar: 1.0, mu: 1.0 };

    pub fn new(hbar: f64, mu: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParams(format!("hbar must be positive, got {hbar}")));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParams(format!("mu must be positive, got {mu}")));
        }
        Ok(Units { hbar, mu })
    }

    /// `ħ²/(2μ)`, the kinetic prefactor; equals `1/κ`.
    pub fn kinetic(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mu)
    }

    /// `κ = 2μ/ħ²`.
    pub fn kappa(&self) -> f64 {
        2.0 * self.mu / (self.hbar * self.hbar)
    }
}

impl Default for Units {
    fn default() -> Self {
        Units::ATOMIC
    }
}

/// Coupling `A`, shape `α`, screening length `b` and the unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    coupling: f64,
    alpha: f64,
    b: f64,
    units: Units,
}

impl PotentialParams {
    /// Parameters in atomic units (ħ = μ = 1).
    pub fn new(coupling: f64, alpha: f64, b: f64) -> Result<Self> {
        Self::with_units(coupling, alpha, b, Units::ATOMIC)
    }

    pub fn with_units(coupling: f64, alpha: f64, b: f64, units: Units) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParams(format!("screening length b must be positive, got {b}")));
        }
        if !coupling.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidParams("A and alpha must be finite".into()));
        }
        let units = Units::new(units.hbar, units.mu)?;
        Ok(PotentialParams { coupling, alpha, b, units })
    }

    /// The tabulated convention: coupling given as `A/b`, range as `1/b`.
    pub fn from_ratio(a_over_b: f64, inv_b: f64, alpha: f64, units: Units) -> Result<Self> {
        if !(inv_b > 0.0 && inv_b.is_finite()) {
            return Err(Error::InvalidParams(format!("1/b must be positive, got {inv_b}")));
        }
        let b = 1.0 / inv_b;
        Self::with_units(a_over_b * b, alpha, b, units)
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn kappa(&self) -> f64 {
        self.units.kappa()
    }

    /// `ħ²/(2μb²)`: the energy unit in which the potential and the spectrum
    /// are dimensionless.
    pub fn energy_scale(&self) -> f64 {
        self.units.kinetic() / (self.b * self.b)
    }

    /// `α(α-1)`. Every α-dependent quantity goes through this product, which
    /// is what makes the α ↔ 1-α symmetry hold to rounding.
    pub fn alpha_product(&self) -> f64 {
        self.alpha * (self.alpha - 1.0)
    }

    pub fn with_coupling(&self, coupling: f64) -> Self {
        PotentialParams { coupling, ..*self }
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        PotentialParams { alpha, ..*self }
    }

    pub fn with_b(&self, b: f64) -> Result<Self> {
        Self::with_units(self.coupling, self.alpha, b, self.units)
    }
}

/// Radial quantum number `n`, orbital quantum number `l`, dimension `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumState {
    pub n: u32,
    pub l: u32,
    pub dim: u32,
}

pub(crate) const ORBITAL_LETTERS: [char; 6] = ['s', 'p', 'd', 'f', 'g', 'h'];

impl QuantumState {
    pub fn new(n: u32, l: u32, dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {dim}")));
        }
        Ok(QuantumState { n, l, dim })
    }

    /// Combined index `q = D + 2l - 2`; the spectrum depends on `(l, D)` only
    /// through `q`.
    pub fn q(&self) -> u32 {
        self.dim + 2 * self.l - 2
    }

    /// `2n + D + 2l - 1`, the effective principal number of the Hulthén and
    /// Coulomb limits.
    pub fn principal(&self) -> u32 {
        2 * self.n + self.q() + 1
    }

    /// `[(D+2l-2)² - 1]/4`, the centrifugal prefactor of the radial equation.
    pub fn centrifugal_prefactor(&self) -> f64 {
        let q = f64::from(self.q());
        (q * q - 1.0) / 4.0
    }

    /// Spectroscopic label `N·letter` with `N = n + l + 1`, if `l` has a letter.
    pub fn label(&self) -> Option<String> {
        ORBITAL_LETTERS
            .get(self.l as usize)
            .map(|c| format!("{}{}", self.n + self.l + 1, c))
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(label) => write!(f, "{label} (n={}, l={}, D={})", self.n, self.l, self.dim),
            None => write!(f, "(n={}, l={}, D={})", self.n, self.l, self.dim),
        }
    }
}

/// Treatment of the `1/r²` centrifugal term in the radial equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CentrifugalMode {
    /// The true `1/r²`.
    Exact,
    /// `e^{-r/b} / (b² (1 - e^{-r/b})²)`, the form the closed solution needs.
    Approximated,
}

impl fmt::Display for CentrifugalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CentrifugalMode::Exact => f.write_str("exact"),
            CentrifugalMode::Approximated => f.write_str("approx"),
        }
    }
}

/// `e^{-s}/(1-e^{-s})` for `s = r/b > 0`.
#[inline]
pub(crate) fn screening_ratio(s: f64) -> f64 {
    1.0 / s.exp_m1()
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be positive and finite, got {r}")))
    }
}

/// Dimensionless well shape `-A t + α(α-1) t²` at `s = r/b`.
#[inline]
pub(crate) fn reduced_potential(coupling: f64, alpha_product: f64, s: f64) -> f64 {
    let t = screening_ratio(s);
    alpha_product * t * t - coupling * t
}

/// Dimensionless centrifugal factor `b² C(r)` at `s = r/b`.
#[inline]
pub(crate) fn reduced_centrifugal(mode: CentrifugalMode, s: f64) -> f64 {
    match mode {
        CentrifugalMode::Exact => 1.0 / (s * s),
        CentrifugalMode::Approximated => {
            // e^{-s}/(1-e^{-s})² = t(1+t)
            let t = screening_ratio(s);
            t * (1.0 + t)
        }
    }
}

/// The Manning-Rosen potential at radius `r`.
pub fn potential_value(params: &PotentialParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    let s = r / params.b;
    Ok(params.energy_scale() * reduced_potential(params.coupling, params.alpha_product(), s))
}

/// The equivalent rational form `-(C e^{-r/b} + D e^{-2r/b}) / (1 - e^{-r/b})²`
/// with `C = A`, `D = -A - α(α-1)` (energy scale `ħ²/2μb²` restored).
pub fn potential_value_rational(params: &PotentialParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    let s = r / params.b;
    let x = (-s).exp();
    let one_minus_x = -(-s).exp_m1();
    let c = params.coupling;
    let d = -params.coupling - params.alpha_product();
    Ok(-params.energy_scale() * (c * x + d * x * x) / (one_minus_x * one_minus_x))
}

/// Location and depth of the well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialMinimum {
    pub r0: f64,
    pub v_min: f64,
}

fn check_well(params: &PotentialParams) -> Result<f64> {
    let ap = params.alpha_product();
    if ap > 0.0 && params.coupling > 0.0 {
        Ok(ap)
    } else {
        Err(Error::NoInteriorMinimum { alpha: params.alpha, coupling: params.coupling })
    }
}

/// `r0 = b ln[1 + 2α(α-1)/A]`, `V(r0) = -(ħ²/2μ) A² / (4 b² α(α-1))`.
///
/// Only defined when `α(α-1) > 0` and `A > 0`; for `0 <= α <= 1` the
/// stationary point would sit at negative `r`.
pub fn potential_minimum(params: &PotentialParams) -> Result<PotentialMinimum> {
    let ap = check_well(params)?;
    let a = params.coupling;
    let r0 = params.b * (2.0 * ap / a).ln_1p();
    let v_min = -params.energy_scale() * a * a / (4.0 * ap);
    Ok(PotentialMinimum { r0, v_min })
}

/// Second derivative of the potential at its minimum:
/// `(ħ²/2μ) A² [A + 2α(α-1)]² / (8 b⁴ α³(α-1)³)`.
pub fn potential_curvature(params: &PotentialParams) -> Result<f64> {
    let ap = check_well(params)?;
    let a = params.coupling;
    let b2 = params.b * params.b;
    let s = a + 2.0 * ap;
    Ok(params.units.kinetic() * a * a * s * s / (8.0 * b2 * b2 * ap * ap * ap))
}

/// Potential plus the centrifugal term `(ħ²/2μ) [(D+2l-2)²-1]/4 · C(r)` of the
/// radial equation for `g(r) = r^{(D-1)/2} R(r)`.
pub fn effective_potential(
    params: &PotentialParams,
    state: &QuantumState,
    r: f64,
    mode: CentrifugalMode,
) -> Result<f64> {
    check_radius(r)?;
    Ok(effective_potential_unchecked(params, state.centrifugal_prefactor(), r, mode))
}

#[inline]
pub(crate) fn effective_potential_unchecked(
    params: &PotentialParams,
    centrifugal_prefactor: f64,
    r: f64,
    mode: CentrifugalMode,
) -> f64 {
    let s = r / params.b;
    let well = reduced_potential(params.coupling, params.alpha_product(), s);
    params.energy_scale() * (well + centrifugal_prefactor * reduced_centrifugal(mode, s))
}
