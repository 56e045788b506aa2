//! Closed-form bound-state spectrum.
//!
//! With `q = D + 2l - 2`, the shape parameters are
//!
//! ```text
//! a = sqrt((1-2α)² + q² - 1) = sqrt(q² + 4α(α-1)),   η = (a - 1)/2
//! ε = [4A - 4(n+1)² - q² + 1 - 4(2n+1)η] / [8(n+1+η)]
//! E = -(ħ²/2μb²) ε²
//! ```
//!
//! A state is bound iff `ε > 0`. Everything downstream of the state is keyed
//! on `(n, q)`, so interdimensional partners `(n, l±1, D∓2)` share every
//! floating-point operation and come out bit-identical.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{PotentialParams, QuantumState, Units, ORBITAL_LETTERS};

/// One bound state and the parameters that define its wavefunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub state: QuantumState,
    pub energy: f64,
    pub a_param: f64,
    pub eta: f64,
    pub epsilon: f64,
}

fn shape_radicand(alpha_product: f64, q: u32) -> f64 {
    let q = f64::from(q);
    q * q + 4.0 * alpha_product
}

fn shape_from_q(alpha: f64, alpha_product: f64, state: &QuantumState) -> Result<f64> {
    let radicand = shape_radicand(alpha_product, state.q());
    if radicand < 0.0 {
        return Err(Error::ShapeParameter { alpha, l: state.l, dim: state.dim, radicand });
    }
    Ok(radicand.sqrt())
}

/// `a = sqrt((1-2α)² + (D+2l-2)² - 1)`.
///
/// Only `D = 2, l = 0` with `0 < α < 1` has a negative radicand.
pub fn shape_parameter(params: &PotentialParams, state: &QuantumState) -> Result<f64> {
    shape_from_q(params.alpha(), params.alpha_product(), state)
}

/// The dimensionless energy parameter `ε` for radial number `n` and shape `η`.
fn epsilon_from(coupling: f64, n: u32, q: u32, eta: f64) -> f64 {
    let n1 = f64::from(n) + 1.0;
    let q = f64::from(q);
    let two_n1 = 2.0 * f64::from(n) + 1.0;
    // The η-free part is an exact integer in f64; grouping it keeps the
    // Hulthén reduction (η half-integer) exact apart from the A term.
    let integer_part = 4.0 * n1 * n1 + q * q - 1.0;
    let numerator = 4.0 * coupling - (integer_part + 4.0 * two_n1 * eta);
    numerator / (8.0 * (n1 + eta))
}

/// Closed-form entry without the bound-state check.
pub fn spectrum_entry_unchecked(params: &PotentialParams, state: &QuantumState) -> Result<SpectrumEntry> {
    let a_param = shape_parameter(params, state)?;
    let eta = 0.5 * (a_param - 1.0);
    let epsilon = epsilon_from(params.coupling(), state.n, state.q(), eta);
    let energy = -params.energy_scale() * epsilon * epsilon;
    Ok(SpectrumEntry { state: *state, energy, a_param, eta, epsilon })
}

/// Bound-state energy of `state`; `Error::Unbound` when `ε <= 0`.
pub fn energy(params: &PotentialParams, state: &QuantumState) -> Result<SpectrumEntry> {
    let entry = spectrum_entry_unchecked(params, state)?;
    if entry.epsilon > 0.0 {
        Ok(entry)
    } else {
        Err(Error::Unbound { state: *state, epsilon: entry.epsilon })
    }
}

/// All bound states with the given `l` and `D`, ordered by `n`.
pub fn bound_states(params: &PotentialParams, l: u32, dim: u32) -> Result<Vec<SpectrumEntry>> {
    let mut out = Vec::new();
    for n in 0.. {
        let state = QuantumState::new(n, l, dim)?;
        match energy(params, &state) {
            Ok(e) => out.push(e),
            Err(Error::Unbound { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Coupling `A_c` at which `state` reaches zero binding energy:
/// `(n+1+η)² - η(η+1) + (D+2l-2)²/4 - 1/4`.
pub fn critical_coupling(state: &QuantumState, alpha: f64) -> Result<f64> {
    let a = shape_from_q(alpha, alpha * (alpha - 1.0), state)?;
    let eta = 0.5 * (a - 1.0);
    let n1 = f64::from(state.n) + 1.0;
    let q = f64::from(state.q());
    Ok((n1 + eta) * (n1 + eta) - eta * (eta + 1.0) + q * q / 4.0 - 0.25)
}

/// States `(n, l', D')` with `D' + 2l' = D + 2l` and `d_min <= D' <= d_max`,
/// ascending in `D'`.
pub fn degenerate_partners(state: &QuantumState, d_min: u32, d_max: u32) -> Result<Vec<QuantumState>> {
    if d_min < 2 {
        return Err(Error::Range(format!("minimum dimension must be >= 2, got {d_min}")));
    }
    if d_min > d_max {
        return Err(Error::Range(format!("empty dimension range {d_min}..{d_max}")));
    }
    let total = state.dim + 2 * state.l;
    Ok((d_min..=d_max.min(total))
        .filter(|d| (total - d).is_multiple_of(2))
        .map(|d| QuantumState { n: state.n, l: (total - d) / 2, dim: d })
        .collect())
}

/// Hulthén (`α = 0` or `1`) energy:
/// `E = -ħ² [4A - N²]² / (32 μ b² N²)`, `N = 2n + D + 2l - 1`.
pub fn hulthen_energy(state: &QuantumState, coupling: f64, b: f64, units: Units) -> Result<f64> {
    let big_n = f64::from(state.principal());
    let gap = 4.0 * coupling - big_n * big_n;
    if gap <= 0.0 {
        return Err(Error::Unbound { state: *state, epsilon: gap / (4.0 * big_n) });
    }
    Ok(-units.hbar * units.hbar * gap * gap / (32.0 * units.mu * b * b * big_n * big_n))
}

/// Hulthén s-wave form for three dimensions:
/// `E_n = -ħ² [A - (n+1)²]² / (8 μ b² (n+1)²)`.
pub fn hulthen_s_wave_energy(n: u32, coupling: f64, b: f64, units: Units) -> Result<f64> {
    let n1 = f64::from(n) + 1.0;
    let gap = coupling - n1 * n1;
    if gap <= 0.0 {
        let state = QuantumState { n, l: 0, dim: 3 };
        return Err(Error::Unbound { state, epsilon: gap / n1 });
    }
    Ok(-units.hbar * units.hbar * gap * gap / (8.0 * units.mu * b * b * n1 * n1))
}

/// Coupling `A = 2μ Ze² b / ħ²` that turns the Hulthén well into the screened
/// Coulomb potential `-Ze² δ e^{-δr}/(1-e^{-δr})` with `δ = 1/b`.
pub fn screened_coulomb_coupling(ze2: f64, b: f64, units: Units) -> f64 {
    2.0 * units.mu * ze2 * b / (units.hbar * units.hbar)
}

/// Screened-Coulomb spectrum
/// `E = -(2μ (Ze²)²/ħ²) [1/N - ħ²δN/(8 Ze² μ)]²` with `N = 2n + D + 2l - 1`.
pub fn screened_coulomb_energy(state: &QuantumState, ze2: f64, delta: f64, units: Units) -> Result<f64> {
    let big_n = f64::from(state.principal());
    let h2 = units.hbar * units.hbar;
    let bracket = 1.0 / big_n - h2 * delta * big_n / (8.0 * ze2 * units.mu);
    if bracket <= 0.0 {
        let epsilon = 2.0 * units.mu * ze2 / (h2 * delta) * bracket;
        return Err(Error::Unbound { state: *state, epsilon });
    }
    Ok(-2.0 * units.mu * ze2 * ze2 / h2 * bracket * bracket)
}

/// Unscreened Coulomb limit `E = -4ε₀/(2n+D+2l-1)²`, with
/// `ε₀ = Z²ħ²/(2μa₀²) = μ(Ze²)²/(2ħ²)` and `a₀ = ħ²/(μe²)`.
pub fn coulomb_limit_energy(state: &QuantumState, ze2: f64, units: Units) -> Result<f64> {
    if !(ze2 > 0.0) {
        return Err(Error::Domain(format!("Ze² must be positive, got {ze2}")));
    }
    let eps0 = units.mu * ze2 * ze2 / (2.0 * units.hbar * units.hbar);
    let big_n = f64::from(state.principal());
    Ok(-4.0 * eps0 / (big_n * big_n))
}

/// Parse a spectroscopic label like `"2p"` into `(n, l)` with `n = N - l - 1`.
pub fn parse_spectroscopic(label: &str) -> Result<(u32, u32)> {
    let err = |reason: &str| Error::Label { label: label.to_string(), reason: reason.to_string() };
    let trimmed = label.trim();
    let letter = trimmed.chars().last().ok_or_else(|| err("empty label"))?;
    let digits = &trimmed[..trimmed.len() - letter.len_utf8()];
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(err("expected a positive integer followed by an orbital letter"));
    }
    let principal: u32 = digits.parse().map_err(|_| err("principal number out of range"))?;
    let l = ORBITAL_LETTERS
        .iter()
        .position(|&c| c == letter.to_ascii_lowercase())
        .ok_or_else(|| err("orbital letter must be one of s, p, d, f, g, h"))? as u32;
    if principal <= l {
        return Err(err("principal number must exceed l"));
    }
    Ok((principal - l - 1, l))
}

impl QuantumState {
    /// Build a state from a spectroscopic label and a dimension.
    pub fn from_label(label: &str, dim: u32) -> Result<Self> {
        let (n, l) = parse_spectroscopic(label)?;
        QuantumState::new(n, l, dim)
    }
}
