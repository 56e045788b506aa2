//! Normalized radial wavefunctions and the D-dimensional angular factors.
//!
//! The radial function lives naturally on `z = e^{-r/b} ∈ [0, 1]`:
//!
//! ```text
//! g(z) = N z^ε (1-z)^{1+η} P_n^{(2ε, 2η+1)}(1 - 2z)
//! ```
//!
//! `g(r) = r^{(D-1)/2} R(r)`, so `∫ |g|² dr = ∫ |R|² r^{D-1} dr = 1`.

pub mod angular;
pub mod normalization;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{PotentialParams, QuantumState};
use crate::specfun::jacobi;
use crate::spectrum::{energy, SpectrumEntry};

pub use angular::{angular_factor, total_wavefunction, AngularMultiIndex, Wavefunction};
pub use normalization::{
    normalization_closed_form, normalization_integral_closed_form, normalization_integral_quadrature,
    normalization_quadrature, published_double_sum,
};

/// Points on the geometric node-counting grid.
const NODE_GRID_POINTS: usize = 4000;
/// Inner end of the node-counting grid, in units of `b`.
const NODE_GRID_START: f64 = 1e-4;
/// `g` counts as decayed once below this fraction of its maximum.
const DECAY_FRACTION: f64 = 1e-12;

/// A bound state's normalized radial function `g_nl`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSolution {
    pub entry: SpectrumEntry,
    pub b: f64,
    pub norm_constant: f64,
    pub node_count: u32,
}

/// One row of a sampled wavefunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveSample {
    pub r: f64,
    pub z: f64,
    pub g: f64,
    pub g2: f64,
}

/// Build the normalized radial solution of `state`.
pub fn radial_wavefunction(params: &PotentialParams, state: &QuantumState) -> Result<RadialSolution> {
    let entry = energy(params, state)?;
    let norm_constant = normalization_closed_form(&entry, params.b())?;
    let mut solution = RadialSolution { entry, b: params.b(), norm_constant, node_count: 0 };
    solution.node_count = solution.count_nodes();
    Ok(solution)
}

impl RadialSolution {
    fn jacobi_params(&self) -> (f64, f64) {
        (2.0 * self.entry.epsilon, 2.0 * self.entry.eta + 1.0)
    }

    /// `g` as a function of `z ∈ [0, 1]`.
    pub fn eval_z(&self, z: f64) -> f64 {
        if z <= 0.0 || z >= 1.0 {
            return 0.0;
        }
        self.eval_parts(z.ln(), 1.0 - z, z)
    }

    /// `g` as a function of `r > 0`; `z` and `1 - z` are formed without
    /// cancellation.
    pub fn eval_r(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let t = r / self.b;
        self.eval_parts(-t, -(-t).exp_m1(), (-t).exp())
    }

    fn eval_parts(&self, ln_z: f64, one_minus_z: f64, z: f64) -> f64 {
        let (a, b) = self.jacobi_params();
        let envelope = (self.entry.epsilon * ln_z + (1.0 + self.entry.eta) * one_minus_z.ln()).exp();
        // 1 - 2z = (1 - z) - z keeps precision at both ends
        let p = jacobi(self.entry.state.n, a, b, one_minus_z - z);
        self.norm_constant * envelope * p
    }

    /// A radius beyond which `|g|` stays below `1e-12` of its maximum.
    pub fn decay_radius(&self) -> f64 {
        let eps = self.entry.epsilon;
        let mut r_cut = self.b * (30.0 + 2.0 * f64::from(self.entry.state.n)) / eps;
        for _ in 0..20 {
            let peak = geometric_grid(NODE_GRID_START * self.b, r_cut, NODE_GRID_POINTS)
                .map(|r| self.eval_r(r).abs())
                .fold(0.0, f64::max);
            let tail = self.eval_r(r_cut).abs().max(self.eval_r(0.9 * r_cut).abs());
            if tail <= DECAY_FRACTION * peak {
                return r_cut;
            }
            r_cut *= 1.5;
        }
        r_cut
    }

    fn count_nodes(&self) -> u32 {
        let r_cut = self.decay_radius();
        let values: Vec<f64> = geometric_grid(NODE_GRID_START * self.b, r_cut, NODE_GRID_POINTS)
            .map(|r| self.eval_r(r))
            .collect();
        count_sign_changes(&values)
    }

    /// `∫_0^∞ |g(r)|² dr` by graded Gauss-Legendre in `r`, independent of
    /// the closed-form normalization integral.
    pub fn norm_by_quadrature(&self) -> Result<f64> {
        let eps = self.entry.epsilon;
        let b = self.b;
        let knee = b * (1.0 / eps).min(1.0);
        let mut breaks: Vec<f64> = (1..=50).rev().map(|k| knee * 0.5f64.powi(k)).collect();
        let r_end = self.decay_radius().max(2.0 * knee);
        let steps = ((r_end - knee) / knee).ceil().max(1.0) as usize;
        let width = (r_end - knee) / steps as f64;
        breaks.extend((0..=steps).map(|i| knee + width * i as f64));
        normalization::adaptive_panels(&breaks, |r| self.eval_r(r).powi(2), 1e-12)
    }

    /// `samples` points on a geometric grid from `1e-4 b` to the decay radius.
    pub fn sample(&self, samples: usize) -> Result<Vec<WaveSample>> {
        if samples == 0 {
            return Err(Error::Domain("number of samples must be positive".into()));
        }
        let r_cut = self.decay_radius();
        let grid: Vec<f64> = if samples == 1 {
            vec![NODE_GRID_START * self.b]
        } else {
            geometric_grid(NODE_GRID_START * self.b, r_cut, samples).collect()
        };
        Ok(grid
            .into_iter()
            .map(|r| {
                let g = self.eval_r(r);
                WaveSample { r, z: (-r / self.b).exp(), g, g2: g * g }
            })
            .collect())
    }
}

/// `count` points from `start` to `end` with a constant ratio.
pub(crate) fn geometric_grid(start: f64, end: f64, count: usize) -> impl Iterator<Item = f64> {
    let ratio = (end / start).ln() / (count as f64 - 1.0);
    (0..count).map(move |i| start * (ratio * i as f64).exp())
}

/// Sign changes in a sequence, ignoring exact zeros and values below
/// `1e-12` of the sequence maximum.
pub(crate) fn count_sign_changes(values: &[f64]) -> u32 {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = DECAY_FRACTION * peak;
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}
