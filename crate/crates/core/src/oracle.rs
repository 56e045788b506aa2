//! Finite-difference eigensolver for the radial equation
//!
//! ```text
//! -(ħ²/2μ) g'' + V_eff(r) g = E g,   g(r_min) = g(r_max) = 0,
//! ```
//!
//! used as an independent check on the closed-form spectrum.
//!
//! Everything is solved in scaled form: `s = r/b`, `λ = E / (ħ²/2μb²)`, so the
//! kinetic term is `-d²/ds²`. Two discretizations share the same 3-point
//! stencil:
//!
//! * `Uniform`: uniform in `s`, diagonal `2/h² + U_i`, off-diagonal `-1/h²`.
//! * `Logarithmic`: uniform in `x = ln s` with `g = sqrt(s) w(x)`. After
//!   scaling rows by `1/s_i` and setting `v_i = s_i w_i` the matrix is
//!   symmetric with diagonal `(2/h² + 1/4)/s_i² + U_i` and off-diagonal
//!   `-1/(h² s_i s_{i+1})`; `g_i = v_i / sqrt(s_i)`.
//!
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from a twisted
//! factorization at the converged shift.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{effective_potential_unchecked, CentrifugalMode, PotentialParams, QuantumState};
use crate::spectrum::energy;
use crate::wavefun::count_sign_changes;

/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 8001;
/// Default inner wall, in units of `b`.
pub const DEFAULT_R_MIN_OVER_B: f64 = 1e-10;
/// Smallest default outer wall, in units of `b`.
pub const DEFAULT_R_MAX_OVER_B: f64 = 40.0;
/// Default outer wall in decay lengths `b/ε`.
pub const DEFAULT_DECAY_LENGTHS: f64 = 30.0;
/// Absolute bisection tolerance in units of `ħ²/2μb²`.
pub const BISECTION_TOLERANCE: f64 = 1e-12;
/// Minimum grid points per local de Broglie wavelength.
pub const POINTS_PER_WAVELENGTH: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Uniform,
    Logarithmic,
}

/// Radial mesh with Dirichlet walls at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
    pub kind: GridKind,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize, kind: GridKind) -> Result<Self> {
        if !(r_min > 0.0 && r_min.is_finite()) {
            return Err(Error::InvalidParams(format!("r_min must be positive, got {r_min}")));
        }
        if !(r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidParams(format!("r_max = {r_max} must exceed r_min = {r_min}")));
        }
        if n_points < 3 {
            return Err(Error::InvalidParams(format!("need at least 3 grid points, got {n_points}")));
        }
        Ok(RadialGrid { r_min, r_max, n_points, kind })
    }

    /// `r_min = 1e-10 b`, `r_max = max(40 b, 30 b/ε)`, 8001 log-spaced points.
    pub fn for_decay(b: f64, epsilon: f64) -> Result<Self> {
        let mut r_max = DEFAULT_R_MAX_OVER_B * b;
        if epsilon > 0.0 {
            r_max = r_max.max(DEFAULT_DECAY_LENGTHS * b / epsilon);
        }
        RadialGrid::new(DEFAULT_R_MIN_OVER_B * b, r_max, DEFAULT_POINTS, GridKind::Logarithmic)
    }

    /// Default grid sized for the highest of the lowest `k` states of
    /// `(l, D)` that the closed form binds.
    pub fn default_for(params: &PotentialParams, dim: u32, l: u32, k: usize) -> Result<Self> {
        let mut eps = f64::INFINITY;
        for n in 0..k.max(1) as u32 {
            match energy(params, &QuantumState::new(n, l, dim)?) {
                Ok(entry) => eps = eps.min(entry.epsilon),
                Err(Error::Unbound { .. } | Error::ShapeParameter { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        RadialGrid::for_decay(params.b(), if eps.is_finite() { eps } else { 0.0 })
    }

    /// Step: in `r` for `Uniform`, in `ln r` for `Logarithmic`.
    pub fn spacing(&self) -> f64 {
        let span = match self.kind {
            GridKind::Uniform => self.r_max - self.r_min,
            GridKind::Logarithmic => (self.r_max / self.r_min).ln(),
        };
        span / (self.n_points - 1) as f64
    }

    /// Same walls, half the step.
    pub fn refined(&self) -> Self {
        RadialGrid { n_points: 2 * self.n_points - 1, ..*self }
    }

    pub fn with_points(&self, n_points: usize) -> Result<Self> {
        RadialGrid::new(self.r_min, self.r_max, n_points, self.kind)
    }

    /// All `n_points` radii, walls included.
    pub fn points(&self) -> Vec<f64> {
        let h = self.spacing();
        let last = self.n_points - 1;
        (0..self.n_points)
            .map(|i| match (i, self.kind) {
                (0, _) => self.r_min,
                (i, _) if i == last => self.r_max,
                (i, GridKind::Uniform) => self.r_min + h * i as f64,
                (i, GridKind::Logarithmic) => self.r_min * (h * i as f64).exp(),
            })
            .collect()
    }
}

/// The symmetric tridiagonal matrix on the interior points, in scaled units.
#[derive(Debug, Clone)]
pub struct RadialOperator {
    grid: RadialGrid,
    b: f64,
    energy_scale: f64,
    /// Interior points in units of `b`.
    s: Vec<f64>,
    /// Scaled effective potential at the interior points.
    potential: Vec<f64>,
    diag: Vec<f64>,
    /// `off[i]` couples interior points `i` and `i + 1`.
    off: Vec<f64>,
    pivot_floor: f64,
}

impl RadialOperator {
    pub fn new(params: &PotentialParams, dim: u32, l: u32, mode: CentrifugalMode, grid: RadialGrid) -> Result<Self> {
        let state = QuantumState::new(0, l, dim)?;
        let prefactor = state.centrifugal_prefactor();
        let b = params.b();
        let energy_scale = params.energy_scale();
        let points = grid.points();
        let s: Vec<f64> = points[1..points.len() - 1].iter().map(|r| r / b).collect();
        let potential: Vec<f64> = points[1..points.len() - 1]
            .iter()
            .map(|&r| effective_potential_unchecked(params, prefactor, r, mode) / energy_scale)
            .collect();
        let h = match grid.kind {
            GridKind::Uniform => grid.spacing() / b,
            GridKind::Logarithmic => grid.spacing(),
        };
        let h2 = h * h;
        let (diag, off): (Vec<f64>, Vec<f64>) = match grid.kind {
            GridKind::Uniform => (
                potential.iter().map(|u| 2.0 / h2 + u).collect(),
                vec![-1.0 / h2; s.len().saturating_sub(1)],
            ),
            GridKind::Logarithmic => (
                s.iter().zip(&potential).map(|(si, u)| (2.0 / h2 + 0.25) / (si * si) + u).collect(),
                s.windows(2).map(|w| -1.0 / (h2 * w[0] * w[1])).collect(),
            ),
        };
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::Solver(format!(
                "non-finite matrix entries on grid [{}, {}] with {} points",
                grid.r_min, grid.r_max, grid.n_points
            )));
        }
        let max_off2 = off.iter().fold(1.0f64, |m, e| m.max(e * e));
        Ok(RadialOperator {
            grid,
            b,
            energy_scale,
            s,
            potential,
            diag,
            off,
            pivot_floor: f64::MIN_POSITIVE * max_off2,
        })
    }

    /// Interior unknowns.
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    /// `ħ²/2μb²`, the factor between scaled and physical energies.
    pub fn energy_scale(&self) -> f64 {
        self.energy_scale
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off
    }

    /// Smallest scaled effective potential on the interior points.
    pub fn potential_floor(&self) -> f64 {
        self.potential.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn guard(&self, q: f64) -> f64 {
        if q.abs() < self.pivot_floor {
            -self.pivot_floor
        } else {
            q
        }
    }

    /// Number of scaled eigenvalues below `lambda` (negative LDLᵀ pivots).
    pub fn sturm_count_scaled(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - lambda } else { d - lambda - self.off[i - 1] * self.off[i - 1] / q };
            q = self.guard(q);
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Number of eigenvalues below the physical energy `e`.
    pub fn sturm_count(&self, e: f64) -> usize {
        self.sturm_count_scaled(e / self.energy_scale)
    }

    /// Scaled eigenvalue with 0-based `index` by bisection on `[lo, hi]`;
    /// the caller guarantees `count(lo) <= index < count(hi)`.
    fn bisect(&self, index: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..4096 {
            let mid = 0.5 * (lo + hi);
            let width = hi - lo;
            if width <= BISECTION_TOLERANCE || mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count_scaled(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Lower end of the bracket: the operator minus `diag(U)` is positive
    /// definite, so every eigenvalue exceeds `min U`.
    fn lower_bracket(&self) -> f64 {
        let mut lo = self.potential_floor();
        lo -= lo.abs().max(1.0) * 1e-12;
        while self.sturm_count_scaled(lo) > 0 {
            lo = 2.0 * lo - 1.0;
        }
        lo
    }

    /// Eigenvector for the scaled eigenvalue `lambda` via the twisted
    /// factorization `T - λ = N_k Δ_k N_kᵀ`, with twist at the smallest
    /// `|γ_k|`. Returned as `g` on the interior points, max-normalized with a
    /// positive first significant lobe.
    pub fn eigenvector_scaled(&self, lambda: f64) -> Vec<f64> {
        let n = self.size();
        let mut fwd = vec![0.0; n];
        let mut bwd = vec![0.0; n];
        for i in 0..n {
            let q = if i == 0 {
                self.diag[0] - lambda
            } else {
                self.diag[i] - lambda - self.off[i - 1] * self.off[i - 1] / fwd[i - 1]
            };
            fwd[i] = self.guard(q);
        }
        for i in (0..n).rev() {
            let q = if i == n - 1 {
                self.diag[i] - lambda
            } else {
                self.diag[i] - lambda - self.off[i] * self.off[i] / bwd[i + 1]
            };
            bwd[i] = self.guard(q);
        }
        let twist = (0..n)
            .min_by(|&a, &b| {
                let ga = (fwd[a] + bwd[a] - (self.diag[a] - lambda)).abs();
                let gb = (fwd[b] + bwd[b] - (self.diag[b] - lambda)).abs();
                ga.total_cmp(&gb)
            })
            .unwrap_or(0);
        let mut v = vec![0.0; n];
        v[twist] = 1.0;
        for i in (0..twist).rev() {
            v[i] = -self.off[i] / fwd[i] * v[i + 1];
        }
        for i in twist + 1..n {
            v[i] = -self.off[i - 1] / bwd[i] * v[i - 1];
        }
        let mut g: Vec<f64> = match self.grid.kind {
            GridKind::Uniform => v,
            GridKind::Logarithmic => v.iter().zip(&self.s).map(|(vi, si)| vi / si.sqrt()).collect(),
        };
        let peak = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let first = g.iter().copied().find(|x| x.abs() > 1e-6 * peak).unwrap_or(1.0);
        let scale = first.signum() / peak;
        g.iter_mut().for_each(|x| *x *= scale);
        g
    }

    /// Points where the scaled eigenvalue `lambda` is classically allowed but
    /// the mesh has fewer than 20 points per local wavelength. Returns the
    /// number of offending points and the worst radius.
    fn under_resolved(&self, lambda: f64) -> Option<(usize, f64)> {
        let h = self.grid.spacing();
        let mut count = 0;
        let mut worst = (0.0, 0.0);
        for (i, (&si, &u)) in self.s.iter().zip(&self.potential).enumerate() {
            if lambda <= u {
                continue;
            }
            let k = (lambda - u).sqrt();
            let ds = match self.grid.kind {
                GridKind::Uniform => h / self.b,
                GridKind::Logarithmic => {
                    let left = if i == 0 { self.grid.r_min / self.b } else { self.s[i - 1] };
                    let right = self.s.get(i + 1).copied().unwrap_or(self.grid.r_max / self.b);
                    0.5 * (right - left)
                }
            };
            let ratio = k * ds * POINTS_PER_WAVELENGTH / (2.0 * std::f64::consts::PI);
            if ratio > 1.0 {
                count += 1;
                if ratio > worst.0 {
                    worst = (ratio, si);
                }
            }
        }
        (count > 0).then_some((count, worst.1 * self.b))
    }

}

/// Outcome of one finite-difference solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Lowest eigenvalues (physical units), ascending.
    pub eigenvalues: Vec<f64>,
    /// Sign changes of each eigenvector.
    pub node_counts: Vec<u32>,
    pub grid: RadialGrid,
    pub mode: CentrifugalMode,
    /// `(4 E_{h/2} - E_h)/3` per index when a refined run was made.
    pub richardson_estimate: Option<Vec<f64>>,
    /// Fewer bound eigenvalues than requested were found.
    pub truncated: bool,
    pub warnings: Vec<String>,
}

impl OracleResult {
    /// Richardson value when available, otherwise the raw eigenvalue.
    pub fn best(&self, index: usize) -> Option<f64> {
        match &self.richardson_estimate {
            Some(r) => r.get(index).copied(),
            None => self.eigenvalues.get(index).copied(),
        }
    }
}

/// Lowest `k` bound eigenvalues of the radial equation for `(l, D)` on `grid`.
pub fn solve_radial(
    params: &PotentialParams,
    dim: u32,
    l: u32,
    mode: CentrifugalMode,
    grid: &RadialGrid,
    k: usize,
) -> Result<OracleResult> {
    if k == 0 {
        return Err(Error::Domain("number of requested eigenvalues must be at least 1".into()));
    }
    let op = RadialOperator::new(params, dim, l, mode, *grid)?;
    let bound = op.sturm_count_scaled(0.0);
    let found = k.min(bound);
    let lo = op.lower_bracket();
    let scaled: Vec<f64> = (0..found).into_par_iter().map(|i| op.bisect(i, lo, 0.0)).collect();
    let node_counts: Vec<u32> = scaled
        .par_iter()
        .map(|&lambda| count_sign_changes(&op.eigenvector_scaled(lambda)))
        .collect();

    let mut warnings = Vec::new();
    if found < k {
        warnings.push(format!("requested {k} eigenvalues, only {found} lie below zero on this grid"));
    }
    if scaled.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Solver(format!(
            "eigenvalues not strictly ascending on grid [{}, {}] with {} points",
            grid.r_min, grid.r_max, grid.n_points
        )));
    }
    if let Some(&top) = scaled.last() {
        if let Some((count, r)) = op.under_resolved(top) {
            warnings.push(format!(
                "{count} points resolve fewer than {POINTS_PER_WAVELENGTH} points per wavelength (worst near r = {r:.3e})"
            ));
        }
    }
    for (i, &nodes) in node_counts.iter().enumerate() {
        if nodes as usize != i {
            warnings.push(format!("eigenvector {i} has {nodes} sign changes"));
        }
    }
    Ok(OracleResult {
        eigenvalues: scaled.iter().map(|x| x * op.energy_scale()).collect(),
        node_counts,
        grid: *grid,
        mode,
        richardson_estimate: None,
        truncated: found < k,
        warnings,
    })
}

/// `solve_radial` on `grid` and on `grid.refined()`, with the Richardson
/// estimate filled in. Eigenvalues and node counts are those of `grid`.
pub fn solve_radial_extrapolated(
    params: &PotentialParams,
    dim: u32,
    l: u32,
    mode: CentrifugalMode,
    grid: &RadialGrid,
    k: usize,
) -> Result<OracleResult> {
    let fine_grid = grid.refined();
    let (coarse, fine) = rayon::join(
        || solve_radial(params, dim, l, mode, grid, k),
        || solve_radial(params, dim, l, mode, &fine_grid, k),
    );
    let (mut coarse, fine) = (coarse?, fine?);
    let extrapolated = coarse
        .eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(eh, eh2)| (4.0 * eh2 - eh) / 3.0)
        .collect();
    coarse.richardson_estimate = Some(extrapolated);
    for w in fine.warnings {
        if !coarse.warnings.contains(&w) {
            coarse.warnings.push(format!("refined grid: {w}"));
        }
    }
    Ok(coarse)
}

/// Closed-form energy against the oracle in both centrifugal modes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub state: QuantumState,
    pub e_closed: f64,
    pub e_exact: f64,
    pub e_approx: f64,
    /// `|e_closed - e_approx| / |e_approx|`.
    pub rel_err_approx: f64,
    /// `|e_closed - e_exact| / |e_exact|`.
    pub rel_err_exact: f64,
    pub warnings: Vec<String>,
}

/// Oracle energy of a single state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateEnergy {
    pub energy: f64,
    pub node_count: u32,
    pub warnings: Vec<String>,
}

/// Energy of `state` (eigenvalue index `n`) in the given mode, Richardson
/// extrapolated when `extrapolate` is set.
pub fn state_energy(
    params: &PotentialParams,
    state: &QuantumState,
    mode: CentrifugalMode,
    grid: &RadialGrid,
    extrapolate: bool,
) -> Result<StateEnergy> {
    let k = state.n as usize + 1;
    let res = if extrapolate {
        solve_radial_extrapolated(params, state.dim, state.l, mode, grid, k)?
    } else {
        solve_radial(params, state.dim, state.l, mode, grid, k)?
    };
    let energy = res.best(state.n as usize).ok_or_else(|| {
        Error::Solver(format!(
            "{mode} mode finds {} bound levels for l={} D={}, state {} needs {k}",
            res.eigenvalues.len(),
            state.l,
            state.dim,
            state
        ))
    })?;
    Ok(StateEnergy {
        energy,
        node_count: res.node_counts[state.n as usize],
        warnings: res.warnings.iter().map(|w| format!("{mode}: {w}")).collect(),
    })
}

/// Closed form, Exact-mode oracle and Approximated-mode oracle for one
/// state, all Richardson-extrapolated. `grid = None` uses
/// [`RadialGrid::for_decay`] at the state's closed-form `ε`.
pub fn approximation_audit(
    params: &PotentialParams,
    state: &QuantumState,
    grid: Option<&RadialGrid>,
) -> Result<AuditReport> {
    let entry = energy(params, state)?;
    let grid = match grid {
        Some(g) => *g,
        None => RadialGrid::for_decay(params.b(), entry.epsilon)?,
    };
    let (exact, approx) = rayon::join(
        || state_energy(params, state, CentrifugalMode::Exact, &grid, true),
        || state_energy(params, state, CentrifugalMode::Approximated, &grid, true),
    );
    let (exact, approx) = (exact?, approx?);
    let mut warnings = exact.warnings;
    warnings.extend(approx.warnings);
    Ok(AuditReport {
        state: *state,
        e_closed: entry.energy,
        e_exact: exact.energy,
        e_approx: approx.energy,
        rel_err_approx: ((entry.energy - approx.energy) / approx.energy).abs(),
        rel_err_exact: ((entry.energy - exact.energy) / exact.energy).abs(),
        warnings,
    })
}
