//! Bound states of the D-dimensional Schrödinger equation with the
//! Manning-Rosen potential
//!
//! ```text
//! V(r) = -(ħ²/2μb²) [A e^{-r/b}/(1-e^{-r/b}) - α(α-1) e^{-2r/b}/(1-e^{-r/b})²]
//! ```
//!
//! * [`model`]: parameters, quantum numbers, potential and effective potential.
//! * [`spectrum`]: closed-form energies, critical couplings, degeneracies and
//!   the Hulthén / Coulomb limits.
//! * [`wavefun`]: normalized radial functions and hyperspherical factors.
//! * [`oracle`]: finite-difference eigensolver used to check the closed form.
//! * [`golden`]: the embedded reference table and its audit.
//! * [`specfun`]: log-gamma, Jacobi polynomials and Gauss-Legendre rules.

pub mod error;
pub mod golden;
pub mod model;
pub mod oracle;
pub mod specfun;
pub mod spectrum;
pub mod wavefun;

pub use error::{Error, Result};
pub use model::{CentrifugalMode, PotentialParams, QuantumState, Units};
pub use oracle::{
    approximation_audit, solve_radial, solve_radial_extrapolated, state_energy, AuditReport, GridKind, OracleResult, RadialGrid,
};
pub use spectrum::{critical_coupling, degenerate_partners, energy, SpectrumEntry};
pub use wavefun::{radial_wavefunction, RadialSolution};
