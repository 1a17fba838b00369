//! Multilevel laser-induced continuum structure.
//!
//! Two degenerate ground states and two degenerate excited states share one
//! continuum. After the continuum is eliminated the bound amplitudes evolve
//! under a complex-symmetric, non-Hermitian 4×4 Hamiltonian; a π/4 rotation
//! splits it into a decaying bright pair and a purely real dark pair.
//!
//! * [`model`] builds the Hamiltonians from [`Params`].
//! * [`transforms`] rotates into the bright/dark basis.
//! * [`dynamics`] propagates states (eigen-decomposition, Padé, Runge–Kutta,
//!   closed forms).
//! * [`analysis`] finds the trapping detuning and scans Fano profiles.
//! * [`cli`] reads run configs and writes CSV/SVG.

pub mod analysis;
pub mod cli;
pub mod cmatrix;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod transforms;

pub use analysis::{
    asymptotic_survival, degeneracy_validity, fano_scan, ionization, trapping_delta,
    trapping_residual, DegeneracyReport, FanoProfile,
};
pub use cmatrix::{CMatrix, C64};
pub use dynamics::{
    analytic_bright, analytic_g1, evolve, integrate, propagate_expm, Init, Method, Model, TimeGrid,
    Trajectory,
};
pub use error::{LicsError, Result};
pub use model::Params;
pub use transforms::{block_diagonalize, from_bright_dark, to_bright_dark, Basis, State};
