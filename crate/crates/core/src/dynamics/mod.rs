//! Time evolution under constant effective Hamiltonians.

pub mod analytic;
pub mod eigen;
pub mod expm;
pub mod rk45;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::analysis::ionization;
use crate::cmatrix::{CMatrix, C64};
use crate::error::{LicsError, Result};
use crate::model::{
    bright_hamiltonian, effective_hamiltonian, nondegenerate_hamiltonian, two_level_hamiltonian,
    Params,
};
use crate::transforms::{from_bright_dark, to_bright_dark, Basis, State};

pub use analytic::{analytic_bright, analytic_g1};
pub use eigen::{eigen, eigenvalues, Eigen};

/// Uniformly sampled output times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_samples: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_samples: usize) -> Result<Self> {
        if !t_start.is_finite() || !t_end.is_finite() {
            return Err(LicsError::Domain("time grid bounds must be finite".into()));
        }
        if t_end <= t_start {
            return Err(LicsError::Domain(format!(
                "t_end ({t_end}) must exceed t_start ({t_start})"
            )));
        }
        if n_samples < 2 {
            return Err(LicsError::Domain(format!(
                "n_samples must be at least 2, got {n_samples}"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            n_samples,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        let last = self.n_samples - 1;
        let dt = (self.t_end - self.t_start) / last as f64;
        (0..self.n_samples)
            .map(|k| {
                if k == last {
                    self.t_end
                } else {
                    self.t_start + k as f64 * dt
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: TimeGrid,
    /// States in the model's natural basis.
    pub states: Vec<State>,
    /// The same states in `(g1, g2, e1, e2)`, for four-state models.
    pub original: Option<Vec<State>>,
    pub ionization: Vec<f64>,
}

impl Trajectory {
    fn from_states(grid: TimeGrid, states: Vec<State>, original: Option<Vec<State>>) -> Self {
        let ionization = states.iter().map(ionization).collect();
        Self {
            grid,
            states,
            original,
            ionization,
        }
    }

    pub fn basis(&self) -> Basis {
        self.states[0].basis()
    }

    pub fn final_ionization(&self) -> f64 {
        *self.ionization.last().unwrap()
    }
}

fn check_dims(h: &CMatrix, s0: &State) -> Result<()> {
    if h.dim() != s0.amps().len() {
        return Err(LicsError::Dimension {
            expected: h.dim(),
            got: s0.amps().len(),
        });
    }
    Ok(())
}

fn wrap(basis: Basis, grid: &TimeGrid, amps: Vec<Vec<C64>>) -> Vec<State> {
    grid.times()
        .into_iter()
        .zip(amps)
        .map(|(t, a)| State::from_parts(basis, a, t))
        .collect()
}

/// `c(t) = exp(-i H (t - t_start)) c0` on every grid point.
///
/// Uses the eigen-decomposition when the eigenvectors are well conditioned and
/// scaling-and-squaring otherwise.
pub fn propagate_expm(h: &CMatrix, s0: &State, grid: &TimeGrid) -> Result<Trajectory> {
    check_dims(h, s0)?;
    let prop = expm::Propagator::new(h, s0.amps())?;
    let amps = grid
        .times()
        .iter()
        .map(|t| prop.at(t - grid.t_start))
        .collect();
    Ok(Trajectory::from_states(
        *grid,
        wrap(s0.basis(), grid, amps),
        None,
    ))
}

/// Adaptive Dormand–Prince 5(4) solution of `i dc/dt = H c`, sampled on the grid.
pub fn integrate(h: &CMatrix, s0: &State, grid: &TimeGrid, tol: f64) -> Result<Trajectory> {
    check_dims(h, s0)?;
    let amps = rk45::integrate_to(h, s0.amps(), &grid.times(), tol)?;
    Ok(Trajectory::from_states(
        *grid,
        wrap(s0.basis(), grid, amps),
        None,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Degenerate four-state model.
    FourState,
    /// Bright 2×2 subsystem alone.
    Bright2,
    /// Standard two-level model.
    TwoLevel2,
    /// Four-state model with intra-level splittings.
    Nondegenerate4,
}

impl Model {
    pub fn hamiltonian(self, p: &Params) -> Result<CMatrix> {
        match self {
            Model::FourState => effective_hamiltonian(p),
            Model::Bright2 => bright_hamiltonian(p),
            Model::TwoLevel2 => two_level_hamiltonian(p),
            Model::Nondegenerate4 => nondegenerate_hamiltonian(p),
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Model::FourState | Model::Nondegenerate4 => 4,
            Model::Bright2 | Model::TwoLevel2 => 2,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::FourState => "four_state",
            Model::Bright2 => "bright2",
            Model::TwoLevel2 => "twolevel2",
            Model::Nondegenerate4 => "nondegenerate4",
        })
    }
}

impl FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "four_state" => Ok(Model::FourState),
            "bright2" => Ok(Model::Bright2),
            "twolevel2" => Ok(Model::TwoLevel2),
            "nondegenerate4" => Ok(Model::Nondegenerate4),
            other => Err(format!(
                "unknown model `{other}` (four_state, bright2, twolevel2, nondegenerate4)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// `b_g = 1`, i.e. `(c_g1 + c_g2)/√2`.
    Bright,
    /// `c_g1 = 1`
    G1,
    /// `c_g2 = 1`
    G2,
    Custom(State),
}

impl fmt::Display for Init {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Init::Bright => "bright",
            Init::G1 => "g1",
            Init::G2 => "g2",
            Init::Custom(_) => "custom",
        })
    }
}

impl FromStr for Init {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bright" => Ok(Init::Bright),
            "g1" => Ok(Init::G1),
            "g2" => Ok(Init::G2),
            other => Err(format!("unknown init `{other}` (bright, g1, g2)")),
        }
    }
}

/// Initial state in the basis the model's Hamiltonian acts on.
///
/// The two-level model has a single ground state, so `bright` and `g1` both
/// start there; `g1`/`g2` carry dark weight and cannot start the bright subsystem.
pub fn initial_state(model: Model, init: &Init) -> Result<State> {
    let r = FRAC_1_SQRT_2;
    let incompatible = || {
        LicsError::Usage(format!(
            "initial condition `{init}` is not compatible with model `{model}`"
        ))
    };
    match model {
        Model::FourState | Model::Nondegenerate4 => match init {
            Init::Bright => State::from_real(Basis::Original4, &[r, r, 0.0, 0.0]),
            Init::G1 => Ok(State::basis_vector(Basis::Original4, 0)),
            Init::G2 => Ok(State::basis_vector(Basis::Original4, 1)),
            Init::Custom(s) => match s.basis() {
                Basis::Original4 => Ok(s.clone()),
                Basis::BrightDark4 => from_bright_dark(s),
                _ => Err(incompatible()),
            },
        },
        Model::Bright2 => match init {
            Init::Bright => Ok(State::basis_vector(Basis::Bright2, 0)),
            Init::Custom(s) if s.basis() == Basis::Bright2 => Ok(s.clone()),
            _ => Err(incompatible()),
        },
        Model::TwoLevel2 => match init {
            Init::Bright | Init::G1 => Ok(State::basis_vector(Basis::TwoLevel2, 0)),
            Init::Custom(s) if s.basis() == Basis::TwoLevel2 => Ok(s.clone()),
            _ => Err(incompatible()),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Exact exponential of the constant Hamiltonian.
    Expm,
    /// Adaptive Runge–Kutta with the given tolerance.
    Rk45 { tol: f64 },
}

/// Builds the model Hamiltonian, prepares the initial state and propagates it.
///
/// Four-state models are propagated in `(g1, g2, e1, e2)` and reported in the
/// bright/dark basis, with the original-basis states kept alongside.
pub fn evolve(
    p: &Params,
    model: Model,
    init: &Init,
    grid: &TimeGrid,
    method: Method,
) -> Result<Trajectory> {
    let h = model.hamiltonian(p)?;
    let s0 = initial_state(model, init)?;
    let raw = match method {
        Method::Expm => propagate_expm(&h, &s0, grid)?,
        Method::Rk45 { tol } => integrate(&h, &s0, grid, tol)?,
    };
    if model.dim() == 2 {
        return Ok(raw);
    }
    let mut bright_dark = raw
        .states
        .iter()
        .map(to_bright_dark)
        .collect::<Result<Vec<_>>>()?;
    // Report the starting point exactly rather than after a round trip.
    let exact = match init {
        Init::Bright => Some(State::basis_vector(Basis::BrightDark4, 0)),
        Init::Custom(s) if s.basis() == Basis::BrightDark4 => Some(s.clone()),
        _ => None,
    };
    if let Some(b0) = exact {
        bright_dark[0] = State::from_parts(Basis::BrightDark4, b0.amps().to_vec(), grid.t_start);
    }
    Ok(Trajectory {
        grid: raw.grid,
        states: bright_dark,
        original: Some(raw.states),
        ionization: raw.ionization,
    })
}

/// Amplitudes at a single time, from `t = 0`.
pub(crate) fn state_at(
    p: &Params,
    model: Model,
    init: &Init,
    t: f64,
    method: Method,
) -> Result<State> {
    let h = model.hamiltonian(p)?;
    let s0 = initial_state(model, init)?;
    let amps = match method {
        Method::Expm => expm::Propagator::new(&h, s0.amps())?.at(t),
        Method::Rk45 { tol } => rk45::integrate_to(&h, s0.amps(), &[0.0, t], tol)?
            .pop()
            .unwrap(),
    };
    Ok(State::from_parts(s0.basis(), amps, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::trapping_delta;
    use crate::cmatrix::{ONE, ZERO};

    fn fig2_trap() -> Params {
        let p = Params::figure2();
        p.with_delta(trapping_delta(&p))
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 5).is_err());
        let g = TimeGrid::new(0.0, 6.0, 601).unwrap();
        let t = g.times();
        assert_eq!(t.len(), 601);
        assert_eq!(t[600], 6.0);
        assert!((t[100] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_hamiltonian_keeps_state() {
        let s0 = State::new(
            Basis::Bright2,
            vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)],
            0.0,
        )
        .unwrap();
        let tr = propagate_expm(
            &CMatrix::zeros(2),
            &s0,
            &TimeGrid::new(0.0, 3.0, 7).unwrap(),
        )
        .unwrap();
        for s in &tr.states {
            assert_eq!(s.amps(), s0.amps());
        }
    }

    #[test]
    fn pure_decay_expm() {
        let h = CMatrix::from_diag(&[C64::new(0.0, -1.0), ZERO]);
        let s0 = State::basis_vector(Basis::Bright2, 0);
        let tr = propagate_expm(&h, &s0, &TimeGrid::new(0.0, 5.0, 11).unwrap()).unwrap();
        for s in &tr.states {
            assert!((s.amps()[0].norm() - (-s.time).exp()).abs() < 1e-14);
            assert_eq!(s.amps()[1], ZERO);
        }
    }

    #[test]
    fn expm_matches_closed_form_bright() {
        let p = fig2_trap();
        let grid = TimeGrid::new(0.0, 6.0, 301).unwrap();
        let tr = propagate_expm(
            &bright_hamiltonian(&p).unwrap(),
            &State::basis_vector(Basis::Bright2, 0),
            &grid,
        )
        .unwrap();
        for s in &tr.states {
            let (bg, be) = analytic_bright(&p, s.time).unwrap();
            assert!((s.amps()[0] - bg).norm() < 1e-10);
            assert!((s.amps()[1] - be).norm() < 1e-10);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let s0 = State::basis_vector(Basis::Original4, 0);
        let g = TimeGrid::new(0.0, 1.0, 2).unwrap();
        assert!(matches!(
            propagate_expm(&CMatrix::identity(2), &s0, &g),
            Err(LicsError::Dimension { .. })
        ));
        assert!(integrate(&CMatrix::identity(2), &s0, &g, 1e-8).is_err());
    }

    #[test]
    fn two_level_g1_starts_in_ground() {
        let s = initial_state(Model::TwoLevel2, &Init::G1).unwrap();
        assert_eq!(s.amps(), &[ONE, ZERO]);
        assert_eq!(s.basis(), Basis::TwoLevel2);
    }

    #[test]
    fn incompatible_inits() {
        assert!(matches!(
            initial_state(Model::Bright2, &Init::G1),
            Err(LicsError::Usage(_))
        ));
        assert!(initial_state(Model::TwoLevel2, &Init::G2).is_err());
        let s = State::basis_vector(Basis::Bright2, 0);
        assert!(initial_state(Model::FourState, &Init::Custom(s)).is_err());
    }

    #[test]
    fn evolve_g1_four_state_matches_closed_form() {
        let p = fig2_trap();
        let grid = TimeGrid::new(0.0, 6.0, 121).unwrap();
        let tr = evolve(&p, Model::FourState, &Init::G1, &grid, Method::Expm).unwrap();
        assert_eq!(tr.basis(), Basis::BrightDark4);
        assert!(tr.original.is_some());
        for s in &tr.states {
            let (bg, be, dg) = analytic_g1(&p, s.time).unwrap();
            let a = s.amps();
            assert!((a[0] - bg).norm() < 1e-10);
            assert!((a[1] - be).norm() < 1e-10);
            assert!((a[2] - dg).norm() < 1e-10);
            assert!(a[3].norm() < 1e-12);
        }
    }

    #[test]
    fn model_and_init_tags_parse() {
        for m in [
            Model::FourState,
            Model::Bright2,
            Model::TwoLevel2,
            Model::Nondegenerate4,
        ] {
            assert_eq!(m.to_string().parse::<Model>().unwrap(), m);
        }
        for i in [Init::Bright, Init::G1, Init::G2] {
            assert_eq!(i.to_string().parse::<Init>().unwrap(), i);
        }
        assert!("four".parse::<Model>().is_err());
    }
}
