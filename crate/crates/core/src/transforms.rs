//! Rotation/shift similarity transform and the bright/dark change of basis.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use crate::cmatrix::{CMatrix, C64, ONE, ZERO};
use crate::error::{LicsError, Result};

/// Rotation angle that decouples the bright and dark subsystems.
pub const DECOUPLING_ANGLE: f64 = FRAC_PI_4;

const NORM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `(c_g1, c_g2, c_e1, c_e2)`
    Original4,
    /// `(b_g, b_e, d_g, d_e)`
    BrightDark4,
    /// `(b_g, b_e)`
    Bright2,
    /// `(c_g, c_e)` of the two-level reference model.
    TwoLevel2,
}

impl Basis {
    pub fn dim(self) -> usize {
        match self {
            Basis::Original4 | Basis::BrightDark4 => 4,
            Basis::Bright2 | Basis::TwoLevel2 => 2,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Basis::Original4 => "original4",
            Basis::BrightDark4 => "brightdark4",
            Basis::Bright2 => "bright2",
            Basis::TwoLevel2 => "twolevel2",
        };
        f.write_str(s)
    }
}

/// Basis-tagged amplitude vector at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    basis: Basis,
    amps: Vec<C64>,
    pub time: f64,
}

impl State {
    /// Checks the amplitude count against the basis and that the norm does not exceed one.
    pub fn new(basis: Basis, amps: Vec<C64>, time: f64) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(LicsError::Dimension {
                expected: basis.dim(),
                got: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(LicsError::Domain("state amplitudes must be finite".into()));
        }
        let s = Self { basis, amps, time };
        if s.norm_sqr() > 1.0 + NORM_SLACK {
            return Err(LicsError::Domain(format!(
                "state norm² {} exceeds 1",
                s.norm_sqr()
            )));
        }
        Ok(s)
    }

    /// Skips the norm check; used by propagators whose output is bounded by construction.
    pub(crate) fn from_parts(basis: Basis, amps: Vec<C64>, time: f64) -> Self {
        debug_assert_eq!(amps.len(), basis.dim());
        Self { basis, amps, time }
    }

    pub fn from_real(basis: Basis, amps: &[f64]) -> Result<Self> {
        Self::new(basis, amps.iter().map(|&x| C64::new(x, 0.0)).collect(), 0.0)
    }

    /// Unit vector on component `index`.
    pub fn basis_vector(basis: Basis, index: usize) -> Self {
        let mut amps = vec![ZERO; basis.dim()];
        amps[index] = ONE;
        Self::from_parts(basis, amps, 0.0)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn expect_basis(&self, want: Basis) -> Result<()> {
        if self.basis != want {
            return Err(LicsError::Usage(format!(
                "expected a {want} state, got {}",
                self.basis
            )));
        }
        Ok(())
    }
}

/// Block-diagonal `diag(R(θ), R(θ))` with `R = [[cos, sin], [-sin, cos]]`.
pub fn rotation(theta: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    CMatrix::from_real_rows(&[
        [c, s, 0.0, 0.0],
        [-s, c, 0.0, 0.0],
        [0.0, 0.0, c, s],
        [0.0, 0.0, -s, c],
    ])
    .expect("4x4 literal")
}

/// Permutation swapping the second and third components.
pub fn shift_permutation() -> CMatrix {
    CMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .expect("4x4 literal")
}

#[derive(Debug, Clone)]
pub struct BlockSplit {
    pub bright: CMatrix,
    pub dark: CMatrix,
    /// Max-abs over the two off-diagonal 2×2 blocks of the transformed matrix.
    pub residual: f64,
    pub transformed: CMatrix,
}

/// `P U(θ) H U(θ)† P`, split into 2×2 blocks.
pub fn transform_at(h: &CMatrix, theta: f64) -> Result<BlockSplit> {
    if h.dim() != 4 {
        return Err(LicsError::Dimension {
            expected: 4,
            got: h.dim(),
        });
    }
    let u = rotation(theta);
    let p = shift_permutation();
    let pu = &p * &u;
    let up = &u.adjoint() * &p;
    let t = &(&pu * h) * &up;
    let residual = t.block(0, 2, 2).max_abs().max(t.block(2, 0, 2).max_abs());
    Ok(BlockSplit {
        bright: t.block(0, 0, 2),
        dark: t.block(2, 2, 2),
        residual,
        transformed: t,
    })
}

/// Transforms at the decoupling angle. The residual is reported, not enforced.
pub fn block_diagonalize(h: &CMatrix) -> Result<BlockSplit> {
    transform_at(h, DECOUPLING_ANGLE)
}

/// `(c_g1, c_g2, c_e1, c_e2)` to `(b_g, b_e, d_g, d_e)`.
pub fn to_bright_dark(s: &State) -> Result<State> {
    s.expect_basis(Basis::Original4)?;
    Ok(State::from_parts(
        Basis::BrightDark4,
        original_to_bright_dark(s.amps()),
        s.time,
    ))
}

/// Inverse of [`to_bright_dark`].
pub fn from_bright_dark(s: &State) -> Result<State> {
    s.expect_basis(Basis::BrightDark4)?;
    Ok(State::from_parts(
        Basis::Original4,
        bright_dark_to_original(s.amps()),
        s.time,
    ))
}

pub(crate) fn original_to_bright_dark(c: &[C64]) -> Vec<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        (c[0] + c[1]) * r,
        (c[2] + c[3]) * r,
        (c[1] - c[0]) * r,
        (c[3] - c[2]) * r,
    ]
}

pub(crate) fn bright_dark_to_original(b: &[C64]) -> Vec<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        (b[0] - b[2]) * r,
        (b[0] + b[2]) * r,
        (b[1] - b[3]) * r,
        (b[1] + b[3]) * r,
    ]
}
