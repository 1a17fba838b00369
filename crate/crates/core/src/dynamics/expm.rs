//! Exact propagation for a constant Hamiltonian.

use crate::cmatrix::{CMatrix, C64, I};
use crate::dynamics::eigen::eigen;
use crate::error::{LicsError, Result};

/// Eigenvector condition number above which the Padé route is used instead.
pub const MAX_EIGVEC_CONDITION: f64 = 1e8;

const PADE_DEGREE: usize = 8;
const PADE_NORM_TARGET: f64 = 0.5;

/// `exp(A)` by scaling and squaring with a diagonal Padé approximant.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let norm = a.norm_1();
    let squarings = if norm > PADE_NORM_TARGET {
        (norm / PADE_NORM_TARGET).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(C64::new(0.5f64.powi(squarings), 0.0));

    // c_k = (2q-k)! q! / ((2q)! k! (q-k)!), built by ratio.
    let q = PADE_DEGREE;
    let mut coeff = 1.0;
    let mut num = CMatrix::identity(n);
    let mut den = CMatrix::identity(n);
    let mut power = CMatrix::identity(n);
    for k in 1..=q {
        coeff *= (q - k + 1) as f64 / (k * (2 * q - k + 1)) as f64;
        power = &power * &scaled;
        let term = power.scale(C64::new(coeff, 0.0));
        num = &num + &term;
        den = if k % 2 == 0 {
            &den + &term
        } else {
            &den - &term
        };
    }
    let mut r = den
        .solve(&num)
        .expect("Padé denominator is nonsingular for ‖A‖ ≤ 1/2");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// How `exp(-i H τ)` gets applied.
#[derive(Debug, Clone)]
pub(crate) enum Propagator {
    Spectral {
        values: Vec<C64>,
        vectors: CMatrix,
        /// `V⁻¹ c0`
        weights: Vec<C64>,
        c0: Vec<C64>,
    },
    Pade {
        h: CMatrix,
        c0: Vec<C64>,
    },
}

impl Propagator {
    pub(crate) fn new(h: &CMatrix, c0: &[C64]) -> Result<Self> {
        if h.dim() != c0.len() {
            return Err(LicsError::Dimension {
                expected: h.dim(),
                got: c0.len(),
            });
        }
        if h.max_abs() == 0.0 {
            return Ok(Self::Pade {
                h: h.clone(),
                c0: c0.to_vec(),
            });
        }
        let e = eigen(h)?;
        if !e.degenerate {
            if let Some(inv) = e.vectors.inverse() {
                let cond = e.vectors.norm_1() * inv.norm_1();
                if cond.is_finite() && cond <= MAX_EIGVEC_CONDITION {
                    let weights = inv.mul_vec(c0);
                    return Ok(Self::Spectral {
                        values: e.values,
                        vectors: e.vectors,
                        weights,
                        c0: c0.to_vec(),
                    });
                }
            }
        }
        Ok(Self::Pade {
            h: h.clone(),
            c0: c0.to_vec(),
        })
    }

    #[cfg(test)]
    pub(crate) fn is_spectral(&self) -> bool {
        matches!(self, Self::Spectral { .. })
    }

    /// Amplitudes after elapsed time `tau`.
    pub(crate) fn at(&self, tau: f64) -> Vec<C64> {
        match self {
            Self::Spectral { c0, .. } | Self::Pade { c0, .. } if tau == 0.0 => c0.clone(),
            Self::Spectral {
                values,
                vectors,
                weights,
                ..
            } => {
                let phased: Vec<C64> = values
                    .iter()
                    .zip(weights)
                    .map(|(l, w)| (-I * l * tau).exp() * w)
                    .collect();
                vectors.mul_vec(&phased)
            }
            Self::Pade { h, c0 } => expm(&h.scale(-I * tau)).mul_vec(c0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{ONE, ZERO};

    #[test]
    fn expm_of_zero_is_identity() {
        assert!((&expm(&CMatrix::zeros(4)) - &CMatrix::identity(4)).max_abs() < 1e-16);
    }

    #[test]
    fn expm_diagonal() {
        let d = [C64::new(1.0, 2.0), C64::new(-3.0, 0.5)];
        let e = expm(&CMatrix::from_diag(&d));
        assert!((e[(0, 0)] - d[0].exp()).norm() < 1e-14 * d[0].exp().norm());
        assert!((e[(1, 1)] - d[1].exp()).norm() < 1e-14);
        assert_eq!(e[(0, 1)], ZERO);
    }

    #[test]
    fn expm_nilpotent_jordan_block() {
        // exp([[a,1],[0,a]]) = e^a [[1,1],[0,1]]
        let a = C64::new(0.3, -0.7);
        let m = CMatrix::from_rows(&[[a, ONE], [ZERO, a]]).unwrap();
        let e = expm(&m);
        let ea = a.exp();
        assert!((e[(0, 0)] - ea).norm() < 1e-14);
        assert!((e[(0, 1)] - ea).norm() < 1e-14);
        assert!(e[(1, 0)].norm() < 1e-16);
    }

    #[test]
    fn expm_rotation_generator() {
        // exp(θ [[0,-1],[1,0]]) is a rotation by θ, large θ exercises squaring.
        let th = 25.0;
        let m = CMatrix::from_real_rows(&[[0.0, -th], [th, 0.0]]).unwrap();
        let e = expm(&m);
        assert!((e[(0, 0)].re - th.cos()).abs() < 1e-12);
        assert!((e[(1, 0)].re - th.sin()).abs() < 1e-12);
    }

    #[test]
    fn defective_hamiltonian_uses_pade() {
        let m = CMatrix::from_rows(&[[ONE, ONE], [ZERO, ONE]]).unwrap();
        let p = Propagator::new(&m, &[ZERO, ONE]).unwrap();
        assert!(!p.is_spectral());
        // exp(-i t [[1,1],[0,1]]) (0,1) = e^{-it} (-it, 1)
        let t = 0.7;
        let c = p.at(t);
        let ph = (-I * t).exp();
        assert!((c[0] - ph * (-I * t)).norm() < 1e-14);
        assert!((c[1] - ph).norm() < 1e-14);
    }
}
