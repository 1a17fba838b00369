//! Physical parameters and the effective non-Hermitian Hamiltonians.
//!
//! Units: T = 1. Rates, Stark shifts, detunings and splittings are in 1/T.
//!
//! Basis ordering is `(g1, g2, e1, e2)` for the four-state models and
//! `(g-like, e-like)` for the two-state ones.

use crate::cmatrix::{CMatrix, C64, I};
use crate::error::{LicsError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Params {
    /// Ground-level ionization rate.
    pub gamma_g: f64,
    /// Excited-level ionization rate.
    pub gamma_e: f64,
    pub stark_g: f64,
    pub stark_e: f64,
    pub q_gg: f64,
    pub q_ee: f64,
    pub q_eg: f64,
    /// Reduced two-photon detuning.
    pub delta: f64,
    /// Splitting inside the ground level (zero for the degenerate model).
    pub shift_g: f64,
    /// Splitting inside the excited level (zero for the degenerate model).
    pub shift_e: f64,
}

impl Params {
    /// Parameter set used for the bright/g1 time traces and Fano profiles
    /// (delta left at zero).
    pub fn figure2() -> Self {
        Self {
            gamma_g: 5.5,
            gamma_e: 12.74,
            stark_g: 0.5,
            stark_e: 0.6,
            q_gg: 2.3,
            q_ee: 5.0,
            q_eg: 3.4,
            ..Self::default()
        }
    }

    /// Parameter set used for the non-degeneracy study (delta left at zero).
    pub fn figure5() -> Self {
        Self {
            gamma_g: 1.08,
            gamma_e: 2.09,
            stark_g: 0.33,
            stark_e: 0.26,
            q_gg: 2.3,
            q_ee: 2.5,
            q_eg: 2.4,
            shift_g: 0.2,
            shift_e: 0.2,
            ..Self::default()
        }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    pub fn with_shifts(self, shift_g: f64, shift_e: f64) -> Self {
        Self {
            shift_g,
            shift_e,
            ..self
        }
    }

    /// Cross coupling through the continuum, always `sqrt(gamma_g * gamma_e)`.
    pub fn gamma_eg(&self) -> f64 {
        (self.gamma_g * self.gamma_e).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma_g", self.gamma_g),
            ("gamma_e", self.gamma_e),
            ("stark_g", self.stark_g),
            ("stark_e", self.stark_e),
            ("q_gg", self.q_gg),
            ("q_ee", self.q_ee),
            ("q_eg", self.q_eg),
            ("delta", self.delta),
            ("shift_g", self.shift_g),
            ("shift_e", self.shift_e),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(LicsError::Domain(format!("{name} must be finite, got {v}")));
            }
        }
        if self.gamma_g < 0.0 {
            return Err(LicsError::Domain(format!(
                "gamma_g must be non-negative, got {}",
                self.gamma_g
            )));
        }
        if self.gamma_e < 0.0 {
            return Err(LicsError::Domain(format!(
                "gamma_e must be non-negative, got {}",
                self.gamma_e
            )));
        }
        Ok(())
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `-½(q + i)·gamma`, the continuum-mediated coupling shape shared by every builder.
fn fano_coupling(q: f64, gamma: f64) -> C64 {
    -0.5 * c(q, 1.0) * gamma
}

/// Four-state effective Hamiltonian `H = -½(H0 + i·H1)`; the shift fields are ignored.
pub fn effective_hamiltonian(p: &Params) -> Result<CMatrix> {
    p.validate()?;
    let h0 = h0_matrix(p);
    let h1 = h1_matrix(p);
    let sum = &h0 + &h1.scale(I);
    Ok(sum.scale(c(-0.5, 0.0)))
}

/// Real (dispersive) part `H0` exactly as laid out in the model.
pub fn h0_matrix(p: &Params) -> CMatrix {
    let dg = -2.0 * p.stark_g;
    let de = -2.0 * (p.delta + p.stark_e);
    let gg = p.q_gg * p.gamma_g;
    let ee = p.q_ee * p.gamma_e;
    let eg = p.q_eg * p.gamma_eg();
    CMatrix::from_real_rows(&[
        [dg, gg, eg, eg],
        [gg, dg, eg, eg],
        [eg, eg, de, ee],
        [eg, eg, ee, de],
    ])
    .expect("4x4 literal")
}

/// Absorptive part `H1`, the rank-one matrix `v vᵀ` with `v = (√Γg, √Γg, √Γe, √Γe)`.
pub fn h1_matrix(p: &Params) -> CMatrix {
    let g = p.gamma_g;
    let e = p.gamma_e;
    let eg = p.gamma_eg();
    CMatrix::from_real_rows(&[
        [g, g, eg, eg],
        [g, g, eg, eg],
        [eg, eg, e, e],
        [eg, eg, e, e],
    ])
    .expect("4x4 literal")
}

/// Bright-subsystem Hamiltonian acting on `(b_g, b_e)`.
pub fn bright_hamiltonian(p: &Params) -> Result<CMatrix> {
    p.validate()?;
    let gg = p.stark_g - 0.5 * c(p.q_gg, 2.0) * p.gamma_g;
    let ge = -c(p.q_eg, 1.0) * (p.gamma_e * p.gamma_g).sqrt();
    let ee = p.delta + p.stark_e - 0.5 * c(p.q_ee, 2.0) * p.gamma_e;
    CMatrix::from_rows(&[[gg, ge], [ge, ee]])
}

/// Dark-subsystem Hamiltonian acting on `(d_g, d_e)`; real and diagonal.
pub fn dark_hamiltonian(p: &Params) -> Result<CMatrix> {
    p.validate()?;
    Ok(CMatrix::from_diag(&[
        c(p.q_gg * p.gamma_g / 2.0 + p.stark_g, 0.0),
        c(p.delta + p.q_ee * p.gamma_e / 2.0 + p.stark_e, 0.0),
    ]))
}

/// Standard two-level continuum-structure Hamiltonian. Its off-diagonal
/// coupling is half the bright one.
pub fn two_level_hamiltonian(p: &Params) -> Result<CMatrix> {
    p.validate()?;
    let gg = c(p.stark_g, -p.gamma_g / 2.0);
    let ge = fano_coupling(p.q_eg, (p.gamma_e * p.gamma_g).sqrt());
    let ee = c(p.delta + p.stark_e, -p.gamma_e / 2.0);
    CMatrix::from_rows(&[[gg, ge], [ge, ee]])
}

/// Four-state Hamiltonian with intra-level splittings `shift_g` on g2 and
/// `shift_e` on e2.
pub fn nondegenerate_hamiltonian(p: &Params) -> Result<CMatrix> {
    p.validate()?;
    let dg = c(p.stark_g, -p.gamma_g / 2.0);
    let gg = fano_coupling(p.q_gg, p.gamma_g);
    let de = c(p.delta + p.stark_e, -p.gamma_e / 2.0);
    let ee = fano_coupling(p.q_ee, p.gamma_e);
    let eg = fano_coupling(p.q_eg, p.gamma_eg());
    CMatrix::from_rows(&[
        [dg, gg, eg, eg],
        [gg, dg + p.shift_g, eg, eg],
        [eg, eg, de, ee],
        [eg, eg, ee, de + p.shift_e],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn effective_entries_figure2() {
        let h = effective_hamiltonian(&Params::figure2()).unwrap();
        assert!(close(h[(0, 0)], c(0.5, -2.75), 1e-15));
        assert!(close(h[(0, 1)], c(-6.325, -2.75), 1e-14));
        let eg = (5.5f64 * 12.74).sqrt();
        assert!(close(h[(0, 2)], -0.5 * c(3.4, 1.0) * eg, 1e-14));
        assert!(close(h[(2, 2)], c(0.6, -6.37), 1e-15));
    }

    #[test]
    fn decoupled_limit_is_hermitian_diagonal() {
        let p = Params {
            stark_g: 0.7,
            stark_e: -0.3,
            delta: 1.1,
            ..Params::default()
        };
        let h = effective_hamiltonian(&p).unwrap();
        let want = CMatrix::from_real_rows(&[
            [0.7, 0.0, 0.0, 0.0],
            [0.0, 0.7, 0.0, 0.0],
            [0.0, 0.0, 0.8, 0.0],
            [0.0, 0.0, 0.0, 0.8],
        ])
        .unwrap();
        assert!((&h - &want).max_abs() < 1e-15);
        assert!((&h - &h.adjoint()).max_abs() == 0.0);
    }

    #[test]
    fn cross_block_entries_equal() {
        let p = Params {
            gamma_g: 1.0,
            gamma_e: 4.0,
            q_eg: 0.7,
            ..Params::default()
        };
        let h = effective_hamiltonian(&p).unwrap();
        let want = -0.5 * c(0.7, 1.0) * 2.0;
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(h[(i, j)], want);
        }
    }

    #[test]
    fn negative_gamma_is_domain_error() {
        let p = Params {
            gamma_e: -0.1,
            ..Params::figure2()
        };
        for r in [
            effective_hamiltonian(&p),
            bright_hamiltonian(&p),
            dark_hamiltonian(&p),
            two_level_hamiltonian(&p),
            nondegenerate_hamiltonian(&p),
        ] {
            assert!(matches!(r, Err(LicsError::Domain(_))));
        }
    }

    #[test]
    fn bright_entries_figure2() {
        let hb = bright_hamiltonian(&Params::figure2()).unwrap();
        assert!(close(hb[(0, 0)], c(-5.825, -5.5), 1e-14));
        let s = (5.5f64 * 12.74).sqrt();
        assert!((s - 8.3708).abs() < 1e-4);
        assert!(close(hb[(0, 1)], c(-3.4 * s, -s), 1e-13));
        assert!(close(hb[(0, 1)], c(-28.4607, -8.3708), 1e-4));
        assert_eq!(hb[(0, 1)], hb[(1, 0)]);
    }

    #[test]
    fn bright_and_dark_decoupled_limit() {
        let p = Params {
            stark_g: 0.4,
            stark_e: 0.1,
            delta: 2.0,
            q_gg: 3.0,
            q_ee: 1.0,
            q_eg: 2.0,
            ..Params::default()
        };
        let want = CMatrix::from_real_rows(&[[0.4, 0.0], [0.0, 2.1]]).unwrap();
        assert!((&bright_hamiltonian(&p).unwrap() - &want).max_abs() < 1e-15);
        assert!((&two_level_hamiltonian(&p).unwrap() - &want).max_abs() < 1e-15);
        let p0 = Params {
            q_gg: 0.0,
            q_ee: 0.0,
            q_eg: 0.0,
            ..Params::figure2()
        };
        let hd = dark_hamiltonian(&p0).unwrap();
        assert_eq!(
            hd,
            CMatrix::from_real_rows(&[[0.5, 0.0], [0.0, 0.6]]).unwrap()
        );
    }

    #[test]
    fn dark_entries_figure2() {
        let hd = dark_hamiltonian(&Params::figure2().with_delta(0.809)).unwrap();
        assert!(close(hd[(0, 0)], c(6.825, 0.0), 1e-14));
        assert!(close(hd[(1, 1)], c(33.259, 0.0), 1e-12));
        assert!(hd.entries().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn two_level_is_half_bright_coupling() {
        let p = Params::figure2();
        let h2 = two_level_hamiltonian(&p).unwrap();
        let hb = bright_hamiltonian(&p).unwrap();
        assert_eq!(h2[(0, 1)], hb[(0, 1)] * 0.5);
        assert!(close(h2[(0, 1)], c(-14.2303, -4.1854), 1e-4));

        let sym = Params {
            gamma_g: 3.0,
            gamma_e: 3.0,
            ..Params::default()
        };
        let h = two_level_hamiltonian(&sym).unwrap();
        assert!(close(h[(0, 1)], c(0.0, -1.5), 1e-15));
    }

    #[test]
    fn nondegenerate_entries_figure5() {
        let h = nondegenerate_hamiltonian(&Params::figure5()).unwrap();
        assert!(close(h[(1, 1)], c(0.53, -0.54), 1e-15));
        assert!(close(h[(0, 1)], c(-1.242, -0.54), 1e-15));
    }

    #[test]
    fn nondegenerate_without_shifts_matches_effective() {
        let p = Params::figure5().with_shifts(0.0, 0.0).with_delta(-0.9835);
        let a = nondegenerate_hamiltonian(&p).unwrap();
        let b = effective_hamiltonian(&p).unwrap();
        assert!((&a - &b).max_abs() < 1e-15);
    }

    #[test]
    fn absorptive_part_is_rank_one() {
        let p = Params::figure2();
        let v = [
            p.gamma_g.sqrt(),
            p.gamma_g.sqrt(),
            p.gamma_e.sqrt(),
            p.gamma_e.sqrt(),
        ];
        let h1 = h1_matrix(&p);
        for i in 0..4 {
            for j in 0..4 {
                let want = v[i] * v[j];
                assert!((h1[(i, j)].re - want).abs() <= 1e-13 * want.abs().max(1.0));
            }
        }
    }
}
