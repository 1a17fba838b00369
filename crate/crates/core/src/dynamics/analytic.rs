//! Closed-form amplitudes on the trapping manifold.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::analysis::trapping_delta;
use crate::cmatrix::{C64, I};
use crate::error::{LicsError, Result};
use crate::model::Params;

/// Allowed distance between `p.delta` and the trapping detuning.
pub const TRAP_MATCH_TOL: f64 = 1e-9;

pub(crate) fn require_trapping(p: &Params) -> Result<()> {
    p.validate()?;
    let trap = trapping_delta(p);
    if (p.delta - trap).abs() > TRAP_MATCH_TOL {
        return Err(LicsError::Precondition(format!(
            "closed form requires delta = {trap} (trapping value), got {}",
            p.delta
        )));
    }
    if p.gamma_g + p.gamma_e <= 0.0 {
        return Err(LicsError::Precondition(
            "closed form requires gamma_g + gamma_e > 0".into(),
        ));
    }
    Ok(())
}

/// Bright pair `(b_g, b_e)` at time `t` for `b_g(0) = 1`.
pub fn analytic_bright(p: &Params, t: f64) -> Result<(C64, C64)> {
    require_trapping(p)?;
    Ok(bright_pair(p, t))
}

fn bright_pair(p: &Params, t: f64) -> (C64, C64) {
    let (gg, ge) = (p.gamma_g, p.gamma_e);
    let sum = gg + ge;
    let decay = (I * t * C64::new(p.q_eg, 1.0) * sum).exp();
    let phase = (-0.5 * I * t * (gg * (2.0 * p.q_eg - p.q_gg) + 2.0 * p.stark_g)).exp();
    let bg = (ge + gg * decay) * phase / sum;
    let be = (ge * gg).sqrt() * (decay - 1.0) * phase / sum;
    (bg, be)
}

/// `(b_g, b_e, d_g)` at time `t` for `c_g1(0) = 1`.
pub fn analytic_g1(p: &Params, t: f64) -> Result<(C64, C64, C64)> {
    require_trapping(p)?;
    let (bg, be) = bright_pair(p, t);
    let dg = -(-0.5 * I * t * (2.0 * p.stark_g + p.gamma_g * p.q_gg)).exp() * FRAC_1_SQRT_2;
    Ok((bg * FRAC_1_SQRT_2, be * FRAC_1_SQRT_2, dg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2_trap() -> Params {
        let p = Params::figure2();
        p.with_delta(trapping_delta(&p))
    }

    #[test]
    fn bright_initial_condition() {
        let (bg, be) = analytic_bright(&fig2_trap(), 0.0).unwrap();
        assert!((bg - 1.0).norm() < 1e-15);
        assert!(be.norm() < 1e-15);
    }

    #[test]
    fn bright_long_time_limit() {
        let (bg, be) = analytic_bright(&fig2_trap(), 6.0).unwrap();
        assert!((bg.norm() - 0.6984649).abs() < 1e-7);
        assert!((be.norm() - 0.4589245).abs() < 1e-7);
    }

    #[test]
    fn g1_initial_condition_and_dark_modulus() {
        let p = fig2_trap();
        let (bg, be, dg) = analytic_g1(&p, 0.0).unwrap();
        assert!((bg - FRAC_1_SQRT_2).norm() < 1e-15);
        assert!(be.norm() < 1e-15);
        assert!((dg + FRAC_1_SQRT_2).norm() < 1e-15);
        for k in 0..50 {
            let (_, _, dg) = analytic_g1(&p, 0.37 * k as f64).unwrap();
            assert!((dg.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn g1_ionization_at_six() {
        let (bg, be, dg) = analytic_g1(&fig2_trap(), 6.0).unwrap();
        let ion = 1.0 - bg.norm_sqr() - be.norm_sqr() - dg.norm_sqr();
        assert!((ion - 0.1507675).abs() < 1e-6);
    }

    #[test]
    fn off_manifold_rejected() {
        let p = Params::figure2().with_delta(0.0);
        assert!(matches!(
            analytic_bright(&p, 1.0),
            Err(LicsError::Precondition(_))
        ));
        assert!(matches!(
            analytic_g1(&p, 1.0),
            Err(LicsError::Precondition(_))
        ));
    }

    #[test]
    fn no_ionization_rejected() {
        let p = Params {
            stark_g: 0.2,
            stark_e: 0.2,
            ..Params::default()
        };
        assert!(analytic_bright(&p, 1.0).is_err());
    }
}
