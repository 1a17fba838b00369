//! Dormand–Prince 5(4) integrator for `i dc/dt = H c` with constant `H`.
//!
//! PI step-size control, absolute and relative tolerance both equal to `tol`,
//! error measured in the max-norm over real and imaginary parts, and the
//! 4th-order continuous extension for output between steps.

use crate::cmatrix::{CMatrix, C64, I};
use crate::error::{LicsError, Result};

pub const MIN_TOL: f64 = 1e-13;
pub const MAX_TOL: f64 = 1e-3;
const MAX_STEPS: usize = 10_000_000;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense output.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

fn rhs(h: &CMatrix, c: &[C64]) -> Vec<C64> {
    h.mul_vec(c).into_iter().map(|z| -I * z).collect()
}

fn axpy(y: &[C64], h: f64, terms: &[(f64, &[C64])]) -> Vec<C64> {
    let mut out = y.to_vec();
    for &(w, k) in terms {
        if w == 0.0 {
            continue;
        }
        for (o, &ki) in out.iter_mut().zip(k) {
            *o += ki * (h * w);
        }
    }
    out
}

fn max_component(z: &C64) -> f64 {
    z.re.abs().max(z.im.abs())
}

fn initial_step(h: &CMatrix, y0: &[C64], f0: &[C64], tol: f64, span: f64) -> f64 {
    let sk: Vec<f64> = y0.iter().map(|y| tol + tol * max_component(y)).collect();
    let d0 = y0
        .iter()
        .zip(&sk)
        .map(|(y, s)| max_component(y) / s)
        .fold(0.0, f64::max);
    let d1 = f0
        .iter()
        .zip(&sk)
        .map(|(y, s)| max_component(y) / s)
        .fold(0.0, f64::max);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = rhs(h, &y1);
    let d2 = f1
        .iter()
        .zip(f0)
        .zip(&sk)
        .map(|((a, b), s)| max_component(&(a - b)) / s)
        .fold(0.0, f64::max)
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Integrates from `times[0]` through every entry of `times` (increasing),
/// returning the amplitudes at each.
pub(crate) fn integrate_to(
    h: &CMatrix,
    c0: &[C64],
    times: &[f64],
    tol: f64,
) -> Result<Vec<Vec<C64>>> {
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(LicsError::Precondition(format!(
            "tolerance {tol} outside [{MIN_TOL}, {MAX_TOL}]"
        )));
    }
    if h.dim() != c0.len() {
        return Err(LicsError::Dimension {
            expected: h.dim(),
            got: c0.len(),
        });
    }
    let t0 = times[0];
    let t_end = *times.last().unwrap();
    let span = t_end - t0;
    let mut out = Vec::with_capacity(times.len());
    out.push(c0.to_vec());
    if times.len() == 1 || span == 0.0 {
        out.resize(times.len(), c0.to_vec());
        return Ok(out);
    }

    let min_step = 1e-14 * span;
    let mut t = t0;
    let mut y = c0.to_vec();
    let mut k1 = rhs(h, &y);
    let mut step = initial_step(h, &y, &k1, tol, span);
    let mut fac_old: f64;
    let mut next = 1usize;
    let mut rejected_last = false;

    for _ in 0..MAX_STEPS {
        if next >= times.len() {
            return Ok(out);
        }
        let last = t + step >= t_end;
        if last {
            step = t_end - t;
        }
        if step < min_step {
            return Err(LicsError::Integration {
                t,
                reason: format!("step size {step:e} underflowed"),
            });
        }

        let k2 = rhs(h, &axpy(&y, step, &[(A21, &k1)]));
        let k3 = rhs(h, &axpy(&y, step, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(h, &axpy(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            h,
            &axpy(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            h,
            &axpy(
                &y,
                step,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            step,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = rhs(h, &y_new);

        let mut err = 0.0f64;
        for i in 0..y.len() {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                * step;
            let sk = tol + tol * max_component(&y[i]).max(max_component(&y_new[i]));
            err = err.max(max_component(&e) / sk);
        }
        if !err.is_finite() {
            return Err(LicsError::Integration {
                t,
                reason: "non-finite error estimate".into(),
            });
        }

        let fac11 = err.powf(0.2 - BETA * 0.75);
        if err <= 1.0 {
            let t_new = t + step;
            let t_new = if last { t_end } else { t_new };
            // Dense output for grid points inside (t, t_new].
            while next < times.len() && times[next] <= t_new {
                let tg = times[next];
                if tg == t_new {
                    out.push(y_new.clone());
                } else {
                    let theta = (tg - t) / step;
                    let theta1 = 1.0 - theta;
                    let mut yi = Vec::with_capacity(y.len());
                    for i in 0..y.len() {
                        let r2 = y_new[i] - y[i];
                        let r3 = k1[i] * step - r2;
                        let r4 = r2 - k7[i] * step - r3;
                        let r5 = (k1[i] * D1
                            + k3[i] * D3
                            + k4[i] * D4
                            + k5[i] * D5
                            + k6[i] * D6
                            + k7[i] * D7)
                            * step;
                        yi.push(y[i] + (r2 + (r3 + (r4 + r5 * theta1) * theta) * theta1) * theta);
                    }
                    out.push(yi);
                }
                next += 1;
            }
            fac_old = err.max(1e-4);
            t = t_new;
            y = y_new;
            k1 = k7;
            let mut fac = fac11 / fac_old.powf(BETA);
            fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut new_step = step / fac;
            if rejected_last {
                new_step = new_step.min(step);
            }
            rejected_last = false;
            step = new_step;
        } else {
            step /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            rejected_last = true;
        }
    }
    Err(LicsError::Integration {
        t,
        reason: format!("exceeded {MAX_STEPS} steps"),
    })
}
