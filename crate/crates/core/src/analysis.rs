//! Trapping condition, ionization, Fano detuning profiles and the
//! degeneracy-validity study.

use rayon::prelude::*;

use crate::dynamics::analytic::require_trapping;
use crate::dynamics::{eigenvalues, evolve, state_at, Init, Method, Model, TimeGrid};
use crate::error::{LicsError, Result};
use crate::model::{bright_hamiltonian, Params};
use crate::transforms::State;

/// Slack below zero that is still reported as zero ionization.
pub const IONIZATION_SLACK: f64 = 1e-9;

pub const DEFAULT_SCAN_MIN: f64 = -10.0;
pub const DEFAULT_SCAN_MAX: f64 = 10.0;
pub const DEFAULT_SCAN_POINTS: usize = 2001;

/// Detuning at which the bright Hamiltonian has a real eigenvalue.
///
/// `½(Γe q_ee − Γg q_gg) + q_eg (Γg − Γe) + δS_g − δS_e`; `p.delta` is ignored.
pub fn trapping_delta(p: &Params) -> f64 {
    0.5 * (p.gamma_e * p.q_ee - p.gamma_g * p.q_gg) + p.q_eg * (p.gamma_g - p.gamma_e) + p.stark_g
        - p.stark_e
}

/// `min |Im λ|` over the bright Hamiltonian's eigenvalues at detuning `delta`.
pub fn trapping_residual(p: &Params, delta: f64) -> Result<f64> {
    let hb = bright_hamiltonian(&p.with_delta(delta))?;
    Ok(eigenvalues(&hb)?
        .iter()
        .map(|l| l.im.abs())
        .fold(f64::INFINITY, f64::min))
}

/// `1 − ‖c‖²`, with tiny negative round-off reported as zero.
pub fn ionization(s: &State) -> f64 {
    let ion = 1.0 - s.norm_sqr();
    if (-IONIZATION_SLACK..0.0).contains(&ion) {
        0.0
    } else {
        ion
    }
}

/// Long-time surviving population on the trapping manifold.
pub fn asymptotic_survival(p: &Params, init: &Init) -> Result<f64> {
    require_trapping(p)?;
    let bright = p.gamma_e / (p.gamma_e + p.gamma_g);
    match init {
        Init::Bright => Ok(bright),
        // g1 and g2 put half the population in the dark ground state.
        Init::G1 | Init::G2 => Ok(0.5 + 0.5 * bright),
        Init::Custom(_) => Err(LicsError::Usage(
            "asymptotic survival is defined for bright, g1 and g2 initial states".into(),
        )),
    }
}

#[derive(Debug, Clone)]
pub struct FanoProfile {
    pub deltas: Vec<f64>,
    pub ionization: Vec<f64>,
    pub observation_time: f64,
    pub model: Model,
    pub init: Init,
}

impl FanoProfile {
    /// Index of the smallest ionization (first on ties).
    pub fn argmin(&self) -> usize {
        self.ionization
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap()
    }

    pub fn min_delta(&self) -> f64 {
        self.deltas[self.argmin()]
    }

    pub fn min_ionization(&self) -> f64 {
        self.ionization[self.argmin()]
    }

    pub fn max_ionization(&self) -> f64 {
        self.ionization
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Width of the contiguous detuning window around the minimum where the
    /// ionization stays below halfway between the minimum and the maximum.
    pub fn dip_width(&self) -> f64 {
        let k = self.argmin();
        let level = 0.5 * (self.min_ionization() + self.max_ionization());
        let mut lo = k;
        while lo > 0 && self.ionization[lo - 1] <= level {
            lo -= 1;
        }
        let mut hi = k;
        while hi + 1 < self.deltas.len() && self.ionization[hi + 1] <= level {
            hi += 1;
        }
        self.deltas[hi] - self.deltas[lo]
    }

    /// Linear interpolation of the profile at `delta`, clamped to the grid ends.
    pub fn value_at(&self, delta: f64) -> f64 {
        let d = &self.deltas;
        if delta <= d[0] {
            return self.ionization[0];
        }
        let n = d.len();
        if delta >= d[n - 1] {
            return self.ionization[n - 1];
        }
        let j = d.partition_point(|&x| x <= delta);
        let (x0, x1) = (d[j - 1], d[j]);
        let w = (delta - x0) / (x1 - x0);
        self.ionization[j - 1] * (1.0 - w) + self.ionization[j] * w
    }
}

/// Evenly spaced detunings, `points ≥ 1`.
pub fn delta_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 || !min.is_finite() || !max.is_finite() {
        return Err(LicsError::Domain(
            "detuning grid needs finite bounds and ≥ 1 point".into(),
        ));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    if max <= min {
        return Err(LicsError::Domain(format!(
            "delta_max ({max}) must exceed delta_min ({min})"
        )));
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            if k == points - 1 {
                max
            } else {
                min + k as f64 * step
            }
        })
        .collect())
}

/// `[-10, 10]` with 2001 points, widened with the same spacing until it
/// brackets the trapping detuning with one unit of margin.
pub fn default_delta_grid(p: &Params) -> Vec<f64> {
    let trap = trapping_delta(p);
    let step = (DEFAULT_SCAN_MAX - DEFAULT_SCAN_MIN) / (DEFAULT_SCAN_POINTS - 1) as f64;
    let lo = DEFAULT_SCAN_MIN.min((trap - 1.0).floor());
    let hi = DEFAULT_SCAN_MAX.max((trap + 1.0).ceil());
    let points = ((hi - lo) / step).round() as usize + 1;
    delta_grid(lo, hi, points).expect("finite default window")
}

/// Ionization at `t_obs` for every detuning; points are evaluated in parallel
/// and returned in grid order.
pub fn fano_scan(
    p: &Params,
    deltas: &[f64],
    t_obs: f64,
    init: &Init,
    model: Model,
) -> Result<FanoProfile> {
    fano_scan_with(p, deltas, t_obs, init, model, Method::Expm)
}

pub fn fano_scan_with(
    p: &Params,
    deltas: &[f64],
    t_obs: f64,
    init: &Init,
    model: Model,
    method: Method,
) -> Result<FanoProfile> {
    p.validate()?;
    if deltas.is_empty() {
        return Err(LicsError::Domain("detuning grid is empty".into()));
    }
    if deltas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LicsError::Domain(
            "detuning grid must be strictly increasing".into(),
        ));
    }
    if !(t_obs.is_finite() && t_obs > 0.0) {
        return Err(LicsError::Domain(format!(
            "t_obs must be positive, got {t_obs}"
        )));
    }
    let ionization = deltas
        .par_iter()
        .map(|&d| {
            state_at(&p.with_delta(d), model, init, t_obs, method)
                .map(|s| ionization(&s))
                .map_err(|e| LicsError::Scan {
                    delta: d,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(FanoProfile {
        deltas: deltas.to_vec(),
        ionization,
        observation_time: t_obs,
        model,
        init: init.clone(),
    })
}

/// Degenerate vs non-degenerate comparison at one pair of splittings.
#[derive(Debug, Clone)]
pub struct DegeneracyEntry {
    pub shift_g: f64,
    pub shift_e: f64,
    /// Sup over time of the largest amplitude difference in `(g1, g2, e1, e2)`.
    pub sup_amplitude_diff: f64,
    pub sup_ionization_diff: f64,
    /// `(t, degenerate, non-degenerate)` ionization.
    pub ionization: Vec<(f64, f64, f64)>,
    pub degenerate_profile_min: f64,
    pub nondegenerate_profile_min: f64,
    pub degenerate_profile_width: f64,
    pub nondegenerate_profile_width: f64,
}

impl DegeneracyEntry {
    pub fn min_shift(&self) -> f64 {
        (self.nondegenerate_profile_min - self.degenerate_profile_min).abs()
    }
}

#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    pub entries: Vec<DegeneracyEntry>,
    /// Observation time of the Fano profiles (end of the time grid).
    pub observation_time: f64,
}

/// Runs both models from `g1` with `p`'s own splittings and compares them.
pub fn compare_nondegenerate(
    p: &Params,
    grid: &TimeGrid,
    deltas: &[f64],
    method: Method,
) -> Result<DegeneracyEntry> {
    let degenerate = p.with_shifts(0.0, 0.0);
    let deg = evolve(&degenerate, Model::FourState, &Init::G1, grid, method)?;
    let nd = evolve(p, Model::Nondegenerate4, &Init::G1, grid, method)?;
    let deg_orig = deg.original.as_ref().expect("four-state trajectory");
    let nd_orig = nd.original.as_ref().expect("four-state trajectory");
    let sup_amplitude_diff = deg_orig
        .iter()
        .zip(nd_orig)
        .flat_map(|(a, b)| a.amps().iter().zip(b.amps()).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max);
    let ionization: Vec<(f64, f64, f64)> = grid
        .times()
        .into_iter()
        .zip(deg.ionization.iter().zip(&nd.ionization))
        .map(|(t, (&a, &b))| (t, a, b))
        .collect();
    let sup_ionization_diff = ionization
        .iter()
        .map(|(_, a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let t_obs = grid.t_end - grid.t_start;
    let deg_profile = fano_scan_with(
        &degenerate,
        deltas,
        t_obs,
        &Init::G1,
        Model::FourState,
        method,
    )?;
    let nd_profile = fano_scan_with(p, deltas, t_obs, &Init::G1, Model::Nondegenerate4, method)?;

    Ok(DegeneracyEntry {
        shift_g: p.shift_g,
        shift_e: p.shift_e,
        sup_amplitude_diff,
        sup_ionization_diff,
        ionization,
        degenerate_profile_min: deg_profile.min_delta(),
        nondegenerate_profile_min: nd_profile.min_delta(),
        degenerate_profile_width: deg_profile.dip_width(),
        nondegenerate_profile_width: nd_profile.dip_width(),
    })
}

/// For each splitting `δ` (applied to both levels) compares the
/// non-degenerate model against the degenerate one.
pub fn degeneracy_validity(
    p: &Params,
    shifts: &[f64],
    grid: &TimeGrid,
    deltas: &[f64],
    method: Method,
) -> Result<DegeneracyReport> {
    p.validate()?;
    if let Some(bad) = shifts.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
        return Err(LicsError::Domain(format!("shift must be ≥ 0, got {bad}")));
    }
    let entries = shifts
        .iter()
        .map(|&s| compare_nondegenerate(&p.with_shifts(s, s), grid, deltas, method))
        .collect::<Result<Vec<_>>>()?;
    Ok(DegeneracyReport {
        entries,
        observation_time: grid.t_end - grid.t_start,
    })
}
