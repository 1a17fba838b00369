//! CSV tables for trajectories and Fano profiles.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analysis::FanoProfile;
use crate::cmatrix::C64;
use crate::dynamics::Trajectory;
use crate::error::{LicsError, Result};

pub const TRAJECTORY_HEADER: &str =
    "t,re_bg,im_bg,re_be,im_be,re_dg,im_dg,re_de,im_de,pop_bg,pop_be,pop_dg,pop_de,ionization";
pub const PROFILE_HEADER: &str = "delta,ionization";

/// Anything the CLI writes as a table or plot.
#[derive(Debug, Clone, Copy)]
pub enum Series<'a> {
    Trajectory(&'a Trajectory),
    Profile(&'a FanoProfile),
}

impl Series<'_> {
    pub fn len(&self) -> usize {
        match self {
            Series::Trajectory(t) => t.states.len(),
            Series::Profile(p) => p.deltas.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Amplitudes padded to four slots, `(b_g, b_e, d_g, d_e)`.
fn four_slots(amps: &[C64]) -> [C64; 4] {
    let mut out = [C64::new(0.0, 0.0); 4];
    out[..amps.len()].copy_from_slice(amps);
    out
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut s = String::with_capacity(traj.states.len() * 300);
    s.push_str(TRAJECTORY_HEADER);
    s.push('\n');
    for (state, ion) in traj.states.iter().zip(&traj.ionization) {
        let a = four_slots(state.amps());
        let mut fields = vec![fmt_f64(state.time)];
        for z in &a {
            fields.push(fmt_f64(z.re));
            fields.push(fmt_f64(z.im));
        }
        for z in &a {
            fields.push(fmt_f64(z.norm_sqr()));
        }
        fields.push(fmt_f64(*ion));
        let _ = writeln!(s, "{}", fields.join(","));
    }
    s
}

pub fn profile_csv(profile: &FanoProfile) -> String {
    let mut s = String::with_capacity(profile.deltas.len() * 48);
    s.push_str(PROFILE_HEADER);
    s.push('\n');
    for (d, i) in profile.deltas.iter().zip(&profile.ionization) {
        let _ = writeln!(s, "{},{}", fmt_f64(*d), fmt_f64(*i));
    }
    s
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| LicsError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

pub fn write_csv(data: Series<'_>, path: &Path) -> Result<()> {
    if data.is_empty() {
        return Err(LicsError::Precondition(
            "nothing to write: empty data".into(),
        ));
    }
    let text = match data {
        Series::Trajectory(t) => trajectory_csv(t),
        Series::Profile(p) => profile_csv(p),
    };
    write_file(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Init, Model};

    #[test]
    fn fmt_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 12.74, f64::MAX] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn profile_table() {
        let p = FanoProfile {
            deltas: vec![-1.0, 0.0],
            ionization: vec![0.5, 0.25],
            observation_time: 6.0,
            model: Model::FourState,
            init: Init::G1,
        };
        let s = profile_csv(&p);
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0], PROFILE_HEADER);
        assert_eq!(lines[2], "0.0000000000000000e0,2.5000000000000000e-1");
        assert!(s.ends_with('\n') && !s.contains('\r'));
    }

    #[test]
    fn empty_profile_not_written() {
        let p = FanoProfile {
            deltas: vec![],
            ionization: vec![],
            observation_time: 6.0,
            model: Model::FourState,
            init: Init::G1,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        assert!(write_csv(Series::Profile(&p), &path).is_err());
        assert!(!path.exists());
    }

    #[test]
    fn unwritable_path() {
        let p = FanoProfile {
            deltas: vec![0.0],
            ionization: vec![0.0],
            observation_time: 6.0,
            model: Model::FourState,
            init: Init::G1,
        };
        let err = write_csv(Series::Profile(&p), Path::new("/nonexistent/dir/p.csv")).unwrap_err();
        assert!(matches!(err, LicsError::Io { .. }));
    }
}
