//! Flat `key = value` run configuration.
//!
//! ```text
//! # strong-coupling parameter set
//! gamma_g = 5.5
//! gamma_e = 12.74
//! stark_g = 0.5
//! stark_e = 0.6
//! q_gg = 2.3
//! q_ee = 5
//! q_eg = 3.4
//! delta = trap
//! command = evolve
//! init = bright
//! t_end = 6
//! n_samples = 601
//! out = fig2.csv
//! ```

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use crate::analysis::trapping_delta;
use crate::dynamics::{Init, Model};
use crate::error::{LicsError, Result};
use crate::model::Params;

pub const KEYS: [&str; 23] = [
    "gamma_g",
    "gamma_e",
    "stark_g",
    "stark_e",
    "q_gg",
    "q_ee",
    "q_eg",
    "delta",
    "shift_g",
    "shift_e",
    "command",
    "model",
    "init",
    "t_start",
    "t_end",
    "n_samples",
    "delta_min",
    "delta_max",
    "delta_steps",
    "t_obs",
    "tol",
    "out",
    "plot",
];

pub const DEFAULT_TOL: f64 = 1e-10;

/// Line number used for values supplied on the command line.
pub const OVERRIDE_LINE: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evolve,
    Fano,
    Trap,
    Eigen,
    Nondeg,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Evolve => "evolve",
            Command::Fano => "fano",
            Command::Trap => "trap",
            Command::Eigen => "eigen",
            Command::Nondeg => "nondeg",
        })
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "evolve" => Ok(Command::Evolve),
            "fano" => Ok(Command::Fano),
            "trap" => Ok(Command::Trap),
            "eigen" => Ok(Command::Eigen),
            "nondeg" => Ok(Command::Nondeg),
            other => Err(format!(
                "unknown command `{other}` (evolve, fano, trap, eigen, nondeg)"
            )),
        }
    }
}

/// Detuning scan window; `steps` is the number of grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanWindow {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: Params,
    /// `delta = trap` was given; `params.delta` holds the resolved value.
    pub delta_is_trap: bool,
    pub command: Command,
    pub model: Model,
    pub init: Init,
    pub t_start: f64,
    pub t_end: Option<f64>,
    pub n_samples: Option<usize>,
    pub scan: Option<ScanWindow>,
    pub t_obs: Option<f64>,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub plot: bool,
}

/// Command-line values that replace config keys.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub plot: bool,
    pub tol: Option<f64>,
}

struct Entries {
    map: HashMap<&'static str, (usize, String)>,
    eof_line: usize,
}

impl Entries {
    fn missing(&self, key: &str, command: Option<Command>) -> LicsError {
        let why = match command {
            Some(c) => format!("missing required key `{key}` for command `{c}`"),
            None => format!("missing required key `{key}`"),
        };
        LicsError::Config {
            line: self.eof_line,
            msg: why,
        }
    }

    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.map.get(key)
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(None);
        };
        let x: f64 = v.parse().map_err(|_| LicsError::Config {
            line: *line,
            msg: format!("`{key}` expects a number, got `{v}`"),
        })?;
        if !x.is_finite() {
            return Err(LicsError::Config {
                line: *line,
                msg: format!("`{key}` must be finite, got `{v}`"),
            });
        }
        Ok(Some(x))
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(None);
        };
        v.parse().map(Some).map_err(|_| LicsError::Config {
            line: *line,
            msg: format!("`{key}` expects a non-negative integer, got `{v}`"),
        })
    }

    fn tag<T: FromStr<Err = String>>(&self, key: &str) -> Result<Option<T>> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(None);
        };
        v.parse()
            .map(Some)
            .map_err(|msg| LicsError::Config { line: *line, msg })
    }

    fn required_number(&self, key: &str, command: Option<Command>) -> Result<f64> {
        self.number(key)?.ok_or_else(|| self.missing(key, command))
    }

    fn line_of(&self, key: &str) -> usize {
        self.raw(key).map(|(l, _)| *l).unwrap_or(self.eof_line)
    }
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut map = HashMap::new();
    let mut eof_line = 1;
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        eof_line = line + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(LicsError::Config {
                line,
                msg: format!("expected `key = value`, got `{content}`"),
            });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(LicsError::Config {
                line,
                msg: format!("expected `key = value`, got `{content}`"),
            });
        }
        let Some(&key) = KEYS.iter().find(|&&known| known == k) else {
            return Err(LicsError::Config {
                line,
                msg: format!("unknown key `{k}`"),
            });
        };
        if let Some((first, _)) = map.insert(key, (line, v.to_string())) {
            return Err(LicsError::Config {
                line,
                msg: format!("duplicate key `{k}` (first set on line {first})"),
            });
        }
    }
    Ok(Entries { map, eof_line })
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, &Overrides::default())
}

pub fn parse_config_with(text: &str, overrides: &Overrides) -> Result<RunConfig> {
    let mut e = tokenize(text)?;
    if let Some(out) = &overrides.out {
        e.map
            .insert("out", (OVERRIDE_LINE, out.to_string_lossy().into_owned()));
    }
    if overrides.plot {
        e.map.insert("plot", (OVERRIDE_LINE, "true".into()));
    }
    if let Some(tol) = overrides.tol {
        e.map.insert("tol", (OVERRIDE_LINE, format!("{tol:e}")));
    }

    let command: Command = e
        .tag("command")?
        .ok_or_else(|| e.missing("command", None))?;
    let needs = |key: &str| -> Result<()> {
        if e.raw(key).is_none() {
            return Err(e.missing(key, Some(command)));
        }
        Ok(())
    };

    let mut params = Params {
        gamma_g: e.required_number("gamma_g", None)?,
        gamma_e: e.required_number("gamma_e", None)?,
        stark_g: e.required_number("stark_g", None)?,
        stark_e: e.required_number("stark_e", None)?,
        q_gg: e.required_number("q_gg", None)?,
        q_ee: e.required_number("q_ee", None)?,
        q_eg: e.required_number("q_eg", None)?,
        delta: 0.0,
        shift_g: e.number("shift_g")?.unwrap_or(0.0),
        shift_e: e.number("shift_e")?.unwrap_or(0.0),
    };
    for key in ["gamma_g", "gamma_e"] {
        let v = if key == "gamma_g" {
            params.gamma_g
        } else {
            params.gamma_e
        };
        if v < 0.0 {
            return Err(LicsError::Config {
                line: e.line_of(key),
                msg: format!("domain error: `{key}` must be non-negative, got {v}"),
            });
        }
    }

    let delta_is_trap = matches!(e.raw("delta"), Some((_, v)) if v == "trap");
    if delta_is_trap {
        params.delta = trapping_delta(&params);
    } else if let Some(d) = e.number("delta")? {
        params.delta = d;
    }

    match command {
        Command::Evolve => {
            for k in ["delta", "t_end", "n_samples", "out"] {
                needs(k)?;
            }
        }
        Command::Fano => {
            for k in ["t_obs", "out"] {
                needs(k)?;
            }
        }
        Command::Trap => {}
        Command::Eigen => needs("delta")?,
        Command::Nondeg => {
            for k in ["delta", "shift_g", "shift_e", "t_end", "n_samples", "out"] {
                needs(k)?;
            }
        }
    }

    let scan_keys = ["delta_min", "delta_max", "delta_steps"];
    let scan = if scan_keys.iter().any(|k| e.raw(k).is_some()) {
        for k in scan_keys {
            needs(k)?;
        }
        let window = ScanWindow {
            min: e.required_number("delta_min", Some(command))?,
            max: e.required_number("delta_max", Some(command))?,
            steps: e.count("delta_steps")?.unwrap(),
        };
        if window.steps == 0 || (window.steps > 1 && window.max <= window.min) {
            return Err(LicsError::Config {
                line: e.line_of("delta_steps"),
                msg: "scan needs delta_steps ≥ 1 and delta_max > delta_min".into(),
            });
        }
        Some(window)
    } else {
        None
    };

    let tol = e.number("tol")?.unwrap_or(DEFAULT_TOL);
    if !(crate::dynamics::rk45::MIN_TOL..=crate::dynamics::rk45::MAX_TOL).contains(&tol) {
        return Err(LicsError::Config {
            line: e.line_of("tol"),
            msg: format!("`tol` must lie in [1e-13, 1e-3], got {tol}"),
        });
    }

    let plot = match e.raw("plot") {
        None => false,
        Some((_, v)) if v == "true" || v == "1" || v == "yes" => true,
        Some((_, v)) if v == "false" || v == "0" || v == "no" => false,
        Some((line, v)) => {
            return Err(LicsError::Config {
                line: *line,
                msg: format!("`plot` expects true or false, got `{v}`"),
            })
        }
    };

    let n_samples = e.count("n_samples")?;
    if let Some(n) = n_samples {
        if n < 2 {
            return Err(LicsError::Config {
                line: e.line_of("n_samples"),
                msg: format!("`n_samples` must be at least 2, got {n}"),
            });
        }
    }

    Ok(RunConfig {
        params,
        delta_is_trap,
        command,
        model: e.tag("model")?.unwrap_or(Model::FourState),
        init: e.tag("init")?.unwrap_or(Init::Bright),
        t_start: e.number("t_start")?.unwrap_or(0.0),
        t_end: e.number("t_end")?,
        n_samples,
        scan,
        t_obs: e.number("t_obs")?,
        tol,
        out: e.raw("out").map(|(_, v)| PathBuf::from(v)),
        plot,
    })
}

/// Canonical text form; `parse_config(&render_config(c)) == c`.
pub fn render_config(c: &RunConfig) -> String {
    let p = &c.params;
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("command", c.command.to_string());
    kv("gamma_g", p.gamma_g.to_string());
    kv("gamma_e", p.gamma_e.to_string());
    kv("stark_g", p.stark_g.to_string());
    kv("stark_e", p.stark_e.to_string());
    kv("q_gg", p.q_gg.to_string());
    kv("q_ee", p.q_ee.to_string());
    kv("q_eg", p.q_eg.to_string());
    kv(
        "delta",
        if c.delta_is_trap {
            "trap".into()
        } else {
            p.delta.to_string()
        },
    );
    kv("shift_g", p.shift_g.to_string());
    kv("shift_e", p.shift_e.to_string());
    kv("model", c.model.to_string());
    kv("init", c.init.to_string());
    kv("t_start", c.t_start.to_string());
    if let Some(t) = c.t_end {
        kv("t_end", t.to_string());
    }
    if let Some(n) = c.n_samples {
        kv("n_samples", n.to_string());
    }
    if let Some(w) = c.scan {
        kv("delta_min", w.min.to_string());
        kv("delta_max", w.max.to_string());
        kv("delta_steps", w.steps.to_string());
    }
    if let Some(t) = c.t_obs {
        kv("t_obs", t.to_string());
    }
    kv("tol", format!("{:e}", c.tol));
    if let Some(o) = &c.out {
        kv("out", o.to_string_lossy().into_owned());
    }
    kv("plot", c.plot.to_string());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = "\
# bright initialisation
gamma_g = 5.5
gamma_e = 12.74
stark_g = 0.5
stark_e = 0.6
q_gg = 2.3
q_eg = 3.4
q_ee = 5
";

    fn with(extra: &str) -> String {
        format!("{FIG2}{extra}")
    }

    #[test]
    fn figure2_values_echoed() {
        let c = parse_config(&with("command = trap\n")).unwrap();
        assert_eq!(c.params.gamma_g, 5.5);
        assert_eq!(c.params.gamma_e, 12.74);
        assert_eq!(c.params.stark_g, 0.5);
        assert_eq!(c.params.stark_e, 0.6);
        assert_eq!(c.params.q_gg, 2.3);
        assert_eq!(c.params.q_eg, 3.4);
        assert_eq!(c.params.q_ee, 5.0);
        assert_eq!(c.command, Command::Trap);
        assert_eq!(c.tol, DEFAULT_TOL);
    }

    #[test]
    fn delta_trap_sentinel_resolves() {
        // Sentinel placed before the rates it depends on.
        let text = format!("delta = trap\ncommand = eigen\n{FIG2}");
        let c = parse_config(&text).unwrap();
        assert!(c.delta_is_trap);
        assert!((c.params.delta - 0.809).abs() < 1e-12);
    }

    #[test]
    fn negative_gamma_names_key() {
        let text = FIG2.replace("gamma_g = 5.5", "gamma_g = -1") + "command = trap\n";
        let err = parse_config(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("gamma_g") && msg.contains("domain"), "{msg}");
        assert!(matches!(err, LicsError::Config { line: 2, .. }));
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = parse_config(&with("command = trap\nfoo = 1\n")).unwrap_err();
        assert!(matches!(err, LicsError::Config { line: 10, .. }), "{err}");
    }

    #[test]
    fn malformed_and_non_finite() {
        let err = parse_config(&with("command trap\n")).unwrap_err();
        assert!(matches!(err, LicsError::Config { line: 9, .. }));
        let err = parse_config(&with("command = trap\ndelta = inf\n")).unwrap_err();
        assert!(matches!(err, LicsError::Config { line: 10, .. }));
        let err = parse_config(&with("command = trap\ndelta = abc\n")).unwrap_err();
        assert!(err.to_string().contains("delta"));
    }

    #[test]
    fn missing_required_keys() {
        let err = parse_config(&with("command = evolve\ndelta = trap\nout = x.csv\n")).unwrap_err();
        assert!(err.to_string().contains("t_end"), "{err}");
        let err = parse_config("command = trap\n").unwrap_err();
        assert!(err.to_string().contains("gamma_g"));
        let err = parse_config(FIG2).unwrap_err();
        assert!(err.to_string().contains("command"));
    }

    #[test]
    fn duplicate_key_rejected() {
        let err = parse_config(&with("command = trap\nq_gg = 1\n")).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn comments_and_overrides() {
        let text =
            with("command = fano # scan\nt_obs = 6\nout = a.csv\ninit = g1\nmodel = twolevel2\n");
        let o = Overrides {
            out: Some("b.csv".into()),
            plot: true,
            tol: Some(1e-8),
        };
        let c = parse_config_with(&text, &o).unwrap();
        assert_eq!(c.out.as_deref(), Some(std::path::Path::new("b.csv")));
        assert!(c.plot);
        assert_eq!(c.tol, 1e-8);
        assert_eq!(c.init, Init::G1);
        assert_eq!(c.model, Model::TwoLevel2);
        assert!(c.scan.is_none());
    }

    #[test]
    fn partial_scan_window_rejected() {
        let err = parse_config(&with(
            "command = fano\nt_obs = 6\nout = a\ndelta_min = -1\n",
        ))
        .unwrap_err();
        assert!(err.to_string().contains("delta_max"));
    }

    #[test]
    fn render_round_trip() {
        let text = with(
            "command = nondeg\ndelta = trap\nshift_g = 0.2\nshift_e = 0.2\nt_end = 10\n\
             n_samples = 101\nout = nd.csv\ndelta_min = -3\ndelta_max = 1\ndelta_steps = 41\n",
        );
        let c = parse_config(&text).unwrap();
        assert_eq!(parse_config(&render_config(&c)).unwrap(), c);
    }
}
