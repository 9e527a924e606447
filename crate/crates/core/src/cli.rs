//! Flat `key=value` run configuration, subcommand dispatch and CSV output.
//!
//! ```text
//! # strong-drive working point
//! delta=0.8
//! omega=1.5
//! t_e=0.5
//! t_m=5.0
//! ```
//!
//! Recognized keys: `nu`, `delta`, `omega`, `eta`, `fock_dim`, `t_e`, `t_m`,
//! `gamma`, `grid.delta_min`, `grid.delta_max`, `grid.delta_step`,
//! `grid.omega_min`, `grid.omega_max`, `grid.omega_step`, `grid.t_e_points`,
//! `observable`, `output`, `workers`. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::dme::{BathParams, DEFAULT_GAMMA};
use crate::hilbert::{SystemParams, DEFAULT_ETA, DEFAULT_FOCK_DIM};
use crate::observables::{self, DEFAULT_NDC_POINTS};
use crate::sweep::{self, Observable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

pub const DEFAULT_GRID_MIN: f64 = 0.0;
pub const DEFAULT_GRID_MAX: f64 = 3.2;
pub const DEFAULT_GRID_STEP: f64 = 0.05;

const KNOWN_KEYS: &[&str] = &[
    "nu",
    "delta",
    "omega",
    "eta",
    "fock_dim",
    "t_e",
    "t_m",
    "gamma",
    "grid.delta_min",
    "grid.delta_max",
    "grid.delta_step",
    "grid.omega_min",
    "grid.omega_max",
    "grid.omega_step",
    "grid.t_e_points",
    "observable",
    "output",
    "workers",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("missing required keys: {}", .0.join(", "))]
    Missing(Vec<&'static str>),
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: expected `key=value`, got `{text}`")]
    Syntax { text: String, line: usize },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { key: String, line: usize },
    #[error("line {line}: `{key}` is not a valid number: `{value}`")]
    NotNumeric { key: String, value: String, line: usize },
    #[error("line {line}: `{key}` out of range: {reason}")]
    OutOfRange { key: String, reason: String, line: usize },
    #[error("cannot read config: {0}")]
    Io(String),
}

/// Inclusive uniform range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for AxisSpec {
    fn default() -> Self {
        AxisSpec {
            min: DEFAULT_GRID_MIN,
            max: DEFAULT_GRID_MAX,
            step: DEFAULT_GRID_STEP,
        }
    }
}

impl AxisSpec {
    pub fn points(&self) -> crate::Result<Vec<f64>> {
        sweep::uniform_axis(self.min, self.max, self.step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub delta: AxisSpec,
    pub omega: AxisSpec,
    pub t_e_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            delta: AxisSpec::default(),
            omega: AxisSpec::default(),
            t_e_points: DEFAULT_NDC_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemParams,
    pub baths: BathParams,
    pub grid: GridSpec,
    pub observable: Observable,
    pub output: Option<PathBuf>,
    pub workers: usize,
    /// Keys that were filled in from defaults.
    pub defaults_applied: Vec<&'static str>,
}

struct Entry {
    value: String,
    line: usize,
}

fn parse_num<T: FromStr>(key: &str, e: &Entry) -> Result<T, ConfigError> {
    e.value.parse::<T>().map_err(|_| ConfigError::NotNumeric {
        key: key.to_string(),
        value: e.value.clone(),
        line: e.line,
    })
}

fn range_err(key: &str, line: usize, reason: impl Into<String>) -> ConfigError {
    ConfigError::OutOfRange {
        key: key.to_string(),
        reason: reason.into(),
        line,
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: BTreeMap<&'static str, Entry> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            text: content.to_string(),
            line,
        })?;
        let key = key.trim();
        let known = KNOWN_KEYS
            .iter()
            .copied()
            .find(|k| *k == key)
            .ok_or_else(|| ConfigError::UnknownKey {
                key: key.to_string(),
                line,
            })?;
        let entry = Entry {
            value: value.trim().to_string(),
            line,
        };
        if entries.insert(known, entry).is_some() {
            return Err(ConfigError::Duplicate {
                key: key.to_string(),
                line,
            });
        }
    }

    let has_grid = entries.keys().any(|k| k.starts_with("grid.delta") || k.starts_with("grid.omega"));
    let mut required = vec!["t_e", "t_m"];
    if !has_grid {
        required.splice(0..0, ["delta", "omega"]);
    }
    let missing: Vec<&'static str> = required
        .into_iter()
        .filter(|k| !entries.contains_key(k))
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::Missing(missing));
    }

    let mut defaults_applied = Vec::new();
    let mut num = |key: &'static str, default: f64| -> Result<(f64, usize), ConfigError> {
        match entries.get(key) {
            Some(e) => {
                let v: f64 = parse_num(key, e)?;
                if !v.is_finite() {
                    return Err(range_err(key, e.line, "must be finite"));
                }
                Ok((v, e.line))
            }
            None => {
                defaults_applied.push(key);
                Ok((default, 0))
            }
        }
    };

    let (nu, nu_line) = num("nu", 1.0)?;
    if nu <= 0.0 {
        return Err(range_err("nu", nu_line, "must be > 0"));
    }
    let (delta, _) = num("delta", 0.0)?;
    let (omega, _) = num("omega", 0.0)?;
    let (eta, eta_line) = num("eta", DEFAULT_ETA)?;
    if eta < 0.0 {
        return Err(range_err("eta", eta_line, "must be >= 0"));
    }
    let (t_e, t_e_line) = num("t_e", 0.0)?;
    if t_e < 0.0 {
        return Err(range_err("t_e", t_e_line, "must be >= 0"));
    }
    let (t_m, t_m_line) = num("t_m", 0.0)?;
    if t_m < 0.0 {
        return Err(range_err("t_m", t_m_line, "must be >= 0"));
    }
    let (gamma, gamma_line) = num("gamma", DEFAULT_GAMMA)?;
    if gamma <= 0.0 {
        return Err(range_err("gamma", gamma_line, "must be > 0"));
    }

    let mut axis = |prefix: &str| -> Result<AxisSpec, ConfigError> {
        let keys: [&'static str; 3] = if prefix == "delta" {
            ["grid.delta_min", "grid.delta_max", "grid.delta_step"]
        } else {
            ["grid.omega_min", "grid.omega_max", "grid.omega_step"]
        };
        let (min, _) = num(keys[0], DEFAULT_GRID_MIN)?;
        let (max, max_line) = num(keys[1], DEFAULT_GRID_MAX)?;
        let (step, step_line) = num(keys[2], DEFAULT_GRID_STEP)?;
        if step <= 0.0 {
            return Err(range_err(keys[2], step_line, "must be > 0"));
        }
        if max < min {
            return Err(range_err(keys[1], max_line, format!("must be >= {}", keys[0])));
        }
        Ok(AxisSpec { min, max, step })
    };
    let delta_axis = axis("delta")?;
    let omega_axis = axis("omega")?;

    let fock_dim = match entries.get("fock_dim") {
        Some(e) => {
            let v: usize = parse_num("fock_dim", e)?;
            if v < 2 {
                return Err(range_err("fock_dim", e.line, format!("must be >= 2, got {v}")));
            }
            v
        }
        None => {
            defaults_applied.push("fock_dim");
            DEFAULT_FOCK_DIM
        }
    };
    let t_e_points = match entries.get("grid.t_e_points") {
        Some(e) => {
            let v: usize = parse_num("grid.t_e_points", e)?;
            if v < 2 {
                return Err(range_err("grid.t_e_points", e.line, "must be >= 2"));
            }
            v
        }
        None => {
            defaults_applied.push("grid.t_e_points");
            DEFAULT_NDC_POINTS
        }
    };
    let workers = match entries.get("workers") {
        Some(e) => parse_num("workers", e)?,
        None => 0,
    };
    let observable = match entries.get("observable") {
        Some(e) => {
            let o: Observable = e.value.parse().map_err(|reason| range_err("observable", e.line, reason))?;
            match o {
                Observable::Ndc { .. } => Observable::Ndc { t_e_points },
                other => other,
            }
        }
        None => {
            defaults_applied.push("observable");
            Observable::Current
        }
    };
    let output = entries.get("output").map(|e| PathBuf::from(&e.value));

    Ok(RunConfig {
        system: SystemParams {
            nu,
            delta,
            omega,
            eta,
            fock_dim,
        },
        baths: BathParams { t_e, t_m, gamma },
        grid: GridSpec {
            delta: delta_axis,
            omega: omega_axis,
            t_e_points,
        },
        observable,
        output,
        workers,
        defaults_applied,
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Steady,
    Sweep2d,
    Ndc,
    Ridge,
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcommand::Steady => "steady",
            Subcommand::Sweep2d => "sweep2d",
            Subcommand::Ndc => "ndc",
            Subcommand::Ridge => "ridge",
        })
    }
}

/// 17 significant digits, round-trip exact.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn metadata(cmd: Subcommand, cfg: &RunConfig) -> String {
    let mut s = String::new();
    let p = &cfg.system;
    let b = &cfg.baths;
    let _ = writeln!(s, "# ionheat v{}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "# subcommand = {cmd}");
    let _ = writeln!(s, "# units = hbar = k_B = 1; energies and temperatures in the same units as nu");
    let _ = writeln!(s, "# entropy_log_base = e (nats)");
    let _ = writeln!(s, "# currents: J_mu = heat flow from bath mu into the system; J_SS = J_E");
    for (key, value) in [
        ("nu", fmt_float(p.nu)),
        ("delta", fmt_float(p.delta)),
        ("omega", fmt_float(p.omega)),
        ("eta", fmt_float(p.eta)),
        ("fock_dim", p.fock_dim.to_string()),
        ("t_e", fmt_float(b.t_e)),
        ("t_m", fmt_float(b.t_m)),
        ("gamma", fmt_float(b.gamma)),
    ] {
        let _ = writeln!(s, "# {key} = {value}");
    }
    if matches!(cmd, Subcommand::Sweep2d | Subcommand::Ridge) {
        let g = &cfg.grid;
        let _ = writeln!(
            s,
            "# grid.delta = [{}, {}] step {}",
            fmt_float(g.delta.min),
            fmt_float(g.delta.max),
            fmt_float(g.delta.step)
        );
        let _ = writeln!(
            s,
            "# grid.omega = [{}, {}] step {}",
            fmt_float(g.omega.min),
            fmt_float(g.omega.max),
            fmt_float(g.omega.step)
        );
    }
    if matches!(cmd, Subcommand::Ndc) || matches!(cfg.observable, Observable::Ndc { .. }) {
        let _ = writeln!(s, "# grid.t_e_points = {}", cfg.grid.t_e_points);
    }
    if cmd == Subcommand::Sweep2d {
        let _ = writeln!(s, "# observable = {}", cfg.observable);
    }
    let defaults = if cfg.defaults_applied.is_empty() {
        "none".to_string()
    } else {
        cfg.defaults_applied.join(", ")
    };
    let _ = writeln!(s, "# defaults_applied = {defaults}");
    s
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numeric(#[from] crate::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Numeric(_) | RunError::Io(_) => EXIT_NUMERIC,
        }
    }
}

/// Produces the complete output text of a subcommand.
pub fn render(cmd: Subcommand, cfg: &RunConfig) -> Result<String, RunError> {
    let mut out = metadata(cmd, cfg);
    match cmd {
        Subcommand::Steady => {
            let point = observables::solve_point(&cfg.system, &cfg.baths)?;
            let pops = &point.state.populations;
            let (argmax, pmax) = pops
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best });
            let g = point.gamma;
            let j = point.currents;
            out.push_str("j_e,j_m,j_e_over_gamma,j_m_over_gamma,coherence_nats,ground_population,max_population,max_population_level\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                fmt_float(j.electronic),
                fmt_float(j.motional),
                fmt_float(j.electronic / g),
                fmt_float(j.motional / g),
                fmt_float(point.coherence),
                fmt_float(pops[0]),
                fmt_float(pmax),
                argmax
            );
        }
        Subcommand::Ndc => {
            let grid = observables::uniform_temperatures(cfg.baths.t_m, cfg.grid.t_e_points);
            let r = observables::ndc_scan(&cfg.system, cfg.baths.t_m, cfg.baths.gamma, &grid)?;
            out.push_str("t_e,j_ss,j_ss_over_gamma\n");
            for &(t, j) in &r.curve {
                let _ = writeln!(out, "{},{},{}", fmt_float(t), fmt_float(j), fmt_float(j / cfg.baths.gamma));
            }
            let _ = writeln!(out, "# summary q = {} argmax_t_e = {}", fmt_float(r.q), fmt_float(r.argmax_t_e));
        }
        Subcommand::Sweep2d => {
            let g = sweep_from(cfg, cfg.observable)?;
            let _ = writeln!(out, "delta,omega,{},status", cfg.observable.column_name());
            for r in 0..g.rows() {
                for c in 0..g.cols() {
                    let status = g.flag(r, c).map(sanitize).unwrap_or_else(|| "ok".to_string());
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        fmt_float(g.delta_axis[r]),
                        fmt_float(g.omega_axis[c]),
                        fmt_float(g.get(r, c)),
                        status
                    );
                }
            }
        }
        Subcommand::Ridge => {
            let g = sweep_from(cfg, Observable::Current)?;
            let ridges = sweep::ridge_maxima(&g, cfg.system.nu);
            out.push_str("delta,omega,abs_current_over_gamma,circle_m,circle_distance\n");
            for p in &ridges {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_float(p.delta),
                    fmt_float(p.omega),
                    fmt_float(p.value),
                    p.circle,
                    fmt_float(p.circle_distance)
                );
            }
        }
    }
    Ok(out)
}

fn sanitize(msg: &str) -> String {
    msg.replace([',', '\n'], ";")
}

fn sweep_from(cfg: &RunConfig, observable: Observable) -> Result<sweep::Grid2D, RunError> {
    let deltas = cfg.grid.delta.points()?;
    let omegas = cfg.grid.omega.points()?;
    Ok(sweep::sweep_grid(&cfg.system, &cfg.baths, &deltas, &omegas, observable, cfg.workers)?)
}

/// Runs a subcommand end to end and returns the process exit code.
///
/// `output` and `workers` override the config file.
pub fn run_subcommand(
    cmd: Subcommand,
    config_path: &Path,
    output: Option<&Path>,
    workers: Option<usize>,
) -> i32 {
    match try_run(cmd, config_path, output, workers) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn try_run(
    cmd: Subcommand,
    config_path: &Path,
    output: Option<&Path>,
    workers: Option<usize>,
) -> Result<(), RunError> {
    let mut cfg = load_config(config_path)?;
    if let Some(w) = workers {
        cfg.workers = w;
    }
    if let Some(o) = output {
        cfg.output = Some(o.to_path_buf());
    }
    if cmd == Subcommand::Steady || cmd == Subcommand::Ndc {
        cfg.system.validate()?;
    }
    let text = render(cmd, &cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config("delta=0.8\nomega=1.5\nt_e=0.5\nt_m=5.0").unwrap();
        assert_eq!(cfg.system.eta, 0.05);
        assert_eq!(cfg.system.fock_dim, 30);
        assert_eq!(cfg.system.nu, 1.0);
        assert_eq!(cfg.baths.gamma, 1e-3);
        assert_eq!(cfg.system.delta, 0.8);
        assert_eq!(cfg.baths.t_m, 5.0);
        assert!(cfg.defaults_applied.contains(&"eta"));
        assert_eq!(cfg.grid.delta, AxisSpec::default());
    }

    #[test]
    fn empty_config_lists_required_keys() {
        let err = parse_config("").unwrap_err();
        assert_eq!(err, ConfigError::Missing(vec!["delta", "omega", "t_e", "t_m"]));
        let msg = err.to_string();
        for k in ["delta", "omega", "t_e", "t_m"] {
            assert!(msg.contains(k));
        }
    }

    #[test]
    fn grid_configs_do_not_need_a_point() {
        let cfg = parse_config("t_e=0.5\nt_m=5\ngrid.delta_step=0.2\ngrid.omega_step=0.2").unwrap();
        assert_eq!(cfg.grid.delta.points().unwrap().len(), 17);
    }

    #[test]
    fn errors_carry_key_and_line() {
        let base = "delta=0.8\nomega=1.5\nt_e=0.5\nt_m=5.0\n";
        match parse_config(&format!("{base}fock_dim=1")).unwrap_err() {
            ConfigError::OutOfRange { key, line, .. } => {
                assert_eq!(key, "fock_dim");
                assert_eq!(line, 5);
            }
            e => panic!("unexpected {e:?}"),
        }
        match parse_config(&format!("# comment\n{base}gamma=fast")).unwrap_err() {
            ConfigError::NotNumeric { key, line, .. } => {
                assert_eq!(key, "gamma");
                assert_eq!(line, 6);
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(
            parse_config(&format!("{base}temperature=3")),
            Err(ConfigError::UnknownKey { line: 5, .. })
        ));
        assert!(matches!(parse_config(&format!("{base}t_e=1")), Err(ConfigError::Duplicate { .. })));
        assert!(matches!(parse_config(&format!("{base}oops")), Err(ConfigError::Syntax { line: 5, .. })));
        assert!(matches!(parse_config(&format!("{base}t_m=-1").replace("t_m=5.0\n", "")), Err(ConfigError::OutOfRange { .. })));
        assert!(matches!(parse_config(&format!("{base}observable=heat")), Err(ConfigError::OutOfRange { .. })));
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-17, 12345.678901234567] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn steady_record_at_equilibrium() {
        let cfg = parse_config("delta=0.8\nomega=1.5\nt_e=1\nt_m=1\nfock_dim=12").unwrap();
        let text = render(Subcommand::Steady, &cfg).unwrap();
        let mut lines = text.lines().filter(|l| !l.starts_with('#'));
        let header = lines.next().unwrap();
        assert!(header.starts_with("j_e,j_m"));
        let fields: Vec<f64> = lines.next().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
        assert!(fields[0].abs() < 1e-12 * cfg.baths.gamma);
        assert!(text.contains("# entropy_log_base = e (nats)"));
    }
}
