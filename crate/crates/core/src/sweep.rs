//! Parallel (δ, Ω) parameter-plane sweeps, ridge extraction and distances to
//! the circles δ² + Ω² = (mν)².

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dme::BathParams;
use crate::dressed::DressedBasis;
use crate::error::{Error, Result};
use crate::hilbert::SystemParams;
use crate::observables::{self, DEFAULT_NDC_POINTS};

/// Quantity evaluated at every grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    /// |J_SS| / γ.
    Current,
    /// Relative entropy of coherence (nats).
    Coherence,
    /// NDC ratio, with T_E sampled at `t_e_points` points of [0, T_M].
    Ndc { t_e_points: usize },
    /// Rectification factor with T_C, T_H the smaller and larger bath temperature.
    Rectification,
}

impl Observable {
    pub fn column_name(&self) -> &'static str {
        match self {
            Observable::Current => "abs_current_over_gamma",
            Observable::Coherence => "coherence_nats",
            Observable::Ndc { .. } => "q",
            Observable::Rectification => "r",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Observable::Current => "current",
            Observable::Coherence => "coherence",
            Observable::Ndc { .. } => "q",
            Observable::Rectification => "r",
        })
    }
}

impl FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "current" => Ok(Observable::Current),
            "coherence" => Ok(Observable::Coherence),
            "q" | "ndc" => Ok(Observable::Ndc {
                t_e_points: DEFAULT_NDC_POINTS,
            }),
            "r" | "rectification" => Ok(Observable::Rectification),
            other => Err(format!(
                "unknown observable `{other}` (expected current, coherence, q or r)"
            )),
        }
    }
}

/// Uniform axis `min + i·step`, `i = 0..=round((max − min)/step)`.
pub fn uniform_axis(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::param("grid.step", format!("must be positive, got {step}")));
    }
    if !(min.is_finite() && max.is_finite() && max >= min) {
        return Err(Error::param("grid", format!("invalid range [{min}, {max}]")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

fn check_axis(name: &'static str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::param(name, "axis is empty"));
    }
    if axis.iter().any(|x| !x.is_finite()) {
        return Err(Error::param(name, "axis values must be finite"));
    }
    if axis.len() > 1 {
        let step = axis[1] - axis[0];
        for w in axis.windows(2) {
            let d = w[1] - w[0];
            if !(d > 0.0) || (d - step).abs() > 1e-12 * step.abs().max(1.0) {
                return Err(Error::param(name, "axis must be strictly increasing and uniform"));
            }
        }
    }
    Ok(())
}

/// Observable values over the (δ, Ω) plane; row = δ index, column = Ω index.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub delta_axis: Vec<f64>,
    pub omega_axis: Vec<f64>,
    /// Row-major values; flagged cells hold NaN.
    pub values: Vec<f64>,
    /// Failure message for each cell that could not be computed.
    pub flags: Vec<Option<String>>,
}

impl Grid2D {
    pub fn rows(&self) -> usize {
        self.delta_axis.len()
    }

    pub fn cols(&self) -> usize {
        self.omega_axis.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    pub fn flag(&self, row: usize, col: usize) -> Option<&str> {
        self.flags[row * self.cols() + col].as_deref()
    }

    pub fn flagged_count(&self) -> usize {
        self.flags.iter().filter(|f| f.is_some()).count()
    }

    /// Builds a grid from known values (all cells unflagged).
    pub fn from_values(delta_axis: Vec<f64>, omega_axis: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != delta_axis.len() * omega_axis.len() {
            return Err(Error::DimensionMismatch {
                expected: delta_axis.len() * omega_axis.len(),
                found: values.len(),
            });
        }
        let flags = vec![None; values.len()];
        Ok(Grid2D {
            delta_axis,
            omega_axis,
            values,
            flags,
        })
    }
}

/// Evaluates `observable` at a single (δ, Ω) point.
pub fn evaluate_cell(p: &SystemParams, baths: &BathParams, observable: Observable) -> Result<f64> {
    let basis = DressedBasis::from_params(p)?;
    match observable {
        Observable::Current => {
            Ok(observables::steady_current(&basis, baths)?.abs() / baths.gamma)
        }
        Observable::Coherence => Ok(observables::solve_with_basis(&basis, baths)?.coherence),
        Observable::Ndc { t_e_points } => {
            let grid = observables::uniform_temperatures(baths.t_m, t_e_points);
            Ok(observables::ndc_scan_with_basis(&basis, baths.t_m, baths.gamma, &grid)?.q)
        }
        Observable::Rectification => {
            let (t_c, t_h) = (baths.t_e.min(baths.t_m), baths.t_e.max(baths.t_m));
            Ok(observables::rectification_with_basis(&basis, t_c, t_h, baths.gamma)?.factor)
        }
    }
}

/// Computes `observable` over the δ × Ω grid using `workers` threads
/// (0 = rayon default). Output does not depend on the worker count.
pub fn sweep_grid(
    template: &SystemParams,
    baths: &BathParams,
    delta_axis: &[f64],
    omega_axis: &[f64],
    observable: Observable,
    workers: usize,
) -> Result<Grid2D> {
    check_axis("delta_axis", delta_axis)?;
    check_axis("omega_axis", omega_axis)?;
    template.validate()?;
    baths.validate()?;
    if let Observable::Ndc { t_e_points } = observable {
        if t_e_points < 2 {
            return Err(Error::param("grid.t_e_points", "must be >= 2"));
        }
    }

    let cols = omega_axis.len();
    let cells = delta_axis.len() * cols;
    let compute = |idx: usize| -> Result<f64> {
        let mut p = *template;
        p.delta = delta_axis[idx / cols];
        p.omega = omega_axis[idx % cols];
        evaluate_cell(&p, baths, observable)
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::param("workers", e.to_string()))?;
    let results: Vec<Result<f64>> = pool.install(|| (0..cells).into_par_iter().map(compute).collect());

    let mut values = Vec::with_capacity(cells);
    let mut flags = Vec::with_capacity(cells);
    for r in results {
        match r {
            Ok(v) if v.is_finite() => {
                values.push(v);
                flags.push(None);
            }
            Ok(v) => {
                values.push(f64::NAN);
                flags.push(Some(format!("non-finite value {v}")));
            }
            Err(e) => {
                values.push(f64::NAN);
                flags.push(Some(e.to_string()));
            }
        }
    }
    Ok(Grid2D {
        delta_axis: delta_axis.to_vec(),
        omega_axis: omega_axis.to_vec(),
        values,
        flags,
    })
}

/// A strict interior local maximum of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgePoint {
    pub row: usize,
    pub col: usize,
    pub delta: f64,
    pub omega: f64,
    pub value: f64,
    /// Nearest circle index m* ≥ 1.
    pub circle: u32,
    pub circle_distance: f64,
}

impl RidgePoint {
    pub fn radius(&self) -> f64 {
        self.delta.hypot(self.omega)
    }
}

/// Interior cells strictly greater than all eight neighbours, in row-major
/// order. Cells at the origin are skipped since they have no nearest circle.
pub fn ridge_maxima(g: &Grid2D, nu: f64) -> Vec<RidgePoint> {
    let (rows, cols) = (g.rows(), g.cols());
    let mut out = Vec::new();
    if rows < 3 || cols < 3 {
        return out;
    }
    for r in 1..rows - 1 {
        for c in 1..cols - 1 {
            let v = g.get(r, c);
            if !v.is_finite() {
                continue;
            }
            let is_max = (r - 1..=r + 1)
                .flat_map(|rr| (c - 1..=c + 1).map(move |cc| (rr, cc)))
                .filter(|&(rr, cc)| (rr, cc) != (r, c))
                .all(|(rr, cc)| v > g.get(rr, cc));
            if !is_max {
                continue;
            }
            let (delta, omega) = (g.delta_axis[r], g.omega_axis[c]);
            if let Ok((circle, circle_distance)) = circle_distance(delta, omega, nu) {
                out.push(RidgePoint {
                    row: r,
                    col: c,
                    delta,
                    omega,
                    value: v,
                    circle,
                    circle_distance,
                });
            }
        }
    }
    out
}

/// Nearest circle δ² + Ω² = (m*ν)², m* = max(1, round(√(δ² + Ω²)/ν)),
/// and the radial distance to it.
pub fn circle_distance(delta: f64, omega: f64, nu: f64) -> Result<(u32, f64)> {
    let radius = delta.hypot(omega);
    if radius == 0.0 {
        return Err(Error::Origin);
    }
    let m = (radius / nu).round().max(1.0);
    Ok((m as u32, (radius - m * nu).abs()))
}
