//! Steady-state observables: heat currents, residual coherence, the NDC
//! ratio Q and the rectification factor R.

use nalgebra::{DVector, SymmetricEigen};

use crate::dme::{self, BathParams, RateSet, SteadyState};
use crate::dressed::DressedBasis;
use crate::error::{Error, Result};
use crate::hilbert::{Coupling, Operator, SystemParams};

/// Heat flowing from each bath into the system (units of energy × rate).
///
/// A positive value means the bath heats the system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentPair {
    pub electronic: f64,
    pub motional: f64,
}

impl CurrentPair {
    /// J_SS = J_E.
    pub fn steady(&self) -> f64 {
        self.electronic
    }

    pub fn imbalance(&self) -> f64 {
        self.electronic + self.motional
    }

    pub fn scaled(&self, gamma: f64) -> CurrentPair {
        CurrentPair {
            electronic: self.electronic / gamma,
            motional: self.motional / gamma,
        }
    }
}

/// J_μ = Σ_{j≠k} ω_{jk} W^μ(k → j) P_k.
pub fn heat_currents(rates: &RateSet, populations: &DVector<f64>) -> CurrentPair {
    let bath = |coupling: Coupling| {
        let w = rates.rates(coupling);
        let omega = rates.frequencies();
        let mut sum = 0.0;
        for k in 0..rates.dim() {
            let pk = populations[k];
            if pk == 0.0 {
                continue;
            }
            for j in 0..rates.dim() {
                if j != k {
                    sum += omega[(j, k)] * w[(j, k)] * pk;
                }
            }
        }
        sum
    };
    CurrentPair {
        electronic: bath(Coupling::Electronic),
        motional: bath(Coupling::Motional),
    }
}

/// −Σ λ ln λ over the eigenvalues of ρ, with negative roundoff clamped to 0.
pub fn von_neumann_entropy(rho: &Operator) -> f64 {
    let eig = SymmetricEigen::new(rho.clone());
    eig.eigenvalues.iter().map(|&l| shannon_term(l)).sum()
}

fn shannon_term(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

/// Relative entropy of coherence in the free basis, C = S(diag ρ) − S(ρ),
/// in nats.
pub fn coherence_free_basis(rho: &Operator) -> f64 {
    let diag_entropy: f64 = (0..rho.nrows()).map(|i| shannon_term(rho[(i, i)].re)).sum();
    (diag_entropy - von_neumann_entropy(rho)).max(0.0)
}

/// Everything computed at one parameter point.
#[derive(Debug, Clone)]
pub struct SteadyPoint {
    pub currents: CurrentPair,
    pub coherence: f64,
    pub state: SteadyState,
    pub gamma: f64,
}

/// Runs the full pipeline at a single (system, baths) point.
pub fn solve_point(p: &SystemParams, baths: &BathParams) -> Result<SteadyPoint> {
    let basis = DressedBasis::from_params(p)?;
    solve_with_basis(&basis, baths)
}

pub fn solve_with_basis(basis: &DressedBasis, baths: &BathParams) -> Result<SteadyPoint> {
    let rates = dme::transition_rates(basis, baths)?;
    let state = dme::steady_state(basis, &rates)?;
    Ok(SteadyPoint {
        currents: heat_currents(&rates, &state.populations),
        coherence: coherence_free_basis(&state.rho_free),
        state,
        gamma: baths.gamma,
    })
}

/// J_SS = J_E at the given point, skipping the density-matrix reconstruction.
pub fn steady_current(basis: &DressedBasis, baths: &BathParams) -> Result<f64> {
    let rates = dme::transition_rates(basis, baths)?;
    let populations = dme::steady_populations(&dme::pauli_generator(&rates))?;
    Ok(heat_currents(&rates, &populations).steady())
}

/// Outcome of sweeping T_E at fixed T_M.
#[derive(Debug, Clone)]
pub struct NdcResult {
    /// max |J_SS(T_E)| / |J_SS(0)|.
    pub q: f64,
    pub argmax_t_e: f64,
    /// (T_E, J_SS) samples.
    pub curve: Vec<(f64, f64)>,
}

pub const DEFAULT_NDC_POINTS: usize = 101;

/// `points` uniform samples of [0, t_max], endpoints included.
pub fn uniform_temperatures(t_max: f64, points: usize) -> Vec<f64> {
    let last = points.saturating_sub(1).max(1) as f64;
    (0..points).map(|i| t_max * i as f64 / last).collect()
}

/// Samples J_SS(T_E) at fixed T_M and returns the ratio Q.
pub fn ndc_scan(p: &SystemParams, t_m: f64, gamma: f64, t_e_grid: &[f64]) -> Result<NdcResult> {
    let basis = DressedBasis::from_params(p)?;
    ndc_scan_with_basis(&basis, t_m, gamma, t_e_grid)
}

pub fn ndc_scan_with_basis(
    basis: &DressedBasis,
    t_m: f64,
    gamma: f64,
    t_e_grid: &[f64],
) -> Result<NdcResult> {
    if t_e_grid.len() < 2 {
        return Err(Error::param("t_e_grid", "needs at least two temperatures"));
    }
    if t_e_grid[0] != 0.0 {
        return Err(Error::param("t_e_grid", "must start at T_E = 0"));
    }
    if t_e_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("t_e_grid", "must be strictly increasing"));
    }

    let curve = t_e_grid
        .iter()
        .map(|&t_e| {
            let baths = BathParams::new(t_e, t_m).with_gamma(gamma);
            steady_current(basis, &baths).map(|j| (t_e, j))
        })
        .collect::<Result<Vec<_>>>()?;

    let base = curve[0].1.abs();
    if base <= 1e-14 * gamma {
        return Err(Error::UndefinedQ(base));
    }
    let (argmax_t_e, peak) = curve
        .iter()
        .map(|&(t, j)| (t, j.abs()))
        .fold((curve[0].0, base), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(NdcResult {
        q: peak / base,
        argmax_t_e,
        curve,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectification {
    /// J_SS with the cold bath on the electronic part.
    pub forward: f64,
    /// J_SS with the hot bath on the electronic part.
    pub backward: f64,
    /// R = (|J_→| − |J_←|) / max(|J_→|, |J_←|).
    pub factor: f64,
}

pub fn rectification(p: &SystemParams, t_c: f64, t_h: f64, gamma: f64) -> Result<Rectification> {
    let basis = DressedBasis::from_params(p)?;
    rectification_with_basis(&basis, t_c, t_h, gamma)
}

pub fn rectification_with_basis(
    basis: &DressedBasis,
    t_c: f64,
    t_h: f64,
    gamma: f64,
) -> Result<Rectification> {
    if !(t_c < t_h) {
        return Err(Error::UndefinedRectification(format!(
            "requires T_C < T_H, got T_C = {t_c}, T_H = {t_h}"
        )));
    }
    let forward = steady_current(basis, &BathParams::new(t_c, t_h).with_gamma(gamma))?;
    let backward = steady_current(basis, &BathParams::new(t_h, t_c).with_gamma(gamma))?;
    Ok(Rectification {
        forward,
        backward,
        factor: rectification_factor(forward, backward)?,
    })
}

pub fn rectification_factor(forward: f64, backward: f64) -> Result<f64> {
    let (f, b) = (forward.abs(), backward.abs());
    let denom = f.max(b);
    if denom == 0.0 {
        return Err(Error::UndefinedRectification("both currents vanish".into()));
    }
    Ok((f - b) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn coherence_of_diagonal_state_is_zero() {
        let rho = Operator::from_diagonal(&DVector::from_vec(vec![
            Complex64::from(0.5),
            Complex64::from(0.3),
            Complex64::from(0.2),
            Complex64::from(0.0),
        ]));
        assert!(coherence_free_basis(&rho).abs() < 1e-14);
    }

    #[test]
    fn coherence_of_plus_state_is_ln2() {
        // (|g,0⟩ + |e,0⟩)/√2 with N = 2: indices 0 and 2
        let mut psi = Operator::zeros(4, 1);
        psi[(0, 0)] = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
        psi[(2, 0)] = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
        let rho = &psi * psi.adjoint();
        assert!((coherence_free_basis(&rho) - 2f64.ln()).abs() < 1e-12);
        assert!(von_neumann_entropy(&rho).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_has_no_current() {
        let p = SystemParams::new(0.8, 1.5);
        for t in [0.5, 1.0, 5.0] {
            let s = solve_point(&p, &BathParams::new(t, t)).unwrap();
            assert!(s.currents.electronic.abs() < 1e-12 * s.gamma);
            assert!(s.currents.motional.abs() < 1e-12 * s.gamma);
        }
    }

    #[test]
    fn no_channel_no_current() {
        let baths = BathParams::new(0.5, 5.0);
        for p in [
            SystemParams::new(0.8, 0.0),
            SystemParams::new(0.8, 1.5).with_eta(0.0),
        ] {
            let s = solve_point(&p.with_fock_dim(20), &baths).unwrap();
            assert!(s.currents.electronic.abs() < 1e-12 * baths.gamma, "{:?}", s.currents);
            assert!(s.currents.motional.abs() < 1e-12 * baths.gamma);
        }
    }

    #[test]
    fn working_point_direction_and_coherence() {
        let s = solve_point(&SystemParams::new(0.8, 1.5), &BathParams::new(0.5, 5.0)).unwrap();
        assert!(s.currents.motional > 0.0);
        assert!(s.currents.electronic < 0.0);
        assert!(s.currents.imbalance().abs() < 1e-10 * s.gamma);
        assert!(s.coherence > 0.0);
    }

    #[test]
    fn ndc_grid_validation() {
        let p = SystemParams::new(0.8, 1.5).with_fock_dim(10);
        assert!(ndc_scan(&p, 5.0, 1e-3, &[0.5, 1.0]).is_err());
        assert!(ndc_scan(&p, 5.0, 1e-3, &[0.0]).is_err());
        assert!(ndc_scan(&p, 5.0, 1e-3, &[0.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn boundary_maximum_gives_unit_q() {
        // a decreasing curve has its maximum at T_E = 0
        let p = SystemParams::new(0.8, 1.5).with_fock_dim(12);
        let r = ndc_scan(&p, 5.0, 1e-3, &[0.0, 4.0, 4.5, 5.0]).unwrap();
        let abs: Vec<f64> = r.curve.iter().map(|c| c.1.abs()).collect();
        if abs.iter().all(|&j| j <= abs[0]) {
            assert_eq!(r.q, 1.0);
            assert_eq!(r.argmax_t_e, 0.0);
        }
    }

    #[test]
    fn rectification_bounds() {
        assert_eq!(rectification_factor(2.0, -2.0).unwrap(), 0.0);
        assert_eq!(rectification_factor(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(rectification_factor(0.0, 3.0).unwrap(), -1.0);
        assert!(rectification_factor(0.0, 0.0).is_err());
        let p = SystemParams::new(0.8, 1.5).with_fock_dim(10);
        assert!(rectification(&p, 1.0, 1.0, 1e-3).is_err());
        let r = rectification(&p, 0.5, 5.0, 1e-3).unwrap();
        assert!(r.factor.abs() <= 1.0);
    }

    #[test]
    fn temperature_grid() {
        let g = uniform_temperatures(5.0, 101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 5.0);
        assert!((g[1] - 0.05).abs() < 1e-15);
    }
}
