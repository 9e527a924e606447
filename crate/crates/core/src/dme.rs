//! Dressed master equation: transition rates, the population generator it
//! induces, its stationary state, and a full density-matrix integrator.
//!
//! For a jump k → j with ω_{jk} = E_j − E_k the rate from bath μ is
//!
//! * ω_{jk} > 0 (absorption): γ n̄_μ(ω_{jk}) |⟨j|A_μ|k⟩|²
//! * ω_{jk} < 0 (emission):   γ [1 + n̄_μ(|ω_{jk}|)] |⟨j|A_μ|k⟩|²
//!
//! Each dissipator D_{jk}[ρ] = P_k|j⟩⟨j| − ½{|k⟩⟨k|, ρ} feeds only dressed
//! populations, so the stationary state is diagonal in the dressed basis and
//! follows from the Pauli generator alone.

use log::debug;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dressed::{squared_elements, DressedBasis, DEGENERACY_TOL};
use crate::error::{Error, Result};
use crate::hilbert::{self, Coupling, Operator};
use crate::ode::{self, Tolerances};

pub const DEFAULT_GAMMA: f64 = 1e-3;

/// Temperatures of the two reservoirs and the uniform rate constant γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    pub t_e: f64,
    pub t_m: f64,
    pub gamma: f64,
}

impl BathParams {
    pub fn new(t_e: f64, t_m: f64) -> Self {
        BathParams {
            t_e,
            t_m,
            gamma: DEFAULT_GAMMA,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn temperature(&self, coupling: Coupling) -> f64 {
        match coupling {
            Coupling::Electronic => self.t_e,
            Coupling::Motional => self.t_m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::param("gamma", format!("must be positive, got {}", self.gamma)));
        }
        if !(self.t_e.is_finite() && self.t_e >= 0.0) {
            return Err(Error::param("t_e", format!("must be >= 0, got {}", self.t_e)));
        }
        if !(self.t_m.is_finite() && self.t_m >= 0.0) {
            return Err(Error::param("t_m", format!("must be >= 0, got {}", self.t_m)));
        }
        Ok(())
    }
}

/// n̄(ω) = 1/(e^{ω/T} − 1); exactly zero at T = 0.
pub fn bose_occupancy(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega >= DEGENERACY_TOL) {
        return Err(Error::DegenerateFrequency(omega));
    }
    if !(temperature >= 0.0) {
        return Err(Error::param("temperature", format!("must be >= 0, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Directed transition rates of both reservoirs.
///
/// Matrices are indexed `[(j, k)]` for the jump k → j.
#[derive(Debug, Clone)]
pub struct RateSet {
    frequencies: DMatrix<f64>,
    electronic: DMatrix<f64>,
    motional: DMatrix<f64>,
    gamma: f64,
    excluded: usize,
}

impl RateSet {
    /// W^μ(k → j) for all ordered pairs.
    pub fn rates(&self, coupling: Coupling) -> &DMatrix<f64> {
        match coupling {
            Coupling::Electronic => &self.electronic,
            Coupling::Motional => &self.motional,
        }
    }

    pub fn rate(&self, coupling: Coupling, from: usize, to: usize) -> f64 {
        self.rates(coupling)[(to, from)]
    }

    /// ω_{jk} = E_j − E_k.
    pub fn frequencies(&self) -> &DMatrix<f64> {
        &self.frequencies
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.frequencies.nrows()
    }

    /// Number of ordered pairs dropped as degenerate.
    pub fn excluded_degenerate(&self) -> usize {
        self.excluded
    }

    /// Sum of both baths' rates.
    pub fn total(&self) -> DMatrix<f64> {
        &self.electronic + &self.motional
    }
}

pub fn transition_rates(basis: &DressedBasis, baths: &BathParams) -> Result<RateSet> {
    baths.validate()?;
    let dim = basis.dim();
    let frequencies = DMatrix::from_fn(dim, dim, |j, k| basis.frequency(j, k));

    let mut excluded = 0;
    for j in 0..dim {
        for k in 0..dim {
            if j != k && frequencies[(j, k)].abs() < DEGENERACY_TOL {
                excluded += 1;
            }
        }
    }
    if excluded > 0 {
        debug!("excluded {excluded} degenerate transitions (|ω| < {DEGENERACY_TOL:e})");
    }

    let build = |coupling: Coupling| -> Result<DMatrix<f64>> {
        let temperature = baths.temperature(coupling);
        let sq = squared_elements(basis.elements(coupling));
        let mut w = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            for j in 0..dim {
                let omega = frequencies[(j, k)];
                if j == k || omega.abs() < DEGENERACY_TOL {
                    continue;
                }
                let occupation = if omega > 0.0 {
                    bose_occupancy(omega, temperature)?
                } else {
                    1.0 + bose_occupancy(-omega, temperature)?
                };
                w[(j, k)] = baths.gamma * occupation * sq[(j, k)];
            }
        }
        Ok(w)
    };

    Ok(RateSet {
        electronic: build(Coupling::Electronic)?,
        motional: build(Coupling::Motional)?,
        frequencies,
        gamma: baths.gamma,
        excluded,
    })
}

/// dP/dt = G P with G_{jk} = Σ_μ W^μ(k → j) and columns summing to zero.
pub fn pauli_generator(rates: &RateSet) -> DMatrix<f64> {
    let mut g = rates.total();
    for k in 0..g.ncols() {
        g[(k, k)] = 0.0;
        let out: f64 = g.column(k).sum();
        g[(k, k)] = -out;
    }
    g
}

/// Counts the closed communicating classes of the jump graph of `g`.
fn closed_classes(g: &DMatrix<f64>) -> usize {
    let n = g.nrows();
    let mut reach = vec![vec![false; n]; n];
    for (start, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![start];
        row[start] = true;
        while let Some(k) = stack.pop() {
            for j in 0..n {
                if j != k && g[(j, k)] > 0.0 && !row[j] {
                    row[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let closed = (0..n).all(|j| !reach[i][j] || reach[j][i]);
        if closed {
            count += 1;
            for j in 0..n {
                if reach[i][j] {
                    seen[j] = true;
                }
            }
        }
    }
    count
}

/// Stationary distribution of a Pauli generator.
///
/// Uses Grassmann–Taksar–Heyman elimination, which involves no subtractions
/// and keeps every population to high relative accuracy, so currents built
/// from small differences of large flows stay exactly linear in γ. Falls
/// back to [`steady_populations_lu`] when a state has no path to any
/// lower-indexed state (chains with transient states).
pub fn steady_populations(g: &DMatrix<f64>) -> Result<DVector<f64>> {
    check_generator(g)?;
    match gth(g) {
        Some(p) => Ok(p),
        None => solve_lu(g),
    }
}

/// Stationary distribution by replacing one balance row with the
/// normalization row and solving the dense system by LU decomposition.
pub fn steady_populations_lu(g: &DMatrix<f64>) -> Result<DVector<f64>> {
    check_generator(g)?;
    solve_lu(g)
}

fn check_generator(g: &DMatrix<f64>) -> Result<()> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.ncols(),
        });
    }
    let classes = closed_classes(g);
    if classes != 1 {
        return Err(Error::NonUniqueSteadyState(classes));
    }
    Ok(())
}

fn gth(g: &DMatrix<f64>) -> Option<DVector<f64>> {
    let n = g.nrows();
    // a[(i, j)] = rate i → j
    let mut a = g.transpose();
    for k in (1..n).rev() {
        let s: f64 = (0..k).map(|j| a[(k, j)]).sum();
        if !(s > 0.0) {
            return None;
        }
        for i in 0..k {
            a[(i, k)] /= s;
        }
        for i in 0..k {
            let aik = a[(i, k)];
            if aik == 0.0 {
                continue;
            }
            for j in 0..k {
                a[(i, j)] += aik * a[(k, j)];
            }
        }
    }
    let mut p = DVector::zeros(n);
    p[0] = 1.0;
    for k in 1..n {
        p[k] = (0..k).map(|i| p[i] * a[(i, k)]).sum();
    }
    let total = p.sum();
    Some(p / total)
}

fn solve_lu(g: &DMatrix<f64>) -> Result<DVector<f64>> {
    let n = g.nrows();
    // normalization row scaled to the generator so pivoting is γ-independent
    let scale = (0..n).map(|k| g[(k, k)].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut a = g.clone();
    a.row_mut(n - 1).fill(scale);
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = scale;
    let mut p = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SteadySolve("singular balance matrix".into()))?;

    for x in p.iter_mut() {
        if *x < 0.0 {
            if *x < -1e-10 {
                return Err(Error::SteadySolve(format!("negative population {x:e}")));
            }
            *x = 0.0;
        }
    }
    let total = p.sum();
    p /= total;
    Ok(p)
}

/// Dressed-basis populations and the corresponding free-basis density matrix.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub populations: DVector<f64>,
    pub rho_free: Operator,
}

pub fn steady_state(basis: &DressedBasis, rates: &RateSet) -> Result<SteadyState> {
    let populations = steady_populations(&pauli_generator(rates))?;
    let diag = Operator::from_diagonal(&populations.map(Complex64::from));
    let mut rho_free = basis.to_free(&diag);
    hilbert::hermitize(&mut rho_free);
    Ok(SteadyState {
        populations,
        rho_free,
    })
}

/// Dressed-frame dissipator Σ_{μjk} W^μ(k→j) D_{jk}[ρ] for a dressed-basis ρ.
fn dissipator(total: &DMatrix<f64>, rho: &Operator) -> Operator {
    let n = rho.nrows();
    let mut out = Operator::zeros(n, n);
    let mut loss = vec![0.0; n];
    for k in 0..n {
        let pk = rho[(k, k)];
        for j in 0..n {
            let w = total[(j, k)];
            if j == k || w == 0.0 {
                continue;
            }
            // P_k |j⟩⟨j|
            out[(j, j)] += pk * w;
            loss[k] += w;
        }
    }
    // −½ |k⟩⟨k| ρ − ½ ρ |k⟩⟨k|, summed over jumps out of k
    for a in 0..n {
        for b in 0..n {
            out[(a, b)] -= rho[(a, b)] * (0.5 * (loss[a] + loss[b]));
        }
    }
    out
}

/// Integrates the full dressed master equation from the free-basis state
/// `rho0` up to `t_final`, returning the free-basis state.
///
/// The unitary part is carried exactly by moving to the interaction picture
/// of H_S: every dissipator term commutes with the free evolution, so only
/// the dissipator is stepped numerically (adaptive Dormand–Prince, relative
/// tolerance 1e-10) and the phases e^{−iω_{jk}t} are applied at the end.
pub fn evolve_dme(
    rho0: &Operator,
    t_final: f64,
    basis: &DressedBasis,
    rates: &RateSet,
) -> Result<Operator> {
    evolve_dme_with(rho0, t_final, basis, rates, Tolerances::default())
}

pub fn evolve_dme_with(
    rho0: &Operator,
    t_final: f64,
    basis: &DressedBasis,
    rates: &RateSet,
    tol: Tolerances,
) -> Result<Operator> {
    let dim = basis.dim();
    if rho0.nrows() != dim || rho0.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rho0.nrows(),
        });
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::param("t_final", format!("must be finite and >= 0, got {t_final}")));
    }
    let total = rates.total();
    let rho_d = basis.to_dressed(rho0);
    let rho_t = ode::integrate(
        |_, rho| dissipator(&total, rho),
        rho_d,
        t_final,
        tol,
        hilbert::hermitize,
    )?;
    let energies = basis.energies();
    let rotated = Operator::from_fn(dim, dim, |a, b| {
        let phase = Complex64::new(0.0, -(energies[a] - energies[b]) * t_final).exp();
        rho_t[(a, b)] * phase
    });
    let mut rho = basis.to_free(&rotated);
    hilbert::hermitize(&mut rho);
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::SystemParams;

    fn working_basis(n: usize) -> DressedBasis {
        DressedBasis::from_params(&SystemParams::new(0.8, 1.5).with_fock_dim(n)).unwrap()
    }

    #[test]
    fn bose_values() {
        assert!((bose_occupancy(0.7 * 2f64.ln(), 0.7).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(bose_occupancy(3.0, 0.0).unwrap(), 0.0);
        // 1/(e^{0.2} − 1)
        assert!((bose_occupancy(1.0, 5.0).unwrap() - 4.516_655_566_126_994).abs() < 1e-12);
        assert_eq!(bose_occupancy(800.0, 1.0).unwrap(), 0.0);
        assert!(matches!(bose_occupancy(1e-12, 1.0), Err(Error::DegenerateFrequency(_))));
        assert!(bose_occupancy(1.0, -1.0).is_err());
    }

    #[test]
    fn zero_temperature_blocks_electronic_absorption() {
        let basis = working_basis(10);
        let rates = transition_rates(&basis, &BathParams::new(0.0, 5.0)).unwrap();
        let w = rates.rates(Coupling::Electronic);
        for j in 0..basis.dim() {
            for k in 0..basis.dim() {
                if rates.frequencies()[(j, k)] > 0.0 {
                    assert_eq!(w[(j, k)], 0.0);
                }
            }
        }
    }

    #[test]
    fn detailed_balance_per_bath() {
        let basis = working_basis(30);
        let baths = BathParams::new(0.5, 5.0);
        let rates = transition_rates(&basis, &baths).unwrap();
        let mut checked = 0;
        for c in Coupling::ALL {
            let w = rates.rates(c);
            let t = baths.temperature(c);
            for j in 0..basis.dim() {
                for k in 0..basis.dim() {
                    assert!(w[(j, k)] >= 0.0);
                    if w[(j, k)] > 1e-200 && w[(k, j)] > 1e-200 {
                        let ratio = w[(j, k)] / w[(k, j)];
                        let want = (-rates.frequencies()[(j, k)] / t).exp();
                        assert!((ratio / want - 1.0).abs() < 1e-10);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn generator_structure() {
        let basis = working_basis(12);
        let rates = transition_rates(&basis, &BathParams::new(0.5, 5.0)).unwrap();
        let g = pauli_generator(&rates);
        for k in 0..g.ncols() {
            assert!(g.column(k).sum().abs() < 1e-14);
            for j in 0..g.nrows() {
                if j != k {
                    assert!(g[(j, k)] >= 0.0);
                }
            }
        }
    }

    #[test]
    fn two_state_chain() {
        let (alpha, beta) = (0.3, 0.7);
        // W(1→2) = α, W(2→1) = β
        let g = DMatrix::from_row_slice(2, 2, &[-alpha, beta, alpha, -beta]);
        let p = steady_populations(&g).unwrap();
        assert!((p[0] - beta / (alpha + beta)).abs() < 1e-15);
        assert!((p[1] - alpha / (alpha + beta)).abs() < 1e-15);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = DMatrix::from_row_slice(
            4,
            4,
            &[
                -1.0, 1.0, 0.0, 0.0, //
                1.0, -1.0, 0.0, 0.0, //
                0.0, 0.0, -2.0, 1.0, //
                0.0, 0.0, 2.0, -1.0,
            ],
        );
        assert_eq!(steady_populations(&g), Err(Error::NonUniqueSteadyState(2)));
    }

    #[test]
    fn elimination_agrees_with_row_replacement() {
        let basis = working_basis(30);
        for (t_e, t_m) in [(0.5, 5.0), (0.0, 5.0), (5.0, 0.5), (2.0, 2.0)] {
            let rates = transition_rates(&basis, &BathParams::new(t_e, t_m)).unwrap();
            let g = pauli_generator(&rates);
            let a = steady_populations(&g).unwrap();
            let b = steady_populations_lu(&g).unwrap();
            assert!((&a - &b).amax() < 1e-13, "{t_e}, {t_m}");
        }
    }

    #[test]
    fn transient_states_are_allowed() {
        // 0 → 1 only; 1 is absorbing.
        let g = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 1.0, 0.0]);
        let p = steady_populations(&g).unwrap();
        assert_eq!(p.as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn steady_residual_is_tiny() {
        let basis = working_basis(30);
        let baths = BathParams::new(0.5, 5.0);
        let rates = transition_rates(&basis, &baths).unwrap();
        let g = pauli_generator(&rates);
        let p = steady_populations(&g).unwrap();
        let res = (&g * &p).amax();
        assert!(res <= 1e-12 * baths.gamma, "residual {res:e}");
        assert!((p.sum() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn equal_temperatures_give_gibbs() {
        let basis = working_basis(30);
        let t = 1.0;
        let rates = transition_rates(&basis, &BathParams::new(t, t)).unwrap();
        let p = steady_populations(&pauli_generator(&rates)).unwrap();
        let e0 = basis.energies()[0];
        let weights: Vec<f64> = basis.energies().iter().map(|e| (-(e - e0) / t).exp()).collect();
        let z: f64 = weights.iter().sum();
        for k in 0..basis.dim() / 2 {
            let want = weights[k] / z;
            assert!((p[k] / want - 1.0).abs() < 1e-8, "level {k}: {} vs {want}", p[k]);
        }
    }

    #[test]
    fn decoupled_baths_give_product_gibbs() {
        let n = 20;
        let (delta, t_e, t_m) = (0.8, 0.5, 2.0);
        let p = SystemParams::new(delta, 0.0).with_eta(0.0).with_fock_dim(n);
        let basis = DressedBasis::from_params(&p).unwrap();
        let rates = transition_rates(&basis, &BathParams::new(t_e, t_m)).unwrap();
        let steady = steady_state(&basis, &rates).unwrap();

        let pe = (-delta / t_e).exp() / (1.0 + (-delta / t_e).exp());
        let zm: f64 = (0..n).map(|k| (-(k as f64) / t_m).exp()).sum();
        for s in 0..2 {
            for m in 0..n {
                let idx = s * n + m;
                let electronic = if s == 1 { pe } else { 1.0 - pe };
                let want = electronic * (-(m as f64) / t_m).exp() / zm;
                let got = steady.rho_free[(idx, idx)].re;
                assert!((got - want).abs() < 1e-12, "{s},{m}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn steady_state_density_matrix_is_valid() {
        let basis = working_basis(30);
        let rates = transition_rates(&basis, &BathParams::new(0.5, 5.0)).unwrap();
        let s = steady_state(&basis, &rates).unwrap();
        assert!((s.rho_free.trace().re - 1.0).abs() < 1e-10);
        assert!(hilbert::hermiticity_error(&s.rho_free) < 1e-14);
        let eig = nalgebra::SymmetricEigen::new(s.rho_free.clone());
        assert!(eig.eigenvalues.min() >= -1e-10);
    }

    #[test]
    fn generator_is_linear_in_gamma() {
        let basis = working_basis(8);
        let g1 = pauli_generator(&transition_rates(&basis, &BathParams::new(0.5, 5.0).with_gamma(1e-3)).unwrap());
        let g2 = pauli_generator(&transition_rates(&basis, &BathParams::new(0.5, 5.0).with_gamma(1e-2)).unwrap());
        for (a, b) in g1.iter().zip(g2.iter()) {
            assert!((10.0 * a - b).abs() <= 1e-15 * b.abs().max(1e-300));
        }
    }

    #[test]
    fn steady_state_is_fixed_point_of_evolution() {
        let basis = working_basis(5);
        let baths = BathParams::new(0.5, 5.0);
        let rates = transition_rates(&basis, &baths).unwrap();
        let s = steady_state(&basis, &rates).unwrap();
        let rho = evolve_dme(&s.rho_free, 100.0 / baths.gamma, &basis, &rates).unwrap();
        let diff = (&rho - &s.rho_free).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-8, "drift {diff:e}");
    }

    #[test]
    fn evolution_preserves_trace() {
        let basis = working_basis(4);
        let baths = BathParams::new(0.5, 5.0);
        let rates = transition_rates(&basis, &baths).unwrap();
        let dim = basis.dim();
        // |ψ⟩ = equal superposition of all free states
        let psi = Operator::from_element(dim, 1, Complex64::from(1.0 / (dim as f64).sqrt()));
        let rho0 = &psi * psi.adjoint();
        for t in [0.0, 1.0, 37.5, 500.0, 5000.0] {
            let rho = evolve_dme(&rho0, t, &basis, &rates).unwrap();
            assert!((rho.trace() - Complex64::from(1.0)).norm() < 1e-9);
        }
        assert!(evolve_dme(&rho0, -1.0, &basis, &rates).is_err());
    }

    #[test]
    fn rejects_invalid_baths() {
        let basis = working_basis(3);
        assert!(transition_rates(&basis, &BathParams::new(-0.1, 1.0)).is_err());
        assert!(transition_rates(&basis, &BathParams::new(0.1, 1.0).with_gamma(0.0)).is_err());
    }
}
