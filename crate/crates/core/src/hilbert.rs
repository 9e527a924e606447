//! Operators on the truncated electronic ⊗ motional Hilbert space.
//!
//! The composite basis index of `|s, n⟩` is `s·N + n`, with `s = 0` for the
//! ground state `|g⟩`, `s = 1` for the excited state `|e⟩` and `n < N` the
//! phonon number. Energies are in units where ħ = k_B = 1.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex square matrix.
pub type Operator = DMatrix<Complex64>;

pub const DEFAULT_ETA: f64 = 0.05;
pub const DEFAULT_FOCK_DIM: usize = 30;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Physical parameters of the laser-driven ion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Trap frequency ν.
    pub nu: f64,
    /// Detuning δ = ω₀ − ω_L.
    pub delta: f64,
    /// Laser coupling strength Ω.
    pub omega: f64,
    /// Lamb-Dicke parameter η.
    pub eta: f64,
    /// Fock-space truncation N of the motional mode.
    pub fock_dim: usize,
}

impl SystemParams {
    /// ν = 1 with the default Lamb-Dicke parameter and truncation.
    pub fn new(delta: f64, omega: f64) -> Self {
        SystemParams {
            nu: 1.0,
            delta,
            omega,
            eta: DEFAULT_ETA,
            fock_dim: DEFAULT_FOCK_DIM,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_fock_dim(mut self, fock_dim: usize) -> Self {
        self.fock_dim = fock_dim;
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    /// Composite dimension 2N.
    pub fn dim(&self) -> usize {
        2 * self.fock_dim
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return Err(Error::param("nu", format!("must be positive, got {}", self.nu)));
        }
        if !self.delta.is_finite() {
            return Err(Error::param("delta", "must be finite"));
        }
        if !self.omega.is_finite() {
            return Err(Error::param("omega", "must be finite"));
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::param("eta", format!("must be >= 0, got {}", self.eta)));
        }
        check_fock_dim(self.fock_dim)
    }
}

fn check_fock_dim(fock_dim: usize) -> Result<()> {
    if fock_dim < 2 {
        return Err(Error::param(
            "fock_dim",
            format!("must be >= 2, got {fock_dim}"),
        ));
    }
    Ok(())
}

/// Which reservoir a coupling operator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coupling {
    /// A_E = σ_x ⊗ I.
    Electronic,
    /// A_M = I ⊗ (a + a†).
    Motional,
}

impl Coupling {
    pub const ALL: [Coupling; 2] = [Coupling::Electronic, Coupling::Motional];
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coupling::Electronic => "electronic",
            Coupling::Motional => "motional",
        })
    }
}

impl FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "electronic" | "e" => Ok(Coupling::Electronic),
            "motional" | "m" => Ok(Coupling::Motional),
            other => Err(Error::UnknownCoupling(other.to_string())),
        }
    }
}

/// Truncated ladder operator with ⟨n−1|a|n⟩ = √n.
pub fn annihilation_op(fock_dim: usize) -> Result<Operator> {
    check_fock_dim(fock_dim)?;
    Ok(Operator::from_fn(fock_dim, fock_dim, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    }))
}

pub fn number_op(fock_dim: usize) -> Result<Operator> {
    check_fock_dim(fock_dim)?;
    Ok(Operator::from_fn(fock_dim, fock_dim, |r, c| {
        if r == c {
            Complex64::new(r as f64, 0.0)
        } else {
            ZERO
        }
    }))
}

/// D(α) = exp(α a† − α* a) on the truncated space.
///
/// The generator is anti-Hermitian, so it is exponentiated through the
/// eigendecomposition of the Hermitian matrix K = i(α a† − α* a), giving
/// D = V exp(−iΛ) V†, which is unitary to machine precision.
pub fn displacement_op(alpha: Complex64, fock_dim: usize) -> Result<Operator> {
    let a = annihilation_op(fock_dim)?;
    if alpha == ZERO {
        return Ok(Operator::identity(fock_dim, fock_dim));
    }
    let generator = a.adjoint() * alpha - &a * alpha.conj();
    let mut k = generator * Complex64::i();
    hermitize(&mut k);
    let eig = SymmetricEigen::new(k);
    let phases = Operator::from_diagonal(
        &eig.eigenvalues
            .map(|lambda| Complex64::new(0.0, -lambda).exp()),
    );
    let v = &eig.eigenvectors;
    Ok(v * phases * v.adjoint())
}

/// Electronic 2×2 operators in the basis (|g⟩, |e⟩).
pub fn sigma_z() -> Operator {
    Operator::from_diagonal(&nalgebra::DVector::from_vec(vec![-ONE, ONE]))
}

pub fn sigma_plus() -> Operator {
    // |e⟩⟨g|
    Operator::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO])
}

pub fn sigma_minus() -> Operator {
    Operator::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

pub fn sigma_x() -> Operator {
    Operator::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

/// Electronic ⊗ motional tensor product in the electronic-major ordering.
pub fn tensor(electronic: &Operator, motional: &Operator) -> Operator {
    electronic.kronecker(motional)
}

/// H = ν a†a + (δ/2) σ_z + (Ω/2)[σ₊ D(iη) + σ₋ D†(iη)].
pub fn build_hamiltonian(p: &SystemParams) -> Result<Operator> {
    p.validate()?;
    let n = p.fock_dim;
    let id_m = Operator::identity(n, n);
    let id_e = Operator::identity(2, 2);
    let disp = displacement_op(Complex64::new(0.0, p.eta), n)?;

    let mut h = tensor(&id_e, &number_op(n)?) * Complex64::from(p.nu);
    h += tensor(&sigma_z(), &id_m) * Complex64::from(0.5 * p.delta);
    let drive = tensor(&sigma_plus(), &disp) + tensor(&sigma_minus(), &disp.adjoint());
    h += drive * Complex64::from(0.5 * p.omega);
    hermitize(&mut h);
    Ok(h)
}

/// System side of the system–bath interaction for the given reservoir.
pub fn coupling_op(coupling: Coupling, fock_dim: usize) -> Result<Operator> {
    check_fock_dim(fock_dim)?;
    Ok(match coupling {
        Coupling::Electronic => tensor(&sigma_x(), &Operator::identity(fock_dim, fock_dim)),
        Coupling::Motional => {
            let a = annihilation_op(fock_dim)?;
            let x = &a + a.adjoint();
            tensor(&Operator::identity(2, 2), &x)
        }
    })
}

/// Largest entrywise |M − M†|, scaled by max(1, max|M_ij|).
pub fn hermiticity_error(m: &Operator) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let mut worst = 0.0_f64;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst / scale
}

/// Largest entrywise |U†U − I|.
pub fn unitarity_error(u: &Operator) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    (prod - Operator::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Replaces M with (M + M†)/2.
pub(crate) fn hermitize(m: &mut Operator) {
    let n = m.nrows();
    for r in 0..n {
        m[(r, r)].im = 0.0;
        for c in (r + 1)..n {
            let avg = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            m[(r, c)] = avg;
            m[(c, r)] = avg.conj();
        }
    }
}
