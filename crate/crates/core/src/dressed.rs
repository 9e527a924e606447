//! Dressed (eigen)basis of the system Hamiltonian and the coupling-operator
//! matrix elements between dressed states.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{self, Coupling, Operator, SystemParams};

/// Two levels closer than this (in energy units, ν = 1) count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenbasis of H_S together with ⟨j|A_μ|k⟩ for both reservoirs.
#[derive(Debug, Clone)]
pub struct DressedBasis {
    energies: DVector<f64>,
    transform: Operator,
    electronic: Operator,
    motional: Operator,
}

impl DressedBasis {
    /// Builds and diagonalizes H_S for the given parameters.
    pub fn from_params(p: &SystemParams) -> Result<Self> {
        diagonalize(&hilbert::build_hamiltonian(p)?)
    }

    /// Eigenvalues E_k in ascending order.
    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    /// Unitary whose k-th column is |k⟩ in the free basis.
    pub fn transform(&self) -> &Operator {
        &self.transform
    }

    /// m_{jk} = ⟨j|A_μ|k⟩.
    pub fn elements(&self, coupling: Coupling) -> &Operator {
        match coupling {
            Coupling::Electronic => &self.electronic,
            Coupling::Motional => &self.motional,
        }
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// ω_{jk} = E_j − E_k.
    pub fn frequency(&self, j: usize, k: usize) -> f64 {
        self.energies[j] - self.energies[k]
    }

    /// Rotates a free-basis operator into the dressed basis, U† X U.
    pub fn to_dressed(&self, op: &Operator) -> Operator {
        self.transform.adjoint() * op * &self.transform
    }

    /// Rotates a dressed-basis operator back into the free basis, U X U†.
    pub fn to_free(&self, op: &Operator) -> Operator {
        &self.transform * op * self.transform.adjoint()
    }
}

/// Spectral decomposition of a Hermitian Hamiltonian on the 2N-dimensional
/// composite space.
///
/// Energies are sorted ascending. Each eigenvector is rotated so that its
/// largest-magnitude component is real and positive; among components of
/// equal magnitude the lowest free-basis index wins.
pub fn diagonalize(h: &Operator) -> Result<DressedBasis> {
    let dim = h.nrows();
    if h.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: h.ncols(),
        });
    }
    if dim < 4 || !dim.is_multiple_of(2) {
        return Err(Error::param(
            "hamiltonian",
            format!("dimension must be 2N with N >= 2, got {dim}"),
        ));
    }
    let herm = hilbert::hermiticity_error(h);
    if herm > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let mut sym = h.clone();
    hilbert::hermitize(&mut sym);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });

    let energies = DVector::from_iterator(dim, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut transform = Operator::zeros(dim, dim);
    for (col, &src) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(src).clone_owned();
        fix_phase(v.as_mut_slice());
        transform.set_column(col, &v);
    }

    let fock_dim = dim / 2;
    let mut basis = DressedBasis {
        energies,
        transform,
        electronic: Operator::zeros(0, 0),
        motional: Operator::zeros(0, 0),
    };
    basis.electronic = transition_elements(&basis, &hilbert::coupling_op(Coupling::Electronic, fock_dim)?)?;
    basis.motional = transition_elements(&basis, &hilbert::coupling_op(Coupling::Motional, fock_dim)?)?;
    Ok(basis)
}

fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .unwrap_or(0);
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[pivot].im = 0.0;
}

/// Matrix elements m_{jk} = ⟨j|A|k⟩ of a free-basis operator.
pub fn transition_elements(basis: &DressedBasis, a: &Operator) -> Result<Operator> {
    let dim = basis.dim();
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: a.nrows().max(a.ncols()),
        });
    }
    let mut m = basis.to_dressed(a);
    if hilbert::hermiticity_error(a) < 1e-12 {
        hilbert::hermitize(&mut m);
    }
    Ok(m)
}

/// |m_{jk}|² as a real matrix.
pub fn squared_elements(m: &Operator) -> DMatrix<f64> {
    m.map(|z| z.norm_sqr())
}
