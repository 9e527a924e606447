//! Nonequilibrium heat transport through a single laser-driven trapped ion.
//!
//! The ion's electronic two-level system and its motional mode are coupled
//! by a laser and attached to independent thermal baths. Dissipation is
//! described in the dressed (global) basis of the full system Hamiltonian,
//! which stays valid when the laser coupling is strong compared to the bath
//! rates.
//!
//! The pipeline for one parameter point is
//!
//! 1. [`hilbert::build_hamiltonian`] on the truncated 2N-dimensional space,
//! 2. [`dressed::diagonalize`] into energies, eigenvectors and coupling elements,
//! 3. [`dme::transition_rates`] and [`dme::steady_state`],
//! 4. [`observables`] (currents, coherence, Q, R),
//!
//! and [`sweep`] repeats it over the (δ, Ω) plane in parallel.
//!
//! ```
//! use ionheat::{observables, BathParams, SystemParams};
//!
//! let p = SystemParams::new(0.8, 1.5).with_fock_dim(12);
//! let s = observables::solve_point(&p, &BathParams::new(0.5, 5.0)).unwrap();
//! assert!(s.currents.motional > 0.0);
//! assert!(s.currents.imbalance().abs() < 1e-10 * s.gamma);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dme;
pub mod dressed;
mod error;
pub mod hilbert;
pub mod observables;
pub mod ode;
pub mod sweep;

pub use dme::{BathParams, RateSet, SteadyState};
pub use dressed::DressedBasis;
pub use error::{Error, Result};
pub use hilbert::{Coupling, Operator, SystemParams};
pub use observables::{CurrentPair, NdcResult, Rectification};
pub use sweep::{Grid2D, Observable, RidgePoint};
