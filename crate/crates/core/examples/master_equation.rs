//! Time evolution under the full dressed master equation, relaxing from the
//! free ground state towards the Pauli steady state.

use ionheat::dme::{self, BathParams};
use ionheat::{DressedBasis, Operator, SystemParams};
use num_complex::Complex64;

fn trace_distance(a: &Operator, b: &Operator) -> f64 {
    let d = a - b;
    0.5 * nalgebra::SymmetricEigen::new(d).eigenvalues.iter().map(|x| x.abs()).sum::<f64>()
}

fn main() -> ionheat::Result<()> {
    let p = SystemParams::new(0.8, 1.5).with_fock_dim(8);
    let basis = DressedBasis::from_params(&p)?;
    let baths = BathParams::new(0.5, 1.5).with_gamma(0.05);
    let rates = dme::transition_rates(&basis, &baths)?;
    let steady = dme::steady_state(&basis, &rates)?;

    let mut rho = Operator::zeros(p.dim(), p.dim());
    rho[(0, 0)] = Complex64::from(1.0);
    let mut t = 0.0;
    println!("{:>8} {:>14}", "t", "D(rho, rho_ss)");
    for dt in [0.0, 10.0, 30.0, 100.0, 300.0, 1000.0] {
        rho = dme::evolve_dme(&rho, dt, &basis, &rates)?;
        t += dt;
        println!("{t:>8.1} {:>14.3e}", trace_distance(&rho, &steady.rho_free));
    }
    Ok(())
}
