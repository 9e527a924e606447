//! Dressed spectrum and coupling elements of the laser-driven ion.
//!
//!     cargo run --example spectrum -- 0.8 1.5

use ionheat::{Coupling, DressedBasis, SystemParams};

fn main() -> ionheat::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (delta, omega) = (args.first().copied().unwrap_or(0.8), args.get(1).copied().unwrap_or(1.5));
    let p = SystemParams::new(delta, omega);
    let basis = DressedBasis::from_params(&p)?;

    println!("delta = {delta}, omega = {omega}, eta = {}, N = {}", p.eta, p.fock_dim);
    println!("{:>3} {:>14} {:>14} {:>14}", "k", "E_k", "|<k+1|A_E|k>|", "|<k+1|A_M|k>|");
    let e = basis.elements(Coupling::Electronic);
    let m = basis.elements(Coupling::Motional);
    for k in 0..10 {
        println!(
            "{k:>3} {:>14.8} {:>14.6} {:>14.6}",
            basis.energies()[k],
            e[(k + 1, k)].norm(),
            m[(k + 1, k)].norm()
        );
    }
    Ok(())
}
