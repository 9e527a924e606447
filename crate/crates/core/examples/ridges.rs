//! Parallel (δ, Ω) sweep of |J_SS| and its ridge maxima, compared with the
//! resonance circles δ² + Ω² = (mν)².
//!
//!     cargo run --release --example ridges -- 4     # worker threads

use ionheat::sweep::{self, Observable};
use ionheat::{BathParams, SystemParams};

fn main() -> ionheat::Result<()> {
    let workers = std::env::args().nth(1).and_then(|w| w.parse().ok()).unwrap_or(0);
    let template = SystemParams::new(0.0, 0.0).with_fock_dim(16);
    let baths = BathParams::new(0.5, 5.0);
    let axis = sweep::uniform_axis(0.0, 2.4, 0.05)?;

    let grid = sweep::sweep_grid(&template, &baths, &axis, &axis, Observable::Current, workers)?;
    println!("{} x {} cells, {} flagged", grid.rows(), grid.cols(), grid.flagged_count());

    let ridges = sweep::ridge_maxima(&grid, template.nu);
    println!("{:>6} {:>6} {:>12} {:>3} {:>9}", "delta", "omega", "|J|/gamma", "m", "distance");
    for r in &ridges {
        println!(
            "{:>6.2} {:>6.2} {:>12.5e} {:>3} {:>9.4}",
            r.delta, r.omega, r.value, r.circle, r.circle_distance
        );
    }
    Ok(())
}
