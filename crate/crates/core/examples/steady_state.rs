//! Steady-state heat currents and coherence at a single working point.

use ionheat::{observables, BathParams, SystemParams};

fn main() -> ionheat::Result<()> {
    let p = SystemParams::new(0.8, 1.5);
    let baths = BathParams::new(0.5, 5.0);
    let s = observables::solve_point(&p, &baths)?;

    let j = s.currents.scaled(s.gamma);
    println!("J_E / gamma = {:+.6e}", j.electronic);
    println!("J_M / gamma = {:+.6e}", j.motional);
    println!("imbalance   = {:.1e}", j.imbalance());
    println!("coherence   = {:.6} nats", s.coherence);

    let top: Vec<_> = {
        let mut v: Vec<(usize, f64)> = s.state.populations.iter().copied().enumerate().collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1));
        v.into_iter().take(5).collect()
    };
    println!("most populated dressed levels:");
    for (k, pk) in top {
        println!("  {k:>3}  {pk:.6}");
    }
    Ok(())
}
