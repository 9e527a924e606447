//! Thermal rectification along a cut through the first resonance circle.

use ionheat::observables;
use ionheat::{dme::DEFAULT_GAMMA, DressedBasis, SystemParams};

fn main() -> ionheat::Result<()> {
    let (t_c, t_h) = (0.5, 5.0);
    let angle = 0.6_f64;
    println!("{:>6} {:>13} {:>13} {:>8}", "r", "J_fwd/gamma", "J_bwd/gamma", "R");
    for i in 0..=12 {
        let r = 0.7 + 0.05 * i as f64;
        let p = SystemParams::new(r * angle.cos(), r * angle.sin());
        let basis = DressedBasis::from_params(&p)?;
        let x = observables::rectification_with_basis(&basis, t_c, t_h, DEFAULT_GAMMA)?;
        println!(
            "{r:>6.2} {:>13.5e} {:>13.5e} {:>8.4}",
            x.forward / DEFAULT_GAMMA,
            x.backward / DEFAULT_GAMMA,
            x.factor
        );
    }
    Ok(())
}
