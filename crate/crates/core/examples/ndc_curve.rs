//! Negative differential thermal conductance: J_SS versus T_E at fixed T_M.

use ionheat::observables::{self, DEFAULT_NDC_POINTS};
use ionheat::{dme::DEFAULT_GAMMA, SystemParams};

fn main() -> ionheat::Result<()> {
    let p = SystemParams::new(0.8, 1.5);
    let t_m = 5.0;
    let grid = observables::uniform_temperatures(t_m, DEFAULT_NDC_POINTS);
    let r = observables::ndc_scan(&p, t_m, DEFAULT_GAMMA, &grid)?;

    for (t_e, j) in r.curve.iter().step_by(10) {
        let bar = "#".repeat((j.abs() / DEFAULT_GAMMA * 2000.0) as usize);
        println!("T_E = {t_e:4.2}  J/gamma = {:+.5e}  {bar}", j / DEFAULT_GAMMA);
    }
    println!("Q = {:.4} (maximum |J| at T_E = {:.2})", r.q, r.argmax_t_e);
    Ok(())
}
