//! Adaptive Dormand–Prince 5(4) stepping for matrix-valued ODEs.

use crate::error::{Error, Result};
use crate::hilbert::Operator;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-10,
            atol: 1e-13,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// b − b* (fifth minus fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates dy/dt = f(t, y) from 0 to `t_final`.
///
/// `post_step` runs on every accepted state (e.g. to re-symmetrize).
pub fn integrate<F, P>(
    f: F,
    mut y: Operator,
    t_final: f64,
    tol: Tolerances,
    mut post_step: P,
) -> Result<Operator>
where
    F: Fn(f64, &Operator) -> Operator,
    P: FnMut(&mut Operator),
{
    if t_final <= 0.0 {
        return Ok(y);
    }
    let mut t = 0.0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&y, &k1, t_final, tol);
    let h_min = 1e-14 * t_final;

    while t < t_final {
        if t + h > t_final {
            h = t_final - t;
        }
        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h, &y_new);
        let err_vec = axpy(
            &Operator::zeros(y.nrows(), y.ncols()),
            h,
            &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
        );

        let mut err_sq = 0.0;
        for (e, (a, b)) in err_vec.iter().zip(y.iter().zip(y_new.iter())) {
            let sc = tol.atol + tol.rtol * a.norm().max(b.norm());
            err_sq += (e.norm() / sc).powi(2);
        }
        let err = (err_sq / err_vec.len() as f64).sqrt();

        if err <= 1.0 {
            t += h;
            if t_final - t < 1e-13 * t_final {
                t = t_final;
            }
            y = y_new;
            post_step(&mut y);
            k1 = f(t, &y);
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < h_min && t < t_final {
            return Err(Error::StepUnderflow(t));
        }
    }
    Ok(y)
}

/// y + h Σ c_i k_i
fn axpy(y: &Operator, h: f64, terms: &[(f64, &Operator)]) -> Operator {
    let mut out = y.clone();
    for &(c, k) in terms {
        let scale = c * h;
        for (o, v) in out.iter_mut().zip(k.iter()) {
            *o += v * scale;
        }
    }
    out
}

fn initial_step(y: &Operator, dy: &Operator, t_final: f64, tol: Tolerances) -> f64 {
    let scale = |m: &Operator| {
        let s: f64 = m
            .iter()
            .zip(y.iter())
            .map(|(v, y0)| (v.norm() / (tol.atol + tol.rtol * y0.norm())).powi(2))
            .sum();
        (s / m.len() as f64).sqrt()
    };
    let d0 = scale(y);
    let d1 = scale(dy);
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h.min(t_final)
}
