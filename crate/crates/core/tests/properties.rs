use ionheat::cli::fmt_float;
use ionheat::hilbert::{self, Operator};
use ionheat::observables;
use ionheat::sweep::{self, Grid2D};
use ionheat::{BathParams, SystemParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn small_op(n: usize, seed: &[f64]) -> Operator {
    Operator::from_fn(n, n, |i, j| Complex64::new(seed[(i * n + j) % seed.len()], (i as f64) - (j as f64)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn tensor_index_is_s_times_n_plus_n(
        ne in 1usize..4,
        nm in 1usize..5,
        seed in prop::collection::vec(-2.0f64..2.0, 1..20),
    ) {
        let a = small_op(ne, &seed);
        let b = small_op(nm, &seed).map(|z| z * Complex64::new(0.3, -0.7) + 1.0);
        let t = hilbert::tensor(&a, &b);
        for s in 0..ne {
            for s2 in 0..ne {
                for m in 0..nm {
                    for m2 in 0..nm {
                        prop_assert_eq!(t[(s * nm + m, s2 * nm + m2)], a[(s, s2)] * b[(m, m2)]);
                    }
                }
            }
        }
    }

    #[test]
    fn rectification_factor_is_bounded(f in -10.0f64..10.0, b in -10.0f64..10.0) {
        prop_assume!(f != 0.0 || b != 0.0);
        let r = observables::rectification_factor(f, b).unwrap();
        prop_assert!(r.abs() <= 1.0);
    }

    #[test]
    fn floats_round_trip_through_csv(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn ridges_follow_grid_translation(
        values in prop::collection::vec(0.0f64..1.0, 36),
        shift in 1usize..4,
    ) {
        // a 6×6 patch embedded in a zero background at two offsets
        let embed = |off: usize| {
            let n = 12;
            let mut v = vec![0.0; n * n];
            for r in 0..6 {
                for c in 0..6 {
                    v[(r + off) * n + c + off] = values[r * 6 + c] + 1.0;
                }
            }
            let axis: Vec<f64> = (0..n).map(|k| 0.25 * k as f64 + 0.1).collect();
            Grid2D::from_values(axis.clone(), axis, v).unwrap()
        };
        let a = sweep::ridge_maxima(&embed(1), 1.0);
        let b = sweep::ridge_maxima(&embed(1 + shift), 1.0);
        let ka: Vec<_> = a.iter().map(|p| (p.row + shift, p.col + shift)).collect();
        let kb: Vec<_> = b.iter().map(|p| (p.row, p.col)).collect();
        prop_assert_eq!(ka, kb);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn steady_currents_balance(
        delta in -3.0f64..3.0,
        omega in 0.05f64..3.0,
        t_e in 0.0f64..4.0,
        t_m in 0.1f64..4.0,
    ) {
        let p = SystemParams::new(delta, omega).with_fock_dim(10);
        let baths = BathParams::new(t_e, t_m);
        let s = observables::solve_point(&p, &baths).unwrap();
        prop_assert!(s.currents.imbalance().abs() <= 1e-12 * baths.gamma);
        prop_assert!(s.coherence >= -1e-12);
    }

    #[test]
    fn current_per_gamma_is_gamma_independent(
        delta in 0.1f64..3.0,
        omega in 0.1f64..3.0,
        log_gamma in -6.0f64..-1.0,
    ) {
        let p = SystemParams::new(delta, omega).with_fock_dim(10);
        let j = |g: f64| {
            let baths = BathParams::new(0.5, 2.0).with_gamma(g);
            observables::solve_point(&p, &baths).unwrap().currents.steady() / g
        };
        let (a, b) = (j(1e-3), j(10f64.powf(log_gamma)));
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-300), "{} vs {}", a, b);
    }
}
