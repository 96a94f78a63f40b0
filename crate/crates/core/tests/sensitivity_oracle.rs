//! Interval extraction and classifier counts against enumeration.

mod common;

use common::{central_rho, random_model, random_order, rng};
use nbodd::ops::{disagreement, equivalent};
use nbodd::oracle::{enumerate, oracle_equivalent};
use nbodd::sensitivity::{
    count_prior_classifiers, prior_interval_from_odd, sweep_distinct_classifiers, weight_intervals_for, SweepMode,
};
use nbodd::{compile, Interval64, Model64, Threshold64};
use num_bigint::BigUint;
use rand::Rng;

fn assert_close(a: &Interval64, b: &Interval64, tol: f64) {
    for (x, y) in [(a.lo(), b.lo()), (a.hi(), b.hi())] {
        assert!(x == y || (x - y).abs() <= tol, "{a} vs {b}");
    }
}

#[test]
fn prior_interval_matches_margins() {
    let mut r = rng(31);
    for _ in 0..20 {
        let m = random_model(&mut r, 8, 2, 2);
        let rho = central_rho(&m, &mut r);
        let result = compile(&m, rho, &random_order(&mut r, 8)).unwrap();
        let margins = enumerate(&m, rho).unwrap().margins;
        assert_close(
            &prior_interval_from_odd(&result),
            &margins.prior_interval(m.prior_log_odds(), rho.rho()),
            1e-9,
        );
    }
}

#[test]
fn weight_intervals_match_margins() {
    let mut r = rng(32);
    for _ in 0..10 {
        let m = random_model(&mut r, 8, 2, 3);
        let rho = central_rho(&m, &mut r);
        let margins = enumerate(&m, rho).unwrap().margins;
        for a in 0..8 {
            let intervals = weight_intervals_for(&m, rho, a).unwrap();
            for (v, i) in intervals.iter().enumerate() {
                assert_close(i, &margins.weight_interval(&m, rho.rho(), a, v), 1e-9);
                assert!(i.contains(m.weight(a, v)).unwrap());
            }
        }
    }
}

/// Integer weights keep every sum exact, so both routes agree exactly.
#[test]
fn integer_weights_match_exactly() {
    let mut r = rng(33);
    for _ in 0..20 {
        let n = r.gen_range(1..=7);
        let weights: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..r.gen_range(2..=3)).map(|_| r.gen_range(-6..=6) as f64).collect())
            .collect();
        let m = Model64::from_weights(r.gen_range(-3..=3) as f64, weights).unwrap();
        let rho = Threshold64::new(r.gen_range(-2..=2) as f64 + 0.5).unwrap();
        let margins = enumerate(&m, rho).unwrap().margins;
        let order = random_order(&mut r, n);
        let result = compile(&m, rho, &order).unwrap();
        assert_eq!(result.root_interval, margins.prior_interval(m.prior_log_odds(), rho.rho()));
        for a in 0..n {
            for (v, i) in weight_intervals_for(&m, rho, a).unwrap().iter().enumerate() {
                assert_eq!(*i, margins.weight_interval(&m, rho.rho(), a, v));
            }
        }
    }
}

#[test]
fn prior_interval_is_order_independent() {
    let mut r = rng(34);
    for _ in 0..10 {
        let n = r.gen_range(1..=9);
        let m = random_model(&mut r, n, 2, 3);
        let rho = central_rho(&m, &mut r);
        let reference = compile(&m, rho, &(0..n).collect::<Vec<_>>()).unwrap().root_interval;
        for _ in 0..10 {
            let other = compile(&m, rho, &random_order(&mut r, n)).unwrap().root_interval;
            assert_close(&reference, &other, 1e-12);
        }
    }
}

#[test]
fn perturbed_priors() {
    let mut r = rng(35);
    for _ in 0..20 {
        let n = r.gen_range(1..=10);
        let m = random_model(&mut r, n, 2, 2);
        let rho = central_rho(&m, &mut r);
        let order = random_order(&mut r, n);
        let base = compile(&m, rho, &order).unwrap();
        let i = base.root_interval;
        let at = |x: f64| compile(&m.with_prior(x), rho, &order).unwrap().odd;
        for _ in 0..5 {
            let lo = i.lo().max(i.hi() - 20.0);
            let hi = i.hi().min(i.lo() + 20.0);
            let x = r.gen_range(lo..hi);
            assert!(equivalent(&base.odd, &at(x)).unwrap());
            assert!(oracle_equivalent(&m, &m.with_prior(x), rho).unwrap());
        }
        let mut outside = Vec::new();
        if i.lo().is_finite() {
            outside.extend([i.lo() - 1e-6, i.lo() - 1.0]);
        }
        if i.hi().is_finite() {
            outside.extend([i.hi() + 1e-6, i.hi() + 1.0]);
        }
        for x in outside {
            let d = disagreement(&base.odd, &at(x), 3).unwrap();
            assert!(d.count >= BigUint::from(1u32), "prior {x} outside {i}");
            for e in &d.witnesses {
                assert_ne!(m.classify(rho, e).unwrap(), m.with_prior(x).classify(rho, e).unwrap());
            }
        }
    }
}

#[test]
fn prior_sweep_against_bound() {
    let mut r = rng(36);
    for _ in 0..20 {
        let n = r.gen_range(0..=8);
        let m = random_model(&mut r, n, 2, 3);
        let bound = count_prior_classifiers(&m.cardinalities());
        let swept = sweep_distinct_classifiers(&m, SweepMode::Prior).unwrap();
        assert!(swept <= bound);
        // Random real weights give distinct sums with probability one.
        assert_eq!(swept, bound);
    }
    let collide = Model64::from_weights(0.0, vec![vec![1.0, -1.0]; 4]).unwrap();
    assert!(sweep_distinct_classifiers(&collide, SweepMode::Prior).unwrap() < count_prior_classifiers(&[2; 4]));
}
