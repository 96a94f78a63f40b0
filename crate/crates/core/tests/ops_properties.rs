//! Diagram operations checked instance by instance.

mod common;

use common::{all_instances, central_rho, random_model, rng};
use nbodd::ops::{
    all_instances_satisfy, apply, complement, disagreement, equivalent, model_count, BoolOp, Connective,
    FeatureCondition, Literal,
};
use nbodd::model::instance_space;
use nbodd::{compile, Odd};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Two diagrams over the same attributes and order: the same model under
/// two nearby thresholds, so they usually differ on a few instances.
fn random_pair(r: &mut ChaCha8Rng) -> (Odd, Odd) {
    let n = r.gen_range(1..=8);
    let m = random_model(r, n, 2, 3);
    let order = common::random_order(r, n);
    let rho1 = central_rho(&m, r);
    let rho2 = if r.gen_bool(0.2) { rho1 } else { central_rho(&m, r) };
    (compile(&m, rho1, &order).unwrap().odd, compile(&m, rho2, &order).unwrap().odd)
}

fn instance_count(d: &Odd) -> u128 {
    let cards: Vec<usize> = d.attributes().iter().map(|a| a.cardinality()).collect();
    instance_space(&cards)
}

#[test]
fn apply_is_pointwise() {
    let mut r = rng(21);
    for _ in 0..50 {
        let (a, b) = random_pair(&mut r);
        for op in [BoolOp::And, BoolOp::Or, BoolOp::Xor] {
            let c = apply(&a, &b, op).unwrap();
            assert!(c.node_count() <= a.node_count() * b.node_count() + 2);
            for e in all_instances(&a) {
                assert_eq!(c.evaluate(&e), op.eval(a.evaluate(&e), b.evaluate(&e)));
            }
        }
    }
}

#[test]
fn equivalence_matches_xor_count() {
    let mut r = rng(22);
    let mut seen = [false; 2];
    for _ in 0..50 {
        let (a, b) = random_pair(&mut r);
        let eq = equivalent(&a, &b).unwrap();
        let xor = apply(&a, &b, BoolOp::Xor).unwrap();
        assert_eq!(eq, model_count(&xor).positive.is_zero());
        assert_eq!(eq, all_instances(&a).all(|e| a.evaluate(&e) == b.evaluate(&e)));
        assert_eq!(apply(&a, &a, BoolOp::Xor).unwrap().as_constant(), Some(false));
        seen[usize::from(eq)] = true;
    }
    assert_eq!(seen, [true, true]);
}

#[test]
fn counts_partition_the_instances() {
    let mut r = rng(23);
    for _ in 0..50 {
        let (a, _) = random_pair(&mut r);
        let c = model_count(&a);
        let brute = all_instances(&a).filter(|e| a.evaluate(e)).count();
        assert_eq!(c.positive, BigUint::from(brute));
        assert_eq!(c.total(), BigUint::from(instance_count(&a)));
    }
}

#[test]
fn disagreement_witnesses_verify() {
    let mut r = rng(24);
    for _ in 0..50 {
        let (a, b) = random_pair(&mut r);
        let d = disagreement(&a, &b, 5).unwrap();
        let brute: Vec<_> = all_instances(&a).filter(|e| a.evaluate(e) != b.evaluate(e)).collect();
        assert_eq!(d.count, BigUint::from(brute.len()));
        assert_eq!(d.witnesses.len(), brute.len().min(5));
        for e in &d.witnesses {
            assert_ne!(a.evaluate(e), b.evaluate(e));
        }
        let whole = complement(&a);
        assert_eq!(disagreement(&a, &whole, 0).unwrap().count, BigUint::from(instance_count(&a)));
    }
}

fn random_condition(r: &mut ChaCha8Rng, d: &Odd) -> FeatureCondition {
    let connective = if r.gen_bool(0.5) { Connective::Conjunction } else { Connective::Disjunction };
    let mut literals = Vec::new();
    for (i, a) in d.attributes().iter().enumerate() {
        if r.gen_bool(0.4) {
            literals.push(Literal { attribute: i, value: r.gen_range(0..a.cardinality()) });
            if connective == Connective::Disjunction && r.gen_bool(0.3) {
                literals.push(Literal { attribute: i, value: r.gen_range(0..a.cardinality()) });
            }
        }
    }
    FeatureCondition { connective, literals }
}

#[test]
fn feature_conditions_match_brute_force() {
    let mut r = rng(25);
    let mut outcomes = [0usize; 2];
    for _ in 0..300 {
        let (a, _) = random_pair(&mut r);
        let d = if r.gen_bool(0.5) { a.reduce() } else { a };
        let cond = random_condition(&mut r, &d);
        for polarity in [true, false] {
            let brute = all_instances(&d).filter(|e| d.evaluate(e) == polarity).all(|e| cond.holds(&e));
            assert_eq!(all_instances_satisfy(&d, polarity, &cond).unwrap(), brute, "{cond:?}");
            outcomes[usize::from(brute)] += 1;
        }
    }
    assert!(outcomes[0] > 0 && outcomes[1] > 0, "{outcomes:?}");
}
