//! A model learned from the tic-tac-toe endgame data.

use nbodd::model::{learn_from_csv, LearnOptions};
use nbodd::oracle::enumerate;
use nbodd::{compile_default, size_bound, Instance, Model64, Threshold64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DATA: &[u8] = include_bytes!("data/tic-tac-toe.csv");

fn model() -> Model64 {
    learn_from_csv(DATA, &LearnOptions::new("class").positive_class("positive")).unwrap()
}

#[test]
fn learned_shape() {
    let m = model();
    assert_eq!(m.num_attributes(), 9);
    assert_eq!(m.cardinalities(), vec![3; 9]);
    assert_eq!(m.class_values()[0], "positive");
    assert_eq!(size_bound(&m.cardinalities(), &(0..9).collect::<Vec<_>>()), 247);
}

#[test]
fn compiles_within_bound_and_matches_oracle() {
    let m = model();
    let rho = Threshold64::new(0.0).unwrap();
    let result = compile_default(&m, rho).unwrap();
    assert!(result.odd.node_count() as u128 <= size_bound(&m.cardinalities(), &result.order));
    let oracle = enumerate(&m, rho).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let e = Instance((0..9).map(|_| r.gen_range(0..3)).collect());
        assert_eq!(result.odd.evaluate(&e), oracle.label(&e));
    }
}
