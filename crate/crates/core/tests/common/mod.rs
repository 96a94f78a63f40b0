#![allow(dead_code)]

use nbodd::model::{generate_random_model, ModelDocument};
use nbodd::{Instance, Model64, Odd, Threshold64, ZeroMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PREGNANCY: &str = include_str!("../data/pregnancy.json");

pub fn pregnancy_document() -> ModelDocument {
    ModelDocument::from_json(PREGNANCY).unwrap()
}

pub fn pregnancy() -> Model64 {
    pregnancy_document().to_model(ZeroMode::Clamp).unwrap()
}

/// `log(.9 / .1)`.
pub fn pregnancy_rho() -> Threshold64 {
    Threshold64::from_probability(0.9).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random model with `n` attributes of cardinality `lo..=hi`.
pub fn random_model(rng: &mut ChaCha8Rng, n: usize, lo: usize, hi: usize) -> Model64 {
    let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    generate_random_model(&cards, rng.gen())
}

pub fn random_order(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

/// A threshold near the middle of the model's log-odds range, so both
/// classes usually occur.
pub fn central_rho(model: &Model64, rng: &mut ChaCha8Rng) -> Threshold64 {
    let lo: f64 = model.prior_log_odds()
        + model
            .weights()
            .iter()
            .map(|r| r.iter().copied().fold(f64::INFINITY, f64::min))
            .sum::<f64>();
    let hi: f64 = model.prior_log_odds()
        + model
            .weights()
            .iter()
            .map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .sum::<f64>();
    let t: f64 = rng.gen_range(0.3..0.7);
    Threshold64::new(lo + t * (hi - lo)).unwrap()
}

/// Every instance of `d`'s attribute layout.
pub fn all_instances(d: &Odd) -> impl Iterator<Item = Instance> {
    let cards: Vec<usize> = d.attributes().iter().map(|a| a.cardinality()).collect();
    Instance::all(&cards)
}
