use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AttributeSection, ClassSection, CptSection, ModelDocument, NaiveBayesModel, ZeroMode};
use crate::scalar::Scalar;

/// Random model with the given attribute cardinalities.
///
/// The prior and every CPT column are drawn uniformly from the probability
/// space: a single uniform draw per binary column, a flat Dirichlet draw for
/// wider ones. The result depends only on `seed`.
pub fn generate_random_document(cardinalities: &[usize], seed: u64) -> ModelDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prior: f64 = rng.sample(Open01);
    let attributes = cardinalities
        .iter()
        .enumerate()
        .map(|(i, &card)| {
            let given_c = random_column(&mut rng, card);
            let given_cbar = random_column(&mut rng, card);
            AttributeSection {
                name: format!("E{}", i + 1),
                values: (0..card).map(|v| format!("v{v}")).collect(),
                cpt: CptSection { given_c, given_cbar },
            }
        })
        .collect();
    ModelDocument {
        class: ClassSection {
            name: "C".into(),
            values: vec!["c".into(), "cbar".into()],
            prior,
        },
        attributes,
    }
}

fn random_column(rng: &mut ChaCha8Rng, card: usize) -> Vec<f64> {
    match card {
        1 => vec![1.0],
        2 => {
            let p: f64 = rng.sample(Open01);
            vec![p, 1.0 - p]
        }
        _ => {
            let draws: Vec<f64> = (0..card).map(|_| -rng.sample::<f64, _>(Open01).ln()).collect();
            let total: f64 = draws.iter().sum();
            draws.into_iter().map(|d| d / total).collect()
        }
    }
}

/// [`generate_random_document`] converted to log-odds.
pub fn generate_random_model<T: Scalar>(cardinalities: &[usize], seed: u64) -> NaiveBayesModel<T> {
    generate_random_document(cardinalities, seed)
        .to_model(ZeroMode::Clamp)
        .expect("generated documents are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Instance, Threshold};

    #[test]
    fn deterministic_under_seed() {
        let a: NaiveBayesModel<f64> = generate_random_model(&[2; 10], 7);
        let b: NaiveBayesModel<f64> = generate_random_model(&[2; 10], 7);
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_differ() {
        let differing = (0..100u64)
            .filter(|&s| {
                generate_random_model::<f64>(&[2; 10], s) != generate_random_model::<f64>(&[2; 10], s + 1000)
            })
            .count();
        assert!(differing >= 99);
    }

    #[test]
    fn empty_model_is_constant() {
        let m: NaiveBayesModel<f64> = generate_random_model(&[], 3);
        assert_eq!(m.num_attributes(), 0);
        let rho = Threshold::new(0.0).unwrap();
        let label = m.classify(rho, &Instance(vec![])).unwrap();
        assert_eq!(label, m.prior_log_odds() >= 0.0);
    }

    #[test]
    fn mixed_cardinalities_are_valid() {
        let doc = generate_random_document(&[1, 2, 3, 4], 11);
        doc.validate().unwrap();
        assert_eq!(doc.attributes[3].cpt.given_c.len(), 4);
    }
}
