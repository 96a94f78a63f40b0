//! Attribute orders for compilation.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::NaiveBayesModel;
use crate::odd::OddError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingHeuristic {
    Random(u64),
    /// Largest evidential impact first.
    Descending,
    /// Smallest evidential impact first.
    Ascending,
    /// Attribute indices, level by level.
    Explicit(Vec<usize>),
}

impl FromStr for OrderingHeuristic {
    type Err = String;

    /// `random:<seed> | desc | asc | explicit:<i,j,…>`
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "desc" => return Ok(Self::Descending),
            "asc" => return Ok(Self::Ascending),
            _ => {}
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return seed
                .parse()
                .map(Self::Random)
                .map_err(|_| format!("bad random seed '{seed}'"));
        }
        if let Some(list) = s.strip_prefix("explicit:") {
            return list
                .split(',')
                .map(|i| i.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map(Self::Explicit)
                .map_err(|_| format!("bad attribute list '{list}'"));
        }
        Err(format!(
            "unknown order '{s}' (expected random:<seed>, desc, asc or explicit:<list>)"
        ))
    }
}

impl fmt::Display for OrderingHeuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Random(seed) => write!(f, "random:{seed}"),
            Self::Descending => f.write_str("desc"),
            Self::Ascending => f.write_str("asc"),
            Self::Explicit(order) => {
                let items: Vec<String> = order.iter().map(ToString::to_string).collect();
                write!(f, "explicit:{}", items.join(","))
            }
        }
    }
}

/// Spread of an attribute's weights of evidence: `max_e w_e - min_e w_e`.
/// For a binary attribute this is `|w_e - w_ē|`.
pub fn evidential_impact<T: Scalar>(model: &NaiveBayesModel<T>, attribute: usize) -> T {
    let row = &model.weights()[attribute];
    let max = row.iter().copied().fold(T::neg_infinity(), T::max);
    let min = row.iter().copied().fold(T::infinity(), T::min);
    if row.len() < 2 || max == min {
        T::zero()
    } else {
        max - min
    }
}

/// Attribute order chosen by `heuristic`. Impact sorts are stable, so ties
/// keep attribute-index order.
pub fn make_order<T: Scalar>(
    model: &NaiveBayesModel<T>,
    heuristic: &OrderingHeuristic,
) -> Result<Vec<usize>, OddError> {
    let n = model.num_attributes();
    let mut order: Vec<usize> = (0..n).collect();
    match heuristic {
        OrderingHeuristic::Random(seed) => {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
        }
        OrderingHeuristic::Descending | OrderingHeuristic::Ascending => {
            let impacts: Vec<T> = (0..n).map(|i| evidential_impact(model, i)).collect();
            order.sort_by(|&a, &b| {
                let ord = impacts[a]
                    .partial_cmp(&impacts[b])
                    .unwrap_or(std::cmp::Ordering::Equal);
                if *heuristic == OrderingHeuristic::Descending {
                    ord.reverse()
                } else {
                    ord
                }
            });
        }
        OrderingHeuristic::Explicit(explicit) => {
            let mut seen = vec![false; n];
            if explicit.len() != n || explicit.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
                return Err(OddError::BadOrder(n));
            }
            order.clone_from(explicit);
        }
    }
    Ok(order)
}
