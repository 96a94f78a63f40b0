//! Node counts of compiled random binary models under each ordering
//! heuristic.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::compile::{compile, size_bound, CompileError};
use crate::model::{generate_random_model, instance_space, NaiveBayesModel, Threshold};
use crate::ordering::{make_order, OrderingHeuristic};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error("n = {n}, trial {trial}: {heuristic} order gave {nodes} nodes, above the bound {bound}")]
    BoundExceeded {
        n: usize,
        trial: usize,
        heuristic: String,
        nodes: usize,
        bound: u128,
    },
}

/// SplitMix64 finalizer, used to derive independent per-trial seeds.
pub fn mix_seed(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at size `n`: the model uses it directly, the random
/// order uses its successor under [`mix_seed`].
pub fn trial_seed(master: u64, n: usize, trial: usize) -> u64 {
    mix_seed(mix_seed(master ^ mix_seed(n as u64)) ^ trial as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialNodes {
    pub random: usize,
    pub descending: usize,
    pub ascending: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub instances: u128,
    pub bound: u128,
    pub trials: usize,
    pub seed: u64,
    pub mean_random: f64,
    pub mean_descending: f64,
    pub mean_ascending: f64,
    pub nodes: Vec<TrialNodes>,
    pub seconds: f64,
}

fn run_trial(n: usize, trial: usize, seed: u64, rho: Threshold<f64>) -> Result<TrialNodes, BenchError> {
    let s = trial_seed(seed, n, trial);
    let model: NaiveBayesModel<f64> = generate_random_model(&vec![2; n], s);
    let bound = size_bound(&model.cardinalities(), &(0..n).collect::<Vec<_>>());
    let nodes_for = |h: OrderingHeuristic| -> Result<usize, BenchError> {
        let order = make_order(&model, &h).map_err(CompileError::Order)?;
        let nodes = compile(&model, rho, &order)?.odd.node_count();
        if nodes as u128 > bound {
            return Err(BenchError::BoundExceeded {
                n,
                trial,
                heuristic: h.to_string(),
                nodes,
                bound,
            });
        }
        Ok(nodes)
    };
    Ok(TrialNodes {
        random: nodes_for(OrderingHeuristic::Random(mix_seed(s)))?,
        descending: nodes_for(OrderingHeuristic::Descending)?,
        ascending: nodes_for(OrderingHeuristic::Ascending)?,
    })
}

/// Compiles `trials` random binary models for each `n` under a random,
/// descending-impact and ascending-impact order. Trials run in parallel;
/// results depend only on the arguments.
pub fn run_bench(ns: &[usize], trials: usize, seed: u64, rho: Threshold<f64>) -> Result<Vec<BenchRecord>, BenchError> {
    ns.iter()
        .map(|&n| {
            let started = Instant::now();
            let nodes = (0..trials)
                .into_par_iter()
                .map(|t| run_trial(n, t, seed, rho))
                .collect::<Result<Vec<_>, _>>()?;
            let mean = |f: fn(&TrialNodes) -> usize| {
                if trials == 0 {
                    0.0
                } else {
                    nodes.iter().map(f).sum::<usize>() as f64 / trials as f64
                }
            };
            let cards = vec![2; n];
            Ok(BenchRecord {
                n,
                instances: instance_space(&cards),
                bound: size_bound(&cards, &(0..n).collect::<Vec<_>>()),
                trials,
                seed,
                mean_random: mean(|t| t.random),
                mean_descending: mean(|t| t.descending),
                mean_ascending: mean(|t| t.ascending),
                nodes,
                seconds: started.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

/// Table with columns `n ||E|| Bound Random Desc. Asc.` plus timing.
pub struct BenchTable<'a>(pub &'a [BenchRecord]);

impl fmt::Display for BenchTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>4} {:>12} {:>10} {:>10} {:>10} {:>10} {:>9}",
            "n", "||E||", "Bound", "Random", "Desc.", "Asc.", "seconds"
        )?;
        for r in self.0 {
            writeln!(
                f,
                "{:>4} {:>12} {:>10} {:>10.1} {:>10.1} {:>10.1} {:>9.3}",
                r.n, r.instances, r.bound, r.mean_random, r.mean_descending, r.mean_ascending, r.seconds
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let rho = Threshold::new(0.0).unwrap();
        let a = run_bench(&[6], 4, 11, rho).unwrap();
        let b = run_bench(&[6], 4, 11, rho).unwrap();
        assert_eq!(a[0].nodes, b[0].nodes);
        assert_eq!(a[0].bound, 25);
        assert!(a[0].nodes.iter().all(|t| t.random <= 25 && t.ascending <= 25 && t.descending <= 25));
    }

    #[test]
    fn seeds_differ_across_trials() {
        let seeds: std::collections::HashSet<u64> = (0..100).map(|t| trial_seed(1, 10, t)).collect();
        assert_eq!(seeds.len(), 100);
        assert_ne!(trial_seed(1, 10, 0), trial_seed(1, 11, 0));
    }

    #[test]
    fn table_layout() {
        let rho = Threshold::new(0.0).unwrap();
        let records = run_bench(&[3], 1, 0, rho).unwrap();
        let text = BenchTable(&records).to_string();
        assert!(text.lines().next().unwrap().contains("Bound"));
        let row: Vec<&str> = text.lines().nth(1).unwrap().split_whitespace().collect();
        assert_eq!(&row[..3], ["3", "8", "8"]);
    }
}
