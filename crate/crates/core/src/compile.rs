//! Naive Bayes classifier to ODD compilation.
//!
//! The diagram is built depth first along the attribute order. Each node
//! reached by a partial instantiation represents the sub-classifier whose
//! prior is the partial log-odds `v`, and carries that sub-classifier's
//! equivalence interval: the set of priors inducing the same function. Its
//! interval is the intersection over values `e` of the child interval shifted
//! back by `w_e`. One cache per depth indexes nodes by interval, so any later
//! path whose partial log-odds falls into a cached interval reuses that node.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::interval::Interval;
use crate::model::{instance_space, ModelError, NaiveBayesModel, Threshold};
use crate::odd::{NodeId, Odd, OddBuilder, OddError};
use crate::ordering::{make_order, OrderingHeuristic};
use crate::scalar::{ExtendedReal, Scalar};

#[derive(Debug, Error)]
pub enum CompileError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid attribute order: {0}")]
    Order(OddError),
    #[error("cache {depth} invariant violated: interval {new} overlaps cached {existing}")]
    CacheOverlap {
        depth: usize,
        existing: String,
        new: String,
    },
    #[error("internal diagram error: {0}")]
    Internal(OddError),
}

/// Total order on non-NaN lower endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
struct LowerEnd<T>(T);

impl<T: Scalar> Eq for LowerEnd<T> {}

impl<T: Scalar> PartialOrd for LowerEnd<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for LowerEnd<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("interval endpoints are never NaN")
    }
}

/// One depth's entries, keyed by lower end.
type Cache<T> = BTreeMap<LowerEnd<T>, (Interval<T>, NodeId)>;

/// One cache per depth `0..=n`, each mapping pairwise disjoint intervals to
/// the node they identify, sorted by lower endpoint.
#[derive(Debug, Clone)]
pub struct DepthCacheSet<T> {
    caches: Vec<Cache<T>>,
}

impl<T: Scalar> DepthCacheSet<T> {
    /// Caches for depths `0..=depth`.
    pub fn new(depth: usize) -> Self {
        Self {
            caches: vec![BTreeMap::new(); depth + 1],
        }
    }

    pub fn depths(&self) -> usize {
        self.caches.len()
    }

    pub fn len(&self, depth: usize) -> usize {
        self.caches[depth].len()
    }

    pub fn is_empty(&self, depth: usize) -> bool {
        self.caches[depth].is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.caches.iter().map(BTreeMap::len).collect()
    }

    /// Cached entries at `depth`, by ascending lower endpoint.
    pub fn entries(&self, depth: usize) -> impl Iterator<Item = (Interval<T>, NodeId)> + '_ {
        self.caches[depth].values().copied()
    }

    /// The node whose interval contains `x`, if any.
    pub fn find(&self, depth: usize, x: T) -> Option<NodeId> {
        if x.is_nan() {
            return None;
        }
        let (_, (interval, node)) = self.caches[depth].range(..=LowerEnd(x)).next_back()?;
        interval.covers(x).then_some(*node)
    }

    /// Inserts `interval -> node`, refusing intervals that overlap an
    /// existing entry. Empty intervals match nothing and are not stored.
    pub fn store(&mut self, depth: usize, interval: Interval<T>, node: NodeId) -> Result<(), CompileError> {
        if interval.is_empty() {
            return Ok(());
        }
        let cache = &mut self.caches[depth];
        let key = LowerEnd(interval.lo());
        let before = cache.range(..=key).next_back().map(|(_, e)| e.0);
        let after = cache.range(key..).next().map(|(_, e)| e.0);
        for existing in before.into_iter().chain(after) {
            if existing.overlaps(&interval) {
                return Err(CompileError::CacheOverlap {
                    depth,
                    existing: existing.to_string(),
                    new: interval.to_string(),
                });
            }
        }
        cache.insert(key, (interval, node));
        Ok(())
    }
}

/// Builder state for one compilation: the node arena, per-node intervals and
/// the depth caches.
#[derive(Debug)]
pub struct Compiler<'m, T> {
    model: &'m NaiveBayesModel<T>,
    rho: T,
    order: Vec<usize>,
    builder: OddBuilder,
    caches: DepthCacheSet<T>,
    /// Indexed by builder node id.
    intervals: Vec<Interval<T>>,
}

impl<'m, T: Scalar> Compiler<'m, T> {
    /// Sets up the two sinks, `[rho, inf)` and `(-inf, rho)`, in cache `n`.
    pub fn new(model: &'m NaiveBayesModel<T>, rho: Threshold<T>, order: &[usize]) -> Result<Self, CompileError> {
        model.check_mixed_infinities()?;
        let builder =
            OddBuilder::new(model.attributes().to_vec(), order.to_vec()).map_err(CompileError::Order)?;
        let n = model.num_attributes();
        let mut compiler = Self {
            model,
            rho: rho.rho(),
            order: order.to_vec(),
            builder,
            caches: DepthCacheSet::new(n),
            intervals: Vec::new(),
        };
        let one = compiler.builder.sink(true);
        compiler.intervals.push(Interval::at_least(compiler.rho));
        compiler.caches.store(n, Interval::at_least(compiler.rho), one)?;
        let zero = compiler.builder.sink(false);
        compiler.intervals.push(Interval::below(compiler.rho));
        compiler.caches.store(n, Interval::below(compiler.rho), zero)?;
        Ok(compiler)
    }

    pub fn caches(&self) -> &DepthCacheSet<T> {
        &self.caches
    }

    pub fn find_in_cache(&self, depth: usize, x: T) -> Option<NodeId> {
        self.caches.find(depth, x)
    }

    /// Equivalence interval of a node created so far.
    pub fn interval(&self, node: NodeId) -> Interval<T> {
        self.intervals[node.index()]
    }

    /// Builds the sub-diagram for depth `k` and partial log-odds `v`, whose
    /// lookup in cache `k` already missed. Returns the new node, which is
    /// stored in cache `k` under its equivalence interval.
    pub fn build_sub_odd(&mut self, k: usize, v: T) -> Result<NodeId, CompileError> {
        let attribute = self.order[k];
        let cardinality = self.model.attributes()[attribute].cardinality();
        let mut children = Vec::with_capacity(cardinality);
        let mut interval = Interval::full();
        for value in 0..cardinality {
            let w = self.model.weight(attribute, value);
            let v_child = v + w;
            let child = match self.caches.find(k + 1, v_child) {
                Some(child) => child,
                None => self.build_sub_odd(k + 1, v_child)?,
            };
            interval = interval.intersect(&self.intervals[child.index()].offset(-w));
            children.push(child);
        }
        let node = self.builder.push(k, children).map_err(CompileError::Internal)?;
        debug_assert_eq!(node.index(), self.intervals.len());
        self.intervals.push(interval);
        self.caches.store(k, interval, node)?;
        Ok(node)
    }

    /// Compiles from the model's prior and packages the result.
    pub fn run(mut self) -> Result<CompilationResult<T>, CompileError> {
        let started = Instant::now();
        let v = self.model.prior_log_odds();
        let root = match self.caches.find(0, v) {
            Some(node) => node,
            None => self.build_sub_odd(0, v)?,
        };
        let cache_sizes = self.caches.sizes();
        let (odd, map) = self.builder.finish_with_map(root);
        let mut intervals = vec![Interval::empty(); odd.node_count()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                intervals[new.index()] = self.intervals[old];
            }
        }
        Ok(CompilationResult {
            root_interval: intervals[odd.root().index()],
            odd,
            intervals,
            cache_sizes,
            order: self.order,
            elapsed: started.elapsed(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct CompilationResult<T> {
    pub odd: Odd,
    /// Equivalence interval of the prior log-odds.
    pub root_interval: Interval<T>,
    /// Equivalence interval of every node, indexed by [`NodeId`].
    pub intervals: Vec<Interval<T>>,
    /// Number of entries in each depth cache, `0..=n`.
    pub cache_sizes: Vec<usize>,
    /// Attribute index tested at each level.
    pub order: Vec<usize>,
    pub elapsed: Duration,
}

impl<T: Scalar> CompilationResult<T> {
    pub fn interval(&self, node: NodeId) -> Interval<T> {
        self.intervals[node.index()]
    }

    /// Intervals of the root's children, indexed by the first attribute's
    /// values. Empty when there are no attributes.
    pub fn root_child_intervals(&self) -> Vec<Interval<T>> {
        match self.odd.node(self.odd.root()) {
            crate::odd::OddNode::Decision { children, .. } => {
                children.iter().map(|c| self.interval(*c)).collect()
            }
            crate::odd::OddNode::Sink(_) => Vec::new(),
        }
    }

    pub fn stats(&self) -> CompileStats {
        let cards: Vec<usize> = self.odd.attributes().iter().map(|a| a.cardinality()).collect();
        CompileStats {
            attributes: cards.len(),
            instances: instance_space(&cards),
            nodes: self.odd.node_count(),
            bound: size_bound(&cards, &self.order),
            cache_sizes: self.cache_sizes.clone(),
            root_interval: [
                ExtendedReal(self.root_interval.lo().to_f64_lossy()),
                ExtendedReal(self.root_interval.hi().to_f64_lossy()),
            ],
            seconds: self.elapsed.as_secs_f64(),
        }
    }
}

/// Compilation statistics for reports.
#[derive(Debug, Clone, Serialize)]
pub struct CompileStats {
    pub attributes: usize,
    pub instances: u128,
    pub nodes: usize,
    pub bound: u128,
    pub cache_sizes: Vec<usize>,
    pub root_interval: [ExtendedReal; 2],
    pub seconds: f64,
}

impl fmt::Display for CompileStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "attributes: {}", self.attributes)?;
        writeln!(f, "instances: {}", self.instances)?;
        writeln!(f, "nodes: {}", self.nodes)?;
        writeln!(f, "bound: {}", self.bound)?;
        let sizes: Vec<String> = self.cache_sizes.iter().map(ToString::to_string).collect();
        writeln!(f, "cache_sizes: {}", sizes.join(" "))?;
        writeln!(
            f,
            "root_interval: [{}, {})",
            self.root_interval[0], self.root_interval[1]
        )?;
        writeln!(f, "seconds: {:.6}", self.seconds)
    }
}

/// Compiles `model` at threshold `rho` with attributes tested in `order`
/// (a permutation of attribute indices).
pub fn compile<T: Scalar>(
    model: &NaiveBayesModel<T>,
    rho: Threshold<T>,
    order: &[usize],
) -> Result<CompilationResult<T>, CompileError> {
    Compiler::new(model, rho, order)?.run()
}

/// Compiles with the ascending evidential-impact order.
pub fn compile_default<T: Scalar>(
    model: &NaiveBayesModel<T>,
    rho: Threshold<T>,
) -> Result<CompilationResult<T>, CompileError> {
    let order = make_order(model, &OrderingHeuristic::Ascending).map_err(CompileError::Order)?;
    compile(model, rho, &order)
}

/// Upper bound on the node count of a compiled diagram:
/// `sum_{k=0..n} min(prod_{j<k} |E_j|, prod_{j>=k} |E_j| + 1)` over the
/// given order, with empty products equal to 1. Saturates at `u128::MAX`.
pub fn size_bound(cardinalities: &[usize], order: &[usize]) -> u128 {
    let cards: Vec<u128> = order.iter().map(|&i| cardinalities[i] as u128).collect();
    let n = cards.len();
    let mut suffix = vec![1u128; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1].saturating_mul(cards[k]);
    }
    let mut prefix = 1u128;
    let mut total = 0u128;
    for k in 0..=n {
        total = total.saturating_add(prefix.min(suffix[k].saturating_add(1)));
        if k < n {
            prefix = prefix.saturating_mul(cards[k]);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttributeSpec, Instance, ZeroMode};

    fn rho(x: f64) -> Threshold<f64> {
        Threshold::new(x).unwrap()
    }

    #[test]
    fn bounds_for_binary_attributes() {
        for (n, bound) in [(10, 99), (15, 518), (20, 3080), (25, 16395), (30, 98317)] {
            let order: Vec<usize> = (0..n).collect();
            assert_eq!(size_bound(&vec![2; n], &order), bound, "n = {n}");
        }
        assert_eq!(size_bound(&[], &[]), 1);
        assert_eq!(size_bound(&[3], &[0]), 1 + 2);
        let huge = vec![1000; 40];
        let order: Vec<usize> = (0..40).collect();
        assert_eq!(size_bound(&huge, &order), u128::MAX);
    }

    #[test]
    fn empty_model_compiles_to_a_sink() {
        let m = NaiveBayesModel::from_weights(0.5, vec![]).unwrap();
        let r = compile(&m, rho(0.25), &[]).unwrap();
        assert_eq!(r.odd.as_constant(), Some(true));
        assert_eq!(r.odd.node_count(), 1);
        assert_eq!(r.root_interval, Interval::at_least(0.25));
        let r = compile(&m, rho(1.0), &[]).unwrap();
        assert_eq!(r.odd.as_constant(), Some(false));
        assert_eq!(r.root_interval, Interval::below(1.0));
    }

    #[test]
    fn last_level_node_interval() {
        let w = 0.75;
        let m = NaiveBayesModel::from_weights(0.0, vec![vec![w, -w]]).unwrap();
        let mut c = Compiler::new(&m, rho(1.0), &[0]).unwrap();
        let node = c.build_sub_odd(0, 1.0).unwrap();
        assert_eq!(c.interval(node), Interval::new(1.0 - w, 1.0 + w).unwrap());
        assert_eq!(c.find_in_cache(0, 1.0), Some(node));
        assert_eq!(c.find_in_cache(0, 1.0 + w), None);
    }

    #[test]
    fn identical_children_interval_contains_v() {
        let m = NaiveBayesModel::from_weights(0.0, vec![vec![0.5, 0.25]]).unwrap();
        let mut c = Compiler::new(&m, rho(0.0), &[0]).unwrap();
        let node = c.build_sub_odd(0, 3.0).unwrap();
        let i = c.interval(node);
        assert_eq!(i, Interval::at_least(-0.25));
        assert!(i.contains(3.0).unwrap());
    }

    #[test]
    fn sink_cache_lookups() {
        let m = NaiveBayesModel::from_weights(0.0, vec![vec![0.5, 0.25]; 3]).unwrap();
        let c = Compiler::new(&m, rho(2.0), &[0, 1, 2]).unwrap();
        let one = c.find_in_cache(3, 2.0).unwrap();
        let zero = c.find_in_cache(3, 2.0 - 1e-9).unwrap();
        assert_ne!(one, zero);
        assert_eq!(c.interval(one), Interval::at_least(2.0));
        assert_eq!(c.find_in_cache(1, 0.3), None);
        assert_eq!(c.caches().len(3), 2);
    }

    #[test]
    fn overlapping_store_is_refused() {
        let mut caches = DepthCacheSet::<f64>::new(1);
        let a = NodeId(0);
        caches.store(0, Interval::new(0.0, 2.0).unwrap(), a).unwrap();
        caches.store(0, Interval::new(2.0, 3.0).unwrap(), a).unwrap();
        caches.store(0, Interval::below(0.0), a).unwrap();
        assert!(matches!(
            caches.store(0, Interval::new(1.0, 1.5).unwrap(), a),
            Err(CompileError::CacheOverlap { depth: 0, .. })
        ));
        assert!(caches.store(0, Interval::new(-1.0, 0.5).unwrap(), a).is_err());
        assert!(caches.store(0, Interval::at_least(2.5), a).is_err());
        assert_eq!(caches.len(0), 3);
        assert_eq!(caches.find(0, f64::NEG_INFINITY), Some(a));
        assert_eq!(caches.find(0, 3.0), None);
    }

    #[test]
    fn bad_order_is_rejected() {
        let m = NaiveBayesModel::from_weights(0.0, vec![vec![0.5, 0.25]; 2]).unwrap();
        assert!(matches!(compile(&m, rho(0.0), &[0, 0]), Err(CompileError::Order(_))));
        assert!(matches!(compile(&m, rho(0.0), &[0]), Err(CompileError::Order(_))));
    }

    #[test]
    fn mixed_infinities_are_refused() {
        let attrs = vec![AttributeSpec::indexed("A", 2), AttributeSpec::indexed("B", 2)];
        let m = NaiveBayesModel::new(
            "C",
            ["c".into(), "cbar".into()],
            0.0,
            attrs,
            vec![vec![f64::INFINITY, 0.0], vec![f64::NEG_INFINITY, 1.0]],
            ZeroMode::Strict,
        )
        .unwrap();
        assert!(matches!(compile(&m, rho(0.0), &[0, 1]), Err(CompileError::Model(_))));
    }

    #[test]
    fn strict_infinite_weights_compile_soundly() {
        let attrs = vec![
            AttributeSpec::indexed("A", 2),
            AttributeSpec::indexed("B", 3),
            AttributeSpec::indexed("D", 2),
        ];
        let m = NaiveBayesModel::new(
            "C",
            ["c".into(), "cbar".into()],
            -0.5,
            attrs,
            vec![vec![f64::NEG_INFINITY, 0.7], vec![0.2, f64::NEG_INFINITY, -1.0], vec![1.5, -0.3]],
            ZeroMode::Strict,
        )
        .unwrap();
        let t = rho(0.0);
        for order in [[0, 1, 2], [2, 1, 0], [1, 2, 0]] {
            let r = compile(&m, t, &order).unwrap();
            for e in Instance::all(&m.cardinalities()) {
                assert_eq!(r.odd.evaluate(&e), m.classify(t, &e).unwrap(), "{order:?} {e:?}");
            }
            assert!(r.root_interval.contains(m.prior_log_odds()).unwrap());
        }
    }
}
