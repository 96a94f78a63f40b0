//! How far the prior or a single weight of evidence can move before the
//! classifier changes, and how many classifiers such changes can induce.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;
use thiserror::Error;

use crate::compile::{compile, CompilationResult, CompileError};
use crate::interval::Interval;
use crate::model::{log_odds_to_prob, Instance, NaiveBayesModel, Threshold};
use crate::scalar::{ExtendedReal, Scalar};

/// Largest instance space [`sweep_distinct_classifiers`] will enumerate.
pub const SWEEP_LIMIT: u128 = 1 << 16;

#[derive(Debug, Error)]
pub enum SensitivityError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error("attribute index {0} out of range")]
    NoSuchAttribute(usize),
    #[error("cardinality must be at least 1")]
    ZeroCardinality,
    #[error("instance space has {size} instances, above the sweep limit of {limit}")]
    TooLarge { size: u128, limit: u128 },
}

/// Equivalence interval of the prior log-odds: the root's interval.
pub fn prior_interval_from_odd<T: Scalar>(result: &CompilationResult<T>) -> Interval<T> {
    result.root_interval
}

/// Both endpoints of a log-odds interval mapped to probabilities.
pub fn prior_prob_interval<T: Scalar>(interval: &Interval<T>) -> (f64, f64) {
    let i = interval.to_f64();
    (log_odds_to_prob(i.lo()), log_odds_to_prob(i.hi()))
}

/// Allowed new weight for each value of `attribute`, holding everything else
/// fixed. Compiles with `attribute` first and reads the root's children.
pub fn weight_intervals_for<T: Scalar>(
    model: &NaiveBayesModel<T>,
    rho: Threshold<T>,
    attribute: usize,
) -> Result<Vec<Interval<T>>, SensitivityError> {
    let n = model.num_attributes();
    if attribute >= n {
        return Err(SensitivityError::NoSuchAttribute(attribute));
    }
    let order: Vec<usize> = std::iter::once(attribute)
        .chain((0..n).filter(|&i| i != attribute))
        .collect();
    let result = compile(model, rho, &order)?;
    let prior = model.prior_log_odds();
    Ok(result
        .root_child_intervals()
        .iter()
        .map(|i| i.offset(-prior))
        .collect())
}

/// Upper bound on classifiers reachable by changing the prior alone:
/// `||E|| + 1`.
pub fn count_prior_classifiers(cardinalities: &[usize]) -> BigUint {
    cardinalities.iter().fold(BigUint::one(), |acc, &c| acc * c) + 1u32
}

/// Upper bound on classifiers reachable by changing the CPT of one attribute
/// with `b` values, where `k` counts the instantiations of the others:
/// `(k+1)^b - floor(k/2)^b - ceil(k/2)^b`.
pub fn count_weight_classifiers(k: &BigUint, b: usize) -> Result<BigUint, SensitivityError> {
    if b == 0 {
        return Err(SensitivityError::ZeroCardinality);
    }
    let b = b as u32;
    let floor = k / 2u32;
    let ceil = k - &floor;
    Ok((k + 1u32).pow(b) - floor.pow(b) - ceil.pow(b))
}

/// [`count_weight_classifiers`] for attribute `attribute` of a model.
pub fn weight_classifier_bound(cardinalities: &[usize], attribute: usize) -> Result<BigUint, SensitivityError> {
    let b = *cardinalities
        .get(attribute)
        .ok_or(SensitivityError::NoSuchAttribute(attribute))?;
    let k = cardinalities
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != attribute)
        .fold(BigUint::one(), |acc, (_, &c)| acc * c);
    count_weight_classifiers(&k, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Prior,
    /// Every weight of this attribute varies independently over the reals.
    Attribute(usize),
}

/// Counts the distinct classifiers obtained by sweeping the chosen parameter
/// over the reals, by enumeration.
///
/// Each distinct finite sum of the swept-over weights is a breakpoint. The
/// attribute mode counts the unrestricted box, one independent sweep per
/// value.
pub fn sweep_distinct_classifiers<T: Scalar>(
    model: &NaiveBayesModel<T>,
    mode: SweepMode,
) -> Result<BigUint, SensitivityError> {
    let size = model.instance_space();
    if size > SWEEP_LIMIT {
        return Err(SensitivityError::TooLarge {
            size,
            limit: SWEEP_LIMIT,
        });
    }
    let zero_prior = model.with_prior(T::zero());
    match mode {
        SweepMode::Prior => Ok(BigUint::from(distinct_finite_sums(&zero_prior, None) + 1)),
        SweepMode::Attribute(a) => {
            if a >= model.num_attributes() {
                return Err(SensitivityError::NoSuchAttribute(a));
            }
            let per_value = distinct_finite_sums(&zero_prior, Some(a)) + 1;
            let b = model.attributes()[a].cardinality() as u32;
            Ok(BigUint::from(per_value).pow(b))
        }
    }
}

/// Distinct finite weight sums over all instances, leaving out `skip`.
fn distinct_finite_sums<T: Scalar>(model: &NaiveBayesModel<T>, skip: Option<usize>) -> usize {
    let mut cards = model.cardinalities();
    if let Some(a) = skip {
        cards[a] = 1;
    }
    let mut seen = BTreeSet::new();
    for e in Instance::all(&cards) {
        let sum = e
            .0
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != skip)
            .fold(T::zero(), |acc, (i, &v)| acc + model.weight(i, v));
        if sum.is_finite() {
            seen.insert(sum.to_f64_lossy().to_bits());
        }
    }
    seen.len()
}

/// One parameter's position inside its equivalence interval.
#[derive(Debug, Clone, Serialize)]
pub struct ParameterReport {
    pub name: String,
    /// Current log-odds value.
    pub current: ExtendedReal,
    /// Allowed values, in log-odds.
    pub interval: [ExtendedReal; 2],
    /// The same interval as a probability (prior) or likelihood ratio
    /// `exp(w)` (weights).
    pub scaled: [ExtendedReal; 2],
    /// Distance from the current value down to the lower end and up to the
    /// upper end.
    pub slack: [ExtendedReal; 2],
}

impl ParameterReport {
    fn new<T: Scalar>(name: String, current: T, interval: Interval<T>, scale: fn(f64) -> f64) -> Self {
        let i = interval.to_f64();
        let (below, above) = interval.slack(current);
        Self {
            name,
            current: ExtendedReal(current.to_f64_lossy()),
            interval: [ExtendedReal(i.lo()), ExtendedReal(i.hi())],
            scaled: [ExtendedReal(scale(i.lo())), ExtendedReal(scale(i.hi()))],
            slack: [ExtendedReal(below.to_f64_lossy()), ExtendedReal(above.to_f64_lossy())],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AttributeReport {
    pub attribute: String,
    pub values: Vec<ParameterReport>,
    /// Maximum number of classifiers reachable by changing this CPT.
    pub classifier_bound: String,
    /// Advisory: whether the box of intervals contains weights some CPT can
    /// realize, i.e. all zero or of both signs. Not enforced.
    pub realizable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SensitivityReport {
    pub rho: ExtendedReal,
    pub prior: ParameterReport,
    /// Maximum number of classifiers reachable by changing the prior.
    pub prior_classifier_bound: String,
    pub attributes: Vec<AttributeReport>,
}

/// Prior and per-weight intervals for the whole model, one compilation per
/// attribute.
pub fn sensitivity_report<T: Scalar>(
    model: &NaiveBayesModel<T>,
    rho: Threshold<T>,
    order: &[usize],
) -> Result<SensitivityReport, SensitivityError> {
    let result = compile(model, rho, order)?;
    let prior = ParameterReport::new(
        "prior".into(),
        model.prior_log_odds(),
        prior_interval_from_odd(&result),
        log_odds_to_prob,
    );
    let cards = model.cardinalities();
    let attributes = (0..model.num_attributes())
        .map(|a| {
            let spec = &model.attributes()[a];
            let intervals = weight_intervals_for(model, rho, a)?;
            let values: Vec<ParameterReport> = intervals
                .iter()
                .zip(&spec.values)
                .enumerate()
                .map(|(v, (i, name))| {
                    ParameterReport::new(format!("{}={}", spec.name, name), model.weight(a, v), *i, f64::exp)
                })
                .collect();
            Ok(AttributeReport {
                attribute: spec.name.clone(),
                values,
                classifier_bound: weight_classifier_bound(&cards, a)?.to_string(),
                realizable: realizable_box(&intervals),
            })
        })
        .collect::<Result<Vec<_>, SensitivityError>>()?;
    Ok(SensitivityReport {
        rho: ExtendedReal(rho.rho().to_f64_lossy()),
        prior,
        prior_classifier_bound: count_prior_classifiers(&cards).to_string(),
        attributes,
    })
}

/// Whether some point of the box is all zeros or has both a positive and a
/// negative coordinate.
fn realizable_box<T: Scalar>(intervals: &[Interval<T>]) -> bool {
    let all_zero = intervals.iter().all(|i| i.covers(T::zero()));
    let positive: Vec<bool> = intervals.iter().map(|i| !i.is_empty() && i.hi() > T::zero()).collect();
    let negative: Vec<bool> = intervals.iter().map(|i| !i.is_empty() && i.lo() < T::zero()).collect();
    let mixed = (0..intervals.len()).any(|p| positive[p] && (0..intervals.len()).any(|q| q != p && negative[q]));
    all_zero || mixed
}

impl fmt::Display for ParameterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: current {}, interval [{}, {}), scaled [{}, {}), slack -{} / +{}",
            self.name,
            self.current,
            self.interval[0],
            self.interval[1],
            self.scaled[0],
            self.scaled[1],
            self.slack[0],
            self.slack[1]
        )
    }
}

impl fmt::Display for SensitivityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rho: {}", self.rho)?;
        writeln!(f, "{}", self.prior)?;
        writeln!(f, "  classifiers reachable via the prior: at most {}", self.prior_classifier_bound)?;
        for a in &self.attributes {
            writeln!(f, "attribute {}", a.attribute)?;
            for v in &a.values {
                writeln!(f, "  {v}")?;
            }
            writeln!(f, "  classifiers reachable via this CPT: at most {}", a.classifier_bound)?;
            if !a.realizable {
                writeln!(f, "  note: no CPT realizes a point of this box")?;
            }
        }
        Ok(())
    }
}
