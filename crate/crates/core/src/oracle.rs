//! Ground truth by enumerating every instance.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::interval::Interval;
use crate::model::{Instance, ModelError, NaiveBayesModel, Threshold};
use crate::scalar::Scalar;

/// Largest instance space the oracle will enumerate.
pub const ORACLE_LIMIT: u128 = 1 << 24;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance space has {size} instances, above the oracle limit of {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("models have different attributes")]
    SpecMismatch,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("writing table: {0}")]
    Csv(#[from] csv::Error),
}

fn guard(size: u128, limit: u128) -> Result<(), OracleError> {
    if size > limit {
        Err(OracleError::TooLarge { size, limit })
    } else {
        Ok(())
    }
}

/// Visits every instance in lexicographic order with its log-odds.
///
/// Partial sums are kept per position, so each value is the same left fold
/// as [`NaiveBayesModel::log_odds_of`], bit for bit.
fn for_each_instance<T: Scalar>(
    model: &NaiveBayesModel<T>,
    mut visit: impl FnMut(&[usize], T) -> Result<(), OracleError>,
) -> Result<(), OracleError> {
    let cards = model.cardinalities();
    if cards.contains(&0) {
        return Ok(());
    }
    let n = cards.len();
    let mut values = vec![0usize; n];
    // partial[k] = prior + sum of the first k weights
    let mut partial = vec![model.prior_log_odds(); n + 1];
    for k in 0..n {
        partial[k + 1] = partial[k] + model.weight(k, 0);
    }
    loop {
        let x = partial[n];
        if x.is_nan() {
            return Err(ModelError::IndeterminateLogOdds.into());
        }
        visit(&values, x)?;
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            values[k] += 1;
            if values[k] < cards[k] {
                break;
            }
            values[k] = 0;
        }
        for j in k..n {
            partial[j + 1] = partial[j] + model.weight(j, values[j]);
        }
    }
}

/// Extreme log-odds on each side of the threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Margins<T> {
    /// Least log-odds of a positive instance; `+inf` if there is none.
    pub alpha: T,
    /// Greatest log-odds of a negative instance; `-inf` if there is none.
    pub beta: T,
    /// `alpha` restricted to instances with a given value, `[attribute][value]`.
    pub value_alpha: Vec<Vec<T>>,
    /// `beta` restricted likewise.
    pub value_beta: Vec<Vec<T>>,
}

impl<T: Scalar> Margins<T> {
    fn new(cards: &[usize]) -> Self {
        Self {
            alpha: T::infinity(),
            beta: T::neg_infinity(),
            value_alpha: cards.iter().map(|&c| vec![T::infinity(); c]).collect(),
            value_beta: cards.iter().map(|&c| vec![T::neg_infinity(); c]).collect(),
        }
    }

    fn record(&mut self, values: &[usize], x: T, positive: bool) {
        if positive {
            self.alpha = self.alpha.min(x);
            for (row, &v) in self.value_alpha.iter_mut().zip(values) {
                row[v] = row[v].min(x);
            }
        } else {
            self.beta = self.beta.max(x);
            for (row, &v) in self.value_beta.iter_mut().zip(values) {
                row[v] = row[v].max(x);
            }
        }
    }

    /// `[prior + rho - alpha, prior + rho - beta)`: the prior log-odds values
    /// that keep the classifier unchanged.
    pub fn prior_interval(&self, prior: T, rho: T) -> Interval<T> {
        shifted(prior, rho, self.alpha, self.beta)
    }

    /// `[w + rho - alpha_e, w + rho - beta_e)` for the weight `w` of one
    /// attribute value.
    pub fn weight_interval(&self, model: &NaiveBayesModel<T>, rho: T, attribute: usize, value: usize) -> Interval<T> {
        shifted(
            model.weight(attribute, value),
            rho,
            self.value_alpha[attribute][value],
            self.value_beta[attribute][value],
        )
    }
}

fn shifted<T: Scalar>(current: T, rho: T, alpha: T, beta: T) -> Interval<T> {
    let lo = current + rho - alpha;
    let hi = current + rho - beta;
    Interval::new(lo, hi).unwrap_or_else(|_| Interval::empty())
}

/// Exhaustive classification of every instance.
#[derive(Debug, Clone)]
pub struct OracleReport<T> {
    pub cardinalities: Vec<usize>,
    /// Log-odds of each instance, in lexicographic order.
    pub log_odds: Vec<T>,
    pub labels: Vec<bool>,
    pub margins: Margins<T>,
    pub positive: u64,
    pub negative: u64,
}

impl<T: Scalar> OracleReport<T> {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, e: &Instance) -> bool {
        self.labels[self.index_of(e)]
    }

    pub fn index_of(&self, e: &Instance) -> usize {
        e.0.iter()
            .zip(&self.cardinalities)
            .fold(0usize, |acc, (&v, &c)| acc * c + v)
    }

    pub fn instances(&self) -> impl Iterator<Item = Instance> + '_ {
        Instance::all(&self.cardinalities)
    }

    /// Writes `instance,log_odds,label` rows.
    pub fn write_csv<W: Write>(&self, model: &NaiveBayesModel<T>, out: W) -> Result<(), OracleError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["instance", "log_odds", "label"])?;
        for ((e, x), label) in self.instances().zip(&self.log_odds).zip(&self.labels) {
            w.write_record([
                e.render(model.attributes()),
                x.to_string(),
                u8::from(*label).to_string(),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Classifies every instance of `model` at `rho`.
pub fn enumerate<T: Scalar>(model: &NaiveBayesModel<T>, rho: Threshold<T>) -> Result<OracleReport<T>, OracleError> {
    enumerate_with_limit(model, rho, ORACLE_LIMIT)
}

pub fn enumerate_with_limit<T: Scalar>(
    model: &NaiveBayesModel<T>,
    rho: Threshold<T>,
    limit: u128,
) -> Result<OracleReport<T>, OracleError> {
    let size = model.instance_space();
    guard(size, limit)?;
    let cards = model.cardinalities();
    let rho = rho.rho();
    let mut report = OracleReport {
        margins: Margins::new(&cards),
        cardinalities: cards,
        log_odds: Vec::with_capacity(size as usize),
        labels: Vec::with_capacity(size as usize),
        positive: 0,
        negative: 0,
    };
    for_each_instance(model, |values, x| {
        let positive = x >= rho;
        report.margins.record(values, x, positive);
        report.log_odds.push(x);
        report.labels.push(positive);
        if positive {
            report.positive += 1;
        } else {
            report.negative += 1;
        }
        Ok(())
    })?;
    Ok(report)
}

/// Margins only, without keeping the table.
pub fn margins<T: Scalar>(model: &NaiveBayesModel<T>, rho: Threshold<T>) -> Result<Margins<T>, OracleError> {
    guard(model.instance_space(), ORACLE_LIMIT)?;
    let rho = rho.rho();
    let mut m = Margins::new(&model.cardinalities());
    for_each_instance(model, |values, x| {
        m.record(values, x, x >= rho);
        Ok(())
    })?;
    Ok(m)
}

/// True iff the two models classify every instance alike.
pub fn oracle_equivalent<T: Scalar>(
    m1: &NaiveBayesModel<T>,
    m2: &NaiveBayesModel<T>,
    rho: Threshold<T>,
) -> Result<bool, OracleError> {
    Ok(first_disagreement(m1, m2, rho)?.is_none())
}

/// The first instance, lexicographically, on which the models disagree.
pub fn first_disagreement<T: Scalar>(
    m1: &NaiveBayesModel<T>,
    m2: &NaiveBayesModel<T>,
    rho: Threshold<T>,
) -> Result<Option<Instance>, OracleError> {
    if m1.attributes() != m2.attributes() {
        return Err(OracleError::SpecMismatch);
    }
    guard(m1.instance_space(), ORACLE_LIMIT)?;
    let rho = rho.rho();
    let mut labels = Vec::with_capacity(m1.instance_space() as usize);
    for_each_instance(m1, |_, x| {
        labels.push(x >= rho);
        Ok(())
    })?;
    let mut index = 0;
    let mut found = None;
    for_each_instance(m2, |values, x| {
        if found.is_none() && labels[index] != (x >= rho) {
            found = Some(Instance(values.to_vec()));
        }
        index += 1;
        Ok(())
    })?;
    Ok(found)
}

/// Summary row for reports.
#[derive(Debug, Clone, Serialize)]
pub struct OracleCounts {
    pub instances: u64,
    pub positive: u64,
    pub negative: u64,
}

impl<T> From<&OracleReport<T>> for OracleCounts {
    fn from(r: &OracleReport<T>) -> Self {
        Self {
            instances: r.positive + r.negative,
            positive: r.positive,
            negative: r.negative,
        }
    }
}
