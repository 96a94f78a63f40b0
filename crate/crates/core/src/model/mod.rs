//! Naive Bayes models in log-odds form.
//!
//! A model is a prior log-odds plus one weight of evidence per attribute
//! value. The posterior log-odds of an instance is the prior plus the weights
//! of its values, summed in attribute-index order so that the result is
//! bit-reproducible.

mod document;
mod learn;
mod random;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

pub use document::{AttributeSection, ClassSection, CptSection, ModelDocument};
pub use learn::{learn_document, learn_from_csv, LearnOptions};
pub use random::{generate_random_document, generate_random_model};

/// Probabilities are clamped to `[CLAMP_EPSILON, 1]` before taking logs in
/// [`ZeroMode::Clamp`].
pub const CLAMP_EPSILON: f64 = 1e-9;

/// How zero CPT entries are turned into weights.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroMode {
    /// Clamp to [`CLAMP_EPSILON`]; every weight is finite.
    #[default]
    Clamp,
    /// Keep `±inf` weights. Models mixing `+inf` and `-inf` across different
    /// attributes are refused by the compiler.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("probability {0} is outside (0, 1)")]
    ProbabilityDomain(f64),
    #[error("instance has {got} values but the model has {expected} attributes")]
    InstanceArity { expected: usize, got: usize },
    #[error("value index {value} out of range for attribute '{attribute}' with {cardinality} values")]
    ValueOutOfRange {
        attribute: String,
        value: usize,
        cardinality: usize,
    },
    #[error("instance log-odds is undefined (sums +inf and -inf)")]
    IndeterminateLogOdds,
    #[error("{0}")]
    Learn(String),
    #[error("malformed model document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed dataset: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// `log(p / (1 - p))` for `p` strictly inside `(0, 1)`.
pub fn prob_to_log_odds(p: f64) -> Result<f64, ModelError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(ModelError::ProbabilityDomain(p));
    }
    Ok((p / (1.0 - p)).ln())
}

/// Inverse of [`prob_to_log_odds`], extended so that `-inf -> 0`, `inf -> 1`.
pub fn log_odds_to_prob(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `log(Pr(e|c) / Pr(e|c̄))`.
///
/// In [`ZeroMode::Clamp`] both inputs are first raised to at least
/// [`CLAMP_EPSILON`]. In [`ZeroMode::Strict`] a zero numerator gives `-inf`
/// and a zero denominator `+inf`; both zero is NaN and must be rejected by
/// the caller.
pub fn weight_of_evidence(p_given_c: f64, p_given_cbar: f64, mode: ZeroMode) -> f64 {
    match mode {
        ZeroMode::Clamp => (p_given_c.max(CLAMP_EPSILON) / p_given_cbar.max(CLAMP_EPSILON)).ln(),
        ZeroMode::Strict => match (p_given_c == 0.0, p_given_cbar == 0.0) {
            (true, true) => f64::NAN,
            (true, false) => f64::NEG_INFINITY,
            (false, true) => f64::INFINITY,
            (false, false) => (p_given_c / p_given_cbar).ln(),
        },
    }
}

/// Prior log-odds of `Pr(c) = p`, with the same zero handling as
/// [`weight_of_evidence`].
pub fn prior_log_odds(p: f64, mode: ZeroMode) -> f64 {
    weight_of_evidence(p, 1.0 - p, mode)
}

/// An attribute and its ordered value names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AttributeSpec {
    pub name: String,
    pub values: Vec<String>,
}

impl AttributeSpec {
    pub fn new(name: impl Into<String>, values: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            name: name.into(),
            values: values.into_iter().map(Into::into).collect(),
        }
    }

    /// Attribute with `cardinality` values named `v0, v1, …`.
    pub fn indexed(name: impl Into<String>, cardinality: usize) -> Self {
        Self::new(name, (0..cardinality).map(|v| format!("v{v}")))
    }

    pub fn cardinality(&self) -> usize {
        self.values.len()
    }

    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }

    fn diagnose(&self, location: &str, out: &mut Vec<Diagnostic>) {
        if self.name.is_empty() {
            out.push(Diagnostic::new(location, "attribute name is empty"));
        }
        if self.values.is_empty() {
            out.push(Diagnostic::new(
                format!("{location} '{}'", self.name),
                "attribute has no values",
            ));
        }
        let mut seen = HashSet::new();
        for v in &self.values {
            if !seen.insert(v.as_str()) {
                out.push(Diagnostic::new(
                    format!("{location} '{}' value '{v}'", self.name),
                    "duplicate value name",
                ));
            }
        }
    }
}

/// Threshold on the posterior log-odds; an instance is positive iff its
/// log-odds is at least `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold<T>(T);

impl<T: Scalar> Threshold<T> {
    pub fn new(rho: T) -> Result<Self, ModelError> {
        if !rho.is_finite() {
            return Err(ModelError::Invalid(vec![Diagnostic::new(
                "threshold",
                format!("threshold {rho} is not finite"),
            )]));
        }
        Ok(Self(rho))
    }

    /// Threshold for the probability cut-off `Pr(c|e) >= p`.
    pub fn from_probability(p: f64) -> Result<Self, ModelError> {
        Self::new(T::of(prob_to_log_odds(p)?))
    }

    pub fn rho(&self) -> T {
        self.0
    }
}

/// A complete assignment: one value index per attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Instance(pub Vec<usize>);

impl Instance {
    /// The `index`-th instance in lexicographic order (attribute 0 most
    /// significant).
    pub fn from_index(mut index: u64, cardinalities: &[usize]) -> Self {
        let mut values = vec![0; cardinalities.len()];
        for (slot, &card) in values.iter_mut().zip(cardinalities).rev() {
            *slot = (index % card as u64) as usize;
            index /= card as u64;
        }
        Self(values)
    }

    /// All instances over `cardinalities` in lexicographic order.
    pub fn all(cardinalities: &[usize]) -> InstanceIter {
        InstanceIter {
            cardinalities: cardinalities.to_vec(),
            next: if cardinalities.contains(&0) {
                None
            } else {
                Some(vec![0; cardinalities.len()])
            },
        }
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// Renders as `attr=value,…` using the given attribute names.
    pub fn render(&self, attributes: &[AttributeSpec]) -> String {
        self.0
            .iter()
            .zip(attributes)
            .map(|(&v, a)| format!("{}={}", a.name, a.values[v]))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses `attr=value,…`; every attribute must be assigned exactly once.
    pub fn parse(text: &str, attributes: &[AttributeSpec]) -> Result<Self, ModelError> {
        let mut values: Vec<Option<usize>> = vec![None; attributes.len()];
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part.split_once('=').ok_or_else(|| {
                ModelError::Invalid(vec![Diagnostic::new(part, "expected attr=value")])
            })?;
            let (a, spec) = attributes
                .iter()
                .enumerate()
                .find(|(_, s)| s.name == name.trim())
                .ok_or_else(|| ModelError::Invalid(vec![Diagnostic::new(name, "unknown attribute")]))?;
            let v = spec.value_index(value.trim()).ok_or_else(|| {
                ModelError::Invalid(vec![Diagnostic::new(
                    format!("{name}={value}"),
                    "unknown value",
                )])
            })?;
            if values[a].replace(v).is_some() {
                return Err(ModelError::Invalid(vec![Diagnostic::new(name, "assigned twice")]));
            }
        }
        let missing: Vec<Diagnostic> = values
            .iter()
            .zip(attributes)
            .filter(|(v, _)| v.is_none())
            .map(|(_, a)| Diagnostic::new(&a.name, "attribute not assigned"))
            .collect();
        if !missing.is_empty() {
            return Err(ModelError::Invalid(missing));
        }
        Ok(Self(values.into_iter().map(Option::unwrap).collect()))
    }
}

/// Odometer over all instances, last attribute varying fastest.
#[derive(Debug, Clone)]
pub struct InstanceIter {
    cardinalities: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for InstanceIter {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut advanced = false;
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.cardinalities[i] {
                advanced = true;
                break;
            }
            succ[i] = 0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(Instance(current))
    }
}

/// Product of cardinalities, saturating at `u128::MAX`.
pub fn instance_space(cardinalities: &[usize]) -> u128 {
    cardinalities
        .iter()
        .fold(1u128, |acc, &c| acc.saturating_mul(c as u128))
}

/// A naive Bayes network with a binary class, held in log-odds space.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel<T> {
    class_name: String,
    class_values: [String; 2],
    prior_log_odds: T,
    attributes: Vec<AttributeSpec>,
    weights: Vec<Vec<T>>,
}

impl<T: Scalar> NaiveBayesModel<T> {
    /// Builds and validates a model; see [`validate_model`].
    pub fn new(
        class_name: impl Into<String>,
        class_values: [String; 2],
        prior_log_odds: T,
        attributes: Vec<AttributeSpec>,
        weights: Vec<Vec<T>>,
        mode: ZeroMode,
    ) -> Result<Self, ModelError> {
        let model = Self {
            class_name: class_name.into(),
            class_values,
            prior_log_odds,
            attributes,
            weights,
        };
        validate_model(&model, mode)?;
        Ok(model)
    }

    /// Model over attributes `E1, E2, …` whose values are `v0, v1, …`, one
    /// per entry of each weight row.
    pub fn from_weights(prior_log_odds: T, weights: Vec<Vec<T>>) -> Result<Self, ModelError> {
        let attributes = weights
            .iter()
            .enumerate()
            .map(|(i, w)| AttributeSpec::indexed(format!("E{}", i + 1), w.len()))
            .collect();
        Self::new(
            "C",
            ["c".into(), "cbar".into()],
            prior_log_odds,
            attributes,
            weights,
            ZeroMode::Clamp,
        )
    }

    pub fn class_name(&self) -> &str {
        &self.class_name
    }

    pub fn class_values(&self) -> &[String; 2] {
        &self.class_values
    }

    pub fn prior_log_odds(&self) -> T {
        self.prior_log_odds
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn weights(&self) -> &[Vec<T>] {
        &self.weights
    }

    pub fn weight(&self, attribute: usize, value: usize) -> T {
        self.weights[attribute][value]
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.attributes.iter().map(AttributeSpec::cardinality).collect()
    }

    pub fn instance_space(&self) -> u128 {
        instance_space(&self.cardinalities())
    }

    /// Same model with a different prior log-odds. The prior is not
    /// validated beyond being non-NaN.
    pub fn with_prior(&self, prior_log_odds: T) -> Self {
        assert!(!prior_log_odds.is_nan(), "prior log-odds must not be NaN");
        Self {
            prior_log_odds,
            ..self.clone()
        }
    }

    /// Same model with the weights of one attribute replaced.
    pub fn with_attribute_weights(&self, attribute: usize, weights: Vec<T>) -> Result<Self, ModelError> {
        let mut next = self.clone();
        next.weights[attribute] = weights;
        validate_model(&next, ZeroMode::Strict)?;
        Ok(next)
    }

    /// Converts every parameter to another scalar type.
    pub fn cast<U: Scalar>(&self) -> NaiveBayesModel<U> {
        NaiveBayesModel {
            class_name: self.class_name.clone(),
            class_values: self.class_values.clone(),
            prior_log_odds: U::of(self.prior_log_odds.to_f64_lossy()),
            attributes: self.attributes.clone(),
            weights: self
                .weights
                .iter()
                .map(|row| row.iter().map(|w| U::of(w.to_f64_lossy())).collect())
                .collect(),
        }
    }

    fn check_instance(&self, e: &Instance) -> Result<(), ModelError> {
        if e.0.len() != self.attributes.len() {
            return Err(ModelError::InstanceArity {
                expected: self.attributes.len(),
                got: e.0.len(),
            });
        }
        for (&v, a) in e.0.iter().zip(&self.attributes) {
            if v >= a.cardinality() {
                return Err(ModelError::ValueOutOfRange {
                    attribute: a.name.clone(),
                    value: v,
                    cardinality: a.cardinality(),
                });
            }
        }
        Ok(())
    }

    /// `log O(c|e)`: the prior plus the instance's weights, left to right.
    pub fn log_odds_of(&self, e: &Instance) -> Result<T, ModelError> {
        self.check_instance(e)?;
        Ok(self.log_odds_unchecked(&e.0))
    }

    #[inline]
    pub(crate) fn log_odds_unchecked(&self, values: &[usize]) -> T {
        values
            .iter()
            .zip(&self.weights)
            .fold(self.prior_log_odds, |acc, (&v, row)| acc + row[v])
    }

    /// 1 (`true`) iff `log O(c|e) >= rho`.
    pub fn classify(&self, rho: Threshold<T>, e: &Instance) -> Result<bool, ModelError> {
        let x = self.log_odds_of(e)?;
        if x.is_nan() {
            return Err(ModelError::IndeterminateLogOdds);
        }
        Ok(x >= rho.rho())
    }

    /// Refuses models in which some instance could sum `+inf` and `-inf`:
    /// an infinite weight of one sign on one attribute (or the prior) while a
    /// different attribute carries the other sign.
    pub fn check_mixed_infinities(&self) -> Result<(), ModelError> {
        let sources = std::iter::once(("prior".to_string(), vec![self.prior_log_odds])).chain(
            self.attributes
                .iter()
                .zip(&self.weights)
                .map(|(a, w)| (format!("attribute '{}'", a.name), w.clone())),
        );
        let mut pos: Option<String> = None;
        let mut neg: Option<String> = None;
        for (name, ws) in sources {
            let has_pos = ws.iter().any(|w| *w == T::infinity());
            let has_neg = ws.iter().any(|w| *w == T::neg_infinity());
            if has_pos {
                if let Some(n) = neg.as_ref().filter(|n| **n != name) {
                    return Err(mixed(n, &name));
                }
                pos.get_or_insert(name.clone());
            }
            if has_neg {
                if let Some(p) = pos.as_ref().filter(|p| **p != name) {
                    return Err(mixed(&name, p));
                }
                neg.get_or_insert(name.clone());
            }
        }
        Ok(())
    }
}

fn mixed(neg: &str, pos: &str) -> ModelError {
    ModelError::Invalid(vec![Diagnostic::new(
        "weights",
        format!("{neg} has a -inf weight while {pos} has a +inf weight"),
    )])
}

/// Checks the structural invariants of a model: exactly two distinct class
/// values, one non-NaN weight per attribute value, unique value names, and
/// (in [`ZeroMode::Clamp`]) finite prior and weights.
pub fn validate_model<T: Scalar>(model: &NaiveBayesModel<T>, mode: ZeroMode) -> Result<(), ModelError> {
    let mut diags = Vec::new();
    if model.class_values[0] == model.class_values[1] {
        diags.push(Diagnostic::new("class.values", "class values must be distinct"));
    }
    if model.prior_log_odds.is_nan() {
        diags.push(Diagnostic::new("class.prior", "prior log-odds is NaN"));
    } else if mode == ZeroMode::Clamp && !model.prior_log_odds.is_finite() {
        diags.push(Diagnostic::new("class.prior", "prior log-odds is infinite"));
    }
    if model.weights.len() != model.attributes.len() {
        diags.push(Diagnostic::new(
            "weights",
            format!(
                "{} weight rows for {} attributes",
                model.weights.len(),
                model.attributes.len()
            ),
        ));
    }
    let mut names = HashSet::new();
    for (i, (a, row)) in model.attributes.iter().zip(&model.weights).enumerate() {
        let loc = format!("attributes[{i}]");
        a.diagnose(&loc, &mut diags);
        if !names.insert(a.name.as_str()) {
            diags.push(Diagnostic::new(format!("{loc} '{}'", a.name), "duplicate attribute name"));
        }
        if row.len() != a.cardinality() {
            diags.push(Diagnostic::new(
                format!("{loc} '{}'", a.name),
                format!("{} weights for {} values", row.len(), a.cardinality()),
            ));
        }
        for (w, v) in row.iter().zip(&a.values) {
            let vloc = format!("{loc} '{}' value '{v}'", a.name);
            if w.is_nan() {
                diags.push(Diagnostic::new(vloc, "weight is NaN"));
            } else if mode == ZeroMode::Clamp && !w.is_finite() {
                diags.push(Diagnostic::new(vloc, "weight is infinite"));
            }
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(ModelError::Invalid(diags))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn log_odds_of_probabilities() {
        assert_abs_diff_eq!(prob_to_log_odds(0.9).unwrap(), 2.197, epsilon = 1e-3);
        assert_eq!(prob_to_log_odds(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(prob_to_log_odds(0.87).unwrap(), 1.901, epsilon = 1e-3);
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(prob_to_log_odds(p), Err(ModelError::ProbabilityDomain(_))));
        }
        let mut last = f64::NEG_INFINITY;
        for k in 1..100 {
            let x = prob_to_log_odds(k as f64 / 100.0).unwrap();
            assert!(x > last);
            last = x;
        }
    }

    #[test]
    fn weights_of_evidence() {
        assert_abs_diff_eq!(weight_of_evidence(0.27, 0.893, ZeroMode::Clamp), -1.196, epsilon = 1e-3);
        assert_eq!(weight_of_evidence(0.4, 0.4, ZeroMode::Clamp), 0.0);
        assert_eq!(
            weight_of_evidence(0.0, 0.5, ZeroMode::Clamp),
            (CLAMP_EPSILON / 0.5).ln()
        );
        assert_eq!(weight_of_evidence(0.0, 0.5, ZeroMode::Strict), f64::NEG_INFINITY);
        assert_eq!(weight_of_evidence(0.5, 0.0, ZeroMode::Strict), f64::INFINITY);
    }

    #[test]
    fn validation() {
        let ok = NaiveBayesModel::from_weights(0.1, vec![vec![0.5, -0.5]; 3]);
        assert!(ok.is_ok());
        let nan = NaiveBayesModel::from_weights(0.1, vec![vec![0.5, f64::NAN]]);
        match nan {
            Err(ModelError::Invalid(d)) => assert!(d[0].location.contains("E1") && d[0].message.contains("NaN")),
            other => panic!("expected rejection, got {other:?}"),
        }
        let inf = NaiveBayesModel::from_weights(0.1, vec![vec![0.5, f64::INFINITY]]);
        assert!(inf.is_err());
        let strict = NaiveBayesModel::new(
            "C",
            ["c".into(), "cbar".into()],
            0.0,
            vec![AttributeSpec::indexed("E1", 2)],
            vec![vec![f64::INFINITY, 0.0]],
            ZeroMode::Strict,
        );
        assert!(strict.is_ok());
        let same_class = NaiveBayesModel::<f64>::new(
            "C",
            ["c".into(), "c".into()],
            0.0,
            vec![],
            vec![],
            ZeroMode::Clamp,
        );
        assert!(same_class.is_err());
        let dup = NaiveBayesModel::<f64>::new(
            "C",
            ["c".into(), "cbar".into()],
            0.0,
            vec![AttributeSpec::new("A", ["x", "x"])],
            vec![vec![0.0, 0.0]],
            ZeroMode::Clamp,
        );
        assert!(dup.is_err());
    }

    #[test]
    fn instance_log_odds() {
        let zero = NaiveBayesModel::from_weights(0.0, vec![vec![0.0, 0.0]; 2]).unwrap();
        assert_eq!(zero.log_odds_of(&Instance(vec![1, 0])).unwrap(), 0.0);
        let m = NaiveBayesModel::from_weights(1.0, vec![vec![0.5, 7.0], vec![3.0, -0.25]]).unwrap();
        assert_eq!(m.log_odds_of(&Instance(vec![0, 1])).unwrap(), 1.25);
        assert!(matches!(
            m.log_odds_of(&Instance(vec![0])),
            Err(ModelError::InstanceArity { expected: 2, got: 1 })
        ));
        assert!(matches!(
            m.log_odds_of(&Instance(vec![0, 2])),
            Err(ModelError::ValueOutOfRange { .. })
        ));
    }

    #[test]
    fn classification_boundary_is_positive() {
        let m = NaiveBayesModel::from_weights(1.0, vec![vec![0.5, -0.5]]).unwrap();
        let rho = Threshold::new(1.5).unwrap();
        assert!(m.classify(rho, &Instance(vec![0])).unwrap());
        assert!(!m.classify(rho, &Instance(vec![1])).unwrap());
        let low = m.with_prior((CLAMP_EPSILON / (1.0 - CLAMP_EPSILON)).ln());
        let rho0 = Threshold::new(0.0).unwrap();
        for e in Instance::all(&m.cardinalities()) {
            assert!(!low.classify(rho0, &e).unwrap());
        }
    }

    #[test]
    fn instance_enumeration_is_lexicographic() {
        let all: Vec<_> = Instance::all(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], Instance(vec![0, 0]));
        assert_eq!(all[1], Instance(vec![0, 1]));
        assert_eq!(all[3], Instance(vec![1, 0]));
        for (i, e) in all.iter().enumerate() {
            assert_eq!(&Instance::from_index(i as u64, &[2, 3]), e);
        }
        assert_eq!(Instance::all(&[]).count(), 1);
    }

    #[test]
    fn instance_text() {
        let attrs = vec![AttributeSpec::new("U", ["+ve", "-ve"]), AttributeSpec::new("B", ["+ve", "-ve"])];
        let e = Instance::parse("B=-ve, U=+ve", &attrs).unwrap();
        assert_eq!(e, Instance(vec![0, 1]));
        assert_eq!(e.render(&attrs), "U=+ve,B=-ve");
        assert!(Instance::parse("U=+ve", &attrs).is_err());
        assert!(Instance::parse("U=maybe,B=+ve", &attrs).is_err());
    }

    #[test]
    fn mixed_infinities() {
        let attrs = vec![AttributeSpec::indexed("A", 2), AttributeSpec::indexed("B", 2)];
        let build = |w: Vec<Vec<f64>>| {
            NaiveBayesModel::new("C", ["c".into(), "cbar".into()], 0.0, attrs.clone(), w, ZeroMode::Strict)
                .unwrap()
        };
        let same_attr = build(vec![vec![f64::INFINITY, f64::NEG_INFINITY], vec![0.0, 1.0]]);
        assert!(same_attr.check_mixed_infinities().is_ok());
        let across = build(vec![vec![f64::INFINITY, 0.0], vec![f64::NEG_INFINITY, 1.0]]);
        assert!(across.check_mixed_infinities().is_err());
        let prior = build(vec![vec![f64::INFINITY, 0.0], vec![0.0, 1.0]]).with_prior(f64::NEG_INFINITY);
        assert!(prior.check_mixed_infinities().is_err());
    }
}
