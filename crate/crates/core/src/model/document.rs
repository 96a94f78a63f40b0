//! The JSON model file: probabilities as written by people and by the
//! learner, converted to log-odds on load.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    prior_log_odds, weight_of_evidence, AttributeSpec, Diagnostic, ModelError, NaiveBayesModel,
    ZeroMode,
};
use crate::scalar::Scalar;

const ROW_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub class: ClassSection,
    pub attributes: Vec<AttributeSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSection {
    pub name: String,
    /// `[c, c̄]`.
    pub values: Vec<String>,
    /// `Pr(c)`.
    pub prior: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeSection {
    pub name: String,
    pub values: Vec<String>,
    pub cpt: CptSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CptSection {
    pub given_c: Vec<f64>,
    pub given_cbar: Vec<f64>,
}

impl ModelDocument {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model document serializes")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Every problem with the document, each naming the offending field.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let class = &self.class;
        if class.values.len() != 2 {
            out.push(Diagnostic::new(
                "class.values",
                format!("class must have exactly 2 values, found {}", class.values.len()),
            ));
        } else if class.values[0] == class.values[1] {
            out.push(Diagnostic::new("class.values", "class values must be distinct"));
        }
        if !(0.0..=1.0).contains(&class.prior) {
            out.push(Diagnostic::new(
                "class.prior",
                format!("prior {} is not a probability", class.prior),
            ));
        }
        let mut names = HashSet::new();
        for (i, a) in self.attributes.iter().enumerate() {
            let loc = format!("attributes[{i}] '{}'", a.name);
            AttributeSpec::new(a.name.clone(), a.values.clone()).diagnose(&format!("attributes[{i}]"), &mut out);
            if !names.insert(a.name.as_str()) {
                out.push(Diagnostic::new(&loc, "duplicate attribute name"));
            }
            for (row, label) in [(&a.cpt.given_c, "given_c"), (&a.cpt.given_cbar, "given_cbar")] {
                let rloc = format!("{loc}.cpt.{label}");
                if row.len() != a.values.len() {
                    out.push(Diagnostic::new(
                        &rloc,
                        format!("{} entries for {} values", row.len(), a.values.len()),
                    ));
                    continue;
                }
                for (p, v) in row.iter().zip(&a.values) {
                    if !(0.0..=1.0).contains(p) {
                        out.push(Diagnostic::new(
                            format!("{rloc} value '{v}'"),
                            format!("{p} is not a probability"),
                        ));
                    }
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    out.push(Diagnostic::new(&rloc, format!("row sums to {sum}, not 1")));
                }
            }
            if a.cpt.given_c.len() == a.values.len() && a.cpt.given_cbar.len() == a.values.len() {
                for ((pc, pn), v) in a.cpt.given_c.iter().zip(&a.cpt.given_cbar).zip(&a.values) {
                    if *pc == 0.0 && *pn == 0.0 {
                        out.push(Diagnostic::new(
                            format!("{loc} value '{v}'"),
                            "probability is zero under both classes",
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let diags = self.diagnostics();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(diags))
        }
    }

    /// Validates and converts to log-odds.
    pub fn to_model<T: Scalar>(&self, mode: ZeroMode) -> Result<NaiveBayesModel<T>, ModelError> {
        self.validate()?;
        let attributes = self
            .attributes
            .iter()
            .map(|a| AttributeSpec::new(a.name.clone(), a.values.clone()))
            .collect();
        let weights = self
            .attributes
            .iter()
            .map(|a| {
                a.cpt
                    .given_c
                    .iter()
                    .zip(&a.cpt.given_cbar)
                    .map(|(&pc, &pn)| T::of(weight_of_evidence(pc, pn, mode)))
                    .collect()
            })
            .collect();
        NaiveBayesModel::new(
            self.class.name.clone(),
            [self.class.values[0].clone(), self.class.values[1].clone()],
            T::of(prior_log_odds(self.class.prior, mode)),
            attributes,
            weights,
            mode,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_ATTRS: &str = r#"{
        "class": {"name": "C", "values": ["yes", "no"], "prior": 0.6},
        "attributes": [
            {"name": "A", "values": ["a", "b"], "cpt": {"given_c": [0.75, 0.25], "given_cbar": [0.25, 0.75]}},
            {"name": "B", "values": ["x", "y", "z"], "cpt": {"given_c": [0.5, 0.5, 0.0], "given_cbar": [0.2, 0.3, 0.5]}}
        ]
    }"#;

    #[test]
    fn loads_and_converts() {
        let doc = ModelDocument::from_json(TWO_ATTRS).unwrap();
        let m: NaiveBayesModel<f64> = doc.to_model(ZeroMode::Clamp).unwrap();
        assert_eq!(m.num_attributes(), 2);
        assert_eq!(m.prior_log_odds(), (0.6f64 / 0.4).ln());
        assert_eq!(m.weight(0, 0), 3f64.ln());
        assert!(m.weight(1, 2).is_finite());
        let strict: NaiveBayesModel<f64> = doc.to_model(ZeroMode::Strict).unwrap();
        assert_eq!(strict.weight(1, 2), f64::NEG_INFINITY);
        let round = ModelDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(round, doc);
    }

    #[test]
    fn rejects_unrealizable_value() {
        let text = TWO_ATTRS.replace("[0.2, 0.3, 0.5]", "[0.5, 0.5, 0.0]");
        let doc = ModelDocument::from_json(&text).unwrap();
        let diags = doc.diagnostics();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].location.contains("'B' value 'z'"), "{diags:?}");
    }

    #[test]
    fn diagnostics_name_the_field() {
        let text = TWO_ATTRS
            .replace("[\"yes\", \"no\"]", "[\"yes\", \"no\", \"maybe\"]")
            .replace("[0.75, 0.25]", "[0.75, 0.35]");
        let diags = ModelDocument::from_json(&text).unwrap().diagnostics();
        assert!(diags.iter().any(|d| d.location == "class.values"));
        assert!(diags.iter().any(|d| d.location == "attributes[0] 'A'.cpt.given_c"));
        assert!(ModelDocument::from_json("{\"class\": 3}").is_err());
    }
}
