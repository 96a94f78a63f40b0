use std::io::Read;

use super::{AttributeSection, ClassSection, CptSection, ModelDocument, ModelError, NaiveBayesModel, ZeroMode};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct LearnOptions {
    pub class_column: String,
    /// Pseudo-count added to every cell (Laplace smoothing).
    pub smoothing: f64,
    /// Class value taken as `c`; defaults to the first one in the data.
    pub positive_class: Option<String>,
}

impl LearnOptions {
    pub fn new(class_column: impl Into<String>) -> Self {
        Self {
            class_column: class_column.into(),
            smoothing: 1.0,
            positive_class: None,
        }
    }

    pub fn smoothing(mut self, smoothing: f64) -> Self {
        self.smoothing = smoothing;
        self
    }

    pub fn positive_class(mut self, value: impl Into<String>) -> Self {
        self.positive_class = Some(value.into());
        self
    }
}

fn learn_error(msg: impl Into<String>) -> ModelError {
    ModelError::Learn(msg.into())
}

/// Maximum-likelihood CPTs with additive smoothing from a headed CSV whose
/// fields are all categorical. Value sets are taken from the data in order of
/// first appearance.
pub fn learn_document<R: Read>(data: R, options: &LearnOptions) -> Result<ModelDocument, ModelError> {
    if !(options.smoothing >= 0.0 && options.smoothing.is_finite()) {
        return Err(learn_error(format!("smoothing {} must be a finite non-negative number", options.smoothing)));
    }
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(data);
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let class_idx = headers
        .iter()
        .position(|h| *h == options.class_column)
        .ok_or_else(|| learn_error(format!("no column named '{}'", options.class_column)))?;
    let attr_cols: Vec<usize> = (0..headers.len()).filter(|&i| i != class_idx).collect();

    let mut class_values: Vec<String> = Vec::new();
    let mut values: Vec<Vec<String>> = vec![Vec::new(); attr_cols.len()];
    // counts[attr][value][class]
    let mut counts: Vec<Vec<[u64; 2]>> = vec![Vec::new(); attr_cols.len()];
    let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();

    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<&str, ModelError> {
            let v = record.get(i).unwrap_or("").trim();
            if v.is_empty() {
                Err(learn_error(format!("row {} column '{}' is empty", line + 2, headers[i])))
            } else {
                Ok(v)
            }
        };
        let class = field(class_idx)?;
        let c = intern(&mut class_values, class);
        let mut row = Vec::with_capacity(attr_cols.len());
        for (a, &col) in attr_cols.iter().enumerate() {
            row.push(intern(&mut values[a], field(col)?));
        }
        rows.push((c, row));
    }
    if rows.is_empty() {
        return Err(learn_error("dataset has no rows"));
    }
    if class_values.len() != 2 {
        return Err(learn_error(format!(
            "class column '{}' has {} distinct values, expected 2",
            options.class_column,
            class_values.len()
        )));
    }
    let observed = class_values.clone();
    if let Some(pos) = &options.positive_class {
        match class_values.iter().position(|v| v == pos) {
            Some(0) => {}
            Some(_) => class_values.swap(0, 1),
            None => return Err(learn_error(format!("class value '{pos}' does not occur"))),
        }
    }
    // Rows hold first-appearance indices; slot 0 is c, slot 1 is c̄.
    let slot_of: Vec<usize> = observed
        .iter()
        .map(|v| usize::from(*v != class_values[0]))
        .collect();

    let mut class_counts = [0u64; 2];
    for (a, vals) in values.iter().enumerate() {
        counts[a] = vec![[0, 0]; vals.len()];
    }
    for (c, row) in &rows {
        let slot = slot_of[*c];
        class_counts[slot] += 1;
        for (a, &v) in row.iter().enumerate() {
            counts[a][v][slot] += 1;
        }
    }

    let s = options.smoothing;
    let n = rows.len() as f64;
    let prior = (class_counts[0] as f64 + s) / (n + 2.0 * s);
    let attributes = attr_cols
        .iter()
        .enumerate()
        .map(|(a, &col)| {
            let k = values[a].len() as f64;
            let column = |slot: usize| -> Vec<f64> {
                counts[a]
                    .iter()
                    .map(|cell| (cell[slot] as f64 + s) / (class_counts[slot] as f64 + s * k))
                    .collect()
            };
            AttributeSection {
                name: headers[col].clone(),
                values: values[a].clone(),
                cpt: CptSection {
                    given_c: column(0),
                    given_cbar: column(1),
                },
            }
        })
        .collect();
    Ok(ModelDocument {
        class: ClassSection {
            name: options.class_column.clone(),
            values: class_values,
            prior,
        },
        attributes,
    })
}

fn intern(pool: &mut Vec<String>, value: &str) -> usize {
    match pool.iter().position(|v| v == value) {
        Some(i) => i,
        None => {
            pool.push(value.to_string());
            pool.len() - 1
        }
    }
}

/// Learns a model and converts it to log-odds with clamped zeros.
pub fn learn_from_csv<T: Scalar, R: Read>(data: R, options: &LearnOptions) -> Result<NaiveBayesModel<T>, ModelError> {
    learn_document(data, options)?.to_model(ZeroMode::Clamp)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "feature,class\na,c\na,c\na,c\na,n\nb,c\nb,n\nb,n\nb,n\n";

    #[test]
    fn counts_without_smoothing() {
        let doc = learn_document(TOY.as_bytes(), &LearnOptions::new("class").smoothing(0.0)).unwrap();
        assert_eq!(doc.class.values, vec!["c", "n"]);
        assert_eq!(doc.class.prior, 0.5);
        let cpt = &doc.attributes[0].cpt;
        assert_eq!(doc.attributes[0].values, vec!["a", "b"]);
        assert_eq!(cpt.given_c, vec![0.75, 0.25]);
        assert_eq!(cpt.given_cbar, vec![0.25, 0.75]);
    }

    #[test]
    fn laplace_smoothing() {
        let doc = learn_document(TOY.as_bytes(), &LearnOptions::new("class")).unwrap();
        assert!((doc.attributes[0].cpt.given_c[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn positive_class_selection() {
        let opts = LearnOptions::new("class").smoothing(0.0).positive_class("n");
        let doc = learn_document(TOY.as_bytes(), &opts).unwrap();
        assert_eq!(doc.class.values, vec!["n", "c"]);
        assert_eq!(doc.attributes[0].cpt.given_c, vec![0.25, 0.75]);
    }

    #[test]
    fn rejects_bad_class_columns() {
        let three = "f,class\na,x\nb,y\na,z\n";
        assert!(learn_document(three.as_bytes(), &LearnOptions::new("class")).is_err());
        let empty = "f,class\n";
        assert!(learn_document(empty.as_bytes(), &LearnOptions::new("class")).is_err());
        assert!(learn_document(TOY.as_bytes(), &LearnOptions::new("nope")).is_err());
        let ragged = "f,class\na,x\nb\n";
        assert!(learn_document(ragged.as_bytes(), &LearnOptions::new("class")).is_err());
    }

    #[test]
    fn smoothed_models_always_validate() {
        let sparse = "f,g,class\na,p,c\nb,q,c\nc,r,n\n";
        let m: NaiveBayesModel<f64> = learn_from_csv(sparse.as_bytes(), &LearnOptions::new("class")).unwrap();
        crate::model::validate_model(&m, ZeroMode::Clamp).unwrap();
    }
}
