//! Queries and combinations over compiled diagrams sharing an attribute
//! order.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::model::{AttributeSpec, Instance};
use crate::odd::{NodeId, Odd, OddBuilder, OddNode};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OpsError {
    #[error("diagrams use different attribute orders")]
    OrderMismatch,
    #[error("unknown attribute '{0}'")]
    UnknownAttribute(String),
    #[error("unknown value '{value}' for attribute '{attribute}'")]
    UnknownValue { attribute: String, value: String },
    #[error("conjunction constrains attribute '{0}' twice")]
    DuplicateAttribute(String),
    #[error("malformed literal '{0}' (expected attr=value)")]
    MalformedLiteral(String),
}

fn require_same_order(d1: &Odd, d2: &Odd) -> Result<(), OpsError> {
    if d1.same_order(d2) {
        Ok(())
    } else {
        Err(OpsError::OrderMismatch)
    }
}

/// True iff both diagrams compute the same function.
///
/// Both sides are reduced, then descended together; each pair of nodes is
/// visited once.
pub fn equivalent(d1: &Odd, d2: &Odd) -> Result<bool, OpsError> {
    require_same_order(d1, d2)?;
    let (r1, r2) = (d1.reduce(), d2.reduce());
    let mut seen = HashMap::new();
    Ok(same_function(&r1, &r2, r1.root(), r2.root(), &mut seen))
}

fn same_function(d1: &Odd, d2: &Odd, a: NodeId, b: NodeId, seen: &mut HashMap<(NodeId, NodeId), bool>) -> bool {
    if let (Some(x), Some(y)) = (d1.sink_value(a), d2.sink_value(b)) {
        return x == y;
    }
    if let Some(&known) = seen.get(&(a, b)) {
        return known;
    }
    let level = d1.level(a).min(d2.level(b));
    let result = (0..d1.level_cardinality(level)).all(|v| {
        let ca = child_at(d1, a, level, v);
        let cb = child_at(d2, b, level, v);
        same_function(d1, d2, ca, cb, seen)
    });
    seen.insert((a, b), result);
    result
}

/// The `value` child when `node` tests `level`; otherwise `node` itself.
fn child_at(d: &Odd, node: NodeId, level: usize, value: usize) -> NodeId {
    match d.node(node) {
        OddNode::Decision { level: l, children } if *l == level => children[value],
        _ => node,
    }
}

/// Numbers of instances mapped to 1 and to 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelCount {
    pub positive: BigUint,
    pub negative: BigUint,
}

impl ModelCount {
    pub fn total(&self) -> BigUint {
        &self.positive + &self.negative
    }
}

/// Counts positive and negative instances in one bottom-up pass. An edge
/// that skips levels stands for every value of the skipped attributes.
pub fn model_count(d: &Odd) -> ModelCount {
    let n = d.num_levels();
    // prefix[l] = product of cardinalities of levels 0..l
    let mut prefix = vec![BigUint::one(); n + 1];
    for l in 0..n {
        prefix[l + 1] = &prefix[l] * d.level_cardinality(l);
    }
    let gap = |from: usize, to: usize| -> BigUint { &prefix[to] / &prefix[from] };
    let mut counts: Vec<(BigUint, BigUint)> = Vec::with_capacity(d.node_count());
    for (_, node) in d.nodes() {
        let c = match node {
            OddNode::Sink(true) => (BigUint::one(), BigUint::zero()),
            OddNode::Sink(false) => (BigUint::zero(), BigUint::one()),
            OddNode::Decision { level, children } => {
                let mut pos = BigUint::zero();
                let mut neg = BigUint::zero();
                for child in children {
                    let g = gap(level + 1, d.level(*child));
                    let (p, q) = &counts[child.index()];
                    pos += &g * p;
                    neg += &g * q;
                }
                (pos, neg)
            }
        };
        counts.push(c);
    }
    let g = gap(0, d.level(d.root()));
    let (p, q) = &counts[d.root().index()];
    ModelCount {
        positive: &g * p,
        negative: &g * q,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Xor,
}

impl BoolOp {
    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Xor => a != b,
        }
    }
}

/// Pointwise combination of two diagrams. The result is reduced and has at
/// most `|d1| * |d2| + 2` nodes.
pub fn apply(d1: &Odd, d2: &Odd, op: BoolOp) -> Result<Odd, OpsError> {
    require_same_order(d1, d2)?;
    let mut out = OddBuilder::new(d1.attributes().to_vec(), d1.order().to_vec())
        .expect("order already validated");
    let mut memo = HashMap::new();
    let root = apply_rec(d1, d2, op, d1.root(), d2.root(), &mut out, &mut memo);
    Ok(out.finish(root))
}

fn apply_rec(
    d1: &Odd,
    d2: &Odd,
    op: BoolOp,
    a: NodeId,
    b: NodeId,
    out: &mut OddBuilder,
    memo: &mut HashMap<(NodeId, NodeId), NodeId>,
) -> NodeId {
    let (x, y) = (d1.sink_value(a), d2.sink_value(b));
    match (op, x, y) {
        (_, Some(x), Some(y)) => return out.sink(op.eval(x, y)),
        (BoolOp::And, Some(false), _) | (BoolOp::And, _, Some(false)) => return out.sink(false),
        (BoolOp::Or, Some(true), _) | (BoolOp::Or, _, Some(true)) => return out.sink(true),
        _ => {}
    }
    if let Some(&id) = memo.get(&(a, b)) {
        return id;
    }
    let level = d1.level(a).min(d2.level(b));
    let children = (0..d1.level_cardinality(level))
        .map(|v| {
            let ca = child_at(d1, a, level, v);
            let cb = child_at(d2, b, level, v);
            apply_rec(d1, d2, op, ca, cb, out, memo)
        })
        .collect();
    let id = out.reduced(level, children);
    memo.insert((a, b), id);
    id
}

/// The diagram computing the negation of `d`.
pub fn complement(d: &Odd) -> Odd {
    let one = Odd::constant(d.attributes().to_vec(), d.order().to_vec(), true).expect("valid order");
    apply(d, &one, BoolOp::Xor).expect("same order")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub count: BigUint,
    pub witnesses: Vec<Instance>,
}

/// How many instances the diagrams classify differently, plus up to `limit`
/// of them in lexicographic order (by level, then value index).
pub fn disagreement(d1: &Odd, d2: &Odd, limit: usize) -> Result<Disagreement, OpsError> {
    let diff = apply(d1, d2, BoolOp::Xor)?;
    let count = model_count(&diff).positive;
    let witnesses = enumerate_instances(&diff, true, limit);
    Ok(Disagreement { count, witnesses })
}

/// Up to `limit` instances mapped to `target`, lexicographic by level then
/// value index. Instances are returned in the diagram's attribute layout.
pub fn enumerate_instances(d: &Odd, target: bool, limit: usize) -> Vec<Instance> {
    let reaches = reaches_sink(d, target);
    let mut out = Vec::new();
    let mut levels = vec![0usize; d.num_levels()];
    if limit > 0 && reaches[d.root().index()] {
        walk(d, target, d.root(), 0, &mut levels, &reaches, limit, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    d: &Odd,
    target: bool,
    node: NodeId,
    level: usize,
    values: &mut Vec<usize>,
    reaches: &[bool],
    limit: usize,
    out: &mut Vec<Instance>,
) {
    if out.len() >= limit || !reaches[node.index()] {
        return;
    }
    if level == d.num_levels() {
        debug_assert_eq!(d.sink_value(node), Some(target));
        let mut e = vec![0; values.len()];
        for (l, &v) in values.iter().enumerate() {
            e[d.order()[l]] = v;
        }
        out.push(Instance(e));
        return;
    }
    for v in 0..d.level_cardinality(level) {
        values[level] = v;
        let next = child_at(d, node, level, v);
        walk(d, target, next, level + 1, values, reaches, limit, out);
        if out.len() >= limit {
            return;
        }
    }
}

/// For each node, whether some path from it ends in the `target` sink.
fn reaches_sink(d: &Odd, target: bool) -> Vec<bool> {
    let mut reach = Vec::with_capacity(d.node_count());
    for (_, node) in d.nodes() {
        reach.push(match node {
            OddNode::Sink(v) => *v == target,
            OddNode::Decision { children, .. } => children.iter().any(|c| reach[c.index()]),
        });
    }
    reach
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    Conjunction,
    Disjunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    /// Index into the diagram's attribute layout.
    pub attribute: usize,
    pub value: usize,
}

/// A conjunction or disjunction of attribute/value pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureCondition {
    pub connective: Connective,
    pub literals: Vec<Literal>,
}

impl FeatureCondition {
    /// Parses `attr=value,…` against `attributes`.
    pub fn parse(connective: Connective, text: &str, attributes: &[AttributeSpec]) -> Result<Self, OpsError> {
        let literals = text
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|part| {
                let (name, value) = part
                    .split_once('=')
                    .ok_or_else(|| OpsError::MalformedLiteral(part.to_string()))?;
                let (name, value) = (name.trim(), value.trim());
                let attribute = attributes
                    .iter()
                    .position(|a| a.name == name)
                    .ok_or_else(|| OpsError::UnknownAttribute(name.to_string()))?;
                let value = attributes[attribute]
                    .value_index(value)
                    .ok_or_else(|| OpsError::UnknownValue {
                        attribute: name.to_string(),
                        value: value.to_string(),
                    })?;
                Ok(Literal { attribute, value })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cond = Self { connective, literals };
        cond.validate(attributes)?;
        Ok(cond)
    }

    pub fn validate(&self, attributes: &[AttributeSpec]) -> Result<(), OpsError> {
        let mut seen = vec![false; attributes.len()];
        for lit in &self.literals {
            let attr = attributes
                .get(lit.attribute)
                .ok_or_else(|| OpsError::UnknownAttribute(format!("#{}", lit.attribute)))?;
            if lit.value >= attr.cardinality() {
                return Err(OpsError::UnknownValue {
                    attribute: attr.name.clone(),
                    value: format!("#{}", lit.value),
                });
            }
            if self.connective == Connective::Conjunction && std::mem::replace(&mut seen[lit.attribute], true) {
                return Err(OpsError::DuplicateAttribute(attr.name.clone()));
            }
        }
        Ok(())
    }

    /// Direct evaluation on one instance.
    pub fn holds(&self, e: &Instance) -> bool {
        let hit = |l: &Literal| e.0[l.attribute] == l.value;
        match self.connective {
            Connective::Conjunction => self.literals.iter().all(hit),
            Connective::Disjunction => self.literals.iter().any(hit),
        }
    }
}

/// True iff every instance that `d` maps to `positive` satisfies `cond`.
///
/// Decided in one pass by asking whether the chosen sink is reachable by an
/// instance violating `cond`.
pub fn all_instances_satisfy(d: &Odd, positive: bool, cond: &FeatureCondition) -> Result<bool, OpsError> {
    cond.validate(d.attributes())?;
    let n = d.num_levels();
    Ok(!match cond.connective {
        Connective::Conjunction => {
            // A counterexample picks, on some attribute, a value other than
            // its literal.
            let mut literal = vec![None; n];
            for lit in &cond.literals {
                let level = level_of(d, lit.attribute);
                literal[level] = Some(lit.value);
            }
            let violable: Vec<bool> = (0..n)
                .map(|l| literal[l].is_some() && d.level_cardinality(l) > 1)
                .collect();
            // any_violable[l] = some level in l..n is violable
            let mut any_violable = vec![false; n + 1];
            for l in (0..n).rev() {
                any_violable[l] = violable[l] || any_violable[l + 1];
            }
            let reach = reaches_sink(d, positive);
            // must[id]: a path from id (entered at its own level) reaches the
            // sink while violating some literal at or below that level.
            let mut must: Vec<bool> = Vec::with_capacity(d.node_count());
            for (_, node) in d.nodes() {
                let value = match node {
                    OddNode::Sink(_) => false,
                    OddNode::Decision { level, children } => children.iter().enumerate().any(|(v, c)| {
                        let child_level = d.level(*c);
                        let violates_here = literal[*level].is_some_and(|lv| lv != v);
                        let violates_gap = (level + 1..child_level).any(|l| violable[l]);
                        reach[c.index()] && (violates_here || violates_gap || must[c.index()])
                    }),
                };
                must.push(value);
            }
            let root = d.root();
            let before_root = (0..d.level(root)).any(|l| violable[l]);
            reach[root.index()] && (before_root || must[root.index()])
        }
        Connective::Disjunction => {
            // A counterexample avoids every literal value.
            let mut allowed: Vec<Vec<bool>> = (0..n).map(|l| vec![true; d.level_cardinality(l)]).collect();
            for lit in &cond.literals {
                allowed[level_of(d, lit.attribute)][lit.value] = false;
            }
            let free: Vec<bool> = allowed.iter().map(|a| a.iter().any(|&x| x)).collect();
            let gap_ok = |from: usize, to: usize| (from..to).all(|l| free[l]);
            let mut ok: Vec<bool> = Vec::with_capacity(d.node_count());
            for (_, node) in d.nodes() {
                let value = match node {
                    OddNode::Sink(v) => *v == positive,
                    OddNode::Decision { level, children } => children.iter().enumerate().any(|(v, c)| {
                        allowed[*level][v] && ok[c.index()] && gap_ok(level + 1, d.level(*c))
                    }),
                };
                ok.push(value);
            }
            gap_ok(0, d.level(d.root())) && ok[d.root().index()]
        }
    })
}

fn level_of(d: &Odd, attribute: usize) -> usize {
    d.order()
        .iter()
        .position(|&a| a == attribute)
        .expect("validated attribute index")
}
