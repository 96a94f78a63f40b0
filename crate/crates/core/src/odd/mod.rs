//! Ordered decision diagrams over multi-valued attributes.
//!
//! An [`Odd`] is an immutable arena of nodes. Decision nodes are labelled by
//! a *level* (a position in the diagram's attribute order) and have one child
//! per value of that attribute; children always sit at a strictly deeper
//! level or are sinks. Children are stored before their parents, so arena
//! order is a topological order.

mod dot;
mod text;

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{AttributeSpec, Instance};

pub use dot::export_dot;
pub use text::{deserialize, serialize};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OddError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("order is not a permutation of {0} attributes")]
    BadOrder(usize),
    #[error("node at level {level} has {got} children, attribute has {expected} values")]
    Arity { level: usize, expected: usize, got: usize },
    #[error("child {child} at level {child_level} does not lie below level {level}")]
    Ordering { level: usize, child: usize, child_level: usize },
    #[error("reference to unknown node {0}")]
    UnknownNode(usize),
    #[error("name '{0}' cannot be written in the text format")]
    Unwritable(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OddNode {
    Sink(bool),
    Decision { level: usize, children: Vec<NodeId> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Odd {
    /// Instance layout: instances passed to [`Odd::evaluate`] list values in
    /// this attribute order.
    attributes: Vec<AttributeSpec>,
    /// `order[level]` is the index into `attributes` tested at `level`.
    order: Vec<usize>,
    nodes: Vec<OddNode>,
    root: NodeId,
}

fn check_permutation(order: &[usize], n: usize) -> Result<(), OddError> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(OddError::BadOrder(n));
    }
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(OddError::BadOrder(n));
        }
    }
    Ok(())
}

impl Odd {
    /// The constant diagram: a single sink.
    pub fn constant(attributes: Vec<AttributeSpec>, order: Vec<usize>, value: bool) -> Result<Self, OddError> {
        let mut b = OddBuilder::new(attributes, order)?;
        let s = b.sink(value);
        Ok(b.finish(s))
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn num_levels(&self) -> usize {
        self.order.len()
    }

    pub fn level_attribute(&self, level: usize) -> &AttributeSpec {
        &self.attributes[self.order[level]]
    }

    pub fn level_cardinality(&self, level: usize) -> usize {
        self.level_attribute(level).cardinality()
    }

    /// Attribute specs in level order. Two diagrams can be combined iff these
    /// agree.
    pub fn level_specs(&self) -> impl Iterator<Item = &AttributeSpec> + '_ {
        self.order.iter().map(move |&i| &self.attributes[i])
    }

    pub fn same_order(&self, other: &Odd) -> bool {
        self.num_levels() == other.num_levels() && self.level_specs().eq(other.level_specs())
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &OddNode {
        &self.nodes[id.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &OddNode)> + '_ {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i as u32), n))
    }

    /// Level of a node; sinks sit at `num_levels()`.
    pub fn level(&self, id: NodeId) -> usize {
        match &self.nodes[id.index()] {
            OddNode::Sink(_) => self.num_levels(),
            OddNode::Decision { level, .. } => *level,
        }
    }

    pub fn sink_value(&self, id: NodeId) -> Option<bool> {
        match self.nodes[id.index()] {
            OddNode::Sink(v) => Some(v),
            OddNode::Decision { .. } => None,
        }
    }

    /// `Some(v)` when the whole diagram is the sink `v`.
    pub fn as_constant(&self) -> Option<bool> {
        self.sink_value(self.root)
    }

    /// Number of nodes reachable from the root, sinks included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn decision_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, OddNode::Decision { .. }))
            .count()
    }

    /// Follows the instance's values from the root to a sink. Attributes
    /// skipped by an edge are ignored.
    ///
    /// Panics if `e` does not assign an in-range value to every attribute.
    pub fn evaluate(&self, e: &Instance) -> bool {
        assert_eq!(e.0.len(), self.attributes.len(), "instance arity");
        let mut id = self.root;
        loop {
            match &self.nodes[id.index()] {
                OddNode::Sink(v) => return *v,
                OddNode::Decision { level, children } => {
                    id = children[e.0[self.order[*level]]];
                }
            }
        }
    }

    /// Drops redundant tests (nodes whose edges all lead to the same child)
    /// and merges structurally identical nodes, in one bottom-up pass.
    pub fn reduce(&self) -> Odd {
        let mut b = OddBuilder::new(self.attributes.clone(), self.order.clone())
            .expect("order already validated");
        let mut map: Vec<NodeId> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let id = match node {
                OddNode::Sink(v) => b.sink(*v),
                OddNode::Decision { level, children } => {
                    let kids = children.iter().map(|c| map[c.index()]).collect();
                    b.reduced(*level, kids)
                }
            };
            map.push(id);
        }
        b.finish(map[self.root.index()])
    }
}

/// Append-only construction of an [`Odd`].
///
/// [`OddBuilder::push`] creates a node exactly as asked; [`OddBuilder::reduced`]
/// skips redundant tests and reuses an existing identical node.
#[derive(Debug)]
pub struct OddBuilder {
    attributes: Vec<AttributeSpec>,
    order: Vec<usize>,
    nodes: Vec<OddNode>,
    sinks: [Option<NodeId>; 2],
    unique: HashMap<(usize, Vec<NodeId>), NodeId>,
}

impl OddBuilder {
    pub fn new(attributes: Vec<AttributeSpec>, order: Vec<usize>) -> Result<Self, OddError> {
        check_permutation(&order, attributes.len())?;
        Ok(Self {
            attributes,
            order,
            nodes: Vec::new(),
            sinks: [None, None],
            unique: HashMap::new(),
        })
    }

    pub fn num_levels(&self) -> usize {
        self.order.len()
    }

    pub fn level_cardinality(&self, level: usize) -> usize {
        self.attributes[self.order[level]].cardinality()
    }

    pub fn level(&self, id: NodeId) -> usize {
        match &self.nodes[id.index()] {
            OddNode::Sink(_) => self.num_levels(),
            OddNode::Decision { level, .. } => *level,
        }
    }

    pub fn node(&self, id: NodeId) -> &OddNode {
        &self.nodes[id.index()]
    }

    fn alloc(&mut self, node: OddNode) -> NodeId {
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node arena exceeds u32"));
        self.nodes.push(node);
        id
    }

    /// The sink labelled `value`; created on first use, shared afterwards.
    pub fn sink(&mut self, value: bool) -> NodeId {
        if let Some(id) = self.sinks[usize::from(value)] {
            return id;
        }
        let id = self.alloc(OddNode::Sink(value));
        self.sinks[usize::from(value)] = Some(id);
        id
    }

    /// Creates a decision node without any sharing or simplification.
    pub fn push(&mut self, level: usize, children: Vec<NodeId>) -> Result<NodeId, OddError> {
        if level >= self.num_levels() {
            return Err(OddError::Arity {
                level,
                expected: 0,
                got: children.len(),
            });
        }
        let expected = self.level_cardinality(level);
        if children.len() != expected {
            return Err(OddError::Arity {
                level,
                expected,
                got: children.len(),
            });
        }
        for &c in &children {
            if c.index() >= self.nodes.len() {
                return Err(OddError::UnknownNode(c.index()));
            }
            let child_level = self.level(c);
            if child_level <= level {
                return Err(OddError::Ordering {
                    level,
                    child: c.index(),
                    child_level,
                });
            }
        }
        Ok(self.alloc(OddNode::Decision { level, children }))
    }

    /// Creates (or reuses) a node in reduced form: when every child is the
    /// same node, that child is returned instead.
    pub fn reduced(&mut self, level: usize, children: Vec<NodeId>) -> NodeId {
        if children.iter().all(|c| *c == children[0]) {
            return children[0];
        }
        let key = (level, children);
        if let Some(&id) = self.unique.get(&key) {
            return id;
        }
        let id = self
            .push(level, key.1.clone())
            .expect("reduced nodes are built from valid children");
        self.unique.insert(key, id);
        id
    }

    /// Finishes the diagram rooted at `root`, dropping unreachable nodes.
    pub fn finish(self, root: NodeId) -> Odd {
        self.finish_with_map(root).0
    }

    /// Like [`OddBuilder::finish`], also returning where each builder node
    /// ended up (`None` when it was unreachable).
    pub fn finish_with_map(self, root: NodeId) -> (Odd, Vec<Option<NodeId>>) {
        let mut reachable = vec![false; self.nodes.len()];
        reachable[root.index()] = true;
        for i in (0..self.nodes.len()).rev() {
            if !reachable[i] {
                continue;
            }
            if let OddNode::Decision { children, .. } = &self.nodes[i] {
                for c in children {
                    reachable[c.index()] = true;
                }
            }
        }
        let mut map = vec![None; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.into_iter().enumerate() {
            if !reachable[i] {
                continue;
            }
            let node = match node {
                OddNode::Decision { level, children } => OddNode::Decision {
                    level,
                    children: children
                        .into_iter()
                        .map(|c| map[c.index()].expect("children precede parents"))
                        .collect(),
                },
                sink => sink,
            };
            map[i] = Some(NodeId(nodes.len() as u32));
            nodes.push(node);
        }
        let root = map[root.index()].expect("root is reachable");
        (
            Odd {
                attributes: self.attributes,
                order: self.order,
                nodes,
                root,
            },
            map,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary(n: usize) -> Vec<AttributeSpec> {
        (0..n).map(|i| AttributeSpec::indexed(format!("E{}", i + 1), 2)).collect()
    }

    /// x0 XOR x1 as a full decision tree.
    fn xor_tree() -> Odd {
        let mut b = OddBuilder::new(binary(2), vec![0, 1]).unwrap();
        let zero = b.sink(false);
        let one = b.sink(true);
        let a = b.push(1, vec![zero, one]).unwrap();
        let c = b.push(1, vec![one, zero]).unwrap();
        let r = b.push(0, vec![a, c]).unwrap();
        b.finish(r)
    }

    #[test]
    fn sink_only() {
        let d = Odd::constant(binary(3), vec![0, 1, 2], true).unwrap();
        assert_eq!(d.node_count(), 1);
        assert!(d.evaluate(&Instance(vec![0, 1, 0])));
    }

    #[test]
    fn hand_counted_tree() {
        let d = xor_tree();
        assert_eq!(d.node_count(), 5);
        assert_eq!(d.decision_count(), 3);
        assert!(!d.evaluate(&Instance(vec![0, 0])));
        assert!(d.evaluate(&Instance(vec![0, 1])));
        assert!(d.evaluate(&Instance(vec![1, 0])));
        assert!(!d.evaluate(&Instance(vec![1, 1])));
    }

    #[test]
    fn redundant_root_collapses() {
        let mut b = OddBuilder::new(binary(1), vec![0]).unwrap();
        let one = b.sink(true);
        let r = b.push(0, vec![one, one]).unwrap();
        let d = b.finish(r);
        assert_eq!(d.node_count(), 2);
        let r = d.reduce();
        assert_eq!(r.as_constant(), Some(true));
        assert_eq!(r.node_count(), 1);
    }

    #[test]
    fn reduce_is_idempotent_on_reduced_input() {
        let d = xor_tree();
        let r = d.reduce();
        assert_eq!(r.node_count(), d.node_count());
        assert_eq!(r.reduce(), r);
    }

    #[test]
    fn builder_enforces_ordering_and_arity() {
        let mut b = OddBuilder::new(binary(2), vec![1, 0]).unwrap();
        let zero = b.sink(false);
        let one = b.sink(true);
        let low = b.push(1, vec![zero, one]).unwrap();
        assert!(matches!(b.push(1, vec![low, one]), Err(OddError::Ordering { .. })));
        assert!(matches!(b.push(0, vec![low]), Err(OddError::Arity { .. })));
        assert!(OddBuilder::new(binary(2), vec![0, 0]).is_err());
    }

    #[test]
    fn evaluate_uses_instance_layout() {
        // Level 0 tests E2, level 1 tests E1; function is E2=v0 AND E1=v1.
        let mut b = OddBuilder::new(binary(2), vec![1, 0]).unwrap();
        let zero = b.sink(false);
        let one = b.sink(true);
        let e1 = b.push(1, vec![zero, one]).unwrap();
        let r = b.push(0, vec![e1, zero]).unwrap();
        let d = b.finish(r);
        assert!(d.evaluate(&Instance(vec![1, 0])));
        assert!(!d.evaluate(&Instance(vec![0, 1])));
    }

    #[test]
    fn finish_drops_unreachable_nodes() {
        let mut b = OddBuilder::new(binary(1), vec![0]).unwrap();
        let one = b.sink(true);
        let _zero = b.sink(false);
        let (d, map) = b.finish_with_map(one);
        assert_eq!(d.node_count(), 1);
        assert_eq!(map, vec![Some(NodeId(0)), None]);
    }
}
