//! Line-oriented `.odd` format.
//!
//! ```text
//! order: U B S
//! values U +ve -ve
//! values B +ve -ve
//! values S +ve -ve
//! sink 0 1
//! sink 1 0
//! node 2 S +ve:0 -ve:1
//! node 3 U +ve:2 -ve:1
//! root 3
//! ```
//!
//! `order:` lists attribute names by level. The `values` lines declare each
//! attribute's values and, by their order, the instance layout. Nodes must be
//! declared before they are referenced; `root` comes last.

use std::collections::HashMap;
use std::fmt::Write;

use super::{Odd, OddBuilder, OddError, OddNode};
use crate::model::AttributeSpec;

fn writable(name: &str) -> Result<&str, OddError> {
    if name.is_empty() || name.contains(char::is_whitespace) || name.contains(':') {
        Err(OddError::Unwritable(name.to_string()))
    } else {
        Ok(name)
    }
}

pub fn serialize(odd: &Odd) -> Result<String, OddError> {
    let mut out = String::new();
    let names = odd
        .level_specs()
        .map(|a| writable(&a.name))
        .collect::<Result<Vec<_>, _>>()?;
    writeln!(out, "order: {}", names.join(" ")).unwrap();
    for a in odd.attributes() {
        let values = a
            .values
            .iter()
            .map(|v| writable(v))
            .collect::<Result<Vec<_>, _>>()?;
        writeln!(out, "values {} {}", a.name, values.join(" ")).unwrap();
    }
    for (id, node) in odd.nodes() {
        match node {
            OddNode::Sink(v) => writeln!(out, "sink {} {}", id.index(), u8::from(*v)).unwrap(),
            OddNode::Decision { level, children } => {
                let attr = odd.level_attribute(*level);
                write!(out, "node {} {}", id.index(), attr.name).unwrap();
                for (value, child) in attr.values.iter().zip(children) {
                    write!(out, " {}:{}", value, child.index()).unwrap();
                }
                out.push('\n');
            }
        }
    }
    writeln!(out, "root {}", odd.root().index()).unwrap();
    Ok(out)
}

fn err(line: usize, message: impl Into<String>) -> OddError {
    OddError::Parse {
        line,
        message: message.into(),
    }
}

pub fn deserialize(text: &str) -> Result<Odd, OddError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let order_names: Vec<&str> = header
        .strip_prefix("order:")
        .ok_or_else(|| err(line, "expected 'order:' header"))?
        .split_whitespace()
        .collect();

    let mut attributes: Vec<AttributeSpec> = Vec::new();
    let mut builder: Option<OddBuilder> = None;
    let mut ids: HashMap<&str, super::NodeId> = HashMap::new();
    let mut root = None;

    for (line, text) in lines {
        if root.is_some() {
            return Err(err(line, "content after 'root'"));
        }
        let mut fields = text.split_whitespace();
        let keyword = fields.next().unwrap_or_default();
        if keyword == "values" {
            if builder.is_some() {
                return Err(err(line, "'values' after the first node"));
            }
            let name = fields.next().ok_or_else(|| err(line, "missing attribute name"))?;
            if attributes.iter().any(|a| a.name == name) {
                return Err(err(line, format!("attribute '{name}' declared twice")));
            }
            let values: Vec<&str> = fields.collect();
            if values.is_empty() {
                return Err(err(line, format!("attribute '{name}' has no values")));
            }
            attributes.push(AttributeSpec::new(name, values));
            continue;
        }
        let b = match &mut builder {
            Some(b) => b,
            None => {
                let order = order_names
                    .iter()
                    .map(|n| {
                        attributes
                            .iter()
                            .position(|a| a.name == *n)
                            .ok_or_else(|| err(line, format!("no 'values' line for attribute '{n}'")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                builder.insert(
                    OddBuilder::new(attributes.clone(), order)
                        .map_err(|_| err(line, "'order:' is not a permutation of the declared attributes"))?,
                )
            }
        };
        match keyword {
            "sink" => {
                let id = fields.next().ok_or_else(|| err(line, "missing node id"))?;
                let label = match fields.next() {
                    Some("0") => false,
                    Some("1") => true,
                    _ => return Err(err(line, "sink label must be 0 or 1")),
                };
                if b.sinks[usize::from(label)].is_some() {
                    return Err(err(line, format!("second {}-sink", u8::from(label))));
                }
                let node = b.sink(label);
                if ids.insert(id, node).is_some() {
                    return Err(err(line, format!("node id {id} declared twice")));
                }
            }
            "node" => {
                let id = fields.next().ok_or_else(|| err(line, "missing node id"))?;
                let name = fields.next().ok_or_else(|| err(line, "missing attribute"))?;
                let level = order_names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| err(line, format!("unknown attribute '{name}'")))?;
                let attr = &attributes[b.order[level]];
                let mut children = vec![None; attr.cardinality()];
                for edge in fields {
                    let (value, child) = edge
                        .rsplit_once(':')
                        .ok_or_else(|| err(line, format!("malformed edge '{edge}'")))?;
                    let v = attr
                        .value_index(value)
                        .ok_or_else(|| err(line, format!("unknown value '{value}' of '{name}'")))?;
                    let target = *ids
                        .get(child)
                        .ok_or_else(|| err(line, format!("edge to undeclared node {child}")))?;
                    if children[v].replace(target).is_some() {
                        return Err(err(line, format!("value '{value}' has two edges")));
                    }
                }
                let children = children
                    .into_iter()
                    .zip(&attr.values)
                    .map(|(c, v)| c.ok_or_else(|| err(line, format!("no edge for value '{v}'"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let node = b.push(level, children).map_err(|e| err(line, e.to_string()))?;
                if ids.insert(id, node).is_some() {
                    return Err(err(line, format!("node id {id} declared twice")));
                }
            }
            "root" => {
                let id = fields.next().ok_or_else(|| err(line, "missing root id"))?;
                root = Some(
                    *ids.get(id)
                        .ok_or_else(|| err(line, format!("root {id} is undeclared")))?,
                );
            }
            other => return Err(err(line, format!("unknown directive '{other}'"))),
        }
    }
    let last = text.lines().count();
    match (builder, root) {
        (Some(b), Some(r)) => Ok(b.finish(r)),
        _ => Err(err(last, "missing 'root' line")),
    }
}
