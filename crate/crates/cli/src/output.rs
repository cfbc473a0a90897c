//! Report tree rendered either as JSON or as indented `key: value` text.
//! Both renderings walk the same tree, so they cannot disagree on a value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use plumblat_core::{format_rational, Cycle, PlumbingGraph, RatCycle};
use serde_json::{Map, Value};

pub const SCHEMA: &str = "1";

#[derive(Debug, Clone)]
pub enum Node {
    Bool(bool),
    Int(BigInt),
    Rat(BigRational),
    Str(String),
    /// Nonzero coefficients by vertex name.
    Cycle(Vec<(String, String)>),
    List(Vec<Node>),
    Obj(Vec<(String, Node)>),
    Null,
}

impl Node {
    pub fn int(v: impl Into<BigInt>) -> Node {
        Node::Int(v.into())
    }

    pub fn str(s: impl Into<String>) -> Node {
        Node::Str(s.into())
    }

    pub fn cycle(g: &PlumbingGraph, c: &Cycle) -> Node {
        Node::Cycle(
            g.vertices()
                .filter(|&v| !num_traits::Zero::is_zero(c.get(v)))
                .map(|v| (g.name(v).to_string(), c.get(v).to_string()))
                .collect(),
        )
    }

    pub fn rat_cycle(g: &PlumbingGraph, c: &RatCycle) -> Node {
        Node::Cycle(
            g.vertices()
                .filter(|&v| !num_traits::Zero::is_zero(c.get(v)))
                .map(|v| (g.name(v).to_string(), format_rational(c.get(v))))
                .collect(),
        )
    }

    pub fn names(g: &PlumbingGraph, vs: &[plumblat_core::VertexId]) -> Node {
        Node::List(vs.iter().map(|&v| Node::str(g.name(v))).collect())
    }

    fn to_json(&self) -> Value {
        match self {
            Node::Bool(b) => Value::Bool(*b),
            Node::Int(i) => int_json(i),
            Node::Rat(r) if r.is_integer() => int_json(&r.to_integer()),
            Node::Rat(r) => Value::String(format_rational(r)),
            Node::Str(s) => Value::String(s.clone()),
            Node::Cycle(entries) => Value::Object(
                entries
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                    .collect(),
            ),
            Node::List(items) => Value::Array(items.iter().map(Node::to_json).collect()),
            Node::Obj(fields) => Value::Object(
                fields
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_json()))
                    .collect(),
            ),
            Node::Null => Value::Null,
        }
    }

    /// One-line form, when there is one.
    fn inline(&self) -> Option<String> {
        Some(match self {
            Node::Bool(b) => b.to_string(),
            Node::Int(i) => i.to_string(),
            Node::Rat(r) => format_rational(r),
            Node::Str(s) => s.clone(),
            Node::Cycle(entries) if entries.is_empty() => "0".to_string(),
            Node::Cycle(entries) => entries
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" "),
            Node::Null => "none".to_string(),
            Node::List(items) if items.is_empty() => "[]".to_string(),
            Node::List(items) if items.iter().all(|i| matches!(i, Node::Str(_))) => items
                .iter()
                .filter_map(Node::inline)
                .collect::<Vec<_>>()
                .join(","),
            _ => return None,
        })
    }

    fn human(&self, key: &str, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        if let Some(line) = self.inline() {
            out.push_str(&format!("{pad}{key}: {line}\n"));
            return;
        }
        match self {
            Node::List(items) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for (i, item) in items.iter().enumerate() {
                    item.human(&format!("[{i}]"), indent + 1, out);
                }
            }
            Node::Obj(fields) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for (k, v) in fields {
                    v.human(k, indent + 1, out);
                }
            }
            _ => unreachable!("scalars have an inline form"),
        }
    }
}

fn int_json(i: &BigInt) -> Value {
    match i.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(i.to_string()),
    }
}

/// A top-level report. `raw` is printed before the fields in human mode
/// (used for graph files, which then stay parseable).
#[derive(Debug, Default)]
pub struct Report {
    pub raw: Option<String>,
    fields: Vec<(String, Node)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn field(mut self, key: &str, value: Node) -> Self {
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn push(&mut self, key: &str, value: Node) {
        self.fields.push((key.to_string(), value));
    }

    pub fn extend(&mut self, other: Report) {
        self.fields.extend(other.fields);
    }

    pub fn json(&self) -> String {
        let mut map = Map::new();
        map.insert("schema".into(), Value::String(SCHEMA.into()));
        if let Some(raw) = &self.raw {
            map.insert("graph".into(), Value::String(raw.clone()));
        }
        for (k, v) in &self.fields {
            map.insert(k.clone(), v.to_json());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        if let Some(raw) = &self.raw {
            out.push_str(raw);
        }
        for (k, v) in &self.fields {
            let mut block = String::new();
            v.human(k, 0, &mut block);
            if self.raw.is_some() {
                // keep the graph file parseable
                for l in block.lines() {
                    out.push_str(&format!("# {l}\n"));
                }
            } else {
                out.push_str(&block);
            }
        }
        out
    }
}
