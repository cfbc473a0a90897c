//! Plumbing graphs: decorated trees with a negative-definite intersection
//! form, their text format, and induced subgraphs.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix, RatMatrix};

/// Position of a vertex in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Structural fingerprint used to detect cycles from different graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphKey(u64);

/// Exact intersection-form data, computed once at construction.
#[derive(Debug, Clone)]
pub struct IntersectionData {
    pub matrix: IntMatrix,
    pub inverse: RatMatrix,
    pub det: BigInt,
    /// `|det|`, the order of `L'/L`.
    pub group_order: BigInt,
    /// Leading principal minors in declaration order.
    pub minors: Vec<BigInt>,
}

#[derive(Debug, Clone)]
pub struct PlumbingGraph {
    names: Vec<String>,
    euler: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    data: IntersectionData,
    key: GraphKey,
}

impl PartialEq for PlumbingGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.euler == other.euler && {
            let norm = |g: &PlumbingGraph| {
                let mut e: Vec<_> = g.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
                e.sort();
                e
            };
            norm(self) == norm(other)
        }
    }
}

impl Eq for PlumbingGraph {}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl PlumbingGraph {
    /// Builds and validates a graph from `(name, euler)` pairs and edges
    /// given by vertex positions.
    pub fn new(vertices: Vec<(String, i64)>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::Validation("graph has no vertices".into()));
        }
        let mut index = HashMap::with_capacity(n);
        let mut names = Vec::with_capacity(n);
        let mut euler = Vec::with_capacity(n);
        for (i, (name, e)) in vertices.into_iter().enumerate() {
            if !valid_name(&name) {
                return Err(Error::Validation(format!("invalid vertex name `{name}`")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate vertex `{name}`")));
            }
            names.push(name);
            euler.push(e);
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::Validation("edge endpoint out of range".into()));
            }
            if a == b {
                return Err(Error::Validation(format!("self-loop at `{}`", names[a])));
            }
            if adjacency[a].contains(&b) {
                return Err(Error::Validation(format!(
                    "duplicate edge `{}`-`{}`",
                    names[a], names[b]
                )));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        if edges.len() + 1 != n || !connected(&adjacency) {
            return Err(Error::Validation("not a tree".into()));
        }

        let mut m: IntMatrix = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            m[i][i] = BigInt::from(euler[i]);
        }
        for &(a, b) in &edges {
            m[a][b] = BigInt::from(1);
            m[b][a] = BigInt::from(1);
        }
        let minors = matrix::leading_minors(&m);
        for (k, minor) in minors.iter().enumerate() {
            // (-1)^(k+1) det(M_{k+1}) > 0
            let ok = if k % 2 == 0 {
                minor.is_negative()
            } else {
                minor.is_positive()
            };
            if !ok {
                return Err(Error::Validation(format!(
                    "not negative definite: leading principal minor {} is {}",
                    k + 1,
                    minor
                )));
            }
        }
        let det = minors[n - 1].clone();
        let inverse = matrix::inverse(&m)
            .ok_or_else(|| Error::Internal("nonsingular matrix failed to invert".into()))?;
        let data = IntersectionData {
            matrix: m,
            inverse,
            group_order: det.abs(),
            det,
            minors,
        };

        let mut hasher = DefaultHasher::new();
        names.hash(&mut hasher);
        euler.hash(&mut hasher);
        let mut sorted: Vec<_> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        sorted.sort();
        sorted.hash(&mut hasher);
        let key = GraphKey(hasher.finish());

        Ok(PlumbingGraph {
            names,
            euler,
            edges,
            adjacency,
            index,
            data,
            key,
        })
    }

    /// Parses the line-oriented graph format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices: Vec<(String, i64)> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "vertex" => {
                    let [_, name, e] = tokens[..] else {
                        return Err(Error::syntax(line_no, "expected `vertex <name> <euler>`"));
                    };
                    if !valid_name(name) {
                        return Err(Error::syntax(line_no, format!("invalid vertex name `{name}`")));
                    }
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::syntax(line_no, format!("invalid euler number `{e}`")))?;
                    if index.contains_key(name) {
                        return Err(Error::syntax(line_no, format!("duplicate vertex `{name}`")));
                    }
                    index.insert(name.to_string(), vertices.len());
                    vertices.push((name.to_string(), e));
                }
                "edge" => {
                    let [_, a, b] = tokens[..] else {
                        return Err(Error::syntax(line_no, "expected `edge <name> <name>`"));
                    };
                    let lookup = |name: &str| {
                        index.get(name).copied().ok_or_else(|| {
                            Error::syntax(line_no, format!("undeclared vertex `{name}`"))
                        })
                    };
                    let (ia, ib) = (lookup(a)?, lookup(b)?);
                    if ia == ib {
                        return Err(Error::syntax(line_no, format!("self-loop at `{a}`")));
                    }
                    if edges
                        .iter()
                        .any(|&(x, y)| (x, y) == (ia, ib) || (x, y) == (ib, ia))
                    {
                        return Err(Error::syntax(line_no, format!("duplicate edge `{a}`-`{b}`")));
                    }
                    edges.push((ia, ib));
                }
                "genus" => {
                    return Err(Error::syntax(line_no, "genus decorations are not supported"));
                }
                other => {
                    return Err(Error::syntax(line_no, format!("unknown directive `{other}`")));
                }
            }
        }
        PlumbingGraph::new(vertices, edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn key(&self) -> GraphKey {
        self.key
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn euler(&self, v: VertexId) -> i64 {
        self.euler[v.0]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[usize] {
        &self.adjacency[v.0]
    }

    pub fn is_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacency[a.0].contains(&b.0)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.index
            .get(name)
            .map(|&i| VertexId(i))
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn intersection_data(&self) -> &IntersectionData {
        &self.data
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.data.matrix
    }

    pub fn inverse(&self) -> &RatMatrix {
        &self.data.inverse
    }

    pub fn det(&self) -> &BigInt {
        &self.data.det
    }

    pub fn group_order(&self) -> &BigInt {
        &self.data.group_order
    }

    /// Rational pivots of `I = L D L^T`; all negative for a valid graph.
    pub fn ldl_pivots(&self) -> Vec<BigRational> {
        matrix::ldl_pivots(&self.data.matrix).expect("valid graph has nonzero pivots")
    }

    /// Induced subgraph on `subset`, split into connected components.
    ///
    /// Components are ordered by their first vertex; inside a component the
    /// parent declaration order is kept. Each entry carries the map from
    /// component positions to parent positions.
    pub fn subgraph(&self, subset: &[VertexId]) -> Result<Vec<Subgraph>> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut member = vec![false; self.len()];
        for v in subset {
            if v.0 >= self.len() {
                return Err(Error::UnknownVertex(format!("#{}", v.0)));
            }
            member[v.0] = true;
        }
        let mut component = vec![usize::MAX; self.len()];
        let mut count = 0;
        for start in 0..self.len() {
            if !member[start] || component[start] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            component[start] = count;
            while let Some(v) = queue.pop_front() {
                for &w in &self.adjacency[v] {
                    if member[w] && component[w] == usize::MAX {
                        component[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (0..count)
            .map(|c| {
                let parent: Vec<usize> = (0..self.len()).filter(|&v| component[v] == c).collect();
                let local: HashMap<usize, usize> =
                    parent.iter().enumerate().map(|(i, &p)| (p, i)).collect();
                let vertices = parent
                    .iter()
                    .map(|&p| (self.names[p].clone(), self.euler[p]))
                    .collect();
                let edges = self
                    .edges
                    .iter()
                    .filter_map(|&(a, b)| Some((*local.get(&a)?, *local.get(&b)?)))
                    .collect();
                let graph = PlumbingGraph::new(vertices, edges).map_err(|e| {
                    Error::Internal(format!("induced subgraph failed validation: {e}"))
                })?;
                Ok(Subgraph {
                    graph,
                    to_parent: parent.into_iter().map(VertexId).collect(),
                })
            })
            .collect()
    }

    /// Builds a copy with vertices re-declared in `order` (a permutation).
    pub fn reordered(&self, order: &[VertexId]) -> Result<Self> {
        let mut pos = vec![usize::MAX; self.len()];
        for (i, v) in order.iter().enumerate() {
            pos[v.0] = i;
        }
        if order.len() != self.len() || pos.contains(&usize::MAX) {
            return Err(Error::precondition("order is not a permutation of the vertices"));
        }
        let vertices = order
            .iter()
            .map(|v| (self.names[v.0].clone(), self.euler[v.0]))
            .collect();
        let edges = self.edges.iter().map(|&(a, b)| (pos[a], pos[b])).collect();
        PlumbingGraph::new(vertices, edges)
    }
}

#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: PlumbingGraph,
    /// Component position -> parent vertex.
    pub to_parent: Vec<VertexId>,
}

fn connected(adjacency: &[Vec<usize>]) -> bool {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Serializes in the graph file format; `parse` reads it back unchanged.
impl fmt::Display for PlumbingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, e) in self.names.iter().zip(&self.euler) {
            writeln!(f, "vertex {name} {e}")?;
        }
        for &(a, b) in &self.edges {
            writeln!(f, "edge {} {}", self.names[a], self.names[b])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let g = PlumbingGraph::parse("vertex v -2").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.matrix()[0][0], BigInt::from(-2));
        assert_eq!(g.det(), &BigInt::from(-2));
        assert_eq!(g.group_order(), &BigInt::from(2));
    }

    #[test]
    fn a2_chain() {
        let g = PlumbingGraph::parse("vertex a -2\nvertex b -2\nedge a b\n").unwrap();
        assert_eq!(g.det(), &BigInt::from(3));
        assert_eq!(g.group_order(), &BigInt::from(3));
    }

    #[test]
    fn singular_form_rejected_at_second_minor() {
        let err = PlumbingGraph::parse("vertex a -1\nvertex b -1\nedge a b").unwrap_err();
        match err {
            Error::Validation(msg) => assert!(msg.contains("minor 2"), "{msg}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn syntax_errors() {
        let cases = [
            "vertex a -2\nvertex a -2",
            "vertex a -2\nvertex b -2\nedge a b\nedge b a",
            "vertex a -2\nedge a c",
            "vertex a -2\ngenus a 1",
            "vertex a- -2",
            "vertex a x",
            "vertex a -2 7",
            "node a -2",
            "vertex a -2\nedge a a",
        ];
        for text in cases {
            assert!(
                matches!(PlumbingGraph::parse(text), Err(Error::Syntax { .. })),
                "{text}"
            );
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = PlumbingGraph::parse("# A1\n\n  vertex v -2  \n# end\n").unwrap();
        assert_eq!(g.names(), ["v"]);
    }

    #[test]
    fn not_a_tree() {
        let disconnected = "vertex a -2\nvertex b -2";
        let err = PlumbingGraph::parse(disconnected).unwrap_err();
        assert_eq!(err, Error::Validation("not a tree".into()));
        let cycle = "vertex a -3\nvertex b -3\nvertex c -3\nedge a b\nedge b c\nedge c a";
        assert_eq!(
            PlumbingGraph::parse(cycle).unwrap_err(),
            Error::Validation("not a tree".into())
        );
        assert!(matches!(PlumbingGraph::parse(""), Err(Error::Validation(_))));
    }

    #[test]
    fn display_round_trip() {
        let text = "vertex c -1\nvertex x -2\nvertex y -3\nvertex z -7\nedge c x\nedge y c\nedge c z\n";
        let g = PlumbingGraph::parse(text).unwrap();
        assert_eq!(g.to_string(), text);
        assert_eq!(PlumbingGraph::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn subgraph_components() {
        let a2 = PlumbingGraph::parse("vertex a -2\nvertex b -2\nedge a b").unwrap();
        let parts = a2.subgraph(&[VertexId(0)]).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].graph, PlumbingGraph::parse("vertex a -2").unwrap());

        let whole = a2.subgraph(&[VertexId(0), VertexId(1)]).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].graph, a2);

        let chain =
            PlumbingGraph::parse("vertex a -2\nvertex b -2\nvertex c -2\nedge a b\nedge b c")
                .unwrap();
        let parts = chain.subgraph(&[VertexId(0), VertexId(2)]).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].to_parent, vec![VertexId(0)]);
        assert_eq!(parts[1].to_parent, vec![VertexId(2)]);

        assert_eq!(chain.subgraph(&[]).unwrap_err(), Error::EmptySubset);
    }

    #[test]
    fn graph_keys_distinguish() {
        let a = PlumbingGraph::parse("vertex a -2").unwrap();
        let b = PlumbingGraph::parse("vertex a -3").unwrap();
        assert_ne!(a.key(), b.key());
        assert_eq!(a.key(), a.clone().key());
    }
}
