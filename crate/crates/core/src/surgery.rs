//! Blow-ups of the resolution and the induced pullback of cycles.
//!
//! Blowing up a generic point of `E_u` attaches a new `-1` vertex to `u`;
//! blowing up the intersection point of `E_u` and `E_w` subdivides the edge.
//! Original vertices keep their positions, new ones are appended in creation
//! order, and the pullback is stored as the matrix of the `π^*(E_v)`.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cycle::{format_rational, Cycle, RatCycle};
use crate::error::{Error, Result};
use crate::graph::{GraphKey, PlumbingGraph, VertexId};
use crate::lattice::restrict_cycle;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewVertex {
    pub id: VertexId,
    /// Graph distance to the original vertex set.
    pub distance: u64,
}

#[derive(Debug, Clone)]
pub struct BlowupResult {
    pub new_graph: PlumbingGraph,
    pub old_to_new: Vec<VertexId>,
    /// In creation order; the last one is the final `-1` curve.
    pub new_vertices: Vec<NewVertex>,
    original: GraphKey,
    /// Row `v`: coefficients of `π^*(E_v)` on the new graph.
    pullback: Vec<Vec<BigInt>>,
}

/// Graph under construction, with the pullback composed step by step.
struct Work {
    names: Vec<String>,
    euler: Vec<i64>,
    edges: Vec<(usize, usize)>,
    pullback: Vec<Vec<BigInt>>,
    taken: HashSet<String>,
    created: Vec<usize>,
}

impl Work {
    fn new(g: &PlumbingGraph) -> Self {
        let n = g.len();
        Work {
            names: g.names().to_vec(),
            euler: g.vertices().map(|v| g.euler(v)).collect(),
            edges: g.edges().to_vec(),
            pullback: (0..n)
                .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect(),
            taken: g.names().iter().cloned().collect(),
            created: Vec::new(),
        }
    }

    /// `<base>'k` with the smallest free `k >= 1`.
    fn fresh_name(&mut self, base: &str) -> String {
        let stem = base.split('\'').next().unwrap_or(base);
        let mut k = 1u64;
        loop {
            let name = format!("{stem}'{k}");
            if self.taken.insert(name.clone()) {
                return name;
            }
            k += 1;
        }
    }

    /// Appends a `-1` vertex whose pullback column is the sum of the columns
    /// of the curves through the blown-up point.
    fn add_vertex(&mut self, base: usize, through: &[usize]) -> usize {
        let name = self.fresh_name(&self.names[base].clone());
        let x = self.names.len();
        self.names.push(name);
        self.euler.push(-1);
        for &c in through {
            self.euler[c] -= 1;
        }
        for row in &mut self.pullback {
            let col: BigInt = through.iter().map(|&c| &row[c]).sum();
            row.push(col);
        }
        self.created.push(x);
        x
    }

    fn generic(&mut self, a: usize) -> usize {
        let x = self.add_vertex(a, &[a]);
        self.edges.push((a, x));
        x
    }

    fn edge(&mut self, a: usize, b: usize) -> Result<usize> {
        let pos = self
            .edges
            .iter()
            .position(|&(p, q)| (p, q) == (a, b) || (p, q) == (b, a))
            .ok_or_else(|| Error::NotAnEdge(self.names[a].clone(), self.names[b].clone()))?;
        let x = self.add_vertex(a, &[a, b]);
        self.edges[pos] = (a, x);
        self.edges.push((x, b));
        Ok(x)
    }

    fn finish(self, g: &PlumbingGraph) -> Result<BlowupResult> {
        let vertices = self.names.into_iter().zip(self.euler).collect();
        let new_graph = PlumbingGraph::new(vertices, self.edges)
            .map_err(|e| Error::Internal(format!("blow-up produced an invalid graph: {e}")))?;
        let distance = distances(&new_graph, g.len());
        Ok(BlowupResult {
            old_to_new: g.vertices().collect(),
            new_vertices: self
                .created
                .iter()
                .map(|&x| NewVertex {
                    id: VertexId(x),
                    distance: distance[x],
                })
                .collect(),
            original: g.key(),
            pullback: self.pullback,
            new_graph,
        })
    }
}

/// BFS distance from the first `n` vertices.
fn distances(g: &PlumbingGraph, n: usize) -> Vec<u64> {
    let mut d = vec![u64::MAX; g.len()];
    let mut queue: VecDeque<usize> = (0..n).collect();
    d[..n].fill(0);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(VertexId(v)) {
            if d[w] == u64::MAX {
                d[w] = d[v] + 1;
                queue.push_back(w);
            }
        }
    }
    d
}

fn check_vertex(g: &PlumbingGraph, v: VertexId) -> Result<()> {
    if v.0 < g.len() {
        Ok(())
    } else {
        Err(Error::UnknownVertex(format!("#{}", v.0)))
    }
}

/// Blow-up of a generic point of `E_u`.
pub fn blowup_generic(g: &PlumbingGraph, u: VertexId) -> Result<BlowupResult> {
    blowup_chain(g, u, 1)
}

/// Blow-up of the intersection point of `E_u` and `E_w`.
pub fn blowup_edge(g: &PlumbingGraph, u: VertexId, w: VertexId) -> Result<BlowupResult> {
    blowup_edge_chain(g, u, w, 1)
}

/// `k` successive generic blow-ups, each on the most recent curve (the first
/// on `E_u`).
pub fn blowup_chain(g: &PlumbingGraph, u: VertexId, k: u64) -> Result<BlowupResult> {
    check_vertex(g, u)?;
    if k == 0 {
        return Err(Error::precondition("number of blow-ups must be at least 1"));
    }
    let mut work = Work::new(g);
    let mut last = u.0;
    for _ in 0..k {
        last = work.generic(last);
    }
    work.finish(g)
}

/// Blows up the intersection of `E_u` and `E_{n_u}`, then `m - 1` more times
/// the intersection of `E_u` with its newest neighbour.
pub fn blowup_edge_chain(g: &PlumbingGraph, u: VertexId, n_u: VertexId, m: u64) -> Result<BlowupResult> {
    check_vertex(g, u)?;
    check_vertex(g, n_u)?;
    if !g.is_edge(u, n_u) {
        return Err(Error::NotAnEdge(g.name(u).to_string(), g.name(n_u).to_string()));
    }
    if m == 0 {
        return Err(Error::precondition("number of blow-ups must be at least 1"));
    }
    let mut work = Work::new(g);
    let mut other = n_u.0;
    for _ in 0..m {
        other = work.edge(u.0, other)?;
    }
    work.finish(g)
}

impl BlowupResult {
    /// The final `-1` curve `E_{u'}`.
    pub fn last(&self) -> VertexId {
        self.new_vertices.last().expect("at least one blow-up").id
    }

    /// Coefficients of `π^*(E_v)`.
    pub fn pullback_of(&self, v: VertexId) -> &[BigInt] {
        &self.pullback[v.0]
    }

    pub fn pullback(&self, c: &Cycle) -> Result<Cycle> {
        if c.key() != self.original {
            return Err(Error::GraphMismatch);
        }
        let mut out = vec![BigInt::zero(); self.new_graph.len()];
        for (row, a) in self.pullback.iter().zip(c.coeffs()) {
            if a.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(row) {
                *o += a * p;
            }
        }
        Cycle::new(&self.new_graph, out)
    }

    pub fn pullback_rat(&self, c: &RatCycle) -> Result<RatCycle> {
        if c.key() != self.original {
            return Err(Error::GraphMismatch);
        }
        let mut out = vec![BigRational::zero(); self.new_graph.len()];
        for (row, a) in self.pullback.iter().zip(c.coeffs()) {
            if a.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(row) {
                *o += a * BigRational::from(p.clone());
            }
        }
        RatCycle::new(&self.new_graph, out)
    }
}

/// `π^*(Z) - Σ_{new v} d(v) E_v`.
pub fn z_new(b: &BlowupResult, z: &Cycle) -> Result<Cycle> {
    let mut out = b.pullback(z)?;
    for nv in &b.new_vertices {
        let c = out.get(nv.id) - BigInt::from(nv.distance);
        if c.is_negative() {
            return Err(Error::NegativeCoefficient {
                vertex: b.new_graph.name(nv.id).to_string(),
                value: c.to_string(),
            });
        }
        out.set(nv.id, c);
    }
    Ok(out)
}

/// `Z_new - E_{u'}`. When the `u'`-coefficient is 1 this is also the
/// restriction of `Z_new` to the other vertices, and both forms are checked
/// against each other.
pub fn z_r(b: &BlowupResult, z_new: &Cycle) -> Result<Cycle> {
    let g = &b.new_graph;
    if z_new.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    let u = b.last();
    let c = z_new.get(u);
    if c < &BigInt::one() {
        return Err(Error::precondition(format!(
            "coefficient of Z_new at {} is {}, need at least 1",
            g.name(u),
            format_rational(&BigRational::from(c.clone()))
        )));
    }
    let zr = z_new - &Cycle::basis(g, u);
    if c.is_one() {
        let rest: Vec<VertexId> = g.vertices().filter(|&v| v != u).collect();
        if restrict_cycle(z_new, &rest) != zr {
            return Err(Error::Internal("Z_r subtraction and restriction disagree".into()));
        }
    }
    Ok(zr)
}
