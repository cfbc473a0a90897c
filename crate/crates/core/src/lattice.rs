//! The intersection pairing on `L ⊗ Q`, dual base elements `E*_v`, the
//! Lipman cone, and the restriction operators used on subgraphs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cycle::{Cycle, RatCycle};
use crate::error::{Error, Result};
use crate::graph::{PlumbingGraph, VertexId};

fn check(g: &PlumbingGraph, key: crate::graph::GraphKey) -> Result<()> {
    if g.key() == key {
        Ok(())
    } else {
        Err(Error::GraphMismatch)
    }
}

/// `(a, E_v)` for a rational cycle.
pub fn pair_with_vertex(g: &PlumbingGraph, a: &RatCycle, v: VertexId) -> BigRational {
    let c = a.coeffs();
    let mut s = &c[v.0] * BigInt::from(g.euler(v));
    for &w in g.neighbors(v) {
        s += &c[w];
    }
    s
}

/// `(a, E_v)` for an integral cycle.
pub fn pair_int_with_vertex(g: &PlumbingGraph, a: &Cycle, v: VertexId) -> BigInt {
    let c = a.coeffs();
    let mut s = &c[v.0] * g.euler(v);
    for &w in g.neighbors(v) {
        s += &c[w];
    }
    s
}

/// `a^T I b`.
pub fn pairing(g: &PlumbingGraph, a: &RatCycle, b: &RatCycle) -> Result<BigRational> {
    check(g, a.key())?;
    check(g, b.key())?;
    Ok(g
        .vertices()
        .map(|v| b.get(v) * pair_with_vertex(g, a, v))
        .sum())
}

pub fn pairing_int(g: &PlumbingGraph, a: &Cycle, b: &Cycle) -> Result<BigInt> {
    check(g, a.key())?;
    check(g, b.key())?;
    Ok(g
        .vertices()
        .map(|v| b.get(v) * pair_int_with_vertex(g, a, v))
        .sum())
}

/// The dual base element with `(E*_v, E_w) = -δ_vw`: column `v` of `-I^{-1}`.
pub fn estar(g: &PlumbingGraph, v: VertexId) -> Result<RatCycle> {
    if v.0 >= g.len() {
        return Err(Error::UnknownVertex(format!("#{}", v.0)));
    }
    let inv = g.inverse();
    let coeffs = (0..g.len()).map(|u| -&inv[u][v.0]).collect();
    RatCycle::new(g, coeffs)
}

pub fn estar_named(g: &PlumbingGraph, name: &str) -> Result<RatCycle> {
    estar(g, g.vertex(name)?)
}

/// Coordinates of `l'` in the basis `{E*_v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EStarDecomposition {
    pub coeffs: Vec<BigRational>,
}

impl EStarDecomposition {
    /// The E*-support `I(l') = {v : a_v ≠ 0}`.
    pub fn support(&self) -> Vec<VertexId> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, _)| VertexId(i))
            .collect()
    }

    /// Reassembles `Σ a_v E*_v` in E-coordinates.
    pub fn compose(&self, g: &PlumbingGraph) -> Result<RatCycle> {
        if self.coeffs.len() != g.len() {
            return Err(Error::GraphMismatch);
        }
        let inv = g.inverse();
        let coeffs = (0..g.len())
            .map(|u| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(v, a)| -(&inv[u][v] * a))
                    .sum()
            })
            .collect();
        RatCycle::new(g, coeffs)
    }
}

/// `a_v = -(l', E_v)`.
pub fn estar_decompose(g: &PlumbingGraph, l: &RatCycle) -> Result<EStarDecomposition> {
    check(g, l.key())?;
    Ok(EStarDecomposition {
        coeffs: g.vertices().map(|v| -pair_with_vertex(g, l, v)).collect(),
    })
}

/// `l' ∈ S'`: `(l', E_v) <= 0` for every vertex.
pub fn in_lipman_cone(g: &PlumbingGraph, l: &RatCycle) -> Result<bool> {
    check(g, l.key())?;
    Ok(g.vertices().all(|v| !pair_with_vertex(g, l, v).is_positive()))
}

/// `l' ∈ -S'`: `(l', E_v) >= 0` for every vertex.
pub fn in_minus_s(g: &PlumbingGraph, l: &RatCycle) -> Result<bool> {
    check(g, l.key())?;
    Ok(g.vertices().all(|v| !pair_with_vertex(g, l, v).is_negative()))
}

/// `(l', E_v) >= 0` for the vertices in `subset` only (`R(l') ∈ -S'` of the
/// induced subgraph).
pub fn in_minus_s_on(g: &PlumbingGraph, l: &RatCycle, subset: &[VertexId]) -> Result<bool> {
    check(g, l.key())?;
    Ok(subset
        .iter()
        .all(|&v| !pair_with_vertex(g, l, v).is_negative()))
}

/// Membership in `L'`: all pairings with the `E_v` are integers.
pub fn in_dual_lattice(g: &PlumbingGraph, l: &RatCycle) -> Result<bool> {
    check(g, l.key())?;
    Ok(g.vertices().all(|v| pair_with_vertex(g, l, v).is_integer()))
}

/// One connected component of a restriction.
#[derive(Debug, Clone)]
pub struct Restricted {
    pub subgraph: crate::graph::Subgraph,
    pub value: RatCycle,
}

/// The cohomological restriction `R(E*_v) = E*_v(subgraph)` for `v` in the
/// subset and `0` otherwise, evaluated per connected component.
pub fn restrict_r(g: &PlumbingGraph, l: &RatCycle, subset: &[VertexId]) -> Result<Vec<Restricted>> {
    let a = estar_decompose(g, l)?;
    let parts = g.subgraph(subset)?;
    parts
        .into_iter()
        .map(|sub| {
            let local = EStarDecomposition {
                coeffs: sub.to_parent.iter().map(|p| a.coeffs[p.0].clone()).collect(),
            };
            let value = local.compose(&sub.graph)?;
            Ok(Restricted { subgraph: sub, value })
        })
        .collect()
}

/// Keeps the coefficients on `subset`, zero elsewhere.
pub fn restrict_cycle(z: &Cycle, subset: &[VertexId]) -> Cycle {
    let mut keep = vec![false; z.len()];
    for v in subset {
        keep[v.0] = true;
    }
    let coeffs = z
        .coeffs()
        .iter()
        .zip(keep)
        .map(|(c, k)| if k { c.clone() } else { BigInt::zero() })
        .collect();
    Cycle::from_parts(z.key(), coeffs)
}

/// Coefficientwise minimum.
pub fn meet(a: &Cycle, b: &Cycle) -> Result<Cycle> {
    a.same_graph(b)?;
    let coeffs = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| x.min(y).clone())
        .collect();
    Ok(Cycle::from_parts(a.key(), coeffs))
}

/// Transports a cycle on a component back to the parent graph.
pub fn extend_from_subgraph(
    g: &PlumbingGraph,
    sub: &crate::graph::Subgraph,
    local: &Cycle,
) -> Cycle {
    let mut out = Cycle::zero(g);
    for (i, p) in sub.to_parent.iter().enumerate() {
        out.set(*p, local.coeffs()[i].clone());
    }
    out
}

/// Restricts a cycle on the parent graph to a component.
pub fn cycle_on_subgraph(sub: &crate::graph::Subgraph, z: &Cycle) -> Cycle {
    let coeffs = sub.to_parent.iter().map(|p| z.get(*p).clone()).collect();
    Cycle::new(&sub.graph, coeffs).expect("component length")
}

pub fn rat_cycle_on_subgraph(sub: &crate::graph::Subgraph, z: &RatCycle) -> RatCycle {
    let coeffs = sub.to_parent.iter().map(|p| z.get(*p).clone()).collect();
    RatCycle::new(&sub.graph, coeffs).expect("component length")
}
