//! The anticanonical cycle, the Riemann-Roch function and Laufer's
//! incremental algorithms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cycle::{Cycle, RatCycle};
use crate::error::{Error, Result};
use crate::graph::{PlumbingGraph, VertexId};
use crate::lattice::{pair_int_with_vertex, pair_with_vertex, pairing};
use crate::matrix::mat_vec;
use crate::search::{min_chi_lower_bounded, SearchConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticanonicalCycle {
    pub zk: RatCycle,
}

/// Solves the adjunction system `(Z_K, E_v) = E_v^2 + 2`.
pub fn zk(g: &PlumbingGraph) -> AnticanonicalCycle {
    let rhs: Vec<BigRational> = g
        .vertices()
        .map(|v| BigRational::from(BigInt::from(g.euler(v) + 2)))
        .collect();
    let coeffs = mat_vec(g.inverse(), &rhs);
    AnticanonicalCycle {
        zk: RatCycle::new(g, coeffs).expect("length matches"),
    }
}

/// `χ(l') = -(l', l' - Z_K)/2`.
///
/// `(l', Z_K)` is expanded through the adjunction formula, so no `Z_K` is
/// materialized.
pub fn chi(g: &PlumbingGraph, l: &RatCycle) -> Result<BigRational> {
    let ll = pairing(g, l, l)?;
    let lk: BigRational = g
        .vertices()
        .map(|v| l.get(v) * BigInt::from(g.euler(v) + 2))
        .sum();
    Ok((lk - ll) / BigRational::from(BigInt::from(2)))
}

pub fn chi_int(g: &PlumbingGraph, l: &Cycle) -> Result<BigRational> {
    chi(g, &l.to_rational())
}

/// `χ(-l') - χ(-l' + l)`, evaluated as `-(l', l) - χ(l)`.
pub fn chi_drop(g: &PlumbingGraph, lprime: &RatCycle, l: &Cycle) -> Result<BigRational> {
    let lr = l.to_rational();
    Ok(-pairing(g, lprime, &lr)? - chi(g, &lr)?)
}

/// Vertices sorted by name; the tie-breaking order of both Laufer loops.
pub fn name_order(g: &PlumbingGraph) -> Vec<VertexId> {
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by(|a, b| g.name(*a).cmp(g.name(*b)));
    order
}

/// The Artin (fundamental) cycle: the minimal nonzero antinef cycle.
pub fn laufer_zmin(g: &PlumbingGraph) -> Result<Cycle> {
    laufer_zmin_ordered(g, &name_order(g))
}

/// Laufer's algorithm with an explicit vertex priority.
pub fn laufer_zmin_ordered(g: &PlumbingGraph, priority: &[VertexId]) -> Result<Cycle> {
    let n = g.len();
    let euler_sum: i64 = g.vertices().map(|v| g.euler(v).abs()).sum();
    let guard = g.group_order() * BigInt::from(euler_sum) * BigInt::from(n * n);
    let mut z = Cycle::reduced(g);
    let mut p: Vec<BigInt> = g.vertices().map(|v| pair_int_with_vertex(g, &z, v)).collect();
    let mut steps = BigInt::zero();
    while let Some(&v) = priority.iter().find(|v| p[v.0].is_positive()) {
        steps += 1;
        if steps > guard {
            return Err(Error::Internal(format!(
                "Laufer loop exceeded its step guard {guard}"
            )));
        }
        let next = z.get(v) + 1;
        z.set(v, next);
        p[v.0] += g.euler(v);
        for &w in g.neighbors(v) {
            p[w] += 1;
        }
    }
    Ok(z)
}

/// Laufer sequence for a Chern class on `Z`: adds `E_v` while some `v ∈ |Z-l|`
/// has `(l' - l, E_v) < 0`.
pub fn laufer_reduce(g: &PlumbingGraph, z: &Cycle, lprime: &RatCycle) -> Result<Cycle> {
    if z.key() != g.key() || lprime.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    if !z.is_effective() {
        return Err(Error::precondition("Z must be effective"));
    }
    let order = name_order(g);
    let mut l = Cycle::zero(g);
    let mut p: Vec<BigRational> = g.vertices().map(|v| pair_with_vertex(g, lprime, v)).collect();
    loop {
        let next = order
            .iter()
            .copied()
            .find(|&v| z.get(v) > l.get(v) && p[v.0].is_negative());
        let Some(v) = next else { break };
        let bumped = l.get(v) + BigInt::one();
        l.set(v, bumped);
        // (l' - l, E_w) drops by (E_v, E_w)
        p[v.0] -= BigRational::from(BigInt::from(g.euler(v)));
        for &w in g.neighbors(v) {
            p[w] -= BigRational::one();
        }
    }
    Ok(l)
}

/// Artin's criterion: `χ(l) >= 1` for every `l > 0`, decided by certified
/// minimization over `l >= E_v` for each `v`, and cross-checked against
/// `χ(Z_min) = 1`.
pub fn is_rational(g: &PlumbingGraph, config: &SearchConfig) -> Result<bool> {
    let mut artin = true;
    for v in g.vertices() {
        let cert = min_chi_lower_bounded(g, &Cycle::basis(g, v), config)?;
        if cert.min_value < BigRational::one() {
            artin = false;
            break;
        }
    }
    let zmin = laufer_zmin(g)?;
    let laufer = chi_int(g, &zmin)? == BigRational::one();
    if artin != laufer {
        return Err(Error::Internal(format!(
            "rationality criteria disagree: minimization says {artin}, chi(Z_min) = 1 says {laufer}"
        )));
    }
    Ok(artin)
}
