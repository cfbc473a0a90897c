//! Lower endpoints of `h^1` intervals: line bundles on a cycle, natural line
//! bundles, `O_Z` and the geometric genus of generic analytic structures,
//! together with the dimension counts of effective Cartier divisor spaces.
//!
//! Every floor splits over the connected components of `|Z|`: components of
//! the support are not adjacent, so `χ(l_1 + l_2) = χ(l_1) + χ(l_2)` and the
//! drops add up. Upper endpoints depend on the analytic structure and are
//! never computed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chi::chi;
use crate::cycle::{Cycle, RatCycle};
use crate::error::{Error, Result};
use crate::graph::{PlumbingGraph, VertexId};
use crate::lattice::{
    cycle_on_subgraph, extend_from_subgraph, in_dual_lattice, in_minus_s, pairing, restrict_cycle,
    restrict_r,
};
use crate::search::{min_chi_box, min_chi_in_box, min_chi_lower_bounded, MinChiCertificate, SearchConfig};

pub const CEILING_UNKNOWN: &str = "unknown (analytic)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentFloor {
    /// Component vertices, as ids of the input graph.
    pub vertices: Vec<VertexId>,
    pub floor: BigRational,
    /// Minimizer on the input graph.
    pub minimizer: Cycle,
    /// Certificate of the search, stated on the component graph.
    pub certificate: MinChiCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalCheck {
    pub applicable: bool,
    /// Vertices of `|Z|` where the `E`-coefficient of `l'` is not negative.
    pub offending: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalFloorReport {
    pub floor: BigRational,
    /// `reference - floor`: the minimum of the underlying `χ` problem, where
    /// the reference is `χ(-l')` for line bundles and `1` for `O_Z` and `p_g`.
    pub min_value: BigRational,
    pub minimizer: Cycle,
    /// `l' ∈ L'`, which guarantees an integral floor.
    pub lprime_in_dual_lattice: bool,
    pub natural: Option<NaturalCheck>,
    pub components: Vec<ComponentFloor>,
    pub ceiling: &'static str,
}

impl IntervalFloorReport {
    pub fn nodes(&self) -> u64 {
        self.components.iter().map(|c| c.certificate.nodes).sum()
    }

    pub fn integral_floor(&self) -> Option<BigInt> {
        self.floor.is_integer().then(|| self.floor.to_integer())
    }
}

fn check_effective(z: &Cycle, what: &str) -> Result<()> {
    if z.is_effective() {
        Ok(())
    } else {
        Err(Error::precondition(format!("{what} must be effective")))
    }
}

/// `q = χ(-l') - min_{0 <= l <= Z} χ(-l' + l)`.
pub fn interval_floor_line_bundle(
    g: &PlumbingGraph,
    z: &Cycle,
    lprime: &RatCycle,
    config: &SearchConfig,
) -> Result<IntervalFloorReport> {
    if z.key() != g.key() || lprime.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    check_effective(z, "Z")?;
    let top = chi(g, &-lprime)?;
    let mut components = Vec::new();
    let mut minimizer = Cycle::zero(g);
    let mut floor = BigRational::zero();
    let support = z.support();
    if !support.is_empty() {
        for part in restrict_r(g, lprime, &support)? {
            let sub = &part.subgraph;
            let local_z = cycle_on_subgraph(sub, z);
            let cert = min_chi_box(&sub.graph, &local_z, &part.value, config)?;
            let drop = chi(&sub.graph, &-&part.value)? - &cert.min_value;
            let m = extend_from_subgraph(g, sub, &cert.minimizer);
            minimizer = &minimizer + &m;
            floor += &drop;
            components.push(ComponentFloor {
                vertices: sub.to_parent.clone(),
                floor: drop,
                minimizer: m,
                certificate: cert,
            });
        }
    }
    Ok(IntervalFloorReport {
        min_value: &top - &floor,
        floor,
        minimizer,
        lprime_in_dual_lattice: in_dual_lattice(g, lprime)?,
        natural: None,
        components,
        ceiling: CEILING_UNKNOWN,
    })
}

/// Sign condition under which natural line bundles attain the floor:
/// every `E`-coefficient of `l'` on `|Z|` is negative.
pub fn natural_floor_applicable(g: &PlumbingGraph, z: &Cycle, lprime: &RatCycle) -> Result<NaturalCheck> {
    if z.key() != g.key() || lprime.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    let offending: Vec<VertexId> = z
        .support()
        .into_iter()
        .filter(|&v| !lprime.get(v).is_negative())
        .collect();
    Ok(NaturalCheck {
        applicable: offending.is_empty(),
        offending,
    })
}

/// `h^1(O_Z(l'))` of the natural line bundle on a generic singularity.
pub fn generic_natural_h1(
    g: &PlumbingGraph,
    z: &Cycle,
    lprime: &RatCycle,
    config: &SearchConfig,
) -> Result<IntervalFloorReport> {
    let mut report = interval_floor_line_bundle(g, z, lprime, config)?;
    report.natural = Some(natural_floor_applicable(g, z, lprime)?);
    Ok(report)
}

/// Geometric genus of the generic analytic structure: `1 - min_{l >= E} χ(l)`.
pub fn generic_pg(g: &PlumbingGraph, config: &SearchConfig) -> Result<IntervalFloorReport> {
    let cert = min_chi_lower_bounded(g, &Cycle::reduced(g), config)?;
    let floor = BigRational::one() - &cert.min_value;
    Ok(IntervalFloorReport {
        min_value: cert.min_value.clone(),
        floor: floor.clone(),
        minimizer: cert.minimizer.clone(),
        lprime_in_dual_lattice: true,
        natural: None,
        components: vec![ComponentFloor {
            vertices: g.vertices().collect(),
            floor,
            minimizer: cert.minimizer.clone(),
            certificate: cert,
        }],
        ceiling: CEILING_UNKNOWN,
    })
}

/// Generic `h^1(O_Z)`: `1 - min_{E_{|Z|} <= l <= Z} χ(l)`, summed over the
/// components of `|Z|`.
pub fn generic_h1_oz_floor(g: &PlumbingGraph, z: &Cycle, config: &SearchConfig) -> Result<IntervalFloorReport> {
    if z.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    check_effective(z, "Z")?;
    if z.is_zero() {
        return Err(Error::precondition("Z must be nonzero"));
    }
    let mut components = Vec::new();
    let mut minimizer = Cycle::zero(g);
    let mut floor = BigRational::zero();
    for sub in g.subgraph(&z.support())? {
        let local_z = cycle_on_subgraph(&sub, z);
        let cert = min_chi_in_box(
            &sub.graph,
            &RatCycle::zero(&sub.graph),
            &Cycle::reduced(&sub.graph),
            &local_z,
            config,
        )?;
        let part = BigRational::one() - &cert.min_value;
        let m = extend_from_subgraph(g, &sub, &cert.minimizer);
        minimizer = &minimizer + &m;
        floor += &part;
        components.push(ComponentFloor {
            vertices: sub.to_parent.clone(),
            floor: part,
            minimizer: m,
            certificate: cert,
        });
    }
    let count = BigRational::from(BigInt::from(components.len()));
    Ok(IntervalFloorReport {
        min_value: count - &floor,
        floor,
        minimizer,
        lprime_in_dual_lattice: true,
        natural: None,
        components,
        ceiling: CEILING_UNKNOWN,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilization {
    pub value: BigRational,
    pub doubled_value: BigRational,
    /// The bounded floor did not change when `Z` was doubled.
    pub stable: bool,
}

/// Compares the bounded `O_Z` floor at `Z` and `2Z`.
pub fn generic_h1_oz_stabilization(g: &PlumbingGraph, z: &Cycle, config: &SearchConfig) -> Result<Stabilization> {
    let value = generic_h1_oz_floor(g, z, config)?.floor;
    let doubled_value = generic_h1_oz_floor(g, &z.scale(&BigInt::from(2)), config)?.floor;
    Ok(Stabilization {
        stable: value == doubled_value,
        value,
        doubled_value,
    })
}

/// `ECa^{l'}` is nonempty exactly when `l' ∈ -S'` (the zero class carries the
/// empty divisor).
pub fn eca_nonempty(g: &PlumbingGraph, lprime: &RatCycle) -> Result<bool> {
    in_minus_s(g, lprime)
}

fn integral_pairing(g: &PlumbingGraph, lprime: &RatCycle, z: &Cycle) -> Result<BigInt> {
    let p = pairing(g, lprime, &z.to_rational())?;
    if !p.is_integer() {
        return Err(Error::precondition(format!(
            "(l', Z) = {} is not an integer; l' must lie in the dual lattice",
            crate::cycle::format_rational(&p)
        )));
    }
    Ok(p.to_integer())
}

/// `dim ECa^{l'}(Z) = (l', Z)`.
pub fn eca_dim(g: &PlumbingGraph, z: &Cycle, lprime: &RatCycle) -> Result<BigInt> {
    if z.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    if !in_minus_s(g, lprime)? {
        return Err(Error::precondition("l' is not in -S'"));
    }
    if lprime.is_zero() {
        return Ok(BigInt::zero());
    }
    if z.coeffs().iter().any(|c| !c.is_positive()) {
        return Err(Error::precondition("Z must satisfy Z >= E"));
    }
    integral_pairing(g, lprime, z)
}

/// Fiber dimension of the Abel map: `(l', Z) + h^1(Z, L) - h^1(O_Z)`, with
/// both `h^1` values supplied by the caller.
pub fn fiber_dim(g: &PlumbingGraph, z: &Cycle, lprime: &RatCycle, h1_l: u64, h1_oz: u64) -> Result<BigInt> {
    if z.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    if !in_minus_s(g, lprime)? {
        return Err(Error::precondition("l' is not in -S'"));
    }
    Ok(integral_pairing(g, lprime, z)? + BigInt::from(h1_l) - BigInt::from(h1_oz))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EzReport {
    pub value: BigRational,
    pub total: IntervalFloorReport,
    /// Floor on `Z` restricted to `V \ I`; `None` when that cycle vanishes.
    pub complement: Option<IntervalFloorReport>,
}

/// `e_Z = h^1(O_Z) - h^1(O_{Z|V \ I})` with both terms at their generic
/// values.
pub fn generic_ez(g: &PlumbingGraph, z: &Cycle, subset: &[VertexId], config: &SearchConfig) -> Result<EzReport> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut in_i = vec![false; g.len()];
    for v in subset {
        if v.0 >= g.len() {
            return Err(Error::UnknownVertex(format!("#{}", v.0)));
        }
        in_i[v.0] = true;
    }
    let total = generic_h1_oz_floor(g, z, config)?;
    let rest: Vec<VertexId> = g.vertices().filter(|v| !in_i[v.0]).collect();
    let zr = restrict_cycle(z, &rest);
    let complement = if zr.is_zero() {
        None
    } else {
        Some(generic_h1_oz_floor(g, &zr, config)?)
    };
    let value = match &complement {
        Some(c) => &total.floor - &c.floor,
        None => total.floor.clone(),
    };
    Ok(EzReport {
        value,
        total,
        complement,
    })
}

/// `e_Z` from externally known `h^1` values.
pub fn ez_with_oracle(h1_oz: u64, h1_restricted: u64) -> BigInt {
    BigInt::from(h1_oz) - BigInt::from(h1_restricted)
}
