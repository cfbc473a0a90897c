use num_bigint::BigInt;
use plumblat_core::chi::{chi, chi_int, is_rational, laufer_reduce, laufer_zmin, zk};
use plumblat_core::genus::{
    eca_dim, eca_nonempty, ez_with_oracle, fiber_dim, generic_ez, generic_h1_oz_floor,
    generic_h1_oz_stabilization, generic_natural_h1, generic_pg, IntervalFloorReport,
};
use plumblat_core::lattice::{estar_decompose, estar_named, pairing, restrict_r};
use plumblat_core::relative::{relgen1_nonempty, relgen_h1, reldom_check, relspace_dim, H1Oracle, RelReport};
use plumblat_core::search::{min_chi_box, min_chi_lower_bounded, LevelSetBound, Region};
use plumblat_core::surgery::{blowup_chain, blowup_edge_chain, z_new, z_r, BlowupResult};
use plumblat_core::{Cycle, Error, MinChiCertificate, PlumbingGraph, RatCycle, SearchConfig, VertexId};

use crate::output::{Node, Report};
use crate::{read_input, BlowupSpec, Command, Failure, RelArgs};

fn cycle(g: &PlumbingGraph, s: &str) -> Result<Cycle, Failure> {
    let r = RatCycle::parse(g, s)?;
    r.to_cycle().ok_or_else(|| {
        Failure::Core(Error::CycleLiteral {
            literal: s.to_string(),
            message: "coefficients must be integers".into(),
        })
    })
}

/// A rational cycle, or `estar:<v>` / `-estar:<v>`.
fn lprime(g: &PlumbingGraph, s: &str) -> Result<RatCycle, Failure> {
    let s = s.trim();
    if let Some(v) = s.strip_prefix("-estar:") {
        return Ok(-&estar_named(g, v)?);
    }
    if let Some(v) = s.strip_prefix("estar:") {
        return Ok(estar_named(g, v)?);
    }
    Ok(RatCycle::parse(g, s)?)
}

fn subset(g: &PlumbingGraph, s: &str) -> Result<Vec<VertexId>, Failure> {
    let names: Vec<&str> = s.split(',').map(str::trim).filter(|n| !n.is_empty()).collect();
    if names.is_empty() {
        return Err(Error::EmptySubset.into());
    }
    let mut out: Vec<VertexId> = names.iter().map(|n| g.vertex(n)).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn certificate(g: &PlumbingGraph, c: &MinChiCertificate) -> Node {
    let region = match &c.region {
        Region::Box { lo, hi } => Node::Obj(vec![
            ("kind".into(), Node::str("box")),
            ("lo".into(), Node::cycle(g, lo)),
            ("hi".into(), Node::cycle(g, hi)),
        ]),
        Region::LowerBound { c } => Node::Obj(vec![
            ("kind".into(), Node::str("lower")),
            ("c".into(), Node::cycle(g, c)),
        ]),
    };
    let mut fields = vec![("region".into(), region)];
    if let Some(b) = &c.bound {
        fields.push(("level_set".into(), level_set(g, b)));
    }
    fields.push(("nodes".into(), Node::int(c.nodes)));
    Node::Obj(fields)
}

fn level_set(g: &PlumbingGraph, b: &LevelSetBound) -> Node {
    let radius = Cycle::new(g, b.radius.clone()).expect("one radius per vertex");
    Node::Obj(vec![
        ("center".into(), Node::rat_cycle(g, &b.center)),
        ("center_value".into(), Node::Rat(b.center_value.clone())),
        ("start".into(), Node::cycle(g, &b.start)),
        ("start_value".into(), Node::Rat(b.start_value.clone())),
        ("radius".into(), Node::cycle(g, &radius)),
        ("lo".into(), Node::cycle(g, &b.lo)),
        ("hi".into(), Node::cycle(g, &b.hi)),
    ])
}

fn floor_report(g: &PlumbingGraph, r: &IntervalFloorReport) -> Report {
    let mut rep = Report::new()
        .field("floor", Node::Rat(r.floor.clone()))
        .field("min_value", Node::Rat(r.min_value.clone()))
        .field("minimizer", Node::cycle(g, &r.minimizer));
    if let Some(n) = &r.natural {
        rep.push("applicable", Node::Bool(n.applicable));
        rep.push("offending", Node::names(g, &n.offending));
    }
    rep.push("lprime_in_dual_lattice", Node::Bool(r.lprime_in_dual_lattice));
    rep.push(
        "components",
        Node::List(
            r.components
                .iter()
                .map(|c| {
                    Node::Obj(vec![
                        ("vertices".into(), Node::names(g, &c.vertices)),
                        ("floor".into(), Node::Rat(c.floor.clone())),
                        ("minimizer".into(), Node::cycle(g, &c.minimizer)),
                        ("nodes".into(), Node::int(c.certificate.nodes)),
                    ])
                })
                .collect(),
        ),
    );
    rep.push("ceiling", Node::str(r.ceiling));
    rep
}

fn rel_report(g: &PlumbingGraph, oracle: &H1Oracle, r: &RelReport) -> Report {
    Report::new()
        .field("oracle", Node::str(oracle.source().as_str()))
        .field("dominant", Node::Bool(r.dominant))
        .field(
            "witness",
            r.witness.as_ref().map_or(Node::Null, |w| Node::cycle(g, w)),
        )
        .field("rel_h1", Node::Rat(r.rel_h1.clone()))
        .field("argmin", Node::cycle(g, &r.argmin))
        .field("points", Node::int(r.points))
}

fn oracle(
    g: &PlumbingGraph,
    a: &RelArgs,
    z: &Cycle,
    z1: &Cycle,
    lp: &RatCycle,
    config: &SearchConfig,
) -> Result<H1Oracle, Failure> {
    Ok(match a.oracle.as_str() {
        "zero" => H1Oracle::zero(g, z, z1)?,
        "generic" => H1Oracle::generic_natural(g, z, z1, lp, config)?,
        path => {
            let o = H1Oracle::parse(g, &read_input(path)?, config.budget)?;
            if o.z() != z || o.z1() != z1 {
                return Err(Error::PreconditionFailed(format!(
                    "oracle file is for z={} z1={}, not the requested cycles",
                    o.z().literal(g),
                    o.z1().literal(g)
                ))
                .into());
            }
            o
        }
    })
}

fn blowup(g: &PlumbingGraph, spec: &BlowupSpec) -> Result<BlowupResult, Failure> {
    match (&spec.at, &spec.edge) {
        (Some(v), _) => Ok(blowup_chain(g, g.vertex(v)?, spec.times)?),
        (None, Some(e)) => {
            let (u, w) = e
                .split_once(',')
                .ok_or_else(|| Failure::Usage(format!("--edge expects `u,w`, got `{e}`")))?;
            Ok(blowup_edge_chain(g, g.vertex(u.trim())?, g.vertex(w.trim())?, spec.times)?)
        }
        (None, None) => Err(Failure::Usage("one of --at or --edge is required".into())),
    }
}

fn blowup_fields(g: &PlumbingGraph, b: &BlowupResult) -> Report {
    let ng = &b.new_graph;
    let mut rep = Report::new();
    rep.raw = Some(ng.to_string());
    rep.push(
        "new_vertices",
        Node::List(
            b.new_vertices
                .iter()
                .map(|nv| {
                    Node::Obj(vec![
                        ("name".into(), Node::str(ng.name(nv.id))),
                        ("euler".into(), Node::int(ng.euler(nv.id))),
                        ("distance".into(), Node::int(nv.distance)),
                    ])
                })
                .collect(),
        ),
    );
    rep.push(
        "pullback",
        Node::Obj(
            g.vertices()
                .map(|v| {
                    let p = b.pullback(&Cycle::basis(g, v)).expect("same graph");
                    (g.name(v).to_string(), Node::cycle(ng, &p))
                })
                .collect(),
        ),
    );
    rep
}

pub fn dispatch(g: &PlumbingGraph, cmd: &Command, config: &SearchConfig) -> Result<Report, Failure> {
    Ok(match cmd {
        Command::Validate => Report::new()
            .field("valid", Node::Bool(true))
            .field("vertices", Node::int(g.len() as u64))
            .field("det", Node::Int(g.det().clone()))
            .field("group_order", Node::Int(g.group_order().clone()))
            .field(
                "minors",
                Node::List(
                    g.intersection_data()
                        .minors
                        .iter()
                        .map(|m| Node::Int(m.clone()))
                        .collect(),
                ),
            )
            .field(
                "ldl_pivots",
                Node::List(g.ldl_pivots().into_iter().map(Node::Rat).collect()),
            ),
        Command::Invariants => {
            let zmin = laufer_zmin(g)?;
            Report::new()
                .field("vertices", Node::int(g.len() as u64))
                .field("det", Node::Int(g.det().clone()))
                .field("group_order", Node::Int(g.group_order().clone()))
                .field("zk", Node::rat_cycle(g, &zk(g).zk))
                .field("zmin", Node::cycle(g, &zmin))
                .field("rational", Node::Bool(is_rational(g, config)?))
                .field("generic_pg", Node::Rat(generic_pg(g, config)?.floor))
        }
        Command::Pairing { a, b } => {
            let (a, b) = (lprime(g, a)?, lprime(g, b)?);
            Report::new().field("pairing", Node::Rat(pairing(g, &a, &b)?))
        }
        Command::Estar { vertex, decompose } => match (vertex, decompose) {
            (Some(v), _) => Report::new()
                .field("vertex", Node::str(v.clone()))
                .field("estar", Node::rat_cycle(g, &estar_named(g, v)?)),
            (None, Some(l)) => {
                let lp = lprime(g, l)?;
                let d = estar_decompose(g, &lp)?;
                let coords = RatCycle::new(g, d.coeffs.clone())?;
                Report::new()
                    .field("lprime", Node::rat_cycle(g, &lp))
                    .field("estar_coordinates", Node::rat_cycle(g, &coords))
                    .field("support", Node::names(g, &d.support()))
            }
            (None, None) => return Err(Failure::Usage("one of --vertex or --decompose is required".into())),
        },
        Command::Restrict { lprime: l, subset: s } => {
            let lp = lprime(g, l)?;
            let parts = restrict_r(g, &lp, &subset(g, s)?)?;
            Report::new().field(
                "components",
                Node::List(
                    parts
                        .iter()
                        .map(|p| {
                            Node::Obj(vec![
                                ("vertices".into(), Node::names(g, &p.subgraph.to_parent)),
                                ("value".into(), Node::rat_cycle(&p.subgraph.graph, &p.value)),
                            ])
                        })
                        .collect(),
                ),
            )
        }
        Command::Zk => Report::new().field("zk", Node::rat_cycle(g, &zk(g).zk)),
        Command::Chi { lprime: l } => {
            let lp = lprime(g, l)?;
            Report::new()
                .field("lprime", Node::rat_cycle(g, &lp))
                .field("chi", Node::Rat(chi(g, &lp)?))
        }
        Command::Zmin => {
            let z = laufer_zmin(g)?;
            Report::new()
                .field("zmin", Node::cycle(g, &z))
                .field("chi", Node::Rat(chi_int(g, &z)?))
        }
        Command::Rational => {
            let z = laufer_zmin(g)?;
            Report::new()
                .field("rational", Node::Bool(is_rational(g, config)?))
                .field("zmin", Node::cycle(g, &z))
                .field("chi_zmin", Node::Rat(chi_int(g, &z)?))
        }
        Command::Minchi { boxed, lprime: l, lower } => {
            let cert = match (boxed, lower) {
                (Some(z), _) => min_chi_box(g, &cycle(g, z)?, &lprime(g, l)?, config)?,
                (None, Some(c)) => min_chi_lower_bounded(g, &cycle(g, c)?, config)?,
                (None, None) => return Err(Failure::Usage("one of --box or --lower is required".into())),
            };
            Report::new()
                .field("min_value", Node::Rat(cert.min_value.clone()))
                .field("minimizer", Node::cycle(g, &cert.minimizer))
                .field("certificate", certificate(g, &cert))
        }
        Command::Reduce { z, lprime: l } => {
            let r = laufer_reduce(g, &cycle(g, z)?, &lprime(g, l)?)?;
            Report::new().field("reduced", Node::cycle(g, &r))
        }
        Command::Floor { z, lprime: l } => {
            let r = generic_natural_h1(g, &cycle(g, z)?, &lprime(g, l)?, config)?;
            floor_report(g, &r)
        }
        Command::GenericPg => {
            let r = generic_pg(g, config)?;
            let mut rep = floor_report(g, &r);
            rep.push("certificate", certificate(g, &r.components[0].certificate));
            rep
        }
        Command::GenericH1oz { z, stabilization } => {
            let z = cycle(g, z)?;
            let mut rep = floor_report(g, &generic_h1_oz_floor(g, &z, config)?);
            if *stabilization {
                let s = generic_h1_oz_stabilization(g, &z, config)?;
                rep.push(
                    "stabilization",
                    Node::Obj(vec![
                        ("doubled_floor".into(), Node::Rat(s.doubled_value)),
                        ("stable".into(), Node::Bool(s.stable)),
                    ]),
                );
            }
            rep
        }
        Command::EcaDim { z, lprime: l } => {
            let (z, lp) = (cycle(g, z)?, lprime(g, l)?);
            Report::new()
                .field("nonempty", Node::Bool(eca_nonempty(g, &lp)?))
                .field("dim", Node::Int(eca_dim(g, &z, &lp)?))
        }
        Command::FiberDim { z, lprime: l, h1_l, h1_oz } => {
            let d = fiber_dim(g, &cycle(g, z)?, &lprime(g, l)?, *h1_l, *h1_oz)?;
            Report::new().field("fiber_dim", Node::Int(d))
        }
        Command::Ez { z, subset: s, h1_oz, h1_restricted } => {
            let i = subset(g, s)?;
            match (h1_oz, h1_restricted) {
                (Some(a), Some(b)) => Report::new()
                    .field("ez", Node::Int(ez_with_oracle(*a, *b)))
                    .field("h1_oz", Node::int(*a))
                    .field("h1_restricted", Node::int(*b)),
                _ => {
                    let r = generic_ez(g, &cycle(g, z)?, &i, config)?;
                    let zero = num_rational::BigRational::from(BigInt::from(0));
                    Report::new()
                        .field("ez", Node::Rat(r.value.clone()))
                        .field("h1_oz", Node::Rat(r.total.floor.clone()))
                        .field(
                            "h1_restricted",
                            Node::Rat(r.complement.as_ref().map_or(zero, |c| c.floor.clone())),
                        )
                        .field("ceiling", Node::str(r.total.ceiling))
                }
            }
        }
        Command::Reldom(a) | Command::Relh1(a) | Command::Relgen1(a) => {
            let (z, z1, lp) = (cycle(g, &a.z)?, cycle(g, &a.z1)?, lprime(g, &a.lprime)?);
            let o = oracle(g, a, &z, &z1, &lp, config)?;
            match cmd {
                Command::Relgen1(_) => {
                    let out = relgen1_nonempty(g, &z, &z1, &lp, &o, config)?;
                    let mut rep = Report::new().field("nonempty", Node::Bool(out.nonempty));
                    let rest = rel_report(g, &o, &out.report);
                    rep.push("unchecked", Node::names(g, &out.unchecked));
                    rep.extend(rest);
                    rep
                }
                Command::Reldom(_) => rel_report(g, &o, &reldom_check(g, &z, &z1, &lp, &o, config)?),
                _ => rel_report(g, &o, &relgen_h1(g, &z, &z1, &lp, &o, config)?),
            }
        }
        Command::RelspaceDim { z, lprime: l, h1_z1_l, h1_o_z1 } => {
            let d = relspace_dim(g, &cycle(g, z)?, &lprime(g, l)?, *h1_z1_l, *h1_o_z1)?;
            Report::new().field("dim", Node::Int(d))
        }
        Command::Blowup(spec) => blowup_fields(g, &blowup(g, spec)?),
        Command::Pullback { cycle: c, blowup: spec } => {
            let b = blowup(g, spec)?;
            let lp = lprime(g, c)?;
            let mut rep = blowup_fields(g, &b);
            rep.push("cycle", Node::rat_cycle(g, &lp));
            rep.push("pulled_back", Node::rat_cycle(&b.new_graph, &b.pullback_rat(&lp)?));
            rep
        }
        Command::Znew { z, at, times } => {
            let z = cycle(g, z)?;
            let u = g.vertex(at)?;
            let k = match times {
                Some(k) => *k,
                None => {
                    let zu = z.get(u);
                    if zu < &BigInt::from(2) {
                        return Err(Error::PreconditionFailed(format!(
                            "Z_{at} = {zu}; the chain length Z_u - 1 needs Z_u >= 2"
                        ))
                        .into());
                    }
                    num_traits::ToPrimitive::to_u64(&(zu - 1u32))
                        .ok_or_else(|| Failure::Usage("chain length does not fit in 64 bits".into()))?
                }
            };
            let b = blowup_chain(g, u, k)?;
            let zn = z_new(&b, &z)?;
            let zr = z_r(&b, &zn)?;
            let ng = &b.new_graph;
            let mut rep = blowup_fields(g, &b);
            rep.push("times", Node::int(k));
            rep.push("u_prime", Node::str(ng.name(b.last())));
            rep.push("z_new", Node::cycle(ng, &zn));
            rep.push("z_r", Node::cycle(ng, &zr));
            rep
        }
    })
}
