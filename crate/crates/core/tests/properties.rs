//! Structural identities checked on randomized inputs.

mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use plumblat_core::corpus::random_trees;
use plumblat_core::genus::{generic_pg, interval_floor_line_bundle};
use plumblat_core::lattice::{estar, estar_decompose, pair_with_vertex, pairing, restrict_r};
use plumblat_core::relative::{reldom_check, relgen_h1};
use plumblat_core::search::min_chi_box;
use plumblat_core::surgery::{blowup_chain, blowup_edge, blowup_edge_chain, blowup_generic, z_new};
use plumblat_core::{
    chi as lib_chi, chi_int, is_rational, laufer_zmin, zk, Cycle, H1Oracle, PlumbingGraph, RatCycle, SearchConfig,
    VertexId,
};
use proptest::prelude::*;
use rand::Rng;

fn graph(seed: u64, max_n: usize) -> PlumbingGraph {
    random_trees(seed, 1, max_n, -8, -1).pop().unwrap()
}

fn rat(g: &PlumbingGraph, r: &mut rand_chacha::ChaCha8Rng) -> RatCycle {
    RatCycle::new(g, random_rat(r, g.len())).unwrap()
}

fn effective(g: &PlumbingGraph, r: &mut rand_chacha::ChaCha8Rng, hi: i64, cap: u64) -> Cycle {
    loop {
        let z = random_cycle(r, g.len(), 0, hi);
        if box_len(&vec![0; g.len()], &z) <= cap {
            return Cycle::from_i64s(g, &z).unwrap();
        }
    }
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chi_is_quadratic(seed in any::<u64>()) {
        let g = graph(seed, 8);
        let mut r = rng(seed);
        let (a, b) = (rat(&g, &mut r), rat(&g, &mut r));
        let lhs = lib_chi(&g, &(&a + &b)).unwrap();
        let rhs = lib_chi(&g, &a).unwrap() + lib_chi(&g, &b).unwrap() - pairing(&g, &a, &b).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(lib_chi(&g, &a).unwrap(), chi(&g, a.coeffs()));
    }

    #[test]
    fn chi_drop_identity(seed in any::<u64>()) {
        let g = graph(seed, 8);
        let mut r = rng(seed);
        let lp = rat(&g, &mut r);
        let l = Cycle::from_i64s(&g, &random_cycle(&mut r, g.len(), -3, 5)).unwrap();
        let lhs = lib_chi(&g, &-&lp).unwrap() - lib_chi(&g, &(&-&lp + &l.to_rational())).unwrap();
        let rhs = -pairing(&g, &lp, &l.to_rational()).unwrap() - chi_int(&g, &l).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjunction_and_dual_basis(seed in any::<u64>()) {
        let g = graph(seed, 8);
        let k = zk(&g).zk;
        for v in g.vertices() {
            let e = Cycle::basis(&g, v).to_rational();
            let s = pairing(&g, &(&-&k + &e), &e).unwrap() + BigRational::from(BigInt::from(2));
            prop_assert!(s.is_zero());
            let ev = estar(&g, v).unwrap();
            prop_assert!(ev.coeffs().iter().all(|c| c.is_positive()));
            for w in g.vertices() {
                let expect = if v == w { -BigRational::one() } else { BigRational::zero() };
                prop_assert_eq!(pair_with_vertex(&g, &ev, w), expect);
            }
        }
    }

    #[test]
    fn literals_round_trip(seed in any::<u64>()) {
        let g = graph(seed, 8);
        let mut r = rng(seed);
        let a = rat(&g, &mut r);
        prop_assert_eq!(RatCycle::parse(&g, &a.literal(&g)).unwrap(), a.clone());
        let back = PlumbingGraph::parse(&g.to_string()).unwrap();
        prop_assert_eq!(back.names(), g.names());
        prop_assert_eq!(back.edges(), g.edges());
        let d = estar_decompose(&g, &a).unwrap();
        prop_assert_eq!(d.compose(&g).unwrap(), a);
    }

    #[test]
    fn restriction_keeps_pairings_on_the_subset(seed in any::<u64>()) {
        let g = graph(seed, 8);
        let mut r = rng(seed);
        let lp = rat(&g, &mut r);
        let subset: Vec<VertexId> = g.vertices().filter(|_| r.random_bool(0.6)).collect();
        if subset.is_empty() {
            return Ok(());
        }
        for part in restrict_r(&g, &lp, &subset).unwrap() {
            for (local, parent) in part.subgraph.to_parent.iter().enumerate() {
                prop_assert_eq!(
                    pair_with_vertex(&part.subgraph.graph, &part.value, VertexId(local)),
                    pair_with_vertex(&g, &lp, *parent)
                );
            }
        }
    }

    #[test]
    fn blowups_preserve_the_lattice(seed in any::<u64>(), k in 1u64..=5, kind in 0u8..4) {
        let g = graph(seed, 6);
        let mut r = rng(seed);
        let u = VertexId(r.random_range(0..g.len()));
        let b = match kind {
            0 => blowup_generic(&g, u).unwrap(),
            1 => blowup_chain(&g, u, k).unwrap(),
            _ if g.neighbors(u).is_empty() => blowup_chain(&g, u, k).unwrap(),
            2 => blowup_edge(&g, u, VertexId(g.neighbors(u)[0])).unwrap(),
            _ => blowup_edge_chain(&g, u, VertexId(g.neighbors(u)[0]), k).unwrap(),
        };
        let h = &b.new_graph;
        prop_assert_eq!(h.group_order(), g.group_order());
        let (a, c) = (rat(&g, &mut r), rat(&g, &mut r));
        let (pa, pc) = (b.pullback_rat(&a).unwrap(), b.pullback_rat(&c).unwrap());
        prop_assert_eq!(pairing(h, &pa, &pc).unwrap(), pairing(&g, &a, &c).unwrap());
        prop_assert_eq!(lib_chi(h, &pa).unwrap(), lib_chi(&g, &a).unwrap());
        // pullbacks are orthogonal to every new curve
        for nv in &b.new_vertices {
            prop_assert!(pair_with_vertex(h, &pa, nv.id).is_zero());
        }
    }

    #[test]
    fn znew_ends_with_coefficient_one(seed in any::<u64>()) {
        let g = graph(seed, 6);
        let mut r = rng(seed);
        let u = VertexId(r.random_range(0..g.len()));
        let mut z = random_cycle(&mut r, g.len(), 0, 4);
        z[u.0] = r.random_range(2..=6);
        let z = Cycle::from_i64s(&g, &z).unwrap();
        let k = (z.get(u) - 1u32).try_into().unwrap();
        let b = blowup_chain(&g, u, k).unwrap();
        let zn = z_new(&b, &z).unwrap();
        prop_assert_eq!(zn.get(b.last()), &BigInt::one());
        prop_assert!(zn.is_effective());
    }

    #[test]
    fn floor_is_monotone_in_z(seed in any::<u64>()) {
        let g = graph(seed, 6);
        let mut r = rng(seed);
        let big = effective(&g, &mut r, 4, 4000);
        let small: Vec<i64> = big.coeffs().iter().map(|c| r.random_range(0..=i64::try_from(c).unwrap())).collect();
        let small = Cycle::from_i64s(&g, &small).unwrap();
        let lp = rat(&g, &mut r);
        let f_small = interval_floor_line_bundle(&g, &small, &lp, &cfg()).unwrap().floor;
        let f_big = interval_floor_line_bundle(&g, &big, &lp, &cfg()).unwrap().floor;
        prop_assert!(f_small <= f_big);
        prop_assert!(!f_small.is_negative());
    }

    #[test]
    fn zero_oracle_collapses_to_the_floor(seed in any::<u64>()) {
        let g = graph(seed, 6);
        let mut r = rng(seed);
        let z = effective(&g, &mut r, 4, 4000);
        let z1 = Cycle::from_i64s(&g, &z.coeffs().iter()
            .map(|c| r.random_range(0..=i64::try_from(c).unwrap())).collect::<Vec<_>>()).unwrap();
        let lp = rat(&g, &mut r);
        let oracle = H1Oracle::zero(&g, &z, &z1).unwrap();
        let rep = relgen_h1(&g, &z, &z1, &lp, &oracle, &cfg()).unwrap();
        let floor = interval_floor_line_bundle(&g, &z, &lp, &cfg()).unwrap();
        prop_assert_eq!(&rep.rel_h1, &floor.floor);
        if rep.dominant {
            prop_assert!(rep.argmin.is_zero());
        }
    }

    #[test]
    fn raising_one_oracle_entry_never_lowers_rel_h1(seed in any::<u64>()) {
        let g = graph(seed, 5);
        let mut r = rng(seed);
        let z = effective(&g, &mut r, 3, 300);
        let z1 = z.clone();
        let lp = rat(&g, &mut r);
        let mut oracle = H1Oracle::zero(&g, &z, &z1).unwrap();
        let points = box_points(&vec![0; g.len()], &z.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>());
        let mut prev = relgen_h1(&g, &z, &z1, &lp, &oracle, &cfg()).unwrap().rel_h1;
        for _ in 0..4 {
            let p = &points[r.random_range(0..points.len())];
            let l = Cycle::from_i64s(&g, p).unwrap();
            if (&z - &l).is_zero() {
                continue;
            }
            let bumped = oracle.value(&l).unwrap() + r.random_range(1..=2);
            oracle = oracle.with_entry(&g, &l, bumped).unwrap();
            let rep = reldom_check(&g, &z, &z1, &lp, &oracle, &cfg()).unwrap();
            prop_assert!(rep.rel_h1 >= prev);
            let o0 = oracle.value(&Cycle::zero(&g)).unwrap();
            prop_assert!(rep.rel_h1 >= BigRational::from(BigInt::from(o0)));
            prev = rep.rel_h1;
        }
    }

    #[test]
    fn search_results_ignore_worker_count(seed in any::<u64>()) {
        let g = graph(seed, 6);
        let mut r = rng(seed);
        let z = effective(&g, &mut r, 5, 20_000);
        let lp = rat(&g, &mut r);
        let one = min_chi_box(&g, &z, &lp, &cfg()).unwrap();
        let many = min_chi_box(&g, &z, &lp, &cfg().with_workers(5)).unwrap();
        prop_assert_eq!(one, many);
    }

    #[test]
    fn rationality_criteria_agree(seed in any::<u64>()) {
        let g = graph(seed, 7);
        let zmin = laufer_zmin(&g).unwrap();
        let by_chi = chi_int(&g, &zmin).unwrap().is_one();
        prop_assert_eq!(is_rational(&g, &cfg()).unwrap(), by_chi);
        prop_assert_eq!(generic_pg(&g, &cfg()).unwrap().floor.is_zero(), by_chi);
    }

    #[test]
    fn generic_pg_survives_blowup(seed in any::<u64>()) {
        let g = graph(seed, 5);
        let mut r = rng(seed);
        let u = VertexId(r.random_range(0..g.len()));
        let b = blowup_generic(&g, u).unwrap();
        prop_assert_eq!(
            generic_pg(&b.new_graph, &cfg()).unwrap().floor,
            generic_pg(&g, &cfg()).unwrap().floor
        );
    }
}
