//! Library results against brute-force references on random inputs.

#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use plumblat_core::corpus::{exhaustive_trees, random_trees, triangle_237};
use plumblat_core::genus::{generic_h1_oz_floor, generic_pg, interval_floor_line_bundle};
use plumblat_core::relative::relgen_h1;
use plumblat_core::search::{min_chi_box, min_chi_lower_bounded};
use plumblat_core::{laufer_zmin, zk, Cycle, H1Oracle, PlumbingGraph, RatCycle, SearchConfig};
use rand::Rng;

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn coeffs_i64(c: &Cycle) -> Vec<i64> {
    c.coeffs().iter().map(|x| x.to_i64().unwrap()).collect()
}

/// Random effective cycle whose box has at most `cap` points.
fn small_box(rng: &mut rand_chacha::ChaCha8Rng, n: usize, cap: u64) -> Vec<i64> {
    loop {
        let z = random_cycle(rng, n, 0, 4);
        if box_len(&vec![0; n], &z) <= cap {
            return z;
        }
    }
}

#[test]
fn determinant_matches_laplace_expansion() {
    for g in random_trees(11, 200, 8, -12, -1) {
        assert_eq!(g.det(), &laplace_det(&matrix(&g)));
    }
}

#[test]
fn anticanonical_cycle_satisfies_adjunction_in_raw_form() {
    for g in random_trees(12, 100, 8, -9, -1) {
        let m = matrix(&g);
        let k = zk(&g).zk.coeffs().to_vec();
        for v in 0..g.len() {
            let kv: BigRational = (0..g.len()).map(|w| &k[w] * int(m[v][w])).sum();
            assert_eq!(kv, int(m[v][v] + 2));
        }
    }
}

#[test]
fn box_minimum_matches_enumeration() {
    let mut r = rng(13);
    for g in random_trees(14, 150, 6, -8, -1) {
        let n = g.len();
        let z = small_box(&mut r, n, 3000);
        let lp = random_rat(&mut r, n);
        let cert = min_chi_box(
            &g,
            &Cycle::from_i64s(&g, &z).unwrap(),
            &RatCycle::new(&g, lp.clone()).unwrap(),
            &cfg(),
        )
        .unwrap();
        let base: Vec<BigRational> = lp.iter().map(|x| -x).collect();
        let (value, arg) = brute_min(&g, &base, &vec![0; n], &z);
        assert_eq!(cert.min_value, value);
        assert_eq!(coeffs_i64(&cert.minimizer), arg);
    }
}

#[test]
fn parallel_box_search_agrees_with_enumeration() {
    let mut r = rng(15);
    for g in random_trees(16, 40, 6, -6, -1) {
        let n = g.len();
        let z = small_box(&mut r, n, 5000);
        let lp = random_rat(&mut r, n);
        let cert = min_chi_box(
            &g,
            &Cycle::from_i64s(&g, &z).unwrap(),
            &RatCycle::new(&g, lp.clone()).unwrap(),
            &cfg().with_workers(4),
        )
        .unwrap();
        let base: Vec<BigRational> = lp.iter().map(|x| -x).collect();
        let (value, arg) = brute_min(&g, &base, &vec![0; n], &z);
        assert_eq!(cert.min_value, value);
        assert_eq!(coeffs_i64(&cert.minimizer), arg);
    }
}

/// Enumeration over `c <= l <= c + k` gives an upper bound on the true
/// minimum that must be attained by the certified search when `k` covers
/// the certificate box.
#[test]
fn lower_bounded_minimum_matches_truncated_enumeration() {
    let mut r = rng(17);
    for g in random_trees(18, 60, 4, -6, -1) {
        let n = g.len();
        let c = random_cycle(&mut r, n, 0, 2);
        let cert = min_chi_lower_bounded(&g, &Cycle::from_i64s(&g, &c).unwrap(), &cfg()).unwrap();
        let hi: Vec<i64> = coeffs_i64(&cert.bound.as_ref().unwrap().hi);
        let top: Vec<i64> = hi.iter().zip(&c).map(|(h, l)| (*h).max(*l) + 1).collect();
        if box_len(&c, &top) > 20_000 {
            continue;
        }
        let (value, arg) = brute_min(&g, &vec![BigRational::zero(); n], &c, &top);
        assert_eq!(cert.min_value, value);
        assert_eq!(coeffs_i64(&cert.minimizer), arg);
    }
}

#[test]
fn laufer_matches_lowest_degree_antinef_cycle() {
    for g in exhaustive_trees(4, -4, -1) {
        let z = laufer_zmin(&g).unwrap();
        assert_eq!(coeffs_i64(&z), brute_zmin(&g), "{g}");
    }
}

#[test]
fn line_bundle_floor_matches_full_graph_enumeration() {
    let mut r = rng(19);
    for g in random_trees(20, 150, 6, -8, -1) {
        let n = g.len();
        let mut z = small_box(&mut r, n, 3000);
        // force disconnected supports now and then
        if n > 2 && r.random_bool(0.4) {
            z[r.random_range(0..n)] = 0;
        }
        let lp = random_rat(&mut r, n);
        let rep = interval_floor_line_bundle(
            &g,
            &Cycle::from_i64s(&g, &z).unwrap(),
            &RatCycle::new(&g, lp.clone()).unwrap(),
            &cfg(),
        )
        .unwrap();
        let base: Vec<BigRational> = lp.iter().map(|x| -x).collect();
        let (value, _) = brute_min(&g, &base, &vec![0; n], &z);
        assert_eq!(rep.floor, chi(&g, &base) - value);
    }
}

#[test]
fn oz_floor_matches_per_component_enumeration() {
    let mut r = rng(21);
    for g in random_trees(22, 100, 6, -6, -1) {
        let n = g.len();
        let mut z = small_box(&mut r, n, 3000);
        if z.iter().all(|&c| c == 0) {
            z[0] = 1;
        }
        let support: Vec<usize> = (0..n).filter(|&v| z[v] > 0).collect();
        let mut expected = BigRational::zero();
        for comp in components(&g, &support) {
            let lo: Vec<i64> = (0..n).map(|v| comp.contains(&v) as i64).collect();
            let hi: Vec<i64> = (0..n).map(|v| if comp.contains(&v) { z[v] } else { 0 }).collect();
            let (m, _) = brute_min(&g, &vec![BigRational::zero(); n], &lo, &hi);
            expected += BigRational::one() - m;
        }
        let rep = generic_h1_oz_floor(&g, &Cycle::from_i64s(&g, &z).unwrap(), &cfg()).unwrap();
        assert_eq!(rep.floor, expected);
    }
}

#[test]
fn relative_h1_matches_direct_enumeration() {
    let mut r = rng(23);
    for g in random_trees(24, 80, 5, -6, -1) {
        let n = g.len();
        let z = small_box(&mut r, n, 400);
        let z1: Vec<i64> = z.iter().map(|&c| r.random_range(0..=c)).collect();
        let lp = random_rat(&mut r, n);
        let zc = Cycle::from_i64s(&g, &z).unwrap();
        let z1c = Cycle::from_i64s(&g, &z1).unwrap();
        let mut entries = Vec::new();
        let mut raw = Vec::new();
        for p in box_points(&vec![0; n], &z) {
            let fixed = (0..n).any(|v| (z[v] - p[v]).min(z1[v]) > 0);
            let h = if fixed { r.random_range(0..=3u64) } else { 0 };
            entries.push((Cycle::from_i64s(&g, &p).unwrap(), h));
            raw.push((p, h));
        }
        let oracle = H1Oracle::from_table(&g, &zc, &z1c, entries, 1 << 20).unwrap();
        let rep = relgen_h1(&g, &zc, &z1c, &RatCycle::new(&g, lp.clone()).unwrap(), &oracle, &cfg()).unwrap();

        let base: Vec<BigRational> = lp.iter().map(|x| -x).collect();
        let score = |p: &[i64], h: u64| {
            let x: Vec<BigRational> = base.iter().zip(p).map(|(b, &c)| b + int(c)).collect();
            chi(&g, &x) - int(h as i64)
        };
        let mut best: Option<(BigRational, Vec<i64>)> = None;
        let mut witness = None;
        let s0 = score(&vec![0; n], raw[0].1);
        for (p, h) in &raw {
            let s = score(p, *h);
            if p.iter().any(|&c| c != 0) && witness.is_none() && s <= s0 {
                witness = Some(p.clone());
            }
            if best.as_ref().is_none_or(|(b, _)| s < *b) {
                best = Some((s, p.clone()));
            }
        }
        let (b, arg) = best.unwrap();
        assert_eq!(rep.rel_h1, chi(&g, &base) - b);
        assert_eq!(coeffs_i64(&rep.argmin), arg);
        assert_eq!(rep.dominant, witness.is_none());
        assert_eq!(rep.witness.as_ref().map(coeffs_i64), witness);
        assert_eq!(rep.points, raw.len() as u64);
    }
}

#[test]
fn triangle_fixture_against_enumeration() {
    let g: PlumbingGraph = triangle_237();
    let n = g.len();
    let zmin = brute_zmin(&g);
    assert_eq!(zmin, vec![6, 3, 2, 1]);
    let hi: Vec<i64> = zmin.iter().map(|c| 2 * c).collect();
    let (m, _) = brute_min(&g, &vec![BigRational::zero(); n], &vec![1; n], &hi);
    assert_eq!(m, BigRational::zero());
    assert_eq!(generic_pg(&g, &cfg()).unwrap().floor, BigRational::one());
    let cert = min_chi_lower_bounded(&g, &Cycle::reduced(&g), &cfg()).unwrap();
    assert_eq!(cert.min_value, BigRational::zero());
}
