//! Brute-force reference implementations. They read only the raw Euler
//! numbers and edges of a graph and share no code with the library's
//! algorithms.
#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use plumblat_core::{PlumbingGraph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

pub fn int(p: i64) -> BigRational {
    BigRational::from(BigInt::from(p))
}

/// Intersection matrix from the raw data.
pub fn matrix(g: &PlumbingGraph) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut m = vec![vec![0i64; n]; n];
    for v in 0..n {
        m[v][v] = g.euler(VertexId(v));
    }
    for &(a, b) in g.edges() {
        m[a][b] = 1;
        m[b][a] = 1;
    }
    m
}

pub fn laplace_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return BigInt::from(m[0][0]);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let term = BigInt::from(m[0][j]) * laplace_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn pair(m: &[Vec<i64>], a: &[BigRational], b: &[BigRational]) -> BigRational {
    let mut s = BigRational::zero();
    for i in 0..m.len() {
        for j in 0..m.len() {
            if m[i][j] != 0 {
                s += &a[i] * &b[j] * int(m[i][j]);
            }
        }
    }
    s
}

pub fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| int(x)).collect()
}

/// `χ(l) = (Σ l_v (e_v + 2) - (l, l)) / 2`, the pairing with `Z_K` expanded
/// through adjunction.
pub fn chi(g: &PlumbingGraph, l: &[BigRational]) -> BigRational {
    let m = matrix(g);
    let lk: BigRational = (0..m.len()).map(|v| &l[v] * int(m[v][v] + 2)).sum();
    (lk - pair(&m, l, l)) / int(2)
}

/// Lexicographic enumeration of the integer box, first coordinate slowest.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (l, h) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p| {
                (*l..=*h).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn box_len(lo: &[i64], hi: &[i64]) -> u64 {
    lo.iter().zip(hi).map(|(l, h)| (h - l + 1).max(0) as u64).product()
}

/// `min χ(base + x)` over the box and its lexicographically first minimizer.
pub fn brute_min(g: &PlumbingGraph, base: &[BigRational], lo: &[i64], hi: &[i64]) -> (BigRational, Vec<i64>) {
    let mut best: Option<(BigRational, Vec<i64>)> = None;
    for p in box_points(lo, hi) {
        let x: Vec<BigRational> = base.iter().zip(&p).map(|(b, &c)| b + int(c)).collect();
        let v = chi(g, &x);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, p));
        }
    }
    best.expect("nonempty box")
}

pub fn is_antinef(m: &[Vec<i64>], l: &[i64]) -> bool {
    (0..m.len()).all(|v| (0..m.len()).map(|w| m[v][w] * l[w]).sum::<i64>() <= 0)
}

/// Compositions of `s` into `n` positive parts.
fn compositions(s: i64, n: usize) -> Vec<Vec<i64>> {
    if n == 1 {
        return vec![vec![s]];
    }
    let mut out = Vec::new();
    for first in 1..=s - (n as i64 - 1) {
        for mut rest in compositions(s - first, n - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Minimal nonzero antinef cycle, searched level by level in the total
/// degree. The minimum of the antinef cone has the smallest degree, and it
/// is the only antinef cycle of that degree.
pub fn brute_zmin(g: &PlumbingGraph) -> Vec<i64> {
    let m = matrix(g);
    let n = m.len();
    for s in n as i64.. {
        let found: Vec<Vec<i64>> = compositions(s, n)
            .into_iter()
            .filter(|l| is_antinef(&m, l))
            .collect();
        if !found.is_empty() {
            assert_eq!(found.len(), 1, "two antinef cycles at the lowest degree");
            return found.into_iter().next().unwrap();
        }
    }
    unreachable!()
}

pub fn random_cycle(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

/// Small random rational coefficients with denominators up to 6.
pub fn random_rat(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| q(rng.random_range(-12..=12), rng.random_range(1..=6)))
        .collect()
}

/// Connected components of the induced subgraph on `support`, by raw edges.
pub fn components(g: &PlumbingGraph, support: &[usize]) -> Vec<Vec<usize>> {
    let mut comp: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; g.len()];
    for &s in support {
        if seen[s] {
            continue;
        }
        let mut stack = vec![s];
        seen[s] = true;
        let mut c = vec![];
        while let Some(v) = stack.pop() {
            c.push(v);
            for &(a, b) in g.edges() {
                let w = if a == v { b } else if b == v { a } else { continue };
                if support.contains(&w) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        c.sort();
        comp.push(c);
    }
    comp
}

pub fn positive(x: &BigRational) -> bool {
    x.is_positive()
}
