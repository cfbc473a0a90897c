//! Test graphs: standard families, seeded random negative-definite trees and
//! an exhaustive list of small trees up to isomorphism.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::PlumbingGraph;

fn named(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

/// Tree with vertex `i` attached to `parent[i - 1]`.
pub fn from_parents(euler: &[i64], parent: &[usize]) -> crate::Result<PlumbingGraph> {
    let vertices = named(euler.len()).into_iter().zip(euler.iter().copied()).collect();
    let edges = parent.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
    PlumbingGraph::new(vertices, edges)
}

pub fn chain(euler: &[i64]) -> PlumbingGraph {
    let parent: Vec<usize> = (0..euler.len().saturating_sub(1)).collect();
    from_parents(euler, &parent).expect("chain must be negative definite")
}

/// Star with the given center and legs, each leg a chain read outwards.
pub fn star(center: i64, legs: &[&[i64]]) -> PlumbingGraph {
    let mut euler = vec![center];
    let mut parent = Vec::new();
    for leg in legs {
        let mut prev = 0;
        for &e in *leg {
            parent.push(prev);
            euler.push(e);
            prev = euler.len() - 1;
        }
    }
    from_parents(&euler, &parent).expect("star must be negative definite")
}

pub fn a_n(n: usize) -> PlumbingGraph {
    chain(&vec![-2; n])
}

/// `D_n`, `n >= 4`.
pub fn d_n(n: usize) -> PlumbingGraph {
    let tail = vec![-2; n - 3];
    star(-2, &[&[-2], &[-2], &tail])
}

/// `E_6`, `E_7`, `E_8`.
pub fn e_n(n: usize) -> PlumbingGraph {
    let tail = vec![-2; n - 4];
    star(-2, &[&[-2], &[-2, -2], &tail])
}

/// The `(2,3,7)` triangle singularity: center `-1` with legs `-2`, `-3`, `-7`.
pub fn triangle_237() -> PlumbingGraph {
    star(-1, &[&[-2], &[-3], &[-7]])
}

/// Seeded random negative-definite trees with `1..=max_n` vertices and Euler
/// numbers in `lo..=hi`; candidates failing definiteness are redrawn.
pub fn random_trees(seed: u64, count: usize, max_n: usize, lo: i64, hi: i64) -> Vec<PlumbingGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(1..=max_n);
        let euler: Vec<i64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
        let parent: Vec<usize> = (1..n).map(|i| rng.random_range(0..i)).collect();
        if let Ok(g) = from_parents(&euler, &parent) {
            out.push(g);
        }
    }
    out
}

/// Every negative-definite tree with `1..=max_n` vertices and Euler numbers
/// in `lo..=hi`, one per isomorphism class of weighted trees, ordered by size
/// and canonical form.
pub fn exhaustive_trees(max_n: usize, lo: i64, hi: i64) -> Vec<PlumbingGraph> {
    let mut classes: BTreeMap<(usize, String), (Vec<i64>, Vec<usize>)> = BTreeMap::new();
    for n in 1..=max_n {
        let weights = weight_vectors(n, lo, hi);
        for parent in parent_arrays(n) {
            let adj = adjacency(n, &parent);
            for euler in &weights {
                classes
                    .entry((n, canonical(&adj, euler)))
                    .or_insert_with(|| (euler.clone(), parent.clone()));
            }
        }
    }
    classes
        .into_values()
        .filter_map(|(euler, parent)| from_parents(&euler, &parent).ok())
        .collect()
}

fn weight_vectors(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (lo..=hi).map(move |e| {
                    let mut w = w.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

fn parent_arrays(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for i in 1..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..i).map(move |j| {
                    let mut p = p.clone();
                    p.push(j);
                    p
                })
            })
            .collect();
    }
    out
}

fn adjacency(n: usize, parent: &[usize]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (i, &p) in parent.iter().enumerate() {
        adj[p].push(i + 1);
        adj[i + 1].push(p);
    }
    adj
}

/// AHU encoding of the weighted tree rooted at its center(s).
fn canonical(adj: &[Vec<usize>], euler: &[i64]) -> String {
    centers(adj)
        .into_iter()
        .map(|c| encode(adj, euler, c, usize::MAX))
        .min()
        .expect("a tree has a center")
}

fn encode(adj: &[Vec<usize>], euler: &[i64], v: usize, from: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != from)
        .map(|&w| encode(adj, euler, w, v))
        .collect();
    kids.sort();
    format!("({}{})", euler[v], kids.concat())
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut left = n;
    while left > 2 {
        left -= leaves.len();
        let mut next = Vec::new();
        for &l in &leaves {
            for &w in &adj[l] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        leaves = next;
    }
    leaves
}
