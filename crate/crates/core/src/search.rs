//! Exact integer minimization of `χ` over boxes and over lower-bounded
//! regions.
//!
//! All searches work with the integer-valued objective
//!
//! ```text
//! F(x) = -D (x, x) + Σ_v w_v x_v,   χ(base + x) = χ(base) + F(x) / 2D
//! ```
//!
//! where `D` clears the denominators of the pairings `(base, E_v)`. Since the
//! form is negative definite, `F` is a strictly convex quadratic, which the
//! search exploits twice: the last coordinate is minimized in closed form,
//! and a subtree is skipped when the unconstrained minimum over its free
//! coordinates (a Schur complement) already exceeds the incumbent.
//!
//! Box enumeration is lexicographic in declaration order and only strict
//! improvements replace the incumbent, so the reported minimizer is the
//! lexicographically smallest one. Parallel runs split the box into slabs of
//! the first coordinate and reduce by `(value, point)`, which gives the same
//! answer and the same node count for any number of workers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::chi::{chi, zk};
use crate::cycle::{Cycle, RatCycle};
use crate::error::{Error, Result};
use crate::graph::PlumbingGraph;
use crate::lattice::pair_with_vertex;
use crate::matrix::{self, mat_vec};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest number of box points a search may cover.
    pub budget: u64,
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            workers: 1,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    /// `lo <= l <= hi`.
    Box { lo: Cycle, hi: Cycle },
    /// `l >= c`.
    LowerBound { c: Cycle },
}

/// Data proving that a minimum over an unbounded region was found.
///
/// `χ(x) = χ(center) + q(x - center)` with `q(y) = -(y, y)/2` positive
/// definite, and `χ(start) = start_value`. Any `x` with `χ(x) <= start_value`
/// satisfies `|x_v - center_v| <= radius_v`, hence lies in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSetBound {
    pub center: RatCycle,
    pub center_value: BigRational,
    pub start: Cycle,
    pub start_value: BigRational,
    pub radius: Vec<BigInt>,
    pub lo: Cycle,
    pub hi: Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinChiCertificate {
    pub region: Region,
    /// `χ(base + minimizer)`; the base is `-l'` for line-bundle boxes and `0`
    /// otherwise.
    pub min_value: BigRational,
    pub minimizer: Cycle,
    pub bound: Option<LevelSetBound>,
    pub nodes: u64,
}

/// Integer objective `F(x) = -D (x, x) + Σ w_v x_v`.
pub(crate) struct Objective<'g> {
    g: &'g PlumbingGraph,
    scale: BigInt,
    weights: Vec<BigInt>,
    /// `χ(base)`.
    base_chi: BigRational,
}

#[derive(Clone)]
pub(crate) struct State {
    pub x: Vec<BigInt>,
    /// `(x, E_v)`
    p: Vec<BigInt>,
    pub f: BigInt,
}

impl<'g> Objective<'g> {
    pub fn new(g: &'g PlumbingGraph, base: &RatCycle) -> Result<Self> {
        let base_pairs: Vec<BigRational> =
            g.vertices().map(|v| pair_with_vertex(g, base, v)).collect();
        let scale = base_pairs
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let two_d = BigRational::from(&scale * 2);
        let weights = g
            .vertices()
            .zip(&base_pairs)
            .map(|(v, bp)| &scale * (g.euler(v) + 2) - (bp * &two_d).to_integer())
            .collect();
        Ok(Objective {
            g,
            scale,
            weights,
            base_chi: chi(g, base)?,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// `χ(base + x)` from `F(x)`.
    pub fn chi_of(&self, f: &BigInt) -> BigRational {
        &self.base_chi + BigRational::new(f.clone(), &self.scale * 2)
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn state(&self, x: Vec<BigInt>) -> State {
        let p: Vec<BigInt> = (0..x.len())
            .map(|v| {
                let mut s = &x[v] * self.g.euler(crate::graph::VertexId(v));
                for &w in self.g.neighbors(crate::graph::VertexId(v)) {
                    s += &x[w];
                }
                s
            })
            .collect();
        let xx: BigInt = x.iter().zip(&p).map(|(a, b)| a * b).sum();
        let wx: BigInt = x.iter().zip(&self.weights).map(|(a, b)| a * b).sum();
        let f = wx - &self.scale * xx;
        State { x, p, f }
    }

    /// Change of `F` when coordinate `v` moves by `t`.
    fn delta(&self, s: &State, v: usize, t: &BigInt) -> BigInt {
        let e = self.g.euler(crate::graph::VertexId(v));
        t * &self.weights[v] - &self.scale * (t * &s.p[v] * 2 + t * t * e)
    }

    pub fn step(&self, s: &mut State, v: usize, t: &BigInt) {
        if t.is_zero() {
            return;
        }
        s.f += self.delta(s, v, t);
        s.p[v] += t * self.g.euler(crate::graph::VertexId(v));
        for &w in self.g.neighbors(crate::graph::VertexId(v)) {
            s.p[w] += t;
        }
        s.x[v] += t;
    }

    /// Unconstrained real minimizer `I^{-1} w / 2D`.
    fn continuous_minimizer(&self) -> Vec<BigRational> {
        let w: Vec<BigRational> = self
            .weights
            .iter()
            .map(|x| BigRational::from(x.clone()))
            .collect();
        let two_d = BigRational::from(&self.scale * 2);
        mat_vec(self.g.inverse(), &w)
            .into_iter()
            .map(|x| x / &two_d)
            .collect()
    }

    /// Greedy coordinate descent by unit steps; `hi = None` leaves the
    /// coordinates unbounded above.
    fn descend(&self, mut s: State, lo: &[BigInt], hi: Option<&[BigInt]>) -> State {
        let one = BigInt::one();
        let minus_one = -BigInt::one();
        'outer: loop {
            for v in 0..self.len() {
                let up_ok = hi.is_none_or(|hi| s.x[v] < hi[v]);
                if up_ok && self.delta(&s, v, &one).is_negative() {
                    self.step(&mut s, v, &one);
                    continue 'outer;
                }
                if s.x[v] > lo[v] && self.delta(&s, v, &minus_one).is_negative() {
                    self.step(&mut s, v, &minus_one);
                    continue 'outer;
                }
            }
            return s;
        }
    }
}

pub(crate) fn box_size(lo: &[BigInt], hi: &[BigInt]) -> BigInt {
    lo.iter().zip(hi).fold(BigInt::one(), |acc, (l, h)| {
        if h < l {
            BigInt::zero()
        } else {
            acc * (h - l + 1)
        }
    })
}

pub(crate) fn check_budget(lo: &[BigInt], hi: &[BigInt], budget: u64) -> Result<u64> {
    let size = box_size(lo, hi);
    match size.to_u64() {
        Some(s) if s <= budget => Ok(s),
        _ => Err(Error::BoxTooLarge {
            required: size.to_string(),
            budget,
        }),
    }
}

/// Result of a box minimization in objective units.
pub(crate) struct BoxMin {
    pub value: BigInt,
    pub point: Vec<BigInt>,
    pub nodes: u64,
}

struct Pruner {
    /// For level `k`: `(adj(M_k), det(M_k))` with `M_k = -I[k.., k..]`.
    levels: Vec<Option<(matrix::IntMatrix, BigInt)>>,
}

impl Pruner {
    fn new(g: &PlumbingGraph) -> Self {
        let n = g.len();
        let m = g.matrix();
        let levels = (0..n)
            .map(|k| {
                if n - k < 2 {
                    return None;
                }
                let sub: matrix::IntMatrix = (k..n)
                    .map(|i| (k..n).map(|j| -&m[i][j]).collect())
                    .collect();
                matrix::adjugate(&sub)
            })
            .collect();
        Pruner { levels }
    }

    /// True when no completion of the fixed prefix can reach `threshold`.
    fn prunes(&self, obj: &Objective, s: &State, k: usize, threshold: &BigInt) -> bool {
        let Some((adj, det)) = &self.levels[k] else {
            return false;
        };
        let c: Vec<BigInt> = (k..obj.len())
            .map(|r| &obj.weights[r] - &obj.scale * &s.p[r] * 2)
            .collect();
        let mut quad = BigInt::zero();
        for (i, ci) in c.iter().enumerate() {
            let row: BigInt = adj[i].iter().zip(&c).map(|(a, cj)| a * cj).sum();
            quad += ci * row;
        }
        // F(x) - c^T M^{-1} c / 4D > threshold
        let k4 = &obj.scale * det * 4;
        &k4 * &s.f - quad > k4 * threshold
    }
}

struct Dfs<'a, 'g> {
    obj: &'a Objective<'g>,
    lo: &'a [BigInt],
    hi: &'a [BigInt],
    pruner: &'a Pruner,
    bound: Option<&'a BigInt>,
    best: Option<(BigInt, Vec<BigInt>)>,
    nodes: u64,
}

impl Dfs<'_, '_> {
    fn threshold(&self) -> Option<&BigInt> {
        match (&self.best, self.bound) {
            (Some((b, _)), Some(w)) => Some(b.min(w)),
            (Some((b, _)), None) => Some(b),
            (None, w) => w,
        }
    }

    fn offer(&mut self, value: BigInt, point: impl FnOnce() -> Vec<BigInt>) {
        if self.best.as_ref().is_none_or(|(b, _)| value < *b) {
            self.best = Some((value, point()));
        }
    }

    fn run(&mut self, s: &mut State, k: usize) {
        self.nodes += 1;
        let n = self.obj.len();
        if k + 1 == n {
            self.last(s, k);
            return;
        }
        if let Some(th) = self.threshold() {
            if self.pruner.prunes(self.obj, s, k, th) {
                return;
            }
        }
        let span = &self.hi[k] - &self.lo[k];
        let one = BigInt::one();
        let mut t = BigInt::zero();
        loop {
            self.run(s, k + 1);
            if t == span {
                break;
            }
            self.obj.step(s, k, &one);
            t += 1;
        }
        self.obj.step(s, k, &-span);
    }

    /// Closed-form minimum of the convex parabola in the last coordinate.
    fn last(&mut self, s: &State, k: usize) {
        let e = self.obj.g.euler(crate::graph::VertexId(k));
        let a = -(&self.obj.scale * e);
        let b = &self.obj.weights[k] - &self.obj.scale * &s.p[k] * 2;
        let span = &self.hi[k] - &self.lo[k];
        let clamp = |t: BigInt| t.max(BigInt::zero()).min(span.clone());
        // minimizer of a t^2 + b t is -b / 2a
        let neg_b: BigInt = -&b;
        let t0 = clamp(neg_b.div_floor(&(&a * 2)));
        let t1 = clamp(&t0 + 1);
        let val = |t: &BigInt| &a * t * t + &b * t;
        let (t, d) = {
            let (d0, d1) = (val(&t0), val(&t1));
            if d1 < d0 {
                (t1, d1)
            } else {
                (t0, d0)
            }
        };
        let value = &s.f + d;
        let x = &s.x;
        self.offer(value, || {
            let mut p = x.clone();
            p[k] += &t;
            p
        });
    }
}

pub(crate) fn pool(workers: usize) -> Arc<rayon::ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>> = OnceLock::new();
    let pools = POOLS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = pools.lock().expect("pool registry poisoned");
    map.entry(workers)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .expect("thread pool"),
            )
        })
        .clone()
}

/// Minimizes `F` over the integer box `[lo, hi]`.
///
/// `bound`, when given, must be attained by some point of the box; it only
/// enables pruning and never changes the result.
pub(crate) fn minimize_box(
    obj: &Objective,
    lo: &[BigInt],
    hi: &[BigInt],
    bound: Option<&BigInt>,
    config: &SearchConfig,
) -> Result<BoxMin> {
    check_budget(lo, hi, config.budget)?;
    if box_size(lo, hi).is_zero() {
        return Err(Error::precondition("empty search box"));
    }
    let n = obj.len();
    let pruner = Pruner::new(obj.g);
    // Each slab yields its best point (if any survived pruning) and its node
    // count; the reduction is a minimum under a total order, so the tree shape
    // chosen by the scheduler does not matter.
    type Partial = (Option<(BigInt, Vec<BigInt>)>, u64);
    let slab = |t0: u64| -> Partial {
        let mut x = lo.to_vec();
        let mut dfs = Dfs {
            obj,
            lo,
            hi,
            pruner: &pruner,
            bound,
            best: None,
            nodes: 0,
        };
        if n == 1 {
            let mut s = obj.state(x);
            dfs.run(&mut s, 0);
        } else {
            x[0] += t0;
            let mut s = obj.state(x);
            dfs.nodes += 1;
            dfs.run(&mut s, 1);
        }
        (dfs.best, dfs.nodes)
    };
    let slabs: u64 = if n == 1 {
        1
    } else {
        let span: BigInt = &hi[0] - &lo[0] + 1;
        span.to_u64().expect("within budget")
    };
    let combine = |(a, na): Partial, (b, nb): Partial| -> Partial {
        let best = match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(if (&b.0, &b.1) < (&a.0, &a.1) { b } else { a }),
        };
        (best, na + nb)
    };
    let (best, nodes) = if config.workers <= 1 || slabs < 2 {
        (0..slabs).map(slab).fold((None, 0), combine)
    } else {
        pool(config.workers).install(|| {
            (0..slabs)
                .into_par_iter()
                .map(slab)
                .reduce(|| (None, 0), combine)
        })
    };
    let (value, point) = best.ok_or_else(|| {
        Error::Internal("box search pruned every point; the warm bound was not attainable".into())
    })?;
    Ok(BoxMin {
        value,
        point,
        nodes,
    })
}

fn clamp_round(x: &BigRational, lo: &BigInt, hi: &BigInt) -> BigInt {
    let r = (x + BigRational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer();
    r.max(lo.clone()).min(hi.clone())
}

/// Minimum of `χ(base + l)` over `lo <= l <= hi`.
pub fn min_chi_in_box(
    g: &PlumbingGraph,
    base: &RatCycle,
    lo: &Cycle,
    hi: &Cycle,
    config: &SearchConfig,
) -> Result<MinChiCertificate> {
    if base.key() != g.key() || lo.key() != g.key() || hi.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    if !lo.le(hi)? {
        return Err(Error::precondition("box lower corner exceeds upper corner"));
    }
    check_budget(lo.coeffs(), hi.coeffs(), config.budget)?;
    let obj = Objective::new(g, base)?;
    let start: Vec<BigInt> = obj
        .continuous_minimizer()
        .iter()
        .zip(lo.coeffs().iter().zip(hi.coeffs()))
        .map(|(x, (l, h))| clamp_round(x, l, h))
        .collect();
    let warm = obj.descend(obj.state(start), lo.coeffs(), Some(hi.coeffs()));
    let best = minimize_box(&obj, lo.coeffs(), hi.coeffs(), Some(&warm.f), config)?;
    Ok(MinChiCertificate {
        region: Region::Box {
            lo: lo.clone(),
            hi: hi.clone(),
        },
        min_value: obj.chi_of(&best.value),
        minimizer: Cycle::new(g, best.point)?,
        bound: None,
        nodes: best.nodes,
    })
}

/// `min_{0 <= l <= Z} χ(-l' + l)`.
pub fn min_chi_box(
    g: &PlumbingGraph,
    z: &Cycle,
    lprime: &RatCycle,
    config: &SearchConfig,
) -> Result<MinChiCertificate> {
    if !z.is_effective() {
        return Err(Error::precondition("Z must be effective"));
    }
    min_chi_in_box(g, &-lprime, &Cycle::zero(g), z, config)
}

/// Smallest `s` with `s^2 >= n` (for `n >= 0`).
pub fn ceil_sqrt(n: &BigInt) -> BigInt {
    if !n.is_positive() {
        return BigInt::zero();
    }
    let s = n.sqrt();
    if &(&s * &s) < n {
        s + 1
    } else {
        s
    }
}

/// Certified `min_{l >= c} χ(l)`.
///
/// `χ` is minimized over the reals at `Z_K/2`; a feasible start bounds the
/// level set by an ellipsoid, whose bounding box (radii rounded up through
/// integer square roots) is then searched exhaustively.
pub fn min_chi_lower_bounded(
    g: &PlumbingGraph,
    c: &Cycle,
    config: &SearchConfig,
) -> Result<MinChiCertificate> {
    if c.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    if !c.is_effective() {
        return Err(Error::precondition("lower bound must be effective"));
    }
    let center = zk(g).zk.scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
    let center_value = chi(g, &center)?;

    let zero = RatCycle::zero(g);
    let obj = Objective::new(g, &zero)?;
    let l0: Vec<BigInt> = center
        .ceil()
        .coeffs()
        .iter()
        .zip(c.coeffs())
        .map(|(a, b)| a.max(b).clone())
        .collect();
    let warm = obj.descend(obj.state(l0), c.coeffs(), None);
    let start = Cycle::new(g, warm.x.clone())?;
    let start_value = obj.chi_of(&warm.f);

    let two_r = (&start_value - &center_value) * BigRational::from(BigInt::from(2));
    let inv = g.inverse();
    let mut radius = Vec::with_capacity(g.len());
    let mut lo = Vec::with_capacity(g.len());
    let mut hi = Vec::with_capacity(g.len());
    for v in g.vertices() {
        // ((-I)^{-1})_vv
        let diag = -&inv[v.0][v.0];
        let r = ceil_sqrt(&(&two_r * diag).ceil().to_integer());
        let m = center.get(v);
        let rr = BigRational::from(r.clone());
        lo.push(c.get(v).max(&(m - &rr).ceil().to_integer()).clone());
        hi.push((m + &rr).floor().to_integer());
        radius.push(r);
    }
    let best = minimize_box(&obj, &lo, &hi, Some(&warm.f), config)?;
    let bound = LevelSetBound {
        center,
        center_value,
        start,
        start_value,
        radius,
        lo: Cycle::new(g, lo)?,
        hi: Cycle::new(g, hi)?,
    };
    Ok(MinChiCertificate {
        region: Region::LowerBound { c: c.clone() },
        min_value: obj.chi_of(&best.value),
        minimizer: Cycle::new(g, best.point)?,
        bound: Some(bound),
        nodes: best.nodes,
    })
}

/// Visits every point of `[lo, hi]` in lexicographic order together with
/// `F(point)`.
pub(crate) fn for_each_in_box(
    obj: &Objective,
    lo: &[BigInt],
    hi: &[BigInt],
    mut visit: impl FnMut(&[BigInt], &BigInt) -> Result<()>,
) -> Result<()> {
    let n = lo.len();
    if box_size(lo, hi).is_zero() {
        return Ok(());
    }
    let mut s = obj.state(lo.to_vec());
    let one = BigInt::one();
    loop {
        visit(&s.x, &s.f)?;
        // odometer, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if s.x[k] < hi[k] {
                obj.step(&mut s, k, &one);
                break;
            }
            let back = &lo[k] - &s.x[k];
            obj.step(&mut s, k, &back);
        }
    }
}
