//! Relative dominance and relatively generic `h^1`, driven by an `h^1`
//! table for the fixed part `Z_1`.
//!
//! The analytic input `h^1((Z-l)_1, L(-l))` is supplied by an [`H1Oracle`];
//! everything else is the `χ` function on the box `0 <= l <= Z`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cycle::{Cycle, RatCycle};
use crate::error::{Error, Result};
use crate::genus::interval_floor_line_bundle;
use crate::graph::{PlumbingGraph, VertexId};
use crate::lattice::{in_minus_s, meet, pairing};
use crate::search::{box_size, check_budget, for_each_in_box, Objective, SearchConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleSource {
    Zero,
    File,
    GenericNatural,
}

impl OracleSource {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleSource::Zero => "zero",
            OracleSource::File => "file",
            OracleSource::GenericNatural => "generic-natural",
        }
    }
}

/// `l ↦ h^1((Z-l)_1, L(-l))` on the box `0 <= l <= Z`, with
/// `(Z-l)_1 = meet(Z-l, Z_1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Oracle {
    z: Cycle,
    z1: Cycle,
    source: OracleSource,
    /// Absent for the zero oracle.
    table: Option<HashMap<Vec<BigInt>, u64>>,
}

fn check_pair(g: &PlumbingGraph, z: &Cycle, z1: &Cycle) -> Result<()> {
    if z.key() != g.key() || z1.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    if !z1.is_effective() || !z1.le(z)? {
        return Err(Error::precondition("need 0 <= Z1 <= Z"));
    }
    Ok(())
}

fn in_box(z: &Cycle, l: &Cycle) -> bool {
    l.is_effective() && l.le(z).unwrap_or(false)
}

/// The fixed part is empty at `l`: `meet(Z - l, Z_1) = 0`.
fn empty_fixed_part(z: &Cycle, z1: &Cycle, l: &Cycle) -> Result<bool> {
    Ok(meet(&(z - l), z1)?.is_zero())
}

impl H1Oracle {
    pub fn zero(g: &PlumbingGraph, z: &Cycle, z1: &Cycle) -> Result<Self> {
        check_pair(g, z, z1)?;
        Ok(H1Oracle {
            z: z.clone(),
            z1: z1.clone(),
            source: OracleSource::Zero,
            table: None,
        })
    }

    /// A table that must cover the whole box, vanishing where the fixed part
    /// is empty.
    pub fn from_table(
        g: &PlumbingGraph,
        z: &Cycle,
        z1: &Cycle,
        entries: impl IntoIterator<Item = (Cycle, u64)>,
        budget: u64,
    ) -> Result<Self> {
        check_pair(g, z, z1)?;
        let mut table = HashMap::new();
        for (l, h) in entries {
            if l.key() != g.key() {
                return Err(Error::GraphMismatch);
            }
            if !in_box(z, &l) {
                return Err(Error::OracleIncomplete(format!(
                    "entry {} lies outside 0 <= l <= Z",
                    l.literal(g)
                )));
            }
            if h != 0 && empty_fixed_part(z, z1, &l)? {
                return Err(Error::OracleIncomplete(format!(
                    "entry {} must be 0: the fixed part (Z-l)_1 is empty",
                    l.literal(g)
                )));
            }
            if table.insert(l.coeffs().to_vec(), h).is_some() {
                return Err(Error::OracleIncomplete(format!("duplicate entry {}", l.literal(g))));
            }
        }
        let zeros = vec![BigInt::zero(); g.len()];
        check_budget(&zeros, z.coeffs(), budget)?;
        let expected = box_size(&zeros, z.coeffs());
        if BigInt::from(table.len()) != expected {
            let obj = Objective::new(g, &RatCycle::zero(g))?;
            let mut missing = None;
            for_each_in_box(&obj, &zeros, z.coeffs(), |x, _| {
                if missing.is_none() && !table.contains_key(x) {
                    missing = Some(Cycle::new(g, x.to_vec())?);
                }
                Ok(())
            })?;
            let m = missing.expect("a smaller table misses some box point");
            return Err(Error::OracleIncomplete(format!("missing entry {}", m.literal(g))));
        }
        Ok(H1Oracle {
            z: z.clone(),
            z1: z1.clone(),
            source: OracleSource::File,
            table: Some(table),
        })
    }

    /// `table(l) = generic h^1` of the natural line bundle with Chern class
    /// `l' - l` on `(Z-l)_1`, restricted per component.
    pub fn generic_natural(
        g: &PlumbingGraph,
        z: &Cycle,
        z1: &Cycle,
        lprime: &RatCycle,
        config: &SearchConfig,
    ) -> Result<Self> {
        check_pair(g, z, z1)?;
        let zeros = vec![BigInt::zero(); g.len()];
        check_budget(&zeros, z.coeffs(), config.budget)?;
        let obj = Objective::new(g, &RatCycle::zero(g))?;
        let mut table = HashMap::new();
        for_each_in_box(&obj, &zeros, z.coeffs(), |x, _| {
            let l = Cycle::new(g, x.to_vec())?;
            let part = meet(&(z - &l), z1)?;
            let h = if part.is_zero() {
                0
            } else {
                let r = interval_floor_line_bundle(g, &part, &(lprime - &l.to_rational()), config)?;
                let value = r.integral_floor().and_then(|f| f.to_u64()).ok_or_else(|| {
                    Error::precondition(format!(
                        "generic-natural oracle value at {} is not a nonnegative integer; l' must lie in L'",
                        l.literal(g)
                    ))
                })?;
                value
            };
            table.insert(x.to_vec(), h);
            Ok(())
        })?;
        Ok(H1Oracle {
            z: z.clone(),
            z1: z1.clone(),
            source: OracleSource::GenericNatural,
            table: Some(table),
        })
    }

    /// Reads the text format:
    ///
    /// ```text
    /// oracle z=a=1 b=2 z1=a=1
    /// 0 -> 0
    /// a=1 -> 1
    /// ```
    ///
    /// The `z1` part starts at the first token of the form `z1=<name>=<coef>`
    /// or `z1=0`.
    pub fn parse(g: &PlumbingGraph, text: &str, budget: u64) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::syntax(1, "missing `oracle` header"))?;
        let (z, z1) = parse_header(g, hline, header)?;
        let mut entries = Vec::new();
        for (n, line) in lines {
            let (lit, value) = line
                .split_once("->")
                .ok_or_else(|| Error::syntax(n, "expected `<cycle> -> <h1>`"))?;
            let l = Cycle::parse(g, lit.trim()).map_err(|e| Error::syntax(n, e.to_string()))?;
            let h: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::syntax(n, format!("`{}` is not a nonnegative integer", value.trim())))?;
            entries.push((l, h));
        }
        Self::from_table(g, &z, &z1, entries, budget)
    }

    /// Writes the text format read by [`H1Oracle::parse`], one line per box
    /// point in lexicographic order.
    pub fn render(&self, g: &PlumbingGraph) -> Result<String> {
        let mut out = format!(
            "oracle z={} z1={}\n",
            self.z.literal(g),
            self.z1.literal(g)
        );
        let zeros = vec![BigInt::zero(); g.len()];
        let obj = Objective::new(g, &RatCycle::zero(g))?;
        for_each_in_box(&obj, &zeros, self.z.coeffs(), |x, _| {
            let l = Cycle::new(g, x.to_vec())?;
            out.push_str(&format!("{} -> {}\n", l.literal(g), self.value(&l)?));
            Ok(())
        })?;
        Ok(out)
    }

    pub fn z(&self) -> &Cycle {
        &self.z
    }

    pub fn z1(&self) -> &Cycle {
        &self.z1
    }

    pub fn source(&self) -> OracleSource {
        self.source
    }

    pub fn value(&self, l: &Cycle) -> Result<u64> {
        if l.key() != self.z.key() {
            return Err(Error::GraphMismatch);
        }
        self.lookup(l.coeffs())
    }

    fn lookup(&self, l: &[BigInt]) -> Result<u64> {
        match &self.table {
            None => Ok(0),
            Some(t) => t
                .get(l)
                .copied()
                .ok_or_else(|| Error::OracleIncomplete(format!("no entry for {l:?}"))),
        }
    }

    /// Converts to an explicit table and sets one entry.
    pub fn with_entry(&self, g: &PlumbingGraph, l: &Cycle, value: u64) -> Result<Self> {
        if !in_box(&self.z, l) {
            return Err(Error::OracleIncomplete(format!(
                "entry {} lies outside 0 <= l <= Z",
                l.literal(g)
            )));
        }
        let mut entries = Vec::new();
        let zeros = vec![BigInt::zero(); g.len()];
        let obj = Objective::new(g, &RatCycle::zero(g))?;
        for_each_in_box(&obj, &zeros, self.z.coeffs(), |x, _| {
            let h = if x == l.coeffs() { value } else { self.lookup(x)? };
            entries.push((Cycle::new(g, x.to_vec())?, h));
            Ok(())
        })?;
        Self::from_table(g, &self.z, &self.z1, entries, u64::MAX)
    }
}

fn parse_header(g: &PlumbingGraph, line: usize, header: &str) -> Result<(Cycle, Cycle)> {
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("oracle") {
        return Err(Error::syntax(line, "expected `oracle z=<cycle> z1=<cycle>`"));
    }
    let mut z_tokens = Vec::new();
    let mut z1_tokens = Vec::new();
    let mut in_z1 = false;
    for (i, tok) in tokens.enumerate() {
        if i == 0 {
            let rest = tok
                .strip_prefix("z=")
                .ok_or_else(|| Error::syntax(line, "header must start with `z=`"))?;
            z_tokens.push(rest);
            continue;
        }
        if !in_z1 {
            if let Some(rest) = tok.strip_prefix("z1=") {
                if rest == "0" || rest.contains('=') {
                    in_z1 = true;
                    z1_tokens.push(rest);
                    continue;
                }
            }
            z_tokens.push(tok);
        } else {
            z1_tokens.push(tok);
        }
    }
    if z_tokens.is_empty() || !in_z1 {
        return Err(Error::syntax(line, "header needs both `z=` and `z1=`"));
    }
    let z = Cycle::parse(g, &z_tokens.join(" ")).map_err(|e| Error::syntax(line, e.to_string()))?;
    let z1 = Cycle::parse(g, &z1_tokens.join(" ")).map_err(|e| Error::syntax(line, e.to_string()))?;
    Ok((z, z1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelReport {
    /// `χ(-l') - o(0) < χ(-l'+l) - o(l)` for every `0 < l <= Z`.
    pub dominant: bool,
    /// Lexicographically first violating `l`.
    pub witness: Option<Cycle>,
    /// `χ(-l') - min_{0 <= l <= Z} (χ(-l'+l) - o(l))`.
    pub rel_h1: BigRational,
    /// Lexicographically first minimizer.
    pub argmin: Cycle,
    pub points: u64,
}

/// Per-slab partial result, in objective units `F(l) - 2D o(l)`.
#[derive(Default)]
struct Partial {
    best: Option<(BigInt, Vec<BigInt>)>,
    witness: Option<Vec<BigInt>>,
    points: u64,
}

fn combine(a: Partial, b: Partial) -> Partial {
    let best = match (a.best, b.best) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if (&y.0, &y.1) < (&x.0, &x.1) { y } else { x }),
    };
    let witness = match (a.witness, b.witness) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    };
    Partial {
        best,
        witness,
        points: a.points + b.points,
    }
}

fn evaluate(
    g: &PlumbingGraph,
    z: &Cycle,
    z1: &Cycle,
    lprime: &RatCycle,
    oracle: &H1Oracle,
    config: &SearchConfig,
) -> Result<RelReport> {
    check_pair(g, z, z1)?;
    if lprime.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    if oracle.z() != z || oracle.z1() != z1 {
        return Err(Error::precondition(format!(
            "oracle is bound to z={} z1={}",
            oracle.z().literal(g),
            oracle.z1().literal(g)
        )));
    }
    let zeros = vec![BigInt::zero(); g.len()];
    check_budget(&zeros, z.coeffs(), config.budget)?;
    let obj = Objective::new(g, &-lprime)?;
    let two_d: BigInt = obj.scale() * BigInt::from(2);
    // left side at l = 0: F(0) - 2D o(0)
    let o0 = BigInt::from(oracle.lookup(&zeros)?);
    let lhs: BigInt = -(&two_d * o0);

    let slab = |t0: u64| -> Result<Partial> {
        let mut lo = zeros.clone();
        let mut hi = z.coeffs().to_vec();
        if !lo.is_empty() {
            lo[0] = BigInt::from(t0);
            hi[0] = BigInt::from(t0);
        }
        let mut part = Partial::default();
        for_each_in_box(&obj, &lo, &hi, |x, f| {
            part.points += 1;
            let v: BigInt = f - &two_d * BigInt::from(oracle.lookup(x)?);
            let is_zero = x.iter().all(|c| c.is_zero());
            if !is_zero && part.witness.is_none() && v <= lhs {
                part.witness = Some(x.to_vec());
            }
            if part.best.as_ref().is_none_or(|(b, _)| v < *b) {
                part.best = Some((v, x.to_vec()));
            }
            Ok(())
        })?;
        Ok(part)
    };
    let slabs = z.coeffs().first().map_or(1, |c| c.to_u64().expect("within budget") + 1);
    let parts: Vec<Result<Partial>> = if config.workers <= 1 || slabs < 2 {
        (0..slabs).map(slab).collect()
    } else {
        crate::search::pool(config.workers)
            .install(|| (0..slabs).into_par_iter().map(slab).collect())
    };
    let mut total = Partial::default();
    for p in parts {
        total = combine(total, p?);
    }
    let (best, argmin) = total.best.expect("box contains 0");
    // rel_h1 = χ(-l') - (χ(-l') + best/2D)
    let rel_h1 = -BigRational::new(best, two_d);
    Ok(RelReport {
        dominant: total.witness.is_none(),
        witness: total.witness.map(|w| Cycle::new(g, w)).transpose()?,
        rel_h1,
        argmin: Cycle::new(g, argmin)?,
        points: total.points,
    })
}

/// Relative dominance of `(l', L)` on `Z` over the fixed part `Z_1`.
pub fn reldom_check(
    g: &PlumbingGraph,
    z: &Cycle,
    z1: &Cycle,
    lprime: &RatCycle,
    oracle: &H1Oracle,
    config: &SearchConfig,
) -> Result<RelReport> {
    evaluate(g, z, z1, lprime, oracle, config)
}

/// `h^1(Z, L)` for a relatively generic line bundle.
pub fn relgen_h1(
    g: &PlumbingGraph,
    z: &Cycle,
    z1: &Cycle,
    lprime: &RatCycle,
    oracle: &H1Oracle,
    config: &SearchConfig,
) -> Result<RelReport> {
    evaluate(g, z, z1, lprime, oracle, config)
}

/// Dimension of the relative `ECa` space:
/// `h^1(Z_1, L) - h^1(O_{Z_1}) + (l', Z)`.
pub fn relspace_dim(
    g: &PlumbingGraph,
    z: &Cycle,
    lprime: &RatCycle,
    h1_z1_l: u64,
    h1_o_z1: u64,
) -> Result<BigInt> {
    if z.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    if !in_minus_s(g, lprime)? {
        return Err(Error::precondition("l' is not in -S'"));
    }
    let p = pairing(g, lprime, &z.to_rational())?;
    if !p.is_integer() {
        return Err(Error::precondition("(l', Z) is not an integer; l' must lie in L'"));
    }
    Ok(BigInt::from(h1_z1_l) - BigInt::from(h1_o_z1) + p.to_integer())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relgen1Outcome {
    pub nonempty: bool,
    pub report: RelReport,
    /// Vertices outside `|Z| ∪ |Z_1|`, where the sign hypothesis was not
    /// checked.
    pub unchecked: Vec<VertexId>,
}

/// Existence of sections without fixed components for a relatively generic
/// bundle, under the hypothesis `a_v > 0` on `|Z| \ |Z_1|` where
/// `l' = -Σ a_v E_v`.
pub fn relgen1_nonempty(
    g: &PlumbingGraph,
    z: &Cycle,
    z1: &Cycle,
    lprime: &RatCycle,
    oracle: &H1Oracle,
    config: &SearchConfig,
) -> Result<Relgen1Outcome> {
    check_pair(g, z, z1)?;
    if lprime.key() != g.key() {
        return Err(Error::GraphMismatch);
    }
    let mut unchecked = Vec::new();
    for v in g.vertices() {
        if !z1.get(v).is_zero() {
            continue;
        }
        if z.get(v).is_zero() {
            unchecked.push(v);
            continue;
        }
        let a = -lprime.get(v);
        if !a.is_positive() {
            return Err(Error::HypothesisFailed {
                vertex: g.name(v).to_string(),
                message: format!(
                    "coefficient of -l' is {}, must be positive on |Z| \\ |Z1|",
                    crate::cycle::format_rational(&a)
                ),
            });
        }
    }
    let report = reldom_check(g, z, z1, lprime, oracle, config)?;
    Ok(Relgen1Outcome {
        nonempty: report.dominant,
        report,
        unchecked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::estar_named;

    const A2: &str = "vertex a -2\nvertex b -2\nedge a b";

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn g(text: &str) -> PlumbingGraph {
        PlumbingGraph::parse(text).unwrap()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn dominance_examples() {
        let a1 = g("vertex v -2");
        let e = Cycle::reduced(&a1);
        let zero = Cycle::zero(&a1);
        let o = H1Oracle::zero(&a1, &e, &zero).unwrap();
        let r = reldom_check(&a1, &e, &zero, &RatCycle::zero(&a1), &o, &cfg()).unwrap();
        assert!(r.dominant && r.witness.is_none());

        let m = -&estar_named(&a1, "v").unwrap();
        let r = reldom_check(&a1, &e, &zero, &m, &o, &cfg()).unwrap();
        assert!(r.dominant);

        // a huge value at l* forces a violation there
        let z2 = Cycle::from_i64s(&a1, &[2]).unwrap();
        let o = H1Oracle::from_table(
            &a1,
            &z2,
            &z2,
            [(0, 0), (1, 100), (2, 0)].map(|(l, h)| (Cycle::from_i64s(&a1, &[l]).unwrap(), h)),
            u64::MAX,
        )
        .unwrap();
        let r = reldom_check(&a1, &z2, &z2, &RatCycle::zero(&a1), &o, &cfg()).unwrap();
        assert!(!r.dominant);
        assert_eq!(r.witness.unwrap(), e);
    }

    #[test]
    fn worked_a2_example() {
        let a2 = g(A2);
        let e = Cycle::reduced(&a2);
        let o = H1Oracle::zero(&a2, &e, &e)
            .unwrap()
            .with_entry(&a2, &Cycle::zero(&a2), 1)
            .unwrap();
        let r = relgen_h1(&a2, &e, &e, &RatCycle::zero(&a2), &o, &cfg()).unwrap();
        assert_eq!(r.rel_h1, q(1, 1));
        assert!(r.argmin.is_zero());
        assert!(r.dominant);
    }

    #[test]
    fn table_must_be_total_and_consistent() {
        let a2 = g(A2);
        let e = Cycle::reduced(&a2);
        let ea = Cycle::from_i64s(&a2, &[1, 0]).unwrap();
        let missing = H1Oracle::from_table(&a2, &e, &ea, [(Cycle::zero(&a2), 0)], u64::MAX);
        assert!(matches!(missing, Err(Error::OracleIncomplete(m)) if m.contains("b=1")));
        // l = E_a empties the fixed part
        let entries = [([0, 0], 0), ([0, 1], 0), ([1, 0], 2), ([1, 1], 0)]
            .map(|(l, h)| (Cycle::from_i64s(&a2, &l).unwrap(), h));
        assert!(matches!(
            H1Oracle::from_table(&a2, &e, &ea, entries, u64::MAX),
            Err(Error::OracleIncomplete(_))
        ));
    }

    #[test]
    fn file_round_trip() {
        let a2 = g(A2);
        let z = Cycle::from_i64s(&a2, &[2, 1]).unwrap();
        let z1 = Cycle::from_i64s(&a2, &[1, 1]).unwrap();
        let o = H1Oracle::zero(&a2, &z, &z1)
            .unwrap()
            .with_entry(&a2, &Cycle::from_i64s(&a2, &[1, 0]).unwrap(), 1)
            .unwrap();
        let text = o.render(&a2).unwrap();
        assert!(text.starts_with("oracle z=a=2 b=1 z1=a=1 b=1\n"));
        let back = H1Oracle::parse(&a2, &text, u64::MAX).unwrap();
        assert_eq!(back, o);
        let err = H1Oracle::parse(&a2, "oracle z=a=1\n", u64::MAX).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        let err = H1Oracle::parse(&a2, "oracle z=0 z1=0\n0 => 1\n", u64::MAX).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
    }

    #[test]
    fn generic_natural_oracle() {
        let a2 = g(A2);
        let e = Cycle::reduced(&a2);
        let ea = Cycle::from_i64s(&a2, &[1, 0]).unwrap();
        let lp = -&estar_named(&a2, "b").unwrap();
        let o = H1Oracle::generic_natural(&a2, &e, &ea, &lp, &cfg()).unwrap();
        assert_eq!(o.source(), OracleSource::GenericNatural);
        assert_eq!(o.value(&Cycle::from_i64s(&a2, &[1, 1]).unwrap()).unwrap(), 0);
    }

    #[test]
    fn relgen1_hypothesis() {
        let a2 = g(A2);
        let e = Cycle::reduced(&a2);
        let ea = Cycle::from_i64s(&a2, &[1, 0]).unwrap();
        let lp = -&estar_named(&a2, "b").unwrap();
        let o = H1Oracle::zero(&a2, &e, &ea).unwrap();
        let out = relgen1_nonempty(&a2, &e, &ea, &lp, &o, &cfg()).unwrap();
        let direct = reldom_check(&a2, &e, &ea, &lp, &o, &cfg()).unwrap();
        assert_eq!(out.nonempty, direct.dominant);

        let bad = relgen1_nonempty(&a2, &e, &ea, &RatCycle::zero(&a2), &o, &cfg());
        assert!(matches!(bad, Err(Error::HypothesisFailed { vertex, .. }) if vertex == "b"));
    }

    #[test]
    fn relspace_examples() {
        let a1 = g("vertex v -2");
        let m = -&estar_named(&a1, "v").unwrap();
        let z2 = Cycle::from_i64s(&a1, &[2]).unwrap();
        assert_eq!(relspace_dim(&a1, &z2, &m, 1, 0).unwrap(), BigInt::from(3));
        assert_eq!(relspace_dim(&a1, &z2, &m, 4, 4).unwrap(), BigInt::from(2));
        assert!(relspace_dim(&a1, &z2, &RatCycle::zero(&a1), 0, 0).unwrap().is_zero());
    }
}
