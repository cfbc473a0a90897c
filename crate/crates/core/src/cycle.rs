//! Integral cycles (elements of `L`) and rational cycles (elements of
//! `L ⊗ Q`, which contains `L'`), both in `E_v`-coordinates.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{GraphKey, PlumbingGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    key: GraphKey,
    coeffs: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatCycle {
    key: GraphKey,
    coeffs: Vec<BigRational>,
}

fn check_len(g: &PlumbingGraph, len: usize) -> Result<()> {
    if len == g.len() {
        Ok(())
    } else {
        Err(Error::GraphMismatch)
    }
}

impl Cycle {
    pub fn zero(g: &PlumbingGraph) -> Self {
        Cycle {
            key: g.key(),
            coeffs: vec![BigInt::zero(); g.len()],
        }
    }

    pub fn new(g: &PlumbingGraph, coeffs: Vec<BigInt>) -> Result<Self> {
        check_len(g, coeffs.len())?;
        Ok(Cycle { key: g.key(), coeffs })
    }

    pub fn from_i64s(g: &PlumbingGraph, coeffs: &[i64]) -> Result<Self> {
        Cycle::new(g, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub(crate) fn from_parts(key: GraphKey, coeffs: Vec<BigInt>) -> Self {
        Cycle { key, coeffs }
    }

    /// The single curve `E_v`.
    pub fn basis(g: &PlumbingGraph, v: VertexId) -> Self {
        let mut c = Cycle::zero(g);
        c.coeffs[v.0] = BigInt::one();
        c
    }

    /// `E_I = Σ_{v ∈ I} E_v`.
    pub fn reduced_on(g: &PlumbingGraph, vertices: &[VertexId]) -> Self {
        let mut c = Cycle::zero(g);
        for v in vertices {
            c.coeffs[v.0] = BigInt::one();
        }
        c
    }

    /// The reduced exceptional cycle `E = Σ_v E_v`.
    pub fn reduced(g: &PlumbingGraph) -> Self {
        Cycle {
            key: g.key(),
            coeffs: vec![BigInt::one(); g.len()],
        }
    }

    pub fn key(&self) -> GraphKey {
        self.key
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn get(&self, v: VertexId) -> &BigInt {
        &self.coeffs[v.0]
    }

    pub fn set(&mut self, v: VertexId, value: BigInt) {
        self.coeffs[v.0] = value;
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Vertices with nonzero coefficient, `|Z|`.
    pub fn support(&self) -> Vec<VertexId> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| VertexId(i))
            .collect()
    }

    /// `E_{|Z|}`.
    pub fn support_cycle(&self) -> Cycle {
        Cycle {
            key: self.key,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| if c.is_zero() { BigInt::zero() } else { BigInt::one() })
                .collect(),
        }
    }

    /// Partial order: `self <= other` coordinatewise.
    pub fn le(&self, other: &Cycle) -> Result<bool> {
        self.same_graph(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b))
    }

    pub fn same_graph(&self, other: &Cycle) -> Result<()> {
        if self.key == other.key {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    pub fn scale(&self, k: &BigInt) -> Cycle {
        Cycle {
            key: self.key,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn to_rational(&self) -> RatCycle {
        RatCycle {
            key: self.key,
            coeffs: self.coeffs.iter().map(|c| BigRational::from(c.clone())).collect(),
        }
    }

    pub fn parse(g: &PlumbingGraph, literal: &str) -> Result<Self> {
        let rat = RatCycle::parse(g, literal)?;
        rat.to_cycle().ok_or_else(|| Error::CycleLiteral {
            literal: literal.to_string(),
            message: "integer coefficients required".into(),
        })
    }

    /// Cycle literal: `name=coef` pairs in declaration order, zeros omitted,
    /// `0` for the zero cycle.
    pub fn literal(&self, g: &PlumbingGraph) -> String {
        literal(g, self.coeffs.iter().map(|c| (c.is_zero(), c.to_string())))
    }
}

impl RatCycle {
    pub fn zero(g: &PlumbingGraph) -> Self {
        RatCycle {
            key: g.key(),
            coeffs: vec![BigRational::zero(); g.len()],
        }
    }

    pub fn new(g: &PlumbingGraph, coeffs: Vec<BigRational>) -> Result<Self> {
        check_len(g, coeffs.len())?;
        Ok(RatCycle { key: g.key(), coeffs })
    }

    pub fn key(&self) -> GraphKey {
        self.key
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    pub fn get(&self, v: VertexId) -> &BigRational {
        &self.coeffs[v.0]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn same_graph(&self, other: &RatCycle) -> Result<()> {
        if self.key == other.key {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn to_cycle(&self) -> Option<Cycle> {
        self.is_integral().then(|| Cycle {
            key: self.key,
            coeffs: self.coeffs.iter().map(BigRational::to_integer).collect(),
        })
    }

    pub fn ceil(&self) -> Cycle {
        Cycle {
            key: self.key,
            coeffs: self.coeffs.iter().map(|c| c.ceil().to_integer()).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> RatCycle {
        RatCycle {
            key: self.key,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Lowest common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn parse(g: &PlumbingGraph, literal: &str) -> Result<Self> {
        let bad = |message: String| Error::CycleLiteral {
            literal: literal.to_string(),
            message,
        };
        let mut coeffs = vec![BigRational::zero(); g.len()];
        let mut seen = vec![false; g.len()];
        let trimmed = literal.trim();
        if trimmed.is_empty() || trimmed == "0" {
            return Ok(RatCycle { key: g.key(), coeffs });
        }
        for pair in trimmed.split_whitespace() {
            let (name, coef) = pair
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `name=coef`, got `{pair}`")))?;
            let v = g.vertex(name)?;
            if seen[v.0] {
                return Err(bad(format!("vertex `{name}` given twice")));
            }
            seen[v.0] = true;
            coeffs[v.0] = parse_rational(coef).map_err(bad)?;
        }
        Ok(RatCycle { key: g.key(), coeffs })
    }

    pub fn literal(&self, g: &PlumbingGraph) -> String {
        literal(g, self.coeffs.iter().map(|c| (c.is_zero(), format_rational(c))))
    }
}

fn literal(g: &PlumbingGraph, coeffs: impl Iterator<Item = (bool, String)>) -> String {
    let parts: Vec<String> = coeffs
        .zip(g.names())
        .filter(|((zero, _), _)| !zero)
        .map(|((_, c), name)| format!("{name}={c}"))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

/// `p` or `p/q` with `q > 0` and `gcd(p, q) = 1`.
pub fn parse_rational(text: &str) -> std::result::Result<BigRational, String> {
    let int = |s: &str| {
        s.parse::<BigInt>()
            .map_err(|_| format!("invalid integer `{s}`"))
    };
    match text.split_once('/') {
        None => Ok(BigRational::from(int(text)?)),
        Some((p, q)) => {
            let (p, q) = (int(p)?, int(q)?);
            if !q.is_positive() {
                return Err(format!("denominator of `{text}` must be positive"));
            }
            if !p.gcd(&q).is_one() {
                return Err(format!("`{text}` is not in lowest terms"));
            }
            Ok(BigRational::new_raw(p, q))
        }
    }
}

/// `p` when integral, otherwise `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

macro_rules! impl_ops {
    ($ty:ident) => {
        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                assert_eq!(self.key, rhs.key, "cycles from different graphs");
                $ty {
                    key: self.key,
                    coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
                }
            }
        }

        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                assert_eq!(self.key, rhs.key, "cycles from different graphs");
                $ty {
                    key: self.key,
                    coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
                }
            }
        }

        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty {
                    key: self.key,
                    coeffs: self.coeffs.iter().map(|a| -a).collect(),
                }
            }
        }

        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                &self + &rhs
            }
        }

        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                &self - &rhs
            }
        }

        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                -&self
            }
        }
    };
}

impl_ops!(Cycle);
impl_ops!(RatCycle);

impl From<&Cycle> for RatCycle {
    fn from(c: &Cycle) -> Self {
        c.to_rational()
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Display for RatCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> PlumbingGraph {
        PlumbingGraph::parse("vertex a -2\nvertex b -2\nedge a b").unwrap()
    }

    #[test]
    fn parse_literals() {
        let g = a2();
        let c = RatCycle::parse(&g, "b=2/3 a=-1").unwrap();
        assert_eq!(c.literal(&g), "a=-1 b=2/3");
        assert!(RatCycle::parse(&g, "0").unwrap().is_zero());
        assert!(RatCycle::parse(&g, "").unwrap().is_zero());
        assert!(RatCycle::parse(&g, "a=2/4").is_err());
        assert!(RatCycle::parse(&g, "a=1/-3").is_err());
        assert!(RatCycle::parse(&g, "a=1 a=2").is_err());
        assert!(matches!(
            RatCycle::parse(&g, "c=1"),
            Err(Error::UnknownVertex(_))
        ));
        assert!(Cycle::parse(&g, "a=1/2").is_err());
        assert_eq!(Cycle::parse(&g, "a=2 b=3").unwrap().literal(&g), "a=2 b=3");
        assert_eq!(Cycle::zero(&g).literal(&g), "0");
    }

    #[test]
    fn order_and_support() {
        let g = a2();
        let z = Cycle::from_i64s(&g, &[2, 0]).unwrap();
        assert_eq!(z.support(), vec![VertexId(0)]);
        assert_eq!(z.support_cycle(), Cycle::from_i64s(&g, &[1, 0]).unwrap());
        assert!(z.le(&Cycle::from_i64s(&g, &[2, 1]).unwrap()).unwrap());
        assert!(!z.le(&Cycle::from_i64s(&g, &[1, 5]).unwrap()).unwrap());
        let other = PlumbingGraph::parse("vertex a -2\nvertex b -3\nedge a b").unwrap();
        assert_eq!(
            z.le(&Cycle::zero(&other)).unwrap_err(),
            Error::GraphMismatch
        );
    }

    #[test]
    fn rational_helpers() {
        let g = a2();
        let c = RatCycle::parse(&g, "a=1/2 b=-1/3").unwrap();
        assert_eq!(c.denominator(), BigInt::from(6));
        assert_eq!(c.ceil(), Cycle::from_i64s(&g, &[1, 0]).unwrap());
        assert!(c.to_cycle().is_none());
        assert_eq!(format_rational(&BigRational::new(4.into(), 2.into())), "2");
    }
}
