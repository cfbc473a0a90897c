//! Lattice cohomology toolkit for negative-definite plumbing graphs: the
//! intersection lattice and its dual, the Riemann-Roch function `χ`, exact
//! minimization of `χ`, bounds on `h^1` of line bundles, relative generic
//! structures and blow-up surgery.

pub mod chi;
pub mod corpus;
pub mod cycle;
pub mod error;
pub mod genus;
pub mod graph;
pub mod lattice;
pub mod matrix;
pub mod relative;
pub mod search;
pub mod surgery;

pub use chi::{chi, chi_int, is_rational, laufer_reduce, laufer_zmin, zk, AnticanonicalCycle};
pub use cycle::{format_rational, parse_rational, Cycle, RatCycle};
pub use error::{Error, Result};
pub use genus::{IntervalFloorReport, CEILING_UNKNOWN};
pub use graph::{PlumbingGraph, Subgraph, VertexId};
pub use relative::{H1Oracle, RelReport};
pub use search::{MinChiCertificate, Region, SearchConfig};
pub use surgery::BlowupResult;
