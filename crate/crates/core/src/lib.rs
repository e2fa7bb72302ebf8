//! Computational toolkit for right-angled Artin groups.
//!
//! Given a finite simplicial graph, the group generated by its vertices
//! with commuting relations on edges carries a rich combinatorial
//! structure. This crate implements:
//!
//! - canonical reduced forms and the word problem ([`element`]);
//! - the prefix/suffix partial orders with gcd and lcm ([`lattice`]);
//! - cyclic reduction, cyclings, and the unique conjugator decomposition
//!   ([`conjugation`]);
//! - star words, the exact star-length metric, splitness and loxodromy,
//!   and certified translation-length intervals ([`star`]);
//! - the structure of prefixes of powers ([`powers`]);
//! - quasi-root decompositions and their uniqueness checks ([`quasiroot`]);
//! - quasi-stabilizers and explicit acylindricity constants
//!   ([`stabilizer`]);
//! - finite truncations of the extension graph ([`egraph`]);
//! - independent brute-force oracles for the test suite ([`oracle`]).
//!
//! The `raag` binary exposes the same operations as CLI subcommands; see
//! [`cli`].

pub mod cli;
pub mod conjugation;
pub mod egraph;
pub mod element;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod oracle;
pub mod powers;
pub mod quasiroot;
pub mod stabilizer;
pub mod star;

pub use element::{Element, Letter, Sign, Word};
pub use error::{Error, Result};
pub use graph::{DefiningGraph, Diameter, VertexSet};

#[cfg(test)]
pub(crate) mod testutil {
    use std::sync::Arc;

    use crate::element::Element;
    use crate::graph::{complement_of_path, DefiningGraph};

    pub fn pbar4() -> Arc<DefiningGraph> {
        Arc::new(complement_of_path(&["v1", "v2", "v3", "v4"]))
    }

    pub fn pbar5() -> Arc<DefiningGraph> {
        Arc::new(complement_of_path(&["v1", "v2", "v3", "v4", "v5"]))
    }

    pub fn pbar6() -> Arc<DefiningGraph> {
        Arc::new(complement_of_path(&["v0", "v1", "v2", "v3", "v4", "v5"]))
    }

    pub fn el(graph: &Arc<DefiningGraph>, text: &str) -> Element {
        Element::parse(graph, text).expect("test word parses")
    }
}
