//! Towers of metric graphs and the tropical n-gonal construction.
//!
//! The crate is organized around a pipeline: parse a tower file
//! ([`towerio`]), run the n-gonal construction and split it into output
//! towers ([`ngonal`]), and compare the Prym lattices of input and outputs
//! as symbolic Gram matrices ([`prym`], [`intlat`]). The graph substrate
//! (half-edge graphs, harmonic morphisms, double covers) lives in
//! [`symgraph`] and [`harmonic`].

pub mod harmonic;
pub mod intlat;
pub mod ngonal;
pub mod prym;
pub mod symgraph;
pub mod towerio;

pub use harmonic::{DoubleCover, Morphism, Tower};
pub use intlat::{GramMatrix, IntMatrix};
pub use symgraph::{Graph, LinearForm, Vars};
