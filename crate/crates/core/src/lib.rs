//! Finite groups, their non-commuting graphs, and mechanical checks of the
//! structural facts relating the two.
//!
//! * [`group`] builds and validates Cayley tables and computes centers,
//!   centralizers, conjugacy classes, central series and Sylow splittings.
//! * [`graph`] builds non-commuting graphs and decides isomorphism through
//!   complete canonical certificates.
//! * [`lab`] audits the numeric identities that isomorphic non-commuting
//!   graphs force on their groups.
//! * [`diophantine`] searches for coincidences between repunits in different bases.
//! * [`catalog`] enumerates group families, scans them pairwise and writes reports.

pub mod catalog;
pub mod cayfile;
pub mod diophantine;
pub mod graph;
pub mod group;
pub mod lab;

pub use graph::{CanonicalCertificate, Graph, Isomorphism, NcGraph};
pub use group::{CayleyTable, ElementSet, GroupDescriptor, GroupError};
