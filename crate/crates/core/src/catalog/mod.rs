//! Configurable catalogs of small groups, pairwise scans of their
//! non-commuting graphs, and file-level helpers used by the command line.

mod cache;
mod entry;
mod family;
mod pair;
mod scan;

use std::path::PathBuf;

use thiserror::Error;

use crate::cayfile::CayError;
use crate::graph::GraphError;
use crate::group::GroupError;
use crate::lab::LabError;

pub use cache::{CacheStats, CertificateCache};
pub use entry::{enumerate_catalog, enumerate_catalog_cached, CatalogEntry, CertificateDigest};
pub use family::{abelian_groups_of_order, expand_family, CatalogConfig, FamilySpec};
pub use pair::{audit_pair, audit_tables, export_group, import_group, PairOutcome, PairReport};
pub use scan::{
    scan_pairs, ClassReport, RegularCandidate, ScanReport, ScanSummary, TheoremVerdict, REPORT_SCHEMA,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{descriptor} has order {order}, above the cap {cap}")]
    CapExceeded { descriptor: String, order: u128, cap: usize },
    #[error("bad family spec {spec:?}: {reason}")]
    BadFamily { spec: String, reason: String },
    #[error("{0} is abelian and has no non-commuting graph")]
    AbelianEntry(String),
    #[error("cached certificate for {0} differs from a fresh computation")]
    CacheCorrupt(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error(transparent)]
    Cay(#[from] CayError),
    #[error("{}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
}

pub type Result<T, E = CatalogError> = std::result::Result<T, E>;

pub(crate) fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CatalogError {
    let path = path.into();
    move |source| CatalogError::Io { path, source }
}
