use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{CatalogConfig, CatalogError, CertificateCache, Result};
use crate::graph::NcGraph;
use crate::group::{construct_with, BuildOptions, CayleyTable, GroupDescriptor};

/// A full canonical certificate with a short hash for display and indexing.
/// Equality and grouping always use the full bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateDigest {
    pub short: String,
    #[serde(skip)]
    pub bytes: Vec<u8>,
}

impl CertificateDigest {
    pub fn new(bytes: Vec<u8>) -> Self {
        CertificateDigest { short: short_hash(&bytes), bytes }
    }
}

pub(crate) fn short_hash(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub descriptor: String,
    pub order: usize,
    pub center_size: usize,
    pub nilpotent: bool,
    pub nilpotency_class: Option<usize>,
    pub vertices: usize,
    pub edges: usize,
    pub regular: bool,
    pub degree_sequence_digest: String,
    pub certificate: CertificateDigest,
    pub multipartite_parts: Option<Vec<usize>>,
    /// `(class size, number of classes)` ascending.
    pub class_sizes: Vec<(usize, usize)>,
    pub ac: bool,
    /// Present for nilpotent groups.
    pub non_abelian_sylow: Option<usize>,
    #[serde(skip)]
    pub table: Arc<CayleyTable>,
}

impl CatalogEntry {
    /// Computes every field from the descriptor, taking the certificate from
    /// `cached` when given.
    pub fn build(d: &GroupDescriptor, max_order: usize, cached: Option<Vec<u8>>) -> Result<Self> {
        let order = d.order().unwrap_or(u128::MAX);
        if order > max_order as u128 {
            return Err(CatalogError::CapExceeded { descriptor: d.to_string(), order, cap: max_order });
        }
        let table = construct_with(d, &BuildOptions { order_cap: max_order })?;
        if table.is_abelian() {
            return Err(CatalogError::AbelianEntry(d.to_string()));
        }
        let graph = NcGraph::build(&table)?;
        let certificate = match cached {
            Some(bytes) => bytes,
            None => graph.canonical_certificate().encoding().to_vec(),
        };
        let degrees = graph.degree_sequence();
        let degree_bytes: Vec<u8> = degrees.iter().flat_map(|&x| (x as u32).to_le_bytes()).collect();
        let nilpotency = table.nilpotency();
        let non_abelian_sylow = if nilpotency.nilpotent {
            Some(table.sylow_decomposition()?.iter().filter(|f| !f.abelian).count())
        } else {
            None
        };
        Ok(CatalogEntry {
            descriptor: d.to_string(),
            order: table.order(),
            center_size: table.center().len(),
            nilpotent: nilpotency.nilpotent,
            nilpotency_class: nilpotency.nilpotent.then_some(nilpotency.class),
            vertices: graph.vertex_count(),
            edges: graph.edge_count(),
            regular: graph.is_regular(),
            degree_sequence_digest: short_hash(&degree_bytes),
            certificate: CertificateDigest::new(certificate),
            multipartite_parts: graph.complete_multipartite_params(),
            class_sizes: table.conjugacy_classes().profile(),
            ac: table.is_ac_group()?,
            non_abelian_sylow,
            table: Arc::new(table),
        })
    }
}

pub fn enumerate_catalog(config: &CatalogConfig) -> Result<Vec<CatalogEntry>> {
    enumerate_catalog_cached(config, None)
}

/// Builds all entries in parallel, sorted by descriptor. With a cache,
/// certificates are read from and written to it, and a deterministic
/// sample of cache hits is recomputed and compared.
pub fn enumerate_catalog_cached(config: &CatalogConfig, cache: Option<&CertificateCache>) -> Result<Vec<CatalogEntry>> {
    let descriptors = config.descriptors()?;
    let mut entries: Vec<CatalogEntry> = descriptors
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let name = d.to_string();
            let cached = cache.map(|c| c.get(&name)).transpose()?.flatten();
            let hit = cached.is_some();
            let entry = CatalogEntry::build(d, config.max_order, cached)?;
            if let Some(c) = cache {
                if !hit {
                    c.put(&name, &entry.certificate.bytes)?;
                } else if c.should_spot_check(i) {
                    let fresh = NcGraph::build(&entry.table)?.canonical_certificate();
                    c.record_spot_check();
                    if fresh.encoding() != &entry.certificate.bytes[..] {
                        return Err(CatalogError::CacheCorrupt(name));
                    }
                }
            }
            Ok(entry)
        })
        .collect::<Result<_>>()?;
    entries.sort_by(|a, b| a.descriptor.cmp(&b.descriptor));
    Ok(entries)
}
