use std::path::Path;

use serde::Serialize;

use super::Result;
use crate::cayfile::{read_cay, write_cay};
use crate::graph::{compare_graphs, IsoOutcome, NcGraph};
use crate::group::{construct_with, BuildOptions, CayleyTable, GroupDescriptor};
use crate::lab::{audit_lemma_basic, case_a_audit, CaseAReport, GroupSummary, LabError, PairAudit};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PairOutcome {
    Isomorphic,
    NotIsomorphic { reason: String },
}

/// Everything known about one pair of groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub a: GroupSummary,
    pub b: GroupSummary,
    pub outcome: PairOutcome,
    pub equal_orders: bool,
    /// The verified bijection `(g, φ(g))` on non-central elements.
    pub element_map: Option<Vec<(usize, usize)>>,
    pub lemma: Option<PairAudit>,
    pub case_a: Option<CaseAReport>,
    /// Why Case (a) does not apply, when the graphs are isomorphic.
    pub case_a_skipped: Option<String>,
}

impl PairReport {
    pub fn is_isomorphic(&self) -> bool {
        self.outcome == PairOutcome::Isomorphic
    }

    pub fn has_violation(&self) -> bool {
        self.lemma.as_ref().is_some_and(|l| !l.is_consistent()) || self.case_a.as_ref().is_some_and(|c| !c.holds)
    }
}

/// Decides isomorphism of the two non-commuting graphs and runs every
/// applicable audit.
pub fn audit_tables(g: &CayleyTable, h: &CayleyTable) -> Result<PairReport> {
    let (gg, gh) = (NcGraph::build(g)?, NcGraph::build(h)?);
    let mut report = PairReport {
        a: GroupSummary::of(g),
        b: GroupSummary::of(h),
        outcome: PairOutcome::Isomorphic,
        equal_orders: g.order() == h.order(),
        element_map: None,
        lemma: None,
        case_a: None,
        case_a_skipped: None,
    };
    let phi = match compare_graphs(&gg, &gh) {
        IsoOutcome::Isomorphic(phi) => phi,
        IsoOutcome::NotIsomorphic { reason } => {
            report.outcome = PairOutcome::NotIsomorphic { reason };
            return Ok(report);
        }
    };
    let lemma = audit_lemma_basic(g, h, &phi)?;
    if lemma.both_nilpotent && lemma.both_irregular {
        match case_a_audit(g, h, &phi) {
            Ok(c) => report.case_a = Some(c),
            Err(e @ (LabError::WrongShape(_) | LabError::PrimeMismatch(..) | LabError::RegularGraph(_))) => {
                report.case_a_skipped = Some(e.to_string())
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        report.case_a_skipped = Some("needs two nilpotent groups with irregular graphs".into());
    }
    report.element_map = Some(phi.element_map().to_vec());
    report.lemma = Some(lemma);
    Ok(report)
}

/// Reads and validates two `.cay` files, then audits the pair.
pub fn audit_pair(a: &Path, b: &Path) -> Result<PairReport> {
    let (g, h) = (read_cay(a)?, read_cay(b)?);
    audit_tables(&g, &h)
}

pub fn export_group(d: &GroupDescriptor, path: &Path, max_order: usize) -> Result<CayleyTable> {
    let g = construct_with(d, &BuildOptions { order_cap: max_order })?;
    write_cay(path, &g)?;
    Ok(g)
}

/// Reads a `.cay` file; the table is always re-validated.
pub fn import_group(path: &Path) -> Result<CayleyTable> {
    Ok(read_cay(path)?)
}
