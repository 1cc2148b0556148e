use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{audit_tables, CatalogConfig, CatalogEntry, PairReport, Result};

pub const REPORT_SCHEMA: u32 = 1;

/// Verdict on "nilpotent groups with isomorphic irregular graphs have equal orders"
/// for one isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TheoremVerdict {
    NotApplicable { reason: String },
    Pass { order: usize, members: usize },
    Violation { a: String, b: String, element_map: Vec<(usize, usize)> },
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub certificate: String,
    pub members: Vec<String>,
    pub orders: Vec<usize>,
    pub vertices: usize,
    pub edges: usize,
    pub regular: bool,
    pub theorem_1_2: TheoremVerdict,
    pub pairs: Vec<PairReport>,
}

/// A regular class whose members have different orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularCandidate {
    pub members: Vec<String>,
    pub orders: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub entries: usize,
    pub classes: usize,
    pub nontrivial_classes: usize,
    pub pairs_audited: usize,
    pub theorem_1_2_classes: usize,
    pub theorem_1_2_violations: usize,
    pub lemma_violations: usize,
    pub case_a_audits: usize,
    pub case_a_failures: usize,
    pub regular_cross_order_candidates: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub schema: u32,
    pub config: CatalogConfig,
    pub summary: ScanSummary,
    pub entries: Vec<CatalogEntry>,
    pub classes: Vec<ClassReport>,
    pub regular_cross_order: Vec<RegularCandidate>,
}

impl ScanReport {
    pub fn has_violation(&self) -> bool {
        let s = &self.summary;
        s.theorem_1_2_violations + s.lemma_violations + s.case_a_failures > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn verdict(members: &[&CatalogEntry], pairs: &[PairReport]) -> TheoremVerdict {
    if members[0].regular {
        return TheoremVerdict::NotApplicable { reason: "regular graph".into() };
    }
    let nilpotent: Vec<&&CatalogEntry> = members.iter().filter(|e| e.nilpotent).collect();
    if nilpotent.len() < 2 {
        return TheoremVerdict::NotApplicable { reason: "fewer than two nilpotent members".into() };
    }
    for (i, a) in nilpotent.iter().enumerate() {
        for b in &nilpotent[i + 1..] {
            if a.order != b.order {
                let element_map = pairs
                    .iter()
                    .find(|p| p.a.descriptor == a.descriptor && p.b.descriptor == b.descriptor)
                    .and_then(|p| p.element_map.clone())
                    .unwrap_or_default();
                return TheoremVerdict::Violation { a: a.descriptor.clone(), b: b.descriptor.clone(), element_map };
            }
        }
    }
    TheoremVerdict::Pass { order: nilpotent[0].order, members: nilpotent.len() }
}

/// Groups entries by canonical certificate and audits every pair inside a class.
pub fn scan_pairs(config: &CatalogConfig, entries: Vec<CatalogEntry>) -> Result<ScanReport> {
    let mut by_certificate: BTreeMap<&[u8], Vec<usize>> = BTreeMap::new();
    for (i, e) in entries.iter().enumerate() {
        by_certificate.entry(&e.certificate.bytes).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = by_certificate.into_values().collect();
    for g in &mut groups {
        g.sort_by(|&a, &b| entries[a].descriptor.cmp(&entries[b].descriptor));
    }
    groups.sort_by(|a, b| entries[a[0]].descriptor.cmp(&entries[b[0]].descriptor));

    let jobs: Vec<(usize, usize, usize)> = groups
        .iter()
        .enumerate()
        .flat_map(|(c, g)| (0..g.len()).flat_map(move |i| (i + 1..g.len()).map(move |j| (c, g[i], g[j]))))
        .collect();
    let audited: Vec<(usize, PairReport)> = jobs
        .par_iter()
        .map(|&(c, i, j)| Ok((c, audit_tables(&entries[i].table, &entries[j].table)?)))
        .collect::<Result<_>>()?;
    let mut pairs_by_class: Vec<Vec<PairReport>> = vec![Vec::new(); groups.len()];
    for (c, report) in audited {
        pairs_by_class[c].push(report);
    }

    let mut summary = ScanSummary { entries: entries.len(), classes: groups.len(), ..Default::default() };
    let mut classes = Vec::new();
    let mut regular_cross_order = Vec::new();
    for (members, pairs) in groups.iter().zip(pairs_by_class) {
        let m: Vec<&CatalogEntry> = members.iter().map(|&i| &entries[i]).collect();
        let orders: Vec<usize> = m.iter().map(|e| e.order).collect();
        let names: Vec<String> = m.iter().map(|e| e.descriptor.clone()).collect();
        let theorem_1_2 = verdict(&m, &pairs);
        if m.len() > 1 {
            summary.nontrivial_classes += 1;
        }
        summary.pairs_audited += pairs.len();
        summary.lemma_violations += pairs.iter().filter(|p| p.lemma.as_ref().is_some_and(|l| !l.is_consistent())).count();
        summary.case_a_audits += pairs.iter().filter(|p| p.case_a.is_some()).count();
        summary.case_a_failures += pairs.iter().filter(|p| p.case_a.as_ref().is_some_and(|c| !c.holds)).count();
        match theorem_1_2 {
            TheoremVerdict::Pass { .. } => summary.theorem_1_2_classes += 1,
            TheoremVerdict::Violation { .. } => {
                summary.theorem_1_2_classes += 1;
                summary.theorem_1_2_violations += 1;
            }
            TheoremVerdict::NotApplicable { .. } => {}
        }
        if m[0].regular && orders.iter().any(|&o| o != orders[0]) {
            regular_cross_order.push(RegularCandidate { members: names.clone(), orders: orders.clone() });
        }
        classes.push(ClassReport {
            certificate: m[0].certificate.short.clone(),
            members: names,
            orders,
            vertices: m[0].vertices,
            edges: m[0].edges,
            regular: m[0].regular,
            theorem_1_2,
            pairs,
        });
    }
    summary.regular_cross_order_candidates = regular_cross_order.len();
    Ok(ScanReport { schema: REPORT_SCHEMA, config: config.clone(), summary, entries, classes, regular_cross_order })
}
