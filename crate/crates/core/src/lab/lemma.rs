use std::collections::HashMap;

use serde::Serialize;

use super::{center_size, has_regular_graph, mul, sub, verify_phi, GroupSummary, LabError, Result};
use crate::graph::{Isomorphism, NcGraph};
use crate::group::CayleyTable;

/// Centralizer data of one vertex and its image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexRecord {
    pub element: usize,
    pub image: usize,
    pub centralizer_g: usize,
    pub centralizer_h: usize,
    /// `|Z(C_G(g))|`, present when `C_G(g)` is non-abelian.
    pub centralizer_center_g: Option<usize>,
    pub centralizer_center_h: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemVerdict {
    pub item: u8,
    /// Number of instances the item was evaluated on.
    pub checked: usize,
    pub passed: bool,
    pub witness: Option<usize>,
    pub detail: String,
}

/// Item (3) read literally, with `|H|` on the right instead of `|C_H(φ(g))|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiteralItem3 {
    pub checked: usize,
    pub holds: usize,
    pub first_failure: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Violation { item: u8, witness: usize, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibilityRecord {
    pub element: usize,
    pub image: usize,
    pub centralizer_h: usize,
    pub class_size_g: usize,
    /// `(|g^G| - 1)(|Z(G)| - |Z(H)|)`
    pub product: i128,
    pub divides: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibilityReport {
    pub all_divide: bool,
    pub records: Vec<DivisibilityRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairAudit {
    pub g: GroupSummary,
    pub h: GroupSummary,
    pub both_nilpotent: bool,
    pub both_irregular: bool,
    pub items: Vec<ItemVerdict>,
    pub literal_item_3: LiteralItem3,
    pub divisibility: DivisibilityReport,
    pub vertices: Vec<VertexRecord>,
    pub verdict: Verdict,
}

impl PairAudit {
    pub fn is_consistent(&self) -> bool {
        self.verdict == Verdict::Consistent
    }

    /// Turns a violation into an error: on a genuine isomorphism the audited
    /// identities always hold, so a failure means a bug upstream.
    pub fn ensure_consistent(self) -> Result<Self> {
        match &self.verdict {
            Verdict::Consistent => Ok(self),
            Verdict::Violation { item, witness, detail } => Err(LabError::InternalInconsistency(format!(
                "item ({item}) fails for {} vs {} at element {witness}: {detail}",
                self.g.descriptor, self.h.descriptor
            ))),
        }
    }
}

struct Side<'t> {
    table: &'t CayleyTable,
    certificates: HashMap<Vec<usize>, Vec<u8>>,
}

impl Side<'_> {
    /// Certificate of the non-commuting graph of `C(g)`, cached by member set.
    fn centralizer_certificate(&mut self, g: usize) -> Result<Vec<u8>> {
        let c = self.table.centralizer(g)?;
        if let Some(cert) = self.certificates.get(c.members()) {
            return Ok(cert.clone());
        }
        let induced = self.table.induced_group(&c)?;
        let cert = NcGraph::build(&induced.group)?.canonical_certificate().encoding().to_vec();
        self.certificates.insert(c.members().to_vec(), cert.clone());
        Ok(cert)
    }
}

/// Checks items (1), (2), (3), (4) and (6) of the basic lemma for every
/// vertex of `Γ_G` and its image under `phi`.
pub fn audit_lemma_basic(g: &CayleyTable, h: &CayleyTable, phi: &Isomorphism) -> Result<PairAudit> {
    verify_phi(g, h, phi)?;
    let (zg, zh) = (g.center().len() as i128, h.center().len() as i128);
    let (og, oh) = (g.order() as i128, h.order() as i128);

    let mut vertices = Vec::with_capacity(phi.element_map().len());
    for &(x, y) in phi.element_map() {
        let (cx, cy) = (g.centralizer(x)?, h.centralizer(y)?);
        let abelian = cx.is_abelian();
        vertices.push(VertexRecord {
            element: x,
            image: y,
            centralizer_g: cx.len(),
            centralizer_h: cy.len(),
            centralizer_center_g: (!abelian).then(|| center_size(g, cx.members())),
            centralizer_center_h: (!abelian).then(|| center_size(h, cy.members())),
        });
    }
    let first = vertices.first().map_or(0, |v| v.element);

    let mut items = Vec::new();
    let lhs1 = sub(og, zg)?;
    let rhs1 = sub(oh, zh)?;
    items.push(ItemVerdict {
        item: 1,
        checked: 1,
        passed: lhs1 == rhs1,
        witness: (lhs1 != rhs1).then_some(first),
        detail: format!("|G|-|Z(G)| = {lhs1}, |H|-|Z(H)| = {rhs1}"),
    });

    let bad2 = vertices
        .iter()
        .find(|v| og - v.centralizer_g as i128 != oh - v.centralizer_h as i128);
    items.push(ItemVerdict {
        item: 2,
        checked: vertices.len(),
        passed: bad2.is_none(),
        witness: bad2.map(|v| v.element),
        detail: match bad2 {
            Some(v) => format!("|G|-|C_G(g)| = {}, |H|-|C_H(phi(g))| = {}", og - v.centralizer_g as i128, oh - v.centralizer_h as i128),
            None => "all vertices".into(),
        },
    });

    let non_abelian: Vec<&VertexRecord> = vertices.iter().filter(|v| v.centralizer_center_g.is_some()).collect();
    let mut bad3 = None;
    let mut literal = LiteralItem3 { checked: non_abelian.len(), holds: 0, first_failure: None };
    for v in &non_abelian {
        let zcg = v.centralizer_center_g.unwrap_or(0) as i128;
        let zch = v.centralizer_center_h.unwrap_or(0) as i128;
        let lhs = v.centralizer_g as i128 - zcg;
        if bad3.is_none() && lhs != v.centralizer_h as i128 - zch {
            bad3 = Some((v.element, lhs, v.centralizer_h as i128 - zch));
        }
        if lhs == oh - zch {
            literal.holds += 1;
        } else if literal.first_failure.is_none() {
            literal.first_failure = Some(v.element);
        }
    }
    items.push(ItemVerdict {
        item: 3,
        checked: non_abelian.len(),
        passed: bad3.is_none(),
        witness: bad3.map(|b| b.0),
        detail: match bad3 {
            Some((_, l, r)) => format!("|C_G(g)|-|Z(C_G(g))| = {l}, |C_H(phi(g))|-|Z(C_H(phi(g)))| = {r}"),
            None if non_abelian.is_empty() => "vacuous: every proper centralizer is abelian".into(),
            None => "all non-abelian centralizers".into(),
        },
    });

    let (mut sg, mut sh) = (Side { table: g, certificates: HashMap::new() }, Side { table: h, certificates: HashMap::new() });
    let mut bad4 = None;
    for v in &non_abelian {
        if v.centralizer_center_h.is_none() || h.centralizer(v.image)?.is_abelian() {
            bad4 = Some((v.element, "centralizer of the image is abelian".to_string()));
            break;
        }
        if sg.centralizer_certificate(v.element)? != sh.centralizer_certificate(v.image)? {
            bad4 = Some((v.element, "centralizer graphs have different certificates".to_string()));
            break;
        }
    }
    items.push(ItemVerdict {
        item: 4,
        checked: non_abelian.len(),
        passed: bad4.is_none(),
        witness: bad4.as_ref().map(|b| b.0),
        detail: match bad4 {
            Some((_, d)) => d,
            None if non_abelian.is_empty() => "vacuous: every proper centralizer is abelian".into(),
            None => format!("{} distinct centralizer graphs compared", sg.certificates.len()),
        },
    });

    let same_order = og == oh;
    let same_center = zg == zh;
    let mismatched = vertices.iter().find(|v| (v.centralizer_g == v.centralizer_h) != same_order);
    let passed6 = same_order == same_center && mismatched.is_none();
    items.push(ItemVerdict {
        item: 6,
        checked: vertices.len(),
        passed: passed6,
        witness: (!passed6).then(|| mismatched.map_or(first, |v| v.element)),
        detail: format!("|G|=|H|: {same_order}, |Z(G)|=|Z(H)|: {same_center}, centralizer orders agree: {}", mismatched.is_none() == same_order),
    });

    let divisibility = divisibility_from(g, h, phi)?;
    let verdict = items
        .iter()
        .find(|i| !i.passed)
        .map(|i| Verdict::Violation { item: i.item, witness: i.witness.unwrap_or(first), detail: i.detail.clone() })
        .unwrap_or(Verdict::Consistent);

    Ok(PairAudit {
        g: GroupSummary::of(g),
        h: GroupSummary::of(h),
        both_nilpotent: g.is_nilpotent() && h.is_nilpotent(),
        both_irregular: !has_regular_graph(g) && !has_regular_graph(h),
        items,
        literal_item_3: literal,
        divisibility,
        vertices,
        verdict,
    })
}

/// For each vertex `g`, whether `|C_H(φ(g))|` divides `(|g^G| - 1)(|Z(G)| - |Z(H)|)`.
pub fn divisibility_check(g: &CayleyTable, h: &CayleyTable, phi: &Isomorphism) -> Result<DivisibilityReport> {
    verify_phi(g, h, phi)?;
    divisibility_from(g, h, phi)
}

fn divisibility_from(g: &CayleyTable, h: &CayleyTable, phi: &Isomorphism) -> Result<DivisibilityReport> {
    let dz = sub(g.center().len() as i128, h.center().len() as i128)?;
    let mut records = Vec::new();
    for &(x, y) in phi.element_map() {
        let class_size_g = g.order() / g.centralizer_order(x);
        let centralizer_h = h.centralizer_order(y);
        let product = mul(class_size_g as i128 - 1, dz)?;
        records.push(DivisibilityRecord {
            element: x,
            image: y,
            centralizer_h,
            class_size_g,
            product,
            divides: product % centralizer_h as i128 == 0,
        });
    }
    Ok(DivisibilityReport { all_divide: records.iter().all(|r| r.divides), records })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralizerWitness {
    pub element: usize,
    pub centralizer_order: usize,
    /// `|C_G(g)|^2`
    pub lhs: i128,
    /// `|G|·|Z(G)|`
    pub rhs: i128,
    pub strict: bool,
}

/// The non-central element with the largest centralizer (smallest index on
/// ties), if `|C_G(g)|^2 >= |G|·|Z(G)|` holds for it.
pub fn large_centralizer_witness(g: &CayleyTable) -> Result<Option<CentralizerWitness>> {
    if g.is_abelian() {
        return Err(LabError::AbelianInput(g.descriptor().to_string()));
    }
    let z = g.center();
    let mut best: Option<(usize, usize)> = None;
    for x in (0..g.order()).filter(|&x| !z.contains(x)) {
        let c = g.centralizer_order(x);
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((x, c));
        }
    }
    let (element, c) = best.expect("non-abelian group has a non-central element");
    let lhs = mul(c as i128, c as i128)?;
    let rhs = mul(g.order() as i128, z.len() as i128)?;
    let witness = (lhs >= rhs).then_some(CentralizerWitness { element, centralizer_order: c, lhs, rhs, strict: lhs > rhs });

    if g.is_nilpotent() {
        let non_abelian = g.sylow_decomposition()?.iter().filter(|f| !f.abelian).count();
        if non_abelian >= 2 && !witness.as_ref().is_some_and(|w| w.strict) {
            return Err(LabError::InternalInconsistency(format!(
                "{} has {non_abelian} non-abelian Sylow factors but no strict large centralizer",
                g.descriptor()
            )));
        }
    }
    Ok(witness)
}
