//! Audits of the numeric identities forced on two groups by an isomorphism
//! of their non-commuting graphs.
//!
//! Audits never trust cached quantities: every centralizer, center and class
//! size is recomputed from the Cayley tables, so a passing audit is an
//! independent check on the `group` and `graph` modules. All arithmetic is
//! exact and overflow-checked.

mod case_d;
mod cases;
mod chain;
mod lemma;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, Isomorphism};
use crate::group::{CayleyTable, GroupError};

pub use case_d::{case_d_audit, check_case_d_tuple, CaseDBounds, CaseDCertificate, CaseDTuple, Eq10Coincidence};
pub use cases::{case_a_audit, case_bc_audit, CaseAReport, CaseBcReport, CaseParams, EquationCheck, PrimeSplit};
pub use chain::{centralizer_chain, CentralizerChain, ChainLink, Picker};
pub use lemma::{
    audit_lemma_basic, divisibility_check, large_centralizer_witness, CentralizerWitness, DivisibilityRecord,
    DivisibilityReport, ItemVerdict, LiteralItem3, PairAudit, Verdict, VertexRecord,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("not an isomorphism of non-commuting graphs: {0}")]
    NotAnIsomorphism(String),
    #[error("operation requires a non-abelian group, got {0}")]
    AbelianInput(String),
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("non-commuting graph of {0} is regular")]
    RegularGraph(String),
    #[error("Sylow primes differ: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("arithmetic overflow evaluating {0}")]
    Overflow(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<GraphError> for LabError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::AbelianInput(d) => LabError::AbelianInput(d),
            GraphError::NotAnIsomorphism(m) => LabError::NotAnIsomorphism(m),
        }
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

/// Exact value of `base^exp`.
pub(crate) fn ipow(base: u64, exp: u32) -> Result<i128> {
    (base as i128).checked_pow(exp).ok_or_else(|| LabError::Overflow(format!("{base}^{exp}")))
}

pub(crate) fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or_else(|| LabError::Overflow(format!("{a}*{b}")))
}

pub(crate) fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or_else(|| LabError::Overflow(format!("{a}-{b}")))
}

/// Exponent of the largest power of `p` dividing `x`; `None` for zero.
pub fn valuation(x: i128, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let (mut x, p) = (x.unsigned_abs(), p as u128);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// `log_p(x)` when `x` is a power of `p`.
pub(crate) fn exact_log(x: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    let mut y = 1u64;
    while y < x {
        y = y.checked_mul(p)?;
        e += 1;
    }
    (y == x).then_some(e)
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Re-verifies `phi` against the two tables: a bijection from the non-central
/// elements of `g` onto those of `h` preserving commutation in both directions.
pub(crate) fn verify_phi(g: &CayleyTable, h: &CayleyTable, phi: &Isomorphism) -> Result<()> {
    let (zg, zh) = (g.center(), h.center());
    let pairs = phi.element_map();
    let domain: Vec<usize> = (0..g.order()).filter(|&x| !zg.contains(x)).collect();
    if pairs.iter().map(|&(a, _)| a).ne(domain.iter().copied()) {
        return Err(LabError::NotAnIsomorphism("domain is not the set of non-central elements".into()));
    }
    let mut hit = vec![false; h.order()];
    for &(_, b) in pairs {
        if b >= h.order() || zh.contains(b) || hit[b] {
            return Err(LabError::NotAnIsomorphism(format!("image {b} is central, repeated or out of range")));
        }
        hit[b] = true;
    }
    if pairs.len() != h.order() - zh.len() {
        return Err(LabError::NotAnIsomorphism("image misses non-central elements".into()));
    }
    for (i, &(a, fa)) in pairs.iter().enumerate() {
        for &(b, fb) in &pairs[i + 1..] {
            if g.commute(a, b) != h.commute(fa, fb) {
                return Err(LabError::NotAnIsomorphism(format!("commutation of ({a}, {b}) is not preserved")));
            }
        }
    }
    Ok(())
}

/// `|Z(S)|` for the subgroup `members` of `t`.
pub(crate) fn center_size(t: &CayleyTable, members: &[usize]) -> usize {
    members.iter().filter(|&&z| members.iter().all(|&x| t.commute(z, x))).count()
}

/// True when all non-central elements share one centralizer order.
pub(crate) fn has_regular_graph(t: &CayleyTable) -> bool {
    let z = t.center();
    let mut orders = (0..t.order()).filter(|&x| !z.contains(x)).map(|x| t.centralizer_order(x));
    match orders.next() {
        Some(first) => orders.all(|o| o == first),
        None => true,
    }
}

/// Compact serializable description of a group used in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub descriptor: String,
    pub order: usize,
    pub center_size: usize,
}

impl GroupSummary {
    pub fn of(g: &CayleyTable) -> Self {
        GroupSummary { descriptor: g.descriptor().to_string(), order: g.order(), center_size: g.center().len() }
    }
}
