//! Finite groups as validated Cayley tables.
//!
//! Every group in this crate is an order-`n` multiplication table over the
//! element indices `0..n`, with the identity normalized to index 0. Tables
//! come either from [`validate`] (untrusted input, fully checked) or from the
//! constructors in [`descriptor`], which skip the cubic associativity loop
//! above [`ASSOCIATIVITY_CHECK_LIMIT`] because their products are associative
//! by construction.

pub mod descriptor;
mod structure;

use std::fmt;

use thiserror::Error;

pub use descriptor::{construct, construct_with, BuildOptions, GroupDescriptor, DEFAULT_ORDER_CAP};
pub use structure::{
    ClassPartition, InducedGroup, Nilpotency, SylowFactor,
};

/// Orders up to this bound always get the full O(n³) associativity check.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row,
    Column,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row => f.write_str("row"),
            Line::Column => f.write_str("column"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty multiplication table")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("not closed: {a}*{b} = {value} lies outside 0..{order}")]
    NotClosed { a: usize, b: usize, value: usize, order: usize },
    #[error("no identity element")]
    NoIdentity,
    #[error("not a Latin square: {line} {index} repeats element {value}")]
    NotLatin { line: Line, index: usize, value: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("bad group descriptor: {0}")]
    BadDescriptor(String),
    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderOverflow { order: u128, cap: usize },
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("operation requires a non-abelian group, got {0}")]
    AbelianInput(String),
    #[error("group {0} is not nilpotent")]
    NotNilpotent(String),
}

pub type Result<T, E = GroupError> = std::result::Result<T, E>;

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct CayleyTable {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    descriptor: String,
}

impl fmt::Debug for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CayleyTable")
            .field("descriptor", &self.descriptor)
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

/// Validates a raw table, relabeling so the identity sits at index 0.
///
/// Checks run in the order closure, identity, Latin property, associativity,
/// and each failure names the first witness in the labels of the input.
pub fn validate(rows: &[Vec<usize>]) -> Result<CayleyTable> {
    build(rows, "table".to_string(), false)
}

pub fn validate_named(rows: &[Vec<usize>], descriptor: impl Into<String>) -> Result<CayleyTable> {
    build(rows, descriptor.into(), false)
}

/// Builds a table produced by a trusted constructor.
pub(crate) fn from_trusted(rows: &[Vec<usize>], descriptor: String) -> Result<CayleyTable> {
    build(rows, descriptor, true)
}

fn build(rows: &[Vec<usize>], descriptor: String, trusted: bool) -> Result<CayleyTable> {
    let n = rows.len();
    if n == 0 {
        return Err(GroupError::Empty);
    }
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(GroupError::Ragged { row, len: r.len(), expected: n });
        }
    }
    for (a, r) in rows.iter().enumerate() {
        for (b, &value) in r.iter().enumerate() {
            if value >= n {
                return Err(GroupError::NotClosed { a, b, value, order: n });
            }
        }
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|j| rows[e][j] == j && rows[j][e] == j))
        .ok_or(GroupError::NoIdentity)?;

    let mut seen = vec![usize::MAX; n];
    for (i, r) in rows.iter().enumerate() {
        for &v in r {
            if seen[v] == i {
                return Err(GroupError::NotLatin { line: Line::Row, index: i, value: v });
            }
            seen[v] = i;
        }
    }
    seen.fill(usize::MAX);
    for j in 0..n {
        for r in rows {
            let v = r[j];
            if seen[v] == j {
                return Err(GroupError::NotLatin { line: Line::Column, index: j, value: v });
            }
            seen[v] = j;
        }
    }

    if !trusted || n <= ASSOCIATIVITY_CHECK_LIMIT {
        for a in 0..n {
            for b in 0..n {
                let ab = rows[a][b];
                for c in 0..n {
                    if rows[ab][c] != rows[a][rows[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
    }

    // swap identity into slot 0
    let relabel = |x: usize| {
        if x == identity {
            0
        } else if x == 0 {
            identity
        } else {
            x
        }
    };
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[relabel(a) * n + relabel(b)] = relabel(rows[a][b]) as u32;
        }
    }
    Ok(CayleyTable::from_parts(n, table, descriptor))
}

impl CayleyTable {
    /// Assembles a table whose group axioms already hold, with identity at 0.
    pub(crate) fn from_parts(order: usize, table: Vec<u32>, descriptor: String) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            inverses[a] = row.iter().position(|&v| v == 0).expect("Latin row") as u32;
        }
        CayleyTable { order, table, inverses, descriptor }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn with_descriptor(mut self, descriptor: impl Into<String>) -> Self {
        self.descriptor = descriptor.into();
        self
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    #[inline]
    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Commutator `a⁻¹b⁻¹ab`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| self.row(a).iter().map(|&v| v as usize).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commute(a, b)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.order {
            Ok(())
        } else {
            Err(GroupError::IndexOutOfRange { index, order: self.order })
        }
    }

    pub(crate) fn require_non_abelian(&self) -> Result<()> {
        if self.is_abelian() {
            Err(GroupError::AbelianInput(self.descriptor.clone()))
        } else {
            Ok(())
        }
    }

    /// Smallest subgroup containing `generators`.
    pub fn generated_subgroup(&self, generators: &[usize]) -> Result<ElementSet<'_>> {
        for &g in generators {
            self.check_index(g)?;
        }
        Ok(ElementSet::subgroup_unchecked(self, self.closure(generators)))
    }

    fn closure(&self, generators: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut frontier = 0;
        for &g in generators {
            if !inside[g] {
                inside[g] = true;
                members.push(g);
            }
        }
        // finite groups: closure under products is enough
        while frontier < members.len() {
            let x = members[frontier];
            frontier += 1;
            for &g in generators {
                for y in [self.mul(x, g), self.mul(g, x)] {
                    if !inside[y] {
                        inside[y] = true;
                        members.push(y);
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }
}

/// A subset of a group's elements, optionally known to be a subgroup.
#[derive(Clone, PartialEq, Eq)]
pub struct ElementSet<'g> {
    parent: &'g CayleyTable,
    members: Vec<usize>,
    subgroup: bool,
}

impl fmt::Debug for ElementSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ElementSet")
            .field("parent", &self.parent.descriptor())
            .field("members", &self.members)
            .field("subgroup", &self.subgroup)
            .finish()
    }
}

impl<'g> ElementSet<'g> {
    /// Wraps `members`, checking range and, if `subgroup`, the subgroup axioms.
    pub fn new(parent: &'g CayleyTable, mut members: Vec<usize>, subgroup: bool) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&m| m >= parent.order()) {
            return Err(GroupError::IndexOutOfRange { index: bad, order: parent.order() });
        }
        let set = ElementSet { parent, members, subgroup: false };
        if subgroup && !set.satisfies_subgroup_axioms() {
            return Err(GroupError::NotASubgroup);
        }
        Ok(ElementSet { subgroup, ..set })
    }

    /// Trusted constructor for sets that are subgroups by construction.
    pub(crate) fn subgroup_unchecked(parent: &'g CayleyTable, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        ElementSet { parent, members, subgroup: true }
    }

    pub fn parent(&self) -> &'g CayleyTable {
        self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subgroup(&self) -> bool {
        self.subgroup
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_abelian(&self) -> bool {
        let m = &self.members;
        (0..m.len()).all(|i| (i + 1..m.len()).all(|j| self.parent.commute(m[i], m[j])))
    }

    pub(crate) fn satisfies_subgroup_axioms(&self) -> bool {
        if !self.contains(0) {
            return false;
        }
        let mut inside = vec![false; self.parent.order()];
        for &m in &self.members {
            inside[m] = true;
        }
        self.members.iter().all(|&a| {
            inside[self.parent.inv(a)] && self.members.iter().all(|&b| inside[self.parent.mul(a, b)])
        })
    }
}
