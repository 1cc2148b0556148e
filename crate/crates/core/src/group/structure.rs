use std::collections::BTreeMap;

use super::{CayleyTable, ElementSet, GroupError, Result};

/// Conjugacy classes as a partition of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    /// Classes ordered by smallest member; each class is sorted.
    pub classes: Vec<Vec<usize>>,
    /// `class_of[g]` indexes into `classes`.
    pub class_of: Vec<usize>,
}

impl ClassPartition {
    pub fn class_size(&self, g: usize) -> usize {
        self.classes[self.class_of[g]].len()
    }

    /// Sorted multiset of class sizes.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.classes.iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }

    /// `(size, number of classes of that size)`, ascending by size.
    pub fn profile(&self) -> Vec<(usize, usize)> {
        let mut m = BTreeMap::new();
        for c in &self.classes {
            *m.entry(c.len()).or_insert(0) += 1;
        }
        m.into_iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Nilpotency {
    pub nilpotent: bool,
    /// Number of strict steps in the upper central series.
    pub class: usize,
}

/// A subgroup relabeled as a group of its own.
#[derive(Debug, Clone)]
pub struct InducedGroup {
    pub group: CayleyTable,
    /// `back_map[i]` is the parent index of the subgroup's element `i`.
    pub back_map: Vec<usize>,
}

impl InducedGroup {
    /// Local index of a parent element, if it belongs to the subgroup.
    pub fn local(&self, parent_index: usize) -> Option<usize> {
        self.back_map.binary_search(&parent_index).ok()
    }
}

#[derive(Debug, Clone)]
pub struct SylowFactor<'g> {
    pub prime: u64,
    pub exponent: u32,
    pub subgroup: ElementSet<'g>,
    pub abelian: bool,
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl CayleyTable {
    pub fn center(&self) -> ElementSet<'_> {
        let n = self.order();
        let members = (0..n).filter(|&z| (0..n).all(|g| self.commute(z, g))).collect();
        ElementSet::subgroup_unchecked(self, members)
    }

    pub fn centralizer(&self, g: usize) -> Result<ElementSet<'_>> {
        self.check_index(g)?;
        let members = (0..self.order()).filter(|&x| self.commute(x, g)).collect();
        Ok(ElementSet::subgroup_unchecked(self, members))
    }

    pub fn centralizer_order(&self, g: usize) -> usize {
        (0..self.order()).filter(|&x| self.commute(x, g)).count()
    }

    /// Partition into conjugacy classes, cross-checked against orbit-stabilizer.
    pub fn conjugacy_classes(&self) -> ClassPartition {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut class = Vec::new();
            for x in 0..n {
                let c = self.mul(self.mul(self.inv(x), g), x);
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    class.push(c);
                }
            }
            class.sort_unstable();
            assert_eq!(
                class.len() * self.centralizer_order(g),
                n,
                "orbit-stabilizer failed for element {g} of {}",
                self.descriptor()
            );
            classes.push(class);
        }
        ClassPartition { classes, class_of }
    }

    /// `Z_0 = {e} ⊆ Z_1 = Z(G) ⊆ ...` until the series stops growing.
    pub fn upper_central_series(&self) -> Vec<ElementSet<'_>> {
        let n = self.order();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut series = vec![ElementSet::subgroup_unchecked(self, vec![0])];
        loop {
            // Z_{i+1} = { g : [g, x] ∈ Z_i for all x }
            let next: Vec<usize> = (0..n)
                .filter(|&g| (0..n).all(|x| inside[self.commutator(g, x)]))
                .collect();
            if next.len() == series.last().map_or(0, ElementSet::len) {
                return series;
            }
            for &g in &next {
                inside[g] = true;
            }
            series.push(ElementSet::subgroup_unchecked(self, next));
        }
    }

    pub fn nilpotency(&self) -> Nilpotency {
        let series = self.upper_central_series();
        Nilpotency {
            nilpotent: series.last().map(ElementSet::len) == Some(self.order()),
            class: series.len() - 1,
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency().nilpotent
    }

    /// Direct product with componentwise multiplication; `(g, h)` has index `g + |G|·h`.
    pub fn direct_product(&self, other: &CayleyTable, order_cap: usize) -> Result<CayleyTable> {
        let (m, k) = (self.order(), other.order());
        let n = m * k;
        if n > order_cap {
            return Err(GroupError::OrderOverflow { order: n as u128, cap: order_cap });
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            let (ag, ah) = (a % m, a / m);
            for b in 0..n {
                let (bg, bh) = (b % m, b / m);
                table[a * n + b] = (self.mul(ag, bg) + m * other.mul(ah, bh)) as u32;
            }
        }
        let name = format!("product({},{})", self.descriptor(), other.descriptor());
        let product = CayleyTable::from_parts(n, table, name);

        let zg = self.center();
        let zh = other.center();
        let mut expected: Vec<usize> = zh
            .members()
            .iter()
            .flat_map(|&h| zg.members().iter().map(move |&g| g + m * h))
            .collect();
        expected.sort_unstable();
        assert_eq!(product.center().members(), &expected[..], "center of a product");
        Ok(product)
    }

    /// Relabels the subgroup `s` as a standalone group (identity stays at 0).
    pub fn induced_group(&self, s: &ElementSet<'_>) -> Result<InducedGroup> {
        if !(std::ptr::eq(s.parent(), self) || s.parent() == self) {
            return Err(GroupError::NotASubgroup);
        }
        if !s.is_subgroup() && !s.satisfies_subgroup_axioms() {
            return Err(GroupError::NotASubgroup);
        }
        let back_map = s.members().to_vec();
        let k = back_map.len();
        let mut local = vec![u32::MAX; self.order()];
        for (i, &g) in back_map.iter().enumerate() {
            local[g] = i as u32;
        }
        let mut table = vec![0u32; k * k];
        for (i, &a) in back_map.iter().enumerate() {
            for (j, &b) in back_map.iter().enumerate() {
                table[i * k + j] = local[self.mul(a, b)];
            }
        }
        let name = format!("sub({},{})", self.descriptor(), k);
        Ok(InducedGroup { group: CayleyTable::from_parts(k, table, name), back_map })
    }

    /// Every non-central element has an abelian centralizer.
    pub fn is_ac_group(&self) -> Result<bool> {
        self.require_non_abelian()?;
        let z = self.center();
        Ok((0..self.order())
            .filter(|&g| !z.contains(g))
            .all(|g| self.centralizer(g).map(|c| c.is_abelian()).unwrap_or(false)))
    }

    /// The common size of all non-trivial conjugacy classes, if there is one.
    pub fn uniform_class_size(&self) -> Result<Option<usize>> {
        self.require_non_abelian()?;
        let classes = self.conjugacy_classes();
        let mut sizes = classes.classes.iter().map(Vec::len).filter(|&s| s > 1);
        let first = sizes.next().expect("non-abelian group has a non-trivial class");
        Ok(sizes.all(|s| s == first).then_some(first))
    }

    /// Splits a nilpotent group into its Sylow subgroups (sets of p-power-order elements).
    pub fn sylow_decomposition(&self) -> Result<Vec<SylowFactor<'_>>> {
        if !self.is_nilpotent() {
            return Err(GroupError::NotNilpotent(self.descriptor().to_string()));
        }
        let n = self.order();
        let orders: Vec<u64> = (0..n).map(|g| self.element_order(g) as u64).collect();
        let mut factors = Vec::new();
        for (p, e) in prime_factors(n as u64) {
            let members: Vec<usize> = (0..n)
                .filter(|&g| prime_factors(orders[g]).iter().all(|&(q, _)| q == p))
                .collect();
            assert_eq!(members.len() as u64, p.pow(e), "Sylow {p}-subgroup of {}", self.descriptor());
            let subgroup = ElementSet::new(self, members, true)
                .expect("p-elements of a nilpotent group form a subgroup");
            let abelian = subgroup.is_abelian();
            factors.push(SylowFactor { prime: p, exponent: e, subgroup, abelian });
        }
        // the product map over the factors must be a bijection onto G
        let mut hit = vec![false; n];
        let mut partial = vec![0usize];
        for f in &factors {
            partial = partial
                .iter()
                .flat_map(|&x| f.subgroup.members().iter().map(move |&y| self.mul(x, y)))
                .collect();
        }
        for x in partial {
            assert!(!hit[x], "Sylow product repeats element {x}");
            hit[x] = true;
        }
        Ok(factors)
    }
}
