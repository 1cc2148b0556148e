use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{io_error, CatalogError, Result};
use crate::group::descriptor::is_prime;
use crate::group::GroupDescriptor;
use crate::lab::gcd;

/// Which groups go into a catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CatalogConfig {
    /// Family specs (`dihedral`, `dicyclic:2..8`, `heisenberg:2..3:1`) or
    /// explicit descriptors such as `product(dicyclic(2),heisenberg(3,1))`.
    pub families: Vec<String>,
    pub max_order: usize,
    /// Abelian cofactors of order `2..=max_cofactor` are multiplied onto
    /// every base group; 0 or 1 disables them.
    pub max_cofactor: u64,
    /// Only use cofactors whose order is coprime to the base group's.
    pub coprime_cofactors: bool,
}

impl Default for CatalogConfig {
    fn default() -> Self {
        CatalogConfig {
            families: [
                "dihedral:3..16",
                "dicyclic:2..8",
                "heisenberg(2,1)",
                "heisenberg(3,1)",
                "heisenberg(3,2)",
                "product(dicyclic(2),heisenberg(3,1))",
                "product(dihedral(4),heisenberg(3,1))",
            ]
            .map(String::from)
            .to_vec(),
            max_order: 256,
            max_cofactor: 9,
            coprime_cofactors: true,
        }
    }
}

impl CatalogConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        serde_json::from_str(&text).map_err(|source| CatalogError::Json { path: path.into(), source })
    }

    /// Base groups of every family, without cofactors, sorted and deduplicated.
    pub fn base_groups(&self) -> Result<Vec<GroupDescriptor>> {
        let mut out = BTreeSet::new();
        for spec in &self.families {
            out.extend(expand_family(&spec.parse()?, self.max_order)?);
        }
        Ok(out.into_iter().collect())
    }

    /// Base groups plus their products with admissible abelian cofactors,
    /// sorted by descriptor string.
    pub fn descriptors(&self) -> Result<Vec<GroupDescriptor>> {
        let bases = self.base_groups()?;
        let mut out: BTreeSet<(String, GroupDescriptor)> = BTreeSet::new();
        for base in bases {
            let order = base.order().expect("bounded by the cap") as u64;
            out.insert((base.to_string(), base.clone()));
            for c in 2..=self.max_cofactor {
                if order.saturating_mul(c) > self.max_order as u64 || (self.coprime_cofactors && gcd(order, c) != 1) {
                    continue;
                }
                for a in abelian_groups_of_order(c) {
                    let d = GroupDescriptor::product(base.clone(), a);
                    out.insert((d.to_string(), d));
                }
            }
        }
        Ok(out.into_iter().map(|(_, d)| d).collect())
    }
}

/// One entry of [`CatalogConfig::families`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Dihedral(RangeInclusive<u64>),
    Dicyclic(RangeInclusive<u64>),
    Heisenberg { primes: RangeInclusive<u64>, ranks: RangeInclusive<u64> },
    Explicit(GroupDescriptor),
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |r: &RangeInclusive<u64>| format!("{}..{}", r.start(), r.end());
        match self {
            FamilySpec::Dihedral(k) => write!(f, "dihedral:{}", r(k)),
            FamilySpec::Dicyclic(k) => write!(f, "dicyclic:{}", r(k)),
            FamilySpec::Heisenberg { primes, ranks } => write!(f, "heisenberg:{}:{}", r(primes), r(ranks)),
            FamilySpec::Explicit(d) => write!(f, "{d}"),
        }
    }
}

fn bad(spec: &str, reason: impl Into<String>) -> CatalogError {
    CatalogError::BadFamily { spec: spec.into(), reason: reason.into() }
}

/// `a`, `a..b` or `a..=b`, both ends inclusive; absent means unbounded above `min`.
fn parse_range(spec: &str, part: Option<&str>, min: u64) -> Result<RangeInclusive<u64>> {
    let Some(part) = part else {
        return Ok(min..=u64::MAX);
    };
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad(spec, format!("{s:?} is not an integer")));
    let (lo, hi) = match part.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let v = num(part)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad(spec, format!("empty range {lo}..{hi}")));
    }
    Ok(lo.max(min)..=hi)
}

impl FromStr for FamilySpec {
    type Err = CatalogError;

    fn from_str(spec: &str) -> Result<Self> {
        let s = spec.trim();
        if s.contains('(') {
            return Ok(FamilySpec::Explicit(s.parse()?));
        }
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default().trim();
        let (first, second) = (parts.next(), parts.next());
        if parts.next().is_some() {
            return Err(bad(spec, "too many ':' separated parts"));
        }
        let family = match name {
            // smallest non-abelian members
            "dihedral" => FamilySpec::Dihedral(parse_range(spec, first, 3)?),
            "dicyclic" => FamilySpec::Dicyclic(parse_range(spec, first, 2)?),
            "heisenberg" => FamilySpec::Heisenberg {
                primes: parse_range(spec, first, 2)?,
                ranks: parse_range(spec, second, 1)?,
            },
            other => return Err(bad(spec, format!("unknown family {other:?}"))),
        };
        if second.is_some() && !matches!(family, FamilySpec::Heisenberg { .. }) {
            return Err(bad(spec, "only heisenberg takes a second range"));
        }
        Ok(family)
    }
}

/// Members of a family with order at most `max_order`.
pub fn expand_family(spec: &FamilySpec, max_order: usize) -> Result<Vec<GroupDescriptor>> {
    let cap = max_order as u64;
    let out = match spec {
        FamilySpec::Dihedral(ks) => ks.clone().take_while(|k| 2 * k <= cap).map(GroupDescriptor::Dihedral).collect(),
        FamilySpec::Dicyclic(ks) => ks.clone().take_while(|k| 4 * k <= cap).map(GroupDescriptor::Dicyclic).collect(),
        FamilySpec::Heisenberg { primes, ranks } => {
            let mut out = Vec::new();
            for p in primes.clone().take_while(|p| p.saturating_pow(3) <= cap).filter(|&p| is_prime(p)) {
                for k in ranks.clone().take_while(|&k| k < 32 && p.saturating_pow(2 * k as u32 + 1) <= cap) {
                    out.push(GroupDescriptor::Heisenberg { p, k: k as u32 });
                }
            }
            out
        }
        FamilySpec::Explicit(d) => {
            let order = d.order().unwrap_or(u128::MAX);
            if order > cap as u128 {
                return Err(CatalogError::CapExceeded { descriptor: d.to_string(), order, cap: max_order });
            }
            vec![d.clone()]
        }
    };
    Ok(out)
}

/// Abelian groups of order `n` up to isomorphism, in invariant-factor form
/// `d_1 | d_2 | ... | d_t`; cyclic groups are written as `cyclic(n)`.
pub fn abelian_groups_of_order(n: u64) -> Vec<GroupDescriptor> {
    fn chains(rest: u64, last: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for d in (2..=rest).filter(|d| rest % d == 0 && d % last == 0) {
            // the remaining factors must all be multiples of d
            if (rest / d) % d != 0 && rest / d != 1 {
                continue;
            }
            acc.push(d);
            chains(rest / d, d, acc, out);
            acc.pop();
        }
    }
    if n == 1 {
        return vec![GroupDescriptor::Cyclic(1)];
    }
    let mut out = Vec::new();
    chains(n, 1, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|ks| if ks.len() == 1 { GroupDescriptor::Cyclic(ks[0]) } else { GroupDescriptor::Abelian(ks) })
        .collect()
}
