//! Repunits `1 + b + ... + b^(k-1)` and bounded searches for equal repunits
//! in two different bases.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiophantineError {
    #[error("repunit({base}, {len}) does not fit in 128 bits")]
    Overflow { base: u64, len: u32 },
    #[error("invalid bounds: {0}")]
    BadBounds(String),
    #[error("bases ({x}, {y}) admit two exponent pairs: {first:?} and {second:?}")]
    UniquenessViolated { x: u64, y: u64, first: (u32, u32), second: (u32, u32) },
}

/// `1 + b + ... + b^(k-1)`, exact.
pub fn repunit(base: u64, len: u32) -> Result<u128, DiophantineError> {
    if base < 2 || len < 1 {
        return Err(DiophantineError::BadBounds(format!("repunit needs base >= 2 and length >= 1, got ({base}, {len})")));
    }
    let b = base as u128;
    let mut acc: u128 = 0;
    for _ in 0..len {
        acc = acc
            .checked_mul(b)
            .and_then(|v| v.checked_add(1))
            .ok_or(DiophantineError::Overflow { base, len })?;
    }
    Ok(acc)
}

/// `(y^n - 1)/(y - 1) = (x^m - 1)/(x - 1)` with `y > x > 1`, `m, n > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RepunitSolution {
    pub x: u64,
    pub y: u64,
    pub m: u32,
    pub n: u32,
    pub value: u128,
}

impl RepunitSolution {
    /// Re-evaluates both sides from scratch.
    pub fn verify(&self) -> bool {
        self.y > self.x
            && self.x > 1
            && self.m > 1
            && self.n > 1
            && matches!((repunit(self.x, self.m), repunit(self.y, self.n)), (Ok(a), Ok(b)) if a == b && a == self.value)
    }
}

/// All solutions with `1 < x < y <= max_base` and `2 < m, n <= max_exp`,
/// sorted by `(x, y, m, n)`. Fails if any base pair has two exponent pairs.
///
/// Length 2 is left out: `y = repunit(x, m) - 1` gives a solution with
/// `n = 2` for every `x` and `m`. Use [`goormaghtigh_search_from`] to include it.
pub fn goormaghtigh_search(max_base: u64, max_exp: u32) -> Result<Vec<RepunitSolution>, DiophantineError> {
    goormaghtigh_search_from(3, max_base, max_exp)
}

/// As [`goormaghtigh_search`], with exponents in `min_exp..=max_exp`.
pub fn goormaghtigh_search_from(
    min_exp: u32,
    max_base: u64,
    max_exp: u32,
) -> Result<Vec<RepunitSolution>, DiophantineError> {
    if max_base < 2 || max_exp < 2 || min_exp < 2 || min_exp > max_exp {
        return Err(DiophantineError::BadBounds(format!(
            "need max_base >= 2 and 2 <= min_exp <= max_exp, got ({max_base}, {min_exp}..={max_exp})"
        )));
    }
    let values: Vec<Vec<(u128, u64, u32)>> = (2..=max_base)
        .into_par_iter()
        .map(|b| (min_exp..=max_exp).map(|k| repunit(b, k).map(|v| (v, b, k))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let mut index: BTreeMap<u128, Vec<(u64, u32)>> = BTreeMap::new();
    for (v, b, k) in values.into_iter().flatten() {
        index.entry(v).or_default().push((b, k));
    }
    let mut out = Vec::new();
    for (value, mut hits) in index {
        if hits.len() < 2 {
            continue;
        }
        hits.sort_unstable();
        for i in 0..hits.len() {
            for j in i + 1..hits.len() {
                let ((x, m), (y, n)) = (hits[i], hits[j]);
                out.push(RepunitSolution { x, y, m, n, value });
            }
        }
    }
    out.sort_unstable();
    for w in out.windows(2) {
        if (w[0].x, w[0].y) == (w[1].x, w[1].y) {
            return Err(DiophantineError::UniquenessViolated {
                x: w[0].x,
                y: w[0].y,
                first: (w[0].m, w[0].n),
                second: (w[1].m, w[1].n),
            });
        }
    }
    Ok(out)
}
