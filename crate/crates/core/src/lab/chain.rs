use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{LabError, Result};
use crate::group::CayleyTable;

/// How the next element of a centralizer chain is chosen among the
/// non-central elements whose centralizer is non-abelian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Picker {
    #[default]
    Smallest,
    Seeded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    pub order: usize,
    pub center_size: usize,
    pub ac: bool,
    /// Element of `G` whose centralizer in the previous link is this link;
    /// absent for `G` itself.
    pub chosen: Option<usize>,
    /// Members of this link as indices of `G`.
    pub members: Vec<usize>,
}

/// `G = C_0 > C_1 > ... > C_k` with `C_i = C_{C_{i-1}}(g_i)` and `C_k` an AC-group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralizerChain {
    pub group: String,
    pub links: Vec<ChainLink>,
    pub terminal_ac: bool,
}

impl CentralizerChain {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Number of centralizer steps taken.
    pub fn steps(&self) -> usize {
        self.links.len().saturating_sub(1)
    }

    pub fn orders(&self) -> Vec<usize> {
        self.links.iter().map(|l| l.order).collect()
    }
}

fn is_abelian_subset(t: &CayleyTable, members: &[usize]) -> bool {
    members.iter().enumerate().all(|(i, &a)| members[i + 1..].iter().all(|&b| t.commute(a, b)))
}

pub fn centralizer_chain(g: &CayleyTable, picker: Picker) -> Result<CentralizerChain> {
    if g.is_abelian() {
        return Err(LabError::AbelianInput(g.descriptor().to_string()));
    }
    let mut rng = match picker {
        Picker::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Picker::Smallest => None,
    };
    let mut links = Vec::new();
    let mut current: Vec<usize> = (0..g.order()).collect();
    let mut chosen = None;
    loop {
        let centralizer_in = |x: usize, set: &[usize]| -> Vec<usize> {
            set.iter().copied().filter(|&y| g.commute(x, y)).collect()
        };
        let center: Vec<usize> = current.iter().copied().filter(|&z| current.iter().all(|&y| g.commute(z, y))).collect();
        let candidates: Vec<usize> = current
            .iter()
            .copied()
            .filter(|x| center.binary_search(x).is_err())
            .filter(|&x| !is_abelian_subset(g, &centralizer_in(x, &current)))
            .collect();
        let ac = candidates.is_empty();
        links.push(ChainLink { order: current.len(), center_size: center.len(), ac, chosen, members: current.clone() });
        if ac {
            break;
        }
        let next = match rng.as_mut() {
            Some(r) => *candidates.choose(r).expect("non-empty"),
            None => candidates[0],
        };
        let smaller = centralizer_in(next, &current);
        if smaller.len() >= current.len() {
            return Err(LabError::InternalInconsistency(format!(
                "centralizer of non-central {next} in a link of order {} is not proper",
                current.len()
            )));
        }
        current = smaller;
        chosen = Some(next);
    }
    Ok(CentralizerChain { group: g.descriptor().to_string(), links, terminal_ac: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct, GroupDescriptor};

    fn t(s: &str) -> CayleyTable {
        construct(&s.parse::<GroupDescriptor>().unwrap()).unwrap()
    }

    /// Independent check of each link: rebuild it as a standalone group.
    fn check(g: &CayleyTable, chain: &CentralizerChain) {
        let orders = chain.orders();
        assert!(orders.windows(2).all(|w| w[0] > w[1]), "{orders:?}");
        assert!(chain.steps() as f64 <= (g.order() as f64).log2());
        for (i, link) in chain.links.iter().enumerate() {
            let set = crate::group::ElementSet::new(g, link.members.clone(), false).unwrap();
            let induced = g.induced_group(&set).unwrap();
            assert!(!induced.group.is_abelian());
            assert_eq!(induced.group.center().len(), link.center_size);
            assert_eq!(induced.group.is_ac_group().unwrap(), link.ac);
            assert_eq!(link.ac, i + 1 == chain.len());
            if let Some(x) = link.chosen {
                let prev = &chain.links[i - 1].members;
                let expected: Vec<usize> = prev.iter().copied().filter(|&y| g.commute(x, y)).collect();
                assert_eq!(link.members, expected);
            }
        }
    }

    #[test]
    fn quaternion_is_already_ac() {
        let g = t("dicyclic(2)");
        let chain = centralizer_chain(&g, Picker::Smallest).unwrap();
        assert_eq!(chain.len(), 1);
        check(&g, &chain);
    }

    #[test]
    fn quaternion_squared() {
        let g = t("product(dicyclic(2),dicyclic(2))");
        let chain = centralizer_chain(&g, Picker::Smallest).unwrap();
        assert_eq!(chain.orders(), vec![64, 32]);
        check(&g, &chain);
    }

    #[test]
    fn heisenberg_order_243() {
        let g = t("heisenberg(3,2)");
        assert!(!g.is_ac_group().unwrap());
        let chain = centralizer_chain(&g, Picker::Smallest).unwrap();
        assert!(chain.len() >= 2);
        check(&g, &chain);
        for seed in 0..5 {
            check(&g, &centralizer_chain(&g, Picker::Seeded(seed)).unwrap());
        }
    }

    #[test]
    fn seeded_is_reproducible() {
        let g = t("product(dihedral(4),dihedral(4))");
        let a = centralizer_chain(&g, Picker::Seeded(9)).unwrap();
        assert_eq!(a, centralizer_chain(&g, Picker::Seeded(9)).unwrap());
        check(&g, &a);
        assert!(matches!(centralizer_chain(&t("abelian(2,2)"), Picker::Smallest), Err(LabError::AbelianInput(_))));
    }
}
