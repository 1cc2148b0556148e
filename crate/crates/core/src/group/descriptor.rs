//! Construction expressions for the group families used throughout the crate.
//!
//! The textual form is `cyclic(k)`, `abelian(k1,...,kt)`, `dihedral(k)`,
//! `dicyclic(k)`, `heisenberg(p,k)` and `product(d1,d2)`. Printing emits no
//! whitespace; parsing tolerates it.

use std::fmt;
use std::str::FromStr;

use super::{from_trusted, CayleyTable, GroupError, Result};

/// Default cap on constructed group orders.
pub const DEFAULT_ORDER_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupDescriptor {
    Cyclic(u64),
    Abelian(Vec<u64>),
    /// Symmetries of a `k`-gon, order `2k`.
    Dihedral(u64),
    /// Dicyclic group of order `4k`; `Dicyclic(2)` is the quaternion group.
    Dicyclic(u64),
    /// Unitriangular group of order `p^(2k+1)`.
    Heisenberg { p: u64, k: u32 },
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub order_cap: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { order_cap: DEFAULT_ORDER_CAP }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn bad(msg: impl Into<String>) -> GroupError {
    GroupError::BadDescriptor(msg.into())
}

impl GroupDescriptor {
    pub fn product(a: GroupDescriptor, b: GroupDescriptor) -> Self {
        GroupDescriptor::Product(Box::new(a), Box::new(b))
    }

    /// Checks parameter ranges without building anything.
    pub fn check(&self) -> Result<()> {
        use GroupDescriptor::*;
        match self {
            Cyclic(0) => Err(bad("cyclic(k) needs k >= 1")),
            Abelian(ks) if ks.is_empty() => Err(bad("abelian() needs at least one factor")),
            Abelian(ks) if ks.contains(&0) => Err(bad("abelian factors must be >= 1")),
            Dihedral(0) => Err(bad("dihedral(k) needs k >= 1")),
            Dicyclic(0) => Err(bad("dicyclic(k) needs k >= 1")),
            Heisenberg { p, .. } if !is_prime(*p) => Err(bad(format!("heisenberg: {p} is not prime"))),
            Heisenberg { k: 0, .. } => Err(bad("heisenberg(p,k) needs k >= 1")),
            Product(a, b) => a.check().and_then(|_| b.check()),
            _ => Ok(()),
        }
    }

    /// Exact group order; `None` when it does not fit in 128 bits.
    pub fn order(&self) -> Option<u128> {
        use GroupDescriptor::*;
        match self {
            Cyclic(k) => Some(*k as u128),
            Abelian(ks) => ks.iter().try_fold(1u128, |acc, &k| acc.checked_mul(k as u128)),
            Dihedral(k) => (*k as u128).checked_mul(2),
            Dicyclic(k) => (*k as u128).checked_mul(4),
            Heisenberg { p, k } => (*p as u128).checked_pow(2 * k + 1),
            Product(a, b) => a.order()?.checked_mul(b.order()?),
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupDescriptor::*;
        match self {
            Cyclic(k) => write!(f, "cyclic({k})"),
            Abelian(ks) => {
                f.write_str("abelian(")?;
                for (i, k) in ks.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{k}")?;
                }
                f.write_str(")")
            }
            Dihedral(k) => write!(f, "dihedral({k})"),
            Dicyclic(k) => write!(f, "dicyclic({k})"),
            Heisenberg { p, k } => write!(f, "heisenberg({p},{k})"),
            Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

struct Parser<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Parser<'s> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(bad(format!("expected '{c}' at offset {} in {:?}", self.pos, self.src)))
        }
    }

    fn peek_is(&mut self, c: char) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(c)
    }

    fn word(&mut self) -> &'s str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_alphanumeric() && c != '_').unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<u64> {
        let w = self.word();
        w.parse().map_err(|_| bad(format!("expected an integer, found {w:?}")))
    }

    fn numbers(&mut self) -> Result<Vec<u64>> {
        let mut out = vec![self.number()?];
        while self.peek_is(',') {
            self.eat(',')?;
            out.push(self.number()?);
        }
        Ok(out)
    }

    fn descriptor(&mut self) -> Result<GroupDescriptor> {
        let name = self.word();
        self.eat('(')?;
        let d = match name {
            "product" => {
                let a = self.descriptor()?;
                self.eat(',')?;
                let b = self.descriptor()?;
                GroupDescriptor::product(a, b)
            }
            "abelian" => GroupDescriptor::Abelian(self.numbers()?),
            "cyclic" | "dihedral" | "dicyclic" => {
                let k = self.number()?;
                match name {
                    "cyclic" => GroupDescriptor::Cyclic(k),
                    "dihedral" => GroupDescriptor::Dihedral(k),
                    _ => GroupDescriptor::Dicyclic(k),
                }
            }
            "heisenberg" => {
                let p = self.number()?;
                self.eat(',')?;
                let k = self.number()?;
                let k = u32::try_from(k).map_err(|_| bad("heisenberg rank too large"))?;
                GroupDescriptor::Heisenberg { p, k }
            }
            other => return Err(bad(format!("unknown family {other:?}"))),
        };
        self.eat(')')?;
        Ok(d)
    }
}

impl FromStr for GroupDescriptor {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let d = p.descriptor()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(bad(format!("trailing input in {s:?}")));
        }
        d.check()?;
        Ok(d)
    }
}

/// Builds the Cayley table for `d` under the default order cap.
pub fn construct(d: &GroupDescriptor) -> Result<CayleyTable> {
    construct_with(d, &BuildOptions::default())
}

pub fn construct_with(d: &GroupDescriptor, opts: &BuildOptions) -> Result<CayleyTable> {
    d.check()?;
    let order = d.order().ok_or(GroupError::OrderOverflow { order: u128::MAX, cap: opts.order_cap })?;
    if order > opts.order_cap as u128 {
        return Err(GroupError::OrderOverflow { order, cap: opts.order_cap });
    }
    use GroupDescriptor::*;
    let n = order as usize;
    let name = d.to_string();
    match d {
        Product(a, b) => {
            let ga = construct_with(a, opts)?;
            let gb = construct_with(b, opts)?;
            ga.direct_product(&gb, opts.order_cap)
        }
        Cyclic(k) => {
            let k = *k as usize;
            table_from(n, name, |a, b| (a + b) % k)
        }
        Abelian(ks) => {
            let ks: Vec<usize> = ks.iter().map(|&k| k as usize).collect();
            table_from(n, name, |a, b| {
                let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
                for &k in &ks {
                    out += ((a % k + b % k) % k) * place;
                    place *= k;
                    a /= k;
                    b /= k;
                }
                out
            })
        }
        Dihedral(k) => {
            // r^i s^j  <->  i + k*j
            let k = *k as usize;
            table_from(n, name, |a, b| {
                let (i, j) = (a % k, a / k);
                let (i2, j2) = (b % k, b / k);
                let rot = if j == 0 { (i + i2) % k } else { (i + k - i2) % k };
                rot + k * ((j + j2) % 2)
            })
        }
        Dicyclic(k) => {
            // a^i x^j  <->  i + 2k*j, with x a x^-1 = a^-1 and x^2 = a^k
            let k = *k as usize;
            let m = 2 * k;
            table_from(n, name, |a, b| {
                let (i, j) = (a % m, a / m);
                let (i2, j2) = (b % m, b / m);
                match (j, j2) {
                    (0, _) => (i + i2) % m + m * j2,
                    (_, 0) => (i + m - i2) % m + m,
                    _ => (i + m - i2 + k) % m,
                }
            })
        }
        Heisenberg { p, k } => {
            // (a, b, c) with a, b in F_p^k and c in F_p; (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a.b')
            let p = *p as usize;
            let k = *k as usize;
            let unpack = |x: usize| {
                let c = x % p;
                let mut rest = x / p;
                let mut b = vec![0; k];
                let mut a = vec![0; k];
                for t in b.iter_mut().chain(a.iter_mut()) {
                    *t = rest % p;
                    rest /= p;
                }
                (a, b, c)
            };
            table_from(n, name, |x, y| {
                let (a, b, c) = unpack(x);
                let (a2, b2, c2) = unpack(y);
                let dot: usize = a.iter().zip(&b2).map(|(u, v)| u * v).sum();
                let mut out = 0;
                let mut place = 1;
                out += ((c + c2 + dot) % p) * place;
                place *= p;
                for (u, v) in b.iter().zip(&b2).chain(a.iter().zip(&a2)) {
                    out += ((u + v) % p) * place;
                    place *= p;
                }
                out
            })
        }
    }
}

fn table_from(n: usize, name: String, mul: impl Fn(usize, usize) -> usize) -> Result<CayleyTable> {
    let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
    from_trusted(&rows, name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> GroupDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let x = d(" product( dicyclic(2) , abelian(2, 4) ) ");
        assert_eq!(x.to_string(), "product(dicyclic(2),abelian(2,4))");
        assert_eq!(x.order(), Some(64));
        assert_eq!(d("heisenberg(3,2)").order(), Some(243));
    }

    #[test]
    fn malformed_descriptors() {
        for s in ["heisenberg(4,1)", "heisenberg(3,0)", "cyclic(0)", "dihedral(x)", "torus(3)", "cyclic(3) x", "abelian()"] {
            assert!(matches!(s.parse::<GroupDescriptor>(), Err(GroupError::BadDescriptor(_))), "{s}");
        }
    }

    #[test]
    fn orders_and_caps() {
        let g = construct(&d("product(dicyclic(2),cyclic(3))")).unwrap();
        assert_eq!(g.order(), 24);
        let err = construct_with(&d("dihedral(300)"), &BuildOptions { order_cap: 512 }).unwrap_err();
        assert_eq!(err, GroupError::OrderOverflow { order: 600, cap: 512 });
        assert!(construct(&d("heisenberg(3,2)")).is_ok());
    }

    #[test]
    fn dihedral_three_is_non_abelian() {
        let g = construct(&d("dihedral(3)")).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    fn descriptor_strategy() -> impl Strategy<Value = GroupDescriptor> {
        let leaf = prop_oneof![
            (1u64..50).prop_map(GroupDescriptor::Cyclic),
            prop::collection::vec(1u64..10, 1..4).prop_map(GroupDescriptor::Abelian),
            (1u64..50).prop_map(GroupDescriptor::Dihedral),
            (1u64..50).prop_map(GroupDescriptor::Dicyclic),
            (prop::sample::select(vec![2u64, 3, 5, 7]), 1u32..4)
                .prop_map(|(p, k)| GroupDescriptor::Heisenberg { p, k }),
        ];
        leaf.prop_recursive(3, 8, 2, |inner| {
            (inner.clone(), inner).prop_map(|(a, b)| GroupDescriptor::product(a, b))
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(x in descriptor_strategy()) {
            let printed = x.to_string();
            let back: GroupDescriptor = printed.parse().unwrap();
            prop_assert_eq!(&back, &x);
            prop_assert_eq!(back.to_string(), printed);
        }
    }
}
