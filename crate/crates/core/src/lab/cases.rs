use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    center_size, exact_log, gcd, has_regular_graph, ipow, mul, sub, valuation, verify_phi, GroupSummary, LabError,
    Result,
};
use crate::graph::Isomorphism;
use crate::group::CayleyTable;

/// An exact identity `lhs = rhs` evaluated on concrete numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationCheck {
    pub name: String,
    pub lhs: i128,
    pub rhs: i128,
    pub holds: bool,
}

impl EquationCheck {
    pub fn new(name: impl Into<String>, lhs: i128, rhs: i128) -> Self {
        EquationCheck { name: name.into(), lhs, rhs, holds: lhs == rhs }
    }
}

/// `G = P × A` with `P` the unique non-abelian Sylow factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSplit {
    pub prime: u64,
    /// `|P| = p^n`
    pub n: u32,
    /// `|Z(P)| = p^r`
    pub r: u32,
    /// `|A|`
    pub cofactor: u64,
    #[serde(skip)]
    pub p_members: Vec<usize>,
}

impl PrimeSplit {
    pub fn of(t: &CayleyTable) -> Result<Self> {
        if !t.is_nilpotent() {
            return Err(LabError::WrongShape(format!("{} is not nilpotent", t.descriptor())));
        }
        let factors = t.sylow_decomposition()?;
        let non_abelian: Vec<_> = factors.iter().filter(|f| !f.abelian).collect();
        let [p] = non_abelian[..] else {
            return Err(LabError::WrongShape(format!(
                "{} has {} non-abelian Sylow factors, expected one",
                t.descriptor(),
                non_abelian.len()
            )));
        };
        let members = p.subgroup.members().to_vec();
        let z = center_size(t, &members) as u64;
        let r = exact_log(z, p.prime).ok_or_else(|| {
            LabError::InternalInconsistency(format!("center of a {}-group has order {z}", p.prime))
        })?;
        Ok(PrimeSplit {
            prime: p.prime,
            n: p.exponent,
            r,
            cofactor: t.order() as u64 / p.prime.pow(p.exponent),
            p_members: members,
        })
    }
}

/// Parameters of the proof cases. `q` is absent when both groups share the prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseParams {
    pub p: u64,
    pub q: Option<u64>,
    pub n: u32,
    pub r: u32,
    pub m: u32,
    pub s: u32,
    pub cofactor_g: u64,
    pub cofactor_h: u64,
    /// Class-size exponents `a_1 < ... < a_k` of `G`.
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl CaseParams {
    pub fn q_or_p(&self) -> u64 {
        self.q.unwrap_or(self.p)
    }

    /// `gcd(a_1, a_2, n - r)`
    pub fn u(&self) -> Option<u32> {
        let (&a1, &a2) = (self.a.first()?, self.a.get(1)?);
        Some(gcd(gcd(a1 as u64, a2 as u64), (self.n - self.r) as u64) as u32)
    }

    /// `gcd(b_1, b_2, m - s)`
    pub fn v(&self) -> Option<u32> {
        let (&b1, &b2) = (self.b.first()?, self.b.get(1)?);
        Some(gcd(gcd(b1 as u64, b2 as u64), (self.m - self.s) as u64) as u32)
    }

    /// Exponents positive and `1 <= r < n`, `1 <= s < m`.
    pub fn validate(&self) -> Result<()> {
        let ok = (1..self.n).contains(&self.r)
            && (1..self.m).contains(&self.s)
            && self.a.iter().chain(&self.b).all(|&e| e > 0)
            && self.a.windows(2).all(|w| w[0] < w[1])
            && self.b.windows(2).all(|w| w[0] < w[1])
            && self.cofactor_g > 0
            && self.cofactor_h > 0;
        if ok {
            Ok(())
        } else {
            Err(LabError::WrongShape(format!("invalid parameters {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseAReport {
    pub g: GroupSummary,
    pub h: GroupSummary,
    pub params: CaseParams,
    /// The sorted pairing `a_i <-> b_i` agrees with the one induced by `phi`
    /// and the numbers of vertices at paired exponents match.
    pub alignment_forced: bool,
    pub equations: Vec<EquationCheck>,
    pub conclusions: Vec<EquationCheck>,
    pub holds: bool,
}

/// Class-size exponent of every vertex, keyed by element.
fn class_exponents(t: &CayleyTable, vertices: impl Iterator<Item = usize>, p: u64) -> Result<Vec<u32>> {
    vertices
        .map(|x| {
            let size = (t.order() / t.centralizer_order(x)) as u64;
            exact_log(size, p).ok_or_else(|| {
                LabError::InternalInconsistency(format!("class of {x} in {} has size {size}", t.descriptor()))
            })
        })
        .collect()
}

/// Extracts the parameters of Case (a) from `G = P × A`, `H = P_1 × B` and
/// evaluates its equations and conclusions.
pub fn case_a_audit(g: &CayleyTable, h: &CayleyTable, phi: &Isomorphism) -> Result<CaseAReport> {
    let (sg, sh) = (PrimeSplit::of(g)?, PrimeSplit::of(h)?);
    if sg.prime != sh.prime {
        return Err(LabError::PrimeMismatch(sg.prime, sh.prime));
    }
    for t in [g, h] {
        if has_regular_graph(t) {
            return Err(LabError::RegularGraph(t.descriptor().to_string()));
        }
    }
    verify_phi(g, h, phi)?;
    let p = sg.prime;
    let pairs = phi.element_map();
    let ea = class_exponents(g, pairs.iter().map(|&(x, _)| x), p)?;
    let eb = class_exponents(h, pairs.iter().map(|&(_, y)| y), p)?;

    let mut count_a: BTreeMap<u32, usize> = BTreeMap::new();
    let mut count_b: BTreeMap<u32, usize> = BTreeMap::new();
    let mut induced: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (&x, &y) in ea.iter().zip(&eb) {
        *count_a.entry(x).or_default() += 1;
        *count_b.entry(y).or_default() += 1;
        let images = induced.entry(x).or_default();
        if !images.contains(&y) {
            images.push(y);
        }
    }
    let a: Vec<u32> = count_a.keys().copied().collect();
    let b: Vec<u32> = count_b.keys().copied().collect();
    let alignment_forced = a.len() == b.len()
        && a.iter().zip(&b).all(|(x, y)| induced[x] == [*y] && count_a[x] == count_b[y]);

    let params = CaseParams {
        p,
        q: None,
        n: sg.n,
        r: sg.r,
        m: sh.n,
        s: sh.r,
        cofactor_g: sg.cofactor,
        cofactor_h: sh.cofactor,
        a,
        b,
    };
    params.validate()?;
    if params.a.len() < 2 || params.b.len() < 2 {
        return Err(LabError::InternalInconsistency("irregular graph with a single class-size exponent".into()));
    }
    let (ca, cb) = (params.cofactor_g as i128, params.cofactor_h as i128);
    let (n, r, m, s) = (params.n, params.r, params.m, params.s);

    let mut equations = vec![EquationCheck::new(
        "1",
        mul(mul(ca, ipow(p, r)?)?, ipow(p, n - r)? - 1)?,
        mul(mul(cb, ipow(p, s)?)?, ipow(p, m - s)? - 1)?,
    )];
    for (i, (&ai, &bi)) in params.a.iter().zip(&params.b).enumerate() {
        if ai > n || bi > m {
            return Err(LabError::InternalInconsistency(format!("class exponent {ai} or {bi} exceeds the group")));
        }
        equations.push(EquationCheck::new(
            format!("2[{}]", i + 1),
            mul(mul(ca, ipow(p, n - ai)?)?, ipow(p, ai)? - 1)?,
            mul(mul(cb, ipow(p, m - bi)?)?, ipow(p, bi)? - 1)?,
        ));
    }
    let (a1, a2, b1, b2) = (params.a[0], params.a[1], params.b[0], params.b[1]);
    equations.push(EquationCheck::new(
        "3",
        mul(ca, sub(ipow(p, n - a1)?, ipow(p, n - a2)?)?)?,
        mul(cb, sub(ipow(p, m - b1)?, ipow(p, m - b2)?)?)?,
    ));

    let mut conclusions = vec![EquationCheck::new("r = s", r as i128, s as i128)];
    for (i, (&ai, &bi)) in params.a.iter().zip(&params.b).enumerate() {
        conclusions.push(EquationCheck::new(format!("n - a[{0}] = m - b[{0}]", i + 1), (n - ai) as i128, (m - bi) as i128));
    }
    conclusions.push(EquationCheck::new("|A| = |B|", ca, cb));
    conclusions.push(EquationCheck::new("a[1] = b[1]", a1 as i128, b1 as i128));
    conclusions.push(EquationCheck::new("|P| = |P1|", ipow(p, n)?, ipow(p, m)?));

    let holds = alignment_forced && equations.iter().chain(&conclusions).all(|e| e.holds);
    Ok(CaseAReport { g: GroupSummary::of(g), h: GroupSummary::of(h), params, alignment_forced, equations, conclusions, holds })
}

/// Valuation of one quantity at the chosen prime; `None` for zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Valuation {
    pub quantity: String,
    pub value: i128,
    pub exponent: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseBcReport {
    pub h: GroupSummary,
    pub q1: u64,
    pub q2: u64,
    /// Orders of the non-abelian factors and of the abelian remainder `B`.
    pub q1_order: usize,
    pub q2_order: usize,
    pub cofactor: usize,
    pub h1: usize,
    pub h2: usize,
    pub equations: Vec<EquationCheck>,
    pub prime: u64,
    pub valuations: Vec<Valuation>,
    pub holds: bool,
}

struct Factor {
    prime: u64,
    members: Vec<usize>,
    center: usize,
}

impl Factor {
    fn centralizer_of(&self, t: &CayleyTable, x: usize) -> Vec<usize> {
        self.members.iter().copied().filter(|&y| t.commute(x, y)).collect()
    }

    /// Smallest non-central element of the factor whose centralizer in the
    /// factor is abelian.
    fn pick(&self, t: &CayleyTable) -> Option<usize> {
        self.members.iter().copied().find(|&x| {
            let c = self.centralizer_of(t, x);
            c.len() < self.members.len()
                && c.iter().enumerate().all(|(i, &a)| c[i + 1..].iter().all(|&b| t.commute(a, b)))
        })
    }
}

/// Evaluates the three product identities for `H = Q_1 × Q_2 × B` directly
/// from centralizers of `H` and from the factors, and reports valuations at `prime`.
pub fn case_bc_audit(h: &CayleyTable, prime: u64) -> Result<CaseBcReport> {
    if !h.is_nilpotent() {
        return Err(LabError::WrongShape(format!("{} is not nilpotent", h.descriptor())));
    }
    let factors = h.sylow_decomposition()?;
    let non_abelian: Vec<Factor> = factors
        .iter()
        .filter(|f| !f.abelian)
        .map(|f| Factor {
            prime: f.prime,
            members: f.subgroup.members().to_vec(),
            center: center_size(h, f.subgroup.members()),
        })
        .collect();
    let [f1, f2] = &non_abelian[..] else {
        return Err(LabError::WrongShape(format!(
            "{} has {} non-abelian Sylow factors, expected two",
            h.descriptor(),
            non_abelian.len()
        )));
    };
    let no_abelian_centralizer =
        |f: &Factor| LabError::WrongShape(format!("no element of the Sylow {}-factor has an abelian centralizer", f.prime));
    let h1 = f1.pick(h).ok_or_else(|| no_abelian_centralizer(f1))?;
    let h2 = f2.pick(h).ok_or_else(|| no_abelian_centralizer(f2))?;
    let b = (h.order() / (f1.members.len() * f2.members.len())) as i128;

    let (q1, zq1, cq1) = (f1.members.len() as i128, f1.center as i128, f1.centralizer_of(h, h1).len() as i128);
    let (q2, zq2, cq2) = (f2.members.len() as i128, f2.center as i128, f2.centralizer_of(h, h2).len() as i128);
    let centralizer = |x: usize| -> Result<(i128, i128)> {
        let c = h.centralizer(x)?;
        Ok((c.len() as i128, center_size(h, c.members()) as i128))
    };
    let (ch1, zch1) = centralizer(h1)?;
    let (ch2, zch2) = centralizer(h2)?;
    let (oh, zh) = (h.order() as i128, h.center().len() as i128);

    let equations = vec![
        EquationCheck::new("4", sub(ch2, zch2)?, mul(mul(sub(q1, zq1)?, cq2)?, b)?),
        EquationCheck::new("5", sub(zch1, zh)?, mul(mul(sub(cq1, zq1)?, zq2)?, b)?),
        EquationCheck::new("6", sub(oh, ch1)?, mul(mul(sub(q1, cq1)?, q2)?, b)?),
        EquationCheck::new(
            "split",
            mul(b, sub(q1, zq1)?)?,
            mul(b, sub(q1, cq1)?)? + mul(b, sub(cq1, zq1)?)?,
        ),
    ];
    let valuations = [
        ("|C_H(h2)| - |Z(C_H(h2))|", sub(ch2, zch2)?),
        ("|Z(C_H(h1))| - |Z(H)|", sub(zch1, zh)?),
        ("|H| - |C_H(h1)|", sub(oh, ch1)?),
        ("|B|(|Q1| - |Z(Q1)|)", mul(b, sub(q1, zq1)?)?),
        ("|B|(|Q1| - |C_Q1(h1)|)", mul(b, sub(q1, cq1)?)?),
        ("|B|(|C_Q1(h1)| - |Z(Q1)|)", mul(b, sub(cq1, zq1)?)?),
    ]
    .into_iter()
    .map(|(quantity, value)| Valuation { quantity: quantity.into(), value, exponent: valuation(value, prime) })
    .collect();

    let holds = equations.iter().all(|e| e.holds);
    Ok(CaseBcReport {
        h: GroupSummary::of(h),
        q1: f1.prime,
        q2: f2.prime,
        q1_order: f1.members.len(),
        q2_order: f2.members.len(),
        cofactor: b as usize,
        h1,
        h2,
        equations,
        prime,
        valuations,
        holds,
    })
}
