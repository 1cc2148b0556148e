use serde::Serialize;

use super::{gcd, ipow, mul, sub, CaseParams, EquationCheck, LabError, Result};
use crate::diophantine::{goormaghtigh_search, repunit, RepunitSolution};
use crate::group::descriptor::is_prime;

/// Limits of the Case (d) parameter scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseDBounds {
    pub max_prime: u64,
    /// Upper bound on `n` and `m`.
    pub max_exponent: u32,
    pub min_cofactor: u64,
    pub max_cofactor: u64,
}

impl Default for CaseDBounds {
    fn default() -> Self {
        CaseDBounds { max_prime: 7, max_exponent: 8, min_cofactor: 1, max_cofactor: 50 }
    }
}

/// A tuple satisfying the order equation and the class equation for at
/// least two distinct exponents, with the derived checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseDTuple {
    pub params: CaseParams,
    pub u: u32,
    pub v: u32,
    pub checks: Vec<EquationCheck>,
}

/// Two repunits in different bases that coincide for a tuple matching a
/// single class exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eq10Coincidence {
    pub params: CaseParams,
    pub solution: RepunitSolution,
    /// Found again by the bounded repunit search, which also asserts that
    /// the base pair has no second exponent pair.
    pub cross_checked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseDCertificate {
    pub bounds: CaseDBounds,
    /// Tuples `(p, n, r, |A|, q, m, s, |B|)` satisfying the order equation.
    pub order_solutions: usize,
    /// Those with exactly one matching class exponent.
    pub single_exponent: usize,
    pub coincidences: Vec<Eq10Coincidence>,
    pub survivors: Vec<CaseDTuple>,
}

impl CaseDCertificate {
    pub fn is_empty(&self) -> bool {
        self.survivors.is_empty()
    }
}

/// Evaluates equations (7)-(11) on a tuple. Fails when `a_1 = a_2`, since
/// then the class sizes do not witness an irregular graph.
pub fn check_case_d_tuple(t: &CaseParams) -> Result<Vec<EquationCheck>> {
    let q = t.q.filter(|&q| q != t.p).ok_or_else(|| LabError::WrongShape("Case (d) needs two distinct primes".into()))?;
    if t.a.len() < 2 || t.b.len() < 2 {
        return Err(LabError::WrongShape("Case (d) needs two class exponents on each side".into()));
    }
    if t.a[0] == t.a[1] {
        return Err(LabError::WrongShape("a_1 = a_2: the graph would be regular".into()));
    }
    t.validate()?;
    let (p, n, r, m, s) = (t.p, t.n, t.r, t.m, t.s);
    let (ca, cb) = (t.cofactor_g as i128, t.cofactor_h as i128);
    let (u, v) = (t.u().expect("two exponents"), t.v().expect("two exponents"));
    for (&a, &b) in t.a.iter().zip(&t.b).take(2) {
        if a + r >= n || b + s >= m {
            return Err(LabError::WrongShape(format!("class exponents ({a}, {b}) leave no room above the center")));
        }
    }

    let mut checks = vec![EquationCheck::new(
        "7",
        mul(ca, sub(ipow(p, n)?, ipow(p, r)?)?)?,
        mul(cb, sub(ipow(q, m)?, ipow(q, s)?)?)?,
    )];
    for (i, (&a, &b)) in t.a.iter().zip(&t.b).take(2).enumerate() {
        checks.push(EquationCheck::new(
            format!("8[{}]", i + 1),
            mul(ca, sub(ipow(p, n - a)?, ipow(p, r)?)?)?,
            mul(cb, sub(ipow(q, m - b)?, ipow(q, s)?)?)?,
        ));
    }
    checks.push(EquationCheck::new(
        "9",
        mul(mul(ca, ipow(p, r)?)?, ipow(p, u)? - 1)?,
        mul(mul(cb, ipow(q, s)?)?, ipow(q, v)? - 1)?,
    ));
    // the quotients cross-multiplied
    let ratio = |x: u32, y: u32| -> Result<(i128, i128)> {
        Ok((mul(ipow(p, x)? - 1, ipow(q, v)? - 1)?, mul(ipow(q, y)? - 1, ipow(p, u)? - 1)?))
    };
    let (l, rr) = ratio(n - r, m - s)?;
    checks.push(EquationCheck::new("10", l, rr));
    for (i, (&a, &b)) in t.a.iter().zip(&t.b).take(2).enumerate() {
        let (l, rr) = ratio(n - a - r, m - b - s)?;
        checks.push(EquationCheck::new(format!("11[{}]", i + 1), l, rr));
    }
    Ok(checks)
}

struct Side {
    prime: u64,
    exp: u32,
    center: u32,
    cofactor: u64,
}

fn sides(b: &CaseDBounds) -> Vec<Side> {
    let mut out = Vec::new();
    for prime in (2..=b.max_prime).filter(|&p| is_prime(p)) {
        // a non-abelian p-group has order at least p^3 and |P/Z(P)| >= p^2
        for exp in 3..=b.max_exponent {
            for center in 1..=exp - 2 {
                for cofactor in (b.min_cofactor..=b.max_cofactor).filter(|c| c % prime != 0) {
                    out.push(Side { prime, exp, center, cofactor });
                }
            }
        }
    }
    out
}

/// Exhaustive scan of Case (d) parameters within `bounds`.
pub fn case_d_audit(bounds: CaseDBounds) -> Result<CaseDCertificate> {
    let all = sides(&bounds);
    let mut cert = CaseDCertificate { bounds, order_solutions: 0, single_exponent: 0, coincidences: Vec::new(), survivors: Vec::new() };
    for g in &all {
        let lhs = mul(g.cofactor as i128, sub(ipow(g.prime, g.exp)?, ipow(g.prime, g.center)?)?)?;
        for h in all.iter().filter(|h| h.prime != g.prime) {
            let rhs = mul(h.cofactor as i128, sub(ipow(h.prime, h.exp)?, ipow(h.prime, h.center)?)?)?;
            if lhs != rhs {
                continue;
            }
            cert.order_solutions += 1;
            let mut matches = Vec::new();
            for a in 1..g.exp - g.center {
                let l = mul(g.cofactor as i128, ipow(g.prime, g.exp - a)? - ipow(g.prime, g.center)?)?;
                for b in 1..h.exp - h.center {
                    let r = mul(h.cofactor as i128, ipow(h.prime, h.exp - b)? - ipow(h.prime, h.center)?)?;
                    if l == r {
                        matches.push((a, b));
                    }
                }
            }
            let params = CaseParams {
                p: g.prime,
                q: Some(h.prime),
                n: g.exp,
                r: g.center,
                m: h.exp,
                s: h.center,
                cofactor_g: g.cofactor,
                cofactor_h: h.cofactor,
                a: matches.iter().map(|m| m.0).collect(),
                b: matches.iter().map(|m| m.1).collect(),
            };
            match matches[..] {
                [] => {}
                [(a, b)] => {
                    cert.single_exponent += 1;
                    if let Some(c) = coincidence(params, a, b)? {
                        cert.coincidences.push(c);
                    }
                }
                _ => {
                    let checks = check_case_d_tuple(&params)?;
                    let (u, v) = (params.u().unwrap_or(0), params.v().unwrap_or(0));
                    cert.survivors.push(CaseDTuple { params, u, v, checks });
                }
            }
        }
    }
    Ok(cert)
}

/// Repunit equality `(p^(n-r)-1)/(p^u-1) = (q^(m-s)-1)/(q^v-1)` with
/// `u = gcd(a, n-r)`, `v = gcd(b, m-s)`, when both sides have length >= 2.
fn coincidence(params: CaseParams, a: u32, b: u32) -> Result<Option<Eq10Coincidence>> {
    let u = gcd(a as u64, (params.n - params.r) as u64) as u32;
    let v = gcd(b as u64, (params.m - params.s) as u64) as u32;
    let (bp, lp) = (params.p.pow(u), (params.n - params.r) / u);
    let (bq, lq) = (params.q_or_p().pow(v), (params.m - params.s) / v);
    if lp < 2 || lq < 2 || bp == bq {
        return Ok(None);
    }
    let overflow = |e| LabError::Overflow(format!("{e}"));
    let (vp, vq) = (repunit(bp, lp).map_err(overflow)?, repunit(bq, lq).map_err(overflow)?);
    if vp != vq {
        return Ok(None);
    }
    let solution = if bp < bq {
        RepunitSolution { x: bp, y: bq, m: lp, n: lq, value: vp }
    } else {
        RepunitSolution { x: bq, y: bp, m: lq, n: lp, value: vp }
    };
    let cross_checked = solution.y <= 100
        && goormaghtigh_search(solution.y.max(12), solution.m.max(20))
            .map_err(|e| LabError::InternalInconsistency(e.to_string()))?
            .contains(&solution);
    Ok(Some(Eq10Coincidence { params, solution, cross_checked }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple() -> CaseParams {
        CaseParams { p: 2, q: Some(5), n: 7, r: 2, m: 4, s: 1, cofactor_g: 5, cofactor_h: 1, a: vec![1, 4], b: vec![1, 2] }
    }

    #[test]
    fn equal_exponents_rejected() {
        let t = CaseParams { a: vec![4, 4], ..tuple() };
        assert!(matches!(check_case_d_tuple(&t), Err(LabError::WrongShape(m)) if m.contains("regular")));
        let same_prime = CaseParams { q: Some(2), ..tuple() };
        assert!(check_case_d_tuple(&same_prime).is_err());
    }

    #[test]
    fn thirty_one_tuple() {
        // 5(2^7 - 2^2) = 620 = 5^4 - 5, and the class equation matches only at a = 4
        let checks = check_case_d_tuple(&tuple()).unwrap();
        let get = |n: &str| checks.iter().find(|c| c.name == n).unwrap().clone();
        assert_eq!(get("7").lhs, 620);
        assert!(get("7").holds && get("8[2]").holds && !get("8[1]").holds);
        assert!(get("10").holds);
    }

    #[test]
    fn small_scan_is_empty() {
        let cert = case_d_audit(CaseDBounds { max_prime: 5, max_exponent: 7, min_cofactor: 1, max_cofactor: 10 }).unwrap();
        assert!(cert.is_empty(), "{:?}", cert.survivors);
        assert!(cert.order_solutions > 0);
        let c = cert.coincidences.iter().find(|c| c.solution.value == 31).expect("31 coincidence");
        assert_eq!((c.solution.x, c.solution.y, c.solution.m, c.solution.n), (2, 5, 5, 3));
        assert!(c.cross_checked);
    }
}
