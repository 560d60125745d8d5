//! Exponential equations in one or two power terms.
//!
//! Same-base equations `b^m +- b^n = c` are solved completely by bounding or by
//! valuation factoring. Mixed-base equations with opposite signs have no a
//! priori exponent bound; they are closed by an exhaustive scan below some
//! exponent floors plus a modular obstruction above them (see [`obstruction`]).

mod equation;
pub mod lower_bound;
pub mod obstruction;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::checked_pow;

pub use equation::{PowerEquation, PowerTerm, Sign};
pub use lower_bound::{
    prove_length_at_least, verify_lower_bound, FamilyCheck, FamilyOutcome, LowerBound,
    LowerBoundProof,
};
pub use obstruction::{
    find_obstruction, verify_certificate, CertificateCheck, ObstructionCertificate,
    ObstructionFailure, ObstructionSearch, PowerOrbit, RejectReason, DEFAULT_MODULI,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    Enumeration,
    ValuationFactoring,
    ObstructionBounded,
}

/// Solutions of an equation, as exponent tuples in term order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub solutions: Vec<Vec<u32>>,
    pub complete: bool,
    pub method: SolveMethod,
    /// Set when the solutions form an infinite family instead of a list.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinite_family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ObstructionCertificate>,
}

impl SolutionSet {
    fn exact(solutions: Vec<Vec<u32>>, method: SolveMethod) -> Self {
        SolutionSet {
            solutions,
            complete: true,
            method,
            infinite_family: None,
            certificate: None,
        }
    }

    /// Proven to have no solutions at all.
    pub fn is_proven_empty(&self) -> bool {
        self.complete && self.solutions.is_empty() && self.infinite_family.is_none()
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.solutions.iter().map(|s| (s[0], s[1])).collect()
    }
}

/// All `(m, n)` with `b^m + b^n = c`. Complete: both powers are below `c`.
pub fn solve_power_sum(base: u64, c: i128) -> SolutionSet {
    let b = base as i128;
    let mut sols = Vec::new();
    if c >= 2 {
        let mut n = 0u32;
        while let Some(p) = checked_pow(b, n).filter(|&p| p < c) {
            if let Some(m) = exact_power(c - p, b) {
                sols.push(vec![m, n]);
            }
            n += 1;
        }
    }
    SolutionSet::exact(sols, SolveMethod::Enumeration)
}

/// All `(m, n)` with `b^m - b^n = c`.
///
/// For `c != 0`, `b^n (b^d - 1) = |c|` with `b^d - 1` prime to `b`, so `n` is the
/// `b`-adic valuation of `c` and `d` is forced. `c = 0` is the family `m = n`.
pub fn solve_power_diff(base: u64, c: i128) -> SolutionSet {
    if c == 0 {
        let mut s = SolutionSet::exact(vec![], SolveMethod::ValuationFactoring);
        s.infinite_family = Some("m = n".into());
        return s;
    }
    let b = base as i128;
    let mut odd = c.abs();
    let mut n = 0u32;
    while odd % b == 0 {
        odd /= b;
        n += 1;
    }
    let mut sols = Vec::new();
    if let Some(d) = exact_power(odd + 1, b).filter(|&d| d >= 1) {
        if c > 0 {
            sols.push(vec![n + d, n]);
        } else {
            sols.push(vec![n, n + d]);
        }
    }
    SolutionSet::exact(sols, SolveMethod::ValuationFactoring)
}

pub fn solve_two_power_sum(c: i128) -> SolutionSet {
    solve_power_sum(2, c)
}

pub fn solve_two_power_diff(c: i128) -> SolutionSet {
    solve_power_diff(2, c)
}

fn exact_power(v: i128, b: i128) -> Option<u32> {
    if v < 1 {
        return None;
    }
    let mut v = v;
    let mut e = 0;
    while v % b == 0 {
        v /= b;
        e += 1;
    }
    (v == 1).then_some(e)
}

/// Every exponent tuple with all exponents below `bound` that satisfies `eq`.
pub fn bounded_scan(eq: &PowerEquation, bound: u32) -> Result<Vec<Vec<u32>>> {
    if bound == 0 {
        return Err(Error::InvalidInput("scan bound must be >= 1".into()));
    }
    let target = BigInt::from(eq.target());
    let values: Vec<Vec<BigInt>> = eq
        .terms()
        .iter()
        .map(|t| (0..bound).map(|e| t.eval(e)).collect())
        .collect();
    let mut out = Vec::new();
    match values.as_slice() {
        [xs] => {
            for (i, x) in xs.iter().enumerate() {
                if *x == target {
                    out.push(vec![i as u32]);
                }
            }
        }
        [xs, ys] => {
            for (i, x) in xs.iter().enumerate() {
                for (j, y) in ys.iter().enumerate() {
                    if x + y == target {
                        out.push(vec![i as u32, j as u32]);
                    }
                }
            }
        }
        _ => unreachable!("equations have one or two terms"),
    }
    Ok(out)
}

/// Largest exponent at which a positive term can stay at or below `limit`.
fn exponent_limit(t: &PowerTerm, limit: &BigInt) -> u32 {
    let mut e = 0;
    while &t.eval(e + 1).abs() <= limit {
        e += 1;
    }
    e
}

/// Solves an equation completely when possible.
///
/// Same-base unit-coefficient pairs use the sum/difference solvers, same-sign
/// equations are bounded by the target, and everything else falls back to a
/// bounded scan closed by a modular certificate placed above the scanned solutions.
pub fn solve_equation(eq: &PowerEquation, search: &ObstructionSearch) -> Result<SolutionSet> {
    let terms = eq.terms();
    let c = eq.target();
    if terms.len() == 1 {
        let sols = terms[0]
            .solve(&BigInt::from(c))
            .map(|e| vec![vec![e]])
            .unwrap_or_default();
        return Ok(SolutionSet::exact(sols, SolveMethod::Enumeration));
    }
    let (t0, t1) = (&terms[0], &terms[1]);
    if t0.base == t1.base && t0.coeff == 1 && t1.coeff == 1 {
        let set = match (t0.sign, t1.sign) {
            (Sign::Plus, Sign::Plus) => solve_power_sum(t0.base, c),
            (Sign::Minus, Sign::Minus) => solve_power_sum(t0.base, -c),
            (Sign::Plus, Sign::Minus) => solve_power_diff(t0.base, c),
            (Sign::Minus, Sign::Plus) => {
                let mut s = solve_power_diff(t0.base, c);
                for sol in &mut s.solutions {
                    sol.swap(0, 1);
                }
                if s.infinite_family.is_some() {
                    s.infinite_family = Some(format!("{} = {}", t0.var, t1.var));
                }
                s
            }
        };
        let mut set = set;
        if let Some(f) = &mut set.infinite_family {
            *f = format!("{} = {}", t0.var, t1.var);
        }
        return Ok(set);
    }
    if eq.same_signs() {
        let limit = BigInt::from(c.unsigned_abs());
        let sign_ok = match t0.sign {
            Sign::Plus => c > 0,
            Sign::Minus => c < 0,
        };
        let mut sols = Vec::new();
        if sign_ok {
            for x in 0..=exponent_limit(t0, &limit) {
                sols.extend(eq.solve_with_fixed(0, x));
            }
        }
        sols.sort();
        sols.dedup();
        return Ok(SolutionSet::exact(sols, SolveMethod::Enumeration));
    }

    const SCAN: u32 = 40;
    let found = bounded_scan(eq, SCAN)?;
    let floors: Vec<u32> = (0..2)
        .map(|i| found.iter().map(|s| s[i] + 1).max().unwrap_or(0))
        .collect();
    let search = ObstructionSearch {
        floors: Some(floors),
        ..search.clone()
    };
    match obstruction::search_certificate(eq, &search, true) {
        Ok(cert) => {
            let mut sols: Vec<Vec<u32>> = cert
                .below_floor_scan
                .iter()
                .flat_map(|c| c.solutions.iter().cloned())
                .collect();
            sols.sort();
            sols.dedup();
            Ok(SolutionSet {
                solutions: sols,
                complete: true,
                method: SolveMethod::ObstructionBounded,
                infinite_family: None,
                certificate: Some(cert),
            })
        }
        Err(_) => Ok(SolutionSet {
            solutions: found,
            complete: false,
            method: SolveMethod::Enumeration,
            infinite_family: None,
            certificate: None,
        }),
    }
}

/// One of the nine equations equating a T-form `+-2^x +- 13` with an S-form `+-2^y +- 11`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionEquation {
    pub index: usize,
    /// The T-side form, e.g. `2^c1 + 13`.
    pub t_form: String,
    /// The S-side form, e.g. `2^c2 + 11`.
    pub s_form: String,
    /// The reduced two-power equation that was solved.
    pub reduced: String,
    /// `(n, x, y)` with `x` the T-side exponent and `y` the S-side exponent.
    pub solutions: Vec<(i128, u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub equations: Vec<IntersectionEquation>,
    pub intersection: BTreeSet<i128>,
}

/// Odd `n > 1` lying in both structure sets, derived by solving the nine
/// equations between the three parametrized forms of each set.
pub fn structure_intersection() -> IntersectionReport {
    // (sign of 2^x, constant): n = 2^x + 13, 2^x - 13, -2^x + 13
    let t_forms = [(1i128, 13i128), (1, -13), (-1, 13)];
    let s_forms = [(1i128, 11i128), (1, -11), (-1, 11)];
    let mut equations = Vec::new();
    let mut intersection = BTreeSet::new();
    for (ti, &(ts, tc)) in t_forms.iter().enumerate() {
        for (si, &(ss, sc)) in s_forms.iter().enumerate() {
            let index = ti * 3 + si + 1;
            // ts*2^x - ss*2^y = sc - tc
            let rhs = sc - tc;
            let (reduced, pairs): (String, Vec<(u32, u32)>) = match (ts, ss) {
                (1, 1) => (
                    format!("2^x - 2^y = {rhs}"),
                    solve_two_power_diff(rhs).pairs(),
                ),
                (1, -1) => (
                    format!("2^x + 2^y = {rhs}"),
                    solve_two_power_sum(rhs).pairs(),
                ),
                (-1, 1) => (
                    format!("2^x + 2^y = {}", -rhs),
                    solve_two_power_sum(-rhs).pairs(),
                ),
                _ => (
                    format!("2^y - 2^x = {rhs}"),
                    solve_two_power_diff(rhs)
                        .pairs()
                        .into_iter()
                        .map(|(y, x)| (x, y))
                        .collect(),
                ),
            };
            let solutions: Vec<(i128, u32, u32)> = pairs
                .into_iter()
                .map(|(x, y)| (ts * (1i128 << x) + tc, x, y))
                .collect();
            for &(n, x, y) in &solutions {
                debug_assert_eq!(n, ss * (1i128 << y) + sc, "eq {index} at ({x},{y})");
                if n > 1 && n % 2 == 1 {
                    intersection.insert(n);
                }
            }
            equations.push(IntersectionEquation {
                index,
                t_form: form_string(ts, tc, 'x'),
                s_form: form_string(ss, sc, 'y'),
                reduced,
                solutions,
            });
        }
    }
    IntersectionReport {
        equations,
        intersection,
    }
}

fn form_string(sign: i128, c: i128, var: char) -> String {
    let lead = if sign < 0 { "-" } else { "" };
    let op = if c < 0 { '-' } else { '+' };
    format!("{lead}2^{var} {op} {}", c.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_power_sum_examples() {
        assert_eq!(solve_two_power_sum(24).pairs(), vec![(4, 3), (3, 4)]);
        assert_eq!(solve_two_power_sum(2).pairs(), vec![(0, 0)]);
        assert!(solve_two_power_sum(-2).is_proven_empty());
        assert!(solve_two_power_sum(1).is_proven_empty());
        assert!(solve_two_power_sum(7).is_proven_empty());
    }

    #[test]
    fn two_power_diff_examples() {
        assert_eq!(solve_two_power_diff(2).pairs(), vec![(2, 1)]);
        assert_eq!(solve_two_power_diff(24).pairs(), vec![(5, 3)]);
        assert_eq!(solve_two_power_diff(-24).pairs(), vec![(3, 5)]);
        let zero = solve_two_power_diff(0);
        assert!(zero.solutions.is_empty());
        assert_eq!(zero.infinite_family.as_deref(), Some("m = n"));
        assert!(!zero.is_proven_empty());
        assert!(solve_two_power_diff(5).is_proven_empty());
    }

    #[test]
    fn odd_base_diff_uses_valuation() {
        // 3^3 - 3^1 = 24, 9^2 - 9^0 = 80
        assert_eq!(solve_power_diff(3, 24).pairs(), vec![(3, 1)]);
        assert_eq!(solve_power_diff(9, 80).pairs(), vec![(2, 0)]);
        assert!(solve_power_diff(5, 19).is_proven_empty());
    }

    #[test]
    fn bounded_scan_examples() {
        let eq: PowerEquation = "2^a + 5^b = 19".parse().unwrap();
        assert!(bounded_scan(&eq, 5).unwrap().is_empty());
        let eq: PowerEquation = "2^a + 7^b = 11".parse().unwrap();
        assert_eq!(bounded_scan(&eq, 8).unwrap(), vec![vec![2, 1]]);
        assert!(bounded_scan(&eq, 0).is_err());
    }

    #[test]
    fn intersection_matches_listed() {
        let r = structure_intersection();
        assert_eq!(
            r.intersection.iter().copied().collect::<Vec<_>>(),
            vec![3, 5, 9, 15, 19, 21]
        );
        assert_eq!(r.equations.len(), 9);
        assert_eq!(r.equations[0].solutions, vec![(15, 1, 2)]);
        assert_eq!(r.equations[1].solutions, vec![(21, 3, 5)]);
        assert!(r.equations[2].solutions.is_empty());
        assert_eq!(r.equations[3].solutions, vec![(19, 5, 3)]);
        assert_eq!(r.equations[4].solutions, vec![(-9, 2, 1)]);
    }

    #[test]
    fn solve_equation_dispatch() {
        let s = ObstructionSearch::default();
        let eq: PowerEquation = "2^a - 2^b = 24".parse().unwrap();
        assert_eq!(solve_equation(&eq, &s).unwrap().pairs(), vec![(5, 3)]);
        let eq: PowerEquation = "-2^a + 2^b = 24".parse().unwrap();
        assert_eq!(solve_equation(&eq, &s).unwrap().pairs(), vec![(3, 5)]);
        let eq: PowerEquation = "2^a + 7^b = 11".parse().unwrap();
        let set = solve_equation(&eq, &s).unwrap();
        assert!(set.complete);
        assert_eq!(set.pairs(), vec![(2, 1)]);
        // 2^3 - 7^1 = 1 and 2^1 - 7^0 = 1; no others
        let eq: PowerEquation = "2^a - 7^b = 1".parse().unwrap();
        let set = solve_equation(&eq, &s).unwrap();
        assert!(set.complete, "{set:?}");
        assert_eq!(set.method, SolveMethod::ObstructionBounded);
        assert_eq!(set.pairs(), vec![(1, 0), (3, 1)]);
    }
}
