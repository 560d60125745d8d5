use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// One signed summand `coeff * base^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub coeff: i64,
    pub base: u64,
    pub exp: u32,
}

impl Term {
    pub fn new(coeff: i64, base: u64, exp: u32) -> Self {
        Term { coeff, base, exp }
    }

    /// Exact value, or `None` if it does not fit in an `i128`.
    pub fn value(&self) -> Option<i128> {
        let p = checked_pow(self.base as i128, self.exp)?;
        p.checked_mul(self.coeff as i128)
    }

    /// Contribution to the length function: the absolute coefficient.
    pub fn weight(&self) -> u64 {
        self.coeff.unsigned_abs()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.coeff < 0 { '-' } else { '+' };
        match self.coeff.unsigned_abs() {
            1 => write!(f, "{}{}^{}", sign, self.base, self.exp),
            c => write!(f, "{}{}*{}^{}", sign, c, self.base, self.exp),
        }
    }
}

pub fn checked_pow(base: i128, exp: u32) -> Option<i128> {
    let mut acc: i128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Total weight of a list of terms.
pub fn total_weight(terms: &[Term]) -> u64 {
    terms.iter().map(Term::weight).sum()
}

/// Exact sum of a list of terms, `None` on overflow.
pub fn sum_terms(terms: &[Term]) -> Option<i128> {
    terms
        .iter()
        .try_fold(0i128, |acc, t| acc.checked_add(t.value()?))
}

/// Renders terms largest first, e.g. `+2^9 -2^5 -2^3 +2^0`.
pub fn format_terms(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut sorted = terms.to_vec();
    sorted.sort_by(|a, b| {
        let va = a.value().map(i128::unsigned_abs).unwrap_or(u128::MAX);
        let vb = b.value().map(i128::unsigned_abs).unwrap_or(u128::MAX);
        vb.cmp(&va)
            .then(a.base.cmp(&b.base))
            .then(b.exp.cmp(&a.exp))
    });
    sorted
        .iter()
        .map(Term::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Merges terms sharing a (base, exponent) and carries until every coefficient
/// satisfies `|c| <= floor(base/2)`. Carrying never increases total weight.
pub fn normalize_terms(terms: &[Term]) -> Vec<Term> {
    let mut by_base: BTreeMap<u64, BTreeMap<u32, i64>> = BTreeMap::new();
    for t in terms {
        *by_base.entry(t.base).or_default().entry(t.exp).or_default() += t.coeff;
    }
    let mut out = Vec::new();
    for (base, mut digits) in by_base {
        let b = base as i64;
        let half = b / 2;
        let mut exp = match digits.keys().next() {
            Some(&e) => e,
            None => continue,
        };
        loop {
            let c = digits.get(&exp).copied().unwrap_or(0);
            if c.abs() > half {
                let mut r = c.rem_euclid(b);
                if r > half {
                    r -= b;
                }
                let carry = (c - r) / b;
                digits.insert(exp, r);
                *digits.entry(exp + 1).or_default() += carry;
            }
            match digits.range(exp + 1..).next() {
                Some((&e, _)) => exp = e,
                None => break,
            }
        }
        out.extend(
            digits
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(e, c)| Term::new(c, base, e)),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_value() {
        let t = Term::new(-3, 9, 4);
        assert_eq!(t.to_string(), "-3*9^4");
        assert_eq!(t.value(), Some(-3 * 6561));
        assert_eq!(Term::new(1, 2, 0).to_string(), "+2^0");
        assert_eq!(Term::new(1, 2, 200).value(), None);
    }

    #[test]
    fn normalize_carries_without_gaining_weight() {
        // 3 copies of 5^0 -> -2*5^0 + 5^1, same weight
        let n = normalize_terms(&[Term::new(1, 5, 0); 3]);
        assert_eq!(n, vec![Term::new(-2, 5, 0), Term::new(1, 5, 1)]);
        // 2^0 + 2^0 -> 2^1
        let n = normalize_terms(&[Term::new(1, 2, 0), Term::new(1, 2, 0)]);
        assert_eq!(n, vec![Term::new(1, 2, 1)]);
        // cancellation
        assert!(normalize_terms(&[Term::new(1, 7, 2), Term::new(-1, 7, 2)]).is_empty());
    }

    #[test]
    fn formatting_orders_by_magnitude() {
        let terms = [Term::new(1, 2, 0), Term::new(-1, 5, 1), Term::new(1, 5, 2)];
        assert_eq!(format_terms(&terms), "+5^2 -5^1 +2^0");
        assert_eq!(sum_terms(&terms), Some(21));
    }
}
