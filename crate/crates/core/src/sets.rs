//! The sets Q, S and T that govern short representations of small targets over `{2, n}`.
//!
//! `S` (resp. `T`) holds the odd `n > 1`, other than 11 (resp. 13), with
//! `|2^c +- n| = 11` (resp. 13) for some `c >= 0`; those are exactly the `n` for
//! which the target is a sum of two terms from `{+-2^c, +-n}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::Term;

const Q_LIST: [(i128, &[(i64, u32)]); 18] = [
    (1, &[(1, 0)]),
    (2, &[(1, 1)]),
    (3, &[(-1, 0), (1, 2)]),
    (4, &[(1, 2)]),
    (5, &[(1, 0), (1, 2)]),
    (6, &[(-1, 1), (1, 3)]),
    (7, &[(-1, 0), (1, 3)]),
    (8, &[(1, 3)]),
    (9, &[(1, 0), (1, 3)]),
    (10, &[(1, 1), (1, 3)]),
    (12, &[(-1, 2), (1, 4)]),
    (14, &[(-1, 1), (1, 4)]),
    (15, &[(-1, 0), (1, 4)]),
    (16, &[(1, 4)]),
    (17, &[(1, 0), (1, 4)]),
    (18, &[(1, 1), (1, 4)]),
    (20, &[(1, 2), (1, 4)]),
    (24, &[(-1, 3), (1, 5)]),
];

/// The integers below 25 with at most two signed powers of 2.
pub fn q_members() -> Vec<i128> {
    Q_LIST.iter().map(|(t, _)| *t).collect()
}

pub fn member_q(t: i128) -> bool {
    Q_LIST.iter().any(|(q, _)| *q == t)
}

/// The listed representation of `t` by at most two powers of 2.
pub fn q_witness(t: i128) -> Option<Vec<Term>> {
    Q_LIST
        .iter()
        .find(|(q, _)| *q == t)
        .map(|(_, w)| w.iter().map(|&(c, e)| Term::new(c, 2, e)).collect())
}

/// How `n` relates to the target through a power of 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureForm {
    /// `n = target - 2^c`
    TargetMinusPower,
    /// `n = 2^c + target`
    PowerPlusTarget,
    /// `n = 2^c - target`
    PowerMinusTarget,
}

impl StructureForm {
    pub const ALL: [StructureForm; 3] = [
        StructureForm::TargetMinusPower,
        StructureForm::PowerPlusTarget,
        StructureForm::PowerMinusTarget,
    ];

    fn n(self, target: i128, power: i128) -> i128 {
        match self {
            StructureForm::TargetMinusPower => target - power,
            StructureForm::PowerPlusTarget => power + target,
            StructureForm::PowerMinusTarget => power - target,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureWitness {
    pub n: u64,
    pub target: i128,
    pub form: StructureForm,
    pub exponent: u32,
}

impl StructureWitness {
    /// The length-2 representation of the target over `{2, n}`.
    pub fn terms(&self) -> Vec<Term> {
        let n = self.n;
        let c = self.exponent;
        match self.form {
            // target = n + 2^c
            StructureForm::TargetMinusPower => vec![Term::new(1, n, 1), Term::new(1, 2, c)],
            // target = -2^c + n
            StructureForm::PowerPlusTarget => vec![Term::new(1, n, 1), Term::new(-1, 2, c)],
            // target = 2^c - n
            StructureForm::PowerMinusTarget => vec![Term::new(-1, n, 1), Term::new(1, 2, c)],
        }
    }
}

fn check_odd(n: u64) -> Result<()> {
    if n > 1 && n % 2 == 1 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "expected an odd integer > 1, got {n}"
        )))
    }
}

/// Solves `|2^c +- n| = target` for `c`; the target itself is excluded.
pub fn structure_witness(n: u64, target: i128) -> Result<Option<StructureWitness>> {
    check_odd(n)?;
    if n as i128 == target {
        return Ok(None);
    }
    // every form needs 2^c <= n + |target|
    let max_c = 64 - n.leading_zeros() + 5 + (128 - target.unsigned_abs().leading_zeros());
    for form in StructureForm::ALL {
        for c in 0..=max_c.min(126) {
            if form.n(target, 1i128 << c) == n as i128 {
                return Ok(Some(StructureWitness {
                    n,
                    target,
                    form,
                    exponent: c,
                }));
            }
        }
    }
    Ok(None)
}

pub fn member_s(n: u64) -> Result<Option<StructureWitness>> {
    structure_witness(n, 11)
}

pub fn member_t(n: u64) -> Result<Option<StructureWitness>> {
    structure_witness(n, 13)
}

/// Membership by the explicit three-part parametrizations of S and T, kept as
/// a cross-check of the equation form.
///
/// S: `11 - 2^g (g = 1,2,3)`, `2^a + 11 (a >= 1)`, `2^b - 11 (b >= 4)`.
/// T: `13 - 2^m (m = 1,2,3)`, `2^g + 13 (g >= 1)`, `2^(f+2) - 13 (f >= 4)`.
pub fn member_parametrized(n: u64, target: i128) -> Result<bool> {
    check_odd(n)?;
    let third_min = match target {
        11 => 4,
        13 => 6,
        _ => {
            return Err(Error::InvalidInput(format!(
                "parametrizations exist for 11 and 13 only, got {target}"
            )))
        }
    };
    let n = n as i128;
    let first = (1..=3).any(|e| target - (1i128 << e) == n);
    let pow = |v: i128| v > 0 && v.count_ones() == 1;
    let second = n > target && pow(n - target) && n - target >= 2;
    let third = pow(n + target) && (n + target) >= 1i128 << third_min;
    Ok(first || second || third)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetName {
    Q,
    S,
    T,
    Intersection,
}

impl FromStr for SetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" | "q" => Ok(SetName::Q),
            "S" | "s" => Ok(SetName::S),
            "T" | "t" => Ok(SetName::T),
            "intersection" | "S∩T" | "ST" | "S&T" => Ok(SetName::Intersection),
            other => Err(Error::UnknownSet(other.to_string())),
        }
    }
}

impl fmt::Display for SetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetName::Q => "Q",
            SetName::S => "S",
            SetName::T => "T",
            SetName::Intersection => "intersection",
        })
    }
}

/// Members up to `bound`, ascending.
pub fn enumerate_set(name: SetName, bound: u64) -> Result<Vec<u64>> {
    if bound < 3 {
        return Err(Error::InvalidInput(format!(
            "bound must be >= 3, got {bound}"
        )));
    }
    let odd = (3..=bound).step_by(2);
    Ok(match name {
        SetName::Q => q_members()
            .into_iter()
            .filter(|&t| t as u64 <= bound)
            .map(|t| t as u64)
            .collect(),
        SetName::S => odd
            .filter(|&n| matches!(member_s(n), Ok(Some(_))))
            .collect(),
        SetName::T => odd
            .filter(|&n| matches!(member_t(n), Ok(Some(_))))
            .collect(),
        SetName::Intersection => odd
            .filter(|&n| matches!(member_s(n), Ok(Some(_))) && matches!(member_t(n), Ok(Some(_))))
            .collect(),
    })
}

/// Odd `n <= bound` where the equation form and the parametrization disagree.
pub fn parametrization_mismatches(target: i128, bound: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for n in (3..=bound).step_by(2) {
        let by_eq = structure_witness(n, target)?.is_some();
        if by_eq != member_parametrized(n, target)? {
            out.push(n);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::sum_terms;

    #[test]
    fn q_membership_and_witnesses() {
        assert!(member_q(12));
        assert_eq!(
            q_witness(12).unwrap(),
            vec![Term::new(-1, 2, 2), Term::new(1, 2, 4)]
        );
        assert!(!member_q(11));
        assert!(!member_q(0));
        for t in q_members() {
            let w = q_witness(t).unwrap();
            assert_eq!(sum_terms(&w), Some(t));
            assert!(w.len() <= 2);
        }
    }

    #[test]
    fn s_and_t_examples() {
        let w = member_s(3).unwrap().unwrap();
        assert_eq!((w.form, w.exponent), (StructureForm::TargetMinusPower, 3));
        let w = member_s(53).unwrap().unwrap();
        assert_eq!((w.form, w.exponent), (StructureForm::PowerMinusTarget, 6));
        assert_eq!(sum_terms(&w.terms()), Some(11));
        assert!(member_s(11).unwrap().is_none());
        assert!(member_s(23).unwrap().is_none());
        assert!(member_t(51).unwrap().is_some());
        assert!(member_t(13).unwrap().is_none());
        assert!(member_t(7).unwrap().is_none());
        assert!(member_s(4).is_err());
        assert!(member_t(1).is_err());
    }

    #[test]
    fn listed_prefixes() {
        assert_eq!(
            enumerate_set(SetName::S, 75).unwrap(),
            vec![3, 5, 7, 9, 13, 15, 19, 21, 27, 43, 53, 75]
        );
        assert_eq!(
            enumerate_set(SetName::T, 77).unwrap(),
            vec![3, 5, 9, 11, 15, 17, 19, 21, 29, 45, 51, 77]
        );
        assert_eq!(
            enumerate_set(SetName::Intersection, 21).unwrap(),
            vec![3, 5, 9, 15, 19, 21]
        );
        assert!(enumerate_set(SetName::S, 2).is_err());
        assert!("U".parse::<SetName>().is_err());
    }

    #[test]
    fn parametrizations() {
        assert!(parametrization_mismatches(11, 10_001).unwrap().is_empty());
        assert_eq!(parametrization_mismatches(13, 10_001).unwrap(), vec![3, 19]);
    }
}
