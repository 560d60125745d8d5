//! Special g-adic expansions.
//!
//! Base 2 uses the run-rewriting procedure on the ordinary binary expansion
//! (blocks of equal-signed adjacent powers become a difference of two powers,
//! opposite-signed neighbours merge) until no two nonzero digits are adjacent.
//! The fixed point is the non-adjacent form. Odd bases start from the ordinary
//! base-g digits and fold every digit outside `[-(g-1)/2, (g-1)/2]` into the
//! next position, giving the balanced expansion.
//!
//! Both procedures scan from the least significant exponent upward, one rewrite
//! per step, and abort if the step count passes a quadratic ceiling in the
//! bit length of the input.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bases::check_base;
use crate::error::{Error, Result};
use crate::term::Term;

/// A signed-digit expansion `sum digits[j] * base^j` in a single base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    base: u64,
    digits: BTreeMap<u32, i64>,
    value: BigInt,
}

impl Expansion {
    /// Builds an expansion from a digit map, dropping zero digits and checking
    /// `1 <= |c| <= floor(base/2)` for the rest.
    pub fn new(base: u64, digits: BTreeMap<u32, i64>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        let half = base / 2;
        let digits: BTreeMap<u32, i64> = digits.into_iter().filter(|&(_, c)| c != 0).collect();
        if let Some((e, c)) = digits.iter().find(|(_, c)| c.unsigned_abs() > half) {
            return Err(Error::InvalidInput(format!(
                "digit {c} at exponent {e} exceeds floor({base}/2)"
            )));
        }
        let value = eval_digits(base, &digits);
        Ok(Expansion {
            base,
            digits,
            value,
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &BTreeMap<u32, i64> {
        &self.digits
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    /// Sum of absolute digit values.
    pub fn length(&self) -> u64 {
        self.digits.values().map(|c| c.unsigned_abs()).sum()
    }

    pub fn terms(&self) -> Vec<Term> {
        self.digits
            .iter()
            .map(|(&e, &c)| Term::new(c, self.base, e))
            .collect()
    }

    pub fn is_non_adjacent(&self) -> bool {
        self.digits
            .keys()
            .zip(self.digits.keys().skip(1))
            .all(|(a, b)| b - a >= 2)
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .digits
            .iter()
            .rev()
            .map(|(&e, &c)| Term::new(c, self.base, e).to_string())
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn eval_digits(base: u64, digits: &BTreeMap<u32, i64>) -> BigInt {
    let b = BigInt::from(base);
    digits
        .iter()
        .map(|(&e, &c)| BigInt::from(c) * num_traits::pow(b.clone(), e as usize))
        .sum()
}

/// Recomputes `sum digits[j] * base^j` from scratch.
pub fn evaluate(e: &Expansion) -> BigInt {
    eval_digits(e.base, &e.digits)
}

fn require_positive(k: &BigInt) -> Result<()> {
    if k.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "expansions are defined for positive integers, got {k}"
        )))
    }
}

fn step_ceiling(k: &BigInt) -> usize {
    let bits = k.bits() as usize + 2;
    4 * bits * bits + 16
}

/// Special 2-adic expansion (non-adjacent form).
pub fn expand_binary_special(k: impl Into<BigInt>) -> Result<Expansion> {
    let k = k.into();
    require_positive(&k)?;
    let mut digits: BTreeMap<u32, i64> = (0..k.bits())
        .filter(|&i| k.bit(i))
        .map(|i| (i as u32, 1))
        .collect();

    let ceiling = step_ceiling(&k);
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > ceiling {
            return Err(Error::StepLimit {
                what: format!("binary expansion of {k}"),
                ceiling,
            });
        }
        if coalesce_binary(&mut digits) {
            continue;
        }
        let Some(i) = lowest_adjacent(&digits) else {
            break;
        };
        let si = digits[&i];
        let sj = digits[&(i + 1)];
        if si == sj {
            // run of t >= 2 equal signs: s*(2^i + ... + 2^{i+t-1}) = s*2^{i+t} - s*2^i
            let mut t = 2;
            while digits.get(&(i + t)) == Some(&si) {
                t += 1;
            }
            for e in i..i + t {
                digits.remove(&e);
            }
            digits.insert(i, -si);
            add_digit(&mut digits, i + t, si);
        } else {
            // -2^i + 2^{i+1} = 2^i and 2^i - 2^{i+1} = -2^i
            digits.remove(&(i + 1));
            digits.insert(i, sj);
        }
    }
    Expansion::new(2, digits)
}

fn add_digit(digits: &mut BTreeMap<u32, i64>, e: u32, c: i64) {
    let v = digits.entry(e).or_insert(0);
    *v += c;
    if *v == 0 {
        digits.remove(&e);
    }
}

/// Replaces the lowest multiple `m*2^j` with `|m| >= 2` by the binary expansion of `m`
/// shifted by `j`. Returns whether anything changed.
fn coalesce_binary(digits: &mut BTreeMap<u32, i64>) -> bool {
    let Some((&j, &m)) = digits.iter().find(|(_, c)| c.abs() >= 2) else {
        return false;
    };
    digits.remove(&j);
    let sign = m.signum();
    let mut mag = m.unsigned_abs();
    let mut r = 0;
    while mag > 0 {
        if mag & 1 == 1 {
            add_digit(digits, j + r, sign);
        }
        mag >>= 1;
        r += 1;
    }
    true
}

fn lowest_adjacent(digits: &BTreeMap<u32, i64>) -> Option<u32> {
    digits
        .keys()
        .zip(digits.keys().skip(1))
        .find(|(a, b)| **b == **a + 1)
        .map(|(a, _)| *a)
}

/// Special g-adic expansion for odd `g >= 3` (balanced digits).
pub fn expand_odd_special(k: impl Into<BigInt>, g: u64) -> Result<Expansion> {
    let k = k.into();
    if g < 3 || g.is_multiple_of(2) {
        return Err(Error::InvalidBase(g));
    }
    require_positive(&k)?;

    let gb = BigInt::from(g);
    let mut digits: BTreeMap<u32, i64> = BTreeMap::new();
    let mut rest = k.clone();
    let mut e = 0u32;
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&gb);
        let r = r
            .to_i64()
            .ok_or(Error::Overflow("extracting a base-g digit"))?;
        if r != 0 {
            digits.insert(e, r);
        }
        rest = q;
        e += 1;
    }

    let g = g as i64;
    let half = (g - 1) / 2;
    let ceiling = step_ceiling(&k);
    let mut steps = 0usize;
    while let Some((&i, &d)) = digits.iter().find(|(_, d)| d.abs() > half) {
        steps += 1;
        if steps > ceiling {
            return Err(Error::StepLimit {
                what: format!("base-{g} expansion of {k}"),
                ceiling,
            });
        }
        let (low, carry) = if d >= g {
            // g copies of g^i fold into g^{i+1}
            (d - g, 1)
        } else if d <= -g {
            (d + g, -1)
        } else if d > 0 {
            // d*g^i = -(g-d)*g^i + g^{i+1}
            (-(g - d), 1)
        } else {
            // d*g^i = (g+d)*g^i - g^{i+1}
            (g + d, -1)
        };
        digits.remove(&i);
        if low != 0 {
            digits.insert(i, low);
        }
        add_digit(&mut digits, i + 1, carry);
    }
    Expansion::new(g as u64, digits)
}

/// Dispatches to the special 2-adic or g-adic algorithm.
pub fn expand(k: impl Into<BigInt>, base: u64) -> Result<Expansion> {
    check_base(base)?;
    if base == 2 {
        expand_binary_special(k)
    } else {
        expand_odd_special(k, base)
    }
}

/// Minimal single-base length: the digit weight of the special expansion.
pub fn length_hat(k: impl Into<BigInt>, base: u64) -> Result<u64> {
    expand(k, base).map(|e| e.length())
}

/// Single-power test: returns `e` with `base^e == v`, if any.
pub fn exact_log(v: &BigInt, base: u64) -> Option<u32> {
    if !v.is_positive() || base < 2 {
        return None;
    }
    let b = BigInt::from(base);
    let mut v = v.clone();
    let mut e = 0;
    while !v.is_one() {
        let (q, r) = v.div_rem(&b);
        if !r.is_zero() {
            return None;
        }
        v = q;
        e += 1;
    }
    Some(e)
}
