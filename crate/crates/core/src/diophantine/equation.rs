use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::digits::exact_log;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// `sign * coeff * base^var` with `var` ranging over the non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PowerTerm {
    pub sign: Sign,
    pub coeff: u64,
    pub base: u64,
    pub var: String,
}

impl PowerTerm {
    pub fn new(sign: Sign, coeff: u64, base: u64, var: &str) -> Self {
        PowerTerm {
            sign,
            coeff,
            base,
            var: var.to_string(),
        }
    }

    pub fn unit(sign: Sign, base: u64, var: &str) -> Self {
        PowerTerm::new(sign, 1, base, var)
    }

    pub fn eval(&self, exp: u32) -> BigInt {
        let v = BigInt::from(self.coeff) * num_traits::pow(BigInt::from(self.base), exp as usize);
        match self.sign {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }

    /// Exponent `e` with `self.eval(e) == value`, if one exists.
    pub fn solve(&self, value: &BigInt) -> Option<u32> {
        let signed = match self.sign {
            Sign::Plus => value.clone(),
            Sign::Minus => -value.clone(),
        };
        let (q, r) = signed.div_rem(&BigInt::from(self.coeff));
        if !r.is_zero() {
            return None;
        }
        exact_log(&q, self.base)
    }
}

/// An equation `t_1 [+ t_2] = target` in one or two exponent variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEquation")]
pub struct PowerEquation {
    terms: Vec<PowerTerm>,
    target: i128,
}

#[derive(Deserialize)]
struct RawEquation {
    terms: Vec<PowerTerm>,
    target: i128,
}

impl TryFrom<RawEquation> for PowerEquation {
    type Error = Error;

    fn try_from(raw: RawEquation) -> Result<Self> {
        PowerEquation::new(raw.terms, raw.target)
    }
}

impl PowerEquation {
    pub fn new(terms: Vec<PowerTerm>, target: i128) -> Result<Self> {
        if terms.is_empty() || terms.len() > 2 {
            return Err(Error::InvalidInput(format!(
                "equations take one or two variable terms, got {}",
                terms.len()
            )));
        }
        let mut names = BTreeSet::new();
        for t in &terms {
            if t.base < 2 {
                return Err(Error::InvalidInput(format!("base {} must be >= 2", t.base)));
            }
            if t.coeff == 0 || t.coeff > (t.base / 2).max(1) {
                return Err(Error::InvalidInput(format!(
                    "coefficient {} outside 1..=floor({}/2)",
                    t.coeff, t.base
                )));
            }
            if t.var.is_empty() || !names.insert(t.var.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "variable {:?} must be non-empty and distinct",
                    t.var
                )));
            }
        }
        Ok(PowerEquation { terms, target })
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn target(&self) -> i128 {
        self.target
    }

    pub fn with_target(&self, target: i128) -> PowerEquation {
        PowerEquation {
            terms: self.terms.clone(),
            target,
        }
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    /// Left-hand side at the given exponents.
    pub fn lhs(&self, exps: &[u32]) -> BigInt {
        self.terms.iter().zip(exps).map(|(t, &e)| t.eval(e)).sum()
    }

    pub fn holds(&self, exps: &[u32]) -> bool {
        exps.len() == self.terms.len() && self.lhs(exps) == BigInt::from(self.target)
    }

    /// All solutions with term `fixed` pinned to exponent `exp`; exact and complete.
    pub fn solve_with_fixed(&self, fixed: usize, exp: u32) -> Vec<Vec<u32>> {
        let target = BigInt::from(self.target);
        match self.terms.len() {
            1 => {
                if self.terms[0].eval(exp) == target {
                    vec![vec![exp]]
                } else {
                    vec![]
                }
            }
            _ => {
                let other = 1 - fixed;
                let rest = target - self.terms[fixed].eval(exp);
                match self.terms[other].solve(&rest) {
                    Some(y) => {
                        let mut sol = vec![0; 2];
                        sol[fixed] = exp;
                        sol[other] = y;
                        vec![sol]
                    }
                    None => vec![],
                }
            }
        }
    }

    /// Whether every term is positive, or every term negative, so that a bounded scan is complete.
    pub fn same_signs(&self) -> bool {
        self.terms.iter().all(|t| t.sign == self.terms[0].sign)
    }
}

impl fmt::Display for PowerEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.sign) {
                (0, Sign::Plus) => {}
                (0, Sign::Minus) => write!(f, "-")?,
                (_, s) => write!(f, " {s} ")?,
            }
            if t.coeff != 1 {
                write!(f, "{}*", t.coeff)?;
            }
            write!(f, "{}^{}", t.base, t.var)?;
        }
        write!(f, " = {}", self.target)
    }
}

impl FromStr for PowerEquation {
    type Err = Error;

    /// Grammar: `[+-] [C*]B^V [ [+-] [C*]B^V ] = [+-]C`, whitespace-insensitive.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (lhs, rhs) = compact
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("missing '=' in {s:?}")))?;
        let target: i128 = rhs
            .parse()
            .map_err(|_| Error::Parse(format!("bad target {rhs:?}")))?;

        let mut pieces: Vec<(Sign, &str)> = Vec::new();
        let mut start = 0;
        let mut sign = Sign::Plus;
        let bytes = lhs.as_bytes();
        if let Some(&c) = bytes.first() {
            if c == b'+' || c == b'-' {
                sign = if c == b'-' { Sign::Minus } else { Sign::Plus };
                start = 1;
            }
        }
        for (i, &c) in bytes.iter().enumerate().skip(start) {
            if c == b'+' || c == b'-' {
                pieces.push((sign, &lhs[start..i]));
                sign = if c == b'-' { Sign::Minus } else { Sign::Plus };
                start = i + 1;
            }
        }
        pieces.push((sign, &lhs[start..]));

        let terms = pieces
            .into_iter()
            .map(|(sign, body)| parse_term(sign, body))
            .collect::<Result<Vec<_>>>()?;
        PowerEquation::new(terms, target)
    }
}

fn parse_term(sign: Sign, body: &str) -> Result<PowerTerm> {
    let bad = || Error::Parse(format!("bad term {body:?}: expected [C*]B^V"));
    let (coeff, power) = match body.split_once(['*', '·']) {
        Some((c, p)) => (c.parse::<u64>().map_err(|_| bad())?, p),
        None => (1, body),
    };
    let (base, var) = power.split_once('^').ok_or_else(bad)?;
    let base: u64 = base.parse().map_err(|_| bad())?;
    if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(bad());
    }
    if var.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!(
            "exponent in {body:?} must be a variable name, not a number"
        )));
    }
    Ok(PowerTerm::new(sign, coeff, base, var))
}
