//! `lambda_A(h)`: the smallest positive integer of minimal length exactly `h` over `A`.

use std::collections::BTreeMap;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::{check_base, Bases};
use crate::digits::length_hat;
use crate::error::{Error, Result};
use crate::search::{
    default_cap, single_base_bound, LengthCertificate, OracleTable, SearchContext, SearchOptions,
};
use crate::sets::member_s;
use crate::term::{checked_pow, total_weight, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMode {
    /// Minimality of the value proven by equation insolubility.
    FullyCertified,
    /// Minimality rests on the term cap.
    CapBounded,
}

/// A representation of `k` shorter than the target length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortRepresentation {
    pub k: i128,
    pub length: u32,
    pub witness: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaRecord {
    pub bases: Bases,
    pub h: u32,
    pub value: i128,
    pub witness: Vec<Term>,
    pub mode: LambdaMode,
    pub cap_stable: bool,
    pub certificate: LengthCertificate,
    /// One entry per `k` below the value.
    pub lower_bound_evidence: Vec<ShortRepresentation>,
}

#[derive(Clone, Debug, Default)]
pub struct LambdaOptions {
    pub search: SearchOptions,
    /// Largest `k` scanned; `None` uses 10 times the largest single-base estimate.
    pub ceiling: Option<i128>,
}

/// Closed-form `lambda_b(h)` for one base: `(2^(2h-1) + 1) / 3` for base 2, and
/// the odd-base formula at index `h` otherwise.
pub fn single_base_lambda(base: u64, h: u32) -> Result<i128> {
    check_base(base)?;
    if h == 0 {
        return Err(Error::InvalidInput("h must be >= 1".into()));
    }
    if base == 2 {
        let p = checked_pow(2, 2 * h - 1).ok_or(Error::Overflow("evaluating lambda_2"))?;
        return Ok((p + 1) / 3);
    }
    let half = ((base - 1) / 2) as u32;
    let layer = (h - 1) / half + 1;
    let j = (h - 1) % half + 1;
    Ok(lambda_closed_form_odd(base, layer, j)?.1)
}

/// `lambda_g(((h-1)(g-1) + 2j)/2) = ((2j-1) g^(h-1) + 1)/2`, returned as `(index, value)`.
pub fn lambda_closed_form_odd(g: u64, h: u32, j: u32) -> Result<(u32, i128)> {
    if g < 3 || g.is_multiple_of(2) {
        return Err(Error::InvalidBase(g));
    }
    if h == 0 {
        return Err(Error::InvalidInput("h must be >= 1".into()));
    }
    let half = (g - 1) / 2;
    if j == 0 || j as u64 > half {
        return Err(Error::InvalidInput(format!("j = {j} outside 1..={half}")));
    }
    let index = ((h as u64 - 1) * (g - 1) + 2 * j as u64) / 2;
    let value = checked_pow(g as i128, h - 1)
        .and_then(|p| p.checked_mul(2 * j as i128 - 1))
        .ok_or(Error::Overflow("evaluating the closed form"))?;
    Ok((index as u32, (value + 1) / 2))
}

fn default_ceiling(bases: &Bases, h: u32) -> Result<i128> {
    let mut best = 1;
    for b in bases.iter() {
        best = best.max(single_base_lambda(b, h)?);
    }
    best.checked_mul(10)
        .ok_or(Error::Overflow("computing the scan ceiling"))
}

/// Scans `k = 1, 2, ...` for the first `k` of length exactly `h`.
pub fn lambda_value(bases: &Bases, h: u32, opts: &LambdaOptions) -> Result<LambdaRecord> {
    lambda_value_in(&SearchContext::new(), bases, h, opts)
}

pub fn lambda_value_in(
    ctx: &SearchContext,
    bases: &Bases,
    h: u32,
    opts: &LambdaOptions,
) -> Result<LambdaRecord> {
    if h == 0 {
        return Err(Error::InvalidInput("h must be >= 1".into()));
    }
    let ceiling = match opts.ceiling {
        Some(c) => c,
        None => default_ceiling(bases, h)?,
    };
    let mut evidence = Vec::new();
    for k in 1..=ceiling {
        let upper = single_base_bound(k, bases)?;
        if upper.0 < h {
            evidence.push(ShortRepresentation {
                k,
                length: upper.0,
                witness: upper.1,
            });
            continue;
        }
        let cap = default_cap(k, bases, h).min(opts.search.max_cap);
        if let Some(w) = ctx.shorter_than(k, bases, h, cap, opts.search.node_limit)? {
            evidence.push(ShortRepresentation {
                k,
                length: total_weight(&w) as u32,
                witness: w,
            });
            continue;
        }
        let cert = ctx.min_length(k, bases, &opts.search)?;
        if cert.length < h {
            evidence.push(ShortRepresentation {
                k,
                length: cert.length,
                witness: cert.witness,
            });
            continue;
        }
        if cert.length > h {
            return Err(Error::Monotonicity {
                k,
                length: cert.length,
                h,
            });
        }
        let mode = if cert.exact && cert.lower_bound.is_some() {
            LambdaMode::FullyCertified
        } else {
            LambdaMode::CapBounded
        };
        return Ok(LambdaRecord {
            bases: bases.clone(),
            h,
            value: k,
            witness: cert.witness.clone(),
            mode,
            cap_stable: cert.cap_stable,
            certificate: cert,
            lower_bound_evidence: evidence,
        });
    }
    Err(Error::ScanCeiling { ceiling, h })
}

/// `lambda_{2,n}(3)` for the exceptional `n`.
pub const OUTLIERS: [(u64, i128); 8] = [
    (3, 21),
    (5, 19),
    (9, 19),
    (11, 23),
    (13, 22),
    (15, 21),
    (19, 22),
    (21, 26),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassCase {
    /// `n` outside `S` and not 11: the value is 11.
    OutsideS,
    /// `n` in `S` and not exceptional: the value is 13.
    InS,
    Outlier,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub n: u64,
    pub value: i128,
    pub case: ClassCase,
}

/// Predicted `lambda_{2,n}(3)` for odd `n > 1`.
pub fn classify_n(n: u64) -> Result<Classification> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("expected odd n > 1, got {n}")));
    }
    if let Some(&(_, v)) = OUTLIERS.iter().find(|(m, _)| *m == n) {
        return Ok(Classification {
            n,
            value: v,
            case: ClassCase::Outlier,
        });
    }
    Ok(if member_s(n)?.is_some() {
        Classification {
            n,
            value: 13,
            case: ClassCase::InS,
        }
    } else {
        Classification {
            n,
            value: 11,
            case: ClassCase::OutsideS,
        }
    })
}

/// Predicted `lambda_{2,n}(h)` for `h` in 1..=3.
pub fn predicted_lambda(n: u64, h: u32) -> Result<i128> {
    match h {
        1 => Ok(1),
        2 => Ok(if n == 3 { 5 } else { 3 }),
        3 => Ok(classify_n(n)?.value),
        _ => Err(Error::InvalidInput(format!("no prediction for h = {h}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub n: u64,
    pub value: i128,
    pub predicted: i128,
    pub mode: LambdaMode,
    pub cap_stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub h: u32,
    pub odd_range: (u64, u64),
    /// Value counts; for `h = 3` the exceptional `n` are counted under `outliers` instead.
    pub frequency: BTreeMap<i128, usize>,
    pub outliers: BTreeMap<u64, i128>,
    pub mismatches: Vec<CensusEntry>,
    pub fully_certified: usize,
    pub entries: Vec<CensusEntry>,
}

/// `lambda_{2,n}(h)` for every odd `n` in `[3, odd_max]`, compared with the predictions.
pub fn limit_point_census(
    h: u32,
    odd_max: u64,
    jobs: Option<usize>,
    opts: &LambdaOptions,
) -> Result<CensusReport> {
    if !(1..=3).contains(&h) {
        return Err(Error::InvalidInput(format!(
            "census supports h in 1..=3, got {h}"
        )));
    }
    if odd_max < 23 {
        return Err(Error::InvalidInput(format!(
            "odd_max must be >= 23, got {odd_max}"
        )));
    }
    let ns: Vec<u64> = (3..=odd_max).step_by(2).collect();
    let run = || -> Result<Vec<CensusEntry>> {
        ns.par_iter()
            .map(|&n| {
                let rec = lambda_value(&Bases::pair(n)?, h, opts)?;
                Ok(CensusEntry {
                    n,
                    value: rec.value,
                    predicted: predicted_lambda(n, h)?,
                    mode: rec.mode,
                    cap_stable: rec.cap_stable,
                })
            })
            .collect()
    };
    let entries = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    info!("census h={h} over {} odd n done", entries.len());

    let mut frequency = BTreeMap::new();
    let mut outliers = BTreeMap::new();
    for e in &entries {
        if h == 3 && OUTLIERS.iter().any(|(m, _)| *m == e.n) {
            outliers.insert(e.n, e.value);
        } else {
            *frequency.entry(e.value).or_insert(0) += 1;
        }
    }
    Ok(CensusReport {
        h,
        odd_range: (3, odd_max),
        frequency,
        outliers,
        mismatches: entries
            .iter()
            .filter(|e| e.value != e.predicted)
            .cloned()
            .collect(),
        fully_certified: entries
            .iter()
            .filter(|e| e.mode == LambdaMode::FullyCertified)
            .count(),
        entries,
    })
}

/// `lambda_g(index)` for every index whose value is at most `max_value`,
/// read off one oracle sweep over base `g` alone.
pub fn single_base_lambda_scan(g: u64, max_value: i128) -> Result<BTreeMap<u32, i128>> {
    check_base(g)?;
    if max_value < 1 {
        return Err(Error::InvalidInput("max_value must be >= 1".into()));
    }
    let bases = Bases::single(g)?;
    let mut h_max = 1;
    for k in 1..=max_value {
        h_max = h_max.max(length_hat(k, g)? as u32);
    }
    let cap = ((4 * g as i128 * max_value) as u128).next_power_of_two() as i128;
    let table = OracleTable::build(&bases, h_max, cap, 1, max_value)?;
    let mut first = BTreeMap::new();
    for k in 1..=max_value {
        let len = table
            .length(k)
            .ok_or(Error::InvalidInput(format!("oracle table misses k = {k}")))?;
        first.entry(len).or_insert(k);
    }
    Ok(first)
}
