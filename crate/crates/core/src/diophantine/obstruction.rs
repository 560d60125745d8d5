//! Modular obstructions for equations `+-c1*b1^x +- c2*b2^y = t`.
//!
//! Above per-variable exponent floors each term runs through a finite residue
//! cycle mod `m`. If `t mod m` is not a sum of attainable residues, no solution
//! has every exponent at or above its floor. Exponents below a floor are settled
//! one at a time: fixing one exponent leaves a single power to test exactly.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::equation::{PowerEquation, PowerTerm, Sign};

/// Moduli tried before the general sweep, in this order.
pub const DEFAULT_MODULI: [u64; 6] = [4, 8, 15, 91, 133, 2];

/// The eventually periodic sequence `base^e mod modulus`, `e >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerOrbit {
    pub base: u64,
    pub modulus: u64,
    /// First exponent from which the sequence is periodic.
    pub preperiod: u32,
    pub period: u32,
}

impl PowerOrbit {
    pub fn compute(base: u64, modulus: u64) -> PowerOrbit {
        let m = modulus as usize;
        let mut first_seen = vec![u32::MAX; m];
        let mut r = 1 % modulus;
        let mut e = 0u32;
        loop {
            let slot = &mut first_seen[r as usize];
            if *slot != u32::MAX {
                return PowerOrbit {
                    base,
                    modulus,
                    preperiod: *slot,
                    period: e - *slot,
                };
            }
            *slot = e;
            r = mulmod(r, base % modulus, modulus);
            e += 1;
        }
    }

    /// Powers eventually vanish mod m.
    pub fn is_nilpotent(&self) -> bool {
        self.period == 1 && pow_mod(self.base, self.preperiod, self.modulus) == 0
    }

    /// Pure cycle through 1, i.e. the base is a unit.
    pub fn is_unit(&self) -> bool {
        self.preperiod == 0
    }
}

/// Result of fixing one variable below its floor and solving for the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BelowFloorCheck {
    pub variable: String,
    pub exponent: u32,
    /// Complete solutions with that exponent fixed; empty for a non-solution.
    pub solutions: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    pub equation: PowerEquation,
    pub modulus: u64,
    pub floors: Vec<u32>,
    pub periods: Vec<PowerOrbit>,
    /// Residues mod m attained by the left side with every exponent at or above its floor.
    pub lhs_residues: Vec<u64>,
    pub target_residue: u64,
    pub below_floor_scan: Vec<BelowFloorCheck>,
}

impl ObstructionCertificate {
    /// Every solution of the equation, as recorded by the below-floor scan.
    pub fn solutions(&self) -> Vec<Vec<u32>> {
        let set: BTreeSet<Vec<u32>> = self
            .below_floor_scan
            .iter()
            .flat_map(|c| c.solutions.iter().cloned())
            .collect();
        set.into_iter().collect()
    }

    /// The certificate replays and no below-floor assignment solves the equation.
    pub fn proves_insoluble(&self) -> bool {
        verify_certificate(self).valid && self.solutions().is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    BadShape,
    PeriodMismatch,
    ResidueMismatch,
    TargetMismatch,
    TargetAttainable,
    BelowFloorMismatch,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::BadShape => "bad shape",
            RejectReason::PeriodMismatch => "period mismatch",
            RejectReason::ResidueMismatch => "residue mismatch",
            RejectReason::TargetMismatch => "target mismatch",
            RejectReason::TargetAttainable => "target attainable",
            RejectReason::BelowFloorMismatch => "below-floor mismatch",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<RejectReason>,
}

impl CertificateCheck {
    fn ok() -> Self {
        CertificateCheck {
            valid: true,
            reason: None,
        }
    }

    fn reject(reason: RejectReason) -> Self {
        CertificateCheck {
            valid: false,
            reason: Some(reason),
        }
    }
}

/// Knobs for [`find_obstruction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionSearch {
    /// Per-variable exponent floors; `None` means start at zero.
    pub floors: Option<Vec<u32>>,
    /// Moduli tried first, in order.
    pub candidates: Vec<u64>,
    /// Largest modulus considered.
    pub ceiling: u64,
}

impl Default for ObstructionSearch {
    fn default() -> Self {
        ObstructionSearch {
            floors: None,
            candidates: DEFAULT_MODULI.to_vec(),
            ceiling: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ObstructionFailure {
    /// An assignment below the floors solves the equation.
    Soluble {
        solution: Vec<u32>,
    },
    NoneFound {
        ceiling: u64,
    },
}

impl fmt::Display for ObstructionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObstructionFailure::Soluble { solution } => {
                write!(f, "equation is soluble at exponents {solution:?}")
            }
            ObstructionFailure::NoneFound { ceiling } => {
                write!(f, "no obstruction found with modulus <= {ceiling}")
            }
        }
    }
}

/// Finds a certificate that the equation has no solutions at all.
pub fn find_obstruction(
    eq: &PowerEquation,
    search: &ObstructionSearch,
) -> Result<ObstructionCertificate, ObstructionFailure> {
    search_certificate(eq, search, false)
}

/// Candidate moduli in trial order: the configured list, then moduli where
/// every base is a unit or some base is nilpotent, then the rest.
pub fn modulus_order(eq: &PowerEquation, search: &ObstructionSearch) -> Vec<u64> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &m in &search.candidates {
        if m >= 2 && m <= search.ceiling && seen.insert(m) {
            out.push(m);
        }
    }
    let mut rest = Vec::new();
    for m in 2..=search.ceiling {
        if seen.contains(&m) {
            continue;
        }
        let orbits: Vec<PowerOrbit> = eq
            .terms()
            .iter()
            .map(|t| PowerOrbit::compute(t.base, m))
            .collect();
        let preferred =
            orbits.iter().all(PowerOrbit::is_unit) || orbits.iter().any(PowerOrbit::is_nilpotent);
        if preferred {
            out.push(m);
        } else {
            rest.push(m);
        }
    }
    out.extend(rest);
    out
}

/// Like [`find_obstruction`], but with `allow_solutions` the below-floor scan
/// may contain solutions, giving a complete description of a soluble equation.
pub(crate) fn search_certificate(
    eq: &PowerEquation,
    search: &ObstructionSearch,
    allow_solutions: bool,
) -> Result<ObstructionCertificate, ObstructionFailure> {
    let n = eq.arity();
    let base_floors = match &search.floors {
        Some(f) if f.len() == n => f.clone(),
        _ => vec![0; n],
    };
    let mut scans: Vec<Vec<BelowFloorCheck>> = vec![Vec::new(); n];

    for m in modulus_order(eq, search) {
        let orbits: Vec<PowerOrbit> = eq
            .terms()
            .iter()
            .map(|t| PowerOrbit::compute(t.base, m))
            .collect();
        let raised: Vec<u32> = base_floors
            .iter()
            .zip(&orbits)
            .map(|(&f, o)| f.max(o.preperiod))
            .collect();
        let mut attempts = vec![base_floors.clone()];
        if raised != base_floors {
            attempts.push(raised);
        }
        for floors in attempts {
            let sets: Vec<Vec<u64>> = eq
                .terms()
                .iter()
                .zip(&orbits)
                .zip(&floors)
                .map(|((t, o), &f)| term_residues(t, o, f))
                .collect();
            let target = residue(eq.target(), m);
            if attains(&sets, target, m) {
                continue;
            }
            if let Err(sol) = extend_scan(eq, &floors, &mut scans, allow_solutions) {
                return Err(ObstructionFailure::Soluble { solution: sol });
            }
            let below_floor_scan = scans
                .iter()
                .zip(&floors)
                .flat_map(|(checks, &f)| checks.iter().take(f as usize).cloned())
                .collect();
            return Ok(ObstructionCertificate {
                equation: eq.clone(),
                modulus: m,
                floors,
                periods: orbits,
                lhs_residues: sumset(&sets, m),
                target_residue: target,
                below_floor_scan,
            });
        }
    }
    Err(ObstructionFailure::NoneFound {
        ceiling: search.ceiling,
    })
}

/// Extends the per-variable below-floor checks up to `floors`, stopping at the
/// first solution unless solutions are allowed.
fn extend_scan(
    eq: &PowerEquation,
    floors: &[u32],
    scans: &mut [Vec<BelowFloorCheck>],
    allow_solutions: bool,
) -> Result<(), Vec<u32>> {
    for (i, &f) in floors.iter().enumerate() {
        for e in scans[i].len() as u32..f {
            let sols = eq.solve_with_fixed(i, e);
            if !allow_solutions {
                if let Some(s) = sols.first() {
                    return Err(s.clone());
                }
            }
            scans[i].push(BelowFloorCheck {
                variable: eq.terms()[i].var.clone(),
                exponent: e,
                solutions: sols,
            });
        }
    }
    Ok(())
}

/// Independent replay: recomputes orbits, residues and the below-floor scan.
pub fn verify_certificate(cert: &ObstructionCertificate) -> CertificateCheck {
    let eq = &cert.equation;
    let m = cert.modulus;
    let n = eq.arity();
    if m < 2 || cert.floors.len() != n || cert.periods.len() != n {
        return CertificateCheck::reject(RejectReason::BadShape);
    }
    for (t, o) in eq.terms().iter().zip(&cert.periods) {
        if o.base != t.base || o.modulus != m || !orbit_is_exact(o) {
            return CertificateCheck::reject(RejectReason::PeriodMismatch);
        }
    }
    // Residues from the first `preperiod + period` powers above each floor, by direct powering.
    let sets: Vec<Vec<u64>> = eq
        .terms()
        .iter()
        .zip(&cert.periods)
        .zip(&cert.floors)
        .map(|((t, o), &f)| {
            let hi = f.max(o.preperiod) + o.period;
            let set: BTreeSet<u64> = (f..hi)
                .map(|e| signed_residue(t, pow_mod(t.base, e, m), m))
                .collect();
            set.into_iter().collect()
        })
        .collect();
    let lhs = sumset(&sets, m);
    if lhs != cert.lhs_residues {
        return CertificateCheck::reject(RejectReason::ResidueMismatch);
    }
    if residue(eq.target(), m) != cert.target_residue {
        return CertificateCheck::reject(RejectReason::TargetMismatch);
    }
    if lhs.binary_search(&cert.target_residue).is_ok() {
        return CertificateCheck::reject(RejectReason::TargetAttainable);
    }
    let mut expected = Vec::new();
    for (i, &f) in cert.floors.iter().enumerate() {
        for e in 0..f {
            expected.push(BelowFloorCheck {
                variable: eq.terms()[i].var.clone(),
                exponent: e,
                solutions: eq.solve_with_fixed(i, e),
            });
        }
    }
    if expected != cert.below_floor_scan {
        return CertificateCheck::reject(RejectReason::BelowFloorMismatch);
    }
    CertificateCheck::ok()
}

/// Checks preperiod and period against the definition: `b^(mu+lambda) = b^mu`
/// and no earlier repeat.
fn orbit_is_exact(o: &PowerOrbit) -> bool {
    if o.period == 0 || o.modulus < 2 {
        return false;
    }
    let m = o.modulus;
    let upto = (o.preperiod + o.period) as usize;
    if upto > m as usize {
        return false;
    }
    let seq: Vec<u64> = (0..=upto as u32).map(|e| pow_mod(o.base, e, m)).collect();
    let distinct: BTreeSet<u64> = seq[..upto].iter().copied().collect();
    distinct.len() == upto && seq[upto] == seq[o.preperiod as usize]
}

fn term_residues(t: &PowerTerm, o: &PowerOrbit, floor: u32) -> Vec<u64> {
    let m = o.modulus;
    let hi = floor.max(o.preperiod) + o.period;
    let mut r = pow_mod(t.base, floor, m);
    let mut set = BTreeSet::new();
    for _ in floor..hi {
        set.insert(signed_residue(t, r, m));
        r = mulmod(r, t.base % m, m);
    }
    set.into_iter().collect()
}

fn signed_residue(t: &PowerTerm, power: u64, m: u64) -> u64 {
    let v = mulmod(t.coeff % m, power, m);
    match t.sign {
        Sign::Plus => v,
        Sign::Minus => (m - v) % m,
    }
}

fn attains(sets: &[Vec<u64>], target: u64, m: u64) -> bool {
    match sets {
        [a] => a.binary_search(&target).is_ok(),
        [a, b] => {
            let mut in_b = vec![false; m as usize];
            for &y in b {
                in_b[y as usize] = true;
            }
            a.iter().any(|&x| in_b[((target + m - x) % m) as usize])
        }
        _ => unreachable!("equations have one or two terms"),
    }
}

fn sumset(sets: &[Vec<u64>], m: u64) -> Vec<u64> {
    match sets {
        [a] => a.clone(),
        [a, b] => {
            let set: BTreeSet<u64> = a
                .iter()
                .flat_map(|&x| b.iter().map(move |&y| (x + y) % m))
                .collect();
            set.into_iter().collect()
        }
        _ => unreachable!("equations have one or two terms"),
    }
}

fn residue(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(base: u64, exp: u32, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}
