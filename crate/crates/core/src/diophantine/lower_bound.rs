//! Lower bounds on union length by equation insolubility.
//!
//! A representation of weight `w` splits into `w` unit terms `+-b^j`, so `k`
//! has length at least `L` exactly when no sum of fewer than `L` signed unit
//! powers equals `k`. For `L <= 3` that is a finite list of one- and
//! two-term exponential equations, each settled by [`solve_equation`].

use serde::{Deserialize, Serialize};

use super::equation::{PowerEquation, PowerTerm, Sign};
use super::obstruction::{verify_certificate, ObstructionSearch};
use super::{solve_equation, SolutionSet, SolveMethod};
use crate::bases::Bases;
use crate::error::Result;
use crate::term::Term;

/// Largest length whose lower bound can be proven this way.
pub const MAX_PROVABLE_LENGTH: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyOutcome {
    Insoluble,
    Soluble,
    Undecided,
}

/// One equation family `s1*b1^x [+ s2*b2^y] = k` and how it was settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub equation: PowerEquation,
    pub outcome: FamilyOutcome,
    pub result: SolutionSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundProof {
    pub k: i128,
    pub bases: Bases,
    /// Proven: no representation of `k` has length below this.
    pub min_length: u32,
    pub families: Vec<FamilyCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LowerBound {
    Proven {
        proof: LowerBoundProof,
    },
    /// A shorter representation exists.
    Refuted {
        witness: Vec<Term>,
    },
    Unknown {
        reason: String,
    },
}

/// Equation families whose insolubility means `length(k) >= min_length`.
pub fn families(k: i128, bases: &Bases, min_length: u32) -> Vec<PowerEquation> {
    let mut out = Vec::new();
    let signs = [Sign::Plus, Sign::Minus];
    if min_length >= 2 {
        for b in bases.iter() {
            for s in signs {
                out.push(eq(vec![PowerTerm::unit(s, b, "x")], k));
            }
        }
    }
    if min_length >= 3 {
        let bs = bases.as_slice();
        for (i, &b1) in bs.iter().enumerate() {
            for &b2 in &bs[i..] {
                for s1 in signs {
                    for s2 in signs {
                        // same base: the pattern (-, +) mirrors (+, -)
                        if b1 == b2 && s1 == Sign::Minus && s2 == Sign::Plus {
                            continue;
                        }
                        out.push(eq(
                            vec![PowerTerm::unit(s1, b1, "x"), PowerTerm::unit(s2, b2, "y")],
                            k,
                        ));
                    }
                }
            }
        }
    }
    out
}

fn eq(terms: Vec<PowerTerm>, k: i128) -> PowerEquation {
    PowerEquation::new(terms, k).expect("families are well formed")
}

/// Tries to prove that every representation of `k` over `bases` has length at least `min_length`.
pub fn prove_length_at_least(
    k: i128,
    bases: &Bases,
    min_length: u32,
    search: &ObstructionSearch,
) -> Result<LowerBound> {
    if min_length > MAX_PROVABLE_LENGTH {
        return Ok(LowerBound::Unknown {
            reason: format!("lengths above {MAX_PROVABLE_LENGTH} are not equation-certified"),
        });
    }
    let mut checks = Vec::new();
    for equation in families(k, bases, min_length) {
        let result = solve_equation(&equation, search)?;
        let outcome = classify(&result);
        match outcome {
            FamilyOutcome::Soluble => {
                let witness = witness_terms(&equation, &result.solutions[0]);
                return Ok(LowerBound::Refuted { witness });
            }
            FamilyOutcome::Undecided => {
                return Ok(LowerBound::Unknown {
                    reason: format!("could not decide {equation}"),
                });
            }
            FamilyOutcome::Insoluble => checks.push(FamilyCheck {
                equation,
                outcome,
                result,
            }),
        }
    }
    Ok(LowerBound::Proven {
        proof: LowerBoundProof {
            k,
            bases: bases.clone(),
            min_length,
            families: checks,
        },
    })
}

fn classify(set: &SolutionSet) -> FamilyOutcome {
    if !set.solutions.is_empty() || set.infinite_family.is_some() {
        FamilyOutcome::Soluble
    } else if set.complete {
        FamilyOutcome::Insoluble
    } else {
        FamilyOutcome::Undecided
    }
}

fn witness_terms(eq: &PowerEquation, exps: &[u32]) -> Vec<Term> {
    eq.terms()
        .iter()
        .zip(exps)
        .map(|(t, &e)| Term::new(t.sign.factor() * t.coeff as i64, t.base, e))
        .collect()
}

/// Replays a proof: the family list must be the required one, and each family
/// must be re-derived as insoluble, with certificates checked independently.
pub fn verify_lower_bound(proof: &LowerBoundProof) -> bool {
    if proof.min_length > MAX_PROVABLE_LENGTH {
        return false;
    }
    let expected = families(proof.k, &proof.bases, proof.min_length);
    if expected.len() != proof.families.len() {
        return false;
    }
    expected.iter().zip(&proof.families).all(|(want, check)| {
        if &check.equation != want || check.outcome != FamilyOutcome::Insoluble {
            return false;
        }
        let r = &check.result;
        if !r.complete || !r.solutions.is_empty() || r.infinite_family.is_some() {
            return false;
        }
        match (&r.method, &r.certificate) {
            (SolveMethod::ObstructionBounded, Some(cert)) => {
                &cert.equation == want && cert.proves_insoluble() && verify_certificate(cert).valid
            }
            (SolveMethod::ObstructionBounded, None) => false,
            _ => solve_equation(want, &ObstructionSearch::default())
                .map(|again| classify(&again) == FamilyOutcome::Insoluble)
                .unwrap_or(false),
        }
    })
}
