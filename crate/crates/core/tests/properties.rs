use proptest::prelude::*;

use powersum::bases::Bases;
use powersum::digits::{evaluate, expand, expand_binary_special, length_hat};
use powersum::diophantine::{
    find_obstruction, verify_certificate, ObstructionSearch, PowerEquation, PowerTerm, Sign,
};
use powersum::search::{brute_force_oracle, min_length_union, OracleTable, SearchOptions};
use powersum::term::{sum_terms, total_weight};

fn odd_base() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), (1u64..20).prop_map(|x| 2 * x + 1)]
}

proptest! {
    #[test]
    fn expansion_round_trips(k in 1i128..=1_000_000, g in odd_base()) {
        let e = expand(k, g).unwrap();
        prop_assert_eq!(evaluate(&e), k.into());
        prop_assert_eq!(sum_terms(&e.terms()), Some(k));
        let bound = (g / 2).max(1);
        for &c in e.digits().values() {
            prop_assert!(c != 0 && c.unsigned_abs() <= bound);
        }
    }

    #[test]
    fn binary_form_is_non_adjacent(k in 1i128..=100_000) {
        let e = expand_binary_special(k).unwrap();
        prop_assert!(e.is_non_adjacent());
        let exps: Vec<u32> = e.digits().keys().copied().collect();
        prop_assert!(exps.windows(2).all(|w| w[1] >= w[0] + 2));
    }

    #[test]
    fn union_never_exceeds_single_bases(k in 1i128..=2000, n in 1u64..15) {
        let bases = Bases::pair(2 * n + 1).unwrap();
        let cert = min_length_union(k, &bases, &SearchOptions::default()).unwrap();
        prop_assert!(cert.witness_is_valid());
        prop_assert_eq!(total_weight(&cert.witness), cert.length as u64);
        for b in bases.iter() {
            prop_assert!(u64::from(cert.length) <= length_hat(k, b).unwrap());
        }
    }

    #[test]
    fn search_matches_oracle(k in 1i128..=200, set in 0usize..3) {
        let bases: Bases = ["2,3", "2,7", "3,5"][set].parse().unwrap();
        let cert = min_length_union(k, &bases, &SearchOptions::default()).unwrap();
        let oracle = brute_force_oracle(k, &bases, cert.length + 1, 2 * cert.cap_used).unwrap();
        prop_assert_eq!(oracle, Some(cert.length));
    }

    #[test]
    fn single_base_search_is_the_expansion(
        k in 1i128..=2000,
        g in prop::sample::select(vec![2u64, 3, 5, 7, 9]),
    ) {
        let cert = min_length_union(k, &Bases::single(g).unwrap(), &SearchOptions::default()).unwrap();
        prop_assert_eq!(u64::from(cert.length), length_hat(k, g).unwrap());
    }

    #[test]
    fn emitted_certificates_replay(
        g in (1u64..12).prop_map(|x| 2 * x + 1),
        c in -60i128..=60,
        minus in any::<bool>(),
    ) {
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let eq = PowerEquation::new(
            vec![PowerTerm::unit(Sign::Plus, 2, "a"), PowerTerm::unit(sign, g, "b")],
            c,
        ).unwrap();
        let search = ObstructionSearch { ceiling: 200, ..ObstructionSearch::default() };
        if let Ok(cert) = find_obstruction(&eq, &search) {
            prop_assert!(verify_certificate(&cert).valid);
            prop_assert!(cert.solutions().is_empty());
            if let Some(&r) = cert.lhs_residues.first() {
                let mut tampered = cert.clone();
                tampered.target_residue = r;
                prop_assert!(!verify_certificate(&tampered).valid);
            }
        }
    }
}

#[test]
fn expansions_are_minimal_against_the_oracle() {
    for g in [2u64, 3, 5, 7, 9] {
        let lengths: Vec<u64> = (1..=2000).map(|k| length_hat(k, g).unwrap()).collect();
        let h_max = *lengths.iter().max().unwrap() as u32;
        let cap = (4 * g as u128 * 2000).next_power_of_two() as i128;
        let table = OracleTable::build(&Bases::single(g).unwrap(), h_max, cap, 1, 2000).unwrap();
        for (k, &len) in (1..=2000i128).zip(&lengths) {
            assert_eq!(
                table.length(k).map(u64::from),
                Some(len),
                "k = {k}, base {g}"
            );
        }
    }
}
