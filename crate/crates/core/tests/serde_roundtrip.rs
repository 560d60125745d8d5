use serde::de::DeserializeOwned;
use serde::Serialize;

use powersum::bases::Bases;
use powersum::diophantine::{
    find_obstruction, verify_certificate, ObstructionCertificate, ObstructionSearch,
};
use powersum::lambda::{lambda_value, limit_point_census, LambdaOptions};
use powersum::search::{min_length_union, SearchOptions};

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(value: &T) {
    let text = serde_json::to_string(value).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, value);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn records_round_trip() {
    let bases = Bases::pair(13).unwrap();
    round_trip(&min_length_union(22, &bases, &SearchOptions::default()).unwrap());
    round_trip(&lambda_value(&bases, 3, &LambdaOptions::default()).unwrap());
    round_trip(&limit_point_census(3, 41, None, &LambdaOptions::default()).unwrap());
}

#[test]
fn certificates_replay_after_round_trip() {
    let eq = "2^a - 11^b = 23".parse().unwrap();
    let cert = find_obstruction(&eq, &ObstructionSearch::default()).unwrap();
    round_trip(&cert);
    let back: ObstructionCertificate =
        serde_json::from_str(&serde_json::to_string_pretty(&cert).unwrap()).unwrap();
    assert!(verify_certificate(&back).valid);
}
