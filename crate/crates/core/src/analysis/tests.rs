use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::adversary::{full_mitm, no_attack};
use crate::protocol::{run_session, SessionConfig};

fn batch(strategy: &str, count: u64, seed: u64) -> Vec<crate::protocol::SessionTranscript> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let bit = u8::from(rng.random::<bool>());
            let mut eve: Box<dyn crate::adversary::AttackStrategy> =
                if strategy == "mitm" { Box::new(full_mitm()) } else { Box::new(no_attack()) };
            run_session(&SessionConfig::default(), bit, eve.as_mut(), i, &mut rng).unwrap()
        })
        .collect()
}

#[test]
fn honest_qber_is_zero() {
    let ts = batch("none", 2000, 1);
    let r = qber(&ts).unwrap();
    assert_eq!(r.value, 0.0);
    assert!(r.ci_high < 4.0 / 2000.0);
}

#[test]
fn mitm_accuracy_and_information() {
    let ts = batch("mitm", 2000, 2);
    assert_eq!(eve_accuracy(&ts).unwrap().value, 1.0);
    assert_eq!(qber(&ts).unwrap().value, 0.0);
    let mi = eve_mutual_information(&ts).unwrap();
    assert!((mi - 1.0).abs() < 0.01, "{mi}");
}

#[test]
fn no_attack_information_is_zero() {
    let ts = batch("none", 2000, 3);
    assert_eq!(eve_mutual_information(&ts).unwrap(), 0.0);
    assert!(ts.iter().all(|t| eve_outcome_tuple(t).is_empty()));
}

#[test]
fn empty_inputs_rejected() {
    assert!(qber(&[]).is_err());
    assert!(eve_accuracy(&[]).is_err());
}

#[test]
fn summary_csv_has_documented_columns() {
    let ts = batch("none", 100, 4);
    let s = summarize("no_attack", 1, 1, &ts, vec![0.01, 0.02, 0.03], 9, "abc").unwrap();
    assert_eq!(s.sessions, 100);
    let mut buf = Vec::new();
    ExperimentSummary::write_csv(std::slice::from_ref(&s), &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), CSV_COLUMNS.len());
    assert_eq!(row[0], "no_attack");
    assert_eq!(row[15], "0.010000;0.020000;0.030000");
    let back: ExperimentSummary = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
}
