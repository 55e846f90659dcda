use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssiarch_core::finding::rules;
use ssiarch_core::lifecycle_sim::{
    check_trace, parse_scenarios, run_scenario, EventKind, EventPayload, Outcome, PresentationRequest, Scenario,
    SimTrace, Toggles,
};
use ssiarch_core::builtin_kb;

const NAMES: [&str; 5] = ["name", "birthdate", "address", "license", "email"];

fn scenario(n_attrs: usize, requested: &[usize], toggles: Toggles) -> Scenario {
    let attributes: BTreeMap<String, String> = NAMES[..n_attrs]
        .iter()
        .enumerate()
        .map(|(i, k)| (k.to_string(), format!("value-{i}")))
        .collect();
    Scenario::new(
        "gov",
        "alice",
        "shop",
        attributes,
        PresentationRequest {
            verifier_id: "shop".into(),
            requested_attributes: requested.iter().map(|&i| NAMES[i].to_string()).collect(),
            purpose: "age check".into(),
        },
        toggles,
    )
    .unwrap()
}

/// Oracle for the outcome gate: AccessGranted appears iff a successful
/// signature check and a clear revocation check precede it.
fn gate_holds(t: &SimTrace) -> bool {
    let mut sig = false;
    let mut clear = false;
    for e in &t.events {
        match e.payload {
            EventPayload::SignatureVerified { success } => sig = success,
            EventPayload::RevocationChecked { revoked } => clear = !revoked,
            EventPayload::AccessGranted { .. } => return sig && clear,
            EventPayload::AccessDenied { .. } => return !(sig && clear),
            _ => {}
        }
    }
    false
}

#[test]
fn exhaustive_single_attribute_tampering() {
    let mut checked = 0;
    for n in 1..=5 {
        for req_mask in 1u32..(1 << n) {
            let requested: Vec<usize> = (0..n).filter(|i| req_mask & (1 << i) != 0).collect();
            for tampered in &NAMES[..n] {
                let t = run_scenario(&scenario(
                    n,
                    &requested,
                    Toggles {
                        tamper_attribute: Some((*tampered).into()),
                        ..Toggles::default()
                    },
                ));
                assert_eq!(
                    t.event(EventKind::SignatureVerified).unwrap().payload,
                    EventPayload::SignatureVerified { success: false }
                );
                assert_eq!(t.outcome, Outcome::Denied);
                assert!(gate_holds(&t));
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 1 + 2 * 3 + 3 * 7 + 4 * 15 + 5 * 31);
}

#[test]
fn happy_paths_disclose_exactly_the_request() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let kb = builtin_kb();
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let mut requested: Vec<usize> = (0..5).filter(|_| rng.gen_bool(0.4)).collect();
        if requested.is_empty() {
            requested.push(0);
        }
        let s = scenario(n, &requested, Toggles::default());
        let t = run_scenario(&s);
        assert_eq!(t.outcome, Outcome::Granted);
        assert!(check_trace(&t, &kb).unwrap().is_empty());
        let EventPayload::Presented { disclosed, .. } = &t.event(EventKind::Presented).unwrap().payload else {
            panic!("no presentation")
        };
        let credential: BTreeSet<String> = s.attributes().keys().cloned().collect();
        let expected: BTreeSet<String> =
            s.request().requested_attributes.intersection(&credential).cloned().collect();
        assert_eq!(disclosed, &expected);
    }
}

#[test]
fn random_toggle_combinations() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let kb = builtin_kb();
    for _ in 0..300 {
        let n = rng.gen_range(2..=5);
        let toggles = Toggles {
            skip_issuance_consent: rng.gen(),
            skip_presentation_consent: rng.gen(),
            tamper_attribute: rng.gen_bool(0.3).then(|| NAMES[rng.gen_range(0..n)].to_string()),
            revoke_before_presentation: rng.gen(),
            over_disclose: rng.gen(),
        };
        let t = run_scenario(&scenario(n, &[0], toggles.clone()));
        assert!(gate_holds(&t));
        let expect_granted = toggles.tamper_attribute.is_none() && !toggles.revoke_before_presentation;
        assert_eq!(t.outcome == Outcome::Granted, expect_granted);

        let rules_seen: BTreeSet<String> = check_trace(&t, &kb).unwrap().into_iter().map(|f| f.rule).collect();
        let mut expected = BTreeSet::new();
        if toggles.skip_issuance_consent {
            expected.insert(rules::SIM_NFR6_ISSUANCE.to_string());
        }
        if toggles.skip_presentation_consent {
            expected.insert(rules::SIM_NFR6_PRESENTATION.to_string());
        }
        if toggles.over_disclose {
            expected.insert(rules::SIM_NFR14_OVERDISCLOSURE.to_string());
        }
        assert_eq!(rules_seen, expected);
        assert_eq!(run_scenario(&t.scenario).export(), t.export());
    }
}

#[test]
fn scenario_file_round() {
    let text = "[scenario]\nissuer = gov\nowner = alice\nverifier = shop\nattributes = name=Alice, age=30\nrequest = age\ntoggles = skip_issuance_consent\n";
    let scenarios = parse_scenarios(text).unwrap();
    let t = run_scenario(&scenarios[0]);
    let f = check_trace(&t, &builtin_kb()).unwrap();
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].rule, rules::SIM_NFR6_ISSUANCE);
    assert_eq!(f[0].subject, "gov");
}
