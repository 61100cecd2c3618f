use garside::builders::{classical_artin, dual_artin, load_germ, save_germ, CoxeterSpec, GermFileError};
use garside::Violation;

const DUAL_A2: &str = include_str!("fixtures/dual_a2.json");

fn saved(spec: CoxeterSpec, dual: bool) -> String {
    let g = if dual { dual_artin(spec) } else { classical_artin(spec) }.unwrap();
    let mut buf = Vec::new();
    save_germ(&g, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn dual_a2_matches_fixture_byte_for_byte() {
    assert_eq!(saved(CoxeterSpec::A(2), true), DUAL_A2);
}

#[test]
fn fixture_loads_to_the_built_germ() {
    let g = load_germ(DUAL_A2.as_bytes()).unwrap();
    assert_eq!(g, dual_artin(CoxeterSpec::A(2)).unwrap());
}

#[test]
fn saving_is_deterministic() {
    for spec in [CoxeterSpec::A(3), CoxeterSpec::I2(4)] {
        assert_eq!(saved(spec, false), saved(spec, false));
        assert_eq!(saved(spec, true), saved(spec, true));
    }
}

#[test]
fn shuffled_file_loads_to_the_same_germ() {
    let mut v: serde_json::Value = serde_json::from_str(DUAL_A2).unwrap();
    v["simples"].as_array_mut().unwrap().reverse();
    v["product"].as_array_mut().unwrap().rotate_left(1);
    let g = load_germ(v.to_string().as_bytes()).unwrap();
    assert_eq!(g, load_germ(DUAL_A2.as_bytes()).unwrap());
}

#[test]
fn round_trip_classical_a2() {
    let text = saved(CoxeterSpec::A(2), false);
    let g = load_germ(text.as_bytes()).unwrap();
    assert_eq!(g, classical_artin(CoxeterSpec::A(2)).unwrap());
}

#[test]
fn validation_errors_carry_witnesses() {
    let missing = DUAL_A2.replace("\"(23)\", \"1\"]", "\"(23)\"]");
    match load_germ(missing.as_bytes()) {
        Err(GermFileError::Invalid(v)) => assert!(v.contains(&Violation::MissingIdentity)),
        other => panic!("unexpected {other:?}"),
    }
    let broken = DUAL_A2.replace("[\"(13)\", \"(12)\", \"(123)\"]", "[\"(13)\", \"(12)\", \"(23)\"]");
    assert!(matches!(load_germ(broken.as_bytes()), Err(GermFileError::Invalid(_))));
}
