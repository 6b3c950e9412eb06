use jordpack_core::fixtures::{parse_fixtures, verify};
use jordpack_core::registry::BUILTIN_TOML;
use jordpack_core::Registry;

#[test]
fn shipped_fixtures() {
    let reg = Registry::builtin();
    let fixtures = parse_fixtures(BUILTIN_TOML).unwrap();
    let outcomes = verify(&reg, &fixtures, &[]);
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.anchor.as_str())
        .collect();
    // The two published figures that disagree with the exact count.
    assert_eq!(
        failed,
        ["ex-sp(2)", "complementary series count for Sp(340)"]
    );
    for anchor in [
        "ex-ort(1)",
        "ex-ort(2)",
        "ex-ort(3)",
        "ex-ort(5)",
        "ex-symp(1)",
        "ex-symp(2)",
        "ex-symp(3)",
        "ex-symp(4)",
        "ex-triv",
        "ex-triv+",
        "ex-3",
    ] {
        assert!(
            outcomes.iter().any(|o| o.anchor == anchor && o.passed),
            "{anchor}"
        );
    }
}

#[test]
fn corrupted_fixture_is_reported() {
    let text = BUILTIN_TOML.replacen(
        "cuspidal_characters = [\"+-\", \"--\"]",
        "cuspidal_characters = [\"++\", \"--\"]",
        1,
    );
    assert_ne!(text, BUILTIN_TOML);
    let reg = Registry::from_toml_str(&text).unwrap();
    let outcomes = verify(
        &reg,
        &parse_fixtures(&text).unwrap(),
        &["packet".to_string()],
    );
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.anchor.as_str())
        .collect();
    assert_eq!(failed, ["ex-symp(2)"]);
}
