use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn jordpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jordpack"))
        .args(args)
        .env_remove("JORDPACK_REGISTRY")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = jordpack(&full);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    assert_eq!(v["schema"], 1);
    v
}

fn temp_registry(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("jordpack-{}-{name}.toml", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn count_examples() {
    assert_eq!(
        stdout(&jordpack(&["count", "--family", "Sp", "--rank", "0"])),
        "1\n"
    );
    assert_eq!(
        stdout(&jordpack(&[
            "count",
            "--family",
            "Sp",
            "--rank",
            "170",
            "--isolated"
        ])),
        "11322187942\n"
    );
    assert_eq!(
        stdout(&jordpack(&["count", "--family", "sp", "--rank", "170"])),
        "586385730874\n"
    );
    assert_eq!(
        json(&["count", "--family", "SO", "--rank", "3"])["count"],
        "6"
    );
}

#[test]
fn packet_reports() {
    let v = json(&["packet", "Sp4: triv:1, triv:3, triv:5"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 4);
    assert_eq!(v["cuspidal"], 1);
    assert_eq!(v["minimal_parabolic"], 3);
    let v = json(&["packet", "SO3: psi1:2, psi2:2, psi3:2"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 4);
    assert_eq!(v["cuspidal"], 0);
}

#[test]
fn ex_symp_4_descriptor() {
    let v = json(&["packet", "Sp6: triv:1, rho:2, rho:4", "--character", "+-"]);
    let e = &v["elements"][0];
    assert_eq!(e["signs"], "+-");
    assert_eq!(
        e["gl_factors"],
        serde_json::json!(["[1/2, 1/2]_rho", "[3/2, 3/2]_rho"])
    );
    assert_eq!(e["base_jord"], "{rho:2, triv:1}");
}

#[test]
fn bad_input_is_diagnosed() {
    let o = jordpack(&["packet", "Sp4: triv:1, triv:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate"));

    let o = jordpack(&["packet", "Sp1: triv:1, psi1:1, psi2:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(c)"));

    let o = jordpack(&["count", "--family", "GL", "--rank", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = jordpack(&["enumerate", "--family", "Sp", "--rank", "21"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_roundtrips_and_is_deterministic() {
    let v = json(&["packet", "Sp2: triv:1, psi1:1, psi1:3"]);
    let jord = v["jord"].as_str().unwrap().to_string();
    let again = json(&["packet", &jord]);
    assert_eq!(v, again);
    let v = json(&["enumerate", "--family", "Sp", "--rank", "4", "--jordan"]);
    for row in v["parameters"].as_array().unwrap() {
        let j = row["jord"].as_str().unwrap();
        let w = json(&["character", j]);
        assert_eq!(w["jord"], j);
    }
}

#[test]
fn every_subcommand_speaks_json() {
    json(&["count", "--family", "Sp", "--rank", "5"]);
    json(&["enumerate", "--family", "SO", "--rank", "3"]);
    json(&["packet", "SO2: psi1:2, psi2:2"]);
    json(&["character", "SO2: psi1:2, psi2:2", "--signs=--"]);
    json(&["reducibility", "--jord", "Sp0: triv:1", "--rho", "triv"]);
    json(&["reducibility", "--dataset", "triv-over-SO1", "--max-m", "5"]);
    json(&["reducibility", "--rho", "triv", "--point", "3/2"]);
    json(&["speh", "--l", "1", "--m", "2"]);
    json(&["antipodes", "--family", "SO", "--rank", "2"]);
    json(&["verify", "--only", "speh"]);
}

#[test]
fn reducibility_tables() {
    let v = json(&[
        "reducibility",
        "--jord",
        "Sp1: triv:3",
        "--rho",
        "triv",
        "--max-m",
        "50",
    ]);
    for row in v["rows"].as_array().unwrap() {
        let m = row["m"].as_u64().unwrap();
        assert_eq!(row["reducible"], m % 2 == 1 && m != 3, "m={m}");
    }
    let v = json(&["reducibility", "--rho", "psi1", "--point", "5/2"]);
    assert_eq!(v["blocks"], serde_json::json!([4, 2]));
}

#[test]
fn speh_two_by_two() {
    let o = jordpack(&["speh", "--l", "1", "--m", "2"]);
    assert!(stdout(&o).contains("+ {[1/2, 1/2], [-1/2, -1/2]} - {[-1/2, 1/2]}"));
}

#[test]
fn antipodes_routes() {
    let v = json(&["antipodes", "--family", "Sp", "--max-rank", "10"]);
    for row in v["ranks"].as_array().unwrap() {
        let n = row["rank"].as_u64().unwrap();
        assert_eq!(row["agree"], true);
        assert_eq!(row["arithmetic"]["exists"], n % 2 == 0);
    }
    let o = jordpack(&["verify", "--only", "antipodes"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn verify_shipped_registry() {
    let o = jordpack(&["--json", "verify"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failed"], 2);
    let failed: Vec<&str> = v["outcomes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|o| o["passed"] == false)
        .map(|o| o["anchor"].as_str().unwrap())
        .collect();
    assert_eq!(
        failed,
        ["ex-sp(2)", "complementary series count for Sp(340)"]
    );
}

#[test]
fn verify_negative_control() {
    let text = jordpack_core::registry::BUILTIN_TOML.replacen(
        "cuspidal_characters = [\"+-\", \"--\"]",
        "cuspidal_characters = [\"++\", \"--\"]",
        1,
    );
    let path = temp_registry("corrupt", &text);
    let o = Command::new(env!("CARGO_BIN_EXE_jordpack"))
        .args(["verify", "--only", "packet"])
        .env("JORDPACK_REGISTRY", &path)
        .output()
        .unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 1, "{out}");
    assert!(fails[0].contains("ex-symp(2)"));

    let o = jordpack(&["verify", "--only", "packet"]);
    assert!(o.status.success());
}

#[test]
fn registry_flag_overrides_builtin() {
    let path = temp_registry(
        "tiny",
        "[[label]]\nid = \"one\"\ngl_rank = 1\nphi_type = \"orthogonal\"\ncentral_char = \"00\"\nbase_parity = \"even\"\n",
    );
    let p = path.to_str().unwrap();
    let o = jordpack(&["--registry", p, "packet", "Sp1: one:3"]);
    assert!(o.status.success());
    let o = jordpack(&["--registry", p, "packet", "Sp1: triv:3"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_file(&path).ok();
}
