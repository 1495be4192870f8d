use std::process::Command;

use ccc_cli::document::{parse_document, Document};
use ccc_cli::fixtures::FIXTURES;

fn ccc(args: &[&str]) -> (i32, String, String) {
    ccc_env(args, &[])
}

fn ccc_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ccc"));
    cmd.args(args).current_dir(env!("CARGO_MANIFEST_DIR"));
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn fixtures_are_canonical_and_valid() {
    for (name, text) in FIXTURES {
        let doc = parse_document(text.as_bytes()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(&doc.to_canonical(), text, "{name} is not in canonical form");
        let again = parse_document(doc.to_canonical().as_bytes()).unwrap();
        assert_eq!(again, doc);
        match doc {
            Document::StackyFan(d) => {
                d.to_stacky_fan().unwrap_or_else(|e| panic!("{name}: {e}"));
            }
            Document::Morphism(d) => {
                d.to_morphism(&ccc_cli::document::DefaultResolver, None).unwrap_or_else(|e| panic!("{name}: {e}"));
            }
            Document::ConFun(d) => {
                d.to_confun().unwrap_or_else(|e| panic!("{name}: {e}"));
            }
        }
    }
}

#[test]
fn documented_verdicts() {
    let cases: &[(&[&str], i32, &str)] = &[
        (&["classify", "doubled-line.json", "--json"], 0, "{\"is_scheme\":true,\"is_variety\":false}\n"),
        (&["classify", "--fixture", "a2-mod-z2", "--json"], 0, "{\"is_scheme\":false,\"is_variety\":false}\n"),
        (&["classify", "--fixture", "p1xp1", "--json"], 0, "{\"is_scheme\":true,\"is_variety\":true}\n"),
        (&["left-functorial", "a2-mod-z2-morphism.json", "--json"], 0, "{\"verdict\":true}\n"),
        (&["left-functorial", "--fixture", "a1-to-point", "--json"], 1, "{\"verdict\":false}\n"),
        (&["left-functorial", "--fixture", "p1-doubling", "--json"], 0, "{\"verdict\":true}\n"),
        (&["right-functorial", "doubled-line-to-a1.json"], 0, "right-functorial: true\n"),
        (&["right-functorial", "--fixture", "p1-doubling"], 1, "right-functorial: false\n"),
        (&["equal", "half-plane-cofib", "half-plane-p", "--json"], 0, "{\"equal\":true}\n"),
        (&["equal", "circle-delta", "circle-arc"], 1, "equal: false\n"),
        (&["member", "--fixture", "p1", "--base", "0", "--covector", "-1"], 0, "member: true\n"),
        (&["member", "--fixture", "p1", "--base", "1/2", "--covector", "-1"], 1, "member: false\n"),
    ];
    for (args, code, stdout) in cases {
        let (c, out, err) = ccc(args);
        assert_eq!(c, *code, "{args:?}: {err}");
        assert!(out.starts_with(stdout), "{args:?}: {out}");
    }
}

#[test]
fn witness_is_reported() {
    let (c, out, _) = ccc(&["left-functorial", "--fixture", "a1-to-point", "--witness", "--json"]);
    assert_eq!(c, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["witness"], serde_json::json!(["-1"]));
}

#[test]
fn unit_of_p1_is_the_delta() {
    let dir = tempfile::tempdir().unwrap();
    let (c, out, _) = ccc(&["unit-chi", "--fixture", "p1", "--json"]);
    assert_eq!(c, 0);
    let path = dir.path().join("unit.json");
    std::fs::write(&path, out).unwrap();
    let (c, out, err) = ccc(&["equal", path.to_str().unwrap(), "circle-delta"]);
    assert_eq!((c, out.as_str()), (0, "equal: true\n"), "{err}");
}

#[test]
fn convolving_with_the_delta() {
    let dir = tempfile::tempdir().unwrap();
    let (c, out, _) = ccc(&["convolve", "circle-delta", "circle-arc", "--json"]);
    assert_eq!(c, 0);
    let path = dir.path().join("h.json");
    std::fs::write(&path, out).unwrap();
    let (c, _, err) = ccc(&["equal", path.to_str().unwrap(), "circle-arc"]);
    assert_eq!(c, 0, "{err}");
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let full = ccc_cli::fixtures::get("doubled-line").unwrap();
    let truncated = write("truncated.json", &full[..full.len() / 2]);
    let (c, _, err) = ccc(&["classify", &truncated]);
    assert_eq!(c, 2);
    assert!(err.contains("line"), "{err}");

    let unknown = write("unknown.json", &full.replace("\"lattice_rank\"", "\"colour\": \"red\",\n  \"lattice_rank\""));
    assert_eq!(ccc(&["classify", &unknown]).0, 3);

    let bad_beta = write("beta.json", &full.replace("[\n      \"1\",\n      \"-1\"\n    ]", "[\n      \"1\"\n    ]"));
    assert_eq!(ccc(&["classify", &bad_beta]).0, 4);

    let line = write("line.json", &full.replace("\"0\",\n        \"1\"", "\"-1\",\n        \"0\""));
    assert_eq!(ccc(&["classify", &line]).0, 0);

    assert_eq!(ccc(&["classify"]).0, 64);
    assert_eq!(ccc(&["frobnicate"]).0, 64);
    assert_eq!(ccc(&["classify", "--fixture", "nope"]).0, 64);
    assert_eq!(ccc(&["classify", "--fixture", "a2-mod-z2-morphism"]).0, 4);
}

#[test]
fn morphism_files_resolve_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("src.json"), ccc_cli::fixtures::get("p1").unwrap()).unwrap();
    let m = r#"{"schema_version": "1", "source": {"path": "src.json"}, "target": {"fixture": "p1"}, "phi_N": [["3"]], "phi_L": []}"#;
    let p = dir.path().join("m.json");
    std::fs::write(&p, m).unwrap();
    let (c, out, err) = ccc(&["left-functorial", p.to_str().unwrap()]);
    assert_eq!((c, out.as_str()), (0, "left-functorial: true\n"), "{err}");
}

#[test]
fn cell_budget_is_reported() {
    let (c, _, err) = ccc_env(&["equal", "half-plane-cofib", "half-plane-p"], &[("CCC_MAX_CELLS", "3")]);
    assert_eq!(c, 5);
    assert!(err.contains("3"), "{err}");
}

#[test]
fn json_output_is_stable() {
    for args in [
        &["skeleton", "--fixture", "doubled-line", "--json"][..],
        &["factor", "--fixture", "p1-doubling", "--json"][..],
        &["right-functorial", "--fixture", "doubled-line-to-a1", "--json"][..],
    ] {
        let a = ccc(args);
        let b = ccc(args);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
    }
}
