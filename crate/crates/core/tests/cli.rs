use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn icosa<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icosa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn lines(path: &Path) -> Vec<Value> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[test]
fn search_output_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.jsonl");
    let o = icosa(&[
        "search",
        "--type",
        "3a",
        "--primes",
        "11..31",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let recs = lines(&out);
    assert_eq!(recs[0]["kind"], "header");
    assert_eq!(
        keys(&recs[0]),
        set(&["schema_version", "kind", "config", "seed"])
    );
    assert_eq!(
        keys(&recs[0]["config"]),
        set(&[
            "command",
            "rep_type",
            "primes",
            "disc_exponent",
            "workers",
            "checkpoint",
            "out",
            "certify",
            "seed",
            "factoring_budget"
        ])
    );
    let field_keys = set(&[
        "schema_version",
        "kind",
        "prime",
        "search_type",
        "coeffs",
        "polynomial",
        "poly_disc",
        "field_disc",
        "field_disc_note",
        "index",
        "signature",
        "galois_class",
        "galois_certified",
        "ramification_shape",
        "e_p",
        "rep_type",
        "fingerprint",
        "unit_id",
        "seed",
    ]);
    let summary_keys = set(&[
        "schema_version",
        "kind",
        "prime",
        "search_type",
        "disc_exponent",
        "counts",
        "candidates",
        "accepted",
        "rejected",
        "indeterminate",
        "a5_records",
        "fields",
        "seed",
    ]);
    let fields: Vec<&Value> = recs.iter().filter(|r| r["kind"] == "field").collect();
    let summaries: Vec<&Value> = recs.iter().filter(|r| r["kind"] == "summary").collect();
    assert_eq!(summaries.len(), 2);
    assert_eq!(fields.len() + summaries.len() + 1, recs.len());
    for f in &fields {
        assert_eq!(keys(f), field_keys);
        assert_eq!(f["schema_version"], 1);
    }
    for s in &summaries {
        assert_eq!(keys(s), summary_keys);
    }
    let eleven = fields.iter().find(|f| f["prime"] == 11).unwrap();
    assert_eq!(eleven["polynomial"], "x^5 - x^4 - 4x^3 + 3x^2 + 3x - 1");
    assert_eq!(eleven["field_disc"], "11^4");
    assert_eq!(eleven["galois_class"], "C5");
    assert_eq!(eleven["rep_type"], "none");
    assert_eq!(eleven["e_p"], 5);
}

#[test]
fn same_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.jsonl");
    let run = |workers: &str| {
        let o = icosa(&[
            "search",
            "--type",
            "3b",
            "--primes",
            "7..200",
            "--workers",
            workers,
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        fs::read_to_string(&out).unwrap()
    };
    let a = run("1");
    let b = run("1");
    assert_eq!(a, b);
    let c = run("3");
    let body = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&a), body(&c));
}

#[test]
fn interrupted_search_resumes_to_the_same_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.jsonl");
    let ckpt = dir.path().join("run.ckpt");
    let args = |stop: Option<&str>| {
        let mut v = vec![
            "search",
            "--type",
            "3a",
            "--primes",
            "11..131",
            "--out",
            out.to_str().unwrap(),
            "--checkpoint",
            ckpt.to_str().unwrap(),
        ];
        if let Some(s) = stop {
            v.extend(["--stop-after-prefixes", s]);
        }
        v.into_iter().map(String::from).collect::<Vec<_>>()
    };
    let run = |v: Vec<String>| icosa(&v);

    assert_eq!(run(args(None)).status.code(), Some(0));
    let reference = fs::read(&out).unwrap();
    fs::remove_file(&out).unwrap();
    fs::remove_file(&ckpt).unwrap();

    assert_eq!(run(args(Some("4"))).status.code(), Some(2));
    let partial = fs::read(&out).unwrap();
    assert!(partial.len() < reference.len());
    let mut rounds = 0;
    loop {
        let o = icosa(&[
            "resume",
            "--checkpoint",
            ckpt.to_str().unwrap(),
            "--stop-after-prefixes",
            "7",
        ]);
        match o.status.code() {
            Some(0) => break,
            Some(2) => rounds += 1,
            other => panic!(
                "resume exited with {other:?}: {}",
                String::from_utf8_lossy(&o.stderr)
            ),
        }
        assert!(rounds < 500);
    }
    assert!(rounds > 0);
    assert_eq!(fs::read(&out).unwrap(), reference);
}

#[test]
fn verify_certifies_a_known_icosahedral_quintic() {
    let o = icosa(&[
        "verify",
        "x^5 - x^4 - 780x^3 - 1795x^2 + 3106x + 344",
        "--p",
        "1951",
        "--certify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["field_disc"]["status"], "accept");
    assert_eq!(v["field_disc"]["index"], "136178");
    assert_eq!(v["galois_class"], "A5-certified");
    assert_eq!(v["galois_certified"], true);
    assert_eq!(v["rep_type"], "3a");
    assert_eq!(v["e_p"], 5);
}

#[test]
fn verify_reads_polynomial_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("polys.txt");
    fs::write(
        &file,
        "# generators\nx^5 - x^4 - 4x^3 + 3x^2 + 3x - 1\n\nx^5 - 2\n",
    )
    .unwrap();
    let o = icosa(&["verify", file.to_str().unwrap(), "--p", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let recs: Vec<Value> = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0]["field_disc"]["status"], "accept");
    assert_eq!(recs[1]["field_disc"]["status"], "reject");
}

#[test]
fn table_lists_only_icosahedral_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.jsonl");
    let o = icosa(&[
        "search",
        "--type",
        "3a",
        "--primes",
        "11..61",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = icosa(&["table", "--input", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("conductor  type  polynomial\n"));
    assert!(!text.contains("x^5"), "{text}");
}

#[test]
fn sanity_command_reports_canaries() {
    let o = icosa(&["sanity", "--primes", "11..41", "--type", "3a"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for p in [11, 31, 41] {
        assert!(text.contains(&format!("cyclic {p}: pass")), "{text}");
    }
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let out = dir.path().join("run.jsonl");
    fs::write(
        &config,
        format!(
            r#"{{"type": "3c", "primes": "13..13", "seed": 3, "out": {:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = icosa(&[
        "search",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "9",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let header = &lines(&out)[0];
    assert_eq!(header["config"]["rep_type"], "3c");
    assert_eq!(header["config"]["disc_exponent"], 2);
    assert_eq!(header["seed"], 9);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(icosa(&["search", "--type", "3a"]).status.code(), Some(1));
    assert_eq!(
        icosa(&["search", "--type", "4z", "--primes", "11"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        icosa(&["verify", "x^5 - y", "--p", "11"]).status.code(),
        Some(1)
    );
    assert_eq!(icosa(&["--help"]).status.code(), Some(0));
}
