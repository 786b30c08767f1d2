use std::process::{Command, Output};

fn quatseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = quatseq(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn row(csv: &str, first: &str) -> String {
    csv.lines()
        .find(|l| l.split(',').next() == Some(first))
        .unwrap_or_else(|| panic!("no row {first}"))
        .to_string()
}

#[test]
fn gen_raw() {
    assert_eq!(
        stdout(&["gen", "--p", "3", "--m", "2", "--seq", "s", "--format", "raw"]),
        "002231002231002231\n"
    );
    assert_eq!(
        stdout(&["gen", "--p", "5", "--m", "1", "--seq", "v", "--format", "raw"]),
        "01110\n"
    );
}

#[test]
fn gen_csv_and_json_agree() {
    let csv = stdout(&["gen", "--p", "7", "--m", "1", "--seq", "s"]);
    let symbols: String = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "gen", "--p", "7", "--m", "1", "--seq", "s", "--format", "json",
    ]))
    .unwrap();
    let from_json: String = json["symbols"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap().to_string())
        .collect();
    assert_eq!(symbols, from_json);
    assert_eq!(json["period"], 14);
}

#[test]
fn rejects_composite_p() {
    let out = quatseq(&["gen", "--p", "4", "--m", "1", "--seq", "s"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p must be an odd prime"));
}

#[test]
fn acf_rows() {
    let csv = stdout(&["acf", "--p", "3", "--m", "2", "--seq", "s"]);
    assert_eq!(row(&csv, "3"), "3,-6,0,-6,0,PMod2p,true");
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
    let csv = stdout(&["acf", "--p", "5", "--m", "1", "--seq", "s"]);
    assert_eq!(row(&csv, "0"), "0,10,0,10,0,peak,true");
}

#[test]
fn acf_binary_sequences_have_no_prediction() {
    let csv = stdout(&["acf", "--p", "5", "--m", "1", "--seq", "u"]);
    assert_eq!(row(&csv, "0"), "0,5,0,,,,");
}

#[test]
fn acf_respects_max_n() {
    let out = quatseq(&["acf", "--p", "3", "--m", "2", "--seq", "s", "--max-n", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn raw_only_for_gen() {
    let out = quatseq(&["cycnum", "--p", "5", "--m", "1", "--format", "raw"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ccf_rows_match() {
    for (a, b) in [("s1", "s2"), ("s2", "s1"), ("s1", "s1"), ("s2", "s2")] {
        let csv = stdout(&["ccf", "--p", "3", "--m", "2", "--a", a, "--b", b]);
        assert!(
            csv.lines().skip(1).all(|l| l.ends_with(",true")),
            "{a},{b}:\n{csv}"
        );
    }
    let csv = stdout(&["ccf", "--p", "3", "--m", "2", "--a", "s1", "--b", "s2"]);
    assert!(row(&csv, "2").starts_with("2,-3,0,-3,0,"));
}

#[test]
fn cycnum_p5() {
    let csv = stdout(&["cycnum", "--p", "5", "--m", "1"]);
    assert_eq!(
        csv,
        "i,j,brute,closed,match\n0,0,0,0,true\n0,1,1,1,true\n1,0,1,1,true\n1,1,1,1,true\n"
    );
}

#[test]
fn classes_listing() {
    let csv = stdout(&["classes", "--p", "3", "--m", "2"]);
    assert!(csv.lines().any(|l| l == "D,18,0,3,1 7 13"));
    let csv = stdout(&["classes", "--p", "3", "--m", "2", "--level", "1"]);
    assert!(csv.lines().any(|l| l == "D,3,0,1,1"));
    let out = quatseq(&["classes", "--p", "3", "--m", "2", "--level", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        quatseq(&["verify", "--p", "3", "--m", "2"]).status.code(),
        Some(0)
    );
    assert_eq!(
        quatseq(&["verify", "--p", "9", "--m", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_json_report() {
    let out = stdout(&["verify", "--p", "5,7", "--m", "1", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["omega_convention"], "+i");
    assert_eq!(report["entries"].as_array().unwrap().len(), 2);
}
