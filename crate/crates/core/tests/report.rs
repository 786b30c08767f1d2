//! The serialized verification report: schema and byte-for-byte determinism.

use quatseq_core::verification::{run_suite, CheckId};
use serde_json::Value;

#[test]
fn json_report_has_the_documented_top_level_shape() {
    let report = run_suite(&[(3, 2), (7, 1)]).unwrap();
    let v: Value = serde_json::to_value(&report).unwrap();
    for key in [
        "grid",
        "omega_convention",
        "entries",
        "typo_resolutions",
        "pass",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["omega_convention"], "+i");
    assert_eq!(v["pass"], true);
    let entry = &v["entries"][0];
    assert_eq!(
        (entry["p"].as_u64(), entry["m"].as_u64()),
        (Some(3), Some(2))
    );
    let check = &entry["checks"][0];
    for key in ["id", "cases", "mismatches"] {
        assert!(check.get(key).is_some(), "check missing {key}");
    }
    let ids: Vec<&str> = entry["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids.len(), CheckId::ALL.len());
    assert!(ids.contains(&"acf.s"));
}

#[test]
fn identical_grids_give_identical_bytes() {
    let a = serde_json::to_string(&run_suite(&[(5, 1), (3, 2)]).unwrap()).unwrap();
    let b = serde_json::to_string(&run_suite(&[(3, 2), (5, 1)]).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn gaussian_values_serialize_as_integer_pairs() {
    let v = serde_json::to_value(quatseq_core::GaussianInt::new(-6, 4)).unwrap();
    assert_eq!(v, serde_json::json!({"re": -6, "im": 4}));
}
