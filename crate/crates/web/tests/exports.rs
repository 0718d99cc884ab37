use serde_json::Value;
use wpvol_web::{conical_volume, cusp_table, hyperelliptic, MAX_CONES};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn cusp_rows_match_the_known_start() {
    let rows = parse(cusp_table(7).unwrap());
    let v: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["V"].as_str().unwrap()).collect();
    assert_eq!(v, ["1", "1", "5", "61", "1379"]);
    assert_eq!(rows[1]["vol_coeff"], "2");
    assert_eq!(rows[1]["pi_exp"], 2);
    assert!(rows[1]["decimal"].as_str().unwrap().starts_with("19.7392088"));
}

#[test]
fn conical_volume_reports_admissibility() {
    let r = parse(conical_volume("1, 1, 1, 1", false).unwrap());
    assert_eq!(r["admissible"], false);
    assert_eq!(r["V"], "0");
    let r = parse(conical_volume("1/2,1/2,1/2,1/2", false).unwrap());
    assert_eq!(r["admissible"], true);
    assert_eq!(r["t"][0], "1/2");
}

#[test]
fn cone_rules_agree_without_a_large_pair() {
    let t = "1/2,1/3,1,2/3,1/4";
    assert_eq!(conical_volume(t, false).unwrap(), conical_volume(t, true).unwrap());
}

#[test]
fn hyperelliptic_genus_two() {
    let h = parse(hyperelliptic(3).unwrap());
    assert_eq!(h["rows"][0]["g"], 2);
    assert_eq!(h["rows"][0]["v_norm"], "43/16");
    assert_eq!(h["rows"][0]["vol_coeff"], "43/8640");
    assert_eq!(h["ratios"].as_array().unwrap().len(), 1);
}

#[test]
fn bad_input_is_an_error_string() {
    assert!(conical_volume("1,x", false).unwrap_err().contains('x'));
    assert!(conical_volume("1,5/2,1", false).is_err());
    assert!(conical_volume(&vec!["1"; MAX_CONES + 1].join(","), false).is_err());
    assert!(cusp_table(2).is_err());
    assert!(hyperelliptic(1).is_err());
}
