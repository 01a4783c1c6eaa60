use serde_json::Value;
use twinroot_wasm::{root_interval_json, twin_tree_json, weyl_ball_json, MAX_RADIUS};

const A2: &str = r#"{"n":2,"a":[[2,-1],[-1,2]]}"#;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn weyl_ball_of_a2_is_the_symmetric_group() {
    let ball = parse(&weyl_ball_json(A2, 5).unwrap());
    let rows = ball.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let top: Vec<_> = rows.iter().filter(|r| r["length"] == 3).collect();
    assert_eq!(top.len(), 1);
    assert_eq!(top[0]["word"], serde_json::json!([0, 1, 0]));
}

#[test]
fn bare_matrix_is_accepted() {
    let ball = parse(&weyl_ball_json("[[2,-2],[-2,2]]", 3).unwrap());
    // affine A1: 1 + 2 + 2 + 2
    assert_eq!(ball.as_array().unwrap().len(), 7);
}

#[test]
fn interval_between_simple_roots() {
    let v = parse(&root_interval_json(A2, "0", "1").unwrap());
    assert_eq!(v["prenilpotent"], true);
    assert_eq!(v["members"].as_array().unwrap().len(), 3);
    let v = parse(&root_interval_json("[[2,-2],[-2,2]]", "0", "1").unwrap());
    assert_eq!(v["prenilpotent"], false);
    assert!(v["members"].is_null());
}

#[test]
fn twin_tree_valencies() {
    let v = parse(&twin_tree_json("sl2", 3, 1).unwrap());
    for half in ["plus", "minus"] {
        // the fundamental chamber and q neighbours through each of the two panels
        assert_eq!(v[half]["nodes"].as_array().unwrap().len(), 1 + 2 * 3);
    }
}

#[test]
fn bad_input_is_reported() {
    assert!(weyl_ball_json("{", 1).is_err());
    assert!(weyl_ball_json(A2, MAX_RADIUS + 1).is_err());
    assert!(root_interval_json(A2, "0", "7").is_err());
    assert!(root_interval_json(A2, "0", "1,x").is_err());
    assert!(twin_tree_json("sp4", 2, 1).is_err());
    assert!(twin_tree_json("sl2", 6, 1).is_err());
}
