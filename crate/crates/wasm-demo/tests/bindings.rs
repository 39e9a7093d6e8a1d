use serde_json::Value;
use unionscope_wasm_demo::{count_ball_json, estimate_union_json, sample_disc_json};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn count_matches_cli_example() {
    assert_eq!(count_ball_json("2", "0", 0, "0+0L,0+0L").unwrap(), r#"{"count":"13"}"#);
    assert!(count_ball_json("2", "0", 0, "zero").is_err());
}

#[test]
fn exact_disc_samples_stay_inside() {
    let v = parse(sample_disc_json("1", "-2", "3", 200, 0.2, 5).unwrap());
    assert_eq!(v["branch"], "exact");
    assert_eq!(v["count"], "29");
    for p in v["points"].as_array().unwrap() {
        let (x, y) = (p[0].as_i64().unwrap() - 1, p[1].as_i64().unwrap() + 2);
        assert!(x * x + y * y <= 9);
    }
}

#[test]
fn free_disc_uses_rejection() {
    let v = parse(sample_disc_json("0.5", "0.25", "40", 50, 0.2, 5).unwrap());
    assert_eq!(v["branch"], "rejection");
    assert_eq!(v["points"].as_array().unwrap().len(), 50);
    assert!(sample_disc_json("0.5", "0", "3", 5, 0.2, 5).is_err());
}

#[test]
fn union_estimate_is_seeded_and_close() {
    let inst = r#"{"sets":[
      {"kind":"ball","dim":2,"radius":5,"center":[[0,0],[0,0]]},
      {"kind":"ball","dim":2,"radius":4,"center":[[4,0],[1,0]]}]}"#;
    let a = estimate_union_json(inst, 0.25, 3, 4000.0).unwrap();
    assert_eq!(a, estimate_union_json(inst, 0.25, 3, 4000.0).unwrap());
    let v = parse(a);
    let exact = v["exact"].as_f64().unwrap();
    let est = v["estimate"]["value"].as_f64().unwrap();
    assert!((est - exact).abs() / exact < 0.25, "{est} vs {exact}");
    assert!(estimate_union_json("{}", 0.25, 3, 4000.0).is_err());
}
