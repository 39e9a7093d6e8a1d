use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unionscope")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("unionscope-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const EXPLICIT: &str = r#"{"sets":[
  {"kind":"explicit","elements":[1,2,3,4,5,6]},
  {"kind":"explicit","elements":[4,5,6,7,8]},
  {"kind":"explicit","elements":[8,9,10,[1,2]]}],"seed":3}"#;

#[test]
fn schedule_prints_constants() {
    let o = run(&["schedule", "--m", "16", "--epsilon", "0.25", "--gamma", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["round_bound"].as_u64().unwrap() >= 1);
    assert_eq!(v["schema"], "unionscope/1");
}

#[test]
fn count_ball_example() {
    let o = run(&[
        "count-ball", "--dim", "2", "--radius", "2", "--lambda", "0", "--l", "0", "--center", "0+0L,0+0L",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), r#"{"count":"13"}"#);
}

#[test]
fn version_flag() {
    let o = run(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "unionscope/1");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["schedule", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
}

#[test]
fn invalid_parameters_exit_two() {
    let o = run(&["schedule", "--m", "16", "--epsilon", "1.5", "--gamma", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = scratch("bad.json", r#"{"sets":[{"kind":"explicit","elements":[1]}]}"#);
    assert_eq!(run(&["estimate", "--instance", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn seeded_estimate_is_reproducible() {
    let inst = scratch("explicit.json", EXPLICIT);
    let args = [
        "estimate", "--instance", inst.to_str().unwrap(), "--target-h1", "2000", "--target-f6", "500",
        "--trials", "3", "--check",
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a), stdout(&run(&args)));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["exact"], "11");
    assert_eq!(v["guaranteed"], false);
}

#[test]
fn full_scale_hits_the_cap() {
    let inst = scratch("cap.json", EXPLICIT);
    let o = run(&["estimate", "--instance", inst.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--target-h1"));
}

#[test]
fn transcript_has_one_line_per_round() {
    let inst = scratch("tr.json", EXPLICIT);
    let tr = inst.with_file_name("tr.jsonl");
    let o = run(&[
        "estimate", "--instance", inst.to_str().unwrap(), "--target-h1", "2000", "--target-f6", "500",
        "--transcript", tr.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rounds = v["estimate"]["rounds"].as_u64().unwrap();
    let lines = std::fs::read_to_string(&tr).unwrap().lines().count() as u64;
    assert_eq!(lines, rounds);
}

#[test]
fn ball_union_reports_branches() {
    let inst = scratch(
        "balls.json",
        r#"{"sets":[
          {"kind":"ball","dim":2,"radius":3,"center":[[0,0],[0,0]]},
          {"kind":"ball","dim":2,"radius":3,"center":[[2,0],[1,0]]}]}"#,
    );
    let o = run(&[
        "ball-union", "--instance", inst.to_str().unwrap(), "--target-h1", "2000", "--target-f6", "500", "--check",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["branches"][0], "exact");
    let exp = scratch("mixed.json", EXPLICIT);
    assert_eq!(run(&["ball-union", "--instance", exp.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn sample_ball_exact_probabilities() {
    let o = run(&["sample-ball", "--dim", "2", "--radius", "2", "--center", "0,0", "--n", "5", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 5);
    assert!(v["probabilities"].as_array().unwrap().iter().all(|p| p == "1/13"));
}

#[test]
fn oracle_commands() {
    let o = run(&["oracle", "enumerate", "--center", "0.5,0.5", "--radius", "1"]);
    assert_eq!(stdout(&o).lines().count(), 4);
    let inst = scratch("oracle.json", EXPLICIT);
    let o = run(&["oracle", "union", "--instance", inst.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), r#"{"exact":"11"}"#);
    let o = run(&["oracle", "coverage", "--instance", inst.to_str().unwrap(), "--k", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["opt"]["value"], "10");
    let o = run(&["oracle", "generate", "--m", "4", "--universe", "50", "--max-set", "10"]);
    let gen = scratch("gen.json", &stdout(&o));
    assert_eq!(run(&["oracle", "union", "--instance", gen.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn coverage_command() {
    let inst = scratch("cov.json", EXPLICIT);
    let o = run(&[
        "coverage", "--instance", inst.to_str().unwrap(), "--k", "2", "--target-h1", "2000", "--target-f6", "500",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["indices"][0], 0);
}

#[test]
fn bench_writes_csv() {
    let o = run(&[
        "bench", "--m", "4,8", "--trials", "1", "--universe", "300", "--target-h1", "1000", "--target-f6", "300",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "m,epsilon,c1,rounds,queries,wall_ms,rel_error");
    assert_eq!(lines.count(), 2);
}
